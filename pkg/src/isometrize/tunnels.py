"""Tunnel systems bridging crevasses, and the finite-valued tunnel distance."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Iterable, Optional, Sequence

from .dyadic import INF, ONE, ZERO, format_value, to_value
from .errors import HypothesisFail, InvalidTunnels, NotInvariantGauge
from .gauge import CrevassePartition, ExtGauge, crevasse_partition, gauge_axioms_check, is_proper_gauge
from .space import GroupAction, SpaceInstance, image
from .verdict import Status, Verdict, combine, tri


@dataclass(frozen=True)
class TunnelSystem:
    """Unordered pairs with positive lengths, stored as sorted ``(a, b, length)`` triples."""

    triples: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for a, b, length in self.triples:
            key = (min(a, b), max(a, b))
            length = to_value(length)
            if key in merged and merged[key] != length:
                raise InvalidTunnels(f"tunnel {key} given two lengths")
            merged[key] = length
        object.__setattr__(self, "triples", tuple((a, b, merged[(a, b)]) for a, b in sorted(merged)))

    @classmethod
    def from_lengths(cls, lengths: dict) -> "TunnelSystem":
        return cls(tuple((a, b, v) for (a, b), v in lengths.items()))

    @property
    def tunnels(self) -> frozenset:
        return frozenset(frozenset((a, b)) for a, b, _ in self.triples)

    @property
    def lengths(self) -> dict:
        return {(a, b): v for a, b, v in self.triples}

    def length(self, x: int, y: int):
        return self.lengths.get((min(x, y), max(x, y)))

    @property
    def lambda0(self):
        """Least tunnel length; ``inf`` for the empty system."""
        return min((v for _, _, v in self.triples), default=INF)

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def as_dict(self):
        return {"tunnels": [[a, b, format_value(v)] for a, b, v in self.triples], "lambda0": self.lambda0}


def _blocks(rho_or_partition) -> CrevassePartition:
    if isinstance(rho_or_partition, CrevassePartition):
        return rho_or_partition
    if isinstance(rho_or_partition, ExtGauge):
        return crevasse_partition(rho_or_partition)
    blocks = tuple(frozenset(b) for b in rho_or_partition)
    return CrevassePartition(blocks, tuple(min(b) for b in blocks))


def validate_tunnel_system(rho: ExtGauge, T: TunnelSystem) -> Verdict:
    part = crevasse_partition(rho)
    inside = next(((a, b) for a, b, _ in T if part.block_of(a) == part.block_of(b)), None)
    c1 = Verdict.of(inside is None, inside, "tunnel joins a crevasse to itself")
    # connectivity of the block graph
    parent = list(range(len(part.blocks)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b, _ in T:
        ra, rb = find(part.block_of(a)), find(part.block_of(b))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(i) for i in range(len(part.blocks))})
    if len(roots) > 1:
        stray = next(i for i in range(len(part.blocks)) if find(i) != roots[0])
        c2 = Verdict.fail((part.representatives[0], part.representatives[stray]), "blocks not joined by tunnels")
    else:
        c2 = Verdict.ok()
    bad_len = next(((a, b, v) for a, b, v in T if not v > 0 or v == INF), None)
    c3 = Verdict.of(bad_len is None, bad_len, "tunnel length must be positive and finite")
    total = combine([c1, c2, c3])
    return Verdict(total.status, total.witness, note=total.note,
                   details={"no_tunnel_in_crevasse": c1, "connected": c2, "positive_lengths": c3, "lambda0": T.lambda0})


def tunnel_distance(rho: ExtGauge, T: TunnelSystem) -> ExtGauge:
    """Shortest paths over within-crevasse ``rho`` edges and tunnel edges."""
    v = validate_tunnel_system(rho, T)
    if not v:
        raise InvalidTunnels(f"invalid tunnel system: {v.note}", witness=v.witness)
    n = rho.n
    adj = [[] for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if x != y and rho(x, y) != INF:
                adj[x].append((y, rho(x, y)))
    for a, b, length in T:
        adj[a].append((b, length))
        adj[b].append((a, length))
    rows = []
    for src in range(n):
        dist = [INF] * n
        dist[src] = ZERO
        tie = count()
        heap = [(ZERO, next(tie), src)]
        while heap:
            d, _, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for w, c in adj[u]:
                nd = d + c
                if nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, next(tie), w))
        rows.append(tuple(dist))
    return ExtGauge(tuple(rows))


def _radii_up_to(limit, *gauges) -> list:
    vals = {v for g in gauges for v in g.finite_values() if 0 < v <= limit}
    if limit != INF:
        vals.add(limit)
    return sorted(vals)


def verify_theorem_3_6(rho: ExtGauge, T: TunnelSystem, sigma: Optional[ExtGauge] = None) -> Verdict:
    sigma = sigma if sigma is not None else tunnel_distance(rho, T)
    n, lam0 = rho.n, T.lambda0
    pairs = [(x, y) for x in range(n) for y in range(n)]
    above = next(((x, y) for x, y in pairs if sigma(x, y) > rho(x, y)), None)
    le = Verdict.of(above is None, above, "sigma exceeds rho")
    diff = next(((x, y) for x, y in pairs if min(rho(x, y), sigma(x, y)) < lam0 and rho(x, y) != sigma(x, y)), None)
    eq = Verdict.of(diff is None, diff, "sigma and rho differ below lambda0")
    balls = []
    radii = _radii_up_to(lam0, rho, sigma)
    for x in range(n):
        for eps in radii:
            if rho.ball(x, eps) != sigma.ball(x, eps):
                balls.append(Verdict.fail((x, eps, "open"), "balls differ"))
            if eps < lam0 and rho.closed_ball(x, eps) != sigma.closed_ball(x, eps):
                balls.append(Verdict.fail((x, eps, "just above"), "balls differ"))
    bv = combine(balls)
    ax = gauge_axioms_check(sigma)
    total = combine([le, eq, bv, ax])
    return Verdict(total.status, total.witness, note=total.note,
                   details={"sigma_le_rho": le, "equal_below_lambda0": eq, "ball_equality": bv, "sigma_axioms": ax})


def tunnel_neighborhood(T: TunnelSystem, a: Iterable[int], eps) -> frozenset:
    """Points joined to ``a`` by a tunnel shorter than ``eps``."""
    a = frozenset(a)
    out = set()
    for x, y, length in T:
        if length < eps:
            if x in a:
                out.add(y)
            if y in a:
                out.add(x)
    return frozenset(out)


def tunnel_thresholds(T: TunnelSystem) -> list:
    """Radii at which ``T(A, eps)`` can change, plus one beyond the longest tunnel."""
    vals = sorted({v for _, _, v in T})
    return vals + [vals[-1] + 1] if vals else [ONE]


def is_proper_tunnel_system(T: TunnelSystem, inst: SpaceInstance) -> Verdict:
    """``cl(T(A, eps))`` bounded for each bornology generator ``A`` and threshold ``eps``."""
    if inst.bornology.full:
        return Verdict.ok("full bornology")
    out = []
    for a in inst.bornology.generators:
        for eps in tunnel_thresholds(T):
            s = tunnel_neighborhood(T, a, eps)
            status = tri(inst.bounded_closure(s))
            if status is not Status.PASS:
                out.append(Verdict(status, {"A": sorted(a), "eps": eps, "closure": sorted(inst.closure(s))}))
                if status is Status.FAIL:
                    return combine(out)
    return combine(out)


def make_chain_tunnels(partition, representatives: Optional[Sequence[int]] = None) -> TunnelSystem:
    part = _blocks(partition)
    reps = list(representatives) if representatives is not None else list(part.representatives)
    return TunnelSystem(tuple((reps[i], reps[i + 1], ONE) for i in range(len(reps) - 1)))


def make_star_tunnels(partition, representatives: Optional[Sequence[int]] = None) -> TunnelSystem:
    """Hub ``reps[0]`` joined to ``reps[i]`` by a tunnel of length ``i``."""
    part = _blocks(partition)
    reps = list(representatives) if representatives is not None else list(part.representatives)
    return TunnelSystem(tuple((reps[0], reps[i], Fraction(i)) for i in range(1, len(reps))))


def group_tunnel_neighborhood(G: GroupAction, T: TunnelSystem, a: Iterable[int], eps) -> tuple:
    """``T(GA, eps)`` and whether every image of ``a`` was fully defined."""
    ga, total = set(), True
    for g in G:
        img, ok = image(g, a)
        ga |= img
        total = total and ok
    return tunnel_neighborhood(T, ga, eps), total


def saturation_hypothesis(G: GroupAction, T: TunnelSystem, inst: SpaceInstance) -> Verdict:
    """``cl(T(GA, eps))`` bounded for bornology generators ``A`` at every threshold."""
    if inst.bornology.full:
        return Verdict.ok("full bornology")
    out = []
    for a in inst.bornology.generators:
        for eps in tunnel_thresholds(T):
            s, total = group_tunnel_neighborhood(G, T, a, eps)
            b = inst.bounded_closure(s)
            if b is True and not total:
                b = None
            status = tri(b)
            if status is not Status.PASS:
                out.append(Verdict(status, {"A": sorted(a), "eps": eps}))
                if status is Status.FAIL:
                    return combine(out)
    return combine(out)


def g_saturate_tunnels(G: GroupAction, rho: ExtGauge, T: TunnelSystem, inst: Optional[SpaceInstance] = None) -> TunnelSystem:
    """Orbit of the tunnels under ``G`` with orbit-minimum lengths.

    Raises :class:`NotInvariantGauge` when ``rho`` is not ``G``-invariant and,
    when an instance is given, :class:`HypothesisFail` when ``cl(T(GA, eps))``
    is unbounded for some generator ``A``.
    """
    from .invariance import is_invariant_gauge

    inv = is_invariant_gauge(G, rho)
    if inv.failed:
        raise NotInvariantGauge("gauge is not invariant under the group", witness=inv.witness)
    if inst is not None:
        hyp = saturation_hypothesis(G, T, inst)
        if hyp.failed:
            raise HypothesisFail("cl(T(GA, eps)) is unbounded", witness=hyp.witness)
    best: dict = {}
    for a, b, length in T:
        for g in G:
            ga, gb = g[a], g[b]
            if ga is None or gb is None:
                continue
            key = (min(ga, gb), max(ga, gb))
            if key not in best or length < best[key]:
                best[key] = length
    return TunnelSystem.from_lengths(best)


def is_invariant_tunnel_system(G: GroupAction, T: TunnelSystem) -> Verdict:
    lengths = T.lengths
    for a, b, length in T:
        for g in G:
            ga, gb = g[a], g[b]
            if ga is None or gb is None:
                continue
            key = (min(ga, gb), max(ga, gb))
            if lengths.get(key) != length:
                return Verdict.fail({"g": list(g), "tunnel": [a, b]}, "image tunnel missing or of another length",
                                    qualified=G.qualified)
    return Verdict.ok(qualified=G.qualified)


def covering_inclusion(rho: ExtGauge, T: TunnelSystem, sigma: ExtGauge, inst: SpaceInstance, max_n: int = 4) -> Verdict:
    """``N_s(x,(n+1)l0) <= N_r(C,(n+2)l0) | N_r(T(C,(n+1)l0), l0)`` with ``C = cl(N_s(x, n l0))``."""
    lam0 = T.lambda0
    if lam0 == INF:
        return Verdict.ok("no tunnels: sigma equals rho")
    out = []
    for x in range(rho.n):
        for n in range(1, max_n + 1):
            c = inst.closure(sigma.ball(x, n * lam0))
            lhs = sigma.ball(x, (n + 1) * lam0)
            rhs = rho.set_ball(c, (n + 2) * lam0) | rho.set_ball(tunnel_neighborhood(T, c, (n + 1) * lam0), lam0)
            if not lhs <= rhs:
                out.append(Verdict.fail({"x": x, "n": n, "y": min(lhs - rhs)}, "sigma ball escapes the cover"))
    return combine(out)


def converse_facts(rho: ExtGauge, T: TunnelSystem, sigma: ExtGauge) -> Verdict:
    """``N_rho(x, e) <= N_sigma(x, e)`` and ``T(A, e) <= N_sigma(A, e)`` at threshold radii."""
    out = []
    radii = sorted({v for g in (rho, sigma) for v in g.finite_values() if v > 0} | set(tunnel_thresholds(T)))
    for x in range(rho.n):
        for eps in radii:
            if not rho.ball(x, eps) <= sigma.ball(x, eps):
                out.append(Verdict.fail({"x": x, "eps": eps}, "rho ball escapes sigma ball"))
    for x in range(rho.n):
        for eps in tunnel_thresholds(T):
            if not tunnel_neighborhood(T, {x}, eps) <= sigma.set_ball({x}, eps):
                out.append(Verdict.fail({"A": [x], "eps": eps}, "tunnel neighbourhood escapes sigma ball"))
    return combine(out)


def verify_theorem_3_7(rho: ExtGauge, T: TunnelSystem, sigma: Optional[ExtGauge], inst: SpaceInstance, max_n: int = 4) -> Verdict:
    """Three properness verdicts, their biconditional, and the proof's set inclusions.

    ``details["biconditional"]`` compares ``sigma proper`` with ``rho proper and
    T proper``; it is indeterminate when any of the three is.
    """
    sigma = sigma if sigma is not None else tunnel_distance(rho, T)
    sp = is_proper_gauge(sigma, inst)
    rp = is_proper_gauge(rho, inst)
    tp = is_proper_tunnel_system(T, inst)
    statuses = [v.status for v in (sp, rp, tp)]
    if Status.INDETERMINATE in statuses:
        bic = Verdict.unknown(note="a properness verdict is indeterminate at this horizon")
    else:
        lhs = sp.status is Status.PASS
        rhs = rp.status is Status.PASS and tp.status is Status.PASS
        bic = Verdict.of(lhs == rhs, {"sigma": sp.status.value, "rho": rp.status.value, "tunnels": tp.status.value})
    inc = covering_inclusion(rho, T, sigma, inst, max_n)
    conv = converse_facts(rho, T, sigma)
    total = combine([bic, inc, conv])
    return Verdict(total.status, total.witness, note=total.note, details={
        "sigma_proper": sp, "rho_proper": rp, "tunnels_proper": tp,
        "biconditional": bic, "covering_inclusion": inc, "converse": conv,
    })
