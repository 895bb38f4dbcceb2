"""Extended gauges, the Alexandroff-Urysohn chain distance, and gauge combinators.

All arithmetic is exact: values are dyadic :class:`~fractions.Fraction`\\ s or
``INF``.
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import count, product
from typing import Iterable, Optional, Sequence

from .covers import Development, is_development, is_k_development, is_proper_cover, iterated_star, star
from .dyadic import INF, ONE, ZERO, format_value, pow2, to_value
from .errors import BudgetExceeded, NotDevelopment, NotSeparatingWarning, SearchBudget
from .space import SpaceInstance
from .verdict import Status, Verdict, combine, tri


@dataclass(frozen=True)
class ExtGauge:
    """Symmetric matrix of extended non-negative dyadic distances."""

    values: tuple

    def __post_init__(self):
        rows = tuple(tuple(to_value(v) for v in row) for row in self.values)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("gauge matrix must be square")
        object.__setattr__(self, "values", rows)

    @classmethod
    def from_function(cls, n: int, f) -> "ExtGauge":
        return cls(tuple(tuple(f(i, j) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, x: int, y: int):
        return self.values[x][y]

    def is_finite(self) -> bool:
        return all(v != INF for row in self.values for v in row)

    def ball(self, x: int, eps) -> frozenset:
        """Open ball ``{y : d(x, y) < eps}``."""
        return frozenset(y for y in range(self.n) if self.values[x][y] < eps)

    def closed_ball(self, x: int, eps) -> frozenset:
        return frozenset(y for y in range(self.n) if self.values[x][y] <= eps)

    def set_ball(self, a: Iterable[int], eps) -> frozenset:
        out = set()
        for x in a:
            out |= self.ball(x, eps)
        return frozenset(out)

    def finite_values(self, x: Optional[int] = None) -> list:
        rows = self.values if x is None else (self.values[x],)
        return sorted({v for row in rows for v in row if v != INF})

    def ball_family(self, x: int) -> list:
        """Every distinct open ball ``N(x, eps)``, ``eps`` in ``(0, inf)``.

        Balls are constant between consecutive matrix values, so the family is
        the zero set plus the closed ball at each finite value (the last one,
        reached beyond the largest finite value, is the crevasse of ``x``).
        Returned as ``(label, set)`` pairs where the label is the value ``v``
        such that the ball is ``N(x, eps)`` for ``eps`` just above ``v``.
        """
        out = [(ZERO, self.closed_ball(x, ZERO))]
        for v in self.finite_values(x):
            if v > 0:
                out.append((v, self.closed_ball(x, v)))
        return out

    def crevasse(self, x: int) -> frozenset:
        return self.ball(x, INF)

    def matrix_strings(self) -> list:
        return [[format_value(v) for v in row] for row in self.values]

    def as_dict(self):
        return {"n": self.n, "matrix": self.matrix_strings()}


def discrete_gauge(n: int, value=ONE) -> ExtGauge:
    return ExtGauge.from_function(n, lambda i, j: ZERO if i == j else value)


def zero_gauge(n: int) -> ExtGauge:
    return ExtGauge.from_function(n, lambda i, j: ZERO)


@dataclass(frozen=True)
class AuWeights:
    """Deduplicated members of the union of levels, each with weight ``2**-(deepest level)``."""

    members: tuple
    levels: tuple

    @property
    def weights(self) -> tuple:
        return tuple(pow2(-n) for n in self.levels)

    def weight(self, s) -> Fraction:
        return pow2(-self.levels[self.members.index(frozenset(s))])


def au_weights(dev: Development) -> AuWeights:
    deepest: dict = {}
    for n, cover in enumerate(dev.levels, start=1):
        for s in cover:
            deepest[s] = n
    members = tuple(sorted(deepest, key=lambda s: (len(s), sorted(s))))
    return AuWeights(members, tuple(deepest[s] for s in members))


def _points(dev: Development, n: Optional[int]) -> int:
    if n is not None:
        return n
    support = frozenset().union(*(c.support for c in dev.levels))
    return max(support) + 1 if support else 0


def au_distance(dev, n: Optional[int] = None, check: bool = True) -> ExtGauge:
    """Infimum of weighted chain lengths, via node-weighted shortest paths.

    Nodes are the deduplicated cover members, edges join intersecting members,
    and a chain costs the sum of its members' weights.  Sources are the
    members containing ``x``; ``d(x, y)`` is the cheapest node containing ``y``.
    """
    dev = dev if isinstance(dev, Development) else Development(tuple(dev))
    if check:
        v = is_development(dev)
        if not v:
            raise NotDevelopment("levels violate the development basis condition", witness=v.witness)
    npts = _points(dev, n)
    w = au_weights(dev)
    members, weights = w.members, w.weights
    adj = [[j for j, t in enumerate(members) if j != i and s & t] for i, s in enumerate(members)]
    holders = [[i for i, s in enumerate(members) if p in s] for p in range(npts)]
    rows = []
    for x in range(npts):
        dist = [INF] * len(members)
        heap = []
        tie = count()
        for i in holders[x]:
            dist[i] = weights[i]
            heapq.heappush(heap, (weights[i], next(tie), i))
        while heap:
            d, _, i = heapq.heappop(heap)
            if d > dist[i]:
                continue
            for j in adj[i]:
                nd = d + weights[j]
                if nd < dist[j]:
                    dist[j] = nd
                    heapq.heappush(heap, (nd, next(tie), j))
        row = []
        for y in range(npts):
            if y == x:
                row.append(ZERO)
            else:
                row.append(min((dist[i] for i in holders[y]), default=INF))
        rows.append(tuple(row))
    return ExtGauge(tuple(rows))


def au_oracle(dev, max_links: int, n: Optional[int] = None, budget: int = 2_000_000) -> ExtGauge:
    """Exhaustive minimum over chains with at most ``max_links`` links.

    Depth-first enumeration from every source member.  A partial chain is
    discarded only when another chain already reached the same member with no
    more links and no greater length, which cannot lose a minimum.
    """
    dev = dev if isinstance(dev, Development) else Development(tuple(dev))
    npts = _points(dev, n)
    w = au_weights(dev)
    members, weights = w.members, w.weights
    expanded = 0
    rows = []
    for x in range(npts):
        best = [INF] * npts
        seen: dict = {}
        stack = [(i, 1, weights[i]) for i, s in enumerate(members) if x in s]
        while stack:
            i, links, length = stack.pop()
            expanded += 1
            if expanded > budget:
                raise BudgetExceeded(f"chain enumeration exceeded {budget} nodes")
            records = seen.setdefault(i, [])
            if any(l0 <= links and d0 <= length for l0, d0 in records):
                continue
            records.append((links, length))
            for y in members[i]:
                if length < best[y]:
                    best[y] = length
            if links == max_links:
                continue
            for j, t in enumerate(members):
                if members[i] & t:
                    stack.append((j, links + 1, length + weights[j]))
        best[x] = ZERO
        rows.append(tuple(best))
    return ExtGauge(tuple(rows))


def verify_sandwich(rho: ExtGauge, dev: Development) -> Verdict:
    """``N(x, 2^-n) <= Star(x, U_n) <= N(x, 2^-n]`` for every point and level."""
    left, right = [], []
    for lvl in range(1, dev.depth + 1):
        r = pow2(-lvl)
        for x in range(rho.n):
            st = star({x}, dev[lvl])
            b = rho.ball(x, r)
            if not b <= st:
                left.append(Verdict.fail((x, lvl, min(b - st)), "open ball escapes the star"))
            cb = rho.closed_ball(x, r)
            if not st <= cb:
                right.append(Verdict.fail((x, lvl, min(st - cb)), "star escapes the closed ball"))
    lv, rv = combine(left), combine(right)
    return Verdict(combine([lv, rv]).status, lv.witness or rv.witness, details={"left": lv, "right": rv})


def decapitate(rho: ExtGauge) -> ExtGauge:
    return ExtGauge.from_function(rho.n, lambda i, j: min(rho(i, j), ONE))


def max_combine(gauges: Sequence[ExtGauge]) -> ExtGauge:
    gauges = list(gauges)
    if not gauges:
        raise ValueError("max_combine needs at least one gauge")
    n = gauges[0].n
    if any(g.n != n for g in gauges):
        raise ValueError("gauges live on different point sets")
    return ExtGauge.from_function(n, lambda i, j: max(g(i, j) for g in gauges))


def is_separating(gauges: Sequence[ExtGauge]) -> Verdict:
    gauges = list(gauges)
    n = gauges[0].n if gauges else 0
    for x in range(n):
        for y in range(x + 1, n):
            if all(g(x, y) == 0 for g in gauges):
                return Verdict.fail((x, y), "no member separates the pair")
    return Verdict.ok()


def sup_combine(gauges: Sequence[ExtGauge]) -> ExtGauge:
    """``max_i 2^-i g_i`` over decapitated inputs, ``i`` counted from 1."""
    gauges = list(gauges)
    if not gauges:
        raise ValueError("sup_combine needs at least one gauge")
    for g in gauges:
        if any(v > 1 for row in g.values for v in row):
            raise ValueError("sup_combine expects decapitated gauges")
    n = gauges[0].n
    out = ExtGauge.from_function(
        n, lambda x, y: max(pow2(-i) * g(x, y) for i, g in enumerate(gauges, start=1))
    )
    sep = is_separating([out])
    if not sep:
        warnings.warn(f"sup_combine output does not separate {sep.witness}", NotSeparatingWarning, stacklevel=2)
    return out


@dataclass(frozen=True)
class CrevassePartition:
    blocks: tuple
    representatives: tuple

    def block_of(self, x: int) -> int:
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise KeyError(x)

    def as_dict(self):
        return {"blocks": [sorted(b) for b in self.blocks], "representatives": list(self.representatives)}


def crevasse_partition(rho: ExtGauge) -> CrevassePartition:
    blocks, seen = [], set()
    for x in range(rho.n):
        if x in seen:
            continue
        b = rho.crevasse(x)
        seen |= b
        blocks.append(b)
    return CrevassePartition(tuple(blocks), tuple(min(b) for b in blocks))


def gauge_axioms_check(rho: ExtGauge, inst: Optional[SpaceInstance] = None, metric: bool = False) -> Verdict:
    """Conditions 1-4 of an (extended) gauge, plus separation when ``metric``."""
    n = rho.n
    checks = {}
    bad = next((x for x in range(n) if rho(x, x) != 0), None)
    checks["zero_diagonal"] = Verdict.of(bad is None, bad)
    neg = next(((x, y) for x, y in product(range(n), repeat=2) if rho(x, y) < 0), None)
    checks["nonnegative"] = Verdict.of(neg is None, neg)
    asym = next(((x, y) for x, y in product(range(n), repeat=2) if rho(x, y) != rho(y, x)), None)
    checks["symmetry"] = Verdict.of(asym is None, asym)
    tri_bad = None
    for x, y, z in product(range(n), repeat=3):
        if rho(x, z) > rho(x, y) + rho(y, z):
            tri_bad = (x, y, z)
            break
    checks["triangle"] = Verdict.of(tri_bad is None, tri_bad)
    if inst is not None:
        closed = None
        for x in range(n):
            for _, b in rho.ball_family(x):
                if not inst.is_open(b):
                    closed = (x, sorted(b))
                    break
            if closed:
                break
        checks["open_balls"] = Verdict.of(closed is None, closed)
    if metric:
        checks["separation"] = is_separating([rho])
    total = combine(checks.values())
    return Verdict(total.status, total.witness, details=checks)


def is_proper_gauge(rho: ExtGauge, inst: SpaceInstance, points: Optional[Iterable[int]] = None) -> Verdict:
    """``cl(N(x, eps))`` bounded for every ``x`` and every threshold radius."""
    out = []
    pts = range(rho.n) if points is None else points
    for x in pts:
        for v, b in rho.ball_family(x):
            status = tri(inst.bounded_closure(b))
            if status is not Status.PASS:
                out.append(Verdict(status, {"x": x, "above": v, "closure": sorted(inst.closure(b))}))
                if status is Status.FAIL:
                    return combine(out)
    return combine(out)


def set_ball_closure_bounded(rho: ExtGauge, inst: SpaceInstance, a: Iterable[int], eps) -> Optional[bool]:
    return inst.bounded_closure(rho.set_ball(a, eps))


def verify_lemma_3_4(rho: ExtGauge, dev: Development, samples: Optional[Iterable] = None, max_n: int = 3) -> Verdict:
    """``Star(A, U_1) <= N(A, 1)`` on sampled ``A``; ``N(x, n/2) <= Star^(2^n - 1)(x, U_1)``."""
    u1 = dev[1]
    if samples is None:
        samples = [frozenset([x]) for x in range(rho.n)]
        samples += [frozenset([x, y]) for x in range(rho.n) for y in range(x + 1, rho.n)]
    one = []
    for a in samples:
        a = frozenset(a)
        st, nb = star(a, u1), rho.set_ball(a, ONE)
        if not st <= nb:
            one.append(Verdict.fail((sorted(a), min(st - nb)), "Star(A, U1) escapes N(A, 1)"))
    two = []
    for n in range(1, max_n + 1):
        for x in range(rho.n):
            b = rho.ball(x, Fraction(n, 2))
            it = iterated_star({x}, u1, 2 ** n - 1)
            if not b <= it:
                two.append(Verdict.fail((x, n, min(b - it)), "ball escapes the iterated star"))
    v1, v2 = combine(one), combine(two)
    return Verdict(combine([v1, v2]).status, v1.witness or v2.witness, details={"star_in_ball": v1, "ball_in_iterated_star": v2})


def verify_theorem_3_3(dev: Development, inst: SpaceInstance, rho: Optional[ExtGauge] = None) -> Verdict:
    """A 3-development has a proper first level exactly when its chain distance is proper."""
    rho = rho or au_distance(dev, inst.n, check=False)
    dev_ok = combine([is_development(dev), is_k_development(dev, 3)])
    cover, gauge = is_proper_cover(inst, dev[1]), is_proper_gauge(rho, inst)
    undecided = Status.INDETERMINATE in (cover.status, gauge.status)
    if undecided:
        agree = Verdict.unknown({"cover": cover.status.value, "gauge": gauge.status.value})
    else:
        agree = Verdict.of(cover.status == gauge.status,
                           {"cover": cover.status.value, "gauge": gauge.status.value}, "properness disagrees")
    total = combine([dev_ok, agree])
    return Verdict(total.status, total.witness, note=total.note,
                   details={"development": dev_ok, "cover_proper": cover, "gauge_proper": gauge, "biconditional": agree})


@dataclass(frozen=True)
class GaugeFamily:
    gauges: tuple
    tags: tuple = ()

    def __post_init__(self):
        gauges = tuple(self.gauges)
        tags = tuple(self.tags) if self.tags else tuple({} for _ in gauges)
        object.__setattr__(self, "gauges", gauges)
        object.__setattr__(self, "tags", tags)

    def __iter__(self):
        return iter(self.gauges)

    def __len__(self):
        return len(self.gauges)

    def separating(self) -> Verdict:
        return is_separating(self.gauges)

    def as_dict(self):
        return {
            "gauges": [dict(g.as_dict(), **{k: v for k, v in t.items()}) for g, t in zip(self.gauges, self.tags)],
            "separating": self.separating(),
        }


def _min_neighbourhood(gauges: Sequence[ExtGauge], x: int, depth: int) -> frozenset:
    if len(gauges) > depth:
        raise SearchBudget(f"intersection depth {len(gauges)} exceeds bound {depth}")
    out = None
    for g in gauges:
        z = g.closed_ball(x, ZERO)
        out = z if out is None else out & z
    return out


def same_topology(p: Sequence[ExtGauge], q: Sequence[ExtGauge], depth: Optional[int] = None) -> Verdict:
    """Whether two gauge families determine the same topology.

    Each ball of one family around ``x`` must contain a finite intersection of
    balls of the other family around ``x``.  The smallest such intersection
    uses each gauge's smallest ball, its zero set, so depth ``len(family)``
    suffices.
    """
    p, q = list(p), list(q)
    n = p[0].n
    for first, second, tag in ((p, q, "P-ball"), (q, p, "Q-ball")):
        bound = depth if depth is not None else len(second)
        for x in range(n):
            m = _min_neighbourhood(second, x, bound)
            for g_index, g in enumerate(first):
                for v, b in g.ball_family(x):
                    if not m <= b:
                        return Verdict.fail({"x": x, "side": tag, "gauge": g_index, "above": v, "missing": min(m - b)})
    return Verdict.ok()
