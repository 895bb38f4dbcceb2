"""Seeded instance generators for the verification suites.

Every generator takes a ``seed`` and returns the same instances on every run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional

from .catalog import block_window, integer_window, transposition_window
from .covers import Cover, Development, k_refines, validate_cover
from .dyadic import HALF, INF, ONE, ZERO
from .gauge import ExtGauge
from .horizon import Horizon, HorizonFamily
from .invariance import equiregularity_check, saturate_cover
from .space import Bornology, GroupAction, SpaceInstance, enumerate_group, is_homeomorphism, windowed_action
from .tunnels import TunnelSystem

DYADIC_STEPS = (Fraction(1, 4), HALF, Fraction(3, 4), ONE, Fraction(3, 2), Fraction(2))


def _subset(rng: random.Random, pool, lo=1, hi=None) -> frozenset:
    pool = sorted(pool)
    hi = len(pool) if hi is None else min(hi, len(pool))
    return frozenset(rng.sample(pool, rng.randint(min(lo, hi), hi)))


def random_cover(rng: random.Random, points, members: int, max_size: Optional[int] = None) -> Cover:
    """Random sets whose union is ``points``."""
    points = frozenset(points)
    sets = [_subset(rng, points, 1, max_size) for _ in range(members)]
    missing = points - frozenset().union(*sets)
    for p in sorted(missing):
        i = rng.randrange(len(sets))
        sets[i] = sets[i] | {p}
    return Cover(tuple(sets))


# -- developments ---------------------------------------------------------------------


def random_development(rng: random.Random, n: Optional[int] = None, depth: Optional[int] = None,
                       max_members: int = 12) -> Development:
    """Arbitrary cover sequences with at most ``max_members`` distinct members overall."""
    n = n or rng.randint(2, 8)
    depth = depth or rng.randint(1, 4)
    while True:
        levels = [random_cover(rng, range(n), rng.randint(1, 4)) for _ in range(depth)]
        members = {s for c in levels for s in c}
        if len(members) <= max_members:
            return Development(tuple(levels))


def _partition_below(rng: random.Random, prev: Cover, n: int) -> Cover:
    """Partition whose blocks each sit inside one member of ``prev``."""
    owner = {}
    for p in range(n):
        owner[p] = rng.choice([i for i, s in enumerate(prev) if p in s])
    blocks: dict = {}
    for p, i in owner.items():
        blocks.setdefault((i, rng.randrange(2)), set()).add(p)
    return Cover(tuple(frozenset(b) for b in blocks.values()))


def random_three_development(rng: random.Random, n: Optional[int] = None, depth: Optional[int] = None) -> Development:
    """A 3-development ending in singletons.

    Deeper levels are sampled covers accepted when they 3-refine the level above,
    with a partition refinement as fallback.
    """
    n = n or rng.randint(2, 8)
    depth = depth or rng.randint(2, 4)
    levels = [random_cover(rng, range(n), rng.randint(1, 4))]
    for _ in range(depth - 2):
        prev = levels[-1]
        for _ in range(30):
            cand = Cover(tuple(_subset(rng, s, 1, max(1, len(s) // 2 + 1)) for s in prev for _ in range(2)))
            if validate_cover(SpaceInstance(n, tuple(frozenset([p]) for p in range(n))), cand) and k_refines(cand, prev, 3):
                break
        else:
            cand = _partition_below(rng, prev, n)
        levels.append(cand)
    levels.append(Cover(tuple(frozenset([p]) for p in range(n))))
    return Development(tuple(levels))


# -- gauges and tunnels ---------------------------------------------------------------


def random_partition(rng: random.Random, n: int, blocks: Optional[int] = None) -> list:
    blocks = blocks or rng.randint(1, n)
    owner = [rng.randrange(blocks) for _ in range(n)]
    for b in range(min(blocks, n)):
        owner[b] = b
    return [frozenset(p for p in range(n) if owner[p] == b) for b in range(blocks) if b in owner]


def random_crevasse_gauge(rng: random.Random, n: int, blocks: Optional[int] = None) -> ExtGauge:
    """Shortest-path gauge of random dyadic edge weights inside random blocks; ``inf`` across blocks."""
    part = random_partition(rng, n, blocks)
    d = [[ZERO if i == j else INF for j in range(n)] for i in range(n)]
    for b in part:
        pts = sorted(b)
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                d[x][y] = d[y][x] = rng.choice(DYADIC_STEPS)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return ExtGauge(tuple(tuple(r) for r in d))


def random_tunnels(rng: random.Random, rho: ExtGauge, extra: int = 2) -> TunnelSystem:
    """Random spanning tree over the crevasses plus a few extra tunnels."""
    from .gauge import crevasse_partition

    blocks = [sorted(b) for b in crevasse_partition(rho).blocks]
    order = list(range(len(blocks)))
    rng.shuffle(order)
    triples = []
    for i in range(1, len(order)):
        a, b = order[i], order[rng.randrange(i)]
        triples.append((rng.choice(blocks[a]), rng.choice(blocks[b]), rng.choice(DYADIC_STEPS)))
    if len(blocks) > 1:
        for _ in range(rng.randint(0, extra)):
            a, b = rng.sample(range(len(blocks)), 2)
            triples.append((rng.choice(blocks[a]), rng.choice(blocks[b]), rng.choice(DYADIC_STEPS)))
    merged = {}
    for a, b, v in triples:
        key = (min(a, b), max(a, b))
        merged[key] = min(v, merged.get(key, v))
    return TunnelSystem.from_lengths(merged)


@dataclass(frozen=True)
class GaugeTunnelCase:
    rho: ExtGauge
    tunnels: TunnelSystem


def gauge_tunnel_corpus(count: int = 200, seed: int = 36) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 8)
        rho = random_crevasse_gauge(rng, n)
        out.append(GaugeTunnelCase(rho, random_tunnels(rng, rho)))
    return out


# -- topologies with symmetry ---------------------------------------------------------


def random_base_topology(rng: random.Random, b: int, style: str) -> tuple:
    """Basis on ``b`` points: ``partition``, ``discrete``, ``indiscrete`` or ``random`` (T0-ish)."""
    pts = range(b)
    if style == "discrete":
        return tuple(frozenset([p]) for p in pts)
    if style == "indiscrete":
        return (frozenset(pts),)
    if style == "partition":
        return tuple(random_partition(rng, b))
    sets = [frozenset(pts)] + [_subset(rng, pts, 1, max(1, b - 1)) for _ in range(rng.randint(1, 3))]
    return tuple(sets)


def _automorphisms(basis: tuple, b: int) -> list:
    inst = SpaceInstance(b, basis)
    return [g for g in permutations(range(b)) if is_homeomorphism(inst, g) is None]


@dataclass(frozen=True)
class GroupCase:
    """A space with group generators; ``kind`` records how it was built."""

    inst: SpaceInstance
    group: GroupAction
    kind: str


def random_group_case(rng: random.Random, styles=("partition", "discrete", "random", "indiscrete"),
                      cap: int = 64, max_points: int = 8) -> GroupCase:
    """``k`` copies of a random base space, acted on by copy shifts and base automorphisms."""
    k = rng.randint(1, 4)
    b = rng.randint(1, max(1, max_points // k))
    style = rng.choice(styles)
    base = random_base_topology(rng, b, style)
    n = k * b

    def pt(c, p):
        return c * b + p

    basis = tuple(frozenset(pt(c, p) for p in s) for c in range(k) for s in base)
    inst = SpaceInstance(n, basis)
    gens = []
    if k > 1:
        gens.append(tuple(pt((c + 1) % k, p) for c in range(k) for p in range(b)))
        if k > 2 and rng.random() < 0.5:
            swap = {0: 1, 1: 0}
            gens.append(tuple(pt(swap.get(c, c), p) for c in range(k) for p in range(b)))
    autos = _automorphisms(base, b) if b <= 5 else [tuple(range(b))]
    if len(autos) > 1 and rng.random() < 0.7:
        a = rng.choice(autos[1:])
        c0 = rng.randrange(k)
        gens.append(tuple(pt(c, a[p] if c == c0 else p) for c in range(k) for p in range(b)))
    G = enumerate_group(inst, gens, cap)
    return GroupCase(inst, G, f"{k}x{b}-{style}")


def group_corpus(count: int, seed: int, **kw) -> list:
    rng = random.Random(seed)
    return [random_group_case(rng, **kw) for _ in range(count)]


def equiregular_corpus(count: int = 100, seed: int = 51, cap: int = 64) -> list:
    """Group cases that pass the equiregularity check, each with a random invariant cover."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        case = random_group_case(rng, cap=cap)
        v, _ = equiregularity_check(case.inst, case.group)
        if not v:
            continue
        opens = list(case.inst.basis)
        u = saturate_cover(case.group, [rng.choice([s for s in opens if x in s]) for x in range(case.inst.n)])
        out.append((case, u))
    return out


# -- Lemma 4.3 instances --------------------------------------------------------------


def copies_gauge_case(rng: random.Random, max_points: int = 8) -> tuple:
    """Copies of a crevasse gauge permuted cyclically, with random tunnels."""
    k = rng.randint(1, 4)
    b = rng.randint(1, max(1, max_points // k))
    base = random_crevasse_gauge(rng, b)
    n = k * b
    rho = ExtGauge.from_function(n, lambda x, y: base(x % b, y % b) if x // b == y // b else INF)
    inst = SpaceInstance(n, tuple(frozenset([p]) for p in range(n)))
    gens = [tuple((x + b) % n for x in range(n))] if k > 1 else []
    G = enumerate_group(inst, gens, 64)
    return inst, G, rho, random_tunnels(rng, rho)


def ladder_window(m: int, lengths: tuple, within=HALF) -> Horizon:
    """Pairs ``(i, 0), (i, 1)`` for ``|i| <= m`` at distance ``within``; partial translations.

    Tunnels join ``(i, 1)`` to ``(i + 1, 0)`` with length ``lengths[i mod p]``, so
    they are invariant only after saturation.
    """
    labels = tuple((i, j) for i in range(-m, m + 1) for j in (0, 1))
    n = len(labels)
    idx = {l: k for k, l in enumerate(labels)}
    rho = ExtGauge.from_function(n, lambda x, y: ZERO if x == y else (within if labels[x][0] == labels[y][0] else INF))
    front = frozenset(k for k, (i, _) in enumerate(labels) if abs(i) == m)
    born = Bornology((frozenset(range(n)) - front,))
    inst = SpaceInstance(n, tuple(frozenset([k]) for k in range(n)), born, labels, front)

    def shift(t):
        return tuple(idx.get((i + t, j)) for i, j in labels)

    G = windowed_action(inst, [shift(t) for t in range(-2 * m, 2 * m + 1)], [shift(1)])
    p = len(lengths)
    T = TunnelSystem(tuple((idx[(i, 1)], idx[(i + 1, 0)], lengths[i % p]) for i in range(-m, m)))
    return Horizon(m, inst, G, {"rho": rho, "tunnels": T})


def ladder_family(lengths: tuple, horizons=(3, 4, 5)) -> HorizonFamily:
    hs = tuple(ladder_window(m, lengths) for m in horizons)
    return HorizonFamily(f"ladder{[str(v) for v in lengths]}", hs, ({(0, 0)}, {(0, 0), (1, 1)}),
                         (HALF, ONE, Fraction(2), Fraction(4)))


def lemma_4_3_corpus(count: int = 100, seed: int = 43) -> list:
    rng = random.Random(seed)
    return [copies_gauge_case(rng) for _ in range(count)]


def lemma_4_3_families(count: int = 12, seed: int = 44) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = rng.randint(1, 3)
        out.append(ladder_family(tuple(rng.choice(DYADIC_STEPS[1:]) for _ in range(p))))
    return out


# -- exhaustions ----------------------------------------------------------------------


def random_exhaustion(rng: random.Random) -> tuple:
    """A random space with a closed chain ``D_1 <= int(D_2) <= ... <= D_N = X``."""
    n = rng.randint(3, 8)
    basis = list(random_base_topology(rng, n, rng.choice(["partition", "discrete", "random"])))
    basis += [frozenset([p]) for p in rng.sample(range(n), rng.randint(0, n))]
    inst = SpaceInstance(n, tuple(basis))
    chain = [inst.closure(inst.min_nbhd(rng.randrange(n)))]
    for _ in range(rng.randint(1, 3)):
        extra = frozenset(rng.sample(range(n), rng.randint(0, 2)))
        opened = frozenset().union(*(inst.min_nbhd(p) for p in chain[-1] | extra))
        nxt = inst.closure(opened)
        if nxt != chain[-1]:
            chain.append(nxt)
    if chain[-1] != inst.points:
        chain.append(inst.points)
    born = Bornology((chain[-2],)) if len(chain) > 1 and rng.random() < 0.5 else Bornology.everything()
    return SpaceInstance(n, tuple(basis), born), tuple(chain)


def exhaustion_corpus(count: int = 50, seed: int = 52) -> list:
    rng = random.Random(seed)
    return [random_exhaustion(rng) for _ in range(count)]


# -- Theorem 3.7 grid -----------------------------------------------------------------


@dataclass(frozen=True)
class GridCase:
    family: HorizonFamily
    rho_proper: bool
    tunnels_proper: bool

    @property
    def quadrant(self) -> str:
        return f"rho {'proper' if self.rho_proper else 'improper'} / T {'proper' if self.tunnels_proper else 'improper'}"


def theorem_3_7_grid() -> list:
    """Block families in all four quadrants of (rho proper?, T proper?)."""
    out = []
    sizes = ((2,), (1, 2), (3,), (2, 1, 3))
    withins = (HALF, Fraction(1, 4), ONE)
    horizon_sets = ((4, 5, 6), (5, 6, 7))
    for grow in (False, True):
        for pattern in ("chain", "star", "flat"):
            for s in sizes:
                for w in withins[: 2 if pattern == "flat" else 3]:
                    hs = horizon_sets[len(out) % 2]
                    fam = block_family_for_grid(hs, s, w, pattern, grow)
                    out.append(GridCase(fam, not grow, pattern != "flat"))
    return out


def block_family_for_grid(horizons, sizes, within, pattern, grow) -> HorizonFamily:
    hs = tuple(block_window(m, sizes, within, pattern, grow) for m in horizons)
    name = f"blocks-{pattern}-{'grow' if grow else 'fixed'}-{list(sizes)}-{within}"
    radii = (HALF, ONE, Fraction(3, 2), Fraction(5, 2), Fraction(3))
    return HorizonFamily(name, hs, ({(0, 0)}, {(0, 0), (1, 0)}), radii)


# -- coherence corpora ----------------------------------------------------------------


@dataclass(frozen=True)
class CoherenceCase:
    """Single instance (``inst``/``group``) or horizon family, with a name."""

    name: str
    inst: Optional[SpaceInstance] = None
    group: Optional[GroupAction] = None
    family: Optional[HorizonFamily] = None
    extra: dict = field(default_factory=dict, compare=False)


def shift_orbit_case(m: int) -> CoherenceCase:
    from .catalog import shift_compactification

    inst, G = shift_compactification(m)
    return CoherenceCase(f"compactified-shift-{m}", inst, G)


def coherence_corpus(count: int = 60, seed: int = 11) -> list:
    """Random group cases of every style plus the compactified shifts."""
    rng = random.Random(seed)
    cases = [CoherenceCase(f"random-{i}-{c.kind}", c.inst, c.group)
             for i, c in enumerate(random_group_case(rng, max_points=7) for _ in range(count))]
    cases += [shift_orbit_case(m) for m in (2, 3)]
    return cases


def ladder_topology_window(m: int, base: tuple, b: int) -> Horizon:
    """``Z``-window times a base space, translated in the first coordinate."""
    labels = tuple((i, j) for i in range(-m, m + 1) for j in range(b))
    n = len(labels)
    idx = {l: k for k, l in enumerate(labels)}
    basis = tuple(frozenset(idx[(i, j)] for j in s) for i in range(-m, m + 1) for s in base)
    front = frozenset(k for k, (i, _) in enumerate(labels) if abs(i) == m)
    inst = SpaceInstance(n, basis, Bornology((frozenset(range(n)) - front,)), labels, front)

    def shift(t):
        return tuple(idx.get((i + t, j)) for i, j in labels)

    G = windowed_action(inst, [shift(t) for t in range(-2 * m, 2 * m + 1)], [shift(1)])
    return Horizon(m, inst, G)


def proper_family_corpus(seed: int = 13, count: int = 4) -> list:
    """Horizon families for the proper pipeline: both outcomes of near-properness."""
    rng = random.Random(seed)
    out = [
        CoherenceCase("integer-window", family=HorizonFamily(
            "integer-window", tuple(integer_window(m) for m in (3, 4, 5)), ({0}, {0, 1}), (HALF, ONE, Fraction(2)))),
        CoherenceCase("transpositions", family=HorizonFamily(
            "transpositions", tuple(transposition_window(m) for m in (3, 4, 5)), ({0, 1},), (HALF, ONE))),
    ]
    for i in range(count):
        b = rng.randint(1, 2)
        base = random_base_topology(rng, b, rng.choice(["partition", "discrete", "indiscrete"]))
        hs = tuple(ladder_topology_window(m, base, b) for m in (2, 3, 4))
        out.append(CoherenceCase(f"ladder-topology-{i}", family=HorizonFamily(
            f"ladder-topology-{i}", hs, ({(0, 0)},), (HALF, ONE, Fraction(2)))))
    return out
