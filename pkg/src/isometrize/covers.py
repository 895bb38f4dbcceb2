"""Stars, chains, components and refinement predicates for open covers."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .space import SpaceInstance, set_key
from .verdict import Verdict, combine, tri


@dataclass(frozen=True)
class Cover:
    """An open cover; members are deduplicated by extension and kept in (size, lex) order."""

    sets: tuple

    def __post_init__(self):
        members = {frozenset(s) for s in self.sets}
        members.discard(frozenset())
        object.__setattr__(self, "sets", tuple(sorted(members, key=set_key)))

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)

    def __contains__(self, s):
        return frozenset(s) in set(self.sets)

    @property
    def support(self) -> frozenset:
        return frozenset().union(*self.sets) if self.sets else frozenset()


def as_cover(u) -> Cover:
    return u if isinstance(u, Cover) else Cover(tuple(u))


def validate_cover(inst: SpaceInstance, u) -> Verdict:
    u = as_cover(u)
    for s in u:
        if not inst.is_open(s):
            return Verdict.fail(sorted(s), "member is not open")
    missing = inst.points - u.support
    if missing:
        return Verdict.fail(min(missing), "point not covered")
    return Verdict.ok()


@dataclass(frozen=True)
class Development:
    """Finite truncation ``U_1 .. U_N`` of a sequence of covers."""

    levels: tuple

    def __post_init__(self):
        levels = tuple(as_cover(c) for c in self.levels)
        if not levels:
            raise ValueError("a development needs at least one level")
        object.__setattr__(self, "levels", levels)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, n: int) -> Cover:
        """1-based level access, matching the usual indexing of developments."""
        return self.levels[n - 1]

    @property
    def depth(self) -> int:
        return len(self.levels)

    def extend(self, cover) -> "Development":
        return Development(self.levels + (as_cover(cover),))

    def odd_levels(self) -> "Development":
        return Development(self.levels[::2])


def star(a: Iterable[int], u) -> frozenset:
    a = frozenset(a)
    out = set()
    for s in as_cover(u):
        if s & a:
            out |= s
    return frozenset(out)


def iterated_star(a: Iterable[int], u, n: int) -> frozenset:
    if n < 1:
        raise ValueError("n must be at least 1")
    u = as_cover(u)
    cur = frozenset(a)
    for _ in range(n):
        nxt = star(cur, u)
        if nxt == cur:
            break
        cur = nxt
    return cur


def chain_components(u) -> list:
    """Point sets of the connected components of the intersection graph of ``u``."""
    sets = list(as_cover(u))
    parent = list(range(len(sets)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner = {}
    for i, s in enumerate(sets):
        for p in s:
            if p in owner:
                a, b = find(owner[p]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[p] = i
    groups: dict = {}
    for i, s in enumerate(sets):
        groups.setdefault(find(i), set()).update(s)
    return sorted((frozenset(g) for g in groups.values()), key=lambda s: min(s))


def component_of(x: int, u) -> frozenset:
    for c in chain_components(u):
        if x in c:
            return c
    return frozenset()


def refines(v, u) -> bool:
    u = as_cover(u).sets
    return all(any(s <= t for t in u) for s in as_cover(v))


def is_star_refinement(v, u, points: Iterable[int] = None) -> Verdict:
    v, u = as_cover(v), as_cover(u)
    pts = sorted(points if points is not None else v.support)
    for x in pts:
        st = star({x}, v)
        if not any(st <= t for t in u):
            return Verdict.fail(x, "Star(x, V) lies in no member of U")
    return Verdict.ok()


def k_refines(v, u, k: int) -> Verdict:
    """Every ``v``-chain with at most ``k`` links lies inside a member of ``u``.

    A failing prefix is itself a chain with fewer links, so the search only
    extends chains whose running union still fits some member of ``u``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    vs, us = list(as_cover(v)), list(as_cover(u))

    def fits(s):
        return any(s <= t for t in us)

    best_depth: dict = {}
    stack = []
    for i, s in enumerate(vs):
        if not fits(s):
            return Verdict.fail((s,), "single link escapes every member")
        stack.append(((i,), s))
    while stack:
        chain, union = stack.pop()
        if len(chain) >= k:
            continue
        key = (chain[-1], union)
        if best_depth.get(key, k + 1) <= len(chain):
            continue
        best_depth[key] = len(chain)
        last = vs[chain[-1]]
        for j, t in enumerate(vs):
            if not (last & t):
                continue
            nu = union | t
            nchain = chain + (j,)
            if not fits(nu):
                return Verdict.fail(tuple(vs[i] for i in nchain), f"chain of {len(nchain)} links escapes")
            stack.append((nchain, nu))
    return Verdict.ok()


def is_k_development(dev: Development, k: int) -> Verdict:
    for n in range(1, dev.depth):
        r = k_refines(dev[n + 1], dev[n], k)
        if not r:
            return Verdict.fail((n + 1, r.witness), f"level {n + 1} does not {k}-refine level {n}")
    return Verdict.ok()


def is_development(levels) -> Verdict:
    """Truncated basis condition for the stars ``Star(x, U_n)``."""
    dev = levels if isinstance(levels, Development) else Development(tuple(levels))
    pts = sorted(frozenset().union(*(c.support for c in dev.levels)))
    stars = [{x: star({x}, c) for x in pts} for c in dev.levels]
    N = dev.depth
    checked = set()
    for m, n in product(range(N), repeat=2):
        for x in pts:
            for y in pts:
                inter = stars[m][x] & stars[n][y]
                if inter in checked:
                    continue
                checked.add(inter)
                for z in inter:
                    if not any(stars[r][z] <= inter for r in range(N)):
                        return Verdict.fail((x, y, m + 1, n + 1, z), "no level r with Star(z, U_r) inside the intersection")
    return Verdict.ok()


def is_proper_cover(inst: SpaceInstance, u) -> Verdict:
    """For every bornology generator ``A``, ``cl(Star(A, U))`` is bounded."""
    u = as_cover(u)
    if inst.bornology.full:
        return Verdict.ok("full bornology")
    gens = inst.bornology.generators
    out = []
    for a in gens:
        c = inst.closure(star(a, u))
        status = tri(inst.is_bounded(c))
        out.append(Verdict(status, (sorted(a), sorted(c)) if status.value != "PASS" else None))
    return combine(out)
