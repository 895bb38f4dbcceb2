"""Finitely presented spaces, bornologies, group actions and orbit quotients.

Points are the integers ``0..n-1``; subsets are ``frozenset``s.  A topology is
presented by a basis; the constructor closes the given family under pairwise
intersection so that "open" always means "union of basis sets".

Windowed instances (one horizon of an infinite family) carry a ``frontier``:
the points whose neighbourhoods continue past the window.  Group elements of
windowed instances may be partial maps, stored with ``None`` where the image
leaves the window.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import NotHomeomorphism, RejectedInstance
from .verdict import Verdict, combine

PointSet = frozenset
Perm = tuple  # tuple[Optional[int], ...]


def pset(it: Iterable[int] = ()) -> frozenset:
    return frozenset(it)


def set_key(s: frozenset):
    """Deterministic (size, lexicographic) order on point sets."""
    return (len(s), tuple(sorted(s)))


@dataclass(frozen=True)
class Bornology:
    """Declared family of bounded sets.

    ``bounded(A)`` holds iff ``full`` or ``A`` lies inside some generator.  The
    family is an ideal (closed under finite unions as well as subsets) exactly
    when the generators are directed; :meth:`is_ideal` reports that.
    """

    generators: tuple = ()
    full: bool = False

    def __post_init__(self):
        gens = tuple(sorted({frozenset(g) for g in self.generators}, key=set_key))
        object.__setattr__(self, "generators", gens)

    @classmethod
    def everything(cls):
        return cls((), True)

    def bounded(self, a: Iterable[int]) -> bool:
        if self.full:
            return True
        a = frozenset(a)
        if not a:
            return True
        return any(a <= g for g in self.generators)

    def is_ideal(self) -> bool:
        if self.full:
            return True
        return all(self.bounded(a | b) for a, b in combinations(self.generators, 2))


@dataclass(frozen=True)
class SpaceInstance:
    n: int
    basis: tuple
    bornology: Bornology = field(default_factory=Bornology.everything)
    labels: Optional[tuple] = None
    frontier: frozenset = frozenset()

    def __post_init__(self):
        given = tuple(frozenset(b) for b in self.basis)
        for b in given:
            if not b:
                raise RejectedInstance("empty basis set")
            if not all(isinstance(p, int) and 0 <= p < self.n for p in b):
                raise RejectedInstance(f"basis set {sorted(b)} has points outside 0..{self.n - 1}")
        object.__setattr__(self, "given_basis", given)
        object.__setattr__(self, "basis", _intersection_closure(given))
        object.__setattr__(self, "frontier", frozenset(self.frontier))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.n or len(set(labels)) != self.n:
                raise RejectedInstance("labels must be distinct and one per point")
            object.__setattr__(self, "labels", labels)

    # -- basic set structure -------------------------------------------------

    @property
    def points(self) -> frozenset:
        return frozenset(range(self.n))

    def label(self, p: int):
        return self.labels[p] if self.labels is not None else p

    def index(self, label) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    def basis_at(self, x: int) -> list:
        """Basis sets containing ``x``, smallest first."""
        return [b for b in self.basis if x in b]

    def interior(self, s: Iterable[int]) -> frozenset:
        s = frozenset(s)
        out = set()
        for b in self.basis:
            if b <= s:
                out |= b
        return frozenset(out)

    def is_open(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        return self.interior(s) == s

    def closure(self, a: Iterable[int]) -> frozenset:
        a = frozenset(a)
        outside = set()
        for b in self.basis:
            if not (b & a):
                outside |= b
        return self.points - outside

    def is_closed(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        return self.closure(s) == s

    def min_nbhd(self, x: int) -> frozenset:
        out = self.points
        for b in self.basis:
            if x in b:
                out &= b
        return out

    def is_discrete(self) -> bool:
        return all(frozenset([x]) in self.basis for x in range(self.n))

    # -- boundedness -----------------------------------------------------------

    def is_bounded(self, s: Iterable[int]) -> Optional[bool]:
        """Three-valued boundedness.

        ``None`` when the set reaches the frontier and its in-window part is
        bounded: whatever lies past the window decides.
        """
        if self.bornology.full:
            return True
        s = frozenset(s)
        inner = s - self.frontier
        if not self.bornology.bounded(inner):
            return False
        if s & self.frontier:
            return None
        return True

    def bounded_closure(self, s: Iterable[int]) -> Optional[bool]:
        return self.is_bounded(self.closure(s))

    @property
    def windowed(self) -> bool:
        return bool(self.frontier)

    @property
    def interior_points(self) -> list:
        return [x for x in range(self.n) if x not in self.frontier]


def _intersection_closure(sets: Sequence[frozenset]) -> tuple:
    family = set(sets)
    frontier = list(family)
    while frontier:
        new = []
        for a in frontier:
            for b in list(family):
                c = a & b
                if c and c not in family:
                    family.add(c)
                    new.append(c)
        frontier = new
    return tuple(sorted(family, key=set_key))


def closure(inst: SpaceInstance, a: Iterable[int]) -> frozenset:
    """Complement of the union of all basis sets disjoint from ``a``."""
    return inst.closure(a)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    discrete: bool
    covers: bool
    duplicates: tuple
    full_bornology: bool
    bornology_ideal: bool
    bornology_within_points: bool
    basis_was_closed: bool

    def as_dict(self):
        return {
            "valid": self.valid,
            "discrete": self.discrete,
            "covers": self.covers,
            "duplicates": [sorted(d) for d in self.duplicates],
            "full_bornology": self.full_bornology,
            "bornology_ideal": self.bornology_ideal,
            "bornology_within_points": self.bornology_within_points,
            "basis_was_closed": self.basis_was_closed,
        }


def validate_instance(inst: SpaceInstance) -> ValidationReport:
    """Structural checks; raises :class:`RejectedInstance` on the first fatal rule."""
    covered = frozenset().union(*inst.given_basis) if inst.given_basis else frozenset()
    if covered != inst.points:
        missing = min(inst.points - covered)
        raise RejectedInstance(f"basis does not cover point {missing}", witness=missing)
    seen, dups = set(), []
    for b in inst.given_basis:
        if b in seen:
            dups.append(b)
        seen.add(b)
    inside = all(g <= inst.points for g in inst.bornology.generators)
    if not inside:
        raise RejectedInstance("bornology generator has points outside the space")
    return ValidationReport(
        valid=True,
        discrete=inst.is_discrete(),
        covers=True,
        duplicates=tuple(dups),
        full_bornology=inst.bornology.full,
        bornology_ideal=inst.bornology.is_ideal(),
        bornology_within_points=inside,
        basis_was_closed=len(set(inst.given_basis)) == len(inst.basis),
    )


# -- maps ----------------------------------------------------------------------


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_total(g: Perm) -> bool:
    return all(v is not None for v in g)


def compose(a: Perm, b: Perm) -> Perm:
    """``a after b``; undefined wherever either step is."""
    return tuple(None if v is None else a[v] for v in b)


def inverse(g: Perm) -> Perm:
    out = [None] * len(g)
    for i, v in enumerate(g):
        if v is not None:
            out[v] = i
    return tuple(out)


def image(g: Perm, s: Iterable[int]) -> tuple:
    """``(defined image, total)`` of a point set."""
    out, total = set(), True
    for p in s:
        v = g[p]
        if v is None:
            total = False
        else:
            out.add(v)
    return frozenset(out), total


def apply(g: Perm, s: Iterable[int]) -> frozenset:
    return image(g, s)[0]


def is_homeomorphism(inst: SpaceInstance, g: Perm) -> Optional[frozenset]:
    """Return ``None`` if ``g`` and its inverse map basis sets to opens, else the bad basis set.

    A partial map of a window loses whatever would enter from outside it, so an
    image is accepted when some open set lies between it and its union with the
    frontier and the points the map does not reach.
    """
    ginv = inverse(g)
    for h in (g, ginv):
        slack = inst.frontier | (inst.points - frozenset(v for v in h if v is not None))
        for b in inst.basis:
            img = apply(h, b)
            if not img:
                continue
            if not img <= inst.interior(img | slack):
                return b
    return None


@dataclass(frozen=True)
class GroupAction:
    n: int
    generators: tuple
    elements: tuple
    cap: int
    complete: bool
    windowed: bool = False

    @property
    def qualified(self) -> bool:
        return not self.complete or self.windowed

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @classmethod
    def trivial(cls, n: int):
        e = identity(n)
        return cls(n, (e,), (e,), 1, True)


def _check_perm(g, n):
    if len(g) != n:
        raise RejectedInstance(f"generator has length {len(g)}, expected {n}")
    vals = [v for v in g if v is not None]
    if len(set(vals)) != len(vals) or not all(isinstance(v, int) and 0 <= v < n for v in vals):
        raise RejectedInstance(f"generator {list(g)} is not a permutation of 0..{n - 1}")


def enumerate_group(inst: SpaceInstance, gens: Iterable[Sequence[int]], cap: int = 512) -> GroupAction:
    """Breadth-first closure of ``gens`` under composition and inverse, up to ``cap`` elements."""
    n = inst.n
    gens = [tuple(g) for g in gens]
    for g in gens:
        _check_perm(g, n)
        if not is_total(g):
            raise RejectedInstance("partial maps are only allowed in windowed families")
        bad = is_homeomorphism(inst, g)
        if bad is not None:
            raise NotHomeomorphism(f"image of basis set {sorted(bad)} is not open", witness=(g, bad))
    steps = []
    for g in gens:
        for h in (g, inverse(g)):
            if h not in steps:
                steps.append(h)
    e = identity(n)
    seen = {e}
    order = [e]
    queue = deque([e])
    complete = True
    while queue:
        cur = queue.popleft()
        for s in steps:
            nxt = compose(s, cur)
            if nxt in seen:
                continue
            if len(order) >= cap:
                complete = False
                queue.clear()
                break
            seen.add(nxt)
            order.append(nxt)
            queue.append(nxt)
    return GroupAction(n, tuple(gens) or (e,), tuple(order), cap, complete)


def windowed_action(inst: SpaceInstance, elements: Iterable[Perm], generators=None) -> GroupAction:
    """Group action on a window given by an explicit list of (partial) maps."""
    elems = []
    for g in elements:
        g = tuple(g)
        _check_perm(g, inst.n)
        if g not in elems:
            elems.append(g)
    e = identity(inst.n)
    if e not in elems:
        elems.insert(0, e)
    for g in elems:
        bad = is_homeomorphism(inst, g)
        if bad is not None:
            raise NotHomeomorphism(f"image of basis set {sorted(bad)} is not open", witness=(g, bad))
    gens = tuple(tuple(g) for g in generators) if generators else tuple(elems)
    return GroupAction(inst.n, gens, tuple(elems), len(elems), False, windowed=True)


# -- quotients -----------------------------------------------------------------


@dataclass(frozen=True)
class QuotientSpace:
    orbit_of: tuple
    orbits: tuple
    quotient_opens: tuple
    space: SpaceInstance

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)

    def project(self, s: Iterable[int]) -> frozenset:
        return frozenset(self.orbit_of[p] for p in s)

    def preimage(self, q: Iterable[int]) -> frozenset:
        out = set()
        for o in q:
            out |= self.orbits[o]
        return frozenset(out)

    def is_open(self, q: Iterable[int]) -> bool:
        return self.space.is_open(self.preimage(q))


def orbit_quotient(inst: SpaceInstance, G: GroupAction) -> QuotientSpace:
    parent = list(range(inst.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in G.elements:
        for x, y in enumerate(g):
            if y is not None:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
    roots = sorted({find(x) for x in range(inst.n)})
    idx = {r: i for i, r in enumerate(roots)}
    orbit_of = tuple(idx[find(x)] for x in range(inst.n))
    orbits = tuple(frozenset(x for x in range(inst.n) if orbit_of[x] == i) for i in range(len(roots)))
    images = {frozenset(orbit_of[p] for p in b) for b in inst.basis}
    qbasis = tuple(sorted(images, key=set_key))
    born = inst.bornology
    qborn = Bornology(tuple(frozenset(orbit_of[p] for p in g) for g in born.generators), born.full)
    qfront = frozenset(orbit_of[p] for p in inst.frontier)
    qspace = SpaceInstance(len(roots), qbasis, qborn, None, qfront)
    return QuotientSpace(orbit_of, orbits, qspace.basis, qspace)


# -- separation hypotheses -----------------------------------------------------


def hausdorff(inst: SpaceInstance) -> Verdict:
    pts = inst.interior_points
    for x, y in combinations(pts, 2):
        if not any(not (bx & by) for bx in inst.basis_at(x) for by in inst.basis_at(y)):
            return Verdict.fail((x, y), "no disjoint neighbourhoods", qualified=inst.windowed)
    return Verdict.ok("interior points only" if inst.windowed else "", qualified=inst.windowed)


def regular(inst: SpaceInstance) -> Verdict:
    """Every basic neighbourhood ``U`` of ``x`` contains the closure of a basic neighbourhood of ``x``."""
    for x in inst.interior_points:
        for u in inst.basis_at(x):
            if not any(inst.closure(v) <= u for v in inst.basis_at(x)):
                return Verdict.fail((x, tuple(sorted(u))), "no V with cl(V) inside U", qualified=inst.windowed)
    return Verdict.ok("interior points only" if inst.windowed else "", qualified=inst.windowed)


def locally_compact(inst: SpaceInstance) -> Verdict:
    """Each point has a basic neighbourhood with bounded closure."""
    results = []
    for x in inst.interior_points:
        vals = [inst.bounded_closure(b) for b in inst.basis_at(x)]
        if True in vals:
            continue
        if None in vals:
            results.append(Verdict.unknown(x, "only frontier-touching neighbourhoods"))
        else:
            return Verdict.fail(x, "no neighbourhood with bounded closure")
    return combine(results) if results else Verdict.ok()


@dataclass(frozen=True)
class HypothesisReport:
    hausdorff_x: Verdict
    regular_x: Verdict
    hausdorff_quotient: Verdict
    regular_quotient: Verdict
    locally_compact_x: Verdict
    paracompact_quotient: Verdict

    def as_dict(self):
        from .report import verdict_dict

        return {k: verdict_dict(v) for k, v in self.__dict__.items()}


def hypothesis_report(inst: SpaceInstance, G: GroupAction) -> HypothesisReport:
    q = orbit_quotient(inst, G).space
    return HypothesisReport(
        hausdorff_x=hausdorff(inst),
        regular_x=regular(inst),
        hausdorff_quotient=hausdorff(q),
        regular_quotient=regular(q),
        locally_compact_x=locally_compact(inst),
        paracompact_quotient=Verdict.ok("finite quotient: every open cover is locally finite"),
    )
