"""Horizon families: growing windows onto one infinite instance.

Points carry labels that persist across horizons.  A property such as "the
closure of this ball is bounded" is decided for the family by following the
same labelled set from window to window: it is ``STABLE`` once the set stops
changing and stays clear of the frontier, and ``GROWING`` when it still changes
between the two largest horizons.  Probe sets and radii are fixed in advance
and do not depend on the horizon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .space import GroupAction, SpaceInstance
from .verdict import Status, Verdict, combine


@dataclass(frozen=True)
class Horizon:
    m: int
    inst: SpaceInstance
    group: GroupAction
    aux: dict = field(default_factory=dict, compare=False)

    def points_of(self, labels: Iterable) -> frozenset:
        """Indices of the given labels that exist at this horizon."""
        present = set(self.inst.labels)
        return frozenset(self.inst.index(l) for l in labels if l in present)

    def labels_of(self, pts: Iterable[int]) -> frozenset:
        return frozenset(self.inst.label(p) for p in pts)

    def has(self, labels: Iterable) -> bool:
        present = set(self.inst.labels)
        return all(l in present for l in labels)


@dataclass(frozen=True)
class HorizonFamily:
    name: str
    horizons: tuple
    probes: tuple = ()
    radii: tuple = ()

    def __post_init__(self):
        hs = tuple(sorted(self.horizons, key=lambda h: h.m))
        for h in hs:
            if h.inst.labels is None:
                raise ValueError("horizon instances need point labels")
        object.__setattr__(self, "horizons", hs)
        object.__setattr__(self, "probes", tuple(frozenset(p) for p in self.probes))

    def __iter__(self):
        return iter(self.horizons)

    def __len__(self):
        return len(self.horizons)

    @property
    def last(self) -> Horizon:
        return self.horizons[-1]


def check_inclusions(family: HorizonFamily) -> Verdict:
    """Consecutive windows embed by label and agree on neighbourhoods away from the frontier."""
    for small, big in zip(family.horizons, family.horizons[1:]):
        sl, bl = set(small.inst.labels), set(big.inst.labels)
        if not sl <= bl:
            return Verdict.fail({"m": small.m, "missing": sorted(map(str, sl - bl))}, "labels vanish at a larger horizon")
        for x in small.inst.interior_points:
            nb = small.inst.min_nbhd(x)
            if nb & small.inst.frontier:
                continue
            lab = small.labels_of(nb)
            big_nb = big.labels_of(big.inst.min_nbhd(big.inst.index(small.inst.label(x))))
            if lab != big_nb:
                return Verdict.fail({"m": small.m, "x": str(small.inst.label(x))}, "neighbourhoods disagree across horizons")
    return Verdict.ok()


Probe = Callable[[Horizon], list]
"""Maps a horizon to ``[(key, labelled set, status)]`` triples."""


def stabilize(family: HorizonFamily, probe: Probe) -> Verdict:
    """Family verdict from per-horizon labelled sets.

    Any definite per-horizon failure refutes.  Otherwise each key must give the
    same labelled set at the two largest horizons with a passing status there;
    the verdict records the first horizon from which it stayed put.
    """
    table: dict = {}
    for h in family.horizons:
        for key, labels, status in probe(h):
            table.setdefault(key, []).append((h.m, frozenset(labels), status))
    failures, growing, stable_from = [], [], []
    for key, rows in table.items():
        bad = next((r for r in rows if r[2] is Status.FAIL), None)
        if bad is not None:
            failures.append({"key": key, "m": bad[0], "set": _sorted(bad[1])})
            continue
        if len(rows) < 2:
            growing.append({"key": key, "reason": "seen at fewer than two horizons"})
            continue
        (m1, s1, _), (m2, s2, st2) = rows[-2], rows[-1]
        if s1 != s2 or st2 is not Status.PASS:
            growing.append({"key": key, "m": [m1, m2], "sets": [_sorted(s1), _sorted(s2)]})
            continue
        m0 = m2
        for m, s, st in reversed(rows):
            if s != s2 or st is not Status.PASS:
                break
            m0 = m
        stable_from.append(m0)
    if failures:
        return Verdict.fail(failures[0], "refuted at a single horizon", failures=failures)
    if growing:
        return Verdict.fail(growing[0], "GROWING", growing=growing)
    m0 = max(stable_from, default=family.horizons[0].m)
    return Verdict.ok(f"STABLE({m0})", m0=m0)


def _sorted(labels):
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=repr)


def bounded_status(inst: SpaceInstance, s) -> Status:
    b = inst.is_bounded(s)
    if b is None:
        return Status.INDETERMINATE
    return Status.PASS if b else Status.FAIL


def family_check(family: HorizonFamily, per_horizon: Callable[[Horizon], Verdict]) -> Verdict:
    """Combine an ordinary per-horizon verdict across the family."""
    rows = {h.m: per_horizon(h) for h in family.horizons}
    v = combine(rows.values())
    return Verdict(v.status, v.witness, True, v.note, {"per_horizon": rows})


# -- family-level properness ----------------------------------------------------------


def _key(labels) -> tuple:
    return tuple(_sorted(labels))


def family_near_properness(family: HorizonFamily) -> Verdict:
    from .invariance import translate_union

    def probe(h: Horizon):
        out = []
        for a in family.probes:
            for b in family.probes:
                if not (h.has(a) and h.has(b)):
                    continue
                union, total = translate_union(h.group, h.points_of(a), h.points_of(b))
                c = h.inst.closure(union)
                st = bounded_status(h.inst, c)
                if st is Status.PASS and not total:
                    st = Status.INDETERMINATE
                out.append((repr({"A": _key(a), "B": _key(b)}), h.labels_of(c), st))
        return out

    return stabilize(family, probe)


def family_gauge_properness(family: HorizonFamily, gauge_of: Callable[[Horizon], object]) -> Verdict:
    def probe(h: Horizon):
        rho = gauge_of(h)
        out = []
        for a in family.probes:
            if not h.has(a):
                continue
            for r in family.radii:
                c = h.inst.closure(rho.set_ball(h.points_of(a), r))
                out.append((repr({"A": _key(a), "eps": str(r)}), h.labels_of(c), bounded_status(h.inst, c)))
        return out

    return stabilize(family, probe)


def family_tunnel_properness(family: HorizonFamily, tunnels_of: Callable[[Horizon], object]) -> Verdict:
    from .tunnels import tunnel_neighborhood

    def probe(h: Horizon):
        T = tunnels_of(h)
        out = []
        for a in family.probes:
            if not h.has(a):
                continue
            for r in family.radii:
                c = h.inst.closure(tunnel_neighborhood(T, h.points_of(a), r))
                out.append((repr({"A": _key(a), "eps": str(r)}), h.labels_of(c), bounded_status(h.inst, c)))
        return out

    return stabilize(family, probe)


def family_cover_properness(family: HorizonFamily, cover_of: Callable[[Horizon], object]) -> Verdict:
    from .covers import star

    def probe(h: Horizon):
        u = cover_of(h)
        out = []
        for a in family.probes:
            if h.has(a):
                c = h.inst.closure(star(h.points_of(a), u))
                out.append((repr({"A": _key(a)}), h.labels_of(c), bounded_status(h.inst, c)))
        return out

    return stabilize(family, probe)


def verify_theorem_3_7_family(family: HorizonFamily, max_n: int = 4) -> Verdict:
    """Biconditional over a family whose horizons carry ``aux["rho"]`` and ``aux["tunnels"]``."""
    from .tunnels import covering_inclusion, converse_facts, tunnel_distance

    sigmas = {h.m: tunnel_distance(h.aux["rho"], h.aux["tunnels"]) for h in family}
    sp = family_gauge_properness(family, lambda h: sigmas[h.m])
    rp = family_gauge_properness(family, lambda h: h.aux["rho"])
    tp = family_tunnel_properness(family, lambda h: h.aux["tunnels"])
    lhs = sp.status is Status.PASS
    rhs = rp.status is Status.PASS and tp.status is Status.PASS
    bic = Verdict.of(lhs == rhs, {"sigma": sp.status.value, "rho": rp.status.value, "tunnels": tp.status.value})
    inc = combine(covering_inclusion(h.aux["rho"], h.aux["tunnels"], sigmas[h.m], h.inst, max_n) for h in family)
    conv = combine(converse_facts(h.aux["rho"], h.aux["tunnels"], sigmas[h.m]) for h in family)
    total = combine([bic, inc, conv])
    return Verdict(total.status, total.witness, note=total.note, details={
        "sigma_proper": sp, "rho_proper": rp, "tunnels_proper": tp,
        "biconditional": bic, "covering_inclusion": inc, "converse": conv,
    })


def family_equiregularity(family: HorizonFamily) -> Verdict:
    """Equiregularity at the points each window sees in full.

    Frontier points have neighbourhoods that are cut off by the window, so they
    are left to larger horizons rather than reported as undecided.
    """
    from .invariance import equiregularity_check

    return family_check(family, lambda h: equiregularity_check(h.inst, h.group, points=h.inst.interior_points)[0])
