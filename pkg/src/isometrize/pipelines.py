"""End-to-end constructions of invariant gauges and proper invariant gauges.

Each stage re-verifies what it produced and raises an error naming the stage
when a hypothesis or postcondition breaks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .covers import Cover, Development, is_development, star
from .dyadic import HALF, INF
from .errors import HypothesisFail, IsometrizeError, NotEquiregular, NotNearlyProper, NotSeparating
from .gauge import (ExtGauge, GaugeFamily, au_distance, crevasse_partition, decapitate, is_proper_gauge,
                    is_separating, max_combine, sup_combine)
from .horizon import HorizonFamily, family_equiregularity, family_gauge_properness, family_near_properness
from .invariance import (EquiregWitness, PipelineTrace, default_exhaustion, equiregularity_check, is_invariant_gauge,
                         near_properness_check, proper_invariant_cover, saturate_cover, stone_star_refine,
                         translate_union)
from .space import GroupAction, SpaceInstance, hypothesis_report
from .tunnels import g_saturate_tunnels, make_star_tunnels, tunnel_distance, validate_tunnel_system
from .verdict import Verdict, combine


def _stage(trace, step, **objects):
    if trace is not None:
        trace.record(step, **objects)


def _fail(exc_type, stage, message, witness=None):
    err = exc_type(f"{stage}: {message}", witness=witness)
    err.stage = stage
    return err


def _refined_development(inst, G, first: Cover, depth: int, witness, trace, tag) -> Development:
    """``first`` refined ``2*depth - 2`` times; the odd-indexed levels form the development."""
    levels = [first]
    for i in range(2, 2 * depth):
        levels.append(stone_star_refine(inst, G, levels[-1], witness, trace))
    dev = Development(tuple(levels[::2]))
    _stage(trace, f"{tag}:odd levels", sizes=[len(c) for c in dev.levels], development=is_development(dev))
    return dev


def _equiregular(inst, G, trace):
    verdict, witness = equiregularity_check(inst, G)
    _stage(trace, "equiregularity", verdict=verdict)
    if verdict.failed:
        raise _fail(NotEquiregular, "equiregularity", "no equiregularity witness", verdict.witness)
    return verdict, witness


def default_targets(inst: SpaceInstance) -> list:
    """Each non-frontier point with its smallest basic neighbourhood."""
    return [(x, inst.min_nbhd(x)) for x in inst.interior_points]


def metrize(inst: SpaceInstance, G: GroupAction, targets: Optional[Sequence] = None, depth: int = 4,
            trace: Optional[PipelineTrace] = None, witness: Optional[EquiregWitness] = None) -> GaugeFamily:
    """One decapitated invariant chain distance per target ``(x, U)``."""
    hyp = hypothesis_report(inst, G)
    _stage(trace, "hypotheses", report=hyp)
    if hyp.regular_quotient.failed:
        raise _fail(HypothesisFail, "hypotheses", "orbit space is not regular", hyp.regular_quotient.witness)
    if witness is None:
        _, witness = _equiregular(inst, G, trace)
    targets = default_targets(inst) if targets is None else [(x, frozenset(u)) for x, u in targets]
    gauges, tags = [], []
    for x, u in targets:
        basic = u if (x, u) in witness.v_choice else next(
            (b for b in inst.basis_at(x) if b <= u and (x, b) in witness.v_choice), None)
        if basic is None:
            raise _fail(HypothesisFail, "theorem1.1:target", "target has no witness", {"x": x, "U": sorted(u)})
        first = saturate_cover(G, [witness.n_choice[(x, basic, y)] for y in range(inst.n)])
        if not star({x}, first) <= u:
            raise _fail(HypothesisFail, "theorem1.1:first cover", "Star(x, V1) escapes U", {"x": x, "U": sorted(u)})
        dev = _refined_development(inst, G, first, depth, witness, trace, "theorem1.1")
        sigma = decapitate(au_distance(dev, inst.n, check=False))
        ball = sigma.ball(x, HALF)
        if not ball <= u:
            raise _fail(HypothesisFail, "theorem1.1:ball condition", "N(x, 1/2) escapes U", {"x": x, "y": min(ball - u)})
        inv = is_invariant_gauge(G, sigma)
        if inv.failed:
            raise _fail(HypothesisFail, "lemma4.1:invariance", "gauge not invariant", inv.witness)
        gauges.append(sigma)
        tags.append({"target": [x, sorted(u)], "finite": True})
        _stage(trace, "theorem1.1:gauge", target=[x, sorted(u)], gauge=sigma)
    return GaugeFamily(tuple(gauges), tuple(tags))


@dataclass(frozen=True)
class ProperMetrization:
    family: GaugeFamily
    sigma: ExtGauge
    tunnels: object
    tau: ExtGauge
    verdicts: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        return {"family": self.family, "sigma": self.sigma, "tunnels": self.tunnels, "tau": self.tau,
                "verdicts": self.verdicts}


def proper_metrize(inst: SpaceInstance, G: GroupAction, D: Optional[Sequence] = None,
                   P: Optional[GaugeFamily] = None, depth: int = 4, trace: Optional[PipelineTrace] = None,
                   near: Optional[Verdict] = None) -> ProperMetrization:
    """Proper invariant gauges ``max(rho, tau)`` for ``rho`` in an invariant family.

    ``near`` overrides the single-instance near-properness verdict, which is how
    horizon families feed in their stabilized verdict.
    """
    _, witness = _equiregular(inst, G, trace)
    near = near if near is not None else near_properness_check(inst, G)
    _stage(trace, "near-properness", verdict=near)
    if near.failed:
        raise _fail(NotNearlyProper, "lemma5.3", "group is not nearly proper", near.witness)
    if P is None:
        P = metrize(inst, G, depth=depth, trace=trace, witness=witness)
    D = list(D) if D is not None else default_exhaustion(inst)
    try:
        first = proper_invariant_cover(inst, G, D, trace, near=near)
    except HypothesisFail as exc:
        raise _fail(HypothesisFail, "lemma5.3", str(exc), exc.witness) from exc
    dev = _refined_development(inst, G, first, depth, witness, trace, "theorem1.3")
    sigma = au_distance(dev, inst.n, check=False)
    sp = is_proper_gauge(sigma, inst)
    _stage(trace, "theorem3.3:sigma", sigma=sigma, proper=sp)
    if sp.failed:
        raise _fail(HypothesisFail, "theorem3.3", "chain distance is not proper", sp.witness)
    crev = crevasse_partition(sigma)
    T = make_star_tunnels(crev)
    try:
        TG = g_saturate_tunnels(G, sigma, T, inst)
    except IsometrizeError as exc:
        raise _fail(type(exc), "corollary4.4", str(exc), exc.witness) from exc
    vt = validate_tunnel_system(sigma, TG)
    _stage(trace, "corollary4.4:tunnels", crevasses=crev, tunnels=TG, valid=vt)
    if vt.failed:
        raise _fail(HypothesisFail, "corollary4.4", "saturated tunnels invalid", vt.witness)
    tau = tunnel_distance(sigma, TG)
    checks = {"tau_invariant": is_invariant_gauge(G, tau), "tau_proper": is_proper_gauge(tau, inst)}
    _stage(trace, "theorem3.7:tau", tau=tau, **checks)
    for name, v in checks.items():
        if v.failed:
            raise _fail(HypothesisFail, "theorem3.7", name.replace("_", " ") + " fails", v.witness)
    gauges, tags = [], []
    for rho, tag in zip(P.gauges, P.tags):
        m = max_combine([rho, tau])
        inv, prop = is_invariant_gauge(G, m), is_proper_gauge(m, inst)
        if inv.failed or prop.failed:
            raise _fail(HypothesisFail, "theorem1.3:output", "combined gauge not invariant and proper",
                        inv.witness or prop.witness)
        gauges.append(m)
        tags.append(dict(tag, proper=prop.status.value))
    fam = GaugeFamily(tuple(gauges), tuple(tags))
    _stage(trace, "theorem1.3:output", family=fam)
    return ProperMetrization(fam, sigma, TG, tau, dict(checks, near_proper=near))


def single_metrize(family, proper: Optional[ExtGauge] = None) -> ExtGauge:
    """Weighted supremum of the decapitated members, max-combined with ``proper`` if given."""
    gauges = list(family)
    if not gauges:
        raise NotSeparating("empty family")
    sep = is_separating(gauges)
    if sep.failed:
        raise NotSeparating("family does not separate points", witness=sep.witness)
    out = sup_combine([decapitate(g) for g in gauges])
    if proper is not None:
        out = max_combine([out, proper])
    return out


def near_properness_from_gauge(inst: SpaceInstance, G: GroupAction, rho: ExtGauge, x0: Optional[int] = None,
                               probes: Optional[Sequence] = None) -> Verdict:
    """Near-properness read off an invariant proper gauge through balls of radius ``3n``.

    For bounded ``A, B`` inside ``N(x0, n)``, every translate ``g(A)`` meeting
    ``B`` lies in ``N(g x0, n)``, which meets ``N(x0, n)``, so the union lies in
    ``N(x0, 3n)``, whose closure is bounded.
    """
    if probes is None:
        probes = inst.bornology.generators if not inst.bornology.full else [frozenset(inst.interior_points)]
    x0 = inst.interior_points[0] if x0 is None else x0
    out = []
    for a in probes:
        for b in probes:
            ab = frozenset(a) | frozenset(b)
            n = _covering_radius(rho, x0, ab)
            if n is None:
                out.append(Verdict.fail({"A": sorted(a), "B": sorted(b)}, "A and B are not at finite distance from x0"))
                continue
            union, total = translate_union(G, a, b)
            mid = set()
            for g in G:
                gx = g[x0]
                if gx is not None:
                    ball = rho.ball(gx, n)
                    if ball & rho.ball(x0, n):
                        mid |= ball
            big = rho.ball(x0, 3 * n)
            w = {"A": sorted(a), "B": sorted(b), "n": n}
            if not union <= frozenset(mid) or not frozenset(mid) <= big:
                out.append(Verdict.fail(w, "translates escape the 3n-ball"))
                continue
            bounded = inst.bounded_closure(big)
            if bounded is False:
                out.append(Verdict.fail(w, "closure of the 3n-ball is unbounded"))
            elif bounded is None or not total:
                out.append(Verdict.unknown(w, "3n-ball reaches the frontier"))
    v = combine(out)
    return Verdict(v.status, v.witness, G.qualified, v.note)


def _covering_radius(rho: ExtGauge, x0: int, s) -> Optional[int]:
    far = max((rho(x0, y) for y in s), default=0)
    if far == INF:
        return None
    return int(far) + 1


@dataclass(frozen=True)
class FamilyMetrization:
    """Per-horizon pipeline outputs together with stabilized family verdicts."""

    results: dict
    verdicts: dict

    @property
    def succeeded(self) -> bool:
        return all(not v.failed for v in self.verdicts.values()) and all(
            not isinstance(r, Exception) for r in self.results.values())

    def as_dict(self):
        res = {str(m): (r.family if isinstance(r, ProperMetrization) else {"error": getattr(r, "code", "ERROR"), "message": str(r)})
               for m, r in self.results.items()}
        return {"succeeded": self.succeeded, "verdicts": self.verdicts, "results": res}


def proper_metrize_family(family: HorizonFamily, depth: int = 3) -> FamilyMetrization:
    """Run the proper pipeline at every horizon; properness is judged across horizons."""
    near = family_near_properness(family)
    verdicts = {"near_proper": near}
    if near.failed:
        verdicts["stage"] = Verdict.fail("lemma5.3", "NOT_NEARLY_PROPER")
        return FamilyMetrization({}, verdicts)
    results = {}
    for h in family:
        try:
            results[h.m] = proper_metrize(h.inst, h.group, h.aux.get("exhaustion"), depth=depth,
                                          near=Verdict.unknown(note=near.note))
        except IsometrizeError as exc:
            results[h.m] = exc
    verdicts["equiregular"] = family_equiregularity(family)
    ok = {m: r for m, r in results.items() if isinstance(r, ProperMetrization)}
    if len(ok) == len(results):
        verdicts["tau_proper"] = family_gauge_properness(family, lambda h: ok[h.m].tau)
        # output gauges are matched across horizons by the label of their target point
        def by_target(h):
            pm = ok[h.m].family
            return {h.inst.label(t["target"][0]): g for g, t in zip(pm.gauges, pm.tags)}

        tables = {h.m: by_target(h) for h in family}
        common = set.intersection(*(set(t) for t in tables.values()))
        verdicts["output_proper"] = combine(
            family_gauge_properness(family, lambda h, lab=lab: tables[h.m][lab])
            for lab in sorted(common, key=repr))
        verdicts["invariant"] = combine(is_invariant_gauge(h.group, g) for h in family for g in ok[h.m].family)
    return FamilyMetrization(results, verdicts)
