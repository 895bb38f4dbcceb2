"""Group invariance, equiregularity, near-properness and the invariant cover constructions.

Checks on windowed instances are three-valued: an image that leaves the window
is only partly known, so a condition that hinges on the missing part comes
back indeterminate instead of guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .covers import Cover, as_cover, is_proper_cover, is_star_refinement
from .errors import BadExhaustion, HypothesisFail, NotEquiregular
from .gauge import ExtGauge
from .space import GroupAction, SpaceInstance, compose, identity, image, inverse, is_total, orbit_quotient, set_key
from .verdict import Status, Verdict, combine, tri


@dataclass
class PipelineTrace:
    """Ordered log of intermediate objects, each tagged with the step that produced it."""

    steps: list = field(default_factory=list)

    def record(self, step: str, **objects):
        self.steps.append({"step": step, **objects})

    def labels(self) -> list:
        return [s["step"] for s in self.steps]

    def as_dict(self):
        return {"steps": self.steps}


def _record(trace, step, **objects):
    if trace is not None:
        trace.record(step, **objects)


# -- invariance ------------------------------------------------------------------


def is_invariant_gauge(G: GroupAction, rho: ExtGauge) -> Verdict:
    n = rho.n
    for g in G:
        for x in range(n):
            gx = g[x]
            if gx is None:
                continue
            for y in range(x + 1, n):
                gy = g[y]
                if gy is not None and rho(gx, gy) != rho(x, y):
                    return Verdict.fail({"g": list(g), "x": x, "y": y}, "distance changes under g", qualified=G.qualified)
    return Verdict.ok(qualified=G.qualified)


def is_invariant_cover(G: GroupAction, u) -> Verdict:
    """Every total image ``g(S)`` of a member is again a member."""
    u = as_cover(u)
    members = set(u.sets)
    for g in G:
        for s in u:
            img, total = image(g, s)
            if total and img not in members:
                w = {"g": list(g), "set": sorted(s), "image": sorted(img)}
                return Verdict.fail(w, "image is not a member", qualified=G.qualified)
    return Verdict.ok(qualified=G.qualified)


def saturate_cover(G: GroupAction, u) -> Cover:
    out = set()
    for s in as_cover(u):
        for g in G:
            img, total = image(g, s)
            if total:
                out.add(img)
    return Cover(tuple(out))


# -- equiregularity --------------------------------------------------------------


def _images(inst: SpaceInstance, G: GroupAction) -> dict:
    return {b: [image(g, b) for g in G] for b in inst.basis}


def _displacement(inst: SpaceInstance, imgs: Sequence[tuple], cl_v: frozenset, u: frozenset) -> Status:
    """``g(N) meets cl(V)  =>  g(N) inside U`` over the listed images of ``N``."""
    front = inst.frontier
    unknown = False
    cl_touches, u_touches = bool(cl_v & front), bool(u & front)
    for img, total in imgs:
        if img & cl_v:
            meets = True
        elif not total and cl_touches:
            meets = None
        else:
            continue
        if total:
            inside = img <= u
        elif not img <= u:
            inside = False
        else:
            inside = None if u_touches else False
        if inside is True:
            continue
        if meets is True and inside is False:
            return Status.FAIL
        unknown = True
    return Status.INDETERMINATE if unknown else Status.PASS


@dataclass(frozen=True)
class EquiregWitness:
    """Chosen ``V`` per ``(x, U)`` and chosen ``N_y`` per ``(x, U, y)``."""

    v_choice: dict
    n_choice: dict

    def as_dict(self):
        return {
            "V": [{"x": x, "U": sorted(u), "V": sorted(v)}
                  for (x, u), v in sorted(self.v_choice.items(), key=lambda kv: (kv[0][0], set_key(kv[0][1])))],
            "N": len(self.n_choice),
        }


def _good_neighbourhoods(inst, imgs, cl_v, u, cache):
    key = (cl_v, u)
    if key not in cache:
        cache[key] = {b: _displacement(inst, imgs[b], cl_v, u) for b in inst.basis}
    return cache[key]


def _pick_n(inst, y, status_of):
    """First basis set at ``y`` passing, else first indeterminate one."""
    fallback = None
    for b in inst.basis_at(y):
        s = status_of[b]
        if s is Status.PASS:
            return b, Status.PASS
        if s is Status.INDETERMINATE and fallback is None:
            fallback = b
    if fallback is not None:
        return fallback, Status.INDETERMINATE
    return None, Status.FAIL


def equiregularity_check(inst: SpaceInstance, G: GroupAction, points: Optional[Iterable[int]] = None):
    """Search ``V`` and ``N_y`` for every point ``x`` and basic ``U`` around it.

    Returns ``(verdict, witness)``; the witness is ``None`` unless the verdict
    passes.  ``details["failures"]`` lists every failing ``(x, U)``.
    """
    imgs = _images(inst, G)
    cache: dict = {}
    v_choice, n_choice = {}, {}
    failures, unknowns = [], []
    xs = list(points) if points is not None else range(inst.n)
    for x in xs:
        # frontier points are attempted for the witness but cannot refute
        sink = unknowns if x in inst.frontier else failures
        for u in inst.basis_at(x):
            best = None
            for v in inst.basis_at(x):
                cl_v = inst.closure(v)
                if not cl_v <= u:
                    continue
                status_of = _good_neighbourhoods(inst, imgs, cl_v, u, cache)
                picks, statuses, bad_y = {}, [], None
                for y in range(inst.n):
                    b, s = _pick_n(inst, y, status_of)
                    if s is Status.FAIL and y in inst.frontier:
                        b, s = inst.basis_at(y)[0], Status.INDETERMINATE
                    statuses.append(s)
                    if s is Status.FAIL:
                        bad_y = y
                        break
                    picks[y] = b
                if bad_y is not None:
                    if best is None:
                        best = (Status.FAIL, v, bad_y, None)
                    continue
                st = Status.INDETERMINATE if Status.INDETERMINATE in statuses else Status.PASS
                if st is Status.PASS:
                    best = (st, v, None, picks)
                    break
                if best is None or best[0] is Status.FAIL:
                    best = (st, v, None, picks)
            if best is None:
                sink.append({"x": x, "U": sorted(u), "reason": "no basic V with cl(V) inside U"})
                continue
            st, v, bad_y, picks = best
            if st is Status.FAIL:
                sink.append({"x": x, "U": sorted(u), "y": bad_y})
                continue
            if st is Status.INDETERMINATE:
                unknowns.append({"x": x, "U": sorted(u)})
            v_choice[(x, u)] = v
            for y, b in picks.items():
                n_choice[(x, u, y)] = b
    q = G.qualified
    if failures:
        verdict = Verdict.fail(failures[0], "no V admits neighbourhoods N_y for every y", qualified=q, failures=failures)
        return verdict, None
    if unknowns:
        verdict = Verdict.unknown(unknowns[0], "displacement depends on points past the window", qualified=q, unknown=unknowns)
        return verdict, EquiregWitness(v_choice, n_choice)
    return Verdict.ok(qualified=q), EquiregWitness(v_choice, n_choice)


# -- near-properness ---------------------------------------------------------------


def translate_union(G: GroupAction, a: Iterable[int], b: Iterable[int]) -> tuple:
    """``(union of g(A) meeting B, all contributing images total)``."""
    a, b = frozenset(a), frozenset(b)
    out, total = set(), True
    for g in G:
        img, ok = image(g, a)
        if img & b:
            out |= img
            total = total and ok
    return frozenset(out), total


def near_properness_check(inst: SpaceInstance, G: GroupAction, probes: Optional[Sequence] = None) -> Verdict:
    """Boundedness of ``cl(U{g(A) : g(A) meets B})`` over pairs of bounded sets.

    Pairs range over the bornology generators, or over ``probes`` when given.
    """
    if probes is None:
        if inst.bornology.full:
            return Verdict.ok("full bornology", qualified=G.qualified)
        probes = inst.bornology.generators
    out = []
    for a in probes:
        for b in probes:
            union, total = translate_union(G, a, b)
            bounded = inst.bounded_closure(union)
            if bounded is True and not total:
                bounded = None
            status = tri(bounded)
            if status is not Status.PASS:
                w = {"A": sorted(a), "B": sorted(b), "union": sorted(union)}
                out.append(Verdict(status, w, G.qualified))
                if status is Status.FAIL:
                    break
    v = combine(out)
    return Verdict(v.status, v.witness, G.qualified, v.note)


# -- Lemma 5.1 style refinement ------------------------------------------------------


@dataclass(frozen=True)
class _Refinement:
    v_sets: tuple
    u_of: dict


def _refining_family(inst, u: Cover, witness: EquiregWitness) -> _Refinement:
    v_sets, u_of = [], {}
    for x in range(inst.n):
        holder = next((s for s in u if x in s), None)
        if holder is None:
            raise HypothesisFail(f"cover misses point {x}", witness=x)
        basic = next((b for b in inst.basis_at(x) if b <= holder and (x, b) in witness.v_choice), None)
        if basic is None:
            raise HypothesisFail("no equiregularity witness inside the cover member", witness={"x": x, "U": sorted(holder)})
        v = witness.v_choice[(x, basic)]
        if v not in u_of:
            v_sets.append(v)
            u_of[v] = holder
    return _Refinement(tuple(v_sets), u_of)


def _carry(G: GroupAction, v: frozenset, x: int):
    """A word in the generators taking some point of ``v`` to ``x``.

    Needed when the enumeration stopped at its cap and no listed element does it.
    """
    steps = [g for g in G.generators if is_total(g)]
    steps += [inverse(g) for g in steps]
    seen = {p: identity(G.n) for p in sorted(v)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for s in steps:
                q = s[p]
                if q not in seen:
                    seen[q] = compose(s, seen[p])
                    nxt.append(q)
        frontier = nxt
    return seen.get(x)


def stone_star_refine(inst: SpaceInstance, G: GroupAction, u, witness: Optional[EquiregWitness] = None,
                      trace: Optional[PipelineTrace] = None) -> Cover:
    """Invariant open cover star-refining the invariant cover ``u``.

    Follows the paracompact-quotient construction: a refining family ``V`` with
    chosen ``U_V``, minimal quotient neighbourhoods ``L`` whose closures sit in
    some ``pi(V)``, and per-point sets ``N_x`` cut down away from the closures
    of the ``L`` that miss ``pi(x)``.  The output is re-verified.
    """
    u = as_cover(u)
    inv = is_invariant_cover(G, u)
    if inv.failed:
        raise HypothesisFail("input cover is not invariant", witness=inv.witness)
    if witness is None:
        verdict, witness = equiregularity_check(inst, G)
        if verdict.failed:
            raise NotEquiregular("group is not equiregular", witness=verdict.witness)
    ref = _refining_family(inst, u, witness)
    _record(trace, "lemma5.1:refining family", V=[sorted(v) for v in ref.v_sets])

    quot = orbit_quotient(inst, G)
    q = quot.space
    proj = {v: quot.project(v) for v in ref.v_sets}
    l_sets, v_of_l = [], {}
    for o in range(q.n):
        lq = q.min_nbhd(o)
        if lq in v_of_l:
            continue
        cl_l = q.closure(lq)
        v = next((v for v in ref.v_sets if cl_l <= proj[v]), None)
        if v is None:
            raise HypothesisFail("quotient neighbourhood closure fits no pi(V)", witness={"orbit": o, "L": sorted(lq)})
        l_sets.append(lq)
        v_of_l[lq] = v
    cl_of = {lq: q.closure(lq) for lq in l_sets}
    _record(trace, "lemma5.1:quotient cover L", L=[sorted(lq) for lq in l_sets])

    imgs = _images(inst, G)
    cl_v = {v: inst.closure(v) for v in ref.v_sets}
    n_x = {}
    for x in range(inst.n):
        px = quot.orbit_of[x]
        lx = [lq for lq in l_sets if px in cl_of[lq]]
        c_x = frozenset().union(*(cl_of[lq] for lq in l_sets if px not in cl_of[lq]))
        core = inst.points
        for lq in lx:
            v = v_of_l[lq]
            g = next((g for g in G if x in image(g, v)[0]), None) or _carry(G, v, x)
            if g is None:
                raise HypothesisFail("no g with x in g(V(L))", witness={"x": x, "L": sorted(lq)})
            gv = image(g, v)[0]
            pick, fallback = None, None
            for b in inst.basis_at(x):
                if not b <= gv:
                    continue
                s = _displacement(inst, imgs[b], cl_v[v], ref.u_of[v])
                if s is Status.PASS:
                    pick = b
                    break
                if s is Status.INDETERMINATE and fallback is None:
                    fallback = b
            pick = pick or fallback
            if pick is None:
                raise HypothesisFail("lemma5.1:N_x construction", witness={"x": x, "L": sorted(lq)})
            core &= pick
        n_x[x] = core - quot.preimage(c_x)
        if x not in n_x[x]:
            raise HypothesisFail("lemma5.1:N_x construction lost its point", witness={"x": x})
    _record(trace, "lemma5.1:N_x construction", N={x: sorted(s) for x, s in n_x.items()})

    w = saturate_cover(G, [s for s in n_x.values()])
    pts = inst.interior_points if inst.windowed else None
    sr = is_star_refinement(w, u, pts)
    if sr.failed:
        raise HypothesisFail("lemma5.1:output does not star-refine", witness=sr.witness)
    wi = is_invariant_cover(G, w)
    if wi.failed:
        raise HypothesisFail("lemma5.1:output not invariant", witness=wi.witness)
    _record(trace, "lemma5.1:output", W=[sorted(s) for s in w])
    return w


# -- exhaustions ---------------------------------------------------------------------


@dataclass(frozen=True)
class ExhaustionDecomposition:
    D: tuple
    K: tuple
    L: tuple
    checks: Verdict

    def as_dict(self):
        return {
            "D": [sorted(d) for d in self.D],
            "K": [sorted(k) for k in self.K],
            "L": [sorted(l) for l in self.L],
            "checks": self.checks,
        }


def exhaustion_decomposition(inst: SpaceInstance, D: Sequence) -> ExhaustionDecomposition:
    """Blocks ``K_i`` and opens ``L_i`` from an increasing closed bounded chain ``D``."""
    D = tuple(frozenset(d) for d in D)
    if not D:
        raise BadExhaustion("empty chain")
    for i, d in enumerate(D, start=1):
        if not inst.is_closed(d):
            raise BadExhaustion(f"D_{i} is not closed", witness=i)
        # the last link stands in for the tail of an infinite chain
        if i < len(D) and inst.is_bounded(d) is False:
            raise BadExhaustion(f"D_{i} is not bounded", witness=i)
    for i in range(len(D) - 1):
        if not D[i] <= inst.interior(D[i + 1]):
            raise BadExhaustion(f"D_{i + 1} is not inside int(D_{i + 2})", witness=i + 1)
    if D[-1] != inst.points:
        raise BadExhaustion("chain does not exhaust the space", witness=sorted(inst.points - D[-1]))
    k = len(D)

    def d(i):  # 1-based, extended by the whole space
        return D[min(i, k) - 1] if i >= 1 else frozenset()

    K = [d(1)] + [d(i) - inst.interior(d(i - 1)) for i in range(2, k + 1)]
    L = [inst.interior(d(2)), inst.interior(d(3))][:k]
    L += [inst.interior(d(i + 1)) - d(i - 2) for i in range(3, k + 1)]
    checks = _exhaustion_checks(inst, K, L)
    return ExhaustionDecomposition(D, tuple(K), tuple(L), checks)


def _exhaustion_checks(inst, K, L) -> Verdict:
    rng = range(len(K))
    out = {}
    union = frozenset().union(*K)
    out["K_cover"] = Verdict.of(union == inst.points, sorted(inst.points - union))
    out["K_disjoint"] = _first_pair(rng, lambda i, j: abs(i - j) > 1 and K[i] & K[j])
    out["K_in_L"] = Verdict.of(all(K[i] <= L[i] for i in rng), next((i + 1 for i in rng if not K[i] <= L[i]), None))
    out["L_misses_K"] = _first_pair(rng, lambda i, j: abs(i - j) > 1 and L[i] & K[j])
    out["L_disjoint"] = _first_pair(rng, lambda i, j: abs(i - j) > 2 and L[i] & L[j])
    total = combine(out.values())
    return Verdict(total.status, total.witness, details=out)


def _first_pair(rng, bad) -> Verdict:
    for i in rng:
        for j in rng:
            if bad(i, j):
                return Verdict.fail((i + 1, j + 1))
    return Verdict.ok()


def proper_invariant_cover(inst: SpaceInstance, G: GroupAction, D: Sequence, trace: Optional[PipelineTrace] = None,
                           near: Optional[Verdict] = None) -> Cover:
    """Invariant cover whose stars of bounded sets have bounded closure.

    ``D`` is an exhaustion of the space; it is projected to the orbit space and
    closed there.  Each block ``K_i`` is covered by finitely many basic sets
    with bounded closure whose projections stay inside ``L_i``, and the union
    of these choices is saturated.
    """
    near = near if near is not None else near_properness_check(inst, G)
    if near.failed:
        raise HypothesisFail("group is not nearly proper", witness=near.witness)
    quot = orbit_quotient(inst, G)
    q = quot.space
    dq = []
    for d in D:
        c = q.closure(quot.project(d))
        if not dq or c != dq[-1]:
            dq.append(c)
    if dq and dq[-1] != q.points:
        dq.append(q.points)
    try:
        dec = exhaustion_decomposition(q, dq)
    except BadExhaustion as exc:
        raise HypothesisFail(f"quotient exhaustion: {exc}", witness=exc.witness) from exc
    _record(trace, "lemma5.3:quotient exhaustion", K=[sorted(k) for k in dec.K], L=[sorted(l) for l in dec.L])
    candidates = [b for b in inst.basis if inst.bounded_closure(b) is not False]
    chosen = []
    for i, (k_i, l_i) in enumerate(zip(dec.K, dec.L), start=1):
        family, covered = [], set()
        for o in sorted(k_i):
            if o in covered:
                continue
            b = next((b for b in candidates if o in quot.project(b) and quot.project(b) <= l_i), None)
            if b is None:
                raise HypothesisFail("lemma5.3:K_i coverage", witness={"i": i, "orbit": o})
            family.append(b)
            covered |= quot.project(b)
        chosen.extend(family)
        _record(trace, f"lemma5.3:F_{i}", F=[sorted(b) for b in family])
    v = saturate_cover(G, chosen)
    pc = is_proper_cover(inst, v)
    if pc.failed:
        raise HypothesisFail("lemma5.3:saturated cover is not proper", witness=pc.witness)
    inv = is_invariant_cover(G, v)
    if inv.failed:
        raise HypothesisFail("lemma5.3:saturated cover not invariant", witness=inv.witness)
    _record(trace, "lemma5.3:output", V=[sorted(s) for s in v], proper=pc)
    return v


def default_exhaustion(inst: SpaceInstance) -> list:
    """Two-step chain: the closure of a bounded interior core, then everything."""
    gens = inst.bornology.generators
    if inst.bornology.full or not gens:
        return [inst.points]
    core = inst.interior(gens[0])
    first = inst.closure(core)
    if first and first != inst.points and inst.is_bounded(first) is not False and first <= inst.interior(inst.points):
        return [first, inst.points]
    return [inst.points]
