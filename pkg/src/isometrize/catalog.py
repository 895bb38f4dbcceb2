"""Built-in instances with their documented verdicts.

Infinite examples appear as horizon families (growing windows with a frontier).
The compactified shift stands in for a squaring map on an interval: points
``a_i`` drift toward ``p+`` under the shift and toward ``p-`` under its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .covers import Cover, Development, is_development, is_star_refinement, star
from .dyadic import HALF, INF, ONE, ZERO, pow2
from .gauge import ExtGauge, crevasse_partition, discrete_gauge, same_topology
from .horizon import (Horizon, HorizonFamily, check_inclusions, family_equiregularity, family_near_properness,
                      verify_theorem_3_7_family)
from .invariance import equiregularity_check, is_invariant_gauge, near_properness_check
from .pipelines import proper_metrize_family, single_metrize
from .space import Bornology, GroupAction, SpaceInstance, enumerate_group, hypothesis_report, windowed_action
from .tunnels import (TunnelSystem, make_chain_tunnels, make_star_tunnels, tunnel_distance,
                      tunnel_neighborhood, verify_theorem_3_7)
from .verdict import Verdict, combine


def window_bornology(n: int, frontier) -> Bornology:
    return Bornology((frozenset(range(n)) - frozenset(frontier),))


# -- builders ------------------------------------------------------------------------


def transposition_window(m: int, cap: int = 64) -> Horizon:
    """Discrete ``{0..m}``, frontier ``{m}``, group generated by the transpositions ``(1 k)``."""
    n = m + 1
    front = frozenset([m])
    inst = SpaceInstance(n, tuple(frozenset([i]) for i in range(n)), window_bornology(n, front),
                         tuple(range(n)), front)
    gens = []
    for k in range(2, n):
        g = list(range(n))
        g[1], g[k] = k, 1
        gens.append(tuple(g))
    G = enumerate_group(inst, gens, cap)
    return Horizon(m, inst, G, {"rho": discrete_gauge(n)})


def shift_compactification(m: int) -> tuple:
    """``p+``, ``p-`` and ``a_-m .. a_m``; frontier ``{a_-m, a_m}``; shifts by ``|t| <= 2m``."""
    labels = ("p+", "p-") + tuple(f"a{i}" for i in range(-m, m + 1))
    n = len(labels)

    def a(i):
        return 2 + i + m

    basis = [frozenset([a(i)]) for i in range(-m, m + 1)]
    basis += [frozenset([0] + [a(i) for i in range(j, m + 1)]) for j in range(-m, m + 1)]
    basis += [frozenset([1] + [a(i) for i in range(-m, k + 1)]) for k in range(-m, m + 1)]
    front = frozenset([a(-m), a(m)])
    inst = SpaceInstance(n, tuple(basis), Bornology.everything(), labels, front)

    def shift(t):
        g = [0, 1] + [None] * (2 * m + 1)
        for i in range(-m, m + 1):
            if -m <= i + t <= m:
                g[a(i)] = a(i + t)
        return tuple(g)

    G = windowed_action(inst, [shift(t) for t in range(-2 * m, 2 * m + 1)], [shift(1)])
    return inst, G


def integer_window(m: int) -> Horizon:
    """Discrete ``{-m..m}`` with frontier ``{-m, m}`` and partial translations ``|t| <= 2m``."""
    labels = tuple(range(-m, m + 1))
    n = len(labels)
    front = frozenset([0, n - 1])
    inst = SpaceInstance(n, tuple(frozenset([i]) for i in range(n)), window_bornology(n, front), labels, front)

    def shift(t):
        return tuple(i + t if 0 <= i + t < n else None for i in range(n))

    G = windowed_action(inst, [shift(t) for t in range(-2 * m, 2 * m + 1)], [shift(1)])
    return Horizon(m, inst, G)


def block_window(m: int, sizes, within, tunnels: str, grow_first: bool = False) -> Horizon:
    """Discrete crevasse blocks ``Y_0 .. Y_m`` with tunnels of a given pattern.

    ``sizes[i]`` is the size of block ``i`` (cycled); ``within`` the distance
    inside a block.  With ``grow_first`` the hub block has ``m + 1`` points, an
    unbounded crevasse whose ball of any radius beyond ``within`` grows with the
    horizon.  The last block is the frontier.  Tunnel patterns: ``chain`` (unit
    lengths), ``star`` (length ``i`` to block ``i``), ``flat`` (unit star).
    """
    blocks, labels = [], []
    for i in range(m + 1):
        size = (m + 1) if (grow_first and i == 0) else sizes[i % len(sizes)]
        start = len(labels)
        labels += [(i, j) for j in range(size)]
        blocks.append(list(range(start, start + size)))
    n = len(labels)
    block_of = {p: i for i, b in enumerate(blocks) for p in b}
    rho = ExtGauge.from_function(n, lambda x, y: ZERO if x == y else (within if block_of[x] == block_of[y] else INF))
    front = frozenset(blocks[-1])
    inst = SpaceInstance(n, tuple(frozenset([p]) for p in range(n)), window_bornology(n, front), tuple(labels), front)
    reps = [b[0] for b in blocks]
    if tunnels == "chain":
        T = make_chain_tunnels([frozenset(b) for b in blocks], reps)
    elif tunnels == "star":
        T = make_star_tunnels([frozenset(b) for b in blocks], reps)
    elif tunnels == "flat":
        T = TunnelSystem(tuple((reps[0], r, ONE) for r in reps[1:]))
    else:
        raise ValueError(f"unknown tunnel pattern {tunnels!r}")
    return Horizon(m, inst, GroupAction.trivial(n), {"rho": rho, "tunnels": T, "blocks": blocks})


def block_family(name, horizons, sizes, within, tunnels, grow_first=False, radii=None) -> HorizonFamily:
    hs = tuple(block_window(m, sizes, within, tunnels, grow_first) for m in horizons)
    radii = radii or (HALF, ONE, Fraction(5, 2), Fraction(3))
    probes = ({(0, 0)}, {(0, 0), (1, 0)})
    return HorizonFamily(name, hs, probes, tuple(radii))


def example_3_2_surrogate(blocks: int = 6) -> tuple:
    """Two-point crevasses, unit star tunnels, bounded sets = unions of two blocks."""
    n = 2 * blocks
    block_of = [p // 2 for p in range(n)]
    rho = ExtGauge.from_function(n, lambda x, y: ZERO if x == y else (HALF if block_of[x] == block_of[y] else INF))
    gens = [frozenset([2 * i, 2 * i + 1, 2 * j, 2 * j + 1]) for i in range(blocks) for j in range(i + 1, blocks)]
    inst = SpaceInstance(n, tuple(frozenset([p]) for p in range(n)), Bornology(tuple(gens)))
    T = TunnelSystem(tuple((0, 2 * i, ONE) for i in range(1, blocks)))
    return inst, rho, T


def example_2_1_metric() -> tuple:
    """Six points on a line at spacing ``1/4`` with one gap of ``1``."""
    pos = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 2), Fraction(7, 4), Fraction(2)]
    n = len(pos)
    rho = ExtGauge.from_function(n, lambda x, y: abs(pos[x] - pos[y]))
    inst = SpaceInstance(n, tuple(frozenset([p]) for p in range(n)))
    return inst, rho


def ball_cover(rho: ExtGauge, eps) -> Cover:
    return Cover(tuple(rho.ball(x, eps) for x in range(rho.n)))


# -- runners -------------------------------------------------------------------------


@dataclass(frozen=True)
class ExampleReport:
    name: str
    summary: str
    expected: dict
    observed: dict
    checks: dict = field(default_factory=dict)

    @property
    def matches(self) -> bool:
        return all(self.observed.get(k) == v for k, v in self.expected.items())

    def as_dict(self):
        return {"name": self.name, "summary": self.summary, "expected": self.expected, "observed": self.observed,
                "matches": self.matches, "checks": self.checks}


def _status(v: Verdict) -> str:
    return v.status.value


def run_ex1_1(horizons=(4, 5, 6)) -> ExampleReport:
    hs = tuple(transposition_window(m) for m in horizons)
    fam = HorizonFamily("ex1.1", hs, ({0, 1},), (HALF, ONE, Fraction(2)))
    invariant = combine(is_invariant_gauge(h.group, h.aux["rho"]) for h in fam)
    single = []
    for h in fam:
        out = single_metrize([h.aux["rho"]])
        single.append(combine([same_topology([out], [h.aux["rho"]]), is_invariant_gauge(h.group, out)]))
    singly = combine(single)
    eq = family_equiregularity(fam)
    near = family_near_properness(fam)
    pm = proper_metrize_family(fam)
    stage = pm.verdicts.get("stage")
    observed = {
        "invariant": _status(invariant),
        "singly_isometrizable": _status(singly),
        "equiregular": _status(eq),
        "nearly_proper": _status(near),
        "near_proper_witness": near.witness.get("key") if near.failed else None,
        "proper_metrize": "NOT_NEARLY_PROPER" if stage is not None else "SUCCEEDED",
    }
    expected = {"invariant": "PASS", "singly_isometrizable": "PASS", "equiregular": "PASS", "nearly_proper": "FAIL",
                "near_proper_witness": repr({"A": (0, 1), "B": (0, 1)}), "proper_metrize": "NOT_NEARLY_PROPER"}
    return ExampleReport("ex1.1", "discrete integers under transpositions (1 n)", expected, observed,
                         {"near_proper": near, "inclusions": check_inclusions(fam)})


def run_ex1_2(m: int = 3) -> ExampleReport:
    inst, G = shift_compactification(m)
    eq, _ = equiregularity_check(inst, G)
    hyp = hypothesis_report(inst, G)
    near = near_properness_check(inst, G)
    w = eq.witness if eq.failed else None
    observed = {
        "equiregular": _status(eq),
        "failure_x": inst.label(w["x"]) if w else None,
        "nearly_proper": _status(near),
        "hausdorff": _status(hyp.hausdorff_x),
        "regular": _status(hyp.regular_x),
    }
    expected = {"equiregular": "FAIL", "failure_x": "p+", "nearly_proper": "PASS", "hausdorff": "PASS", "regular": "PASS"}
    checks = {"equiregularity": eq}
    if w:
        checks["failure"] = {"x": inst.label(w["x"]), "U": [inst.label(p) for p in w["U"]],
                             "y": inst.label(w["y"]) if w.get("y") is not None else None}
    return ExampleReport("ex1.2-analogue", "two-point compactified shift", expected, observed, checks)


def ex1_3_family(horizons=(4, 5, 6)) -> HorizonFamily:
    hs = tuple(integer_window(m) for m in horizons)
    return HorizonFamily("ex1.3-window", hs, ({0}, {0, 1}), (HALF, ONE, Fraction(2), Fraction(3)))


def run_ex1_3(horizons=(4, 5, 6), depth: int = 3) -> ExampleReport:
    fam = ex1_3_family(horizons)
    eq = family_equiregularity(fam)
    near = family_near_properness(fam)
    pm = proper_metrize_family(fam, depth)
    usual = None
    if pm.succeeded:
        h = fam.last
        tau = pm.results[h.m].tau
        usual = all(tau(x, y) == abs(h.inst.label(x) - h.inst.label(y)) for x in range(h.inst.n) for y in range(h.inst.n))
    observed = {"equiregular": _status(eq), "nearly_proper": _status(near),
                "proper_metrize": "SUCCEEDED" if pm.succeeded else "FAILED", "tau_is_usual_metric": usual}
    expected = {"equiregular": "PASS", "nearly_proper": "PASS", "proper_metrize": "SUCCEEDED", "tau_is_usual_metric": True}
    return ExampleReport("ex1.3-window", "integer window under partial translations", expected, observed,
                         {"near_proper": near, "proper_metrize": pm})


def run_ex2_1() -> ExampleReport:
    inst, rho = example_2_1_metric()
    radii = [Fraction(1, 4), Fraction(1, 2), ONE, Fraction(2)]
    rows = {str(e): is_star_refinement(ball_cover(rho, e / 2), ball_cover(rho, e)) for e in radii}
    v = combine(rows.values())
    return ExampleReport("ex2.1", "half-radius balls star-refine balls", {"star_refines": "PASS"},
                         {"star_refines": _status(v)}, rows)


def run_ex2_2() -> ExampleReport:
    inst, rho = example_2_1_metric()
    dev = Development(tuple(ball_cover(rho, pow2(-n)) for n in (1, 2, 3)))
    devv = is_development(dev)
    star_dev = combine(is_star_refinement(dev[n + 1], dev[n]) for n in (1, 2))
    nested = []
    for n in (1, 2):
        for x in range(rho.n):
            s = star({x}, dev[n + 1])
            if not (rho.ball(x, pow2(-n - 1)) <= s <= rho.ball(x, pow2(-n))):
                nested.append(Verdict.fail((x, n)))
    nv = combine(nested)
    observed = {"development": _status(devv), "star_development": _status(star_dev), "nested_balls": _status(nv)}
    expected = {"development": "PASS", "star_development": "PASS", "nested_balls": "PASS"}
    return ExampleReport("ex2.2", "ball covers at scales 1/2, 1/4, 1/8", expected, observed)


def run_ex3_2(blocks: int = 6) -> ExampleReport:
    inst, rho, T = example_3_2_surrogate(blocks)
    sigma = tunnel_distance(rho, T)
    v = verify_theorem_3_7(rho, T, sigma, inst)
    d = v.details
    reps_in_ball = frozenset(2 * i for i in range(blocks)) <= inst.closure(sigma.ball(0, Fraction(2)))
    observed = {"sigma_proper": _status(d["sigma_proper"]), "rho_proper": _status(d["rho_proper"]),
                "tunnels_proper": _status(d["tunnels_proper"]), "biconditional": _status(d["biconditional"]),
                "ball_2_holds_all_representatives": reps_in_ball,
                "crevasses_after_tunnelling": len(crevasse_partition(sigma).blocks)}
    expected = {"sigma_proper": "FAIL", "rho_proper": "PASS", "tunnels_proper": "FAIL", "biconditional": "PASS",
                "ball_2_holds_all_representatives": True, "crevasses_after_tunnelling": 1}
    return ExampleReport("ex3.2-surrogate", "unit star tunnels over many crevasses", expected, observed, {"theorem3.7": v})


def _tunnel_example(name, pattern, horizons) -> ExampleReport:
    fam = block_family(name, horizons, (2,), HALF, pattern)
    v = verify_theorem_3_7_family(fam)
    d = v.details
    observed = {"tunnels_proper": _status(d["tunnels_proper"]), "sigma_proper": _status(d["sigma_proper"]),
                "rho_proper": _status(d["rho_proper"]), "biconditional": _status(d["biconditional"])}
    expected = {"tunnels_proper": "PASS", "sigma_proper": "PASS", "rho_proper": "PASS", "biconditional": "PASS"}
    checks = {"theorem3.7": v}
    if pattern == "star":
        h = fam.last
        near = tunnel_neighborhood(h.aux["tunnels"], {h.inst.index((0, 0))}, Fraction(5, 2))
        observed["T_x0_5/2"] = sorted(h.inst.label(p)[0] for p in near)
        expected["T_x0_5/2"] = [1, 2]
    return ExampleReport(name, f"{pattern} tunnels over two-point crevasses", expected, observed, checks)


def run_ex3_3(horizons=(5, 6, 7)) -> ExampleReport:
    return _tunnel_example("ex3.3", "chain", horizons)


def run_ex3_4(horizons=(5, 6, 7)) -> ExampleReport:
    return _tunnel_example("ex3.4", "star", horizons)


EXAMPLES: dict = {
    "ex1.1": run_ex1_1,
    "ex1.2-analogue": run_ex1_2,
    "ex1.3-window": run_ex1_3,
    "ex2.1": run_ex2_1,
    "ex2.2": run_ex2_2,
    "ex3.2-surrogate": run_ex3_2,
    "ex3.3": run_ex3_3,
    "ex3.4": run_ex3_4,
}

CHECK_KEYS = {
    "near-proper": "nearly_proper",
    "equiregular": "equiregular",
    "invariant": "invariant",
    "proper": "sigma_proper",
    "tunnels-proper": "tunnels_proper",
    "star-refines": "star_refines",
}


def run_example(name: str) -> ExampleReport:
    try:
        runner = EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}") from None
    return runner()
