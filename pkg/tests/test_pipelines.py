import pytest

from isometrize.catalog import ex1_3_family, run_ex1_1, run_ex1_3, shift_compactification
from isometrize.errors import HypothesisFail, NotEquiregular, NotNearlyProper, NotSeparating
from isometrize.gauge import discrete_gauge, is_proper_gauge, is_separating, same_topology, zero_gauge
from isometrize.invariance import PipelineTrace, is_invariant_gauge
from isometrize.pipelines import (default_targets, metrize, near_properness_from_gauge, proper_metrize,
                                  proper_metrize_family, single_metrize)
from isometrize.space import Bornology, SpaceInstance, enumerate_group


def discrete(n, bornology=None):
    return SpaceInstance(n, tuple(frozenset([i]) for i in range(n)), bornology or Bornology.everything())


def swap():
    inst = discrete(4)
    return inst, enumerate_group(inst, [(1, 0, 3, 2)])


def test_metrize_discrete_swap():
    inst, G = swap()
    trace = PipelineTrace()
    fam = metrize(inst, G, depth=3, trace=trace)
    assert len(fam) == len(default_targets(inst)) == 4
    assert fam.separating()
    for g, tag in zip(fam.gauges, fam.tags):
        x, u = tag["target"]
        assert is_invariant_gauge(G, g)
        assert g.ball(x, 0.5) <= frozenset(u)
        assert all(v <= 1 for row in g.values for v in row)
    labels = trace.labels()
    assert labels[0] == "hypotheses" and "lemma5.1:N_x construction" in labels


def test_metrize_stops_at_irregular_orbit_space():
    inst, G = shift_compactification(3)
    with pytest.raises(HypothesisFail) as info:
        metrize(inst, G)
    assert info.value.stage == "hypotheses"


def test_metrize_rejects_non_equiregular_witness_search():
    inst, G = shift_compactification(3)
    with pytest.raises(NotEquiregular) as info:
        proper_metrize(inst, G)
    assert info.value.stage == "equiregularity"


def test_proper_metrize_full_bornology():
    inst, G = swap()
    pm = proper_metrize(inst, G, depth=3)
    assert pm.tau.is_finite()
    assert is_invariant_gauge(G, pm.tau) and is_proper_gauge(pm.tau, inst)
    assert all(t["proper"] == "PASS" for t in pm.family.tags)


def test_proper_metrize_refuses_non_nearly_proper():
    inst = discrete(3, Bornology((frozenset({0, 1}), frozenset({0, 2}))))
    G = enumerate_group(inst, [(0, 2, 1)])
    with pytest.raises(NotNearlyProper):
        proper_metrize(inst, G)


def test_single_metrize():
    out = single_metrize([discrete_gauge(3)])
    assert is_separating([out]) and same_topology([out], [discrete_gauge(3)])
    with pytest.raises(NotSeparating):
        single_metrize([zero_gauge(3)])
    with pytest.raises(NotSeparating):
        single_metrize([])


def test_near_properness_from_proper_gauge():
    inst, G = swap()
    pm = proper_metrize(inst, G, depth=3)
    assert not near_properness_from_gauge(inst, G, pm.tau).failed


def test_family_pipeline_integer_shift():
    res = proper_metrize_family(ex1_3_family())
    assert res.succeeded, res.as_dict()["verdicts"]
    assert res.verdicts["output_proper"] and res.verdicts["tau_proper"]
    assert run_ex1_3().matches


def test_family_pipeline_stops_on_transpositions():
    rep = run_ex1_1()
    assert rep.matches, rep.as_dict()
    assert rep.observed["proper_metrize"] == "NOT_NEARLY_PROPER"
