import pytest

from isometrize.catalog import run_ex1_2, shift_compactification, transposition_window
from isometrize.covers import is_proper_cover, is_star_refinement
from isometrize.errors import BadExhaustion, HypothesisFail, NotEquiregular
from isometrize.gauge import ExtGauge, discrete_gauge
from isometrize.invariance import (PipelineTrace, equiregularity_check, exhaustion_decomposition,
                                   is_invariant_cover, is_invariant_gauge, near_properness_check,
                                   proper_invariant_cover, saturate_cover, stone_star_refine, translate_union)
from isometrize.space import Bornology, GroupAction, SpaceInstance, enumerate_group


def discrete(n, bornology=None):
    return SpaceInstance(n, tuple(frozenset([i]) for i in range(n)), bornology or Bornology.everything())


def swap_group(n=4, perm=(1, 0, 3, 2)):
    return enumerate_group(discrete(n), [perm])


def test_invariant_cover_witness():
    G = enumerate_group(discrete(4), [(0, 2, 1, 3)])
    u = [{0, 1}, {2, 3}]
    v = is_invariant_cover(G, u)
    assert v.failed and v.witness["image"] == [0, 2]
    sat = saturate_cover(G, u)
    assert set(sat.sets) == {frozenset(s) for s in ({0, 1}, {0, 2}, {2, 3}, {1, 3})}
    assert is_invariant_cover(G, sat)


def test_trivial_group_makes_everything_invariant():
    G = GroupAction.trivial(3)
    assert is_invariant_cover(G, [{0}, {1, 2}])
    assert is_invariant_gauge(G, discrete_gauge(3))


def test_invariant_gauge():
    G = swap_group()
    assert is_invariant_gauge(G, discrete_gauge(4))
    rho = discrete_gauge(4).values
    lop = [list(r) for r in rho]
    lop[0][2] = lop[2][0] = 2
    assert is_invariant_gauge(G, ExtGauge(tuple(map(tuple, lop)))).failed


def test_equiregular_discrete():
    inst = discrete(4)
    v, witness = equiregularity_check(inst, swap_group())
    assert v and witness is not None


def test_compactified_shift_is_not_equiregular_at_plus():
    inst, G = shift_compactification(3)
    v, witness = equiregularity_check(inst, G)
    assert v.failed and witness is None
    assert inst.label(v.witness["x"]) == "p+"
    rep = run_ex1_2()
    assert rep.matches, rep.as_dict()


def test_translate_union():
    G = enumerate_group(discrete(3), [(0, 2, 1)])
    union, total = translate_union(G, {0, 1}, {0})
    assert union == frozenset({0, 1, 2}) and total


def test_near_properness():
    G = enumerate_group(discrete(3), [(0, 2, 1)])
    assert near_properness_check(discrete(3), G)
    inst = discrete(3, Bornology((frozenset({0, 1}), frozenset({0, 2}))))
    v = near_properness_check(inst, G)
    assert v.failed and v.witness["union"] == [0, 1, 2]
    assert near_properness_check(inst, GroupAction.trivial(3))


def test_windowed_near_properness_cannot_refute_past_the_frontier():
    h = transposition_window(4)
    v = near_properness_check(h.inst, h.group, probes=[frozenset({0})])
    assert not v.failed


def test_exhaustion_decomposition():
    inst = discrete(4)
    dec = exhaustion_decomposition(inst, [{0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}])
    assert dec.checks
    assert dec.K == tuple(frozenset([i]) for i in range(4))
    for i in range(4):
        assert dec.K[i] <= dec.L[i]


@pytest.mark.parametrize("chain", [[], [{0, 1}, {0}], [{0}, {0, 1}]])
def test_bad_exhaustions(chain):
    with pytest.raises(BadExhaustion):
        exhaustion_decomposition(discrete(4), chain)


def test_non_closed_exhaustion():
    sier = SpaceInstance(2, (frozenset([0]), frozenset([0, 1])))
    with pytest.raises(BadExhaustion):
        exhaustion_decomposition(sier, [{0}, {0, 1}])


def test_proper_invariant_cover():
    inst, G = discrete(4), swap_group()
    trace = PipelineTrace()
    v = proper_invariant_cover(inst, G, [{0, 1}, {0, 1, 2, 3}], trace)
    assert is_proper_cover(inst, v) and is_invariant_cover(G, v)
    assert any(label.startswith("lemma5.3") for label in trace.labels())


def test_proper_invariant_cover_needs_near_properness():
    G = enumerate_group(discrete(3), [(0, 2, 1)])
    inst = discrete(3, Bornology((frozenset({0, 1}), frozenset({0, 2}))))
    with pytest.raises(HypothesisFail):
        proper_invariant_cover(inst, G, [inst.points])


def test_stone_star_refine():
    inst, G = discrete(4), swap_group()
    trace = PipelineTrace()
    u = [{0, 1, 2, 3}]
    w = stone_star_refine(inst, G, u, trace=trace)
    assert is_star_refinement(w, u) and is_invariant_cover(G, w)
    assert "lemma5.1:N_x construction" in trace.labels()


def test_stone_rejects_non_invariant_input():
    G = enumerate_group(discrete(4), [(0, 2, 1, 3)])
    with pytest.raises(HypothesisFail):
        stone_star_refine(discrete(4), G, [{0, 1}, {2, 3}])


def test_stone_requires_equiregularity():
    inst, G = shift_compactification(3)
    with pytest.raises(NotEquiregular):
        stone_star_refine(inst, G, [inst.points])
