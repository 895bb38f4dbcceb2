from fractions import Fraction
from math import inf

import pytest

from isometrize.covers import Development
from isometrize.dyadic import INF
from isometrize.errors import BudgetExceeded, NotDevelopment, NotSeparatingWarning
from isometrize.gauge import (ExtGauge, au_distance, au_oracle, au_weights, crevasse_partition, decapitate,
                              discrete_gauge, gauge_axioms_check, is_proper_gauge, is_separating, max_combine,
                              same_topology, sup_combine, verify_lemma_3_4, verify_sandwich, verify_theorem_3_3,
                              zero_gauge)
from isometrize.space import Bornology, SpaceInstance

from oracles import chain_distance

THREE_POINT = [[{0, 1}, {1, 2}], [{0}, {1}, {2}]]
# Frozen from oracles.chain_distance.
AU_THREE_POINT = {(0, 1): Fraction(1, 2), (0, 2): Fraction(1), (1, 2): Fraction(1, 2)}
AU_SINGLE_LEVEL = Fraction(1, 2)
TWO_LINK = [[{0, 1}, {1, 2}]]
AU_TWO_LINK = Fraction(1)


def discrete_instance(n, bornology=None):
    basis = tuple(frozenset([i]) for i in range(n))
    return SpaceInstance(n, basis, bornology or Bornology.everything())


def test_oracle_reproduces_frozen_values():
    for (x, y), v in AU_THREE_POINT.items():
        assert chain_distance(THREE_POINT, x, y) == v
    assert chain_distance([[{0, 1, 2}]], 0, 2) == AU_SINGLE_LEVEL
    assert chain_distance([[{0}, {1}]], 0, 1) == inf


def test_au_three_point():
    rho = au_distance(THREE_POINT)
    for (x, y), v in AU_THREE_POINT.items():
        assert rho(x, y) == v == rho(y, x)
    assert all(rho(x, x) == 0 for x in range(3))


def test_au_small_cases():
    assert au_distance([[{0, 1, 2}]])(0, 2) == AU_SINGLE_LEVEL
    assert au_distance([[{0}, {1}]])(0, 1) == INF
    assert au_distance([[{0}, {1}]]).matrix_strings()[0][1] == "inf"


def test_au_rejects_non_development():
    with pytest.raises(NotDevelopment):
        au_distance([[{0, 1}, {1, 2}], [{0, 1}, {1, 2}]])


def test_au_weights_take_deepest_level():
    w = au_weights(Development(([{0, 1}], [{0, 1}, {2}])))
    assert w.weight({0, 1}) == Fraction(1, 4)


def test_oracle_link_budget():
    assert au_oracle(TWO_LINK, max_links=2)(0, 2) == AU_TWO_LINK
    assert au_oracle(TWO_LINK, max_links=1)(0, 2) > AU_TWO_LINK
    with pytest.raises(BudgetExceeded):
        au_oracle(THREE_POINT, max_links=3, budget=2)


def test_sandwich_three_point():
    dev = Development(tuple(THREE_POINT))
    v = verify_sandwich(au_distance(dev), dev)
    assert v and v.details["left"] and v.details["right"]


def test_sandwich_detects_wrong_gauge():
    dev = Development(tuple(THREE_POINT))
    assert verify_sandwich(zero_gauge(3), dev).failed


def test_decapitate_and_max():
    rho = au_distance(THREE_POINT)
    big = ExtGauge.from_function(3, lambda i, j: 0 if i == j else 4)
    assert decapitate(big)(0, 1) == 1
    assert decapitate(rho) == rho
    m = max_combine([rho, discrete_gauge(3, Fraction(3, 4))])
    assert m(0, 1) == Fraction(3, 4) and m(0, 2) == 1


def test_sup_combine_weights_by_index():
    out = sup_combine([discrete_gauge(3), zero_gauge(3)])
    assert out(0, 1) == Fraction(1, 2)
    with pytest.raises(ValueError):
        sup_combine([discrete_gauge(3, 2)])
    with pytest.warns(NotSeparatingWarning):
        sup_combine([zero_gauge(2)])


def test_separation():
    assert is_separating([zero_gauge(2), discrete_gauge(2)])
    assert is_separating([zero_gauge(2)]).witness == (0, 1)


def test_crevasse_partition():
    rho = au_distance([[{0, 1}, {2}], [{0}, {1}, {2}]])
    part = crevasse_partition(rho)
    assert part.blocks == (frozenset({0, 1}), frozenset({2}))
    assert part.representatives == (0, 2)


def test_axioms():
    inst = discrete_instance(3)
    assert gauge_axioms_check(au_distance(THREE_POINT), inst, metric=True)
    bad = ExtGauge(((0, 1, 3), (1, 0, 1), (3, 1, 0)))
    assert gauge_axioms_check(bad).details["triangle"].failed
    asym = ExtGauge(((0, 1), (2, 0)))
    assert gauge_axioms_check(asym).details["symmetry"].failed
    sier = SpaceInstance(2, (frozenset([0]), frozenset([0, 1])))
    assert gauge_axioms_check(discrete_gauge(2), sier).details["open_balls"].failed


def test_proper_gauge():
    full = discrete_instance(3)
    rho = au_distance(THREE_POINT)
    assert is_proper_gauge(rho, full)
    small = discrete_instance(3, Bornology((frozenset({0, 1}),)))
    r = is_proper_gauge(rho, small)
    assert r.failed and r.witness["x"] == 0


def test_same_topology():
    assert same_topology([discrete_gauge(3)], [discrete_gauge(3, Fraction(1, 2))])
    assert same_topology([discrete_gauge(3)], [zero_gauge(3)]).failed


def test_lemma_3_4_three_point():
    dev = Development(tuple(THREE_POINT))
    v = verify_lemma_3_4(au_distance(dev), dev)
    assert v and v.details["star_in_ball"] and v.details["ball_in_iterated_star"]


def test_theorem_3_3_both_directions():
    dev = Development(tuple(THREE_POINT))
    full = verify_theorem_3_3(dev, discrete_instance(3))
    assert full and full.details["cover_proper"] and full.details["gauge_proper"]
    small = discrete_instance(3, Bornology((frozenset({0, 1}),)))
    v = verify_theorem_3_3(dev, small)
    assert v and v.details["cover_proper"].failed and v.details["gauge_proper"].failed
