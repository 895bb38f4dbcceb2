from fractions import Fraction

import pytest

from isometrize.catalog import ball_cover, example_2_1_metric
from isometrize.covers import (Cover, Development, chain_components, is_development, is_proper_cover,
                               is_star_refinement, iterated_star, k_refines, star)
from isometrize.dyadic import pow2
from isometrize.space import Bornology, SpaceInstance

from oracles import star as star_oracle

# Frozen from oracles.star; Star^2 applies the one-step star twice.
STAR_1 = frozenset({0, 1, 2})
ITERATED_STAR_2 = frozenset({0, 1, 2})
ITERATED_STAR_3 = frozenset({0, 1, 2, 3})

PATH = [{0, 1}, {1, 2}, {2, 3}]


def test_star_examples():
    assert star(set(), [{0, 1}]) == frozenset()
    u = [{0, 1}, {1, 2}, {3}]
    assert star({1}, u) == STAR_1 == star_oracle({1}, u)
    assert star({0, 1, 2, 3}, u) == frozenset(range(4))


def test_iterated_star():
    assert iterated_star({0}, PATH, 1) == star({0}, PATH)
    assert iterated_star({0}, PATH, 2) == ITERATED_STAR_2 == star_oracle(star_oracle({0}, PATH), PATH)
    assert iterated_star({0}, PATH, 3) == ITERATED_STAR_3
    assert iterated_star({0}, PATH, 50) == frozenset(range(4))
    with pytest.raises(ValueError):
        iterated_star({0}, PATH, 0)


def test_chain_components():
    assert chain_components([{0, 1}, {1, 2}]) == [frozenset({0, 1, 2})]
    assert len(chain_components([{0}, {1}])) == 2
    assert len(chain_components([{0, 1, 2}])) == 1


def test_star_refinement_examples():
    x = [{0, 1, 2}]
    assert is_star_refinement(x, x)
    v = [{0, 1}, {1, 2}]
    r = is_star_refinement(v, v)
    assert r.failed and r.witness == 1


def test_half_balls_star_refine_balls():
    _, rho = example_2_1_metric()
    for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2)):
        assert is_star_refinement(ball_cover(rho, eps / 2), ball_cover(rho, eps))


def test_k_refines():
    singles = [{0}, {1}, {2}]
    assert k_refines(singles, [{0, 1}, {2}], 3)
    # a star refinement is a 2-refinement
    v, u = [{0}, {1}, {2}, {0, 1}], [{0, 1}, {0, 1, 2}]
    assert is_star_refinement(v, u) and k_refines(v, u, 2)


def test_development_examples():
    assert is_development([[{0, 1, 2}]])
    _, rho = example_2_1_metric()
    assert is_development(Development(tuple(ball_cover(rho, pow2(-n)) for n in (1, 2, 3))))
    bad = is_development([[{0, 1}, {1, 2}], [{0, 1}, {1, 2}]])
    assert bad.failed and len(bad.witness) == 5


def test_proper_cover():
    full = SpaceInstance(3, (frozenset([0]), frozenset([1]), frozenset([2])))
    assert is_proper_cover(full, [{0, 1}, {2}])
    small = SpaceInstance(3, full.basis, Bornology((frozenset([0, 1]),)))
    r = is_proper_cover(small, [{0, 1, 2}])
    assert r.failed


def test_development_requires_a_level():
    with pytest.raises(ValueError):
        Development(())


def test_cover_drops_duplicates_and_empty_sets():
    assert Cover(({0}, {0}, set())).sets == (frozenset({0}),)
