from fractions import Fraction

import pytest

from isometrize.catalog import (CHECK_KEYS, EXAMPLES, block_window, example_3_2_surrogate, integer_window, run_example,
                                shift_compactification, transposition_window)
from isometrize.space import orbit_quotient, validate_instance

# Frozen from oracles.closure / a direct orbit listing at m = 4.
TRANSPOSITION_ORBITS = (frozenset({0}), frozenset({1, 2, 3, 4}))


def test_transposition_window():
    h = transposition_window(4)
    assert h.inst.frontier == frozenset({4})
    assert orbit_quotient(h.inst, h.group).orbits == TRANSPOSITION_ORBITS
    assert validate_instance(h.inst).valid


def test_shift_compactification_labels():
    inst, G = shift_compactification(2)
    assert inst.labels == ("p+", "p-", "a-2", "a-1", "a0", "a1", "a2")
    assert {inst.label(p) for p in inst.frontier} == {"a-2", "a2"}
    assert G.windowed


def test_integer_window_grows_by_label():
    small, big = integer_window(3), integer_window(4)
    assert set(small.inst.labels) < set(big.inst.labels)


def test_block_window_shapes():
    h = block_window(3, (1, 2), Fraction(1, 2), "chain", grow_first=True)
    sizes = [len(b) for b in h.aux["blocks"]]
    assert sizes == [4, 2, 1, 2]
    assert h.inst.labels[0] == (0, 0)
    assert {h.inst.label(p)[0] for p in h.inst.frontier} == {3}
    with pytest.raises(ValueError):
        block_window(3, (1,), Fraction(1, 2), "zigzag")


def test_example_3_2_surrogate():
    inst, rho, T = example_3_2_surrogate(4)
    assert inst.n == 8 and len(T) == 3 and T.lambda0 == 1
    assert not inst.bornology.full


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_every_example_matches(name):
    rep = run_example(name)
    assert rep.matches, rep.as_dict()
    assert rep.as_dict()["matches"] is True


def test_unknown_example():
    with pytest.raises(KeyError):
        run_example("ex9.9")


def test_check_keys_point_at_observed_fields():
    observed = set().union(*(run_example(n).observed for n in EXAMPLES))
    assert set(CHECK_KEYS.values()) <= observed
