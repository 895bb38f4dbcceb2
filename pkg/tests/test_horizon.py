from fractions import Fraction

from isometrize.catalog import block_family, ex1_3_family, integer_window, transposition_window
from isometrize.gauge import discrete_gauge
from isometrize.horizon import (HorizonFamily, check_inclusions, family_equiregularity, family_gauge_properness,
                                family_near_properness, family_tunnel_properness, stabilize,
                                verify_theorem_3_7_family)
from isometrize.verdict import Status

HALF = Fraction(1, 2)


def transposition_family(horizons=(4, 5, 6)):
    hs = tuple(transposition_window(m) for m in horizons)
    return HorizonFamily("transpositions", hs, ({0, 1},), (HALF, 1, 2))


def test_horizons_are_sorted_and_labelled():
    fam = HorizonFamily("x", (integer_window(5), integer_window(3), integer_window(4)), ({0},), (HALF,))
    assert [h.m for h in fam] == [3, 4, 5]
    assert fam.last.m == 5
    assert check_inclusions(fam)


def test_stabilize_reports_first_stable_horizon():
    fam = ex1_3_family()
    v = stabilize(fam, lambda h: [("k", {0}, Status.PASS)])
    assert v and v.details["m0"] == 4 and v.note == "STABLE(4)"


def test_stabilize_growing():
    fam = ex1_3_family()
    v = stabilize(fam, lambda h: [("k", set(range(h.m)), Status.PASS)])
    assert v.failed and v.note == "GROWING"


def test_stabilize_single_horizon_failure_refutes():
    fam = ex1_3_family()
    v = stabilize(fam, lambda h: [("k", {0}, Status.FAIL if h.m == 5 else Status.PASS)])
    assert v.failed and v.witness["m"] == 5


def test_transpositions_are_not_nearly_proper():
    v = family_near_properness(transposition_family())
    assert v.failed and v.witness["key"] == repr({"A": (0, 1), "B": (0, 1)})


def test_integer_shift_is_nearly_proper_and_equiregular():
    fam = ex1_3_family()
    assert family_near_properness(fam)
    assert family_equiregularity(fam)


def test_discrete_gauge_is_not_proper_on_windows():
    fam = transposition_family()
    assert family_gauge_properness(fam, lambda h: discrete_gauge(h.inst.n)).failed
    assert family_gauge_properness(fam, lambda h: discrete_gauge(h.inst.n, HALF)).failed


def test_tunnel_families():
    chain = block_family("chain", (5, 6, 7), (2,), HALF, "chain")
    star = block_family("star", (5, 6, 7), (2,), HALF, "star")
    flat = block_family("flat", (5, 6, 7), (2,), HALF, "flat")
    for fam in (chain, star):
        assert family_tunnel_properness(fam, lambda h: h.aux["tunnels"])
    assert family_tunnel_properness(flat, lambda h: h.aux["tunnels"]).failed
    for fam in (chain, star, flat):
        assert verify_theorem_3_7_family(fam).details["biconditional"]
    assert verify_theorem_3_7_family(flat).details["sigma_proper"].failed
