from fractions import Fraction

import pytest

from isometrize.catalog import run_ex3_3, run_ex3_4
from isometrize.errors import InvalidTunnels, NotInvariantGauge
from isometrize.gauge import ExtGauge, crevasse_partition
from isometrize.space import Bornology, SpaceInstance, enumerate_group
from isometrize.tunnels import (TunnelSystem, g_saturate_tunnels, is_invariant_tunnel_system,
                                is_proper_tunnel_system, make_chain_tunnels, make_star_tunnels,
                                saturation_hypothesis, tunnel_distance, tunnel_neighborhood,
                                tunnel_thresholds, validate_tunnel_system, verify_theorem_3_6,
                                verify_theorem_3_7)

from oracles import step_distance

INF = float("inf")
RHO = ExtGauge(((0, Fraction(1, 2), INF, INF),
                (Fraction(1, 2), 0, INF, INF),
                (INF, INF, 0, Fraction(1, 4)),
                (INF, INF, Fraction(1, 4), 0)))
BRIDGE = TunnelSystem(((1, 2, 5),))
# Frozen from oracles.step_distance.
SIGMA_0_3 = Fraction(23, 4)
SIGMA_0_2 = Fraction(11, 2)


def discrete(n, bornology=None):
    return SpaceInstance(n, tuple(frozenset([i]) for i in range(n)), bornology or Bornology.everything())


def test_oracle_reproduces_frozen_values():
    assert step_distance(RHO.values, BRIDGE.triples, 0, 3) == SIGMA_0_3
    assert step_distance(RHO.values, BRIDGE.triples, 0, 2) == SIGMA_0_2


def test_tunnel_distance_two_crevasses():
    sigma = tunnel_distance(RHO, BRIDGE)
    assert sigma(0, 3) == SIGMA_0_3 and sigma(0, 2) == SIGMA_0_2
    assert sigma(0, 1) == RHO(0, 1) and sigma(2, 2) == 0
    assert sigma.is_finite()
    for x in range(4):
        for y in range(4):
            assert sigma(x, y) == step_distance(RHO.values, BRIDGE.triples, x, y)


def test_validation():
    v = validate_tunnel_system(RHO, BRIDGE)
    assert v and v.details["lambda0"] == 5
    assert validate_tunnel_system(RHO, TunnelSystem(((0, 1, 1), (1, 2, 1)))).details["no_tunnel_in_crevasse"].failed
    assert validate_tunnel_system(RHO, TunnelSystem()).details["connected"].failed
    assert validate_tunnel_system(RHO, TunnelSystem(((1, 2, 0),))).details["positive_lengths"].failed
    with pytest.raises(InvalidTunnels):
        tunnel_distance(RHO, TunnelSystem())


def test_conflicting_lengths_rejected():
    with pytest.raises(InvalidTunnels):
        TunnelSystem(((1, 2, 1), (2, 1, 3)))


def test_theorem_3_6_example_and_no_tunnels():
    assert verify_theorem_3_6(RHO, BRIDGE)
    rho1 = ExtGauge(((0, Fraction(1, 2)), (Fraction(1, 2), 0)))
    assert tunnel_distance(rho1, TunnelSystem()) == rho1


def test_neighbourhoods():
    star = make_star_tunnels([{0}, {1}, {2}, {3}])
    assert tunnel_neighborhood(star, set(), 10) == frozenset()
    assert tunnel_neighborhood(star, {0}, Fraction(5, 2)) == frozenset({1, 2})
    assert tunnel_neighborhood(star, {0}, star.lambda0) == frozenset()
    assert tunnel_thresholds(star) == [1, 2, 3, 4]
    chain = make_chain_tunnels([{0}, {1}, {2}])
    assert chain.triples == ((0, 1, 1), (1, 2, 1))


def test_partition_from_gauge():
    assert make_chain_tunnels(crevasse_partition(RHO)).triples == ((0, 2, 1),)


def test_tunnel_properness():
    assert is_proper_tunnel_system(BRIDGE, discrete(4))
    pairs = discrete(4, Bornology((frozenset({0, 1}), frozenset({2, 3}))))
    assert is_proper_tunnel_system(BRIDGE, pairs)
    singles = discrete(4, Bornology(tuple(frozenset([i]) for i in range(4))))
    hub = TunnelSystem(((0, 1, 1), (0, 2, 1)))
    assert is_proper_tunnel_system(hub, singles).failed


def test_saturation():
    G = enumerate_group(discrete(4), [(1, 0, 3, 2)])
    sat = g_saturate_tunnels(G, RHO, BRIDGE)
    assert sat.triples == ((0, 3, 5), (1, 2, 5))
    assert is_invariant_tunnel_system(G, sat)
    assert is_invariant_tunnel_system(G, BRIDGE).failed
    assert saturation_hypothesis(G, BRIDGE, discrete(4))
    H = enumerate_group(discrete(4), [(2, 3, 0, 1)])
    with pytest.raises(NotInvariantGauge):
        g_saturate_tunnels(H, RHO, BRIDGE)


def test_theorem_3_7_single_instance():
    v = verify_theorem_3_7(RHO, BRIDGE, None, discrete(4))
    assert v and v.details["biconditional"]


def test_examples_3_3_and_3_4():
    for run in (run_ex3_3, run_ex3_4):
        rep = run()
        assert rep.matches, rep.as_dict()
