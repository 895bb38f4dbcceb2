"""Property tests for the invariants each module promises."""

import random
from fractions import Fraction

from hypothesis import given, strategies as st

from isometrize import corpus
from isometrize.covers import (chain_components, is_proper_cover, is_star_refinement, iterated_star, k_refines,
                               star)
from isometrize.document import emit_document, parse_document, Bundle
from isometrize.dyadic import INF, is_dyadic
from isometrize.gauge import (au_distance, au_oracle, decapitate, gauge_axioms_check, max_combine, same_topology,
                              verify_sandwich)
from isometrize.invariance import is_invariant_gauge
from isometrize.pipelines import metrize, single_metrize
from isometrize.space import Bornology, SpaceInstance, image, orbit_quotient
from isometrize.tunnels import g_saturate_tunnels, tunnel_distance, tunnel_neighborhood, tunnel_thresholds

seeds = st.integers(0, 2 ** 32 - 1)


def rng_of(seed):
    return random.Random(seed)


def topology(seed):
    rng = rng_of(seed)
    n = rng.randint(1, 6)
    return SpaceInstance(n, corpus.random_base_topology(rng, n, rng.choice(["partition", "discrete", "random"])))


def subsets(n):
    return st.frozensets(st.integers(0, n - 1), max_size=n)


# -- space model ----------------------------------------------------------------------


@given(seeds, st.data())
def test_closure_idempotent_and_additive(seed, data):
    inst = topology(seed)
    a, b = data.draw(subsets(inst.n)), data.draw(subsets(inst.n))
    assert inst.closure(inst.closure(a)) == inst.closure(a)
    assert inst.closure(a | b) == inst.closure(a) | inst.closure(b)


@given(seeds)
def test_group_elements_are_homeomorphisms(seed):
    case = corpus.random_group_case(rng_of(seed), max_points=6)
    inst = case.inst
    for g in case.group:
        inv = tuple(sorted(range(inst.n), key=lambda i: g[i]))
        for b in inst.basis:
            assert inst.is_open(image(g, b)[0]) and inst.is_open(image(inv, b)[0])


@given(seeds, st.data())
def test_quotient_open_criterion(seed, data):
    case = corpus.random_group_case(rng_of(seed), max_points=6)
    quot = orbit_quotient(case.inst, case.group)
    a = data.draw(subsets(quot.space.n)) if quot.space.n else frozenset()
    assert quot.space.is_open(a) == case.inst.is_open(quot.preimage(a))


@given(st.lists(subsets(6), min_size=1, max_size=4), st.data())
def test_bornology_ideal(gens, data):
    chain = []
    for g in gens:
        chain.append(g | (chain[-1] if chain else frozenset()))
    born = Bornology(tuple(chain))
    a, b = data.draw(subsets(6)), data.draw(subsets(6))
    if born.bounded(a):
        assert born.bounded(a & b)
        if born.bounded(b):
            assert born.bounded(a | b)


# -- cover operations -----------------------------------------------------------------


def cover(seed, n=None):
    rng = rng_of(seed)
    n = n or rng.randint(1, 6)
    return corpus.random_cover(rng, range(n), rng.randint(1, 5)), n


@given(seeds, st.data())
def test_star_monotone(seed, data):
    u, n = cover(seed)
    a = data.draw(subsets(n))
    b = a | data.draw(subsets(n))
    assert star(a, u) <= star(b, u)
    v, _ = cover(seed + 1, n)
    assert star(a, u) <= star(a, list(u) + list(v))


@given(seeds)
def test_components_are_star_fixed_points(seed):
    u, n = cover(seed)
    for c in chain_components(u):
        for x in c:
            assert iterated_star({x}, u, n + 1) == c


@given(seeds)
def test_star_refinement_is_two_refinement(seed):
    u, n = cover(seed)
    v, _ = cover(seed + 7, n)
    if is_star_refinement(v, u):
        assert k_refines(v, u, 2)


@given(seeds)
def test_two_refinements_compose(seed):
    rng = rng_of(seed)
    d = corpus.random_three_development(rng, n=rng.randint(1, 6), depth=3)
    w, v, u = d[3], d[2], d[1]
    if k_refines(w, v, 2) and k_refines(v, u, 2):
        assert k_refines(w, u, 4) and k_refines(w, u, 3)


@given(seeds)
def test_full_bornology_makes_every_cover_proper(seed):
    u, n = cover(seed)
    inst = SpaceInstance(n, tuple(frozenset([i]) for i in range(n)))
    assert is_proper_cover(inst, u)


# -- chain distance ---------------------------------------------------------------------


def development(seed, three=False):
    rng = rng_of(seed)
    dev = corpus.random_three_development(rng) if three else corpus.random_development(rng, max_members=8)
    n = max(max(s) for c in dev.levels for s in c) + 1
    return dev, n


@given(seeds)
def test_recursion_matches_oracle(seed):
    dev, n = development(seed)
    members = len({s for c in dev.levels for s in c})
    assert au_distance(dev, n, check=False) == au_oracle(dev, members, n)


@given(seeds)
def test_deeper_level_never_increases_distance(seed):
    dev, n = development(seed)
    deeper = dev.extend(corpus.random_cover(rng_of(seed + 1), range(n), 3))
    a, b = au_distance(dev, n, check=False), au_distance(deeper, n, check=False)
    assert all(b(x, y) <= a(x, y) for x in range(n) for y in range(n))


@given(seeds)
def test_right_sandwich_always(seed):
    dev, n = development(seed)
    assert verify_sandwich(au_distance(dev, n, check=False), dev).details["right"]


@given(seeds)
def test_sandwich_on_three_developments(seed):
    dev, _ = development(seed, three=True)
    assert verify_sandwich(au_distance(dev), dev)


@given(seeds)
def test_values_are_exact(seed):
    dev, n = development(seed)
    rho = au_distance(dev, n, check=False)
    assert all(v == INF or (isinstance(v, Fraction) and is_dyadic(v)) for row in rho.values for v in row)


@given(seeds)
def test_decapitate_and_max_keep_axioms(seed):
    d1, n = development(seed, three=True)
    d2 = corpus.random_three_development(rng_of(seed + 3), n=n)
    r1, r2 = au_distance(d1, n), au_distance(d2, n)
    m = max_combine([r1, r2])
    assert gauge_axioms_check(decapitate(r1)) and gauge_axioms_check(m)
    for x in range(n):
        for eps in {v for g in (r1, r2) for v in g.finite_values(x)} | {Fraction(1, 8)}:
            assert m.ball(x, eps) == r1.ball(x, eps) & r2.ball(x, eps)


# -- tunnels ------------------------------------------------------------------------------


def gauge_tunnels(seed):
    rng = rng_of(seed)
    rho = corpus.random_crevasse_gauge(rng, rng.randint(2, 7))
    return rho, corpus.random_tunnels(rng, rho)


@given(seeds)
def test_sigma_relations(seed):
    rho, T = gauge_tunnels(seed)
    sigma = tunnel_distance(rho, T)
    n, lam0 = rho.n, T.lambda0
    for x in range(n):
        for y in range(n):
            assert sigma(x, y) <= rho(x, y) and sigma(x, y) != INF
            if min(rho(x, y), sigma(x, y)) < lam0:
                assert sigma(x, y) == rho(x, y)


@given(seeds, st.data())
def test_tunnel_neighbourhood_inside_sigma_ball(seed, data):
    rho, T = gauge_tunnels(seed)
    sigma = tunnel_distance(rho, T)
    a = data.draw(subsets(rho.n))
    for eps in tunnel_thresholds(T):
        assert tunnel_neighborhood(T, a, eps) <= sigma.set_ball(a, eps)


@given(seeds)
def test_saturation_is_a_fixed_point(seed):
    inst, G, rho, T = corpus.copies_gauge_case(rng_of(seed))
    S = g_saturate_tunnels(G, rho, T)
    assert g_saturate_tunnels(G, rho, S) == S


# -- pipelines and documents -----------------------------------------------------------------


@given(seeds)
def test_single_metrize_keeps_the_topology(seed):
    case = corpus.random_group_case(rng_of(seed), max_points=5, styles=("partition", "discrete"))
    fam = metrize(case.inst, case.group, depth=2)
    if fam.separating():
        out = single_metrize(fam)
        assert same_topology([out], list(fam)) and is_invariant_gauge(case.group, out)


@given(seeds)
def test_document_round_trip(seed):
    rng = rng_of(seed)
    inst, G, rho, T = corpus.copies_gauge_case(rng, max_points=6)
    b = Bundle(inst, G, gauges={"rho": rho}, tunnels={"T": T},
               covers={"U": corpus.random_cover(rng, range(inst.n), 3)})
    text = emit_document(b)
    again = parse_document(text)
    assert emit_document(again) == text
    assert again.gauges["rho"] == rho and again.tunnels["T"] == T
