"""Brute-force reference computations, written without the package's algorithms.

Each oracle follows the defining formula literally: enumerate chains, step
sequences, words or neighbourhoods and take the minimum or test membership.
They are slow and only meant for tiny instances.
"""

from fractions import Fraction
from itertools import permutations
from math import inf


def chain_distance(levels, x, y):
    """Infimum of summed weights over simple chains of cover members from ``x`` to ``y``.

    A member weighs ``2**-n`` for the deepest level ``n`` (1-based) listing it.
    """
    if x == y:
        return Fraction(0)
    weight = {}
    for n, cover in enumerate(levels, start=1):
        for s in cover:
            weight[frozenset(s)] = Fraction(1, 2 ** n)
    members = list(weight)
    best = inf
    for k in range(1, len(members) + 1):
        for chain in permutations(members, k):
            if x not in chain[0] or y not in chain[-1]:
                continue
            if any(not (a & b) for a, b in zip(chain, chain[1:])):
                continue
            best = min(best, sum(weight[s] for s in chain))
    return best


def step_distance(rho, tunnels, x, y):
    """Cheapest sequence of distinct points where each hop is a finite rho hop or a tunnel."""
    n = len(rho)
    if x == y:
        return Fraction(0)
    hop = {}
    for a in range(n):
        for b in range(n):
            if a != b and rho[a][b] != inf:
                hop[(a, b)] = rho[a][b]
    for a, b, length in tunnels:
        for key in ((a, b), (b, a)):
            hop[key] = min(hop.get(key, inf), length)
    others = [p for p in range(n) if p not in (x, y)]
    best = inf
    for k in range(len(others) + 1):
        for mid in permutations(others, k):
            path = (x,) + mid + (y,)
            cost = 0
            for a, b in zip(path, path[1:]):
                cost += hop.get((a, b), inf)
            best = min(best, cost)
    return best


def closure(n, basis, a):
    """Points all of whose basic neighbourhoods meet ``a``."""
    a = frozenset(a)
    return frozenset(x for x in range(n) if all(b & a for b in basis if x in b))


def group_closure(gens, n):
    """All products of generators, found by repeated multiplication until nothing new appears."""
    e = tuple(range(n))
    elems = {e}
    frontier = {e}
    while frontier:
        new = set()
        for h in frontier:
            for g in gens:
                gh = tuple(g[h[i]] for i in range(n))
                if gh not in elems:
                    new.add(gh)
        elems |= new
        frontier = new
    return elems


def star(a, cover):
    a = frozenset(a)
    return frozenset().union(*[frozenset(s) for s in cover if frozenset(s) & a])
