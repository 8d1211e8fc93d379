import itertools
from fractions import Fraction

import pytest

from chromalab import coloring, dense
from chromalab import graph as G
from chromalab import oracle as O
from chromalab.graph import Graph, SampleSpec, complement, sample_gnp


def gnp(n, p, seed):
    return sample_gnp(SampleSpec(n, p, seed))


def brute_alpha(g):
    for k in range(g.n, 0, -1):
        for s in itertools.combinations(range(g.n), k):
            if all(not g.adjacent(a, b) for a, b in itertools.combinations(s, 2)):
                return k
    return 0


def test_chromatic_examples():
    assert O.exact_chromatic(G.complete_graph(5)) == 5
    assert O.exact_chromatic(G.cycle_graph(5)) == 3
    assert O.exact_chromatic(G.empty_graph(0)) == 0
    assert O.exact_chromatic(G.empty_graph(4)) == 1
    pet = G.petersen_graph()
    assert O.exact_chromatic(pet) == 3
    assert not O.is_k_colorable(pet, 2) and O.is_k_colorable(pet, 3)
    cols = O.exact_coloring(pet)
    assert all(cols[u] != cols[v] for u, v in pet.edges())


def test_chromatic_against_k_colorability():
    for seed in range(200):
        n = 3 + seed % 6
        g = gnp(n, [0.2, 0.5, 0.8][seed % 3], seed)
        chi = O.exact_chromatic(g)
        assert O.is_k_colorable(g, chi) and not O.is_k_colorable(g, chi - 1), seed
        cols = O.exact_coloring(g)
        assert max(cols) + 1 == chi and all(cols[u] != cols[v] for u, v in g.edges())


def test_clique_chi_degeneracy_sandwich():
    for seed in range(60):
        g = gnp(18, [0.2, 0.5, 0.7][seed % 3], seed)
        assert O.clique_number(g) <= O.exact_chromatic(g) <= coloring.degeneracy_coloring(g).num_colors


def test_independence_number():
    assert O.exact_max_independent_set(G.empty_graph(7)) == 7
    assert O.exact_max_independent_set(G.complete_graph(7)) == 1
    assert O.exact_max_independent_set(G.cycle_graph(7)) == 3
    for seed in range(40):
        g = gnp(11, 0.4, seed)
        alpha = O.exact_max_independent_set(g)
        assert alpha == brute_alpha(g) == O.clique_number(complement(g))


def test_brute_matching():
    assert O.brute_matching(Graph.from_edges(8, [(0, 1), (2, 3), (4, 5), (6, 7)])) == 4
    assert O.brute_matching(G.star_graph(5)) == 1
    for seed in range(30):
        g = gnp(12, 0.4, seed)
        assert O.brute_matching(g) == dense.max_matching(g)


def test_budgets():
    with pytest.raises(O.BudgetExceeded):
        O.exact_chromatic(G.empty_graph(61))
    with pytest.raises(O.BudgetExceeded):
        O.brute_matching(G.empty_graph(17))
    small = O.OracleBudget(max_vertices=5)
    with pytest.raises(O.BudgetExceeded):
        O.exact_max_independent_set(G.empty_graph(6), small)
    with pytest.raises(O.BudgetExceeded):
        O.exact_chromatic(gnp(60, 0.5, 1), O.OracleBudget(time_limit=0.0))


def test_small_component_enumeration_examples():
    q = 0.3
    two = O.enumerate_small_component_graphs(2, q)
    assert two[1] == pytest.approx(q) and two[0] == pytest.approx(1 - q)
    three = O.enumerate_small_component_graphs(3, q)
    w0, w1 = (1 - q) ** 3, 3 * q * (1 - q) ** 2
    assert three[0] == pytest.approx(w0 / (w0 + w1), rel=1e-14)
    assert three[1] == pytest.approx(w1 / (w0 + w1), rel=1e-14)
    exact = O.enumerate_small_component_graphs(6, 0.25, exact=True)
    assert sum(exact.values()) == 1 and all(isinstance(v, Fraction) for v in exact.values())
    for Y in range(11):
        assert abs(sum(O.enumerate_small_component_graphs(Y, 0.4).values()) - 1) <= 1e-12
    with pytest.raises(ValueError):
        O.enumerate_small_component_graphs(11, 0.5)
    with pytest.raises(ValueError):
        O.enumerate_small_component_graphs(4, 1.0)


def test_enumeration_counts_matchings():
    # the number of labelled matchings with m edges on Y vertices
    from math import comb, factorial

    for Y in range(2, 9):
        dist = O.enumerate_small_component_graphs(Y, 0.5, exact=True)
        pairs = comb(Y, 2)
        counts = {m: comb(Y, 2 * m) * factorial(2 * m) // (factorial(m) * 2**m)
                  for m in range(Y // 2 + 1)}
        total = sum(counts.values())
        for m, c in counts.items():
            assert dist[m] == Fraction(c, total), (Y, m, pairs)


@pytest.mark.parametrize("Y", [6, 8, 10])
def test_ratios_match_closed_form(Y):
    for q in (0.2, 0.5, 0.8):
        dist = O.enumerate_small_component_graphs(Y, q)
        for m in range(Y // 2):
            assert dist[m] / dist[m + 1] == pytest.approx(dense.phi_ratio(Y, q, m), rel=1e-12)
