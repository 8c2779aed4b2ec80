import math
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings

from flexcolor.graph import (Graph, GraphFormatError, block_decomposition, grow_catalog, complete_graph, connected_induced_subgraphs,
                             cycle_graph, distance, from_edge_list, from_graph6, graph_catalog, mad_bruteforce,
                             mad_below, max_average_degree, path_graph, to_edge_list, to_graph6)

from conftest import graphs

PETERSEN = Graph.from_networkx(nx.petersen_graph())


def test_graph_rejects_loops_and_bad_ids():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_adjacency_is_symmetric():
    g = Graph(3, [(2, 0), (0, 1)])
    assert g.edges == ((0, 1), (0, 2))
    assert all(u in g.neighbors(v) for u, v in g.edges)


def test_induced_examples():
    k3, id_map = complete_graph(4).induced([0, 1, 2])
    assert k3 == complete_graph(3) and id_map == (0, 1, 2)
    c5, _ = cycle_graph(5).induced(range(5))
    assert c5 == cycle_graph(5)


def test_induced_petersen_five_cycle():
    h = PETERSEN.to_networkx()
    five = next(c for c in nx.simple_cycles(h, length_bound=5) if len(c) == 5)
    sub, _ = PETERSEN.induced(five)
    assert nx.is_isomorphic(sub.to_networkx(), nx.cycle_graph(5))


def _blocks(g):
    bd = block_decomposition(g)
    return sorted(sorted(b) for b in bd.blocks), set(bd.cut_vertices)


def test_blocks_examples():
    assert _blocks(path_graph(3)) == ([[0, 1], [1, 2]], {1})
    assert _blocks(complete_graph(4)) == ([[0, 1, 2, 3]], set())
    bowtie = Graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert _blocks(bowtie) == ([[0, 1, 2], [2, 3, 4]], {2})
    assert _blocks(Graph(1)) == ([[0]], set())


def _blocks_by_cycles(g: Graph) -> set[frozenset[int]]:
    """Oracle: edges are in one block iff equal or on a common cycle; isolated vertices are K1 blocks."""
    h = g.to_networkx()
    edges = list(g.edges)
    parent = list(range(len(edges)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i
    for cyc in nx.simple_cycles(h):
        ring = [tuple(sorted((cyc[i], cyc[(i + 1) % len(cyc)]))) for i in range(len(cyc))]
        ids = [edges.index(e) for e in ring]
        for i in ids[1:]:
            parent[find(i)] = find(ids[0])
    groups: dict[int, set[int]] = {}
    for i, e in enumerate(edges):
        groups.setdefault(find(i), set()).update(e)
    out = {frozenset(s) for s in groups.values()}
    out |= {frozenset([v]) for v in g.vertices if g.degree(v) == 0}
    return out


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=6))
def test_blocks_match_cycle_oracle(g):
    bd = block_decomposition(g)
    assert {frozenset(b) for b in bd.blocks} == _blocks_by_cycles(g)
    for b in bd.blocks:
        sub, _ = g.induced(b)
        assert len(b) <= 2 or all(sub.remove([v])[0].is_connected() for v in range(sub.n))


def test_mad_examples():
    assert max_average_degree(complete_graph(4)).value == 3
    assert max_average_degree(path_graph(2)).value == 1
    assert max_average_degree(PETERSEN).value == 3
    assert mad_bruteforce(PETERSEN) == 3


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8))
def test_mad_matches_bruteforce(g):
    res = max_average_degree(g)
    assert res.value == mad_bruteforce(g)
    if g.n:
        sub, _ = g.induced(res.witness)
        assert Fraction(2 * sub.m, sub.n) == res.value


def test_distance():
    assert distance(path_graph(4), 2, 2) == 0
    assert distance(path_graph(4), 0, 3) == 3
    assert distance(Graph(2), 0, 1) == math.inf


def test_connected_subsets_examples():
    got = list(connected_induced_subgraphs(complete_graph(3), 2))
    assert got == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    assert len(list(connected_induced_subgraphs(path_graph(3), 3))) == 6
    assert len(list(connected_induced_subgraphs(cycle_graph(5), 3))) == 15


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7))
def test_connected_subsets_match_bruteforce(g):
    got = list(connected_induced_subgraphs(g, g.n))
    expect = [s for k in range(1, g.n + 1) for s in combinations(range(g.n), k) if g.induced(s)[0].is_connected()]
    assert got == expect


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9))
def test_serialisation_round_trips(g):
    assert from_graph6(to_graph6(g)) == g
    assert from_edge_list(to_edge_list(g)) == g


def test_graph6_known_string():
    assert to_graph6(complete_graph(4)) == "C~"


def test_bad_inputs_raise():
    with pytest.raises(GraphFormatError):
        from_edge_list("0 1 2\n")
    with pytest.raises(GraphFormatError):
        from_graph6("\x01")


def test_catalog_counts_match_atlas():
    # connected graphs on 1..7 vertices
    assert [len(graph_catalog(n)) for n in range(1, 8)] == [1, 1, 2, 6, 21, 112, 853]


def test_catalog_growth_matches_atlas_under_hereditary_predicate():
    sparse = lambda g: mad_below(g, Fraction(3))
    atlas7 = graph_catalog(7, sparse)
    grown = grow_catalog(graph_catalog(6, sparse), sparse)
    assert len(grown) == len(atlas7)
    assert all(h.is_connected() and sparse(h) for h in grown)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7))
def test_mad_below_agrees_with_exact_value(g):
    value = mad_bruteforce(g)
    for bound in (Fraction(2), Fraction(5, 2), Fraction(3), Fraction(11, 3), Fraction(4), value, value + Fraction(1, 100)):
        assert mad_below(g, bound) == (value < bound)
