from itertools import combinations, product

from hypothesis import given, settings
from hypothesis import strategies as st

from flexcolor.assignment import (all_assignments, canonical_assignments, class_families, ell, f_minus_indicator,
                                  f_restrict, family_to_lists, format_lists, parse_lists)
from flexcolor.choosability import colorings
from flexcolor.graph import Graph, complete_graph, empty_graph, path_graph
from flexcolor.reducibility import check_fix_prime, check_forb_subsets

from conftest import graphs


def test_ell_examples():
    g = Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    assert ell(g, [3], 4) == (3,)
    assert ell(g, [1], 4) == (2,)  # degree-2 vertex alone
    assert ell(g, range(4), 4) == (4, 4, 4, 4)
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert ell(star, [0], 4) == (1,)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=7), st.data())
def test_ell_formula_and_monotone(g, data):
    vs = sorted(data.draw(st.sets(st.integers(0, g.n - 1), min_size=1)))
    extra = data.draw(st.integers(0, g.n - 1))
    small = dict(zip(vs, ell(g, vs, 4)))
    for v in vs:
        assert small[v] == 4 - g.degree(v) + len(g.neighbors(v) & set(vs))
    big = dict(zip(sorted(set(vs) | {extra}), ell(g, set(vs) | {extra}, 4)))
    assert all(big[v] >= small[v] for v in vs)


def test_f_restrict_examples():
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    rest, values, id_map = f_restrict(star, (3, 3, 3, 3), {1, 2, 3})
    assert rest.n == 1 and values == (0,) and id_map == (0,)
    _, values, id_map = f_restrict(path_graph(3), (2, 2, 2), {0})
    assert values == (1, 2) and id_map == (1, 2)
    _, values, _ = f_restrict(path_graph(3), (2, 2, 2), set())
    assert values == (2, 2, 2)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=7), st.data())
def test_f_restrict_composes(g, data):
    f = tuple(data.draw(st.lists(st.integers(0, 4), min_size=g.n, max_size=g.n)))
    u = data.draw(st.sets(st.integers(0, g.n - 1), max_size=g.n - 1))
    rest, fu, id_map = f_restrict(g, f, u)
    w_local = data.draw(st.sets(st.integers(0, rest.n - 1))) if rest.n else set()
    _, fuw, id2 = f_restrict(rest, fu, w_local)
    _, direct, id3 = f_restrict(g, f, u | {id_map[i] for i in w_local})
    assert tuple(id_map[i] for i in id2) == id3
    assert fuw == direct


def test_f_minus_indicator_examples():
    assert f_minus_indicator((2, 3), ()) == (2, 3)
    assert f_minus_indicator((2,), (0,)) == (1,)
    assert f_minus_indicator((2, 2), (0, 1)) == (1, 1)


def test_canonical_counts():
    assert list(canonical_assignments(empty_graph(1), (2,))) == [(frozenset({0, 1}),)]
    assert len(list(canonical_assignments(empty_graph(2), (1, 1)))) == 2
    # slot partitions with per-vertex distinctness: 2 + 2 + 3
    assert len(list(canonical_assignments(complete_graph(2), (2, 2)))) == 7


def _renaming_classes(lists_iter, n):
    """Oracle: canonical key of an assignment up to colour renaming (by brute force over relabelings)."""
    out = set()
    for lists in lists_iter:
        colours = sorted(set().union(*lists)) if lists else []
        best = None
        for perm in product(range(len(colours)), repeat=len(colours)):
            if len(set(perm)) != len(colours):
                continue
            ren = dict(zip(colours, perm))
            key = tuple(tuple(sorted(ren[c] for c in l)) for l in lists)
            best = key if best is None or key < best else best
        out.add(best)
    return out


def test_canonical_covers_every_concrete_assignment():
    for f in [(1, 1), (2, 1), (2, 2), (1, 2, 1), (2, 2, 1)]:
        n = len(f)
        canon = _renaming_classes(canonical_assignments(empty_graph(n), f), n)
        concrete = _renaming_classes(all_assignments(f, range(sum(f))), n)
        assert canon == concrete


def _property_holds_everywhere(g, lists_iter, t):
    for lists in lists_iter:
        if next(colorings(g, lists), None) is None:
            return False
        if check_fix_prime(g, lists) or check_forb_subsets(g, lists, t):
            return False
    return True


def test_canonical_agrees_with_concrete_on_small_graphs():
    cases = []
    for n in (1, 2, 3):
        pairs = list(combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            g = Graph(n, [e for i, e in enumerate(pairs) if mask >> i & 1])
            for f in product(range(1, 4), repeat=n):
                if sum(f) <= 6:
                    cases.append((g, f))
    for g, f in cases:
        for t in (1, 2):
            canon = _property_holds_everywhere(g, canonical_assignments(g, f), t)
            concrete = _property_holds_everywhere(g, all_assignments(f, range(sum(f))), t)
            assert canon == concrete, (g.edges, f, t)


def test_class_families_realise_sizes():
    for f in [(2, 2), (1, 2, 3), (3, 3, 3)]:
        for family in class_families(f):
            lists = family_to_lists(family, len(f))
            assert tuple(len(l) for l in lists) == f
            assert all(a & b for a, b in combinations(family, 2))


def test_lists_text_round_trip():
    lists = (frozenset({0, 3}), frozenset(), frozenset({2}))
    parsed = parse_lists(format_lists(lists))
    assert tuple(parsed[v] for v in range(3)) == lists
