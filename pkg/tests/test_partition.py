import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexcolor.assignment import canonical_assignments, ell
from flexcolor.choosability import PreconditionError, colorings, is_f_choosable_bruteforce, is_proper
from flexcolor.graph import Graph, complete_graph, path_graph
from flexcolor.instances import crossing_instance, far_neighbor_cycle, host_with_pendants, petal_cycle
from flexcolor.partition import (STRONG_PATTERNS, WEAK_PATTERNS, SubgraphPartition, check_crossing_preconditions,
                                 crossing_bound, crossing_over_sampler, is_strong_part, is_weak_part,
                                 match_part_pattern, part_adjacency, partition_bound, partition_sampler,
                                 split_graph, square_labeling, uniform_sampler)
from flexcolor.reducibility import check_fix_prime, check_forb_subsets, is_weakly_reductive
from flexcolor.sampling import fix_forb_stats

from conftest import random_connected


def test_partition_must_cover():
    with pytest.raises(PreconditionError):
        SubgraphPartition.make(path_graph(3), (2, 2, 2), [(0,), (1,)])
    with pytest.raises(PreconditionError):
        SubgraphPartition.make(path_graph(3), (2, 2, 2), [(0, 1), (1, 2)])


# definition oracles, walking canonical assignments

def _weak_by_patterns(sub, f):
    for lists in canonical_assignments(sub, f):
        if next(colorings(sub, lists), None) is None:
            return False
        if check_fix_prime(sub, lists) or check_forb_subsets(sub, lists, 2):
            return False
    return True


def _forb1_by_patterns(sub, f):
    if any(x < 0 for x in f):
        return False
    return all(next(colorings(sub, lists), None) is not None and not check_forb_subsets(sub, lists, 1)
               for lists in canonical_assignments(sub, f))


def _strong_oracle(p, i):
    sub, fi = p.local(i)
    if min(fi) < 1 or not _weak_by_patterns(sub, fi):
        return False
    for j in range(len(p.parts)):
        if j != i and not _forb1_by_patterns(sub, p.local(i, p.parts[j])[1]):
            return False
    rest = [v for j, q in enumerate(p.parts) if j != i for v in q]
    return bool(is_f_choosable_bruteforce(sub, p.local(i, rest)[1]))


def _weak_oracle(p, i):
    sub, fi = p.local(i)
    if min(fi) < 1 or not _weak_by_patterns(sub, fi):
        return False
    others = [j for j in range(len(p.parts)) if j != i]
    for a, j in enumerate(others):
        for jj in others[a:]:
            if not is_f_choosable_bruteforce(sub, p.local(i, p.parts[j] + p.parts[jj])[1]):
                return False
    return True


def _random_partition(rng, g, max_part):
    order = list(range(g.n))
    rng.shuffle(order)
    parts, cur = [], []
    for v in order:
        cur.append(v)
        if len(cur) == max_part or rng.random() < 0.4:
            parts.append(tuple(cur))
            cur = []
    if cur:
        parts.append(tuple(cur))
    return parts


def _random_instances(seed, count, max_n=6, max_part=3):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, max_n)
        g = random_connected(rng, n, 0.35)
        f = tuple(min(4, max(1, g.degree(v) + rng.randint(-1, 2))) for v in range(n))
        yield SubgraphPartition.make(g, f, _random_partition(rng, g, max_part))


def test_part_verifiers_match_definition_oracles():
    checked = 0
    for p in _random_instances(3, 120):
        for i in range(len(p.parts)):
            if sum(p.local(i)[1]) > 8:
                continue
            assert bool(is_strong_part(p, i)) == _strong_oracle(p, i)
            assert bool(is_weak_part(p, i)) == _weak_oracle(p, i)
            checked += 1
    assert checked > 100


def test_strong_implies_weak():
    for p in _random_instances(4, 200, max_n=7, max_part=4):
        for i in range(len(p.parts)):
            if is_strong_part(p, i):
                assert is_weak_part(p, i)


def test_strong_part_examples():
    # lone vertex with two spare colours beyond its degree
    g = path_graph(2)
    p = SubgraphPartition.make(g, (3, 2), [(0,), (1,)])
    assert is_strong_part(p, 0)
    # star centre with f = 3: fine after any one leaf, empty after all three
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    p = SubgraphPartition.make(star, (3, 2, 2, 2), [(0,), (1,), (2,), (3,)])
    verdict = is_strong_part(p, 0)
    assert not verdict and "colourable" in verdict.reason


def test_weak_path_example():
    # path 1-2-3 inside a host where the ends lead to different parts
    g = path_graph(5)
    f = (2, 2, 3, 2, 2)
    p = SubgraphPartition.make(g, f, [(1, 2, 3), (0,), (4,)])
    assert match_part_pattern(p, 0) == "weak-path"
    assert is_weak_part(p, 0)


def test_special_k4_pattern():
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    g = Graph(6, k4 + [(2, 4), (3, 5)])
    f = (4, 4, 4, 4, 2, 2)
    p = SubgraphPartition.make(g, f, [(0, 1, 2, 3), (4,), (5,)])
    assert match_part_pattern(p, 0) == "special-K4"
    assert is_strong_part(p, 0)


def test_petal_end_pattern():
    # root 0 over path 1-2, second root 3 on path start 1, path end 2 reaches outside
    g = Graph(5, [(0, 1), (0, 2), (1, 2), (3, 1), (2, 4)])
    f = (3, 3, 3, 2, 2)
    p = SubgraphPartition.make(g, f, [(0, 1, 2, 3), (4,)])
    assert match_part_pattern(p, 0) == "petal-end"
    assert is_strong_part(p, 0)


def test_no_pattern():
    p = SubgraphPartition.make(complete_graph(3), (1, 1, 1), [(0, 1, 2)])
    assert match_part_pattern(p, 0) is None


def test_pattern_matches_are_sound():
    hits = {}
    for p in _random_instances(5, 1500, max_n=7, max_part=4):
        for i in range(len(p.parts)):
            pat = match_part_pattern(p, i)
            if pat in STRONG_PATTERNS:
                assert is_strong_part(p, i), (p, i, pat)
            elif pat in WEAK_PATTERNS:
                assert is_weak_part(p, i), (p, i, pat)
            if pat:
                hits[pat] = hits.get(pat, 0) + 1
    assert len(hits) >= 5


# labelling

def _labels_ok(p, lab):
    adj = part_adjacency(p)
    for i, near in enumerate(adj):
        if any(lab.labels[i] == lab.labels[j] for j in near):
            return False
        if any(lab.labels[j] == lab.labels[jj] for j, jj in combinations(sorted(near), 2)):
            return False
    return max(lab.labels) < lab.universe


def test_square_labeling_examples():
    single = SubgraphPartition.make(path_graph(2), (2, 2), [(0, 1)])
    assert square_labeling(single).labels == (0,)
    chain = SubgraphPartition.make(path_graph(3), (2, 2, 2), [(0,), (1,), (2,)])
    assert len(set(square_labeling(chain).labels)) == 3
    inst = far_neighbor_cycle()
    assert _labels_ok(inst.partition(), square_labeling(inst.partition(), 4, 4))


def test_square_labeling_preconditions():
    p = SubgraphPartition.make(path_graph(3), (2, 2, 2), [(0, 1, 2)])
    with pytest.raises(PreconditionError):
        square_labeling(p, b=2, d=4)
    with pytest.raises(PreconditionError):
        square_labeling(p, b=4, d=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_square_labeling_property(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 12)
    g = random_connected(rng, n, 0.2)
    p = SubgraphPartition.make(g, g.degrees(), _random_partition(rng, g, 4))
    b = max(4, max(map(len, p.parts)))
    d = max(4, g.max_degree())
    lab = square_labeling(p, b, d)
    assert _labels_ok(p, lab)
    assert lab.universe in ((b * d) ** 2, (b * d) ** 2 + 1)


# partition sampler

def test_single_part_sampler_is_uniform():
    g = path_graph(3)
    lists = [{0, 1}, {0, 1, 2}, {1, 2}]
    p = SubgraphPartition.make(g, (2, 3, 2), [(0, 1, 2)])
    dist = partition_sampler(p, lists, 0, check=False).distribution()
    phis = list(colorings(g, lists))
    assert dist == {phi: Fraction(1, len(phis)) for phi in phis}


def test_partition_sampler_on_petal_cycle():
    inst = petal_cycle(9, (3, 3, 3))
    p = inst.partition()
    lists = [set(range(x)) for x in inst.ell]
    lab = square_labeling(p, 4, 4)
    s = partition_sampler(p, lists, 0, lab)
    dist = s.distribution()
    assert sum(dist.values()) == 1
    assert all(is_proper(p.graph, phi) and all(phi[v] in lists[v] for v in range(len(phi))) for phi in dist)
    stats = fix_forb_stats(dist, lists)
    bound = partition_bound(4, lab.universe)
    assert stats.min_fix >= bound and stats.min_forb >= bound
    for _ in range(50):
        assert s.sample() in dist


def test_partition_sampler_rejects_bad_parts():
    p = SubgraphPartition.make(path_graph(3), (2, 2, 2), [(1,), (0,), (2,)])
    with pytest.raises(PreconditionError):
        partition_sampler(p, [{0, 1}] * 3, 1)


# split graphs

def _split_example():
    # p1..p10 -> 0..9, r1..r6 -> 10..15
    edges = [(i, i + 1) for i in range(9)]
    edges += [(10, 0), (10, 13), (11, 0), (11, 5), (11, 6), (12, 1), (12, 2), (13, 7), (14, 3), (14, 8), (14, 9), (15, 9)]
    h = Graph(16, edges)
    xs = (10, 11, 14, 15)
    blocks = ((0, 1, 2, 3, 12), (4,), (5, 6, 7, 8, 9, 13))
    return h, xs, blocks


def test_split_graph_worked_example():
    h, xs, blocks = _split_example()
    ell_h = tuple(range(16))
    spl = split_graph(h, xs, blocks, ell_h)
    assert spl.graph.n == 24
    name = {}
    for i, (v, b) in enumerate(spl.origin):
        name[i] = f"p{v + 1}" if v < 10 and b is None else (f"r{v - 9}" if b is None else f"{'rstu'[xs.index(v)]}{'ABC'[b]}")
    got = {frozenset((name[u], name[v])) for u, v in spl.graph.edges}
    expect = {frozenset((f"p{i}", f"p{i + 1}")) for i in range(1, 10)}
    expect |= {frozenset(e) for e in [("r3", "p2"), ("r3", "p3"), ("r4", "p8"),
                                       ("rA", "p1"), ("sA", "p1"), ("tA", "p4"),
                                       ("rC", "r4"), ("sC", "p6"), ("sC", "p7"), ("tC", "p9"), ("tC", "p10"),
                                       ("uC", "p10")]}
    assert got == expect
    isolated = {name[i] for i in range(24) if spl.graph.degree(i) == 0}
    assert isolated == {"uA", "rB", "sB", "tB", "uB"}
    assert all(spl.ell[i] == ell_h[v] for i, (v, _) in enumerate(spl.origin))


def test_split_graph_with_empty_x_is_a_copy():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    spl = split_graph(g, (), ((0, 1), (2, 3)), (2, 2, 2, 2))
    assert spl.graph == g and spl.ell == (2, 2, 2, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_split_graph_size_and_degrees(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    h = random_connected(rng, n, 0.3)
    xs = rng.sample(range(n), rng.randint(0, n - 1))
    rest = [v for v in range(n) if v not in xs]
    blocks = [tuple(b) for b in _random_partition(rng, h.remove(xs)[0], 4)]
    blocks = [tuple(rest[i] for i in b) for b in blocks]
    spl = split_graph(h, xs, blocks, h.degrees())
    assert spl.graph.n == n - len(xs) + len(xs) * len(blocks)
    for i, (v, b) in enumerate(spl.origin):
        assert spl.graph.degree(i) <= h.degree(v)
        if b is not None:
            assert {spl.origin[w][0] for w in spl.graph.neighbors(i)} == h.neighbors(v) & set(blocks[b])


# crossing over

def test_crossing_instance_preconditions_hold():
    inst = crossing_instance()
    assert check_crossing_preconditions(inst.graph, inst.ell, inst.x_set, inst.blocks, inst.q, inst.m) == []
    assert split_graph(inst.graph, inst.x_set, inst.blocks, inst.ell).graph.n == 12


def test_crossing_preconditions_report_size_limits():
    inst = crossing_instance()
    problems = check_crossing_preconditions(inst.graph, inst.ell, inst.x_set, inst.blocks, 1, 1)
    assert problems and "q=1" in problems[0]


def test_crossing_over_exact_bound_on_one_assignment():
    inst = crossing_instance()
    lists = [set(range(x)) for x in inst.ell]
    spl = split_graph(inst.graph, inst.x_set, inst.blocks, inst.ell)
    spl_lists = spl.lift_lists(lists)
    split_stats = fix_forb_stats(uniform_sampler(spl.graph, spl_lists).distribution(), spl_lists)
    gamma = min(split_stats.min_fix, split_stats.min_forb)
    s = crossing_over_sampler(inst.graph, inst.ell, inst.x_set, inst.blocks, lists, inst.q, inst.m)
    dist = s.distribution()
    assert sum(dist.values()) == 1
    assert all(is_proper(inst.graph, phi) for phi in dist)
    stats = fix_forb_stats(dist, lists)
    bound = crossing_bound(gamma, inst.q, inst.m)
    assert stats.min_fix >= bound and stats.min_forb >= bound
