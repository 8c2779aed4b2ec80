"""Partitions of a subgraph into strong and weak parts, and the samplers built on them.

A partition splits an induced subgraph ``H`` (with list sizes ``f``, usually
``ell_H``) into vertex-disjoint parts.  A *strong* part can be coloured well in
isolation, survives one neighbouring part being coloured first, and can
always be completed once everything else is coloured.  A *weak* part only
needs the first property plus colourability after any two other parts.
Given one weak part and the rest strong, :func:`partition_sampler` colours
``H`` so that every FIX and FORB event has probability bounded below by a
constant depending only on part size and degree.

:func:`split_graph` and :func:`crossing_over_sampler` handle the companion
construction where a set ``X`` of 3-vertices is duplicated once per block.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from typing import Callable, Iterable, Sequence

from .assignment import Lists, f_minus_indicator
from .choosability import PreconditionError, colorings, find_coloring, is_f_choosable
from .graph import Graph
from .reducibility import is_weakly_reductive
from .sampling import Distribution, Process, Sampler


@dataclass(frozen=True)
class SubgraphPartition:
    graph: Graph
    f: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: list[int] = sorted(v for p in self.parts for v in p)
        if seen != list(range(self.graph.n)):
            raise PreconditionError("parts must be disjoint, nonempty and cover every vertex")
        if any(not p for p in self.parts):
            raise PreconditionError("empty part")
        if len(self.f) != self.graph.n:
            raise PreconditionError("f does not match the graph")

    @classmethod
    def make(cls, graph: Graph, f: Sequence[int], parts: Iterable[Iterable[int]]) -> "SubgraphPartition":
        return cls(graph, tuple(f), tuple(tuple(sorted(p)) for p in parts))

    def part_index(self) -> list[int]:
        out = [0] * self.graph.n
        for i, p in enumerate(self.parts):
            for v in p:
                out[v] = i
        return out

    def adjacent_parts(self, i: int) -> set[int]:
        where = self.part_index()
        return {where[w] for v in self.parts[i] for w in self.graph.neighbors(v)} - {i}

    def local(self, i: int, outside: Iterable[int] = ()) -> tuple[Graph, tuple[int, ...]]:
        """Part ``i`` as a graph, with f lowered by neighbours in ``outside``."""
        gone = set(outside)
        sub, id_map = self.graph.induced(self.parts[i])
        vals = tuple(self.f[v] - sum(1 for w in self.graph.neighbors(v) if w in gone) for v in id_map)
        return sub, vals


# verifiers

@dataclass(frozen=True)
class PartVerdict:
    holds: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _forb1_all(h: Graph, f: Sequence[int]) -> bool:
    """FORB-1 for every f-assignment: avoiding any one colour at any one vertex."""
    return all(is_f_choosable(h, f_minus_indicator(f, [u])) for u in range(h.n) if f[u] >= 1)


def is_strong_part(p: SubgraphPartition, i: int) -> PartVerdict:
    sub, f_i = p.local(i)
    if not is_weakly_reductive(sub, f_i, 4):
        return PartVerdict(False, "part fails FIX' or FORB-2 on its own")
    for j in range(len(p.parts)):
        if j == i:
            continue
        _, g = p.local(i, p.parts[j])
        if not _forb1_all(sub, g):
            return PartVerdict(False, f"FORB-1 fails after part {j} is coloured")
    _, g = p.local(i, [v for j, q in enumerate(p.parts) if j != i for v in q])
    if not is_f_choosable(sub, g):
        return PartVerdict(False, "not colourable after all other parts")
    return PartVerdict(True)


def is_weak_part(p: SubgraphPartition, i: int) -> PartVerdict:
    sub, f_i = p.local(i)
    if not is_weakly_reductive(sub, f_i, 4):
        return PartVerdict(False, "part fails FIX' or FORB-2 on its own")
    others = [j for j in range(len(p.parts)) if j != i]
    pairs = [(j, jj) for a, j in enumerate(others) for jj in others[a:]] or [()]
    for pair in pairs:
        outside = [v for j in set(pair) for v in p.parts[j]]
        _, g = p.local(i, outside)
        if not is_f_choosable(sub, g):
            return PartVerdict(False, f"not colourable after parts {sorted(set(pair))}")
    return PartVerdict(True)


# structural patterns that guarantee strong or weak parts

def _outside_parts(p: SubgraphPartition, v: int, where: list[int], i: int) -> set[int]:
    return {where[w] for w in p.graph.neighbors(v)} - {i}


def _is_induced_path(g: Graph, order: Sequence[int]) -> bool:
    for a, u in enumerate(order):
        for b in range(a + 1, len(order)):
            if g.has_edge(u, order[b]) != (b == a + 1):
                return False
    return True


def _paths(g: Graph, vertices: Sequence[int]) -> list[tuple[int, ...]]:
    """Orderings of ``vertices`` forming an induced path, both directions."""
    return [o for o in permutations(vertices) if _is_induced_path(g, o)]


def match_part_pattern(p: SubgraphPartition, i: int) -> str | None:
    """Name of the first structural pattern that part ``i`` fits, else None.

    Strong patterns: ``petal-internal``, ``petal-end``, ``special-K4``.
    Weak patterns: ``weak-petal``, ``weak-path``, ``star-weak``.
    """
    g, f = p.graph, p.f
    part = p.parts[i]
    where = p.part_index()
    deg = g.degree
    size = len(part)
    inside = set(part)

    def plus(v):
        return f[v] >= deg(v) + 1

    def full(v):
        return f[v] >= deg(v)

    def out(v):
        return _outside_parts(p, v, where, i)

    def fan(root, path):
        return all(g.has_edge(root, v) for v in path)

    # petal with two distinct outside parts at its path ends
    if 2 <= size <= 4:
        for r in part:
            rest = [v for v in part if v != r]
            if not plus(r):
                continue
            for path in _paths(g, rest):
                if not fan(r, path) or not all(full(v) for v in path):
                    continue
                if any(j != jj for j in out(path[0]) for jj in out(path[-1])):
                    return "petal-internal"
    # petal plus a second root hanging off the first path vertex
    if 3 <= size <= 5:
        for r, r2 in permutations(part, 2):
            rest = [v for v in part if v not in (r, r2)]
            if not (plus(r) and plus(r2)):
                continue
            for path in _paths(g, rest):
                if not fan(r, path) or not all(full(v) for v in path):
                    continue
                if not g.has_edge(r2, path[0]) or any(g.has_edge(r2, v) for v in path[1:]):
                    continue
                if g.neighbors(path[-1]) - inside:
                    return "petal-end"
    if size == 4 and all(g.has_edge(u, v) for u, v in combinations(part, 2)):
        for a, b in combinations(part, 2):
            c, d = [v for v in part if v not in (a, b)]
            if plus(a) and plus(b) and full(c) and full(d) and g.neighbors(c) - inside and g.neighbors(d) - inside:
                return "special-K4"
    # petal missing the edge from the root to the last path vertex
    if 3 <= size <= 5:
        for r in part:
            rest = [v for v in part if v != r]
            if not plus(r):
                continue
            for path in _paths(g, rest):
                if len(path) < 2 or not fan(r, path[:-1]) or g.has_edge(r, path[-1]):
                    continue
                if not all(full(v) for v in path):
                    continue
                if any(j != jj for j in out(path[0]) for jj in out(path[-1])):
                    return "weak-petal"
    if size == 3:
        for path in _paths(g, part):
            a, b, c = path
            if full(a) and plus(b) and full(c) and any(j != jj for j in out(a) for jj in out(c)):
                return "weak-path"
    if 1 <= size <= 4:
        for x in part:
            leaves = [v for v in part if v != x]
            if not all(g.has_edge(x, v) for v in leaves):
                continue
            if f[x] >= deg(x) - 1 and all(plus(v) for v in leaves) and len(out(x)) >= 5 - len(leaves):
                return "star-weak"
    return None


STRONG_PATTERNS = ("petal-internal", "petal-end", "special-K4")
WEAK_PATTERNS = ("weak-petal", "weak-path", "star-weak")


# labelling

@dataclass(frozen=True)
class PartLabeling:
    labels: tuple[int, ...]
    universe: int


def part_adjacency(p: SubgraphPartition) -> list[set[int]]:
    return [p.adjacent_parts(i) for i in range(len(p.parts))]


def square_labeling(p: SubgraphPartition, b: int | None = None, d: int | None = None) -> PartLabeling:
    """Greedy labels that differ on parts at distance one or two in the part graph.

    The label universe is ``(bd)^2`` when the greedy labels fit, else ``(bd)^2 + 1``.
    """
    b = b if b is not None else max(4, max(len(q) for q in p.parts))
    d = d if d is not None else max(4, p.graph.max_degree())
    if max(len(q) for q in p.parts) > b:
        raise PreconditionError(f"a part has more than b={b} vertices")
    if p.graph.max_degree() > d:
        raise PreconditionError(f"a vertex has degree above d={d}")
    adj = part_adjacency(p)
    labels: list[int] = []
    for i in range(len(p.parts)):
        near = set(adj[i])
        for j in adj[i]:
            near |= adj[j]
        near.discard(i)
        taken = {labels[j] for j in near if j < i}
        lab = 0
        while lab in taken:
            lab += 1
        labels.append(lab)
    universe = (b * d) ** 2
    if max(labels) + 1 > universe:
        universe += 1
    return PartLabeling(tuple(labels), universe)


def partition_bound(b: int, universe: int) -> Fraction:
    """Probability guaranteed for every FIX and FORB-2 event with ``universe`` labels."""
    return Fraction(1, universe * (universe - 1) * 4 ** (2 * b))


def coarse_partition_bound(b: int, d: int) -> Fraction:
    """``(bd)^-4 4^-2b``: the bound with ``(bd)^4`` in place of ``universe * (universe - 1)``."""
    return Fraction(1, (b * d) ** 4 * 4 ** (2 * b))


# the partition sampler

def _uniform_colourings(h: Graph, lists: Lists, part: Sequence[int], colour: tuple, cache: dict) -> list[tuple[Fraction, tuple]]:
    """Uniform extension of ``colour`` to ``part`` avoiding already coloured neighbours."""
    avail = []
    for v in part:
        used = {colour[w] for w in h.neighbors(v) if colour[w] is not None}
        avail.append(frozenset(c for c in lists[v] if c not in used))
    key = (tuple(part), tuple(avail))
    if key not in cache:
        sub, _ = h.induced(part)
        cache[key] = list(colorings(sub, avail))
    options = cache[key]
    if not options:
        raise AssertionError(f"part {list(part)} cannot be extended; the partition hypotheses are violated")
    w = Fraction(1, len(options))
    out = []
    for phi in options:
        new = list(colour)
        for v, c in zip(part, phi):
            new[v] = c
        out.append((w, tuple(new)))
    return out


def _label_choice(universe: int, used: Iterable[int], exclude: Sequence) -> list[tuple[Fraction, object]]:
    """Uniform label outside ``exclude``; labels carried by no part are lumped as None."""
    excl = {e for e in exclude if e is not None}
    pool = universe - len(excl)
    live = sorted(set(used) - excl)
    out: list[tuple[Fraction, object]] = [(Fraction(1, pool), lab) for lab in live]
    idle = pool - len(live)
    if idle:
        out.append((Fraction(idle, pool), None))
    return out


def partition_sampler(p: SubgraphPartition, lists: Sequence[Iterable[int]], weak_index: int = 0,
                      labeling: PartLabeling | None = None, seed: int | str = 0,
                      check: bool = True) -> Sampler:
    """Random L-colouring of ``H`` from a partition with one weak part and the rest strong.

    Two labels ``t1 != t2`` are drawn uniformly; parts labelled ``t1`` are
    coloured uniformly, then parts labelled ``t2`` uniformly among extensions.
    The weak part's label comes next (or a fresh uniform one if already used),
    and the remaining parts follow in index order.
    """
    lists = tuple(frozenset(l) for l in lists)
    h = p.graph
    if any(len(lists[v]) < p.f[v] for v in range(h.n)):
        raise PreconditionError("lists are shorter than f")
    if check:
        if not is_weak_part(p, weak_index):
            raise PreconditionError(f"part {weak_index} is not weak")
        for i in range(len(p.parts)):
            if i != weak_index and not is_strong_part(p, i):
                raise PreconditionError(f"part {i} is not strong")
    lab = labeling or square_labeling(p)
    labels = lab.labels
    used = set(labels)
    cache: dict = {}
    m = len(p.parts)
    blank = (None,) * h.n

    def choose_t1(state):
        colour, _, _, _ = state
        return [(w, (colour, t, None, None)) for w, t in _label_choice(lab.universe, used, [])]

    def choose_t2(state):
        colour, t1, _, _ = state
        # an idle t1 still removes one label from the pool
        pool = _label_choice(lab.universe - (1 if t1 is None else 0), used, [t1])
        return [(w, (colour, t1, t, None)) for w, t in pool]

    def choose_t3(state):
        colour, t1, t2, _ = state
        own = labels[weak_index]
        if own not in (t1, t2):
            return [(Fraction(1), (colour, t1, t2, own))]
        idle_taken = (t1 is None) + (t2 is None)
        pool = _label_choice(lab.universe - idle_taken, used, [t1, t2])
        return [(w, (colour, t1, t2, t)) for w, t in pool]

    def colour_label(slot):
        def stage(state):
            colour = state[0]
            t = state[slot]
            if t is None:
                return [(Fraction(1), state)]
            out = [(Fraction(1), colour)]
            for i in range(m):
                if labels[i] == t and colour[p.parts[i][0]] is None:
                    nxt = []
                    for w, c in out:
                        nxt += [(w * w2, c2) for w2, c2 in _uniform_colourings(h, lists, p.parts[i], c, cache)]
                    out = nxt
            return [(w, (c,) + state[1:]) for w, c in out]
        return stage

    def forget(state):
        return [(Fraction(1), (state[0], None, None, None))]

    def colour_part(i):
        def stage(state):
            colour = state[0]
            if colour[p.parts[i][0]] is not None:
                return [(Fraction(1), state)]
            return [(w, (c,) + state[1:]) for w, c in _uniform_colourings(h, lists, p.parts[i], colour, cache)]
        return stage

    stages = [choose_t1, colour_label(1), choose_t2, colour_label(2), choose_t3, colour_label(3), forget]
    stages += [colour_part(i) for i in range(m)]
    return Sampler(Process((blank, None, None, None), stages, finish=lambda s: s[0]), seed)


# split graphs

@dataclass(frozen=True)
class SplitGraph:
    graph: Graph
    origin: tuple[tuple[int, int | None], ...]  # (host vertex, block index or None)
    ell: tuple[int, ...]

    def lift_lists(self, lists: Sequence[Iterable[int]]) -> Lists:
        return tuple(frozenset(lists[v]) for v, _ in self.origin)


def split_graph(h: Graph, x_set: Iterable[int], blocks: Sequence[Iterable[int]], ell_h: Sequence[int]) -> SplitGraph:
    """Copy of ``H - X`` plus one copy ``r_B`` of each ``r in X`` per block ``B``,
    joined only to ``r``'s neighbours inside ``B``."""
    xs = sorted(set(x_set))
    bl = [sorted(set(b)) for b in blocks]
    xset = set(xs)
    covered = sorted(v for b in bl for v in b)
    if covered != [v for v in range(h.n) if v not in xset]:
        raise PreconditionError("blocks must partition H - X")
    origin: list[tuple[int, int | None]] = [(v, None) for v in range(h.n) if v not in xset]
    index = {v: i for i, (v, _) in enumerate(origin)}
    edges = [(index[u], index[v]) for u, v in h.edges if u not in xset and v not in xset]
    for r in xs:
        for bi, b in enumerate(bl):
            new = len(origin)
            origin.append((r, bi))
            edges += [(new, index[w]) for w in b if h.has_edge(r, w)]
    g = Graph(len(origin), edges)
    return SplitGraph(g, tuple(origin), tuple(ell_h[v] for v, _ in origin))


def _first_extension(h: Graph, lists: Lists, colour: dict[int, int]) -> tuple[int, ...]:
    phi = find_coloring(h, lists, fixed=colour)
    if phi is None:
        raise AssertionError(f"no extension of {colour}; the split hypotheses are violated")
    return phi


def check_crossing_preconditions(h: Graph, ell_h: Sequence[int], x_set: Iterable[int], blocks: Sequence[Iterable[int]],
                                 q: int, m: int, r_set: Iterable[int] | None = None) -> list[str]:
    """Problems with the hypotheses of the crossing-over construction (empty when all hold).

    ``ell_h`` must be the host list sizes; the graph-local ``ell`` of a smaller
    piece ``H - D`` is ``ell_h`` lowered by neighbours in ``D``.
    """
    xs = sorted(set(x_set))
    rs = set(xs if r_set is None else r_set)
    bl = [sorted(set(b)) for b in blocks]
    problems = []
    if len(xs) > q or len(bl) > m:
        problems.append(f"|X|={len(xs)} > q={q} or |B|={len(bl)} > m={m}")
    for r in sorted(rs):
        if not (h.neighbors(r) - rs):
            problems.append(f"{r} has no neighbour outside R")
    for r in xs:
        for bi, b in enumerate(bl):
            gone = set(b) | {r}
            rest, id_map = h.remove(gone)
            vals = tuple(ell_h[v] - sum(1 for w in h.neighbors(v) if w in gone) for v in id_map)
            if not is_f_choosable(rest, vals):
                problems.append(f"H - (B{bi} + {r}) is not choosable")
    for r1, r2 in combinations(xs, 2):
        gone = {r1, r2}
        rest, id_map = h.remove(gone)
        vals = tuple(ell_h[v] - sum(1 for w in h.neighbors(v) if w in gone) for v in id_map)
        if not is_f_choosable(rest, vals):
            problems.append(f"H - {{{r1}, {r2}}} is not choosable")
    spl = split_graph(h, xs, bl, ell_h)
    if not is_weakly_reductive(spl.graph, spl.ell, 4):
        problems.append("split graph is not weakly reductive")
    return problems


def uniform_sampler(h: Graph, lists: Sequence[Iterable[int]], seed: int | str = 0) -> Sampler:
    """Uniform distribution on proper L-colourings."""
    phis = list(colorings(h, lists))
    if not phis:
        raise PreconditionError("no L-colouring exists")
    w = Fraction(1, len(phis))
    options = [(w, phi) for phi in phis]
    return Sampler(Process(None, [lambda _s: options]), seed)


def crossing_bound(gamma: Fraction, q: int, m: int) -> Fraction:
    return min(gamma / (3 * q * m), Fraction(1, 12 * q * q))


def crossing_over_sampler(h: Graph, ell_h: Sequence[int], x_set: Iterable[int], blocks: Sequence[Iterable[int]],
                          lists: Sequence[Iterable[int]], q: int, m: int,
                          split_sampler: Callable[[Graph, Lists], Sampler] | None = None,
                          r_set: Iterable[int] | None = None, seed: int | str = 0,
                          check: bool = True) -> Sampler:
    """Random L-colouring of ``H`` built from a distribution on the split graph.

    ``rho`` is uniform on {1, 2, 3} (on {1, 2} when ``|X| = 1``):

    1. colour ``H - X`` from the split colouring, then ``X`` greedily in id order;
    2. pick ``r in X`` and a block ``B`` uniformly, give ``r`` the colour of
       ``r_B``, copy the split colouring on ``B`` and complete the rest;
    3. pick distinct ``r1, r2 in X`` uniformly, colour them uniformly from their
       lists and complete the rest.

    Completions take the lexicographically first extension.
    """
    xs = sorted(set(x_set))
    bl = [sorted(set(b)) for b in blocks]
    lists = tuple(frozenset(l) for l in lists)
    if check:
        problems = check_crossing_preconditions(h, ell_h, xs, bl, q, m, r_set)
        if problems:
            raise PreconditionError("; ".join(problems))
    spl = split_graph(h, xs, bl, ell_h)
    spl_lists = spl.lift_lists(lists)
    make = split_sampler or uniform_sampler
    psi_dist = sorted(make(spl.graph, spl_lists).distribution().items())
    host_of = {i: v for i, (v, b) in enumerate(spl.origin) if b is None}
    copy_of = {(v, b): i for i, (v, b) in enumerate(spl.origin) if b is not None}

    # integer weights over a common denominator keep the projections cheap
    den = lcm(*(pr.denominator for _, pr in psi_dist))
    psi_int = [(psi, int(pr * den)) for psi, pr in psi_dist]

    def project(keep: Sequence[int]) -> list[tuple[tuple[int, ...], Fraction]]:
        marg: dict[tuple[int, ...], int] = {}
        for psi, w in psi_int:
            key = tuple(psi[i] for i in keep)
            marg[key] = marg.get(key, 0) + w
        return [(key, Fraction(w, den)) for key, w in sorted(marg.items())]

    extensions: dict[tuple, tuple[int, ...]] = {}

    def extend(colour: dict[int, int]) -> tuple[int, ...]:
        key = tuple(sorted(colour.items()))
        if key not in extensions:
            extensions[key] = _first_extension(h, lists, colour)
        return extensions[key]

    def greedy_x(colour: dict[int, int]) -> tuple[int, ...]:
        colour = dict(colour)
        for r in xs:
            used = {colour[w] for w in h.neighbors(r) if w in colour}
            colour[r] = min(c for c in lists[r] if c not in used)
        return tuple(colour[v] for v in range(h.n))

    host_idx = sorted(host_of)
    rhos = [1, 2, 3] if len(xs) >= 2 else [1, 2]

    def stage(_state):
        out: list[tuple[Fraction, tuple[int, ...]]] = []
        w_rho = Fraction(1, len(rhos))
        for rho in rhos:
            if rho == 1:
                for cols, pr in project(host_idx):
                    colour = {host_of[i]: c for i, c in zip(host_idx, cols)}
                    out.append((w_rho * pr, greedy_x(colour)))
            elif rho == 2:
                w = w_rho / (len(xs) * len(bl))
                for r in xs:
                    for bi, b in enumerate(bl):
                        keep = [i for i in host_idx if host_of[i] in b] + [copy_of[r, bi]]
                        for cols, pr in project(keep):
                            colour = {host_of[i]: c for i, c in zip(keep[:-1], cols[:-1])}
                            colour[r] = cols[-1]
                            out.append((w * pr, extend(colour)))
            else:
                w = w_rho / (len(xs) * (len(xs) - 1))
                for r1, r2 in permutations(xs, 2):
                    for c1 in sorted(lists[r1]):
                        avail = sorted(c for c in lists[r2] if not (h.has_edge(r1, r2) and c == c1))
                        for c2 in avail:
                            pr = w / len(lists[r1]) / len(avail)
                            out.append((pr, extend({r1: c1, r2: c2})))
        return out

    return Sampler(Process(None, [stage]), seed)
