"""List colouring, choosability and Gallai trees.

Two exact deciders live here.  :func:`is_f_choosable_bruteforce` searches
the space of list assignments directly and never uses structure theory; it
is the oracle.  :func:`is_f_choosable` applies exact reductions (greedy
removal, forced colours, components, the degree-choosability theorem for
Gallai trees) and only falls back to the search on what is left.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .assignment import Lists, f_minus_indicator
from .graph import Graph, block_decomposition, connected_induced_subgraphs, is_complete, is_cycle


class PreconditionError(ValueError):
    """An operation was called on input outside its stated domain."""


# colourings

def colorings(g: Graph, lists: Sequence[Iterable[int]], fixed: dict[int, int] | None = None) -> Iterator[tuple[int, ...]]:
    """All proper colourings from ``lists``, lexicographic in vertex order.

    Backtracking with forward checking: colouring a vertex removes its colour
    from the live domains of later neighbours and the branch dies as soon as
    one empties.
    """
    n = g.n
    domains = [sorted(set(l)) for l in lists]
    if fixed:
        for v, c in fixed.items():
            if c not in domains[v]:
                return
            domains[v] = [c]
    colour = [0] * n
    banned: list[dict[int, int]] = [dict() for _ in range(n)]

    def live(v: int) -> list[int]:
        b = banned[v]
        return [c for c in domains[v] if not b.get(c)]

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(colour)
            return
        later = [w for w in g.neighbors(i) if w > i]
        for c in live(i):
            colour[i] = c
            ok = True
            touched = []
            for w in later:
                bw = banned[w]
                bw[c] = bw.get(c, 0) + 1
                touched.append(w)
                if bw[c] == 1 and c in domains[w] and not live(w):
                    ok = False
                    break
            if ok:
                yield from rec(i + 1)
            for w in touched:
                banned[w][c] -= 1

    yield from rec(0)


def find_coloring(g: Graph, lists: Sequence[Iterable[int]], fixed: dict[int, int] | None = None) -> tuple[int, ...] | None:
    return next(colorings(g, lists, fixed), None)


def is_proper(g: Graph, colouring: Sequence[int]) -> bool:
    return all(colouring[u] != colouring[v] for u, v in g.edges)


# Gallai trees

def is_gallai_tree(g: Graph) -> bool:
    """Connected graph whose every block is complete or an odd cycle."""
    if not g.is_connected():
        raise PreconditionError("Gallai tree test needs a connected graph")
    for block in block_decomposition(g).blocks:
        if is_complete(g, block):
            continue
        if len(block) % 2 == 1 and is_cycle(g, block):
            continue
        return False
    return True


def _gallai_bad_lists(g: Graph) -> Lists:
    """Lists of size ``deg`` on a Gallai tree that admit no colouring."""
    lists: list[set[int]] = [set() for _ in range(g.n)]
    fresh = 0
    for block in block_decomposition(g).blocks:
        if len(block) == 1:
            continue
        width = 2 if not is_complete(g, block) else len(block) - 1
        colours = range(fresh, fresh + width)
        fresh += width
        for v in block:
            lists[v].update(colours)
    return tuple(frozenset(l) for l in lists)


def ert_choosable(g: Graph, f: Sequence[int]) -> bool:
    """Decide f-choosability of a connected graph with ``f >= deg``.

    Choosable exactly when some vertex has spare colours or the graph is not
    a Gallai tree.
    """
    if not g.is_connected():
        raise PreconditionError("graph must be connected")
    low = [v for v in range(g.n) if f[v] < g.degree(v)]
    if low:
        raise PreconditionError(f"f is below the degree at vertices {low}")
    return any(f[v] > g.degree(v) for v in range(g.n)) or not is_gallai_tree(g)


def find_bad_witness(t: Graph, f: Sequence[int]) -> frozenset[int] | None:
    """First ``U`` with ``|U| <= 2`` such that ``f - 1_U`` equals the degree on ``T``.

    ``U`` is scanned as the empty set, then singletons, then pairs, each in
    lexicographic order.
    """
    if not is_gallai_tree(t):
        raise PreconditionError("find_bad_witness needs a Gallai tree")
    deg = t.degrees()
    candidates = [()] + [(v,) for v in range(t.n)] + list(combinations(range(t.n), 2))
    for u in candidates:
        g = f_minus_indicator(f, u)
        if all(g[w] == deg[w] for w in range(t.n)):
            return frozenset(u)
    return None


# exhaustive search over assignments

def _greedy_core(g: Graph, f: Sequence[int], alive: int) -> int:
    """Peel vertices whose list is longer than their remaining degree.

    Such a vertex can always be coloured last, so ``alive`` is choosable iff
    what survives is.  Returns the surviving bitmask.
    """
    changed = True
    while changed and alive:
        changed = False
        rest = alive
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if f[v] > bin(g.mask(v) & alive).count("1"):
                alive ^= low
                changed = True
    return alive


def _search_bad_family(g: Graph, f: Sequence[int]) -> tuple[int, ...] | None:
    """Search for colour classes with ``f[v]`` classes at ``v`` and no colouring.

    Classes are pairwise intersecting and listed in nonincreasing order (see
    :func:`flexcolor.assignment.class_families`).  Alongside the classes the
    search keeps every vertex set coverable by distinct classes so far; if
    the rest of some coverable set is greedily colourable from the colours
    still to come, no completion of the branch is bad and it is cut.
    """
    n = g.n
    full = (1 << n) - 1
    indep = [True] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        v = low.bit_length() - 1
        indep[s] = indep[s ^ low] and not (g.mask(v) & s)
    need = list(f)
    chosen: list[int] = []

    def rest_colourable(covered: int) -> bool:
        return _greedy_core(g, need, full & ~covered) == 0

    def rec(bound: int, cover: frozenset[int]) -> tuple[int, ...] | None:
        open_mask = 0
        for v in range(n):
            if need[v] > 0:
                open_mask |= 1 << v
        if open_mask == 0:
            return tuple(chosen)
        top = 1 << (open_mask.bit_length() - 1)
        cand = open_mask
        while cand:
            if cand <= bound and cand & top and all(cand & c for c in chosen):
                for v in range(n):
                    if cand >> v & 1:
                        need[v] -= 1
                new = set()
                for s in cover:
                    room = cand & ~s
                    i = room
                    while i:
                        if indep[i] and (s | i) not in cover:
                            new.add(s | i)
                        i = (i - 1) & room
                if not any(rest_colourable(s) for s in new):
                    chosen.append(cand)
                    found = rec(cand, cover | new)
                    chosen.pop()
                    if found is not None:
                        for v in range(n):
                            if cand >> v & 1:
                                need[v] += 1
                        return found
                for v in range(n):
                    if cand >> v & 1:
                        need[v] += 1
            cand = (cand - 1) & open_mask
        return None

    if rest_colourable(0):
        return None
    return rec(full, frozenset([0]))


def _lift_witness(n: int, part: Sequence[int], lists: Lists, f: Sequence[int]) -> Lists:
    """Extend bad lists on vertices ``part`` to all ``n`` vertices with fresh colours."""
    out: list[set[int]] = [set() for _ in range(n)]
    fresh = 1 + max((c for l in lists for c in l), default=-1)
    for i, v in enumerate(part):
        out[v] = set(lists[i])
    inside = set(part)
    for v in range(n):
        if v not in inside:
            out[v] = set(range(fresh, fresh + max(0, f[v])))
            fresh += max(0, f[v])
    return tuple(frozenset(l) for l in out)


def _family_lists(family: Sequence[int], n: int) -> Lists:
    return tuple(frozenset(c for c, m in enumerate(family) if m >> v & 1) for v in range(n))


@dataclass(frozen=True)
class ChoosabilityResult:
    choosable: bool
    bad_lists: Lists | None = None

    def __bool__(self) -> bool:
        return self.choosable


def is_f_choosable_bruteforce(g: Graph, f: Sequence[int]) -> ChoosabilityResult:
    """Exhaustive choosability check with a bad assignment when one exists."""
    if len(f) != g.n:
        raise ValueError("list-size function does not match the graph")
    if g.n == 0:
        return ChoosabilityResult(True)
    for v in range(g.n):
        if f[v] <= 0:
            return ChoosabilityResult(False, _lift_witness(g.n, [v], (frozenset(),), f))
    core = _greedy_core(g, f, (1 << g.n) - 1)
    if core == 0:
        return ChoosabilityResult(True)
    sub, id_map = g.induced(v for v in range(g.n) if core >> v & 1)
    for comp in sub.components():
        piece, local = sub.induced(comp)
        pf = [f[id_map[v]] for v in local]
        family = _search_bad_family(piece, pf)
        if family is not None:
            host = [id_map[v] for v in local]
            return ChoosabilityResult(False, _lift_witness(g.n, host, _family_lists(family, piece.n), f))
    return ChoosabilityResult(True)


# fast exact decision

@lru_cache(maxsize=200_000)
def _choosable_cached(n: int, edges: tuple[tuple[int, int], ...], f: tuple[int, ...]) -> ChoosabilityResult:
    return _decide(Graph(n, edges), f)


def _decide(g: Graph, f: tuple[int, ...]) -> ChoosabilityResult:
    n = g.n
    if n == 0:
        return ChoosabilityResult(True)
    for v in range(n):
        if f[v] <= 0:
            return ChoosabilityResult(False, _lift_witness(n, [v], (frozenset(),), f))
    core = _greedy_core(g, f, (1 << n) - 1)
    if core == 0:
        return ChoosabilityResult(True)
    if core != (1 << n) - 1:
        sub, id_map = g.induced(v for v in range(n) if core >> v & 1)
        res = is_f_choosable(sub, tuple(f[v] for v in id_map))
        if res.choosable:
            return res
        return ChoosabilityResult(False, _lift_witness(n, id_map, res.bad_lists, f))
    # a one-colour list is forced: delete it and charge its neighbours
    for v in range(n):
        if f[v] == 1:
            rest, id_map = g.remove([v])
            rf = tuple(f[w] - (1 if g.has_edge(v, w) else 0) for w in id_map)
            res = is_f_choosable(rest, rf)
            if res.choosable:
                return res
            lists = _lift_witness(n, id_map, res.bad_lists, f)
            fresh = 1 + max((c for l in lists for c in l), default=-1)
            out = [set(l) for l in lists]
            out[v] = {fresh}
            for w in g.neighbors(v):
                out[w].add(fresh)
            return ChoosabilityResult(False, tuple(frozenset(l) for l in out))
    comps = g.components()
    if len(comps) > 1:
        for comp in comps:
            piece, local = g.induced(comp)
            res = is_f_choosable(piece, tuple(f[v] for v in local))
            if not res.choosable:
                return ChoosabilityResult(False, _lift_witness(n, local, res.bad_lists, f))
        return ChoosabilityResult(True)
    if all(f[v] >= g.degree(v) for v in range(n)):
        if ert_choosable(g, f):
            return ChoosabilityResult(True)
        return ChoosabilityResult(False, _gallai_bad_lists(g))
    return is_f_choosable_bruteforce(g, f)


def is_f_choosable(g: Graph, f: Sequence[int]) -> ChoosabilityResult:
    """Exact f-choosability.  The result is truthy iff choosable."""
    if len(f) != g.n:
        raise ValueError("list-size function does not match the graph")
    return _choosable_cached(g.n, g.edges, tuple(f))


# choosability after dropping one colour at two vertices

def _bad_gallai_subtrees(h: Graph, f: Sequence[int]) -> Iterator[tuple[tuple[int, ...], frozenset[int]]]:
    for vs in connected_induced_subgraphs(h, h.n):
        t, id_map = h.induced(vs)
        if not is_gallai_tree(t):
            continue
        bad = find_bad_witness(t, [f[v] for v in id_map])
        if bad is not None:
            yield vs, frozenset(id_map[u] for u in bad)


def two_vertex_choosable(h: Graph, r_set: Iterable[int], f: Sequence[int], u: int, v: int) -> bool:
    """Choosability of ``H`` under ``f - 1_{u,v}`` when ``R`` dominates and no Gallai subtree is bad.

    Preconditions, all checked: ``R`` is dominating, ``f >= deg + 1`` on ``R``,
    ``f >= deg`` elsewhere, and no connected induced Gallai tree ``T`` has a set
    ``U`` of at most two vertices with ``f - 1_U = deg_T`` on ``T``.  Under them
    the answer can only be negative when ``uv`` is an edge with exactly one end
    in ``R``; anything else is reported as an internal error.
    """
    r = set(r_set)
    undominated = [w for w in range(h.n) if w not in r and not (h.neighbors(w) & r)]
    if undominated:
        raise PreconditionError(f"R does not dominate {undominated}")
    short_r = [w for w in r if f[w] < h.degree(w) + 1]
    if short_r:
        raise PreconditionError(f"f < deg + 1 at R-vertices {sorted(short_r)}")
    short = [w for w in range(h.n) if w not in r and f[w] < h.degree(w)]
    if short:
        raise PreconditionError(f"f < deg at {short}")
    bad = next(_bad_gallai_subtrees(h, f), None)
    if bad is not None:
        raise PreconditionError(f"induced Gallai tree {bad[0]} is bad via U={sorted(bad[1])}")
    result = is_f_choosable(h, f_minus_indicator(f, {u, v})).choosable
    if not result:
        exempt = u != v and h.has_edge(u, v) and ((u in r) != (v in r))
        if not exempt:
            raise AssertionError(f"two-vertex reduction failed outside the exempt case at u={u}, v={v}")
    return result
