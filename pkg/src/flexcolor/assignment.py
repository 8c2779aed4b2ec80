"""List-size functions and list assignments.

A list-size function is a tuple ``f`` with ``f[v]`` the number of colours
vertex ``v`` receives; a list assignment is a tuple of frozensets of colour
ids.  Colours are nonnegative integers.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .graph import Graph

Lists = tuple[frozenset[int], ...]


def ell(g: Graph, vertices: Iterable[int], k: int) -> tuple[int, ...]:
    """Guaranteed list sizes on ``G[vertices]`` when ``G`` is coloured from k-lists.

    Entry ``i`` belongs to the ``i``-th smallest vertex of ``vertices`` and equals
    ``k - deg_G(v) + deg_H(v)``: the colours left after every outside neighbour
    has taken one.
    """
    vs = sorted(set(vertices))
    inside = set(vs)
    return tuple(k - g.degree(v) + sum(1 for w in g.neighbors(v) if w in inside) for v in vs)


def f_restrict(h: Graph, f: Sequence[int], removed: Iterable[int]) -> tuple[Graph, tuple[int, ...], tuple[int, ...]]:
    """``f`` on ``H - U`` lowered by the number of neighbours each vertex has in ``U``.

    Returns the remaining graph, the new list sizes and the map back to ``H``.
    """
    gone = set(removed)
    rest, id_map = h.remove(gone)
    values = tuple(f[v] - sum(1 for w in h.neighbors(v) if w in gone) for v in id_map)
    return rest, values, id_map


def f_minus_indicator(f: Sequence[int], subset: Iterable[int]) -> tuple[int, ...]:
    """``f`` with one colour taken away from each vertex of ``subset``."""
    drop = set(subset)
    return tuple(x - (1 if v in drop else 0) for v, x in enumerate(f))


def clamp(f: Sequence[int]) -> tuple[int, ...]:
    return tuple(max(0, x) for x in f)


def canonical_assignments(g: Graph, f: Sequence[int]) -> Iterator[Lists]:
    """One assignment per partition of the list slots into colour classes.

    Slot ``(v, j)`` is the ``j``-th entry of ``L(v)``; two slots of one vertex
    never share a class.  Classes are numbered in restricted-growth order, so
    the output is lexicographic in the growth string.  Every concrete
    assignment equals one of these up to renaming colours.
    """
    sizes = clamp(f)
    if len(sizes) != g.n:
        raise ValueError("list-size function does not match the graph")
    slots = [v for v in range(g.n) for _ in range(sizes[v])]
    classes_of: list[list[int]] = [[] for _ in range(g.n)]

    def rec(i: int, used: int) -> Iterator[Lists]:
        if i == len(slots):
            yield tuple(frozenset(c) for c in classes_of)
            return
        v = slots[i]
        for c in range(used + 1):
            if c in classes_of[v]:
                continue
            classes_of[v].append(c)
            yield from rec(i + 1, used + (c == used))
            classes_of[v].pop()

    yield from rec(0, 0)


def class_families(f: Sequence[int], intersecting: bool = True) -> Iterator[tuple[int, ...]]:
    """Multisets of colour classes (vertex bitmasks) meeting each ``v`` exactly ``f[v]`` times.

    Classes come in nonincreasing order so each multiset appears once.  With
    ``intersecting`` every two classes share a vertex; merging two disjoint
    classes into one colour never makes colouring easier, so these families
    contain a hardest assignment for any monotone property.
    """
    yield from _families(list(clamp(f)), intersecting)


def _families(need: list[int], intersecting: bool) -> Iterator[tuple[int, ...]]:
    n = len(need)
    chosen: list[int] = []

    def rec(bound: int) -> Iterator[tuple[int, ...]]:
        open_mask = 0
        for v in range(n):
            if need[v] > 0:
                open_mask |= 1 << v
        if open_mask == 0:
            yield tuple(chosen)
            return
        # the largest remaining class must hold the highest vertex still open
        top = 1 << (open_mask.bit_length() - 1)
        cand = open_mask
        while cand:
            if cand <= bound and cand & top and (not intersecting or all(cand & c for c in chosen)):
                for v in range(n):
                    if cand >> v & 1:
                        need[v] -= 1
                chosen.append(cand)
                yield from rec(cand)
                chosen.pop()
                for v in range(n):
                    if cand >> v & 1:
                        need[v] += 1
            cand = (cand - 1) & open_mask

    yield from rec((1 << n) - 1)


def family_to_lists(family: Sequence[int], n: int) -> Lists:
    return tuple(frozenset(c for c, mask in enumerate(family) if mask >> v & 1) for v in range(n))


def all_assignments(f: Sequence[int], palette: Sequence[int]) -> Iterator[Lists]:
    """Every assignment with ``|L(v)| = f[v]`` drawn from ``palette``."""
    choices = [list(combinations(palette, k)) for k in clamp(f)]
    for pick in product(*choices):
        yield tuple(frozenset(p) for p in pick)


def parse_lists(text: str) -> dict[int, frozenset[int]]:
    """Parse ``v: c1 c2 ...`` lines into a map from vertex to list."""
    out: dict[int, frozenset[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'v: c1 c2 ...'")
        out[int(head)] = frozenset(int(c) for c in tail.split())
    return out


def format_lists(lists: Sequence[Iterable[int]]) -> str:
    return "".join(f"{v}: {' '.join(str(c) for c in sorted(l))}\n" for v, l in enumerate(lists))
