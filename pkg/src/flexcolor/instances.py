"""Named test instances: hosts whose reducible pieces exercise the samplers.

Hosts are built from a core graph plus pendant vertices that only raise core
degrees, since ``ell_H`` depends on nothing but ``H`` and the host degrees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .assignment import ell
from .graph import Graph
from .partition import SubgraphPartition


def host_with_pendants(n: int, edges: Sequence[tuple[int, int]], degrees: dict[int, int]) -> Graph:
    """Core graph on ``0..n-1`` with fresh pendant vertices lifting each listed vertex to its target degree."""
    core = Graph(n, edges)
    out = list(core.edges)
    nxt = n
    for v in sorted(degrees):
        short = degrees[v] - core.degree(v)
        if short < 0:
            raise ValueError(f"vertex {v} already has degree {core.degree(v)} > {degrees[v]}")
        for _ in range(short):
            out.append((v, nxt))
            nxt += 1
    return Graph(nxt, out)


@dataclass(frozen=True)
class PartitionInstance:
    host: Graph
    core: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    weak_index: int

    @property
    def ell(self) -> tuple[int, ...]:
        return ell(self.host, self.core, 4)

    def partition(self) -> SubgraphPartition:
        h, _ = self.host.induced(self.core)
        return SubgraphPartition.make(h, self.ell, self.parts)


def far_neighbor_cycle() -> PartitionInstance:
    """Ten-vertex induced cycle through a 3-vertex ``x`` with petal roots on the far side.

    Cycle ``a0..a9`` with ``x = a0``; its 4-neighbours ``a1`` and ``a9`` start
    the induced conductive path ``a1 a2 ... a9``.  Roots 10, 11, 12 are
    3-vertices over ``a2 a3 a4``, ``a5 a6 a7`` and ``a8``.  The weak part is
    the path ``a9 x a1``; each root with its path vertices is a strong petal.
    """
    edges = [(i, (i + 1) % 10) for i in range(10)]
    edges += [(10, 2), (10, 3), (10, 4), (11, 5), (11, 6), (11, 7), (12, 8)]
    degrees = {0: 3, 10: 3, 11: 3, 12: 3}
    degrees.update({v: 4 for v in range(1, 10)})
    host = host_with_pendants(13, edges, degrees)
    parts = ((0, 1, 9), (2, 3, 4, 10), (5, 6, 7, 11), (8, 12))
    return PartitionInstance(host, tuple(range(13)), parts, 0)


def petal_cycle(length: int = 9, groups: Sequence[int] = (3, 3, 3)) -> PartitionInstance:
    """Induced cycle of conductive 4-vertices with one 3-vertex root over each arc.

    Arcs of consecutive cycle vertices have the sizes in ``groups``; every part
    is a strong petal.
    """
    if sum(groups) != length:
        raise ValueError("groups must cover the cycle")
    edges = [(i, (i + 1) % length) for i in range(length)]
    parts = []
    start = 0
    for j, size in enumerate(groups):
        root = length + j
        arc = tuple(range(start, start + size))
        edges += [(root, v) for v in arc]
        parts.append(arc + (root,))
        start += size
    n = length + len(groups)
    degrees = {v: 4 for v in range(length)}
    degrees.update({length + j: 3 for j in range(len(groups))})
    host = host_with_pendants(n, edges, degrees)
    return PartitionInstance(host, tuple(range(n)), tuple(parts), 0)


@dataclass(frozen=True)
class CrossingInstance:
    graph: Graph
    ell: tuple[int, ...]
    x_set: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    q: int
    m: int


def crossing_instance() -> CrossingInstance:
    """Eight vertices, two split vertices over three blocks; the split graph has twelve vertices."""
    edges = ((0, 1), (0, 4), (0, 6), (1, 2), (1, 6), (2, 3), (2, 5), (2, 6), (3, 4), (3, 5), (4, 7))
    return CrossingInstance(Graph(8, edges), (3, 3, 4, 3, 3, 3, 4, 2), (5, 6), ((0, 1, 2), (3,), (4, 7)), 2, 3)


# host families for the Gallai-subtree claims

@dataclass(frozen=True)
class ClaimHost:
    family: str
    host: Graph
    core: tuple[int, ...]


def _arcs(rng: random.Random, length: int, lo: int = 1, hi: int = 3) -> list[int]:
    sizes = []
    left = length
    while left:
        s = rng.randint(lo, min(hi, left))
        sizes.append(s)
        left -= s
    return sizes


def far_neighbor_host(rng: random.Random, min_path: int = 3, max_path: int = 8) -> ClaimHost:
    """A 3-vertex ``x`` whose 4-neighbours ``u, v`` are joined by a short induced
    conductive path avoiding ``N(x)``, plus the 3-neighbours of the path interior."""
    length = rng.randint(min_path, max_path)
    path = list(range(length))
    x = length
    edges = [(i, i + 1) for i in range(length - 1)] + [(x, 0), (x, length - 1)]
    nxt = length + 1
    degrees = {x: 3, 0: 4, length - 1: 4}
    start = 1
    for size in _arcs(rng, length - 2):
        root = nxt
        nxt += 1
        edges += [(root, p) for p in path[start:start + size]]
        degrees[root] = 3
        start += size
    degrees.update({p: 4 for p in path[1:-1]})
    host = host_with_pendants(nxt, edges, degrees)
    return ClaimHost("far-neighbor", host, tuple(range(nxt)))


def conductive_cycle_host(rng: random.Random, min_len: int = 3, max_len: int = 6) -> ClaimHost:
    """Short induced cycle of conductive vertices dominated by at least two 3-vertices."""
    length = rng.randint(min_len, max_len)
    while True:
        sizes = _arcs(rng, length)
        if len(sizes) >= 2:
            break
    offset = rng.randrange(length)
    edges = [(i, (i + 1) % length) for i in range(length)]
    nxt = length
    degrees = {v: 4 for v in range(length)}
    start = offset
    for size in sizes:
        root = nxt
        nxt += 1
        edges += [(root, (start + i) % length) for i in range(size)]
        degrees[root] = 3
        start += size
    host = host_with_pendants(nxt, edges, degrees)
    return ClaimHost("conductive-cycle", host, tuple(range(nxt)))


def stressed_triangle_host(joined: bool) -> ClaimHost:
    """Stressed ``v`` touching two corners of a conductive triangle ``abc`` whose
    corners share the 3-neighbour ``r``; ``joined`` adds the edge between the
    two 3-neighbours of ``v``."""
    a, b, c, r, v, r1, r2 = range(7)
    edges = [(a, b), (b, c), (a, c), (r, a), (r, b), (r, c), (v, a), (v, b), (v, r1), (v, r2)]
    if joined:
        edges.append((r1, r2))
    degrees = {a: 4, b: 4, c: 4, r: 3, v: 4, r1: 3, r2: 3}
    host = host_with_pendants(7, edges, degrees)
    return ClaimHost("stressed-triangle", host, tuple(range(7)))
