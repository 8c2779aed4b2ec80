"""Simple undirected graphs on dense integer ids and the structural queries built on them.

Vertices are ``0..n-1``.  A :class:`Graph` is immutable; every derived graph
(induced subgraphs, splits, catalogs) is a fresh object.  Adjacency is held
both as frozensets and as bitmasks because the enumeration code in this
package leans on fast subset arithmetic.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import networkx as nx


class GraphFormatError(ValueError):
    """Raised when a graph file or string cannot be parsed."""


class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    __slots__ = ("n", "_adj", "_masks", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._adj = tuple(frozenset(a) for a in adj)
        self._masks = tuple(sum(1 << w for w in a) for a in adj)
        self._edges = tuple(sorted((u, v) for u in range(n) for v in adj[u] if u < v))

    # basic queries

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def mask(self, v: int) -> int:
        """Neighbourhood of ``v`` as a bitmask."""
        return self._masks[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self._adj)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self._edges)})"

    # derived graphs

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph on ``vertices`` plus the map from new ids to host ids.

        New ids follow ascending host order.
        """
        keep = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self._edges if u in index and v in index]
        return Graph(len(keep), edges), keep

    def remove(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def components(self) -> list[tuple[int, ...]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            out.append(tuple(sorted(comp)))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self._edges)
        return h

    @classmethod
    def from_networkx(cls, h: nx.Graph) -> "Graph":
        order = sorted(h.nodes())
        index = {v: i for i, v in enumerate(order)}
        return cls(len(order), ((index[u], index[v]) for u, v in h.edges()))


# standard families

def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


# serialisation

def to_graph6(g: Graph) -> str:
    return nx.to_graph6_bytes(g.to_networkx(), nodes=list(range(g.n)), header=False).decode("ascii").strip()


def from_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    try:
        h = nx.from_graph6_bytes(text.encode("ascii"))
    except (ValueError, nx.NetworkXError, UnicodeEncodeError) as exc:
        raise GraphFormatError(f"bad graph6 string {text!r}: {exc}") from exc
    return Graph.from_networkx(h)


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines.  An optional ``n <count>`` line fixes the vertex count."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
            elif len(parts) == 2:
                edges.append((int(parts[0]), int(parts[1])))
            else:
                raise ValueError
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {raw!r}") from None
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    try:
        return Graph(n, edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def read_graph(path: str, fmt: str = "g6") -> Graph:
    with open(path, encoding="ascii") as fh:
        text = fh.read()
    if fmt == "g6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise GraphFormatError(f"{path}: expected exactly one graph6 line, found {len(lines)}")
        return from_graph6(lines[0])
    if fmt == "edges":
        return from_edge_list(text)
    raise GraphFormatError(f"unknown graph format {fmt!r}")


# blocks

@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]


def block_decomposition(g: Graph) -> BlockDecomposition:
    """Maximal 2-connected pieces, bridges and isolated vertices of ``g``."""
    h = g.to_networkx()
    blocks = [frozenset(b) for b in nx.biconnected_components(h)]
    blocks += [frozenset([v]) for v in range(g.n) if g.degree(v) == 0]
    blocks.sort(key=lambda b: sorted(b))
    count = [0] * g.n
    for b in blocks:
        for v in b:
            count[v] += 1
    return BlockDecomposition(tuple(blocks), frozenset(v for v in range(g.n) if count[v] >= 2))


def is_complete(g: Graph, vertices: Iterable[int] | None = None) -> bool:
    vs = list(range(g.n)) if vertices is None else list(vertices)
    return all(g.has_edge(u, v) for u, v in combinations(vs, 2))


def is_cycle(g: Graph, vertices: Iterable[int] | None = None) -> bool:
    """True when ``vertices`` induce a single cycle."""
    sub, _ = g.induced(range(g.n) if vertices is None else vertices)
    return sub.n >= 3 and all(d == 2 for d in sub.degrees()) and sub.is_connected()


# maximum average degree

@dataclass(frozen=True)
class MadResult:
    value: Fraction
    witness: frozenset[int]


def _denser_set(g: Graph, density: Fraction) -> frozenset[int] | None:
    """A vertex set with edge density strictly above ``density``, if any.

    Densest-subgraph reduction: source -> edge node (cap q), edge node -> its
    endpoints (uncapped), vertex -> sink (cap p) for ``density = p/q``.
    """
    p, q = density.numerator, density.denominator
    net = nx.DiGraph()
    net.add_node("s")
    net.add_node("t")
    for i, (u, v) in enumerate(g.edges):
        net.add_edge("s", ("e", i), capacity=q)
        net.add_edge(("e", i), ("v", u))
        net.add_edge(("e", i), ("v", v))
    for v in range(g.n):
        net.add_edge(("v", v), "t", capacity=p)
    cut, (source_side, _) = nx.minimum_cut(net, "s", "t")
    if cut < q * g.m:
        return frozenset(node[1] for node in source_side if isinstance(node, tuple) and node[0] == "v")
    return None


def max_average_degree(g: Graph) -> MadResult:
    """Exact maximum average degree with a subgraph attaining it."""
    if g.n == 0:
        return MadResult(Fraction(0), frozenset())
    if g.m == 0:
        return MadResult(Fraction(0), frozenset([0]))
    candidates = sorted({Fraction(a, b) for b in range(1, g.n + 1) for a in range(g.m + 1)})
    lo, hi = 0, len(candidates) - 1
    # first candidate with no strictly denser subgraph is the maximum density
    while lo < hi:
        mid = (lo + hi) // 2
        if _denser_set(g, candidates[mid]) is None:
            hi = mid
        else:
            lo = mid + 1
    best = candidates[lo]
    witness = _denser_set(g, candidates[lo - 1])
    assert witness is not None
    return MadResult(2 * best, witness)


def mad_below(g: Graph, bound: Fraction) -> bool:
    """Whether ``max_average_degree(g) < bound``, with a single cut."""
    if g.n == 0:
        return bound > 0
    half = Fraction(bound) / 2
    # densities have denominators <= n; take the largest one below bound/2
    below = [Fraction(-(-half.numerator * c // half.denominator) - 1, c) for c in range(1, g.n + 1)]
    top = max(below)
    if top < 0:
        return False
    return _denser_set(g, top) is None


def mad_bruteforce(g: Graph) -> Fraction:
    """Maximum of ``2|E(S)|/|S|`` over every nonempty vertex subset."""
    best = Fraction(0)
    for s in range(1, 1 << g.n):
        inside = sum(bin(g.mask(v) & s).count("1") for v in range(g.n) if s >> v & 1)
        best = max(best, Fraction(inside, bin(s).count("1")))
    return best


# distances and subgraph enumeration

def distance(g: Graph, u: int, v: int) -> float:
    """BFS distance; ``math.inf`` across components."""
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in g.neighbors(x):
            if w not in dist:
                dist[w] = dist[x] + 1
                if w == v:
                    return dist[w]
                queue.append(w)
    return math.inf


def _mask_to_tuple(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def connected_induced_subgraphs(g: Graph, max_size: int) -> Iterator[tuple[int, ...]]:
    """Every connected vertex set of size ``<= max_size`` exactly once.

    Sizes are nondecreasing and sets of equal size come in lexicographic order.
    """
    level = {1 << v for v in range(g.n)}
    size = 1
    while level and size <= max_size:
        ordered = sorted(_mask_to_tuple(s) for s in level)
        yield from ordered
        if size == max_size:
            return
        nxt = set()
        for s in level:
            frontier = 0
            rest = s
            while rest:
                low = rest & -rest
                frontier |= g.mask(low.bit_length() - 1)
                rest ^= low
            frontier &= ~s
            while frontier:
                low = frontier & -frontier
                nxt.add(s | low)
                frontier ^= low
        level = nxt
        size += 1


# catalogs

def graph_catalog(n: int, predicate: Callable[[Graph], bool] | None = None,
                  connected: bool = True) -> list[Graph]:
    """All graphs on ``n`` vertices up to isomorphism that satisfy ``predicate``.

    Up to 7 vertices the networkx atlas is used directly.  Larger orders are
    grown one vertex at a time from the previous order, which is complete only
    when ``predicate`` is closed under vertex deletion (as every property used
    in this package is).
    """
    keep = predicate or (lambda _g: True)
    if n <= 7:
        graphs = [Graph.from_networkx(h) for h in nx.graph_atlas_g() if h.number_of_nodes() == n]
        out = [h for h in graphs if keep(h)]
        return [h for h in out if h.is_connected()] if connected else out
    return grow_catalog(graph_catalog(n - 1, predicate, connected), keep, connected)


def grow_catalog(parents: Iterable[Graph], keep: Callable[[Graph], bool],
                 connected: bool = True) -> list[Graph]:
    """Non-isomorphic one-vertex extensions of ``parents`` accepted by ``keep``.

    With ``connected`` the parents are assumed connected and only connected
    children are produced; deleting a non-cut vertex keeps a graph connected,
    so connected parents suffice.
    """
    buckets: dict[tuple, list[nx.Graph]] = {}
    out = []
    for parent in parents:
        n = parent.n + 1
        for nbrs in range(1 if connected else 0, 1 << (n - 1)):
            edges = list(parent.edges) + [(v, n - 1) for v in range(n - 1) if nbrs >> v & 1]
            child = Graph(n, edges)
            if not keep(child):
                continue
            h = child.to_networkx()
            key = (child.m, tuple(sorted(child.degrees())), nx.weisfeiler_lehman_graph_hash(h, iterations=3))
            seen = buckets.setdefault(key, [])
            if any(nx.is_isomorphic(h, other) for other in seen):
                continue
            seen.append(h)
            out.append(child)
    return out


def relabel(g: Graph, order: Sequence[int]) -> Graph:
    """Graph whose vertex ``i`` is ``order[i]`` of ``g``."""
    index = {v: i for i, v in enumerate(order)}
    return Graph(g.n, ((index[u], index[v]) for u, v in g.edges))
