"""Vertex and edge taxonomy, structural detectors, and the discharging ledger.

Degree words follow the usual convention: a *d-vertex* has degree ``d`` and a
*3-neighbour* is a neighbour of degree three.  A 4-vertex is *stressed* with
two 3-neighbours, *conductive* with one and *insulated* with none; every
vertex of degree five or more is insulated too.  A *special K4* is a K4 on two
3-vertices and two 4-vertices, and the edge between its 4-vertices is
*insulated*.  Every other edge is *conductive*.

Conductive paths only constrain their interior: every internal vertex must
be conductive and every edge conductive.  Two vertices are conductively
connected when such a path joins them, including a bare conductive edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Sequence

from .graph import Graph, block_decomposition, max_average_degree
from .reducibility import ReducibleWitness, find_weakly_reducible

XI = Fraction(1, 2 ** 48)
MAD_THRESHOLD = Fraction(11, 3)
DEFAULT_PATH_CAP = 12

THREE = "three_vertex"
STRESSED = "stressed"
CONDUCTIVE = "conductive4"
INSULATED4 = "insulated4"
INSULATED5 = "insulated5plus"
OTHER = "other"

VERTEX_CLASSES = (THREE, STRESSED, CONDUCTIVE, INSULATED4, INSULATED5, OTHER)


# classification

@dataclass(frozen=True)
class Classification:
    vertices: tuple[str, ...]
    insulated_edges: frozenset[tuple[int, int]]
    special_k4s: tuple[tuple[int, int, int, int], ...]

    def edge_class(self, u: int, v: int) -> str:
        return "insulated" if (min(u, v), max(u, v)) in self.insulated_edges else "conductive"

    def is_conductive_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) not in self.insulated_edges

    def of(self, cls: str) -> list[int]:
        return [v for v, c in enumerate(self.vertices) if c == cls]

    def insulated(self, v: int) -> bool:
        return self.vertices[v] in (INSULATED4, INSULATED5)


def three_neighbours(g: Graph, v: int) -> list[int]:
    return sorted(w for w in g.neighbors(v) if g.degree(w) == 3)


def _vertex_class(g: Graph, v: int) -> str:
    d = g.degree(v)
    if d == 3:
        return THREE
    if d >= 5:
        return INSULATED5
    if d != 4:
        return OTHER
    return {0: INSULATED4, 1: CONDUCTIVE, 2: STRESSED}.get(len(three_neighbours(g, v)), OTHER)


def special_k4s(g: Graph) -> list[tuple[int, int, int, int]]:
    """K4 subgraphs with exactly two 3-vertices and two 4-vertices, sorted."""
    out = []
    for a, b in g.edges:
        common = sorted(g.neighbors(a) & g.neighbors(b))
        for c, d in combinations(common, 2):
            if c > b and g.has_edge(c, d):
                quad = (a, b, c, d)
                degs = sorted(g.degree(v) for v in quad)
                if degs == [3, 3, 4, 4]:
                    out.append(quad)
    return sorted(out)


def classify(g: Graph) -> Classification:
    k4s = special_k4s(g)
    insulated = set()
    for quad in k4s:
        u, v = (w for w in quad if g.degree(w) == 4)
        insulated.add((min(u, v), max(u, v)))
    return Classification(tuple(_vertex_class(g, v) for v in g.vertices), frozenset(insulated), tuple(k4s))


def classify_vertices(g: Graph) -> tuple[str, ...]:
    return classify(g).vertices


def classify_edges(g: Graph) -> dict[tuple[int, int], str]:
    cl = classify(g)
    return {e: cl.edge_class(*e) for e in g.edges}


# conductive connectivity

def conductive_reach(g: Graph, u: int, cl: Classification | None = None) -> dict[int, int | None]:
    """BFS tree of vertices conductively connected with ``u`` (parent pointers).

    ``u`` itself is the root; it is only reported as reachable if some
    conductive path returns to it, which never happens for simple paths.
    """
    cl = cl or classify(g)
    parent: dict[int, int | None] = {u: None}
    frontier = [u]
    while frontier:
        nxt = []
        for w in frontier:
            if w != u and cl.vertices[w] != CONDUCTIVE:
                continue
            for x in sorted(g.neighbors(w)):
                if x not in parent and cl.is_conductive_edge(w, x):
                    parent[x] = w
                    nxt.append(x)
        frontier = nxt
    return parent


def _trace(parent: dict[int, int | None], v: int) -> tuple[int, ...]:
    out = [v]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return tuple(reversed(out))


def conductively_connected(g: Graph, u: int, v: int, cl: Classification | None = None) -> tuple[bool, tuple[int, ...] | None]:
    """Whether a conductive path joins ``u`` and ``v``; returns a shortest one."""
    if u == v:
        raise ValueError("endpoints must differ")
    parent = conductive_reach(g, u, cl)
    if v in parent:
        return True, _trace(parent, v)
    return False, None


def is_conductive_path(g: Graph, path: Sequence[int], cl: Classification) -> bool:
    if len(path) < 2 or len(set(path)) != len(path):
        return False
    if any(not g.has_edge(a, b) or not cl.is_conductive_edge(a, b) for a, b in zip(path, path[1:])):
        return False
    return all(cl.vertices[w] == CONDUCTIVE for w in path[1:-1])


def conductively_connected_stressed(g: Graph, v: int, cl: Classification) -> list[int]:
    return sorted(w for w in conductive_reach(g, v, cl) if w != v and cl.vertices[w] == STRESSED)


# path and cycle enumeration

def _is_induced(g: Graph, path: Sequence[int], closed: bool = False) -> bool:
    n = len(path)
    for a in range(n):
        for b in range(a + 1, n):
            adjacent = b == a + 1 or (closed and a == 0 and b == n - 1)
            if g.has_edge(path[a], path[b]) != adjacent:
                return False
    return True


def _simple_paths(g: Graph, start: int, max_vertices: int, step_ok: Callable[[tuple[int, ...], int], bool]) -> Iterator[tuple[int, ...]]:
    """Simple paths from ``start`` (at least two vertices), depth first.

    ``step_ok(path, w)`` decides whether ``path`` may be extended by ``w``;
    every accepted extension is yielded and then extended further.
    """
    path = [start]
    on = {start}

    def rec() -> Iterator[tuple[int, ...]]:
        if len(path) >= max_vertices:
            return
        for w in sorted(g.neighbors(path[-1])):
            if w in on or not step_ok(tuple(path), w):
                continue
            path.append(w)
            on.add(w)
            yield tuple(path)
            yield from rec()
            path.pop()
            on.discard(w)

    yield from rec()


def induced_cycles(g: Graph, allowed: Sequence[int], max_len: int) -> Iterator[tuple[int, ...]]:
    """Induced cycles of ``G`` inside ``allowed``, each once, smallest vertex first."""
    ok = set(allowed)
    for s in sorted(ok):
        def step(path, w, s=s):
            if w not in ok or w <= s:
                return False
            if len(path) >= 3 and g.has_edge(path[-1], s):
                return False  # already closed into a cycle
            # w may touch only the last vertex and possibly s
            return not any(g.has_edge(w, x) for x in path[1:-1])
        for path in _simple_paths(g, s, max_len, step):
            if len(path) >= 3 and g.has_edge(path[-1], s) and path[1] < path[-1]:
                yield path


# violations

@dataclass(frozen=True, order=True)
class Violation:
    kind: str
    witness: tuple[int, ...]
    description: str = field(compare=False)


DETECTORS = (
    "min-degree", "degree-budget", "stressed-pair-K4", "far-neighbor", "conductive-cycle",
    "stressed-triangle", "conductive-2-connected", "short-stressed-path", "conductive-stressed-pair",
    "434-path", "stranded-stressed", "overloaded-insulated-4", "overloaded-6plus", "overloaded-5",
)
SHORT_PATH_LIMIT = 8  # stressed pairs must be at least nine vertices apart


def _min_degree(g, cl, cap):
    for v in g.vertices:
        if g.degree(v) <= 2:
            yield Violation("min-degree", (v,), f"vertex {v} has degree {g.degree(v)}")


def _degree_budget(g, cl, cap):
    for v in g.vertices:
        d = g.degree(v)
        threes = three_neighbours(g, v)
        if d in (3, 4, 5) and len(threes) > d - 2:
            yield Violation("degree-budget", (v, *threes), f"{d}-vertex {v} has {len(threes)} 3-neighbours")


def _stressed_pair_k4(g, cl, cap):
    for u, v in combinations(cl.of(STRESSED), 2):
        common = [r for r in three_neighbours(g, u) if r in g.neighbors(v)]
        for r1, r2 in combinations(common, 2):
            if not all(g.has_edge(a, b) for a, b in combinations((u, v, r1, r2), 2)):
                yield Violation("stressed-pair-K4", (u, v, r1, r2),
                                f"stressed {u},{v} share 3-neighbours {r1},{r2} without a special K4")


def _induced_conductive_paths(g, cl, u, v, cap):
    def step(path, w):
        if not cl.is_conductive_edge(path[-1], w):
            return False
        if len(path) >= 2 and cl.vertices[path[-1]] != CONDUCTIVE:
            return False
        if w != v and cl.vertices[w] != CONDUCTIVE:
            return False
        return not any(g.has_edge(w, x) for x in path[:-1])
    for path in _simple_paths(g, u, cap, step):
        if path[-1] == v:
            yield path


def _far_neighbor(g, cl, cap):
    for x in cl.of(THREE):
        fours = sorted(w for w in g.neighbors(x) if g.degree(w) == 4)
        for u, v in combinations(fours, 2):
            for path in _induced_conductive_paths(g, cl, u, v, cap):
                far = [p for p in path if not g.has_edge(x, p)]
                if far:
                    yield Violation("far-neighbor", (x, *path),
                                    f"3-vertex {x}: induced conductive path {list(path)} reaches {far[0]} outside N({x})")
                    break


def _dominated_triangle(g, cycle):
    if len(cycle) != 3:
        return False
    common = g.neighbors(cycle[0]) & g.neighbors(cycle[1]) & g.neighbors(cycle[2])
    return any(g.degree(r) == 3 for r in common)


def _conductive_cycle(g, cl, cap):
    for cyc in induced_cycles(g, cl.of(CONDUCTIVE), cap):
        if not _dominated_triangle(g, cyc):
            yield Violation("conductive-cycle", cyc, f"induced conductive cycle {list(cyc)}")


def _conductive_triangles(g, cl):
    cond = cl.of(CONDUCTIVE)
    for a, b, c in combinations(cond, 3):
        if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c):
            yield a, b, c


def _stressed_triangle(g, cl, cap):
    for tri in _conductive_triangles(g, cl):
        for s in cl.of(STRESSED):
            if sum(1 for w in tri if g.has_edge(s, w)) >= 2:
                yield Violation("stressed-triangle", (s, *tri), f"stressed {s} sees two vertices of conductive triangle {list(tri)}")


def _conductive_2_connected(g, cl, cap):
    cond = cl.of(CONDUCTIVE)
    if not cond:
        return
    sub, id_map = g.induced(cond)
    for block in block_decomposition(sub).blocks:
        if len(block) >= 4:
            vs = tuple(sorted(id_map[i] for i in block))
            yield Violation("conductive-2-connected", vs, f"2-connected conductive block {list(vs)}")


def _short_path_ok(g, cl, path):
    """Hypotheses of the short-stressed-path rule for a complete path ``path``."""
    s, t = path[0], path[-1]
    if cl.vertices[s] != STRESSED or cl.vertices[t] != STRESSED or s == t:
        return False
    if any(g.degree(w) > 4 for w in path):
        return False
    if len(path) == 2 and not cl.is_conductive_edge(s, t):
        return False
    odd = [w for w in path[1:-1] if cl.vertices[w] != CONDUCTIVE]
    if len(odd) > 1:
        return False
    if odd:
        x = odd[0]
        if cl.vertices[x] == INSULATED4:
            return True
        return cl.vertices[x] == THREE and not g.has_edge(x, s) and not g.has_edge(x, t)
    return True


def _short_stressed_path(g, cl, cap):
    limit = min(SHORT_PATH_LIMIT, cap)
    for s in cl.of(STRESSED):
        def step(path, w):
            if g.degree(w) > 4:
                return False
            inner = path[1:]
            if inner and cl.vertices[path[-1]] not in (CONDUCTIVE, INSULATED4, THREE):
                return False
            return sum(1 for y in inner if cl.vertices[y] != CONDUCTIVE) <= 1
        best: dict[int, tuple[int, ...]] = {}
        for path in _simple_paths(g, s, limit, step):
            t = path[-1]
            if t > s and _short_path_ok(g, cl, path) and (t not in best or len(path) < len(best[t])):
                best[t] = path
        for t, path in sorted(best.items()):
            yield Violation("short-stressed-path", path, f"stressed {s},{t} joined by a {len(path)}-vertex path")


def _conductive_stressed_pair(g, cl, cap):
    for s in cl.of(STRESSED):
        parent = conductive_reach(g, s, cl)
        for t in sorted(parent):
            if t > s and cl.vertices[t] == STRESSED:
                path = _trace(parent, t)
                yield Violation("conductive-stressed-pair", path, f"stressed {s},{t} conductively connected via {list(path)}")


def _434_ok(g, cl, path):
    u, v = path[0], path[-1]
    if cl.vertices[u] != STRESSED or cl.vertices[v] != STRESSED or u == v:
        return False
    if any(not cl.is_conductive_edge(a, b) for a, b in zip(path, path[1:])):
        return False
    threes = [w for w in path[1:-1] if cl.vertices[w] == THREE]
    rest = [w for w in path[1:-1] if cl.vertices[w] not in (THREE, CONDUCTIVE)]
    if rest or len(threes) != 1:
        return False
    x = threes[0]
    return not g.has_edge(x, u) and not g.has_edge(x, v)


def _434_path(g, cl, cap):
    for s in cl.of(STRESSED):
        def step(path, w):
            if not cl.is_conductive_edge(path[-1], w):
                return False
            if len(path) >= 2 and cl.vertices[path[-1]] not in (CONDUCTIVE, THREE):
                return False
            return sum(1 for y in path[1:] + (w,) if cl.vertices[y] == THREE) <= 1
        best: dict[int, tuple[int, ...]] = {}
        for path in _simple_paths(g, s, cap, step):
            t = path[-1]
            if t > s and _434_ok(g, cl, path) and (t not in best or len(path) < len(best[t])):
                best[t] = path
        for t, path in sorted(best.items()):
            yield Violation("434-path", path, f"stressed {s},{t} joined through one far 3-vertex")


def _stranded_stressed(g, cl, cap):
    for s in cl.of(STRESSED):
        reach = conductive_reach(g, s, cl)
        if not any(cl.insulated(w) for w in reach if w != s):
            yield Violation("stranded-stressed", (s,), f"stressed {s} reaches no insulated vertex")


def _overloaded(kind, select, allowance):
    def detector(g, cl, cap):
        for v in g.vertices:
            if not select(g, cl, v):
                continue
            stressed = conductively_connected_stressed(g, v, cl)
            t = len(three_neighbours(g, v))
            if len(stressed) > allowance(g.degree(v), t):
                yield Violation(kind, (v, *stressed),
                                f"vertex {v} is conductively connected with {len(stressed)} stressed vertices")
    return detector


def donor_capacity(g: Graph, cl: Classification, v: int) -> int:
    """How many stressed vertices ``v`` may feed under the third discharging rule."""
    t = len(three_neighbours(g, v))
    if cl.vertices[v] == INSULATED4:
        return 1
    if cl.vertices[v] != INSULATED5:
        return 0
    return max(0, (4 if g.degree(v) == 5 else g.degree(v)) - t)


_RUNNERS = {
    "min-degree": _min_degree,
    "degree-budget": _degree_budget,
    "stressed-pair-K4": _stressed_pair_k4,
    "far-neighbor": _far_neighbor,
    "conductive-cycle": _conductive_cycle,
    "stressed-triangle": _stressed_triangle,
    "conductive-2-connected": _conductive_2_connected,
    "short-stressed-path": _short_stressed_path,
    "conductive-stressed-pair": _conductive_stressed_pair,
    "434-path": _434_path,
    "stranded-stressed": _stranded_stressed,
    "overloaded-insulated-4": _overloaded("overloaded-insulated-4", lambda g, cl, v: cl.vertices[v] == INSULATED4,
                                          lambda d, t: 1),
    "overloaded-6plus": _overloaded("overloaded-6plus", lambda g, cl, v: g.degree(v) >= 6, lambda d, t: d - t),
    "overloaded-5": _overloaded("overloaded-5", lambda g, cl, v: g.degree(v) == 5, lambda d, t: 4 - t),
}


@dataclass(frozen=True)
class DetectionReport:
    violations: tuple[Violation, ...]
    path_cap: int

    def kinds(self) -> list[str]:
        return sorted({v.kind for v in self.violations}, key=DETECTORS.index)

    def __bool__(self) -> bool:
        return bool(self.violations)


def detect_violations(g: Graph, path_cap: int = DEFAULT_PATH_CAP, kinds: Sequence[str] | None = None) -> DetectionReport:
    """Run every detector (or those in ``kinds``); witnesses replay via :func:`replay`.

    Path and cycle searches stop at ``path_cap`` vertices, so a clean report
    means no violation up to that length.
    """
    cl = classify(g)
    chosen = DETECTORS if kinds is None else [k for k in DETECTORS if k in kinds]
    found: list[Violation] = []
    for kind in chosen:
        found.extend(_RUNNERS[kind](g, cl, path_cap))
    found.sort(key=lambda v: (DETECTORS.index(v.kind), v.witness))
    return DetectionReport(tuple(found), path_cap)


def replay(g: Graph, v: Violation) -> bool:
    """Recheck a violation from its witness alone."""
    cl = classify(g)
    w = v.witness
    if any(x < 0 or x >= g.n for x in w):
        return False
    kind = v.kind
    if kind == "min-degree":
        return g.degree(w[0]) <= 2
    if kind == "degree-budget":
        d = g.degree(w[0])
        return d in (3, 4, 5) and list(w[1:]) == three_neighbours(g, w[0]) and len(w) - 1 > d - 2
    if kind == "stressed-pair-K4":
        s1, s2, r1, r2 = w
        return (cl.vertices[s1] == STRESSED and cl.vertices[s2] == STRESSED
                and all(g.degree(r) == 3 and g.has_edge(r, s1) and g.has_edge(r, s2) for r in (r1, r2))
                and not all(g.has_edge(a, b) for a, b in combinations(w, 2)))
    if kind == "far-neighbor":
        x, path = w[0], w[1:]
        return (g.degree(x) == 3 and all(g.degree(e) == 4 and g.has_edge(x, e) for e in (path[0], path[-1]))
                and is_conductive_path(g, path, cl) and _is_induced(g, path)
                and any(not g.has_edge(x, p) for p in path))
    if kind == "conductive-cycle":
        return (len(w) >= 3 and all(cl.vertices[x] == CONDUCTIVE for x in w)
                and _is_induced(g, w, closed=True) and not _dominated_triangle(g, w))
    if kind == "stressed-triangle":
        s, tri = w[0], w[1:]
        return (cl.vertices[s] == STRESSED and all(cl.vertices[x] == CONDUCTIVE for x in tri)
                and all(g.has_edge(a, b) for a, b in combinations(tri, 2))
                and sum(1 for x in tri if g.has_edge(s, x)) >= 2)
    if kind == "conductive-2-connected":
        if len(w) < 4 or any(cl.vertices[x] != CONDUCTIVE for x in w):
            return False
        sub, _ = g.induced(w)
        return sub.is_connected() and all(sub.remove([x])[0].is_connected() for x in range(sub.n))
    if kind == "short-stressed-path":
        return (len(w) <= SHORT_PATH_LIMIT and all(g.has_edge(a, b) for a, b in zip(w, w[1:]))
                and len(set(w)) == len(w) and _short_path_ok(g, cl, w))
    if kind == "conductive-stressed-pair":
        return cl.vertices[w[0]] == STRESSED and cl.vertices[w[-1]] == STRESSED and is_conductive_path(g, w, cl)
    if kind == "434-path":
        return all(g.has_edge(a, b) for a, b in zip(w, w[1:])) and len(set(w)) == len(w) and _434_ok(g, cl, w)
    if kind == "stranded-stressed":
        return cl.vertices[w[0]] == STRESSED and not any(cl.insulated(x) for x in conductive_reach(g, w[0], cl) if x != w[0])
    if kind.startswith("overloaded"):
        x, stressed = w[0], w[1:]
        d, t = g.degree(x), len(three_neighbours(g, x))
        select = {"overloaded-insulated-4": cl.vertices[x] == INSULATED4,
                  "overloaded-6plus": d >= 6, "overloaded-5": d == 5}[kind]
        allowance = {"overloaded-insulated-4": 1, "overloaded-6plus": d - t, "overloaded-5": 4 - t}[kind]
        return (select and len(stressed) > allowance
                and all(cl.vertices[s] == STRESSED and conductively_connected(g, x, s, cl)[0] for s in stressed))
    raise ValueError(f"unknown violation kind {kind!r}")


# discharging

@dataclass(frozen=True)
class ChargeLedger:
    initial: tuple[Fraction, ...]
    after_r2: tuple[Fraction, ...]
    final: tuple[Fraction, ...]
    r3_assignment: dict[int, int]
    unmatched: tuple[int, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.final, Fraction(0))

    def negative(self) -> list[int]:
        return [v for v, c in enumerate(self.final) if c < 0]


def _match_donors(stressed: Sequence[int], options: dict[int, list[int]], capacity: dict[int, int]) -> dict[int, int]:
    """Maximum capacitated bipartite matching by augmenting paths.

    Stressed vertices are processed in id order and donors are tried lowest
    id first, so the result is deterministic.
    """
    load: dict[int, list[int]] = {d: [] for d in capacity}
    owner: dict[int, int] = {}

    def augment(s: int, seen: set[int]) -> bool:
        for d in options[s]:
            if d in seen or capacity[d] == 0:
                continue
            seen.add(d)
            if len(load[d]) < capacity[d]:
                load[d].append(s)
                owner[s] = d
                return True
            for other in list(load[d]):
                if augment(other, seen):
                    load[d].remove(other)
                    load[d].append(s)
                    owner[s] = d
                    return True
        return False

    for s in stressed:
        augment(s, set())
    return dict(sorted(owner.items()))


def discharge(g: Graph) -> ChargeLedger:
    cl = classify(g)
    third = Fraction(1, 3)
    initial = [g.degree(v) - MAD_THRESHOLD for v in g.vertices]
    charge = list(initial)
    for v in g.vertices:
        if g.degree(v) == 3:
            for w in g.neighbors(v):
                if g.degree(w) >= 4:
                    charge[v] += third
                    charge[w] -= third
    after_r2 = tuple(charge)
    stressed = cl.of(STRESSED)
    capacity = {v: donor_capacity(g, cl, v) for v in g.vertices if cl.insulated(v)}
    options = {s: sorted(w for w in conductive_reach(g, s, cl) if w != s and w in capacity) for s in stressed}
    assignment = _match_donors(stressed, options, capacity)
    for s, d in assignment.items():
        charge[s] += third
        charge[d] -= third
    ledger = ChargeLedger(tuple(initial), after_r2, tuple(charge), assignment,
                          tuple(s for s in stressed if s not in assignment))
    expected = 2 * g.m - MAD_THRESHOLD * g.n
    if ledger.total != expected:
        raise AssertionError(f"charge not conserved: {ledger.total} != {expected}")
    return ledger


# audit

@dataclass(frozen=True)
class AuditReport:
    mad: Fraction
    applies: bool
    reducible: ReducibleWitness | None
    detection: DetectionReport | None
    ledger: ChargeLedger | None

    @property
    def negative_total(self) -> bool:
        return self.ledger is not None and self.ledger.total < 0

    @property
    def nonvacuous(self) -> bool:
        if not self.applies:
            return True
        return self.reducible is not None or bool(self.detection) or self.negative_total

    def findings(self) -> list[str]:
        out = []
        if self.reducible is not None:
            out.append("weakly-reducible")
        if self.detection:
            out.append("violations")
        if self.negative_total:
            out.append("negative-total")
        return out


def audit_counterexample(g: Graph, k: int = 4, max_size: int = 24, path_cap: int = DEFAULT_PATH_CAP) -> AuditReport:
    """Explain why ``g`` is not a minimal counterexample.

    Only graphs with maximum average degree below 11/3 are in scope; for
    those the report carries a weakly reducible subgraph if one exists within
    ``max_size`` vertices, every detector violation, and the discharging
    ledger, whose total is negative by density alone.
    """
    mad = max_average_degree(g).value if g.n else Fraction(0)
    if mad >= MAD_THRESHOLD:
        return AuditReport(mad, False, None, None, None)
    witness = find_weakly_reducible(g, k, min(g.n, max_size))
    return AuditReport(mad, True, witness, detect_violations(g, path_cap), discharge(g))
