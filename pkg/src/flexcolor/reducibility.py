"""Fixing and forbidding colours, weak reductivity and the optimal constant.

For an f-assignment ``L`` on ``H``:

* FIX' holds when every pair ``(v, c)`` with ``c in L(v)`` extends to an
  L-colouring.
* FORB-t holds when, for every ``t`` vertices (repetition allowed) and every
  colour ``c`` in one of their lists, some L-colouring avoids ``c`` on all of
  them.

``H`` is weakly (f, k)-reductive when both FIX' and FORB-(k-2) hold for every
f-assignment.  Deciding that by listing assignments is hopeless beyond toy
sizes, so the default route uses the exact equivalences

* FIX' for all L  <=>  ``H - v`` is choosable under f lowered on ``N(v)``, for every v;
* FORB-t for all L  <=>  ``H`` is ``(f - 1_U)``-choosable for every ``1 <= |U| <= t``,

which hold because any bad assignment for the smaller problem becomes a bad
assignment for the original after adding one fresh colour in the right places.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import prod
from typing import Iterable, Sequence

from .assignment import Lists, canonical_assignments, class_families, ell, f_minus_indicator, f_restrict
from .choosability import colorings, is_f_choosable
from .graph import Graph, connected_induced_subgraphs
from .sampling import BudgetExceeded
from .simplex import maximize


DEFAULT_BUDGET = 2 ** 20


# checks on one concrete assignment

def check_fix_prime(h: Graph, lists: Lists) -> list[tuple[int, int]]:
    """Pairs ``(v, c)`` with ``c in L(v)`` that extend to no L-colouring."""
    seen = set()
    for phi in colorings(h, lists):
        seen.update(enumerate(phi))
    return [(v, c) for v in range(h.n) for c in sorted(lists[v]) if (v, c) not in seen]


def check_forb_t(h: Graph, lists: Lists, t: int) -> list[tuple[tuple[int, ...], int]]:
    """Tuples ``(v_1..v_t)`` (repetition allowed) and colours that cannot be avoided."""
    all_phi = list(colorings(h, lists))
    fails = []
    for vs in product(range(h.n), repeat=t):
        for c in sorted(set().union(*(lists[v] for v in vs))):
            if not any(all(phi[v] != c for v in vs) for phi in all_phi):
                fails.append((vs, c))
    return fails


def check_forb_subsets(h: Graph, lists: Lists, t: int) -> list[tuple[frozenset[int], int]]:
    """Same property as :func:`check_forb_t`, indexed by vertex sets of size ``1..t``."""
    all_phi = list(colorings(h, lists))
    fails = []
    for size in range(1, t + 1):
        for us in combinations(range(h.n), size):
            for c in sorted(set().union(*(lists[u] for u in us))):
                if not any(all(phi[u] != c for u in us) for phi in all_phi):
                    fails.append((frozenset(us), c))
    return fails


# weak reductivity

@dataclass(frozen=True)
class Failure:
    prop: str  # "colourable", "FIX'" or "FORB"
    vertices: tuple[int, ...]
    lists: Lists | None = None
    colour: int | None = None


@dataclass(frozen=True)
class ReductivityVerdict:
    holds: bool
    failures: tuple[Failure, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


def _fresh(lists: Iterable[Iterable[int]]) -> int:
    return 1 + max((c for l in lists for c in l), default=-1)


def _fix_witness(h: Graph, f: Sequence[int], v: int, sub_lists: Lists, id_map: Sequence[int]) -> tuple[Lists, int]:
    c = _fresh(sub_lists)
    out: list[set[int]] = [set() for _ in range(h.n)]
    for i, w in enumerate(id_map):
        out[w] = set(sub_lists[i])
    for w in h.neighbors(v):
        out[w].add(c)
    out[v] = {c} | set(range(c + 1, c + max(1, f[v])))
    return tuple(frozenset(l) for l in out), c


def _forb_witness(lists: Lists, us: Iterable[int]) -> tuple[Lists, int]:
    c = _fresh(lists)
    out = [set(l) for l in lists]
    for u in us:
        out[u].add(c)
    return tuple(frozenset(l) for l in out), c


def is_weakly_reductive(h: Graph, f: Sequence[int], k: int, method: str = "auto",
                        all_failures: bool = False) -> ReductivityVerdict:
    """Weak (f, k)-reductivity of ``h``.

    ``method="auto"`` uses the choosability equivalences above; ``"patterns"``
    walks every canonical assignment and checks FIX' and FORB-(k-2) directly.
    Both additionally insist that some colouring exists, which only matters
    when every list would be empty.
    """
    if h.n == 0:
        raise ValueError("reductivity of the empty graph is not defined")
    f = tuple(f)
    t = max(0, k - 2)
    failures: list[Failure] = []
    if method == "patterns":
        for lists in canonical_assignments(h, f):
            if next(colorings(h, lists), None) is None:
                failures.append(Failure("colourable", (), lists))
            else:
                failures += [Failure("FIX'", (v,), lists, c) for v, c in check_fix_prime(h, lists)]
                failures += [Failure("FORB", tuple(sorted(us)), lists, c) for us, c in check_forb_subsets(h, lists, t)]
            if failures and not all_failures:
                break
        return ReductivityVerdict(not failures, tuple(failures))
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")

    base = is_f_choosable(h, f)
    if not base:
        failures.append(Failure("colourable", (), base.bad_lists))
        if not all_failures:
            return ReductivityVerdict(False, tuple(failures))
    for v in range(h.n):
        rest, rf, id_map = f_restrict(h, f, [v])
        res = is_f_choosable(rest, rf)
        if not res:
            lists, c = _fix_witness(h, f, v, res.bad_lists, id_map)
            failures.append(Failure("FIX'", (v,), lists, c))
            if not all_failures:
                return ReductivityVerdict(False, tuple(failures))
    for size in range(1, t + 1):
        for us in combinations(range(h.n), size):
            res = is_f_choosable(h, f_minus_indicator(f, us))
            if not res:
                lists, c = _forb_witness(res.bad_lists, us)
                failures.append(Failure("FORB", us, lists, c))
                if not all_failures:
                    return ReductivityVerdict(False, tuple(failures))
    return ReductivityVerdict(not failures, tuple(failures))


# optimal constant

@dataclass(frozen=True)
class AlphaCertificate:
    """Optimal distribution and matching dual weights for one assignment."""

    lists: Lists
    value: Fraction
    distribution: dict[tuple[int, ...], Fraction]
    dual: dict[tuple, Fraction]
    rows: int
    columns: int


@dataclass(frozen=True)
class AlphaResult:
    value: Fraction
    worst: AlphaCertificate | None
    assignments: int = 0
    weak: ReductivityVerdict = field(default_factory=lambda: ReductivityVerdict(True))


def _events(h: Graph, lists: Lists, k: int) -> list[tuple]:
    rows: list[tuple] = [("fix", v, c) for v in range(h.n) for c in sorted(lists[v])]
    for size in range(1, max(0, k - 2) + 1):
        for us in combinations(range(h.n), size):
            for c in sorted(set().union(*(lists[u] for u in us))):
                rows.append(("forb", us, c))
    return rows


def _satisfies(row: tuple, phi: Sequence[int]) -> bool:
    if row[0] == "fix":
        return phi[row[1]] == row[2]
    return all(phi[u] != row[2] for u in row[1])


def alpha_for_lists(h: Graph, lists: Lists, k: int, budget: int = DEFAULT_BUDGET) -> AlphaCertificate:
    """Largest ``a`` such that some distribution on L-colourings meets every
    FIX and FORB-(k-2) event with probability at least ``a``.

    The LP is a matrix game: colourings against events.  Dominated colourings
    and implied events are removed first, the reduced game goes through the
    exact simplex, and both the primal distribution and the dual weights are
    rechecked against the full, unreduced game so the gap is exactly zero.
    """
    if prod(len(l) for l in lists) > budget:
        raise BudgetExceeded(f"product of list sizes exceeds budget {budget}")
    phis = list(colorings(h, lists))
    rows = _events(h, lists, k)
    if not phis:
        return AlphaCertificate(lists, Fraction(0), {}, {}, len(rows), 0)
    # column j -> bitmask of rows it satisfies
    cols = []
    for phi in phis:
        mask = 0
        for i, row in enumerate(rows):
            if _satisfies(row, phi):
                mask |= 1 << i
        cols.append(mask)
    live_cols = _undominated(cols)
    row_masks = []
    for i in range(len(rows)):
        m = 0
        for j, cm in enumerate(live_cols):
            if cols[cm] >> i & 1:
                m |= 1 << j
        row_masks.append(m)
    # an event implied by a stricter one never binds
    live_rows = []
    for i, m in enumerate(row_masks):
        if not any(o != i and mo | m == m and (mo != m or o < i) for o, mo in enumerate(row_masks)):
            live_rows.append(i)
    ncol = len(live_cols)
    # variables: alpha, then p_j for the live colourings
    c = [1] + [0] * ncol
    a = []
    b = []
    for i in live_rows:
        a.append([1] + [-1 if row_masks[i] >> j & 1 else 0 for j in range(ncol)])
        b.append(0)
    a.append([0] + [1] * ncol)
    b.append(1)
    sol = maximize(c, a, b)
    value = sol.value
    dist = {phis[live_cols[j]]: sol.x[1 + j] for j in range(ncol) if sol.x[1 + j]}
    # leftover mass (only possible when the optimum is 0) goes anywhere
    spare = 1 - sum(dist.values())
    if spare:
        first = phis[live_cols[0]]
        dist[first] = dist.get(first, Fraction(0)) + spare
    dual = {rows[i]: sol.dual[r] for r, i in enumerate(live_rows) if sol.dual[r]}
    _verify_game(rows, phis, dist, dual, value)
    return AlphaCertificate(lists, value, dist, dual, len(rows), len(phis))


def _undominated(cols: list[int]) -> list[int]:
    order = sorted(range(len(cols)), key=lambda j: (-bin(cols[j]).count("1"), j))
    kept: list[int] = []
    for j in order:
        if any(cols[j] | cols[o] == cols[o] for o in kept):
            continue
        kept.append(j)
    return sorted(kept)


def _verify_game(rows, phis, dist, dual, value) -> None:
    total = sum(dist.values())
    if total != 1 or any(p < 0 for p in dist.values()):
        raise AssertionError("LP primal is not a probability distribution")
    for row in rows:
        if sum(p for phi, p in dist.items() if _satisfies(row, phi)) < value:
            raise AssertionError(f"primal misses event {row}")
    if any(y < 0 for y in dual.values()) or sum(dual.values()) < 1:
        raise AssertionError("LP dual weights are infeasible")
    worst = max(sum(y for row, y in dual.items() if _satisfies(row, phi)) for phi in phis)
    if worst != value:
        raise AssertionError(f"duality gap {worst - value}")


def optimal_alpha(h: Graph, f: Sequence[int], k: int, budget: int = DEFAULT_BUDGET) -> AlphaResult:
    """Best constant ``a`` for which ``h`` is (f, k, a)-reductive.

    Zero when ``h`` is not weakly reductive.  Otherwise the minimum of the
    per-assignment optimum over pairwise-intersecting colour-class families,
    which include a hardest assignment because merging two disjoint colours
    can only shrink the set of achievable distributions.
    """
    weak = is_weakly_reductive(h, f, k)
    if not weak:
        return AlphaResult(Fraction(0), None, 0, weak)
    best: AlphaCertificate | None = None
    count = 0
    for family in class_families(f):
        lists = tuple(frozenset(c for c, m in enumerate(family) if m >> v & 1) for v in range(h.n))
        cert = alpha_for_lists(h, lists, k, budget)
        count += 1
        if best is None or cert.value < best.value:
            best = cert
    assert best is not None
    return AlphaResult(best.value, best, count, weak)


def optimal_alpha_patterns(h: Graph, f: Sequence[int], k: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Minimum LP optimum over every canonical assignment.  Slow; used as a cross-check."""
    best = None
    for lists in canonical_assignments(h, f):
        v = alpha_for_lists(h, lists, k, budget).value
        best = v if best is None else min(best, v)
    return Fraction(0) if best is None else best


# searches in a host graph

@dataclass(frozen=True)
class ReducibleWitness:
    vertices: tuple[int, ...]
    ell: tuple[int, ...]


def is_reducible_subgraph(g: Graph, vertices: Iterable[int], k: int, alpha: Fraction) -> bool:
    """Whether ``G[vertices]`` is (ell, k, alpha)-reductive.

    A weakly reductive ``H`` with lists of at most ``k`` colours is
    ``k^-|H|``-reductive under the uniform distribution, so the LP is only
    solved when ``alpha`` asks for more.
    """
    vs = sorted(set(vertices))
    h, _ = g.induced(vs)
    f = ell(g, vs, k)
    if not is_weakly_reductive(h, f, k):
        return False
    if max(f) <= k and Fraction(1, k ** len(vs)) >= alpha:
        return True
    return optimal_alpha(h, f, k).value >= alpha


def _quick_reject(f: Sequence[int], k: int) -> bool:
    floor = 2 if k >= 3 else 1
    return any(x < floor for x in f)


def find_weakly_reducible(g: Graph, k: int = 4, max_size: int | None = None) -> ReducibleWitness | None:
    """Smallest, then lexicographically first, weakly (ell, k)-reductive connected induced subgraph."""
    cap = g.n if max_size is None else min(max_size, g.n)
    for vs in connected_induced_subgraphs(g, cap):
        f = ell(g, vs, k)
        if _quick_reject(f, k):
            continue
        h, _ = g.induced(vs)
        if is_weakly_reductive(h, f, k):
            return ReducibleWitness(vs, f)
    return None
