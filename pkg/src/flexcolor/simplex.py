"""Exact rational simplex for ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The origin is feasible, so a single phase suffices.  Pivoting follows
Bland's rule (lowest eligible index enters, lowest basic index leaves on
ratio ties), which cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class Unbounded(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    pivots: int


def maximize(c: Sequence, a: Sequence[Sequence], b: Sequence) -> LPSolution:
    m, n = len(a), len(c)
    if any(Fraction(v) < 0 for v in b):
        raise ValueError("right-hand side must be nonnegative")
    width = n + m
    # rows stored sparsely as dict column -> Fraction; rhs kept apart
    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(m):
        row = {j: Fraction(v) for j, v in enumerate(a[i]) if v}
        row[n + i] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(b[i]))
    obj = {j: -Fraction(v) for j, v in enumerate(c) if v}
    obj_val = Fraction(0)
    basis = [n + i for i in range(m)]
    pivots = 0
    while True:
        entering = min((j for j, v in obj.items() if v < 0), default=None)
        if entering is None:
            break
        leave, best = None, None
        for i in range(m):
            coef = rows[i].get(entering)
            if coef is not None and coef > 0:
                ratio = rhs[i] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise Unbounded("objective is unbounded")
        pivots += 1
        prow = rows[leave]
        pc = prow[entering]
        if pc != 1:
            prow = {j: v / pc for j, v in prow.items()}
            rhs[leave] /= pc
            rows[leave] = prow
        for i in range(m):
            if i == leave:
                continue
            coef = rows[i].get(entering)
            if coef is None:
                continue
            row = rows[i]
            for j, v in prow.items():
                nv = row.get(j, 0) - coef * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            rhs[i] -= coef * rhs[leave]
        coef = obj.get(entering)
        for j, v in prow.items():
            nv = obj.get(j, 0) - coef * v
            if nv:
                obj[j] = nv
            else:
                obj.pop(j, None)
        obj_val -= coef * rhs[leave]
        basis[leave] = entering
    x = [Fraction(0)] * width
    for i, j in enumerate(basis):
        x[j] = rhs[i]
    dual = tuple(obj.get(n + i, Fraction(0)) for i in range(m))
    return LPSolution(obj_val, tuple(x[:n]), dual, pivots)
