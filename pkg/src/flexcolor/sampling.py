"""Staged random procedures that can be sampled or expanded exactly.

A :class:`Process` is an initial state and a list of stages.  Each stage maps
a state to its successors as ``(probability, state)`` pairs.  Sampling walks
one branch with a seeded RNG; exact expansion pushes the whole distribution
through every stage, merging equal states so the work tracks the number of
distinct partial outcomes rather than the number of branches.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from statistics import NormalDist
from typing import Any, Callable, Hashable, Sequence

Stage = Callable[[Any], Sequence[tuple[Fraction, Hashable]]]
Distribution = dict[tuple[int, ...], Fraction]


class BudgetExceeded(RuntimeError):
    """Exact expansion needs more live states than the budget allows."""


def pick(rng: random.Random, options: Sequence[tuple[Fraction, Any]]) -> Any:
    """Draw from rational weights exactly using an integer uniform."""
    if len(options) == 1:
        return options[0][1]
    den = lcm(*(Fraction(w).denominator for w, _ in options))
    total = sum(Fraction(w) * den for w, _ in options)
    x = rng.randrange(int(total))
    for w, item in options:
        x -= int(Fraction(w) * den)
        if x < 0:
            return item
    return options[-1][1]


@dataclass
class Process:
    initial: Hashable
    stages: list[Stage]
    finish: Callable[[Any], tuple[int, ...]] = lambda s: s

    def run(self, rng: random.Random) -> tuple[int, ...]:
        state = self.initial
        for stage in self.stages:
            state = pick(rng, stage(state))
        return self.finish(state)

    def expand(self, budget: int = 2 ** 22) -> Distribution:
        dist: dict[Hashable, Fraction] = {self.initial: Fraction(1)}
        for stage in self.stages:
            nxt: dict[Hashable, Fraction] = defaultdict(Fraction)
            for state, p in dist.items():
                for w, s2 in stage(state):
                    nxt[s2] += p * w
            if len(nxt) > budget:
                raise BudgetExceeded(f"{len(nxt)} live states exceed budget {budget}")
            dist = nxt
        out: Distribution = defaultdict(Fraction)
        for state, p in dist.items():
            out[self.finish(state)] += p
        return dict(out)


class Sampler:
    """A seeded process: ``sample()`` draws, ``distribution()`` expands exactly."""

    def __init__(self, process: Process, seed: int | str = 0):
        self.process = process
        self.seed = seed
        self.rng = random.Random(seed)
        self._exact: Distribution | None = None

    def sample(self) -> tuple[int, ...]:
        return self.process.run(self.rng)

    def distribution(self, budget: int = 2 ** 22) -> Distribution:
        if self._exact is None:
            self._exact = self.process.expand(budget)
        return self._exact


def fixed_distribution(dist: Distribution) -> Process:
    """A one-stage process drawing from a known distribution."""
    items = [(p, phi) for phi, p in sorted(dist.items())]
    return Process(None, [lambda _s: items])


# statistics of a colouring distribution

@dataclass(frozen=True)
class EventStats:
    min_fix: Fraction
    fix_at: tuple[int, int] | None
    min_forb: Fraction
    forb_at: tuple[tuple[int, ...], int] | None


def fix_forb_stats(dist: Distribution, lists: Sequence[Sequence[int]], vertices: Sequence[int] | None = None) -> EventStats:
    """Minimum FIX probability and minimum FORB probability over ``|U| <= 2``.

    FIX ranges over ``(v, c)`` with ``c in L(v)``; FORB over ``U`` of one or
    two vertices and ``c`` in the union of their lists.
    """
    n = len(lists)
    vs = list(range(n)) if vertices is None else list(vertices)
    den = lcm(*(p.denominator for p in dist.values())) if dist else 1
    marg_i: dict[tuple[int, int], int] = defaultdict(int)
    joint_i: dict[tuple[int, int, int], int] = defaultdict(int)
    pairs = [(u, w) for i, u in enumerate(vs) for w in vs[i + 1:]]
    for phi, p in dist.items():
        w = int(p * den)
        for v in vs:
            marg_i[v, phi[v]] += w
        for u, x in pairs:
            if phi[u] == phi[x]:
                joint_i[u, x, phi[u]] += w
    marg = {key: Fraction(w, den) for key, w in marg_i.items()}
    joint = {key: Fraction(w, den) for key, w in joint_i.items()}
    min_fix, fix_at = None, None
    for v in vs:
        for c in sorted(lists[v]):
            pr = marg.get((v, c), Fraction(0))
            if min_fix is None or pr < min_fix:
                min_fix, fix_at = pr, (v, c)
    min_forb, forb_at = None, None
    for i, u in enumerate(vs):
        for c in sorted(lists[u]):
            pr = 1 - marg.get((u, c), Fraction(0))
            if min_forb is None or pr < min_forb:
                min_forb, forb_at = pr, ((u,), c)
        for w in vs[i + 1:]:
            for c in sorted(set(lists[u]) | set(lists[w])):
                pr = 1 - marg.get((u, c), 0) - marg.get((w, c), 0) + joint.get((u, w, c), 0)
                if pr < min_forb:
                    min_forb, forb_at = pr, ((u, w), c)
    return EventStats(min_fix if min_fix is not None else Fraction(1), fix_at,
                      min_forb if min_forb is not None else Fraction(1), forb_at)


def wilson_interval(successes: int, trials: int, confidence: float = 0.99) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * ((phat * (1 - phat) / trials + z * z / (4 * trials * trials)) ** 0.5) / denom
    return max(0.0, centre - half), min(1.0, centre + half)
