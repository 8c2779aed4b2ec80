"""Peel reducible subgraphs off a graph and compose a colouring distribution.

The remainder ``Z`` starts as the whole vertex set.  Each step finds an
induced subgraph ``H`` of ``G[Z]`` that is reducible for the list sizes
``ell_H`` and removes it.  Sampling runs the steps backwards: the last peeled
subgraph is coloured first, and each earlier ``H`` sees lists ``L'`` equal
to ``L`` minus the colours already used on its outside neighbours, trimmed
uniformly at random down to ``ell_H``.  ``H`` is then coloured from a
distribution that depends only on ``L'``.

If every step is ``alpha``-reducible, every FIX event has probability at
least ``2 alpha^(k-1) / k`` and every FORB event on ``U`` at least
``alpha^|U|``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .assignment import Lists, ell
from .choosability import PreconditionError, colorings, is_proper
from .graph import Graph
from .partition import (PartLabeling, SubgraphPartition, is_strong_part, is_weak_part, partition_bound,
                        partition_sampler, square_labeling)
from .reducibility import alpha_for_lists, find_weakly_reducible, is_reducible_subgraph, optimal_alpha
from .sampling import BudgetExceeded, Distribution, Process, Sampler, fix_forb_stats, pick, wilson_interval

STRATEGIES = ("smallest-weak", "lp-first", "pattern-first")
METHODS = ("weak-uniform", "lp", "partition", "crossing-over")
SCHEMA = "flexcolor.certificate/1"
UNIVERSAL_EPSILON = Fraction(1, 2 ** 145)  # the universal constant, reported but never measured
PARTITION_SEARCH_LIMIT = 8


class NoReducibleSubgraph(RuntimeError):
    """Some remainder has no reducible induced subgraph; it is a counterexample candidate."""

    def __init__(self, remainder: tuple[int, ...]):
        super().__init__(f"no reducible subgraph in remainder {list(remainder)}")
        self.remainder = remainder


@dataclass(frozen=True)
class Step:
    remaining: tuple[int, ...]
    peeled: tuple[int, ...]
    alpha: Fraction
    method: str
    ell: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...] | None = None  # indices into ``peeled``
    weak_index: int | None = None
    labeling: PartLabeling | None = None


@dataclass(frozen=True)
class PeelingTrace:
    steps: tuple[Step, ...]
    k: int

    @property
    def alpha_min(self) -> Fraction:
        return min((s.alpha for s in self.steps), default=Fraction(1))

    @property
    def epsilon(self) -> Fraction:
        return 2 * self.alpha_min ** (self.k - 1) / self.k


# finding a step

def _partitions(h: Graph, max_part: int) -> Iterable[list[tuple[int, ...]]]:
    """Set partitions of ``h`` into connected parts, each holding its smallest free vertex."""
    def rec(free: tuple[int, ...]):
        if not free:
            yield []
            return
        first, rest = free[0], free[1:]
        for size in range(min(max_part, len(free)), 0, -1):
            for others in combinations(rest, size - 1):
                part = (first,) + others
                sub, _ = h.induced(part)
                if not sub.is_connected():
                    continue
                left = tuple(v for v in rest if v not in others)
                for tail in rec(left):
                    yield [part] + tail
    yield from rec(tuple(range(h.n)))


def find_partition(h: Graph, f: Sequence[int], max_part: int = 4) -> tuple[SubgraphPartition, int] | None:
    """First partition into at least two parts with one weak part and all others strong."""
    for parts in _partitions(h, max_part):
        if len(parts) < 2:
            continue
        p = SubgraphPartition.make(h, f, parts)
        strong = [bool(is_strong_part(p, i)) for i in range(len(p.parts))]
        if sum(strong) < len(strong) - 1:
            continue
        for i, s in enumerate(strong):
            if all(strong[j] for j in range(len(strong)) if j != i) and (s or is_weak_part(p, i)):
                return p, i
    return None


def _next_step(g: Graph, z: tuple[int, ...], k: int, strategy: str, max_size: int | None) -> Step:
    sub, id_map = g.induced(z)
    found = find_weakly_reducible(sub, k, max_size)
    if found is None:
        raise NoReducibleSubgraph(z)
    local = found.vertices
    peeled = tuple(id_map[v] for v in local)
    f = ell(sub, local, k)  # degrees inside the remainder, which is the host at this step
    h, _ = sub.induced(local)
    uniform = Fraction(1, k ** len(local))
    if strategy == "lp-first":
        try:
            return Step(z, peeled, optimal_alpha(h, f, k).value, "lp", f)
        except BudgetExceeded:
            pass
    if strategy == "pattern-first" and 2 <= len(local) <= PARTITION_SEARCH_LIMIT:
        hit = find_partition(h, f)
        if hit is not None:
            p, weak = hit
            lab = square_labeling(p)
            b = max(4, max(len(q) for q in p.parts))
            return Step(z, peeled, partition_bound(b, lab.universe), "partition", f, p.parts, weak, lab)
    return Step(z, peeled, uniform, "weak-uniform", f)


def build_trace(g: Graph, k: int = 4, strategy: str = "smallest-weak", max_size: int | None = None) -> PeelingTrace:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    z = tuple(g.vertices)
    steps = []
    while z:
        step = _next_step(g, z, k, strategy, max_size)
        steps.append(step)
        gone = set(step.peeled)
        z = tuple(v for v in z if v not in gone)
    return PeelingTrace(tuple(steps), k)


# per-step colouring distributions

class _StepColourer:
    """Distribution on L'-colourings of one peeled subgraph, cached by ``L'``."""

    def __init__(self, g: Graph, step: Step, k: int):
        self.step = step
        self.k = k
        self.h, _ = g.induced(step.peeled)
        self.cache: dict[Lists, list[tuple[Fraction, tuple[int, ...]]]] = {}
        if step.method == "partition":
            self.partition = SubgraphPartition.make(self.h, step.ell, step.parts)

    def __call__(self, lists: Lists) -> list[tuple[Fraction, tuple[int, ...]]]:
        if lists not in self.cache:
            self.cache[lists] = self._compute(lists)
        return self.cache[lists]

    def _compute(self, lists: Lists) -> list[tuple[Fraction, tuple[int, ...]]]:
        method = self.step.method
        if method == "weak-uniform":
            phis = list(colorings(self.h, lists))
            if not phis:
                raise AssertionError("peeled subgraph is not colourable from its trimmed lists")
            return [(Fraction(1, len(phis)), phi) for phi in phis]
        if method == "lp":
            cert = alpha_for_lists(self.h, lists, self.k)
            return sorted((p, phi) for phi, p in cert.distribution.items())
        if method == "partition":
            s = partition_sampler(self.partition, lists, self.step.weak_index, self.step.labeling, check=False)
            return sorted((p, phi) for phi, p in s.distribution().items())
        raise ValueError(f"method {method!r} cannot be composed automatically")


def _trims(avail: Sequence[int], size: int) -> list[tuple[Fraction, frozenset[int]]]:
    if size <= 0:
        return [(Fraction(1), frozenset())]
    w = Fraction(1, comb(len(avail), size))
    return [(w, frozenset(c)) for c in combinations(sorted(avail), size)]


class PipelineSampler(Sampler):
    """Sampler whose draws use one RNG per (draw, step, stage) triple.

    The trim stage of step ``s`` in draw ``j`` is seeded with
    ``f"{seed}:{j}:{s}:0"`` and its colour stage with ``f"{seed}:{j}:{s}:1"``,
    so any step of any draw can be replayed on its own.
    """

    def __init__(self, g: Graph, lists: Lists, trace: PeelingTrace, seed: int | str = 0):
        self.graph = g
        self.lists = lists
        self.trace = trace
        self.colourers = [_StepColourer(g, s, trace.k) for s in trace.steps]
        self.draws = 0
        stages = []
        for idx in reversed(range(len(trace.steps))):
            stages.append(self._trim_stage(idx))
            stages.append(self._colour_stage(idx))
        super().__init__(Process(((None,) * g.n, None), stages, finish=lambda s: s[0]), seed)

    def _available(self, idx: int, colour: Sequence[int | None]) -> list[list[int]]:
        out = []
        for v in self.trace.steps[idx].peeled:
            used = {colour[w] for w in self.graph.neighbors(v) if colour[w] is not None}
            out.append([c for c in self.lists[v] if c not in used])
        return out

    def _trim_stage(self, idx: int):
        step = self.trace.steps[idx]

        def stage(state):
            colour, _ = state
            avail = self._available(idx, colour)
            for a, size in zip(avail, step.ell):
                if len(a) < size:
                    raise AssertionError(f"only {len(a)} colours left where {size} were promised")
            out = []
            for combo in product(*(_trims(a, size) for a, size in zip(avail, step.ell))):
                w = Fraction(1)
                for x, _ in combo:
                    w *= x
                out.append((w, (colour, tuple(l for _, l in combo))))
            return out
        return stage

    def _colour_stage(self, idx: int):
        step = self.trace.steps[idx]
        colourer = self.colourers[idx]

        def stage(state):
            colour, trimmed = state
            out = []
            for w, phi in colourer(trimmed):
                new = list(colour)
                for v, c in zip(step.peeled, phi):
                    new[v] = c
                out.append((w, (tuple(new), None)))
            return out
        return stage

    def sample(self) -> tuple[int, ...]:
        j = self.draws
        self.draws += 1
        state = self.process.initial
        order = list(reversed(range(len(self.trace.steps))))
        for pos, stage in enumerate(self.process.stages):
            rng = random.Random(f"{self.seed}:{j}:{order[pos // 2]}:{pos % 2}")
            state = pick(rng, stage(state))
        phi = self.process.finish(state)
        if not is_proper(self.graph, phi) or any(phi[v] not in self.lists[v] for v in self.graph.vertices):
            raise AssertionError(f"pipeline produced an invalid colouring {phi}")
        return phi


@dataclass(frozen=True)
class Pipeline:
    graph: Graph
    lists: Lists
    trace: PeelingTrace
    sampler: PipelineSampler
    strategy: str
    seed: int | str


def _check_lists(g: Graph, lists: Sequence[Iterable[int]], k: int) -> Lists:
    out = tuple(frozenset(l) for l in lists)
    if len(out) != g.n:
        raise PreconditionError(f"{len(out)} lists for {g.n} vertices")
    bad = [v for v, l in enumerate(out) if len(l) != k]
    if bad:
        raise PreconditionError(f"lists at {bad} do not have exactly {k} colours")
    return out


def build_pipeline(g: Graph, lists: Sequence[Iterable[int]], k: int = 4, strategy: str = "smallest-weak",
                   seed: int | str = 0, max_size: int | None = None) -> Pipeline:
    lists = _check_lists(g, lists, k)
    trace = build_trace(g, k, strategy, max_size)
    return Pipeline(g, lists, trace, PipelineSampler(g, lists, trace, seed), strategy, seed)


def random_lists(n: int, k: int, palette: int, rng: random.Random) -> Lists:
    return tuple(frozenset(rng.sample(range(palette), k)) for _ in range(n))


# verification

@dataclass(frozen=True)
class VerificationReport:
    mode: str
    min_fix: Fraction | tuple[float, float]
    min_forb: Fraction | tuple[float, float]
    epsilon_target: Fraction
    forb_target: Fraction
    fix_at: tuple | None
    forb_at: tuple | None
    samples: int = 0

    @property
    def passed(self) -> bool:
        if self.mode == "exact":
            return self.min_fix >= self.epsilon_target and self.min_forb >= self.forb_target
        # sampled: consistent unless the whole interval sits below the target
        return self.min_fix[1] >= self.epsilon_target and self.min_forb[1] >= self.forb_target


def _exact_report(dist: Distribution, g: Graph, lists: Lists, eps: Fraction, forb: Fraction) -> VerificationReport:
    for phi in dist:
        if not is_proper(g, phi) or any(phi[v] not in lists[v] for v in g.vertices):
            raise AssertionError(f"distribution contains an invalid colouring {phi}")
    if sum(dist.values()) != 1:
        raise AssertionError("probabilities do not sum to one")
    stats = fix_forb_stats(dist, [sorted(l) for l in lists])
    return VerificationReport("exact", stats.min_fix, stats.min_forb, eps, forb, stats.fix_at, stats.forb_at)


def _sampled_report(sampler: Sampler, g: Graph, lists: Lists, eps: Fraction, forb: Fraction,
                    samples: int) -> VerificationReport:
    draws = [sampler.sample() for _ in range(samples)]
    for phi in draws:
        if not is_proper(g, phi):
            raise AssertionError(f"sampler produced an improper colouring {phi}")
    counts: dict[tuple, int] = {}
    fix_events = [(v, c) for v in g.vertices for c in sorted(lists[v])]
    for v, c in fix_events:
        counts["fix", v, c] = sum(1 for phi in draws if phi[v] == c)
    forb_events = []
    for size in (1, 2):
        for us in combinations(g.vertices, size):
            for c in sorted(set().union(*(lists[u] for u in us))):
                forb_events.append((us, c))
                counts["forb", us, c] = sum(1 for phi in draws if all(phi[u] != c for u in us))
    fix_at = min(fix_events, key=lambda e: counts[("fix",) + e])
    forb_at = min(forb_events, key=lambda e: counts[("forb",) + e]) if forb_events else None
    fix_iv = wilson_interval(counts[("fix",) + fix_at], samples)
    forb_iv = wilson_interval(counts[("forb",) + forb_at], samples) if forb_at else (1.0, 1.0)
    return VerificationReport("sampled", fix_iv, forb_iv, eps, forb, fix_at, forb_at, samples)


def verify_distribution(sampler: Sampler, g: Graph, lists: Sequence[Iterable[int]], epsilon_target: Fraction,
                        mode: str = "exact", budget: int = 2 ** 22, seed: int | str = 0, samples: int = 20000,
                        forb_target: Fraction | None = None) -> VerificationReport:
    """Exact or sampled check of the FIX and FORB (``|U| <= 2``) minima.

    ``mode="auto"`` tries exact expansion and falls back to sampling only if
    the budget is exceeded.  Sampled mode reports 99% Wilson intervals.
    """
    lists = tuple(frozenset(l) for l in lists)
    forb = epsilon_target if forb_target is None else forb_target
    if mode not in ("exact", "sampled", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode in ("exact", "auto"):
        try:
            return _exact_report(sampler.distribution(budget), g, lists, epsilon_target, forb)
        except BudgetExceeded:
            if mode == "exact":
                raise
    if not isinstance(sampler, PipelineSampler):
        sampler.rng = random.Random(seed)
    return _sampled_report(sampler, g, lists, epsilon_target, forb, samples)


def verify_pipeline(pipe: Pipeline, mode: str = "exact", budget: int = 2 ** 22, samples: int = 20000) -> VerificationReport:
    t = pipe.trace
    return verify_distribution(pipe.sampler, pipe.graph, pipe.lists, t.epsilon, mode, budget, pipe.seed, samples,
                               forb_target=t.alpha_min ** 2)


# certificates

def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def certificate(pipe: Pipeline, report: VerificationReport | None = None) -> dict:
    t = pipe.trace
    steps = []
    for s in t.steps:
        entry = {"remaining": list(s.remaining), "peeled": list(s.peeled), "alpha": _frac(s.alpha),
                 "method": s.method, "ell": list(s.ell)}
        if s.parts is not None:
            entry["parts"] = [list(p) for p in s.parts]
            entry["weak_index"] = s.weak_index
            entry["labels"] = list(s.labeling.labels)
            entry["label_universe"] = s.labeling.universe
        steps.append(entry)
    cert = {
        "schema": SCHEMA,
        "graph": {"n": pipe.graph.n, "edges": [list(e) for e in pipe.graph.edges]},
        "k": t.k,
        "lists": [sorted(l) for l in pipe.lists],
        "strategy": pipe.strategy,
        "seed": pipe.seed,
        "steps": steps,
        "alpha_min": _frac(t.alpha_min),
        "epsilon": _frac(t.epsilon),
        "universal_epsilon": _frac(UNIVERSAL_EPSILON),
    }
    if report is not None:
        cert["verification"] = report_to_json(report)
    return cert


def report_to_json(r: VerificationReport) -> dict:
    def val(x):
        return _frac(x) if isinstance(x, Fraction) else [x[0], x[1]]
    return {"mode": r.mode, "min_fix": val(r.min_fix), "min_forb": val(r.min_forb),
            "epsilon_target": _frac(r.epsilon_target), "forb_target": _frac(r.forb_target),
            "fix_at": list(r.fix_at) if r.fix_at else None,
            "forb_at": [list(r.forb_at[0]), r.forb_at[1]] if r.forb_at else None,
            "samples": r.samples, "passed": r.passed}


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=2) + "\n"


def trace_from_certificate(cert: dict) -> tuple[Graph, Lists, PeelingTrace]:
    if cert.get("schema") != SCHEMA:
        raise ValueError(f"unsupported certificate schema {cert.get('schema')!r}")
    g = Graph(cert["graph"]["n"], [tuple(e) for e in cert["graph"]["edges"]])
    lists = tuple(frozenset(l) for l in cert["lists"])
    steps = []
    for s in cert["steps"]:
        parts = tuple(tuple(p) for p in s["parts"]) if "parts" in s else None
        lab = PartLabeling(tuple(s["labels"]), s["label_universe"]) if "labels" in s else None
        steps.append(Step(tuple(s["remaining"]), tuple(s["peeled"]), Fraction(s["alpha"]), s["method"],
                          tuple(s["ell"]), parts, s.get("weak_index"), lab))
    return g, lists, PeelingTrace(tuple(steps), cert["k"])


def _labels_valid(p: SubgraphPartition, lab: PartLabeling) -> bool:
    if len(lab.labels) != len(p.parts) or not all(0 <= x < lab.universe for x in lab.labels):
        return False
    for i in range(len(p.parts)):
        near = p.adjacent_parts(i)
        seen = [lab.labels[j] for j in near]
        if lab.labels[i] in seen or len(set(seen)) != len(seen):
            return False
    return True


def check_certificate(cert: dict) -> list[str]:
    """Recheck a certificate's trace without searching again; returns the problems found."""
    problems: list[str] = []
    try:
        g, lists, trace = trace_from_certificate(cert)
    except (KeyError, ValueError, TypeError) as exc:
        return [f"malformed certificate: {exc}"]
    k = trace.k
    if any(len(l) != k for l in lists) or len(lists) != g.n:
        problems.append("lists are not a k-assignment")
    z = tuple(g.vertices)
    for i, s in enumerate(trace.steps):
        if s.remaining != z:
            problems.append(f"step {i}: remainder does not match")
            break
        if not s.peeled or not set(s.peeled) <= set(z):
            problems.append(f"step {i}: peeled set is not a nonempty part of the remainder")
            break
        sub, id_map = g.induced(z)
        where = {v: j for j, v in enumerate(id_map)}
        local = [where[v] for v in s.peeled]
        if ell(sub, local, k) != s.ell:
            problems.append(f"step {i}: recorded list sizes differ from ell")
        if s.method in ("weak-uniform", "lp"):
            if not is_reducible_subgraph(sub, local, k, s.alpha):
                problems.append(f"step {i}: subgraph is not {s.alpha}-reducible")
            if s.method == "weak-uniform" and s.alpha != Fraction(1, k ** len(local)):
                problems.append(f"step {i}: uniform step must record k^-|H|")
        elif s.method == "partition":
            h, _ = sub.induced(local)
            p = SubgraphPartition.make(h, s.ell, s.parts)
            for j in range(len(p.parts)):
                ok = is_weak_part(p, j) if j == s.weak_index else is_strong_part(p, j)
                if not ok:
                    problems.append(f"step {i}: part {j} fails its check")
            if not _labels_valid(p, s.labeling):
                problems.append(f"step {i}: part labels clash within distance two")
            b = max(4, max(len(q) for q in p.parts))
            if s.alpha != partition_bound(b, s.labeling.universe):
                problems.append(f"step {i}: partition constant does not match")
        else:
            problems.append(f"step {i}: unknown method {s.method!r}")
        gone = set(s.peeled)
        z = tuple(v for v in z if v not in gone)
    if z:
        problems.append("trace does not exhaust the graph")
    if "epsilon" in cert and Fraction(cert["epsilon"]) != trace.epsilon:
        problems.append("recorded epsilon does not match the trace")
    return problems
