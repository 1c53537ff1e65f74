"""Seeded Monte-Carlo realisation of edge schedules.

Randomness comes from SplitMix64 used as a counter-based generator: the
draw for pair index i in trial t is

    u = mix64(trial_seed + (i + 1) * GOLDEN) >> 11        (53 bits)
    edge  iff  u < floor(p * 2^53)

with trial_seed = mix64(mix64(seed) ^ ((t + 1) * GOLDEN)).  Draws are
consumed in pair-index order and depend only on (seed, trial, pair), so
growing the vertex budget extends earlier draws instead of reshuffling
them, and trials are independent streams safe to run in parallel.  The
vectorised path reproduces the scalar path bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graphcore import (FiniteGraph, GraphOracle, components, degree_census,
                        index_pair, pair_index, rado_witness_stats,
                        weak_universality_scan)
from .schedules import EdgeSchedule

GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1
_U53 = 1 << 53


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def trial_seed(seed: int, trial: int) -> int:
    return mix64(mix64(seed) ^ (((trial + 1) * GOLDEN) & _MASK))


def _threshold(p: float) -> int:
    return int(p * _U53)


def _u53(tseed: int, i: int) -> int:
    return mix64((tseed + (i + 1) * GOLDEN) & _MASK) >> 11


def sample_prefix(sched: EdgeSchedule, n_vertices: int, seed: int,
                  trial: int = 0) -> FiniteGraph:
    """Draw each pair below n_vertices independently with its scheduled
    probability; identical (schedule, n, seed, trial) gives identical graphs."""
    npairs = n_vertices * (n_vertices - 1) // 2
    if n_vertices > sched.vertex_budget:
        raise ValueError(
            f"{n_vertices} vertices exceed the schedule budget "
            f"{sched.vertex_budget}")
    ts = trial_seed(seed, trial)
    edges = set()
    for i in range(npairs):
        e = sched.entries[i]
        if _u53(ts, i) < _threshold(e.prob):
            edges.add((e.a, e.b))
    return FiniteGraph(n_vertices, frozenset(edges))


def sample_matrix(sched: EdgeSchedule, n_vertices: int, seed: int,
                  trials: int, start_trial: int = 0) -> np.ndarray:
    """Boolean matrix (trials x pairs) of edge draws; row t equals the edge
    set of sample_prefix(..., trial=start_trial + t) bit for bit."""
    npairs = n_vertices * (n_vertices - 1) // 2
    if n_vertices > sched.vertex_budget:
        raise ValueError("vertex budget exceeded")
    thresholds = np.array([_threshold(e.prob) for e in sched.entries[:npairs]],
                          dtype=np.uint64)
    with np.errstate(over="ignore"):
        idx = np.arange(1, npairs + 1, dtype=np.uint64) * np.uint64(GOLDEN)
        out = np.empty((trials, npairs), dtype=bool)
        for t in range(trials):
            z = np.uint64(trial_seed(seed, start_trial + t)) + idx
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            u = (z ^ (z >> np.uint64(31))) >> np.uint64(11)
            out[t] = u < thresholds
    return out


def graph_from_row(row, n_vertices: int) -> FiniteGraph:
    edges = {index_pair(i) for i in np.flatnonzero(row)}
    return FiniteGraph(n_vertices, frozenset(edges))


def deviation_report(g: FiniteGraph, sched: EdgeSchedule) -> frozenset:
    """Pairs of g's range whose sampled bit differs from the planned bit;
    free pairs never appear."""
    if not sched.has_plan():
        raise ValueError("schedule carries no plan")
    out = set()
    for i in range(g.n * (g.n - 1) // 2):
        e = sched.entries[i]
        if e.planned is None:
            continue
        actual = 1 if (e.a, e.b) in g.edges else 0
        if actual != e.planned:
            out.add((e.a, e.b))
    return frozenset(out)


class UniformOracle(GraphOracle):
    """Seeded adjacency oracle drawing each pair once with probability p."""

    def __init__(self, p: float, seed: int):
        if not (0.0 < p < 1.0):
            raise ValueError("probability must lie inside (0,1)")
        self.p = p
        self.seed = seed
        self._base = mix64(seed)
        self._thr = _threshold(p)
        self.kind = f"uniform:{p!r}:{seed}"

    def _edge(self, a, b):
        return _u53(self._base, pair_index(a, b)) < self._thr


# --- trial harness -----------------------------------------------------------------

def _an_deviations(g, sched):
    return len(deviation_report(g, sched))


def _an_components(g, sched):
    sizes = Counter(len(c) for c in components(g))
    return dict(sizes)


def _an_degrees(g, sched):
    return degree_census(g).as_dict()


def _an_universality(g, sched):
    level, _ = weak_universality_scan(g, 3)
    return level


def _an_witness(g, sched):
    return rado_witness_stats(g, 1).fraction


ANALYZERS = {
    "deviations": _an_deviations,
    "components": _an_components,
    "degrees": _an_degrees,
    "universality": _an_universality,
    "witness": _an_witness,
}


def _aggregate(values: list) -> dict:
    if values and isinstance(values[0], dict):
        keys = sorted({k for v in values for k in v})
        return {
            "per_key": {
                str(k): {
                    "mean": sum(v.get(k, 0) for v in values) / len(values),
                    "min": min(v.get(k, 0) for v in values),
                    "max": max(v.get(k, 0) for v in values),
                } for k in keys}}
    hist = Counter(values)
    return {
        "mean": sum(values) / len(values),
        "min": min(values),
        "max": max(values),
        "histogram": {str(k): hist[k] for k in sorted(hist)},
    }


@dataclass
class SampleReport:
    """Per-trial analyzer records plus recomputable aggregates."""

    trials: int
    n_vertices: int
    seed: int
    schedule_digest: str
    records: dict = field(default_factory=dict)
    aggregates: dict = field(default_factory=dict)

    def recompute_aggregates(self) -> dict:
        return {name: _aggregate(vals) for name, vals in self.records.items()}

    def as_dict(self) -> dict:
        return {"schema": "graphdraw/sample-report/v1",
                "trials": self.trials, "n_vertices": self.n_vertices,
                "seed": self.seed, "schedule_digest": self.schedule_digest,
                "records": self.records, "aggregates": self.aggregates}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


def trial_harness(sched: EdgeSchedule, n_vertices: int, trials: int,
                  analyzers: Sequence[str], seed: int,
                  keep_graphs: bool = False):
    """Run seeded trials, apply the named analyzers to each sampled graph,
    and aggregate.  Analyzer order does not affect the report."""
    if trials < 1:
        raise ValueError("at least one trial required")
    names = sorted(set(analyzers))
    for name in names:
        if name not in ANALYZERS:
            raise ValueError(f"unknown analyzer {name!r}")
    records = {name: [] for name in names}
    graphs = []
    for t in range(trials):
        g = sample_prefix(sched, n_vertices, seed, trial=t)
        if keep_graphs:
            graphs.append(g)
        for name in names:
            records[name].append(ANALYZERS[name](g, sched))
    report = SampleReport(trials=trials, n_vertices=n_vertices, seed=seed,
                          schedule_digest=sched.digest(), records=records)
    report.aggregates = report.recompute_aggregates()
    if keep_graphs:
        return report, graphs
    return report
