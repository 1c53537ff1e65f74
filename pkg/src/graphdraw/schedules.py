"""Edge-probability schedules over pair indices.

A schedule assigns a probability strictly inside (0,1) to every unordered
vertex pair below a declared budget.  Values are drawn injectively from a
probability sequence (or from explicit choices where a construction picks
its own values) and every schedule carries an audit: the planned bit per
pair where the construction prescribes one, named block partitions,
divergence groups (lists of pair blocks whose plan-match products are
summed), and budget sums that recompute exactly from the raw assignment.

Pairs are enumerated colexicographically: index({a,b}) = b(b-1)/2 + a,
so the pairs inside {0..n-1} occupy exactly the first n(n-1)/2 indices.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graphcore import (FiniteGraph, GraphOracle, connected_catalog,
                        graph_name, index_pair, pair_index)
from .probseq import Interleave, ProbSeq, classify, clamp_unit, parse, subsequence_odd

__all__ = [
    "pair_index", "index_pair", "Entry", "EdgeSchedule",
    "ScheduleBudgetError", "uniform_schedule", "replicate_schedule",
    "ufin_schedule", "suspended_schedule", "closure_schedule",
    "sum_with_fixed_schedule", "star_schedule", "theta_schedule",
    "schedule_from_json", "schedule_to_json",
]


class ScheduleBudgetError(ValueError):
    """Raised when a summability budget or index supply cannot be met."""


@dataclass(frozen=True)
class Entry:
    """One pair's assignment: endpoints, source index, probability, plan."""

    a: int
    b: int
    source_ns: str
    source: int
    prob: float
    planned: Optional[int]
    role: str
    rank: Optional[int] = None


def _match_factor(e: Entry) -> float:
    if e.planned == 1:
        return e.prob
    if e.planned == 0:
        return 1.0 - e.prob
    return 1.0


def _compute_budget(entries, groups, keys) -> dict:
    by_pair = {pair_index(e.a, e.b): e for e in entries}
    out = {}
    for key in keys:
        kind, _, label = key.partition(":")
        if kind == "sum_p":
            out[key] = sum(e.prob for e in entries if e.role == label)
        elif kind == "sum_q":
            out[key] = sum(1.0 - e.prob for e in entries if e.role == label)
        elif kind in ("div", "resid"):
            total = 0.0
            for block in groups[label]:
                prod = 1.0
                for pi in block:
                    prod *= _match_factor(by_pair[pi])
                total += prod if kind == "div" else (1.0 - prod)
            out[key] = total
        else:
            raise ValueError(f"unknown budget key {key!r}")
    return out


@dataclass
class EdgeSchedule:
    """Total, injective probability assignment on pairs below the budget."""

    kind: str
    vertex_budget: int
    entries: tuple
    blocks: dict = field(default_factory=dict)
    groups: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        npairs = self.vertex_budget * (self.vertex_budget - 1) // 2
        if len(self.entries) != npairs:
            raise ValueError(
                f"schedule must cover all {npairs} pairs below the budget")
        seen_sources = set()
        for i, e in enumerate(self.entries):
            if (e.a, e.b) != index_pair(i):
                raise ValueError("entries must be in pair-index order")
            if not (0.0 < e.prob < 1.0):
                raise ValueError(f"probability out of (0,1) at pair {i}")
            if e.planned not in (0, 1, None):
                raise ValueError("planned bit must be 0, 1 or absent")
            tag = (e.source_ns, e.source)
            if tag in seen_sources:
                raise ValueError(f"source index reused: {tag}")
            seen_sources.add(tag)

    def entry(self, a: int, b: int) -> Entry:
        i = pair_index(a, b)
        if i >= len(self.entries):
            raise ValueError(f"pair ({a},{b}) beyond the vertex budget")
        return self.entries[i]

    def prob(self, a: int, b: int) -> float:
        return self.entry(a, b).prob

    def planned(self, a: int, b: int) -> Optional[int]:
        return self.entry(a, b).planned

    def has_plan(self) -> bool:
        return any(e.planned is not None for e in self.entries)

    def recompute_budget(self) -> dict:
        return _compute_budget(self.entries, self.groups, self.budget.keys())

    def to_json_dict(self) -> dict:
        return {
            "schema": "graphdraw/schedule/v1",
            "kind": self.kind,
            "indexer": "colex",
            "vertex_budget": self.vertex_budget,
            "entries": [
                [e.a, e.b, e.source_ns, e.source, e.prob,
                 e.planned, e.role, e.rank]
                for e in self.entries],
            "blocks": {k: list(v) for k, v in self.blocks.items()},
            "groups": {k: [list(b) for b in v] for k, v in self.groups.items()},
            "budget": dict(self.budget),
            "meta": dict(self.meta),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    @classmethod
    def from_json_dict(cls, d: dict) -> "EdgeSchedule":
        if d.get("schema") != "graphdraw/schedule/v1":
            raise ValueError("unrecognised schedule schema")
        entries = tuple(
            Entry(a=row[0], b=row[1], source_ns=row[2], source=row[3],
                  prob=row[4], planned=row[5], role=row[6], rank=row[7])
            for row in d["entries"])
        return cls(kind=d["kind"], vertex_budget=d["vertex_budget"],
                   entries=entries,
                   blocks={k: tuple(v) for k, v in d["blocks"].items()},
                   groups={k: tuple(tuple(b) for b in v)
                           for k, v in d["groups"].items()},
                   budget=dict(d["budget"]), meta=dict(d["meta"]))


def schedule_to_json(sched: EdgeSchedule) -> str:
    return sched.to_json()


def schedule_from_json(text: str) -> EdgeSchedule:
    return EdgeSchedule.from_json_dict(json.loads(text))


# --- index supply ---------------------------------------------------------------

class _Supply:
    """Hands out unused source indices of a sequence, by value or in order."""

    def __init__(self, seq: ProbSeq, count: Optional[int] = None,
                 allowed: Optional[Sequence[int]] = None):
        idxs = sorted(allowed) if allowed is not None else list(range(count))
        self._vals = {n: seq.eval(n) for n in idxs}
        self._asc = sorted(idxs, key=lambda n: (self._vals[n], n))
        self._desc = sorted(idxs, key=lambda n: (-self._vals[n], n))
        self._nat = idxs
        self._used = set()
        self._ptr = {"asc": 0, "desc": 0, "nat": 0}

    def _advance(self, order, name):
        i = self._ptr[name]
        while i < len(order) and order[i] in self._used:
            i += 1
        if i >= len(order):
            raise ScheduleBudgetError("index supply exhausted")
        self._ptr[name] = i + 1
        n = order[i]
        self._used.add(n)
        return n, self._vals[n]

    def take_small(self):
        return self._advance(self._asc, "asc")

    def take_large(self):
        return self._advance(self._desc, "desc")

    def take_next(self):
        return self._advance(self._nat, "nat")


def _finish(kind, vertex_budget, sink, blocks, groups, keys, meta) -> EdgeSchedule:
    npairs = vertex_budget * (vertex_budget - 1) // 2
    missing = [i for i in range(npairs) if i not in sink]
    if missing:
        raise AssertionError(f"builder left {len(missing)} pairs unassigned")
    entries = tuple(sink[i] for i in range(npairs))
    budget = _compute_budget(entries, groups, keys)
    return EdgeSchedule(kind=kind, vertex_budget=vertex_budget,
                        entries=entries, blocks=blocks, groups=groups,
                        budget=budget, meta=meta)


# --- builders ---------------------------------------------------------------------

def uniform_schedule(p: float, vertex_budget: int) -> EdgeSchedule:
    """Every pair gets the same probability; no plan."""
    if not (0.0 < p < 1.0):
        raise ValueError("probability must lie inside (0,1)")
    sink = {}
    for i in range(vertex_budget * (vertex_budget - 1) // 2):
        a, b = index_pair(i)
        sink[i] = Entry(a, b, "uniform", i, p, None, "free")
    return _finish("uniform", vertex_budget, sink, {}, {}, ["sum_p:free"],
                   {"p": repr(p)})


def replicate_schedule(target: GraphOracle, vertex_budget: int) -> EdgeSchedule:
    """Pin every pair toward the target's adjacency with fast-decaying
    deviation probabilities.

    The n-th planned edge in pair order gets probability 1 - 2^-n and the
    n-th planned non-edge gets 2^-n, counting from n = 1 so that every value
    stays inside (0,1); deviation mass beyond plan rank m is at most
    2^-(m-1).
    """
    sink = {}
    edge_rank = 0
    non_rank = 0
    for i in range(vertex_budget * (vertex_budget - 1) // 2):
        a, b = index_pair(i)
        bit = 1 if target.query(a, b) else 0
        if bit:
            edge_rank += 1
            rank = edge_rank
            prob = clamp_unit(1.0 - 2.0 ** -rank)
            role = "plan-edge"
            source = 2 * rank
        else:
            non_rank += 1
            rank = non_rank
            prob = clamp_unit(2.0 ** -rank)
            role = "plan-nonedge"
            source = 2 * rank + 1
        sink[i] = Entry(a, b, "replicate", source, prob, bit, role, rank)
    return _finish("replicate", vertex_budget, sink, {}, {},
                   ["sum_q:plan-edge", "sum_p:plan-nonedge"],
                   {"target": target.kind})


def _component_layout(vertices: Sequence[int], comps: Sequence[FiniteGraph]):
    """Tile the vertex list into rounds of one spare pair block plus one
    block per catalog graph; returns (blocks, leftovers)."""
    blocks = []
    round_size = 2 + sum(g.n for g in comps)
    ptr = 0
    rnd = 0
    while ptr + round_size <= len(vertices):
        blocks.append((f"A0_{rnd}", None, tuple(vertices[ptr:ptr + 2])))
        ptr += 2
        for gi, g in enumerate(comps):
            blocks.append((f"A{gi + 1}_{rnd}", g,
                           tuple(vertices[ptr:ptr + g.n])))
            ptr += g.n
        rnd += 1
    return blocks, list(vertices[ptr:])


def _assign_component_blocks(vertices, comps, supply, spare_supply,
                             sink, blocks_out, groups_out):
    """Shared core of the component-universal builders: plan one fixed copy
    per graph block (edge slots from the largest remaining values, non-edge
    slots from the smallest), leave spare-pair blocks free, and push every
    remaining pair inside the vertex set to the small end as a planned
    non-edge.  Returns the list of (graph name, block pair indices)."""
    layout, leftovers = _component_layout(vertices, comps)
    planned_blocks = []
    for name, g, verts in layout:
        blocks_out[name] = verts
        if g is None:
            a, b = verts
            n, p = spare_supply.take_next()
            sink[pair_index(a, b)] = Entry(min(a, b), max(a, b), "seq", n, p,
                                           None, "spare")
            continue
        gname = graph_name(g)
        block_pairs = []
        for lu, lv in itertools.combinations(range(g.n), 2):
            u, v = verts[lu], verts[lv]
            bit = 1 if g.has_edge(lu, lv) else 0
            n, p = supply.take_large() if bit else supply.take_small()
            role = "block-edge" if bit else "block-nonedge"
            sink[pair_index(u, v)] = Entry(min(u, v), max(u, v), "seq", n, p,
                                           bit, role)
            block_pairs.append(pair_index(u, v))
        groups_out.setdefault(gname, []).append(tuple(block_pairs))
        planned_blocks.append((name, gname, tuple(block_pairs)))
    for a, b in itertools.combinations(sorted(vertices), 2):
        i = pair_index(a, b)
        if i in sink:
            continue
        n, p = supply.take_small()
        sink[i] = Entry(a, b, "seq", n, p, 0, "cross")
    return planned_blocks


def ufin_schedule(seq: ProbSeq, vertex_budget: int, catalog_size: int, *,
                  divergence_target: float = 2.0,
                  index_budget: Optional[int] = None) -> EdgeSchedule:
    """Component-universal schedule: vertex blocks host one planned copy of
    each connected catalog graph per round, cross-block pairs take the
    smallest available values as planned non-edges, and the audit reports
    the cross sum plus one plan-match divergence sum per graph."""
    flags = classify(seq)
    if "BC_M0" not in flags:
        raise ValueError("ufin schedule requires a BC_M0 sequence")
    comps = connected_catalog(catalog_size)
    npairs = vertex_budget * (vertex_budget - 1) // 2
    n_indices = index_budget if index_budget is not None else max(4 * npairs, 1024)
    supply = _Supply(seq, n_indices)
    sink: dict = {}
    blocks: dict = {}
    group_lists: dict = {}
    _assign_component_blocks(list(range(vertex_budget)), comps, supply, supply,
                             sink, blocks, group_lists)
    groups = {k: tuple(v) for k, v in group_lists.items()}
    keys = ["sum_p:cross"] + [f"div:{k}" for k in groups]
    meta = {"seq": seq.text(), "catalog_size": str(catalog_size),
            "divergence_target": repr(divergence_target),
            "index_budget": str(n_indices)}
    return _finish("ufin", vertex_budget, sink, blocks, groups, keys, meta)


def suspended_schedule(seq: ProbSeq, vertex_budget: int, catalog_size: int, *,
                       divergence_target: float = 2.0,
                       index_budget: Optional[int] = None) -> EdgeSchedule:
    """Component-universal schedule suspended from one extra vertex.

    Vertex 0 is the suspension point; the remaining vertices carry the
    ufin construction fed from one third of the index supply.  Pairs from
    vertex 0 into each graph block follow a connection pattern cycling
    through all subsets of the block (second third of the supply); pairs
    from vertex 0 into spare blocks and leftovers are planned non-edges.
    The audit adds one divergence sum per (graph, pattern) and the
    suspension non-edge sum.
    """
    flags = classify(seq)
    if "BC_M0" not in flags:
        raise ValueError("suspended schedule requires a BC_M0 sequence")
    if vertex_budget < 4:
        raise ValueError("vertex budget too small to suspend")
    comps = connected_catalog(catalog_size)
    npairs = vertex_budget * (vertex_budget - 1) // 2
    n_indices = index_budget if index_budget is not None else max(6 * npairs, 2048)
    supply_i = _Supply(seq, allowed=[n for n in range(n_indices) if n % 3 == 0])
    supply_j = _Supply(seq, allowed=[n for n in range(n_indices) if n % 3 == 1])
    supply_k = _Supply(seq, allowed=[n for n in range(n_indices) if n % 3 == 2])
    sink: dict = {}
    blocks: dict = {"pi": (0,)}
    group_lists: dict = {}
    inner = list(range(1, vertex_budget))
    planned_blocks = _assign_component_blocks(inner, comps, supply_i, supply_k,
                                              sink, blocks, group_lists)
    # Suspension pairs toward planned graph blocks follow the round's pattern.
    pattern_of: dict = {}
    for name, gname, block_pairs in planned_blocks:
        verts = blocks[name]
        rnd = int(name.rsplit("_", 1)[1])
        width = len(verts)
        pattern = rnd % (1 << width)
        pattern_of[name] = pattern
        pi_pairs = []
        for local, u in enumerate(verts):
            bit = (pattern >> local) & 1
            n, p = supply_j.take_large() if bit else supply_j.take_small()
            role = "pi-edge" if bit else "pi-nonedge"
            sink[pair_index(0, u)] = Entry(0, u, "seq", n, p, bit, role)
            pi_pairs.append(pair_index(0, u))
        key = f"pi:{gname}:w{pattern}"
        group_lists.setdefault(key, []).append(tuple(block_pairs) + tuple(pi_pairs))
    # Suspension pairs toward spare blocks and leftovers stay summable.
    for u in inner:
        i = pair_index(0, u)
        if i in sink:
            continue
        n, p = supply_j.take_small()
        sink[i] = Entry(0, u, "seq", n, p, 0, "pi-spare")
    groups = {k: tuple(v) for k, v in group_lists.items()}
    keys = (["sum_p:cross", "sum_p:pi-spare"]
            + [f"div:{k}" for k in groups])
    meta = {"seq": seq.text(), "catalog_size": str(catalog_size),
            "divergence_target": repr(divergence_target),
            "index_budget": str(n_indices),
            "patterns": json.dumps(pattern_of, sort_keys=True)}
    return _finish("suspended", vertex_budget, sink, blocks, groups, keys, meta)


def closure_schedule(members: Sequence[FiniteGraph], seq: ProbSeq,
                     vertex_budget: int, *, eps: float = 0.01,
                     index_budget: Optional[int] = None) -> EdgeSchedule:
    """Closed-family schedule: blocks host planned copies of the members,
    enumerated over (member, copy) anti-diagonals; one distinguished pair
    per diagonal block is left free; planned non-edges draw a total
    probability of at most eps and planned edges a total co-probability of
    at most eps, or the build fails."""
    flags = classify(seq)
    if "Acc01" not in flags:
        raise ValueError("closure schedule requires an Acc01 sequence")
    if not members:
        raise ValueError("member list must be nonempty")
    npairs = vertex_budget * (vertex_budget - 1) // 2
    n_indices = index_budget if index_budget is not None else max(4 * npairs, 1024)
    supply = _Supply(seq, n_indices)
    sink: dict = {}
    blocks: dict = {}
    free_pairs = []
    a0_sources = []
    a1_sources = []
    a2_sources = []
    ptr = 0
    placed = []
    d = 0
    while True:
        placed_any = False
        for n in range(min(d + 1, len(members))):
            m = d - n
            g = members[n]
            if ptr + g.n > vertex_budget:
                continue
            verts = tuple(range(ptr, ptr + g.n))
            ptr += g.n
            blocks[f"B{n}_{m}"] = verts
            placed.append((n, m, g, verts))
            placed_any = True
        if not placed_any and all(
                ptr + members[n].n > vertex_budget for n in range(len(members))):
            break
        d += 1
        if d > vertex_budget + len(members):
            break
    for n, m, g, verts in placed:
        h_pair = None
        if n == m and g.n >= 2:
            h_pair = (verts[0], verts[1])
        for lu, lv in itertools.combinations(range(g.n), 2):
            u, v = verts[lu], verts[lv]
            i = pair_index(u, v)
            if h_pair is not None and (u, v) == h_pair:
                src, p = supply.take_next()
                sink[i] = Entry(u, v, "seq", src, p, None, "free")
                free_pairs.append(i)
                a2_sources.append(src)
            elif g.has_edge(lu, lv):
                src, p = supply.take_large()
                sink[i] = Entry(u, v, "seq", src, p, 1, "a1")
                a1_sources.append(src)
            else:
                src, p = supply.take_small()
                sink[i] = Entry(u, v, "seq", src, p, 0, "a0")
                a0_sources.append(src)
    for i in range(npairs):
        if i in sink:
            continue
        a, b = index_pair(i)
        src, p = supply.take_small()
        sink[i] = Entry(a, b, "seq", src, p, 0, "a0")
        a0_sources.append(src)
    blocks["idx:A0"] = tuple(sorted(a0_sources))
    blocks["idx:A1"] = tuple(sorted(a1_sources))
    blocks["idx:A2"] = tuple(sorted(a2_sources))
    blocks["idx:free-pairs"] = tuple(sorted(free_pairs))
    keys = ["sum_p:a0", "sum_q:a1"]
    meta = {"seq": seq.text(), "eps": repr(eps),
            "members": ",".join(graph_name(g) for g in members)}
    sched = _finish("closure", vertex_budget, sink, blocks, {}, keys, meta)
    if sched.budget["sum_p:a0"] > eps:
        raise ScheduleBudgetError(
            f"planned non-edge sum {sched.budget['sum_p:a0']:.6g} exceeds eps={eps}")
    if sched.budget["sum_q:a1"] > eps:
        raise ScheduleBudgetError(
            f"planned edge co-sum {sched.budget['sum_q:a1']:.6g} exceeds eps={eps}")
    return sched


def sum_with_fixed_schedule(g_sched: EdgeSchedule, h: FiniteGraph,
                            seq: ProbSeq, *, eps: float = 0.01,
                            index_budget: Optional[int] = None) -> EdgeSchedule:
    """Adjoin a fixed copy of h in front of an existing schedule.

    The h block occupies vertices 0..#h-1 with its edges pinned on and
    non-edges pinned off; all pairs between the block and the rest are
    planned non-edges; the remaining pairs delegate to the given schedule.
    The carved-off index sets keep total (co-)probability at most eps each,
    and the surviving subsequence is reported as a descriptor that still
    classifies like the input.
    """
    flags = classify(seq)
    if "Acc01" not in flags:
        raise ValueError("sum schedule requires an Acc01 sequence")
    if not isinstance(seq, Interleave):
        raise ValueError("sum schedule supports interleave-shaped sequences")
    vertex_budget = g_sched.vertex_budget + h.n
    npairs = vertex_budget * (vertex_budget - 1) // 2
    n_indices = index_budget if index_budget is not None else max(4 * npairs, 1024)
    carve = _Supply(seq, allowed=[n for n in range(n_indices) if n % 4 in (0, 1)])
    sink: dict = {}
    for i in range(npairs):
        a, b = index_pair(i)
        if b < h.n:
            if h.has_edge(a, b):
                src, p = carve.take_large()
                sink[i] = Entry(a, b, "seq", src, p, 1, "h-edge")
            else:
                src, p = carve.take_small()
                sink[i] = Entry(a, b, "seq", src, p, 0, "h-nonedge")
        elif a < h.n <= b:
            src, p = carve.take_small()
            sink[i] = Entry(a, b, "seq", src, p, 0, "cross")
        else:
            ge = g_sched.entry(a - h.n, b - h.n)
            sink[i] = Entry(a, b, f"g.{ge.source_ns}", ge.source, ge.prob,
                            ge.planned, "delegated", ge.rank)
    a_g_descriptor = Interleave(subsequence_odd(seq.d0), subsequence_odd(seq.d1))
    blocks = {"D_H": tuple(range(h.n)),
              "D_G": tuple(range(h.n, vertex_budget))}
    keys = ["sum_p:cross", "sum_p:h-nonedge", "sum_q:h-edge"]
    meta = {"seq": seq.text(), "eps": repr(eps),
            "h": graph_name(h), "g_kind": g_sched.kind,
            "a_g_descriptor": a_g_descriptor.text()}
    sched = _finish("sum", vertex_budget, sink, blocks, {}, keys, meta)
    for key in keys:
        if sched.budget[key] > eps:
            raise ScheduleBudgetError(
                f"{key} = {sched.budget[key]:.6g} exceeds eps={eps}")
    return sched


def star_schedule(seq: ProbSeq, star_count: int, vertex_budget: int, *,
                  eps: float = 0.01,
                  index_budget: Optional[int] = None) -> EdgeSchedule:
    """Concentrate the divergent part of the sequence on the pairs meeting
    the first star_count vertices; everything else is a planned non-edge
    whose total probability stays at most eps."""
    flags = classify(seq)
    if "BC_M0" not in flags:
        raise ValueError("star schedule requires a BC_M0 sequence")
    if star_count < 1:
        raise ValueError("star count must be >= 1")
    if star_count >= vertex_budget:
        raise ValueError("star count must leave off-star vertices")
    npairs = vertex_budget * (vertex_budget - 1) // 2
    n_indices = index_budget if index_budget is not None else max(4 * npairs, 1024)
    supply = _Supply(seq, n_indices)
    sink: dict = {}
    star_pairs = []
    for i in range(npairs):
        a, b = index_pair(i)
        if a >= star_count:
            src, p = supply.take_small()
            sink[i] = Entry(a, b, "seq", src, p, 0, "offstar")
        else:
            star_pairs.append(i)
    for i in star_pairs:
        a, b = index_pair(i)
        src, p = supply.take_next()
        sink[i] = Entry(a, b, "seq", src, p, None, "star")
    blocks = {"star": tuple(range(star_count))}
    keys = ["sum_p:offstar", "sum_p:star"]
    meta = {"seq": seq.text(), "eps": repr(eps), "star_count": str(star_count)}
    sched = _finish("star", vertex_budget, sink, blocks, {}, keys, meta)
    if sched.budget["sum_p:offstar"] > eps:
        raise ScheduleBudgetError(
            f"off-star sum {sched.budget['sum_p:offstar']:.6g} exceeds eps={eps}")
    return sched


def theta_schedule(tree_depth: int, vertex_budget: int, *,
                   cross_eps: float = 0.01,
                   block_eps: float = 0.01) -> EdgeSchedule:
    """Blocks realise the incompatible tree family with a fair coin on each
    block's distinguishing extra pair.

    Block n is pinned to the plain tree everywhere except that pair, which
    gets probability exactly 1/2: conditioned on the block matching either
    variant, each occurs with probability one half.  Per-block residual
    probabilities of missing both variants sum to at most block_eps and
    cross pairs to at most cross_eps.  Values are chosen directly rather
    than drawn from a sequence.
    """
    from .constructions import v_tree, _vtree_path_len
    if tree_depth < 1:
        raise ValueError("tree depth must be >= 1")
    sink: dict = {}
    blocks: dict = {}
    group_lists: dict = {}
    coin_pairs = []
    ptr = 0
    levels = []
    for n in range(1, tree_depth + 1):
        size = _vtree_path_len(n) + 5
        if ptr + size > vertex_budget:
            break
        verts = tuple(range(ptr, ptr + size))
        ptr += size
        blocks[f"A{n}"] = verts
        levels.append((n, verts))
    for n, verts in levels:
        tree = v_tree(n)
        path_len = _vtree_path_len(n)
        coin_local = (path_len + 3, path_len + 4)
        c_n = len(verts) * (len(verts) - 1) // 2 - 1
        delta = clamp_unit(block_eps * 2.0 ** -(n + 1) / max(c_n, 1))
        block_pairs = []
        for lu, lv in itertools.combinations(range(len(verts)), 2):
            u, v = verts[lu], verts[lv]
            i = pair_index(u, v)
            if (lu, lv) == coin_local:
                sink[i] = Entry(u, v, "choice", i, 0.5, None, "coin")
                coin_pairs.append(i)
            elif tree.has_edge(lu, lv):
                sink[i] = Entry(u, v, "choice", i, clamp_unit(1.0 - delta),
                                1, "block-edge")
                block_pairs.append(i)
            else:
                sink[i] = Entry(u, v, "choice", i, delta, 0, "block-nonedge")
                block_pairs.append(i)
        group_lists[f"theta:{n}"] = [tuple(block_pairs)]
    npairs = vertex_budget * (vertex_budget - 1) // 2
    cross_rank = 0
    for i in range(npairs):
        if i in sink:
            continue
        a, b = index_pair(i)
        cross_rank += 1
        p = clamp_unit(cross_eps * 2.0 ** -(cross_rank + 1))
        sink[i] = Entry(a, b, "choice", i, p, 0, "cross")
    blocks["idx:coin"] = tuple(coin_pairs)
    groups = {k: tuple(v) for k, v in group_lists.items()}
    keys = (["sum_p:cross"]
            + [f"div:{k}" for k in groups]
            + [f"resid:{k}" for k in groups])
    meta = {"tree_depth": str(tree_depth), "cross_eps": repr(cross_eps),
            "block_eps": repr(block_eps),
            "levels": ",".join(str(n) for n, _ in levels)}
    return _finish("theta", vertex_budget, sink, blocks, groups, keys, meta)
