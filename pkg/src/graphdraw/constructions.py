"""Deterministic combinatorial constructions.

Builders and checkers for the structures the sampler is aimed at:
component-universal graph prefixes and their closure-generated relatives,
partition-hereditary (Ramsey-style) graphs with exhaustive verification,
finite-scale basis extraction from an adjacency oracle, caterpillar and
star-of-stars trees with prescribed degree censuses, the incompatible tree
family used by the no-limit schedule, type decomposition against that
family, and degree-sequence recovery from component censuses.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graphcore import (DegreeCensus, FiniteGraph, GraphOracle,
                        _backtrack_iso, canonical_encoding, canonical_form,
                        components, connected_catalog, degree_census,
                        find_induced, graph_catalog, induced,
                        isolated_union, isolated_union_all, modify)


class RamseyCapError(ValueError):
    """Raised when a recursive build or verification exceeds its size cap."""


class ExtractionError(ValueError):
    """Raised when basis extraction exhausts its budget without any witness."""

    def __init__(self, message: str, survivors: int):
        super().__init__(message)
        self.survivors = survivors


# --- component-universal prefixes ---------------------------------------------

def ufin_prefix(component_budget: int, catalog_size: int) -> FiniteGraph:
    """Isolated union of the first component_budget entries of the round-robin
    over all connected catalog graphs of at most catalog_size vertices."""
    if component_budget < 0:
        raise ValueError("component budget must be nonnegative")
    comps = connected_catalog(catalog_size)
    return isolated_union_all(
        comps[i % len(comps)] for i in range(component_budget))


class CanonicalUfinOracle(GraphOracle):
    """Adjacency oracle for the infinite extension of ufin_prefix.

    Components follow the connected catalog round-robin laid out on
    consecutive vertex ranges, repeating forever.
    """

    def __init__(self, catalog_size: int = 4):
        comps = connected_catalog(catalog_size)
        self._comps = comps
        self._sizes = [g.n for g in comps]
        self._starts = []
        acc = 0
        for s in self._sizes:
            self._starts.append(acc)
            acc += s
        self._period = acc
        self.catalog_size = catalog_size
        self.kind = f"canonical-ufin:{catalog_size}"

    def _locate(self, v: int) -> tuple:
        r, off = divmod(v, self._period)
        for i in range(len(self._sizes) - 1, -1, -1):
            if off >= self._starts[i]:
                return r, i, off - self._starts[i]
        raise AssertionError("unreachable")

    def _edge(self, a: int, b: int) -> bool:
        ra, ia, la = self._locate(a)
        rb, ib, lb = self._locate(b)
        if (ra, ia) != (rb, ib):
            return False
        if la > lb:
            la, lb = lb, la
        return (la, lb) in self._comps[ia].edges


# --- closed families -----------------------------------------------------------

@dataclass(frozen=True)
class ClosureBudget:
    max_members: int
    max_vertices: int


def _closure_key(g: FiniteGraph):
    # Canonical dedup is exact up to 8 vertices; larger members are
    # deduplicated by their labelled edge set.
    if g.n <= 8:
        return ("c", g.n, canonical_encoding(g))
    return ("l", g.n, g.edges)


@dataclass(frozen=True)
class ClosedFamilyApprox:
    """Budgeted closure under pairwise isolated union and single-pair flips."""

    members: tuple
    log: tuple        # replayable steps: (op, *args)
    budget: ClosureBudget
    exhausted: bool


def closure(k0: Sequence[FiniteGraph], budget: ClosureBudget) -> ClosedFamilyApprox:
    """Breadth-first closure of k0 under isolated union and one-pair
    modification, canonicalised and deduplicated, until the budget binds."""
    if not k0:
        raise ValueError("seed family must be nonempty")
    members: list = []
    keys = set()
    log: list = []
    exhausted = False

    def admit(g: FiniteGraph, step) -> bool:
        nonlocal exhausted
        key = _closure_key(g)
        if key in keys:
            return False
        if len(members) >= budget.max_members:
            exhausted = True
            return False
        keys.add(key)
        members.append(canonical_form(g) if g.n <= 8 else g)
        log.append(step)
        return True

    for i, g in enumerate(k0):
        if g.n > budget.max_vertices:
            raise ValueError("seed member exceeds the vertex budget")
        admit(g, ("seed", i))

    frontier = 0
    while frontier < len(members) and not exhausted:
        g = members[frontier]
        for j in range(frontier + 1):
            h = members[j]
            if g.n + h.n <= budget.max_vertices:
                admit(isolated_union(g, h), ("union", frontier, j))
                if exhausted:
                    break
        if exhausted:
            break
        for a in range(g.n):
            for b in range(a + 1, g.n):
                admit(modify(g, [(a, b)]), ("flip", frontier, (a, b)))
                if exhausted:
                    break
            if exhausted:
                break
        frontier += 1
    return ClosedFamilyApprox(tuple(members), tuple(log), budget, exhausted)


def replay_closure(k0: Sequence[FiniteGraph], log: Iterable[tuple],
                   budget: ClosureBudget) -> tuple:
    """Re-execute a generation log; returns the member list it produces."""
    members: list = []
    for step in log:
        if step[0] == "seed":
            g = k0[step[1]]
            members.append(canonical_form(g) if g.n <= 8 else g)
        elif step[0] == "union":
            u = isolated_union(members[step[1]], members[step[2]])
            members.append(canonical_form(u) if u.n <= 8 else u)
        elif step[0] == "flip":
            f = modify(members[step[1]], [step[2]])
            members.append(canonical_form(f) if f.n <= 8 else f)
        else:
            raise ValueError(f"unknown log step {step!r}")
    return tuple(members)


def un_prefix(family: ClosedFamilyApprox, component_budget: int) -> FiniteGraph:
    """Isolated union cycling the family's members round-robin."""
    if not family.members:
        raise ValueError("family must be nonempty")
    return isolated_union_all(
        family.members[i % len(family.members)]
        for i in range(component_budget))


# --- partition-hereditary graphs ------------------------------------------------

def ramsey_graph(h: FiniteGraph, k: int, max_vertices: int = 4096) -> FiniteGraph:
    """Graph in which every k-partition of the vertices leaves an induced copy
    of h inside some part.

    Recursive: singleton h or one part returns h itself; two-vertex h returns
    the clique or anticlique of size k+1; otherwise split h = h0 + v, build
    the (h0, k) graph, adjoin one (h, k-1) graph per induced copy of h0, and
    wire each adjoined vertex so that the copy plus that vertex induces h.
    """
    if h.n < 1:
        raise ValueError("target graph must be nonempty")
    if k < 1:
        raise ValueError("partition count must be >= 1")
    if h.n == 1 or k == 1:
        return h
    if h.n == 2:
        if h.edges:
            return FiniteGraph.clique(k + 1)
        return FiniteGraph.anticlique(k + 1)
    h0 = induced(h, range(h.n - 1))
    v = h.n - 1
    base = ramsey_graph(h0, k, max_vertices)
    branch = ramsey_graph(h, k - 1, max_vertices)
    copies = []
    for subset in itertools.combinations(range(base.n), h0.n):
        emb = find_induced(base, h0, within=subset)
        if emb is not None:
            copies.append(emb)
    total = base.n + len(copies) * branch.n
    if total > max_vertices:
        raise RamseyCapError(
            f"build for ({h.n}-vertex target, k={k}) needs {total} vertices")
    edges = set(base.edges)
    offset = base.n
    for emb in copies:
        for a, b in branch.edges:
            edges.add((a + offset, b + offset))
        for w in range(offset, offset + branch.n):
            for u in range(h0.n):
                if h.has_edge(u, v):
                    edges.add((emb[u], w))
        offset += branch.n
    return FiniteGraph(total, frozenset(edges))


def verify_ramsey(x: FiniteGraph, h: FiniteGraph, k: int,
                  enumeration_cap: int = 2_000_000):
    """Exhaustively check that every k-partition of x leaves an induced copy
    of h in some part; returns (True, None) or (False, certificate coloring).

    The first vertex's color is fixed: the property is invariant under
    permuting part labels.
    """
    if k < 1:
        raise ValueError("partition count must be >= 1")
    if x.n == 0:
        return False, ()
    if k ** (x.n - 1) > enumeration_cap:
        raise RamseyCapError(
            f"{k}^{x.n} partitions exceed the enumeration cap")
    memo: dict = {}

    def part_has_copy(part: frozenset) -> bool:
        hit = memo.get(part)
        if hit is None:
            if len(part) < h.n:
                hit = False
            else:
                hit = find_induced(x, h, within=part) is not None
            memo[part] = hit
        return hit

    for rest in itertools.product(range(k), repeat=x.n - 1):
        coloring = (0,) + rest
        parts = [[] for _ in range(k)]
        for vtx, c in enumerate(coloring):
            parts[c].append(vtx)
        if not any(part_has_copy(frozenset(p)) for p in parts if p):
            return False, coloring
    return True, None


def partition_find_universal(g: FiniteGraph, parts: Sequence[Iterable[int]],
                             s: int) -> Optional[int]:
    """Least part index whose induced subgraph contains every catalog graph
    of at most s vertices; None when no part qualifies."""
    if s > 4:
        raise ValueError("universality search supports s <= 4")
    flat = [v for part in parts for v in part]
    if sorted(flat) != list(range(g.n)):
        raise ValueError("parts must partition the vertex set")
    catalog = graph_catalog(s)
    for i, part in enumerate(parts):
        sub = induced(g, part)
        if all(find_induced(sub, h) is not None for h in catalog):
            return i
    return None


# --- basis extraction ------------------------------------------------------------

@dataclass(frozen=True)
class BasisExtraction:
    side: str            # "ufin" | "complement"
    f_bits: str
    witnesses: tuple     # vertex tuples in oracle coordinates
    found_targets: tuple # indices of targets that were realised
    survivors: int

    def as_dict(self) -> dict:
        return {"schema": "graphdraw/basis-extract/v1", "side": self.side,
                "f_bits": self.f_bits,
                "witnesses": [list(w) for w in self.witnesses],
                "found_targets": list(self.found_targets),
                "survivors": self.survivors}


def basis_extract(oracle: GraphOracle, budget: int,
                  targets: Sequence[FiniteGraph], *,
                  max_steps: int = 64, min_survivors: int = 64,
                  probe_width: int = 48,
                  window_width: int = 128) -> BasisExtraction:
    """Finite-scale two-sided extraction from a (promised weakly universal)
    oracle.

    Refinement keeps the set of vertices agreeing with the chosen branch bits
    against every processed vertex.  The branch is chosen 0 when the 0-branch
    window still contains an induced copy of every graph on at most 3
    vertices, else 1 under the same test, else whichever branch survives
    larger.  After refinement, pairwise disjoint induced copies of the
    targets are collected inside the surviving set: mutually disconnected on
    the 0 side; complements of the targets, mutually fully connected, on the
    1 side.
    """
    if budget < 2:
        raise ValueError("budget too small")
    catalog3 = graph_catalog(3)

    def universal_probe(cands: list) -> bool:
        if not cands:
            return False
        window = oracle.window(cands[:probe_width])
        return all(find_induced(window, h) is not None for h in catalog3)

    survivors = list(range(budget))
    bits = []
    for n in range(max_steps):
        pool = [v for v in survivors if v > n]
        if not pool:
            break
        zero = [v for v in pool if not oracle.query(n, v)]
        one = [v for v in pool if oracle.query(n, v)]
        if universal_probe(zero):
            bit = 0
        elif universal_probe(one):
            bit = 1
        else:
            bit = 0 if len(zero) >= len(one) else 1
        bits.append(bit)
        survivors = zero if bit == 0 else one
        if len(survivors) <= min_survivors:
            break

    side_bit = 0 if bits.count(0) >= bits.count(1) else 1
    side = "ufin" if side_bit == 0 else "complement"
    from .graphcore import complement as _complement

    pool = list(survivors)
    witnesses = []
    found = []
    for idx, target in enumerate(targets):
        cands = []
        for v in pool:
            compatible = True
            for w in witnesses:
                for u in w:
                    q = oracle.query(u, v)
                    if (side_bit == 0 and q) or (side_bit == 1 and not q):
                        compatible = False
                        break
                if not compatible:
                    break
            if compatible:
                cands.append(v)
            if len(cands) >= window_width:
                break
        if not cands:
            continue
        goal = target if side_bit == 0 else _complement(target)
        window = oracle.window(cands)
        emb = find_induced(window, goal)
        if emb is None:
            continue
        witness = tuple(cands[i] for i in emb)
        witnesses.append(witness)
        found.append(idx)
        used = set(witness)
        pool = [v for v in pool if v not in used]

    if not witnesses:
        raise ExtractionError("budget exhausted before any witness",
                              survivors=len(survivors))
    return BasisExtraction(side=side, f_bits="".join(map(str, bits)),
                           witnesses=tuple(witnesses),
                           found_targets=tuple(found),
                           survivors=len(survivors))


# --- trees with prescribed degree censuses ----------------------------------------

@dataclass(frozen=True)
class CaterpillarTree:
    graph: FiniteGraph
    spine: tuple
    boundary: tuple   # spine endpoints whose degree deviates from the ideal census
    leaf_count: int   # derived count of degree-1 vertices (truncation aside)


def caterpillar_tree(degree_demand: dict, truncation: int) -> CaterpillarTree:
    """Spine path carrying the demanded high-degree vertices, leaves attached
    to realise each demand, degree-2 fillers elsewhere.

    Counts for degrees above 2 are taken from the demand; the degree-1 count
    is forced to 1 + sum over demands of count*(degree-2) (one path origin
    plus the attached leaves), and an explicit degree-1 demand must agree.
    The far spine endpoint deviates from the ideal census at a finite
    truncation and is reported as boundary.
    """
    demand = {int(d): int(c) for d, c in degree_demand.items() if c}
    if demand.get(0):
        raise ValueError("degree-0 vertices cannot appear in a tree")
    if 2 in demand:
        raise ValueError("the degree-2 count is determined by the spine")
    high = {d: c for d, c in demand.items() if d > 2}
    leaf_target = 1 + sum(c * (d - 2) for d, c in high.items())
    if 1 in demand and demand[1] != leaf_target:
        raise ValueError(
            f"degree-1 demand {demand[1]} violates the leaf equation "
            f"(expected {leaf_target})")
    attached = leaf_target - 1
    spine_len = truncation - 1 - attached
    positions_needed = sum(high.values())
    if spine_len < positions_needed + 2:
        raise ValueError("truncation too small for the demanded degrees")

    edges = set()
    edges.add((0, 1))                      # path origin leaf
    for i in range(1, spine_len):
        edges.add((i, i + 1))
    next_leaf = spine_len + 1
    pos = 1
    for d in sorted(high):
        for _ in range(high[d]):
            hub = 1 + pos                  # spine vertex carrying degree d
            for _ in range(d - 2):
                edges.add((hub, next_leaf))
                next_leaf += 1
            pos += 1
    graph = FiniteGraph(truncation, frozenset(edges))
    spine = tuple(range(1, spine_len + 1))
    return CaterpillarTree(graph=graph, spine=spine,
                           boundary=(1, spine_len), leaf_count=leaf_target)


def star_of_stars(degree_demand: dict, truncation: int) -> FiniteGraph:
    """Root of large degree; first-level vertices realise each demanded
    degree above 1 through leaf children; every second-level vertex is a
    leaf; remaining first-level vertices are leaves of the root."""
    demand = {int(d): int(c) for d, c in degree_demand.items() if c}
    if demand.get(0):
        raise ValueError("degree-0 vertices cannot appear in a tree")
    if 1 in demand:
        raise ValueError("the degree-1 count is absorbed by the leaf levels")
    cost = 1 + sum(c * d for d, c in demand.items())
    if truncation < cost + 1:
        raise ValueError("truncation too small for the demanded degrees")
    edges = set()
    nxt = 1
    hubs = []
    for d in sorted(demand):
        for _ in range(demand[d]):
            hubs.append((nxt, d))
            edges.add((0, nxt))
            nxt += 1
    for hub, d in hubs:
        for _ in range(d - 1):
            edges.add((hub, nxt))
            nxt += 1
    while nxt < truncation:
        edges.add((0, nxt))
        nxt += 1
    return FiniteGraph(truncation, frozenset(edges))


# --- the incompatible tree family --------------------------------------------------

def _vtree_path_len(n: int) -> int:
    # Distances between the two splitting vertices grow fast enough that
    # each tree outweighs the total size of all earlier ones.
    if n < 1:
        raise ValueError("tree index must be >= 1")
    if n == 1:
        return 2
    if n == 2:
        return 3
    return 2 ** (n + 1) - 5


def v_tree(n: int) -> FiniteGraph:
    """Tree with a top splitting vertex (two leaves plus a descending path)
    and a bottom splitting vertex carrying two leaves; the path between the
    splitting vertices lengthens strictly with n."""
    path_len = _vtree_path_len(n)
    size = path_len + 5
    edges = {(0, 1), (0, 2), (0, 3)}
    for i in range(3, 2 + path_len):
        edges.add((i, i + 1))
    bottom = 2 + path_len
    edges.add((bottom, path_len + 3))
    edges.add((bottom, path_len + 4))
    return FiniteGraph(size, frozenset(edges))


def v_tree_prime(n: int) -> FiniteGraph:
    """v_tree(n) with one extra edge joining the two bottom leaves."""
    path_len = _vtree_path_len(n)
    return modify(v_tree(n), [(path_len + 3, path_len + 4)])


@dataclass(frozen=True)
class ThetaType:
    """Decomposition of a graph against the tree family: matched levels with
    their plain/augmented bit, the cutoff below which levels are missing,
    and the leftover part."""

    bits: tuple          # sorted (level, bit) pairs
    cutoff: int
    leftover: FiniteGraph


def theta_decompose(g: FiniteGraph, max_n: int) -> ThetaType:
    """Match components against v_tree/v_tree_prime for levels up to max_n;
    unmatched components aggregate into the leftover."""
    size_to_level = {_vtree_path_len(n) + 5: n for n in range(1, max_n + 1)}
    matched: dict = {}
    leftovers = []
    for comp in components(g):
        sub = induced(g, comp)
        level = size_to_level.get(sub.n)
        placed = False
        if level is not None and level not in matched:
            if _backtrack_iso(sub, v_tree(level)):
                matched[level] = 0
                placed = True
            elif _backtrack_iso(sub, v_tree_prime(level)):
                matched[level] = 1
                placed = True
        if not placed:
            leftovers.append(sub)
    if matched:
        top = max(matched)
        missing = [n for n in range(1, top) if n not in matched]
        cutoff = max(missing) if missing else 0
    else:
        cutoff = 0
    return ThetaType(bits=tuple(sorted(matched.items())), cutoff=cutoff,
                     leftover=isolated_union_all(leftovers))


# --- degree-sequence recovery --------------------------------------------------------

def census_distance(a: DegreeCensus, b: DegreeCensus) -> int:
    """Count disagreement over the shared degree support, dropping the two
    lowest and two highest observed degrees when more than four appear."""
    da, db = a.as_dict(), b.as_dict()
    degrees = sorted(set(da) | set(db))
    kept = degrees[2:-2] if len(degrees) > 4 else degrees
    return sum(abs(da.get(d, 0) - db.get(d, 0)) for d in kept)


def ds_recovery(g: FiniteGraph, candidates: Sequence[FiniteGraph]) -> tuple:
    """Index of the candidate whose census best matches the modal census of
    g's large components, plus all distances (ties to the lower index)."""
    if not candidates:
        raise ValueError("candidate list must be nonempty")
    comps = components(g)
    censuses = [degree_census(induced(g, c)) for c in comps]
    if comps:
        biggest = max(len(c) for c in comps)
        large = [cen for c, cen in zip(comps, censuses)
                 if 2 * len(c) >= biggest]
        tally = Counter(large)
        top = max(tally.values())
        modal = next(cen for cen in large if tally[cen] == top)
    else:
        modal = DegreeCensus(())
    distances = [census_distance(modal, degree_census(c)) for c in candidates]
    best = min(range(len(candidates)), key=lambda i: (distances[i], i))
    return best, distances


# --- indivisibility ---------------------------------------------------------------

def disconnected_copies(g: FiniteGraph,
                        targets: Sequence[FiniteGraph]) -> Optional[list]:
    """Greedy pairwise disjoint, mutually disconnected induced copies of the
    targets inside g; None when some target cannot be placed."""
    taken: list = []
    blocked: set = set()
    for t in targets:
        pool = [v for v in range(g.n)
                if v not in blocked
                and all(not g.has_edge(v, w) for w in blocked)]
        emb = find_induced(g, t, within=pool)
        if emb is None:
            return None
        taken.append(tuple(emb))
        blocked |= set(emb)
    return taken


def indivisibility_check(g: FiniteGraph, parts: Sequence[Iterable[int]],
                         targets: Sequence[FiniteGraph]) -> Optional[int]:
    """Least side of a 2-partition whose induced graph holds pairwise
    disconnected induced copies of every target; None when neither does."""
    if len(parts) != 2:
        raise ValueError("indivisibility check takes a 2-partition")
    flat = sorted(v for part in parts for v in part)
    if flat != list(range(g.n)):
        raise ValueError("parts must partition the vertex set")
    for i, part in enumerate(parts):
        sub = induced(g, part)
        if disconnected_copies(sub, targets) is not None:
            return i
    return None
