"""Finite graphs on {0..n-1} and their algebra.

Graphs are immutable vertex-count + edge-set values.  The module covers the
operations the rest of the package leans on: isolated union, complement,
induced subgraphs, cut switching, finite modification, degree and component
censuses, exact isomorphism at small sizes, induced/subgraph embedding
search, the catalog of all non-isomorphic graphs up to six vertices, weak
universality scanning, and extension-witness statistics.

Pairs {a,b} with a < b are indexed colexicographically:
index({a,b}) = b(b-1)/2 + a, so pairs inside {0..n-1} occupy exactly the
first n(n-1)/2 indices.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence


def pair_index(a: int, b: int) -> int:
    """Colexicographic index of the unordered pair {a,b}."""
    if a == b:
        raise ValueError("pairs must have distinct endpoints")
    if a > b:
        a, b = b, a
    if a < 0:
        raise ValueError("vertices must be nonnegative")
    return b * (b - 1) // 2 + a


def index_pair(i: int) -> tuple:
    """Inverse of pair_index."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    b = (1 + math.isqrt(1 + 8 * i)) // 2
    while b * (b - 1) // 2 > i:
        b -= 1
    while (b + 1) * b // 2 <= i:
        b += 1
    a = i - b * (b - 1) // 2
    return a, b


@dataclass(frozen=True)
class FiniteGraph:
    """Graph on vertices {0..n-1} with an immutable unordered edge set."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for e in self.edges:
            a, b = e
            if a == b:
                raise ValueError("loops are not allowed")
            if a > b:
                a, b = b, a
            if not (0 <= a and b < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            norm.add((a, b))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def clique(cls, n: int) -> "FiniteGraph":
        return cls(n, frozenset(itertools.combinations(range(n), 2)))

    @classmethod
    def anticlique(cls, n: int) -> "FiniteGraph":
        return cls(n, frozenset())

    @classmethod
    def path(cls, n: int) -> "FiniteGraph":
        return cls(n, frozenset((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "FiniteGraph":
        if n < 3:
            raise ValueError("cycles need at least 3 vertices")
        edges = {(i, i + 1) for i in range(n - 1)}
        edges.add((0, n - 1))
        return cls(n, frozenset(edges))

    @classmethod
    def from_encoding(cls, n: int, code: int) -> "FiniteGraph":
        edges = set()
        for i in range(n * (n - 1) // 2):
            if code >> i & 1:
                edges.add(index_pair(i))
        return cls(n, frozenset(edges))

    def has_edge(self, a: int, b: int) -> bool:
        if a > b:
            a, b = b, a
        return (a, b) in self.edges

    def neighbors(self, v: int) -> set:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def adjacency(self) -> list:
        """Neighbor sets for all vertices."""
        adj = [set() for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def encoding(self) -> int:
        code = 0
        for a, b in self.edges:
            code |= 1 << pair_index(a, b)
        return code


def isolated_union(g: FiniteGraph, h: FiniteGraph) -> FiniteGraph:
    """Disjoint union with no cross edges; h's vertices are shifted by g.n."""
    edges = set(g.edges)
    for a, b in h.edges:
        edges.add((a + g.n, b + g.n))
    return FiniteGraph(g.n + h.n, frozenset(edges))


def isolated_union_all(graphs: Iterable[FiniteGraph]) -> FiniteGraph:
    out = FiniteGraph(0)
    for g in graphs:
        out = isolated_union(out, g)
    return out


def complement(g: FiniteGraph) -> FiniteGraph:
    edges = frozenset(
        (a, b) for a, b in itertools.combinations(range(g.n), 2)
        if (a, b) not in g.edges)
    return FiniteGraph(g.n, edges)


def induced(g: FiniteGraph, vertices: Iterable[int]) -> FiniteGraph:
    """Subgraph induced on the given vertices, relabelled order-preservingly."""
    vs = sorted(set(vertices))
    for v in vs:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    relabel = {v: i for i, v in enumerate(vs)}
    edges = frozenset(
        (relabel[a], relabel[b]) for a, b in g.edges
        if a in relabel and b in relabel)
    return FiniteGraph(len(vs), edges)


def switch(g: FiniteGraph, s: Iterable[int]) -> FiniteGraph:
    """Flip exactly the pairs crossing the cut (s, V-s)."""
    sset = set(s)
    for v in sset:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    edges = set(g.edges)
    for a in range(g.n):
        for b in range(a + 1, g.n):
            if (a in sset) != (b in sset):
                if (a, b) in edges:
                    edges.remove((a, b))
                else:
                    edges.add((a, b))
    return FiniteGraph(g.n, frozenset(edges))


def modify(g: FiniteGraph, flips: Iterable[tuple]) -> FiniteGraph:
    """Symmetric difference of the edge set with the given pairs."""
    edges = set(g.edges)
    for a, b in flips:
        if a > b:
            a, b = b, a
        if a == b or not (0 <= a and b < g.n):
            raise ValueError(f"invalid flip pair ({a},{b})")
        if (a, b) in edges:
            edges.remove((a, b))
        else:
            edges.add((a, b))
    return FiniteGraph(g.n, frozenset(edges))


@dataclass(frozen=True)
class DegreeCensus:
    """Counts of vertices per degree."""

    items: tuple  # sorted (degree, count) pairs

    def __post_init__(self):
        if list(self.items) != sorted(self.items):
            raise ValueError("census items must be sorted")
        for _, c in self.items:
            if c <= 0:
                raise ValueError("census counts must be positive")

    def as_dict(self) -> dict:
        return dict(self.items)

    def total(self) -> int:
        return sum(c for _, c in self.items)

    @classmethod
    def from_dict(cls, d: dict) -> "DegreeCensus":
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))


def degree_census(g: FiniteGraph) -> DegreeCensus:
    degs = [0] * g.n
    for a, b in g.edges:
        degs[a] += 1
        degs[b] += 1
    return DegreeCensus.from_dict(Counter(degs))


def components(g: FiniteGraph) -> list:
    """Connected components as sorted vertex lists, ordered by minimum vertex."""
    adj = g.adjacency()
    seen = [False] * g.n
    out = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = []
        queue = deque([start])
        seen[start] = True
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        out.append(sorted(comp))
    return out


# --- isomorphism and embedding search ---------------------------------------

@lru_cache(maxsize=None)
def _perms(n: int) -> tuple:
    return tuple(itertools.permutations(range(n)))


def canonical_encoding(g: FiniteGraph) -> int:
    """Lexicographically minimal adjacency encoding over all relabelings."""
    if g.n > 8:
        raise ValueError("canonical encoding supports at most 8 vertices")
    edges = tuple(g.edges)
    best = None
    for perm in _perms(g.n):
        code = 0
        for a, b in edges:
            x, y = perm[a], perm[b]
            if x > y:
                x, y = y, x
            code |= 1 << (y * (y - 1) // 2 + x)
        if best is None or code < best:
            best = code
    return 0 if best is None else best


def canonical_form(g: FiniteGraph) -> FiniteGraph:
    return FiniteGraph.from_encoding(g.n, canonical_encoding(g))


def canonical_hex(g: FiniteGraph) -> str:
    npairs = g.n * (g.n - 1) // 2
    width = max(1, (npairs + 3) // 4)
    return format(canonical_encoding(g), f"0{width}x")


def _neighbor_degree_key(g: FiniteGraph) -> list:
    adj = g.adjacency()
    degs = [len(a) for a in adj]
    return [tuple(sorted(degs[w] for w in adj[v])) for v in range(g.n)]


def _backtrack_iso(g: FiniteGraph, h: FiniteGraph) -> bool:
    """Exact isomorphism via pruned backtracking; no size guard."""
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    gadj, hadj = g.adjacency(), h.adjacency()
    gdeg = [len(x) for x in gadj]
    hdeg = [len(x) for x in hadj]
    if sorted(gdeg) != sorted(hdeg):
        return False
    gkey = _neighbor_degree_key(g)
    hkey = _neighbor_degree_key(h)
    if sorted(gkey) != sorted(hkey):
        return False
    # Map vertices of g in order of ascending candidate-pool size.
    order = sorted(range(g.n), key=lambda v: (-gdeg[v], gkey[v]))
    mapping = {}
    used = set()

    def extend(pos: int) -> bool:
        if pos == g.n:
            return True
        v = order[pos]
        for w in range(h.n):
            if w in used or hdeg[w] != gdeg[v] or hkey[w] != gkey[v]:
                continue
            ok = True
            for u in mapping:
                if (u in gadj[v]) != (mapping[u] in hadj[w]):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used.add(w)
                if extend(pos + 1):
                    return True
                del mapping[v]
                used.remove(w)
        return False

    return extend(0)


def is_isomorphic(g: FiniteGraph, h: FiniteGraph) -> bool:
    """Exact isomorphism for graphs of at most 12 vertices."""
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if degree_census(g) != degree_census(h):
        return False
    if g.n <= 8:
        return canonical_encoding(g) == canonical_encoding(h)
    if g.n <= 12:
        return _backtrack_iso(g, h)
    raise ValueError("exact isomorphism supports at most 12 vertices")


def _find_embedding(g: FiniteGraph, h: FiniteGraph, within, induced_mode: bool):
    """Lexicographically least embedding of h into g, or None.

    induced_mode: non-edges of h must map to non-edges of g; otherwise only
    edges are constrained (subgraph embedding).
    """
    pool = sorted(set(range(g.n) if within is None else within))
    for v in pool:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    if h.n > len(pool):
        return None
    gadj = g.adjacency()
    himg = [None] * h.n
    used = set()

    def extend(v: int):
        if v == h.n:
            return True
        for w in pool:
            if w in used:
                continue
            ok = True
            for u in range(v):
                h_edge = h.has_edge(u, v)
                g_edge = himg[u] in gadj[w]
                if h_edge and not g_edge:
                    ok = False
                    break
                if induced_mode and not h_edge and g_edge:
                    ok = False
                    break
            if ok:
                himg[v] = w
                used.add(w)
                if extend(v + 1):
                    return True
                himg[v] = None
                used.remove(w)
        return False

    if extend(0):
        return tuple(himg)
    return None


def find_induced(g: FiniteGraph, h: FiniteGraph, within=None):
    """Least injective map of h's vertices into `within` preserving edges and
    non-edges; None when no induced copy exists."""
    return _find_embedding(g, h, within, induced_mode=True)


def find_subgraph(g: FiniteGraph, h: FiniteGraph, within=None):
    """Least injective map preserving edges only (subgraph embedding)."""
    return _find_embedding(g, h, within, induced_mode=False)


# --- catalog -----------------------------------------------------------------

_CATALOG_MAX = 6


@lru_cache(maxsize=None)
def graph_catalog(max_size: int) -> tuple:
    """All pairwise non-isomorphic graphs with 1..max_size vertices.

    Members are canonical forms sorted by (size, encoding).  Per-size counts
    are 1, 2, 4, 11, 34, 156.
    """
    if not 1 <= max_size <= _CATALOG_MAX:
        raise ValueError(f"catalog supports sizes 1..{_CATALOG_MAX}")
    by_size = {1: {0}}
    for m in range(2, max_size + 1):
        codes = set()
        for parent_code in by_size[m - 1]:
            parent = FiniteGraph.from_encoding(m - 1, parent_code)
            for nb in range(1 << (m - 1)):
                edges = set(parent.edges)
                for v in range(m - 1):
                    if nb >> v & 1:
                        edges.add((v, m - 1))
                codes.add(canonical_encoding(FiniteGraph(m, frozenset(edges))))
        by_size[m] = codes
    out = []
    for m in range(1, max_size + 1):
        for code in sorted(by_size[m]):
            out.append(FiniteGraph.from_encoding(m, code))
    return tuple(out)


@lru_cache(maxsize=None)
def connected_catalog(max_size: int) -> tuple:
    return tuple(g for g in graph_catalog(max_size) if len(components(g)) == 1)


def graph_name(g: FiniteGraph) -> str:
    """Short name for standard small graphs, else a canonical tag."""
    if g.n <= 8:
        code = canonical_encoding(g)
        for label, builder in (("K", FiniteGraph.clique),
                               ("A", FiniteGraph.anticlique),
                               ("P", FiniteGraph.path)):
            if code == canonical_encoding(builder(g.n)):
                if g.n == 1:
                    return "K1"
                return f"{label}{g.n}"
        if g.n >= 3 and code == canonical_encoding(FiniteGraph.cycle(g.n)):
            return f"C{g.n}"
        return f"g{g.n}x{canonical_hex(g)}"
    return f"g{g.n}m{len(g.edges)}"


def named_graph(spec: str) -> FiniteGraph:
    """Parse graph literals K3, A4, P5, C5."""
    spec = spec.strip()
    if len(spec) >= 2 and spec[0] in "KAPC" and spec[1:].isdigit():
        n = int(spec[1:])
        return {"K": FiniteGraph.clique, "A": FiniteGraph.anticlique,
                "P": FiniteGraph.path, "C": FiniteGraph.cycle}[spec[0]](n)
    raise ValueError(f"unrecognised graph literal: {spec!r}")


# --- universality and witness scans ------------------------------------------

def weak_universality_scan(g: FiniteGraph, max_size: int):
    """Largest s <= max_size with every catalog graph of <= s vertices induced
    in g, plus the first missing graph as certificate (None when complete)."""
    if max_size > 5:
        raise ValueError("universality scan supports max_size <= 5")
    level = 0
    for s in range(1, max_size + 1):
        for h in graph_catalog(max_size):
            if h.n != s:
                continue
            if find_induced(g, h) is None:
                return level, h
        level = s
    return level, None


@dataclass(frozen=True)
class WitnessStats:
    found: int
    total: int

    @property
    def fraction(self) -> float:
        return self.found / self.total if self.total else 0.0


def rado_witness_stats(g: FiniteGraph, s: int) -> WitnessStats:
    """Fraction of disjoint (A,B) with #A+#B <= s admitting a vertex adjacent
    to all of A and none of B."""
    if s < 1:
        raise ValueError("s must be >= 1")
    adj = g.adjacency()
    verts = range(g.n)
    found = 0
    total = 0
    for ka in range(s + 1):
        for a_set in itertools.combinations(verts, ka):
            rest = [v for v in verts if v not in a_set]
            for kb in range(0, s - ka + 1):
                if ka + kb == 0:
                    continue
                for b_set in itertools.combinations(rest, kb):
                    total += 1
                    excluded = set(a_set) | set(b_set)
                    for v in verts:
                        if v in excluded:
                            continue
                        if all(v in adj[x] for x in a_set) and \
                                not any(v in adj[x] for x in b_set):
                            found += 1
                            break
    return WitnessStats(found, total)


# --- text formats --------------------------------------------------------------

def edge_list_text(g: FiniteGraph) -> str:
    lines = [f"n {g.n}"]
    for a, b in sorted(g.edges):
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> FiniteGraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n "):
        raise ValueError("edge list must start with a 'n <count>' header")
    n = int(lines[0].split()[1])
    edges = set()
    for ln in lines[1:]:
        a, b = ln.split()
        edges.add((int(a), int(b)))
    return FiniteGraph(n, frozenset(edges))


def dot_text(g: FiniteGraph) -> str:
    lines = ["graph G {"]
    for v in range(g.n):
        lines.append(f"  {v};")
    for a, b in sorted(g.edges):
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- oracles -------------------------------------------------------------------

class GraphOracle:
    """Deterministic adjacency query over the vertex set of the naturals.

    The window onto graphs too large to materialise: consumers pass explicit
    vertex budgets and read adjacency one pair at a time.
    """

    kind: str = "oracle"

    def query(self, a: int, b: int) -> bool:
        if a == b:
            raise ValueError("adjacency queries need distinct vertices")
        if a < 0 or b < 0:
            raise ValueError("vertices must be nonnegative")
        if a > b:
            a, b = b, a
        return self._edge(a, b)

    def _edge(self, a: int, b: int) -> bool:
        raise NotImplementedError

    def window(self, vertices: Sequence[int]) -> FiniteGraph:
        """Materialise the induced graph on the given vertices (relabelled)."""
        vs = sorted(set(vertices))
        idx = {v: i for i, v in enumerate(vs)}
        edges = set()
        for a, b in itertools.combinations(vs, 2):
            if self.query(a, b):
                edges.add((idx[a], idx[b]))
        return FiniteGraph(len(vs), frozenset(edges))


class FiniteGraphOracle(GraphOracle):
    def __init__(self, g: FiniteGraph, kind: Optional[str] = None):
        self.graph = g
        self.kind = kind or f"finite:{g.n}"

    def _edge(self, a, b):
        if b >= self.graph.n:
            raise ValueError(f"vertex {b} beyond oracle range {self.graph.n}")
        return (a, b) in self.graph.edges


class CallableOracle(GraphOracle):
    def __init__(self, fn, kind: str = "callable"):
        self._fn = fn
        self.kind = kind

    def _edge(self, a, b):
        return bool(self._fn(a, b))


class ComplementOracle(GraphOracle):
    def __init__(self, inner: GraphOracle):
        self.inner = inner
        self.kind = f"complement:{inner.kind}"

    def _edge(self, a, b):
        return not self.inner.query(a, b)
