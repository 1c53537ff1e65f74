import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from graphdraw import graphcore as gc
from graphdraw.graphcore import (CallableOracle, ComplementOracle,
                                 DegreeCensus, FiniteGraph,
                                 FiniteGraphOracle, canonical_encoding,
                                 canonical_hex, complement, components,
                                 connected_catalog, degree_census, dot_text,
                                 edge_list_text, find_induced, find_subgraph,
                                 graph_catalog, graph_name, index_pair,
                                 induced, is_isomorphic, isolated_union,
                                 modify, named_graph, pair_index,
                                 parse_edge_list, rado_witness_stats, switch,
                                 weak_universality_scan)


def G(n, *edges):
    return FiniteGraph(n, frozenset(edges))


_GRAPHS = st.integers(min_value=0, max_value=7).flatmap(
    lambda n: st.builds(
        FiniteGraph, st.just(n),
        st.frozensets(st.sampled_from(
            list(itertools.combinations(range(n), 2)) or [(0, 1)]).filter(
                lambda e: n >= 2))
        if n >= 2 else st.just(frozenset())))


# --- pair indexing -----------------------------------------------------------

def test_pair_index_examples():
    assert pair_index(0, 1) == 0
    assert pair_index(1, 2) == 2
    assert pair_index(0, 4) == 6


def test_pair_index_rejects_loops():
    with pytest.raises(ValueError):
        pair_index(3, 3)


@given(st.integers(min_value=0, max_value=10 ** 6))
def test_index_pair_round_trip(i):
    a, b = index_pair(i)
    assert a < b
    assert pair_index(a, b) == i


def test_prefix_pairs_occupy_initial_segment():
    n = 9
    idxs = sorted(pair_index(a, b)
                  for a, b in itertools.combinations(range(n), 2))
    assert idxs == list(range(n * (n - 1) // 2))


# --- graph construction -------------------------------------------------------

def test_finite_graph_validation():
    with pytest.raises(ValueError):
        G(3, (0, 0))
    with pytest.raises(ValueError):
        G(3, (0, 3))
    g = G(3, (2, 0))
    assert g.has_edge(0, 2) and g.has_edge(2, 0)


def test_isolated_union_examples():
    u = isolated_union(named_graph("K2"), named_graph("K2"))
    assert u.n == 4 and u.edges == frozenset({(0, 1), (2, 3)})
    g = G(3, (0, 1))
    assert isolated_union(g, FiniteGraph(0)) == g
    a3 = isolated_union(isolated_union(FiniteGraph(1), FiniteGraph(1)),
                        FiniteGraph(1))
    assert a3 == named_graph("A3")


def test_complement_k3():
    assert complement(named_graph("K3")) == named_graph("A3")


def test_switch_isolated_vertex_joins_all():
    g = isolated_union(named_graph("K2"), named_graph("K1"))
    assert switch(g, {2}) == named_graph("K3")


def test_modify_identity_and_involution():
    g = named_graph("P4")
    assert modify(g, []) == g
    flips = [(0, 3), (1, 2)]
    assert modify(modify(g, flips), flips) == g


def test_induced_relabels_order_preservingly():
    g = named_graph("P4")
    assert induced(g, [1, 3]) == G(2)
    assert induced(g, [2, 3]) == named_graph("K2")
    with pytest.raises(ValueError):
        induced(g, [5])


@settings(max_examples=60, deadline=None)
@given(_GRAPHS)
def test_complement_involution(g):
    assert complement(complement(g)) == g


@settings(max_examples=60, deadline=None)
@given(_GRAPHS, st.sets(st.integers(min_value=0, max_value=6)))
def test_switch_involution(g, s):
    s = {v for v in s if v < g.n}
    assert switch(switch(g, s), s) == g


# --- censuses ------------------------------------------------------------------

def test_degree_census_examples():
    assert degree_census(named_graph("P3")).as_dict() == {1: 2, 2: 1}
    star = G(4, (0, 1), (0, 2), (0, 3))
    assert degree_census(star).as_dict() == {1: 3, 3: 1}
    assert degree_census(named_graph("A2")).as_dict() == {0: 2}


@settings(max_examples=60, deadline=None)
@given(_GRAPHS)
def test_census_conservation(g):
    census = degree_census(g)
    assert census.total() == g.n
    assert sum(d * c for d, c in census.items) == 2 * len(g.edges)


@settings(max_examples=60, deadline=None)
@given(_GRAPHS, _GRAPHS)
def test_census_additive_under_isolated_union(g, h):
    merged = Counter(degree_census(g).as_dict())
    merged.update(degree_census(h).as_dict())
    assert degree_census(isolated_union(g, h)).as_dict() == {
        k: v for k, v in merged.items() if v}


def test_components_examples():
    u = isolated_union(named_graph("K2"), named_graph("K2"))
    assert components(u) == [[0, 1], [2, 3]]
    assert components(named_graph("K3")) == [[0, 1, 2]]
    assert components(named_graph("A3")) == [[0], [1], [2]]


@settings(max_examples=60, deadline=None)
@given(_GRAPHS, _GRAPHS)
def test_component_count_additive(g, h):
    assert len(components(isolated_union(g, h))) == \
        len(components(g)) + len(components(h))


# --- isomorphism ------------------------------------------------------------------

def test_is_isomorphic_examples():
    p3 = named_graph("P3")
    relabeled = G(3, (0, 2), (1, 2))
    assert is_isomorphic(p3, relabeled)
    assert not is_isomorphic(named_graph("K3"), p3)
    c5 = named_graph("C5")
    assert is_isomorphic(c5, complement(c5))


def test_is_isomorphic_backtracking_path():
    # 10 vertices exercises the pruned-backtracking branch.
    g = named_graph("C10")
    perm = [3, 5, 7, 9, 1, 0, 2, 4, 6, 8]
    relabeled = FiniteGraph(10, frozenset(
        (min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in g.edges))
    assert is_isomorphic(g, relabeled)
    assert not is_isomorphic(g, modify(relabeled, [(0, 5)]))


def test_is_isomorphic_size_cap():
    big = named_graph("P13")
    with pytest.raises(ValueError):
        is_isomorphic(big, big)


@settings(max_examples=40, deadline=None)
@given(_GRAPHS, _GRAPHS)
def test_isomorphic_implies_equal_census(g, h):
    if is_isomorphic(g, h):
        assert degree_census(g) == degree_census(h)


# --- embedding search ----------------------------------------------------------------

def test_find_induced_examples():
    assert find_induced(named_graph("K3"), named_graph("K1")) == (0,)
    assert find_induced(named_graph("A4"), named_graph("K2")) is None
    emb = find_induced(named_graph("C5"), named_graph("P3"))
    assert emb is not None


def test_find_induced_respects_within():
    g = isolated_union(named_graph("K2"), named_graph("K2"))
    assert find_induced(g, named_graph("K2"), within=[2, 3]) == (2, 3)
    assert find_induced(g, named_graph("K2"), within=[1, 2]) is None


@settings(max_examples=60, deadline=None)
@given(_GRAPHS)
def test_find_induced_sound(g):
    for h in graph_catalog(3):
        emb = find_induced(g, h)
        if emb is None:
            continue
        assert len(set(emb)) == h.n
        for u, v in itertools.combinations(range(h.n), 2):
            assert h.has_edge(u, v) == g.has_edge(emb[u], emb[v])


def test_find_induced_lexicographically_least():
    g = G(4, (0, 1), (2, 3))
    assert find_induced(g, named_graph("K2")) == (0, 1)


def test_find_subgraph_ignores_nonedges():
    assert find_subgraph(named_graph("K3"), named_graph("P3")) is not None
    assert find_induced(named_graph("K3"), named_graph("P3")) is None


# --- catalog ----------------------------------------------------------------------------

def test_catalog_counts():
    counts = Counter(g.n for g in graph_catalog(6))
    assert [counts[m] for m in range(1, 7)] == [1, 2, 4, 11, 34, 156]


def test_catalog_members_are_canonical_and_sorted():
    cat = graph_catalog(4)
    keys = [(g.n, canonical_encoding(g)) for g in cat]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    for g in cat:
        assert g.encoding() == canonical_encoding(g)


def test_catalog_size_cap():
    with pytest.raises(ValueError):
        graph_catalog(7)


def test_connected_catalog_order():
    names = [graph_name(g) for g in connected_catalog(3)]
    assert names == ["K1", "K2", "P3", "K3"]


def test_canonical_hex_stable():
    assert canonical_hex(named_graph("K3")) == "7"
    assert canonical_hex(named_graph("A3")) == "0"


# --- universality scan -------------------------------------------------------------------

def test_scan_k5_missing_anticlique():
    level, missing = weak_universality_scan(named_graph("K5"), 3)
    assert level == 1
    assert is_isomorphic(missing, named_graph("A2"))


def test_scan_empty_graph():
    level, missing = weak_universality_scan(named_graph("A10"), 3)
    assert level == 1
    assert is_isomorphic(missing, named_graph("K2"))


def test_scan_cap():
    with pytest.raises(ValueError):
        weak_universality_scan(named_graph("K3"), 6)


# --- witness stats --------------------------------------------------------------------------

def test_witness_stats_k3():
    stats = rado_witness_stats(named_graph("K3"), 1)
    assert (stats.found, stats.total) == (3, 6)
    assert stats.fraction == 0.5


def test_witness_stats_anticlique4():
    stats = rado_witness_stats(named_graph("A4"), 1)
    assert (stats.found, stats.total) == (4, 8)
    assert stats.fraction == 0.5


def test_witness_stats_brute_force_cross_check():
    g = named_graph("P4")
    stats = rado_witness_stats(g, 2)
    found = total = 0
    verts = range(g.n)
    for a_size in range(3):
        for a in itertools.combinations(verts, a_size):
            rest = [v for v in verts if v not in a]
            for b_size in range(0, 2 - a_size + 1):
                if a_size + b_size == 0:
                    continue
                for b in itertools.combinations(rest, b_size):
                    total += 1
                    if any(all(g.has_edge(v, x) for x in a)
                           and not any(g.has_edge(v, x) for x in b)
                           for v in verts if v not in a and v not in b):
                        found += 1
    assert (stats.found, stats.total) == (found, total)


# --- text formats -----------------------------------------------------------------------------

def test_edge_list_round_trip():
    g = named_graph("C5")
    assert parse_edge_list(edge_list_text(g)) == g


def test_edge_list_header():
    text = edge_list_text(named_graph("A3"))
    assert text.splitlines()[0] == "n 3"


def test_dot_output():
    text = dot_text(named_graph("K2"))
    assert "0 -- 1;" in text and text.startswith("graph G {")


def test_named_graphs():
    assert named_graph("K3") == FiniteGraph.clique(3)
    assert named_graph("A4") == FiniteGraph.anticlique(4)
    assert named_graph("P5") == FiniteGraph.path(5)
    assert named_graph("C5") == FiniteGraph.cycle(5)
    with pytest.raises(ValueError):
        named_graph("X3")


def test_graph_names():
    assert graph_name(named_graph("P3")) == "P3"
    assert graph_name(named_graph("C4")) == "C4"
    assert graph_name(FiniteGraph(1)) == "K1"


# --- oracles ------------------------------------------------------------------------------------

def test_oracle_symmetry_and_validation():
    oracle = FiniteGraphOracle(named_graph("P3"))
    assert oracle.query(0, 1) == oracle.query(1, 0)
    with pytest.raises(ValueError):
        oracle.query(1, 1)
    with pytest.raises(ValueError):
        oracle.query(0, 5)


def test_complement_oracle_flips():
    inner = CallableOracle(lambda a, b: False, kind="anticlique")
    comp = ComplementOracle(inner)
    assert comp.query(0, 1) is True
    assert comp.kind == "complement:anticlique"


def test_oracle_window():
    oracle = FiniteGraphOracle(isolated_union(named_graph("K2"),
                                              named_graph("K2")))
    win = oracle.window([1, 2, 3])
    assert win == G(3, (1, 2))
