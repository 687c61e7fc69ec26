import itertools

import networkx as nx
import pytest
from hypothesis import given

from jacstab.families import banana, complete, cycle, dumbbell, gsym, path, rose, theta
from jacstab.graphs import (GraphError, automorphisms, contract, cut_partition, find_isomorphism,
                            first_betti, graph_genus, is_connected, isomorphisms, make_graph,
                            spanning_subgraphs, spanning_trees, subdivide, vertex_isomorphisms)

from strategies import multigraphs


def to_nx(g, kept=None):
    m = nx.MultiGraph()
    m.add_nodes_from(g.vertex_ids)
    for e in g.edges:
        if kept is None or e.id in kept:
            m.add_edge(e.u, e.v, key=e.id)
    return m


# -- construction ----------------------------------------------------------------

def test_rejects_dangling_endpoint():
    with pytest.raises(GraphError, match="e1"):
        make_graph({"a": 0}, [("e1", "a", "b")])


def test_rejects_duplicate_ids_and_bad_legs():
    with pytest.raises(GraphError):
        make_graph({"a": 0}, [("e1", "a", "a"), ("e1", "a", "a")])
    with pytest.raises(GraphError):
        make_graph({"a": 0}, [], legs={2: "a"})
    with pytest.raises(GraphError):
        make_graph({"a": -1})


# -- first Betti number and genus ------------------------------------------------------

def test_first_betti_examples():
    assert first_betti(make_graph({"v": 0})) == 0
    assert first_betti(theta()) == 2
    assert first_betti(cycle(4)) == 1


def test_graph_genus_examples():
    assert graph_genus(make_graph({"v": 2})) == 2
    assert graph_genus(theta()) == 2
    assert graph_genus(dumbbell()) == 2
    with pytest.raises(GraphError):
        graph_genus(make_graph({"a": 0, "b": 0}))


@given(multigraphs(connected=False))
def test_first_betti_matches_networkx(g):
    m = to_nx(g)
    assert first_betti(g) == m.number_of_edges() - m.number_of_nodes() + nx.number_connected_components(m)


# -- spanning subgraphs ---------------------------------------------------------------

def test_spanning_subgraph_counts():
    assert len(spanning_subgraphs(banana(2), connected_only=True)) == 3
    assert len(spanning_subgraphs(rose(1), connected_only=True)) == 2
    # 1 full + 3 two-edge + 3 one-edge; only the edgeless subset is disconnected
    assert len(spanning_subgraphs(theta(), connected_only=True)) == 7
    assert len(spanning_subgraphs(theta())) == 8


def test_spanning_subgraph_order_is_lexicographic():
    keys = [sorted(s.kept_edges) for s in spanning_subgraphs(theta())]
    assert keys == sorted(keys)


@given(multigraphs(connected=False))
def test_connectivity_matches_networkx(g):
    for sub in spanning_subgraphs(g):
        assert is_connected(g, sub.kept_edges) == nx.is_connected(to_nx(g, sub.kept_edges))


@given(multigraphs())
def test_spanning_trees_match_networkx_count(g):
    assert len(spanning_trees(g)) == round(nx.number_of_spanning_trees(to_nx(g)))


# -- cuts ---------------------------------------------------------------------

def test_cut_partition_examples():
    assert cut_partition(theta(), {"v1"}) == (frozenset(), frozenset(), frozenset({"e1", "e2", "e3"}))
    assert cut_partition(dumbbell(), {"v1"}) == (frozenset({"e1"}), frozenset({"e3"}), frozenset({"e2"}))
    inside, outside, cross = cut_partition(cycle(4), {"v1", "v2"})
    assert (len(inside), len(outside), len(cross)) == (1, 1, 2)
    for bad in (set(), {"v1", "v2"}):
        with pytest.raises(GraphError):
            cut_partition(theta(), bad)


@given(multigraphs(connected=False))
def test_cut_partition_partitions_edges(g):
    vids = g.vertex_ids
    for r in range(1, len(vids)):
        for vs in itertools.combinations(vids, r):
            a, b, c = cut_partition(g, vs)
            assert a | b | c == set(g.edge_ids)
            assert not (a & b or a & c or b & c)


# -- subdivision ------------------------------------------------------------------

def test_subdivide_banana_gives_four_cycle():
    s = subdivide(banana(2), {"e1": 1, "e2": 1})
    assert len(s.result.vertices) == 4 and len(s.result.edges) == 4
    assert find_isomorphism(s.result, cycle(4)) is not None
    assert sum(s.is_exceptional(v) for v in s.result.vertex_ids) == 2


def test_subdivide_loop_gives_triangle():
    s = subdivide(rose(1), {"e1": 2})
    assert find_isomorphism(s.result, cycle(3)) is not None


@given(multigraphs(genera=True))
def test_subdivide_counts_and_zero_map(g):
    m = {e: i % 3 for i, e in enumerate(g.edge_ids)}
    s = subdivide(g, m)
    assert len(s.result.vertices) == len(g.vertices) + sum(m.values())
    assert len(s.result.edges) == len(g.edges) + sum(m.values())
    assert find_isomorphism(subdivide(g, {e: 0 for e in g.edge_ids}).result, g) is not None
    assert len(subdivide(g, {e: 1 for e in g.edge_ids}).result.edges) == 2 * len(g.edges)


# -- contraction ----------------------------------------------------------------

def test_contract_examples():
    h, f = contract(banana(2), {"e1"})
    assert len(h.vertices) == 1 and h.vertices[0].genus == 0
    assert len(h.edges) == 1 and h.edges[0].is_loop
    h, f = contract(theta(), ())
    assert h == theta() and f.is_isomorphism
    h, _ = contract(cycle(3), {"e1", "e2"})
    assert len(h.vertices) == 1 and len(h.edges) == 1 and h.edges[0].is_loop


def test_contract_loop_raises_genus():
    h, _ = contract(rose(2), {"e1"})
    assert h.vertices[0].genus == 1 and len(h.edges) == 1


@given(multigraphs(genera=True))
def test_contraction_preserves_genus_and_betti(g):
    for r in range(len(g.edges) + 1):
        for sub in itertools.islice(itertools.combinations(g.edge_ids, r), 4):
            h, f = contract(g, sub)
            assert graph_genus(h) == graph_genus(g)
            b1_sub = len(sub) - len(g.vertices) + len(_components(g, sub))
            assert first_betti(g) == first_betti(h) + b1_sub
            for w in h.vertices:
                pre = [v for v in g.vertex_ids if f.vmap[v] == w.id]
                inner = [e for e in sub if f.vmap[g.edge(e).u] == w.id]
                assert w.genus == sum(g.genus_of(v) for v in pre) + len(inner) - len(pre) + 1


def _components(g, kept):
    from jacstab.graphs import connected_components
    return connected_components(g, kept)


# -- isomorphism ----------------------------------------------------------------

def test_isomorphism_examples():
    assert len(list(vertex_isomorphisms(theta(), theta()))) == 2
    assert len(isomorphisms(theta(), theta())) == 2 * 6
    vine = banana(1, genera=(1, 2))
    assert [dict(m) for m in vertex_isomorphisms(vine, vine)] == [{"v1": "v1", "v2": "v2"}]
    assert isomorphisms(banana(2), path(3)) == []


def test_legs_block_automorphisms():
    g = make_graph({"a": 0, "b": 0}, [("a", "b"), ("a", "b")], legs={1: "a", 2: "b"})
    assert len(list(vertex_isomorphisms(g, g))) == 1


@given(multigraphs(max_vertices=4, max_edges=5))
def test_isomorphism_agrees_with_networkx(g):
    perm = list(reversed(g.vertex_ids))
    ren = dict(zip(g.vertex_ids, perm))
    h = make_graph({ren[v.id]: v.genus for v in g.vertices},
                   [(e.id, ren[e.u], ren[e.v]) for e in g.edges])
    assert find_isomorphism(g, h) is not None
    other = complete(4) if len(g.vertices) == 4 else theta()
    assert (find_isomorphism(g, other) is not None) == nx.is_isomorphic(to_nx(g), to_nx(other))


@given(multigraphs(max_vertices=3, max_edges=4))
def test_automorphism_count_matches_networkx(g):
    simple = nx.Graph(to_nx(g))
    if simple.number_of_edges() == to_nx(g).number_of_edges() and not any(e.is_loop for e in g.edges):
        matcher = nx.algorithms.isomorphism.GraphMatcher(simple, simple)
        assert len(automorphisms(g)) == sum(1 for _ in matcher.isomorphisms_iter())


def test_gsym_shapes():
    g2, cyc2 = gsym(2)
    assert find_isomorphism(g2, theta()) is not None and len(cyc2) == 2
    g3, cyc3 = gsym(3)
    assert len(g3.vertices) == 4 and len(g3.edges) == 6
    assert all(g3.valence(v) == 3 for v in g3.vertex_ids)
    assert find_isomorphism(g3, complete(4)) is not None
    for g in range(2, 6):
        assert graph_genus(gsym(g)[0]) == g
    with pytest.raises(GraphError):
        gsym(1)
