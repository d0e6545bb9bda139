import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drgcodes import catalog
from drgcodes.graph import (
    DisconnectedGraphError,
    Graph,
    GraphError,
    antipodal_classes,
    bfs_distances,
    bipartite_half,
    complement,
    components,
    distance_i_graph,
    folded_graph,
    from_json,
    from_text,
    induced_subgraph,
    is_connected,
    line_graph,
    to_json,
    to_text,
)
from drgcodes.drg import verify_intersection_array

from oracles import all_distances, girth_nx, to_nx


@st.composite
def connected_graphs(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    # random spanning tree plus extra edges
    edges = set()
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.add((u, v))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n))
    edges.update(extra)
    return Graph.from_edges(n, sorted(edges))


def test_rejects_loops_and_asymmetry():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0b00))
    with pytest.raises(GraphError):
        Graph(2, (0b100, 0b0))


def test_bfs_rows():
    assert bfs_distances(catalog.build("K_4"), 0) == [0, 1, 1, 1]
    assert bfs_distances(catalog.build("C_6"), 0) == [0, 1, 2, 3, 2, 1]
    row = bfs_distances(catalog.build("Petersen"), 0)
    assert sorted(row) == [0, 1, 1, 1, 2, 2, 2, 2, 2, 2]


def test_bfs_disconnected_names_vertex():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError) as exc:
        bfs_distances(g, 0)
    assert "2" in str(exc.value)
    with pytest.raises(DisconnectedGraphError):
        g.distances


def test_bfs_out_of_range():
    with pytest.raises(GraphError):
        bfs_distances(catalog.build("K_4"), 4)


@pytest.mark.parametrize("name,diameter,girth", [
    ("Heawood", 3, 6), ("Coxeter", 4, 7), ("K_5", 1, 3), ("Petersen", 2, 5),
    ("Tutte's 12-cage", 6, 12), ("Foster", 8, 10),
])
def test_diameter_and_girth(name, diameter, girth):
    dt = catalog.build(name).distances
    assert (dt.diameter, dt.girth) == (diameter, girth)


def test_forest_girth_is_infinite():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    assert g.distances.girth == math.inf


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_distances_match_reference(g):
    ref = np.array(all_distances(g))
    dt = g.distances
    assert (dt.dist == ref).all()
    assert dt.diameter == ref.max()
    assert (dt.dist == dt.dist.T).all()
    # triangle inequality
    d = dt.dist.astype(int)
    assert (d[:, :, None] <= d[:, None, :] + d.T[None, :, :]).all()
    expected_girth = girth_nx(g)
    assert dt.girth == expected_girth


@settings(max_examples=40, deadline=None)
@given(connected_graphs())
def test_line_graph_matches_networkx(g):
    lg, emap = line_graph(g)
    assert emap == g.edges()
    ref = nx.line_graph(to_nx(g))
    assert lg.num_edges == ref.number_of_edges()
    for i, e in enumerate(emap):
        for j, f in enumerate(emap):
            assert lg.has_edge(i, j) == (i != j and bool(set(e) & set(f)))


@pytest.mark.parametrize("base,n", [("Petersen", 15), ("Tutte's 8-cage", 45), ("IG(GH(3,3))", 1456)])
def test_line_graph_sizes(base, n):
    g = catalog.build(base)
    lg, _ = line_graph(g)
    k = g.valency
    assert lg.n == n == g.n * k // 2
    assert lg.valency == 2 * k - 2


def test_line_graph_of_edgeless_graph():
    with pytest.raises(GraphError):
        line_graph(Graph.from_edges(2, []))


def test_distance_i_graph():
    g = catalog.build("Sylvester")
    assert distance_i_graph(g, 1) == g
    d3 = distance_i_graph(g, 3)
    # K_3 = 1*5*4*2 / (1*1*4) = 10
    assert d3.n == 36 and d3.valency == 10
    assert distance_i_graph(catalog.build("O_4"), 3).valency == 18
    with pytest.raises(GraphError):
        distance_i_graph(g, 4)
    with pytest.raises(GraphError):
        distance_i_graph(g, 0)


@pytest.mark.parametrize("name,count,size", [("L(Petersen)", 5, 3), ("Icosahedron", 6, 2), ("DO_4", 35, 2)])
def test_antipodal_classes(name, count, size):
    fibers = antipodal_classes(catalog.build(name))
    assert len(fibers) == count and {len(f) for f in fibers} == {size}
    assert sorted(v for f in fibers for v in f) == list(range(count * size))


def test_primitive_graph_has_no_fibers():
    assert antipodal_classes(catalog.build("Petersen")) is None
    assert antipodal_classes(catalog.build("Sylvester")) is None


@pytest.mark.parametrize("name,folded", [
    ("L(Petersen)", "{4;1}"), ("Icosahedron", "{5;1}"), ("DO_4", "{4,3,3;1,1,2}"), ("Q_5", "{5,4;1,2}"),
])
def test_folding(name, folded):
    g = catalog.build(name)
    f = folded_graph(g, antipodal_classes(g))
    assert str(verify_intersection_array(f)) == folded


def test_fold_do4_is_o4_labelling():
    # colex ordering makes the fold of DO_4 literally equal to O_4
    g = catalog.build("DO_4")
    assert folded_graph(g, antipodal_classes(g)) == catalog.build("O_4")


def test_folded_graph_rejects_bad_partition():
    g = catalog.build("C_6")
    with pytest.raises(GraphError):
        folded_graph(g, [[0, 1], [2, 3], [4, 5]])
    with pytest.raises(GraphError):
        folded_graph(g, [[0, 3], [1, 4]])


def test_bipartite_half():
    assert bipartite_half(catalog.build("C_6"), 0) == catalog.build("K_3")
    cage = catalog.build("Tutte's 12-cage")
    for side in (0, 1):
        h = bipartite_half(cage, side)
        assert h.n == 63 and h.distances.diameter == 3
        assert str(verify_intersection_array(h)) == "{6,4,4;1,1,3}"
    with pytest.raises(GraphError):
        bipartite_half(catalog.build("Petersen"), 0)


def test_subgraph_connectivity_complement():
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not is_connected(two_triangles)
    assert components(two_triangles) == [[0, 1, 2], [3, 4, 5]]
    assert complement(catalog.build("T(6)")).valency == 6
    sub = induced_subgraph(catalog.build("Petersen"), range(5))
    assert sub.n == 5
    with pytest.raises(GraphError):
        induced_subgraph(two_triangles, [])


@settings(max_examples=30, deadline=None)
@given(connected_graphs())
def test_complement_involution(g):
    assert complement(complement(g)) == g
    assert g.num_edges + complement(g).num_edges == g.n * (g.n - 1) // 2


@settings(max_examples=30, deadline=None)
@given(connected_graphs())
def test_file_round_trips(g):
    assert from_text(to_text(g)) == g
    assert from_json(to_json(g)) == g


def test_text_format_errors():
    with pytest.raises(GraphError):
        from_text("3\n0 1\n")
    with pytest.raises(GraphError):
        from_text("3 2\n0 1\n")
    with pytest.raises(GraphError):
        from_text("3 1\n0 5\n")


def test_sphere_sizes_match_k_sequence():
    from drgcodes.drg import k_sequence

    for e in catalog.all_rows():
        if not e.has_builder or e.n > 300:
            continue
        g = catalog.build(e.name)
        K = k_sequence(e.array).K
        counts = np.array([[np.count_nonzero(g.distances.dist[v] == i) for i in range(e.d + 1)]
                           for v in range(g.n)])
        assert (counts == np.array(K)).all(), e.name
