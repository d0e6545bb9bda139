import json
import logging

import pytest
from hypothesis import given, settings, strategies as st

from drgcodes import catalog, codes, geometry as geo
from drgcodes.graph import Graph, GraphError, antipodal_classes, line_graph

from oracles import adjacency_lists, brute_force_perfect_codes, clique_codes_nx, is_perfect_code

log = logging.getLogger(__name__)


def small_graph_names(limit=40):
    names = [e.name for e in catalog.all_rows() if e.has_builder and e.n <= limit]
    names += ["Shrikhande", "GQ(2,2)", "C_9", "C_10", "Q_3", "K*_{7,7}", "O_3", "DO_3"]
    return names


# ------------------------------------------------------------ verification

def test_verify_examples():
    assert codes.verify_perfect_1(catalog.build("C_6"), [0, 3])
    assert not codes.verify_perfect_1(catalog.build("Petersen"), [0])
    g = catalog.build("K*_{6,6}")
    assert codes.verify_perfect_1(g, [0, 6])  # vertex i and its unmatched partner n+i
    assert not codes.verify_perfect_1(g, [0, 7])
    with pytest.raises(codes.CodeError):
        codes.verify_perfect_1(g, [0, 12])
    with pytest.raises(codes.CodeError):
        codes.Code((1, 1), g)


def test_classify_found_code():
    g = catalog.build("O_4")
    rep = codes.classify_code(g, codes.search_perfect_1(g).witness)
    assert rep.is_perfect_1 and rep.is_independent and rep.completely_regular
    assert (rep.min_distance, rep.covering_radius, rep.size) == (3, 1, 7)
    assert rep.outer_distribution == [(0, 0, 4), (1, 3, 0)]


def test_one_element_code_is_completely_regular():
    g = catalog.build("Petersen")
    rep = codes.classify_code(g, [0])
    assert rep.completely_regular and rep.min_distance is None and rep.covering_radius == 2
    assert rep.outer_distribution == [(0, 0, 3), (1, 0, 2), (1, 2, 0)]


def test_adjacent_pair():
    g = catalog.build("Petersen")
    rep = codes.classify_code(g, [0, g.neighbors(0)[0]])
    assert rep.min_distance == 1 and not rep.is_perfect_1 and not rep.is_independent


def test_random_set_violation_is_reported():
    rep = codes.classify_code(catalog.build("O_4"), [0, 1, 2, 3, 4, 5, 6])
    assert not rep.is_perfect_1 and not rep.completely_regular
    assert set(rep.violation) == {"level", "vertex", "counts", "expected"}
    with pytest.raises(codes.CodeError):
        codes.classify_code(catalog.build("O_4"), [])


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["Petersen", "Q_4", "L(Petersen)", "Icosahedron", "C_9"]), st.data())
def test_classification_matches_oracle(name, data):
    g = catalog.build(name)
    code = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=6, unique=True))
    rep = codes.classify_code(g, code)
    adj = adjacency_lists(g)
    assert rep.is_perfect_1 == is_perfect_code(adj, code)
    assert rep.is_independent == all(v not in adj[u] for u in code for v in code)
    if rep.is_perfect_1:
        assert rep.completely_regular and rep.covering_radius == 1
        assert rep.min_distance is None or rep.min_distance == 3


# ------------------------------------------------------------ search

@pytest.mark.parametrize("name", small_graph_names(), ids=str)
def test_exact_cover_matches_brute_force(name):
    g = catalog.build(name)
    res = codes.search_perfect_1(g)
    oracle = brute_force_perfect_codes(g)
    assert (res.status == "yes") == bool(oracle)
    if res.witness:
        assert codes.verify_perfect_1(g, res.witness)


@pytest.mark.parametrize("name", ["IG(21,5,1)", "L(IG(13,4,1))", "GH(2,2) Graph 1", "GH(2,2) Graph 2"])
def test_clique_method_matches_networkx(name):
    g = catalog.build(name)
    assert g.distances.diameter == 3 and 40 < g.n <= 70
    size = g.n // (g.valency + 1) if g.n % (g.valency + 1) == 0 else None
    ours = codes.search_via_distance3_clique(g)
    theirs = clique_codes_nx(g, size) if size else None
    assert (ours.status == "yes") == (theirs is not None)
    assert (codes.search_perfect_1(g).status == "yes") == (theirs is not None)


def test_search_witnesses_pass_classification():
    for e in catalog.all_rows():
        if not e.has_builder or e.n > 300:
            continue
        g = catalog.build(e.name)
        res = codes.search_perfect_1(g)
        if res.witness is None:
            continue
        rep = codes.classify_code(g, res.witness)
        assert rep.is_perfect_1 and rep.completely_regular, e.name
        assert rep.covering_radius == 1 and rep.min_distance in (None, 3), e.name
        assert len(res.witness) == g.n // (g.valency + 1)


def test_diameter3_methods_agree():
    for e in catalog.all_rows():
        if not e.has_builder or e.d != 3 or e.n > 300:
            continue
        g = catalog.build(e.name)
        a = codes.search_via_distance3_clique(g)
        b = codes.search_perfect_1(g, mode="canonical")
        assert a.status == b.status, e.name
        if a.witness:
            assert len(a.witness) == len(b.witness)


def test_clique_method_needs_diameter3():
    with pytest.raises(GraphError):
        codes.search_via_distance3_clique(catalog.build("Coxeter"))


def test_divisibility_short_circuit():
    res = codes.search_perfect_1(catalog.build("Petersen"))
    assert res.status == "no" and res.nodes == 0 and "divide" in res.note


def test_irregular_graph_rejected():
    with pytest.raises(GraphError):
        codes.search_perfect_1(Graph.from_edges(3, [(0, 1), (1, 2)]))


@pytest.mark.parametrize("name", ["O_4", "Coxeter", "L(Tutte's 8-cage)", "Icosahedron", "C_12", "Sylvester"])
def test_canonical_is_lexicographic_minimum(name):
    g = catalog.build(name)
    every = list(codes.enumerate_perfect_codes(g))
    assert len(set(every)) == len(every)
    assert {len(c) for c in every} == {g.n // (g.valency + 1)}
    first = codes.search_perfect_1(g, mode="canonical")
    assert first.witness == min(every)
    assert codes.search_perfect_1(g, mode="canonical").witness == first.witness


def test_enumeration_matches_brute_force():
    for name in ["O_4", "Coxeter", "L(Petersen)", "C_9", "K*_{5,5}"]:
        g = catalog.build(name)
        assert sorted(codes.enumerate_perfect_codes(g)) == sorted(
            brute_force_perfect_codes(g, first_only=False)), name


def test_coxeter_code_is_a_coclique():
    g = catalog.build("Coxeter")
    w = codes.search_perfect_1(g, mode="canonical").witness
    assert len(w) == 7 and all(not g.has_edge(u, v) for u in w for v in w)


def test_budget_exhaustion_and_resume():
    g = catalog.build("GH(2,2) Graph 2")
    res = codes.search_perfect_1(g, budget=20)
    assert res.status == "unknown" and res.checkpoint["version"] == codes.CHECKPOINT_VERSION
    state = json.loads(json.dumps(res.checkpoint))
    resumed = codes.ExactCoverSearch.resume(g, state)
    assert resumed.run() is None
    full = codes.ExactCoverSearch(g)
    assert full.run() is None
    assert resumed.nodes == full.nodes


def test_resume_rejects_other_graph():
    g = catalog.build("GH(2,2) Graph 2")
    res = codes.search_perfect_1(g, budget=20)
    with pytest.raises(codes.CodeError):
        codes.ExactCoverSearch.resume(catalog.build("GH(2,2) Graph 1"), res.checkpoint)


def test_resume_finds_same_first_code():
    g = catalog.build("O_4")
    s = codes.ExactCoverSearch(g)
    with pytest.raises(codes.BudgetExhausted):
        s.run(3)
    resumed = codes.ExactCoverSearch.resume(g, s.checkpoint())
    assert resumed.run() == codes.ExactCoverSearch(g).run()


@pytest.mark.parametrize("name", ["O_4", "GH(2,2) Graph 2", "C_10"])
def test_parallel_verdict_matches_serial(name):
    g = catalog.build(name)
    serial = codes.search_perfect_1(g)
    parallel = codes.search_perfect_1(g, workers=2)
    assert serial.status == parallel.status
    if parallel.witness:
        assert codes.verify_perfect_1(g, parallel.witness)


def test_unknown_mode():
    with pytest.raises(ValueError):
        codes.search_perfect_1(catalog.build("O_4"), mode="fast")


# ------------------------------------------------------------ line graphs

def test_tutte_8_cage_line_graph_codes_are_flag_sets():
    base = catalog.build("Tutte's 8-cage")
    lg = line_graph(base)
    w2 = geo.symplectic_gq(2)
    every = list(codes.enumerate_perfect_codes(lg[0]))
    assert len(every) == 10
    for code in every:
        chk = codes.code_to_edge_set(lg, base, code)
        assert chk.valid and len(chk.edges) == 9
        flags = [(u, v - 15) for u, v in chk.edges]
        assert len({p for p, _ in flags}) == 9 and len({l for _, l in flags}) == 9
        assert codes.edge_set_to_code(lg, chk.edges) == code
        log.info("unused lines form a grid: %s", codes.unused_lines_form_grid(15, w2.lines, flags))


def test_line_graph_of_petersen_fiber():
    base = catalog.build("Petersen")
    lg = line_graph(base)
    fiber = antipodal_classes(lg[0])[0]
    chk = codes.code_to_edge_set(lg, base, fiber)
    assert chk.matching and chk.induced_one_regular and chk.vertex_cover and chk.valid


def test_edge_code_errors():
    base = catalog.build("Petersen")
    lg = line_graph(base)
    with pytest.raises(codes.CodeError):
        codes.code_to_edge_set(lg, base, [])
    with pytest.raises(codes.CodeError):
        codes.code_to_edge_set(lg, catalog.build("K_4"), [0])
    with pytest.raises(codes.CodeError):
        codes.check_edge_code(base, [(0, 0 + 9)] if not base.has_edge(0, 9) else [(0, 2)])
    with pytest.raises(codes.CodeError):
        codes.edge_set_to_code(lg, [(0, 99)])


def test_edge_code_check_failures():
    base = catalog.build("C_6")
    chk = codes.check_edge_code(base, [(0, 1), (1, 2)])
    assert not chk.matching and not chk.valid
    chk = codes.check_edge_code(base, [(0, 1), (2, 3)])
    assert chk.matching and not chk.induced_one_regular


# ------------------------------------------------------------ packing

def test_packing_star():
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert codes.max_disjoint_closed_edge_neighborhoods(star).value == 1


def _double(q):
    return geo.incidence_graph(geo.double_geometry(geo.projective_plane(q)))


@pytest.mark.parametrize("q,edge_value,vertex_value", [(2, 10, 7), (3, 20, 13)])
def test_packing_in_doubled_planes(q, edge_value, vertex_value):
    # values cross-checked against networkx maximum cliques
    g = _double(q)
    res = codes.max_disjoint_closed_edge_neighborhoods(g)
    assert res.exact and res.value == edge_value
    nbhd = codes._edge_closed_neighbourhoods(g, res.edges)
    assert all(not nbhd[i] & nbhd[j] for i in range(len(nbhd)) for j in range(i))
    strict = codes.max_disjoint_closed_edge_neighborhoods(g, reading="vertex")
    assert strict.exact and strict.value == vertex_value == q * q + q + 1


def test_packing_budget_gives_bracket():
    res = codes.max_disjoint_closed_edge_neighborhoods(_double(3), budget=50)
    assert not res.exact and res.value <= res.upper


def test_packing_unknown_reading():
    with pytest.raises(ValueError):
        codes.max_disjoint_closed_edge_neighborhoods(_double(2), reading="other")


# ------------------------------------------------------------ antipodal lifting

def test_lift_o4_code_to_do4():
    do4 = catalog.build("DO_4")
    fibers = antipodal_classes(do4)
    o4_code = codes.search_perfect_1(catalog.build("O_4")).witness
    lifted = codes.antipodal_code_lift(do4, fibers, o4_code)
    assert len(lifted) == 14 and codes.verify_perfect_1(do4, lifted)


@pytest.mark.parametrize("name,size", [("L(Petersen)", 3), ("Icosahedron", 2), ("Klein", 3)])
def test_lift_single_vertex_of_complete_fold(name, size):
    g = catalog.build(name)
    code = codes.antipodal_code_lift(g, antipodal_classes(g), [0])
    assert len(code) == size and codes.verify_perfect_1(g, code)


def test_lift_rejects_bad_folded_code():
    g = catalog.build("DO_4")
    with pytest.raises(codes.CodeError):
        codes.antipodal_code_lift(g, antipodal_classes(g), [0, 1])


# ------------------------------------------------------------ extended search

def test_extended_search_guards_input():
    with pytest.raises(GraphError):
        codes.ghx33_nonexistence_search(catalog.build("O_4"), budget=10)


def test_extended_search_checkpoints(tmp_path):
    lg = catalog.build("L(IG(GH(3,3)))")
    path = tmp_path / "state.json"
    res = codes.ghx33_nonexistence_search(lg, budget=2000, checkpoint_path=path, slice_nodes=500)
    assert res.status == "unknown" and "208" in res.note
    state = json.loads(path.read_text())
    assert state["version"] == codes.CHECKPOINT_VERSION
    more = codes.ghx33_nonexistence_search(lg, budget=1000, checkpoint=state)
    assert more.status == "unknown" and more.nodes > res.nodes


@pytest.mark.extended
def test_extended_refutation_runs_to_completion():
    lg = catalog.build("L(IG(GH(3,3)))")
    res = codes.ghx33_nonexistence_search(lg)
    assert res.status == "no"
