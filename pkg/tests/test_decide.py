import pytest

from drgcodes import catalog, codes
from drgcodes import decide as D
from drgcodes.drg import IntersectionArray, k_sequence

A = IntersectionArray.parse


def _run(name, **kw):
    e = catalog.entry(name)
    g = catalog.build(e.name) if e.has_builder and not e.desk_infeasible else None
    return D.decide(e, g, **kw)


def _outcomes(v):
    return {s.rule: s.outcome for s in v.trace}


# ------------------------------------------------------------ single rules

@pytest.mark.parametrize("n", [2, 4, 8, 12])
def test_complete_graph_rule(n):
    k = n - 1
    v = D.decide(A(f"{k};1"), catalog.build(f"K_{n}"))
    assert (v.status, v.rule, v.witness) == ("yes", "R0", (0,))


def test_divisibility_rule_message():
    v = D.decide(A("3,2;1,1"))
    assert v.status == "no" and v.rule == "R1"
    assert "does not divide n = 10" in v.reason and "5/2" in v.reason


def test_diameter_two_rule_always_fires():
    for e in catalog.all_rows():
        if e.d == 2:
            assert _outcomes(D.decide(e))["R2"] == "no", e.name
    a = A("4,2;1,2")
    assert D._r2(a, {})[0] == "no"


def test_eigenvalue_rule():
    v = D.decide(A("4,3,3,3;1,1,1,4"))
    assert (v.status, v.rule) == ("no", "R3")
    assert _outcomes(D.decide(A("4,3,3;1,1,2")))["R3"] == "pass"


@pytest.mark.parametrize("name,size", [("L(Petersen)", 3), ("Icosahedron", 2), ("Klein", 3)])
def test_antipodal_diameter_three(name, size):
    v = _run(name)
    assert (v.status, v.rule) == ("yes", "R4")
    assert len(v.witness) == size and codes.verify_perfect_1(catalog.build(name), v.witness)


def test_antipodal_diameter_four_five():
    assert _outcomes(_run("Desargues"))["R5"] == "no"
    assert _outcomes(_run("Dodecahedron"))["R5"] == "no"
    assert _run("Desargues").rule == "R5"


@pytest.mark.parametrize("k", [3, 4, 5, 6, 9])
def test_bipartite_diameter_three_yes(k):
    a = IntersectionArray((k, k - 1, 1), (1, k - 1, k))
    g = catalog.build(f"K*_{{{k + 1},{k + 1}}}")
    v = D.decide(a, g)
    assert v.status == "yes" and _outcomes(v)["R6"] == "yes"
    assert len(v.witness) == 2 and g.distances.dist[v.witness[0], v.witness[1]] == 3


def test_bipartite_diameter_three_no():
    assert _outcomes(D.decide(A("4,3,3;1,1,4")))["R6"] == "no"
    assert _outcomes(D.decide(A("5,4,3;1,2,5")))["R6"] == "no"


def test_bipartite_diameter_four():
    for arr in ["4,3,2,1;1,2,3,4", "4,3,3,3;1,1,1,4", "3,2,2,1;1,1,2,3"]:
        assert _outcomes(D.decide(A(arr)))["R7"] == "no"


def test_doubled_odd_rule():
    v = _run("DO_4")
    assert (v.status, v.rule) == ("yes", "R8") and len(v.witness) == 14
    assert codes.verify_perfect_1(catalog.build("DO_4"), v.witness)
    assert _run("DO_5").status == "no"
    # without a graph the folded verdict still comes from the arrays alone
    assert D.decide(catalog.entry("DO_5").array).status == "no"
    assert D.decide(catalog.entry("DO_4").array).status == "unknown"


def test_line_graph_rule():
    assert _outcomes(_run("L(Heawood)"))["R9"] == "no"
    assert _outcomes(_run("L(Tutte's 8-cage)"))["R9"] == "pass"
    assert _outcomes(D.decide(A("4,2,2,2;1,1,1,2")))["R9"] == "n/a"
    v = D.decide(A("4,2,2,2;1,1,1,2"), base_array=A("3,2,2,2;1,1,1,3"))
    assert _outcomes(v)["R9"] == "pass" and v.status == "unknown"


# ------------------------------------------------------------ search stage

@pytest.mark.parametrize("name,size", [("Coxeter", 7), ("O_4", 7), ("L(Tutte's 8-cage)", 9),
                                       ("Sylvester", 6), ("GH(2,2) Graph 1", 9)])
def test_search_rows(name, size):
    v = _run(name)
    assert (v.status, v.rule, len(v.witness)) == ("yes", "R10", size)
    assert codes.verify_perfect_1(catalog.build(name), v.witness)
    assert v.trace[-1].rule == "R10" and v.trace[-1].outcome == "yes"


def test_search_no():
    v = _run("GH(2,2) Graph 2")
    assert (v.status, v.rule) == ("no", "R10") and v.witness is None and v.nodes > 0


@pytest.mark.parametrize("method", ["clique", "exact-cover", "auto"])
def test_methods_agree(method):
    for name in ["GH(2,2) Graph 1", "GH(2,2) Graph 2", "Sylvester"]:
        assert _run(name, method=method).status == catalog.entry(name).expected_verdict


def test_unknown_method():
    with pytest.raises(ValueError):
        _run("Coxeter", method="magic")


def test_canonical_witness():
    g = catalog.build("O_4")
    v = D.decide(catalog.entry("O_4"), g, canonical=True)
    assert v.witness == min(codes.enumerate_perfect_codes(g))


def test_budget_exhaustion_gives_unknown():
    v = _run("GH(2,2) Graph 2", budget=5, method="exact-cover")
    assert v.status == "unknown" and v.budget_exhausted and v.rule == "R10"


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("DRG_BUDGET", "5")
    assert D.default_budget() == 5
    assert _run("GH(2,2) Graph 2", method="exact-cover").status == "unknown"
    monkeypatch.setenv("DRG_BUDGET", "lots")
    with pytest.raises(ValueError):
        D.default_budget()
    monkeypatch.setenv("DRG_BUDGET", "0")
    with pytest.raises(ValueError):
        D.default_budget()
    monkeypatch.delenv("DRG_BUDGET")
    assert D.default_budget() == D.DEFAULT_BUDGET


def test_user_array_without_graph():
    v = D.decide(A("4,3,3;1,1,2"))
    assert v.status == "unknown" and v.rule == "R10" and v.name == "{4,3,3;1,1,2}"


def test_graph_size_mismatch():
    with pytest.raises(ValueError):
        D.decide(A("3,2;1,1"), catalog.build("Heawood"))
    with pytest.raises(TypeError):
        D.decide("3,2;1,1")


def test_primitive_diameter_three_logs_distance3_check():
    v = _run("Sylvester")
    info = [s for s in v.trace if s.rule == "D3Lambda"]
    assert len(info) == 1 and info[0].outcome == "info"


# ------------------------------------------------------------ published row

def test_desk_infeasible_row_is_published():
    v = _run("L(IG(GH(3,3)))")
    assert v.status == "no" and v.provenance == "published"
    assert "not independently verified" in v.reason
    assert _outcomes(v)["R9"] == "pass"


# ------------------------------------------------------------ trace contents

def test_trace_lists_every_array_rule():
    v = _run("Dodecahedron")
    assert [s.rule for s in v.trace] == [r for r, _ in D.ARRAY_RULES]
    assert v.rule == "R3" and v.fired(D.REASON_RULES["AntipodalD45"])
    d = v.to_dict()
    assert d["published_reason"] == "AntipodalD45" and len(d["trace"]) == len(D.ARRAY_RULES)


def test_every_reason_tag_has_rules():
    tags = {e.expected_reason for e in catalog.all_rows()}
    assert tags <= set(D.REASON_RULES)
    assert set().union(*D.REASON_RULES.values()) <= set(D.RULE_NAMES)


def test_rules_are_sound_on_catalog():
    # any definite array rule agrees with the expected verdict
    for e in catalog.all_rows():
        v = D.decide(e)
        for s in v.trace:
            if s.outcome in ("yes", "no") and s.rule != "R10":
                assert s.outcome == e.expected_verdict, (e.name, s.rule)


def test_code_size_matches_k_sequence():
    for name in ["Coxeter", "O_4", "Sylvester", "DO_4"]:
        e = catalog.entry(name)
        v = _run(name)
        assert len(v.witness) * (e.k + 1) == k_sequence(e.array).n
        assert e.array.d == e.d
