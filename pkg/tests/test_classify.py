import itertools

import pytest
from hypothesis import given, settings, strategies as st

from mmsnp.classify import (RealizednessOracle, SearchCertificate, Subfactor, TableSolver, classify,
                            classify_precoloured, cyclic_search, is_cyclic, is_idempotent, is_realized, is_siggers,
                            prepare_component, realized_idempotency_check, realized_tables, siggers_search,
                            trivial_subfactor_search)
from mmsnp.core import BudgetExceeded, ColourFunction, MMSNPError
from mmsnp.normalform import normalize, obstruction_set
from mmsnp.textio import parse_sentence

from oracles import product_nogoods, product_realized
from support import load


def _pre(name):
    return prepare_component(load(name))


def test_subfactor_validation():
    Subfactor(("a", "b"), ("a",), ("b",))
    with pytest.raises(MMSNPError):
        Subfactor(("a", "b"), ("a", "b"), ())
    with pytest.raises(MMSNPError):
        Subfactor(("a", "b"), ("a",), ("a",))
    with pytest.raises(MMSNPError):
        Subfactor(("a", "b", "c"), ("a",), ("b",))


def test_searches_require_precoloured_input():
    with pytest.raises(MMSNPError, match="precoloured"):
        siggers_search(normalize(load("twocol")))


def test_twocol_siggers_witness():
    p = _pre("twocol")
    cert = SearchCertificate()
    h = siggers_search(p, certificate=cert)
    assert h is not None and cert.found == h and not cert.unsat
    assert is_siggers(h) and is_idempotent(h)
    assert is_realized(h, obstruction_set(p)) is None
    assert trivial_subfactor_search(p) is None


def test_threecol_trivial_subfactor():
    p = _pre("threecol")
    cert = SearchCertificate()
    assert siggers_search(p, certificate=cert) is None
    assert cert.unsat and cert.nogoods
    sf = trivial_subfactor_search(p)
    assert sf == Subfactor(("M1", "M2"), ("M1",), ("M2",))


def test_monotri_is_hard():
    p = _pre("monotri")
    assert cyclic_search(p, 3) is None
    assert classify_precoloured(p).verdict == "NP-complete"


def test_cyclic_witness_is_cyclic():
    h = cyclic_search(_pre("twocol"), 3)
    assert h is not None and is_cyclic(h) and is_idempotent(h)
    with pytest.raises(MMSNPError):
        cyclic_search(_pre("twocol"), 1)


def test_unrealized_witness_recombines_to_obstruction():
    p = _pre("twocol")
    meet = ColourFunction.from_callable(p.colours, 2, lambda x, y: x if x == y else "M1")
    w = is_realized(meet, obstruction_set(p))
    assert w is not None
    assert w.recombined(meet) == w.obstruction.colouring


def test_realized_tables_match_is_realized():
    p = _pre("twocol")
    oracle = RealizednessOracle(obstruction_set(p))
    listed = {h.table for h in realized_tables(p, 2, oracle)}
    brute = {vals for vals in itertools.product(range(2), repeat=4)
             if is_realized(ColourFunction(p.colours, 2, vals), oracle) is None}
    assert listed == brute
    assert listed == {(0, 0, 1, 1), (0, 1, 0, 1)}


def test_realized_tables_agree_with_products_on_three_colours():
    # every obstruction has at most two elements, so two-element factors suffice
    p = _pre("threecol")
    nogoods = product_nogoods(p, 2)
    cs = p.colours
    listed = {h.table for h in realized_tables(p, 2)}
    for vals in itertools.product(range(3), repeat=9):
        table = {(cs[a], cs[b]): cs[vals[3 * a + b]] for a in range(3) for b in range(3)}
        assert (vals in listed) == product_realized(table, nogoods), vals
    assert len(listed) == 2


def test_idempotency_check_limits():
    assert realized_idempotency_check(_pre("threecol"))
    four = parse_sentence("""
        signature { E/2 } colors { A, B, C, D }
        forbid { -A(x), -B(x), -C(x), -D(x) }
        forbid { A(x), B(x) } forbid { A(x), C(x) } forbid { A(x), D(x) }
        forbid { B(x), C(x) } forbid { B(x), D(x) } forbid { C(x), D(x) }
        forbid { E(x,x), A(x) } forbid { E(x,x), B(x) } forbid { E(x,x), C(x) } forbid { E(x,x), D(x) }
        forbid { E(x,y), A(x), A(y) } forbid { E(x,y), B(x), B(y) }
        forbid { E(x,y), C(x), C(y) } forbid { E(x,y), D(x), D(y) }
    """)
    with pytest.raises(BudgetExceeded):
        realized_idempotency_check(prepare_component(four))


def test_table_solver_respects_nogoods_and_merges():
    s = TableSolver(2, 2, merges=[(1, 2)], restrict={0: [0], 3: [1]})
    assert s.add_nogood([(1, 0)])
    assert not s.add_nogood([(2, 0)])
    assert s.solve() == [0, 1, 1, 1]
    s.add_nogood([(1, 1)])
    assert s.solve() is None


def test_table_solver_cell_budget():
    with pytest.raises(BudgetExceeded):
        TableSolver(5, 9)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 1)), min_size=1, max_size=3), max_size=12))
def test_table_solver_matches_brute_force(nogoods):
    s = TableSolver(2, 2)
    for ng in nogoods:
        s.add_nogood(ng)
    got = s.solve()

    def ok(t):
        return all(any(t[c] != v for c, v in ng) for ng in nogoods)

    exists = any(ok(t) for t in itertools.product(range(2), repeat=4))
    assert (got is not None) == exists
    if got is not None:
        assert ok(got)


def test_classify_reports():
    report = classify(load("threecol"))
    assert report.overall == "NP-complete" and report.caveats == ()
    stats = report.components[0].stats
    assert stats["colours"] == 3 and stats["cegar_iterations"] >= 1


def test_classify_disconnected_sentence():
    # the loop-free disjunct contains the 3-colouring disjunct, which is pruned
    phi = parse_sentence("""
        signature { E/2 } colors { M1, M2, M3 }
        forbid { -M1(x), -M2(x), -M3(x) }
        forbid { M1(x), M2(x) } forbid { M1(x), M3(x) } forbid { M2(x), M3(x) }
        forbid { E(x,y), M1(x), M1(y), E(z,z) }
        forbid { E(x,y), M2(x), M2(y) }
        forbid { E(x,y), M3(x), M3(y) }
    """)
    report = classify(phi)
    assert len(report.components) == 1
    assert report.overall == "P" and report.caveats == ()


def test_classify_keeps_incomparable_components_with_caveat():
    # 3-colourable or free of transitive triangles; neither implies the other
    phi = parse_sentence("""
        signature { E/2 } colors { M1, M2, M3 }
        forbid { -M1(x), -M2(x), -M3(x) }
        forbid { M1(x), M2(x) } forbid { M1(x), M3(x) } forbid { M2(x), M3(x) }
        forbid { E(x,y), M1(x), M1(y), E(u,v), E(v,w), E(u,w) }
        forbid { E(x,y), M2(x), M2(y), E(u,v), E(v,w), E(u,w) }
        forbid { E(x,y), M3(x), M3(y), E(u,v), E(v,w), E(u,w) }
    """)
    report = classify(phi)
    assert sorted(c.verdict for c in report.components) == ["NP-complete", "P"]
    assert report.overall == "NP-complete"
    assert report.caveats
