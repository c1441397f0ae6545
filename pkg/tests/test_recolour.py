import random

import pytest
from hypothesis import given, settings, strategies as st

from mmsnp.core import MMSNPError, RecolouringMap
from mmsnp.normalform import is_normal_form, normalize, obstruction_set
from mmsnp.recolour import (contains, find_counterexample, find_recolouring, is_recolouring,
                            is_strong_normal_form, proper_self_recolouring, recolouring_witness, remove_colours,
                            strong_normal_form)
from mmsnp.textio import parse_sentence

from oracles import all_digraphs, find_counterexample as oracle_counterexample, raw_recolouring_violation, \
    satisfies
from randgen import random_normal_form
from support import load, same_up_to_renaming

SMALL = list(all_digraphs(3))


def _equivalent_small(a, b):
    return all(satisfies(s, a) == satisfies(s, b) for s in SMALL)


def _undirected(a):
    return {frozenset(t) for t in a.relations["E"] if t[0] != t[1]}


def test_identity_is_a_recolouring():
    phi = load("threecol")
    r = RecolouringMap.of(phi.colours, phi.colours, {c: c for c in phi.colours})
    assert is_recolouring(r, phi, phi)


def test_witness_rejects_mismatched_colours():
    phi = load("twocol")
    r = RecolouringMap.of(("A",), ("M1",), {"A": "M1"})
    with pytest.raises(MMSNPError):
        recolouring_witness(r, phi, phi)


def test_nf2_recolourings_against_definition():
    phi = load("ex_nf2")
    good = RecolouringMap.of(phi.colours, phi.colours, {"M1": "M2", "M2": "M2"})
    bad = RecolouringMap.of(phi.colours, phi.colours, {"M1": "M1", "M2": "M1"})
    assert raw_recolouring_violation(good.as_dict(), phi, phi, 3) is None
    assert raw_recolouring_violation(bad.as_dict(), phi, phi, 3) is not None


def test_proper_self_recolouring_prefers_small_images():
    r = proper_self_recolouring(load("ex_nf2"))
    assert r is not None and len(r.image()) == 1
    assert proper_self_recolouring(load("threecol")) is None


def test_snf_of_nf2_is_trivially_true():
    raw = load("ex_nf2_raw")
    out = strong_normal_form(normalize(raw))
    assert len(out.colours) == 1
    assert obstruction_set(out).structures == ()
    assert _equivalent_small(raw, out)
    assert all(satisfies(a, raw) for a in SMALL)


def test_snf_of_nf1():
    out = strong_normal_form(load("ex_nf1"))
    assert same_up_to_renaming(out, load("snf1"))
    assert is_strong_normal_form(out)


def test_snf_of_c5_keeps_all_three_obstructions():
    out = strong_normal_form(normalize(load("ex_c5")))
    assert same_up_to_renaming(out, load("ex_c5_nf"))


def test_snf_requires_connected():
    phi = parse_sentence("signature { E/2 } colors { M } forbid { E(x,y), M(z) }")
    with pytest.raises(MMSNPError):
        strong_normal_form(phi)


def test_remove_colours_rebuilds_first_conjunct():
    out = remove_colours(load("threecol"), ["M1", "M2"])
    assert out.colours == ("M1", "M2")
    assert same_up_to_renaming(out, load("twocol"))


def test_containment_vectors():
    two, three, none = load("twocol"), load("threecol"), load("noedges")
    v = contains(two, three)
    assert v.holds and v.witness is not None
    v = contains(three, two)
    assert not v.holds
    assert len(v.counterexample) == 3
    assert len(_undirected(v.counterexample)) == 3
    assert satisfies(v.counterexample, three) and not satisfies(v.counterexample, two)
    assert contains(none, two).holds
    v = contains(two, none)
    assert not v.holds and len(v.counterexample) == 2


def test_nf2_containment():
    assert contains(load("eq_snf2"), load("ex_nf2")).holds
    v = contains(load("ex_nf2"), load("eq_snf2"))
    assert not v.holds
    assert v.counterexample.relations["E"] == frozenset({(0, 0)})


def test_p3_equivalent_to_normal_form():
    assert contains(load("ex_p3"), load("ex_p3_nf")).holds
    assert contains(load("ex_p3_nf"), load("ex_p3")).holds


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_recolouring_soundness_and_counterexample_search(seed):
    rng = random.Random(seed)
    a, b = random_normal_form(rng), random_normal_form(rng)
    r = find_recolouring(a, b)
    expected = oracle_counterexample(a, b, 4)
    got = find_counterexample(a, b, 4)
    assert (got is None) == (expected is None)
    if got is not None:
        assert len(got) == len(expected)
        assert satisfies(got, a) and not satisfies(got, b)
    if r is not None:
        assert expected is None
        assert raw_recolouring_violation(r.as_dict(), a, b, 3) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_strong_normal_form_properties(seed):
    phi = random_normal_form(random.Random(seed))
    out = strong_normal_form(phi)
    assert is_normal_form(out)
    assert proper_self_recolouring(out) is None
    assert set(out.colours) <= set(phi.colours)
    assert _equivalent_small(phi, out)
