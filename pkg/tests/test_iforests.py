import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from artifact import iforests as itf
from artifact.errors import InputError
from artifact.iforests import (IForest, canonical_decomposition, dot_forest, enumerate_forests,
                               enumerate_raw_forests, equiv_h, join, leq_h, minimize, mset,
                               parse_forest, parse_tree, qi_forest, r_flatten, s_wrap, to_text)
from artifact.oracles import brute_equiv, brute_leq, brute_smallest_equivalent


def F(text, k=2):
    return parse_forest(text, k)


def T(text):
    return parse_tree(text)


RAW_D1 = [IForest(f, 2, 1) for f in enumerate_raw_forests(2, 1, 4)]
RAW_D2 = [IForest(f, 2, 2) for f in enumerate_raw_forests(2, 2, 3)]
RAW_K3 = [IForest(f, 3, 1) for f in enumerate_raw_forests(3, 1, 3)]
forests_d1 = st.sampled_from(RAW_D1)
forests_any = st.sampled_from(RAW_D1 + RAW_D2)


# comparison

def test_leq_examples():
    assert leq_h(F("[0]"), F("[0(1)]"))
    assert not leq_h(F("[0(1)]"), F("[1(0)]"))
    assert leq_h(F("[0,1]"), F("[0(1)]"))
    assert equiv_h(F("[0(0)]"), F("[0]"))
    assert not equiv_h(F("[0]"), F("[1]"))
    x = F("[0(1),1]")
    assert equiv_h(join(x, x), x)


def test_leq_matches_exhaustive_maps_depth1():
    for a in RAW_D1[:60]:
        for b in RAW_D1:
            assert leq_h(a, b) == brute_leq(a, b), (a, b)


def test_leq_matches_exhaustive_maps_depth2():
    for a in RAW_D2:
        for b in RAW_D2:
            assert leq_h(a, b) == brute_leq(a, b), (a, b)


def test_leq_matches_exhaustive_maps_k3():
    for a in RAW_K3:
        for b in RAW_K3:
            assert leq_h(a, b) == brute_leq(a, b), (a, b)


def test_leq_across_depths_uses_lifting():
    assert equiv_h(F("[0(1)]"), F("[<0>(<1>)]"))
    assert leq_h(F("[<0>]"), F("[<0(1)>]"))
    assert not leq_h(F("[<0(1)>]"), F("[<0>(<1>)]"))


@given(forests_any, forests_any, forests_any)
def test_preorder_laws(a, b, c):
    assert leq_h(a, a)
    if leq_h(a, b) and leq_h(b, c):
        assert leq_h(a, c)


@given(forests_any, forests_any)
def test_decomposition_law(a, b):
    per_tree = all(any(brute_leq(IForest([t]), IForest([s])) for s in b.trees) for t in a.trees)
    assert leq_h(a, b) == per_tree


# minimization

def test_minimize_examples():
    assert minimize(F("[0,0]")) == F("[0]")
    assert minimize(F("[0(0,1)]")) == F("[0(1)]")
    assert minimize(F("[<1>,<1(0)>]")) == F("[<1(0)>]")
    assert canonical_decomposition(F("[0,1]")) == [T("0"), T("1")]
    assert set(canonical_decomposition(F("[0(1),1(0),0]"))) == {T("0(1)"), T("1(0)")}


@given(forests_any)
def test_minimize_is_equivalent_and_idempotent(f):
    m = minimize(f)
    assert equiv_h(m, f)
    assert minimize(m) == m


def test_minimize_size_is_exhaustive_minimum():
    cands = {1: [IForest(g, 2, 1) for g in enumerate_raw_forests(2, 1, 5)],
             2: [IForest(g, 2, 2) for g in enumerate_raw_forests(2, 2, 4)]}
    for depth, pool in cands.items():
        for f in pool:
            if f.size > (5 if depth == 1 else 4):
                continue
            smaller = [g for g in pool if g.size < f.size]
            assert minimize(f).size == brute_smallest_equivalent(f, 2, smaller), f


def test_minimize_gives_one_form_per_class():
    for depth, n in ((1, 5), (2, 4)):
        pool = [IForest(g, 2, depth) for g in enumerate_raw_forests(2, depth, n)]
        forms = {}
        for f in pool:
            forms.setdefault(minimize(f), []).append(f)
        reps = list(forms)
        for a, b in itertools.combinations(reps, 2):
            assert not equiv_h(a, b)


# operations

def test_join_and_dot_examples():
    assert join(F("[0]"), F("[1]")) == F("[0,1]")
    assert join(F("[0(1)]"), IForest((), 2, 1)) == F("[0(1)]")
    assert dot_forest(F("[0,1]"), F("[1]")) == F("[0(1),1(1)]")
    assert dot_forest(F("[0(1)]"), IForest((), 2, 1)) == F("[0(1)]")


@given(forests_d1, forests_d1, forests_d1)
def test_join_is_least_upper_bound(a, b, c):
    j = join(a, b)
    assert equiv_h(j, join(b, a))
    assert leq_h(a, j) and leq_h(b, j)
    if leq_h(a, c) and leq_h(b, c):
        assert leq_h(j, c)


@settings(max_examples=50)
@given(forests_d1, forests_d1, forests_d1)
def test_dot_is_associative(a, b, c):
    assert equiv_h(dot_forest(dot_forest(a, b), c), dot_forest(a, dot_forest(b, c)))


def test_wrap_flatten_qi_examples():
    assert to_text(s_wrap(T("0"))) == "<0>"
    assert s_wrap(T("0")) == itf.lift(T("0"), 2)
    assert to_text(s_wrap(T("0(1)"))) == "<0(1)>"
    assert r_flatten(F("[<1>]")) == F("[1]")
    assert equiv_h(r_flatten(F("[<0(1)>,<1>]")), F("[0(1)]"))
    assert r_flatten(IForest([s_wrap(T("1(0)"))])) == F("[1(0)]")
    assert equiv_h(qi_forest(0, F("[<1>]")), F("[<0(1)>]"))
    for i in range(2):
        assert equiv_h(qi_forest(i, F(f"[<{i}>]")), F(f"[<{i}({i})>]"))
        assert equiv_h(qi_forest(i, F(f"[<{i}>]")), F(f"[<{i}>]"))


# the M operator

def test_mset_examples():
    assert set(mset(F("[1]", 3))) == {T("0"), T("2")}
    assert mset(F("[0(1)]")) == [T("1(0)")]
    got = mset(F("[0,1]"))
    want = [F("[0(1,0)]"), F("[1(1,0)]")]
    assert len(got) == 2
    for t in got:
        assert any(equiv_h(IForest([t]), w) for w in want)


def test_mset_against_brute_force():
    pool = RAW_D1
    for f in enumerate_forests(2, 1, 3):
        ms = [IForest([t], 2) for t in mset(f)]
        for m in ms:
            assert not brute_leq(m, f)
        for g in pool:
            if not brute_leq(g, f):
                assert any(brute_leq(m, g) for m in ms), (f, g)


def test_mset_rejects_empty_and_deep():
    with pytest.raises(InputError):
        mset(IForest((), 2, 1))
    with pytest.raises(InputError):
        mset(F("[<<0>>]"))


# enumeration

def _oracle_class_count(k, depth, n):
    reps = []
    for f in enumerate_raw_forests(k, depth, n):
        f = IForest(f, k, depth)
        if not any(brute_equiv(f, r) for r in reps):
            reps.append(f)
    return len(reps)


def test_enumeration_counts_match_oracle():
    for n in range(1, 5):
        assert len(enumerate_forests(2, 1, n)) == _oracle_class_count(2, 1, n)
    assert len(enumerate_forests(2, 2, 3)) == _oracle_class_count(2, 2, 3)
    assert len(enumerate_forests(3, 1, 3)) == _oracle_class_count(3, 1, 3)


def test_enumeration_counts_frozen():
    # frozen from the oracle above and from the pairwise-equivalence pass
    assert [len(enumerate_forests(2, 1, n)) for n in range(1, 7)] == [2, 5, 7, 10, 12, 15]
    assert len(enumerate_forests(3, 1, 4)) == 91
    assert len(enumerate_forests(2, 2, 4)) == 19


def test_small_enumerations():
    assert enumerate_forests(2, 1, 1) == [F("[0]"), F("[1]")]
    assert set(enumerate_forests(2, 1, 2)) == {F(s) for s in ("[0]", "[1]", "[0,1]", "[0(1)]", "[1(0)]")}


def test_hasse_examples():
    dot = itf.hasse(2, 1, 2)
    assert dot.count("[label=") == 5
    assert dot.count("->") == 4
    dot3 = itf.hasse(3, 1, 2)
    classes = enumerate_forests(3, 1, 2)
    big = [c for c in classes if c.size == 2 and len(c.trees) == 1]
    assert any(not leq_h(a, b) and not leq_h(b, a) for a, b in itertools.combinations(big, 2))
    assert dot3.startswith("digraph")


def test_hasse_edges_are_covers():
    classes = enumerate_forests(2, 1, 4)
    edges = itf.covers(classes)
    closure = {(i, j) for i in range(len(classes)) for j in range(len(classes))
               if i != j and leq_h(classes[i], classes[j])}
    for i, j in edges:
        assert (i, j) in closure
        assert not any((i, m) in closure and (m, j) in closure for m in range(len(classes)))


# syntax

def test_text_round_trip():
    for s in ("[0]", "[0(1),1(0)]", "[<0(1)>(<1>,<0>)]", "[<<0>>]"):
        f = parse_forest(s)
        assert to_text(parse_forest(to_text(f))) == to_text(f)
    assert parse_forest("[⟨0(1)⟩]") == parse_forest("[<0(1)>]")


def test_parse_errors():
    for bad in ("[0(1]", "0)", "[<0>", "[x]", "[0,]"):
        with pytest.raises(InputError):
            parse_forest(bad)


@given(forests_any)
def test_json_round_trip(f):
    obj = json.loads(json.dumps(itf.forest_to_json(f)))
    assert itf.forest_from_json(obj) == f


def test_json_errors():
    with pytest.raises(InputError):
        itf.forest_from_json({"k": 2, "depth": 1, "trees": [{"label": 5, "children": []}]})
    with pytest.raises(InputError):
        itf.forest_from_json({"k": 2, "trees": [{"children": []}]})
