import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact import iforests as itf
from artifact.acceptors import Automaton, MullerKAcceptor
from artifact.constructions import const_acc
from artifact.degrees import (degree, degree_by_unfolding, degree_forest, equivalent, in_level,
                              reduces, tree_into_preorder, unfold)
from artifact.errors import InputError
from artifact.iforests import IForest, leq_h, parse_forest
from artifact.loops import build_cycle_preorder
from artifact.sampling import random_acceptor

fs = frozenset
M2 = MullerKAcceptor(Automaton(2, [[0, 1], [1, 0]]), 2, {fs({0}): 0, fs({1}): 1, fs({0, 1}): 0})
# loop {0} labeled 0 reaches the sink loop {1} labeled 1
CHAIN = MullerKAcceptor(Automaton(2, [[0, 1], [1, 1]]), 2, {fs({0}): 0, fs({1}): 1})

seeds = st.integers(0, 10**6)


def sample(seed, k=None, n=5, m=2):
    rng = random.Random(seed)
    return random_acceptor(rng, k or rng.choice((2, 3)), n, m)


def test_unfold_examples():
    assert unfold(build_cycle_preorder(const_acc(1, 2))) == parse_forest("[<1>]")
    assert unfold(build_cycle_preorder(M2)) == parse_forest("[<0(0,1)>]")
    assert unfold(build_cycle_preorder(CHAIN)) == parse_forest("[<0>(<1>)]")


def test_degree_examples():
    for i in range(3):
        assert degree_forest(const_acc(i, 3)) == parse_forest(f"[<{i}>]", 3)
    assert degree_forest(M2) == parse_forest("[<0(1)>]")
    assert str(degree(M2)) == "[<0(1)>]"
    assert degree_forest(CHAIN) == parse_forest("[<0>(<1>)]")


def test_reduces_examples():
    c0, c1 = const_acc(0, 2), const_acc(1, 2)
    assert reduces(M2, M2)
    assert not reduces(c0, c1)
    assert not reduces(M2, c1)
    assert reduces(c1, M2)
    with pytest.raises(InputError):
        reduces(c0, const_acc(0, 3))


def test_level_examples():
    assert in_level(const_acc(1, 2), parse_forest("[<1>]"))
    assert not in_level(const_acc(1, 2), parse_forest("[<0>]"))
    assert in_level(M2, parse_forest("[<0(1)>]"))
    assert not in_level(M2, parse_forest("[<1(0)>]"))
    # depth-1 names are lifted: [0(1)] names the chain level [<0>(<1>)]
    assert in_level(CHAIN, parse_forest("[0(1)]"))
    assert not in_level(M2, parse_forest("[0(1)]"))


def test_tree_into_preorder_examples():
    pre = build_cycle_preorder(M2)
    assert tree_into_preorder(itf.parse_tree("<0>"), pre)
    assert tree_into_preorder(itf.parse_tree("<1>"), pre)
    assert tree_into_preorder(unfold(pre).trees[0], pre)
    assert not tree_into_preorder(itf.parse_tree("<1(0)>"), pre)
    # one component: both outer nodes may land on it
    assert tree_into_preorder(itf.parse_tree("<0>(<1>)"), pre)
    assert not tree_into_preorder(itf.parse_tree("<0(1(0))>"), pre)


@settings(max_examples=120, deadline=None)
@given(seeds)
def test_fast_degree_matches_literal_pipeline(seed):
    acc = sample(seed, n=6, m=3)
    assert degree_forest(acc) == degree_by_unfolding(acc)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_unfolding_is_largest_image(seed):
    acc = sample(seed)
    pre = build_cycle_preorder(acc)
    U = unfold(pre)
    for T in itf.enumerate_trees(acc.k, 2, 3):
        assert tree_into_preorder(T, pre) == leq_h(IForest([T], acc.k, 2), U)


@settings(max_examples=40, deadline=None)
@given(seeds, seeds, seeds)
def test_reduces_is_a_preorder(s1, s2, s3):
    a, b, c = sample(s1, 2), sample(s2, 2), sample(s3, 2)
    assert reduces(a, a)
    if reduces(a, b) and reduces(b, c):
        assert reduces(a, c)
    assert equivalent(a, b) == (reduces(a, b) and reduces(b, a))


@settings(max_examples=30, deadline=None)
@given(seeds, st.data())
def test_level_monotone_and_hardness_gap(seed, data):
    acc = sample(seed, 2)
    pool = itf.enumerate_forests(2, 2, 3)
    f = data.draw(st.sampled_from(pool))
    g = data.draw(st.sampled_from(pool))
    if leq_h(f, g) and in_level(acc, f):
        assert in_level(acc, g)
    pre = build_cycle_preorder(acc)
    if not in_level(acc, f):
        assert any(tree_into_preorder(t, pre) for t in itf.mset(f))


def test_in_level_rejects_bad_names():
    with pytest.raises(InputError):
        in_level(M2, parse_forest("[0]", 3))
    with pytest.raises(InputError):
        in_level(M2, parse_forest("[<<0>>]"))


def test_degree_is_invariant_under_relabeling_states():
    acc = sample(3, 3, 5, 2)
    aut = acc.automaton
    n = aut.num_states
    perm = list(range(n))
    random.Random(0).shuffle(perm)
    delta = [None] * n
    for q in range(n):
        delta[perm[q]] = [perm[t] for t in aut.delta[q]]
    table = {fs(perm[s] for s in c): v for c, v in acc.label_table().items()}
    other = MullerKAcceptor(Automaton(aut.alphabet_size, delta, perm[aut.initial]), acc.k, table)
    assert degree_forest(other) == degree_forest(acc)
