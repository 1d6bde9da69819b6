import pytest
from hypothesis import given, settings, strategies as st

from artifact.acceptors import Automaton, MullerKAcceptor
from artifact.errors import InputError
from artifact.loops import build_cycle_preorder, cycle_order, is_loop, loops, sccs, subloops
from artifact.oracles import lasso_infinity_sets
from artifact.selfcheck import _subset_loops

M2 = Automaton(2, [[0, 1], [1, 0]])
M3 = Automaton(2, [[1, 1], [1, 1]])


@st.composite
def automata(draw, max_states=6, max_letters=3):
    n = draw(st.integers(1, max_states))
    m = draw(st.integers(1, max_letters))
    return Automaton(m, [[draw(st.integers(0, n - 1)) for _ in range(m)] for _ in range(n)])


def fs(*xs):
    return frozenset(xs)


def test_loop_examples():
    assert loops(Automaton(2, [[0, 0]])) == [fs(0)]
    assert set(loops(M2)) == {fs(0), fs(1), fs(0, 1)}
    assert loops(M3) == [fs(1)]


def test_loops_are_sorted():
    got = loops(M2)
    assert got == sorted(got, key=sorted)


def test_sccs():
    assert sccs(M3) == [fs(0), fs(1)]
    assert sccs(M2) == [fs(0, 1)]


def test_cycle_order_examples():
    assert cycle_order(fs(0, 1), fs(0, 1), M2) == (True, True)
    assert cycle_order(fs(0, 1), fs(0), M2) == (True, True)
    assert cycle_order(fs(0), fs(0, 1), M2) == (True, False)
    assert cycle_order(fs(0), fs(1), M2) == (True, False)
    # r -> p -> q with loops {r} and {q}: only the earlier one reaches the later
    chain = Automaton(2, [[0, 1], [2, 2], [2, 2]])
    assert cycle_order(fs(0), fs(2), chain) == (True, False)
    assert cycle_order(fs(2), fs(0), chain) == (False, False)


def test_subloops():
    assert set(subloops(M2, {0, 1})) == {fs(0), fs(1), fs(0, 1)}
    with pytest.raises(InputError):
        subloops(M3, {0})


def test_preorder_examples():
    m2 = MullerKAcceptor(M2, 2, {fs(0): 0, fs(1): 1, fs(0, 1): 0})
    pre = build_cycle_preorder(m2)
    assert len(pre.loops) == 3
    assert len(pre.classes()) == 1
    cls = pre.classes()[0]
    assert pre.loops[pre.least_in_class(cls)] == fs(0, 1)
    m3 = MullerKAcceptor(M3, 2, {fs(1): 1})
    pre = build_cycle_preorder(m3)
    assert pre.loops == (fs(1),) and len(pre.classes()) == 1
    obj = pre.to_json()
    assert obj["k"] == 2 and obj["loops"] == [[1]] and obj["labels"] == [1]


@settings(max_examples=150, deadline=None)
@given(automata())
def test_loops_match_lassos_and_definition(aut):
    got = set(loops(aut))
    assert got == lasso_infinity_sets(aut, 6, 8)
    assert got == _subset_loops(aut)
    assert all(is_loop(aut, c) for c in got)


@settings(max_examples=80, deadline=None)
@given(automata(5, 2), st.data())
def test_preorder_invariants(aut, data):
    table = {c: data.draw(st.integers(0, 2)) for c in loops(aut)}
    pre = build_cycle_preorder(MullerKAcceptor(aut, 3, table))
    n = len(pre.loops)
    for i in range(n):
        for j in range(n):
            if j in pre.leq1[i]:
                # inclusion-related loops share a component
                assert i in pre.leq0[j] and j in pre.leq0[i]
    for cls in pre.classes():
        union = frozenset().union(*(pre.loops[i] for i in cls))
        assert union in pre.loops
        assert pre.loops[pre.least_in_class(cls)] == union
