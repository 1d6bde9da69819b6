"""Degrees of Muller k-acceptors as canonical depth-2 forests.

The raw invariant is the preorder of loops under reachability and reverse
inclusion.  Unfolding it bottom-up gives a forest whose outer nodes follow
the components of the automaton and whose labels are trees of nested loops.
The minimal form of that forest names the degree, and comparing names
decides reducibility and level membership.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import iforests as itf
from .acceptors import MullerKAcceptor, check_same_k
from .errors import InputError, InternalError
from .iforests import IForest, ITree, leq_h, minimize, minimize_tree, tree
from .loops import Cycle2Preorder, build_cycle_preorder, has_internal_edge, sccs


@dataclass(frozen=True)
class Degree:
    forest: IForest
    provenance: str = ""

    def __str__(self):
        return itf.to_text(self.forest)


def _covers(n: int, less) -> list:
    """Immediate successors for a strict order given as a predicate."""
    out = []
    for i in range(n):
        up = [j for j in range(n) if less(i, j)]
        out.append([j for j in up if not any(less(i, m) and less(m, j) for m in up if m != j)])
    return out


def unfold(pre2: Cycle2Preorder) -> IForest:
    """The literal bottom-up unfolding of a loop preorder.

    Outer nodes are chains of immediate successors among components,
    starting at the minimal ones; each outer node is labeled by the
    unfolding of its component's loops under reverse inclusion, rooted at
    the full component loop.
    """
    classes = pre2.classes()
    loops = pre2.loops

    def inner(cls):
        idx = list(cls)
        succ = _covers(len(idx), lambda a, b: loops[idx[a]] > loops[idx[b]])
        memo = {}

        def build(a):
            if a not in memo:
                memo[a] = tree(pre2.labels[idx[a]], [build(b) for b in succ[a]])
            return memo[a]

        top = pre2.least_in_class(cls)
        return build(idx.index(top))

    labels = [inner(c) for c in classes]
    rep = [c[0] for c in classes]
    n = len(classes)

    def less(a, b):
        return a != b and rep[b] in pre2.leq0[rep[a]]

    succ = _covers(n, less)
    memo = {}

    def outer(a):
        if a not in memo:
            memo[a] = tree(labels[a], [outer(b) for b in succ[a]])
        return memo[a]

    minimal = [a for a in range(n) if not any(less(b, a) for b in range(n))]
    return IForest([outer(a) for a in minimal], pre2.k, 2)


class _LoopTrees:
    """Minimal label trees of loops, found without listing every loop.

    The tree of a loop c is equivalent to: the label of c above the trees of
    the maximal subloops whose label differs from the label of c.  Those
    are found by descending from c through components of c minus a state
    (or minus a whole forced region, when the labeling supplies one).
    """

    def __init__(self, acc: MullerKAcceptor):
        self.acc = acc
        self.aut = acc.automaton
        self.memo = {}

    def loops_under(self, c: frozenset, cut: frozenset):
        out = []
        for e in sccs(self.aut, c - cut):
            if has_internal_edge(self.aut, e):
                out.append(e)
        return out

    def differing(self, c: frozenset) -> list:
        lab = self.acc.label(c)
        found = []
        seen = {c}
        stack = [c]
        while stack:
            x = stack.pop()
            forced = self.acc.forced(x) & x
            if forced:
                parts = self.loops_under(x, forced)
            else:
                parts = []
                if len(x) > 1:
                    for q in sorted(x):
                        parts.extend(self.loops_under(x, frozenset((q,))))
            for e in parts:
                if e in seen:
                    continue
                seen.add(e)
                if self.acc.label(e) != lab:
                    found.append(e)
                else:
                    stack.append(e)
        return [e for e in found if not any(e < f for f in found)]

    def tree_of(self, c: frozenset) -> ITree:
        t = self.memo.get(c)
        if t is None:
            kids = [self.tree_of(d) for d in sorted(self.differing(c), key=sorted)]
            t = minimize_tree(tree(self.acc.label(c), kids))
            self.memo[c] = t
        return t


def degree_forest(acc: MullerKAcceptor) -> IForest:
    """Minimal form of the unfolding, computed component by component."""
    aut = acc.automaton
    reach = aut.reachable()
    comps = sccs(aut, reach)
    comp_of = {q: j for j, c in enumerate(comps) for q in c}
    loopy = [j for j, c in enumerate(comps) if has_internal_edge(aut, c)]
    # reachability among all components, then restricted to loopy ones
    after = {}
    order = _topological(comps, comp_of, aut)
    for j in reversed(order):
        s = {j}
        for q in comps[j]:
            for t in aut.delta[q]:
                b = comp_of[t]
                if b != j:
                    s |= after[b]
        after[j] = s
    trees = _LoopTrees(acc)
    labels = {j: trees.tree_of(comps[j]) for j in loopy}
    n = len(loopy)

    def less(a, b):
        return a != b and loopy[b] in after[loopy[a]]

    succ = _covers(n, less)
    memo = {}

    def outer(a):
        if a not in memo:
            memo[a] = minimize(IForest([tree(labels[loopy[a]], [outer(b) for b in succ[a]])], acc.k, 2)).trees[0]
        return memo[a]

    minimal = [a for a in range(n) if not any(less(b, a) for b in range(n))]
    return minimize(IForest([outer(a) for a in minimal], acc.k, 2))


def _topological(comps, comp_of, aut) -> list:
    """Components in an order where every edge goes forward."""
    n = len(comps)
    succ = [set() for _ in range(n)]
    indeg = [0] * n
    for j, c in enumerate(comps):
        for q in c:
            for t in aut.delta[q]:
                b = comp_of[t]
                if b != j and b not in succ[j]:
                    succ[j].add(b)
                    indeg[b] += 1
    ready = sorted(j for j in range(n) if indeg[j] == 0)
    out = []
    while ready:
        j = ready.pop()
        out.append(j)
        for b in sorted(succ[j]):
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
    if len(out) != n:
        raise InternalError("component graph is not acyclic")
    return out


def degree(acc: MullerKAcceptor, provenance: str = "") -> Degree:
    """The canonical degree name of the acceptor."""
    return Degree(degree_forest(acc), provenance)


def degree_by_unfolding(acc: MullerKAcceptor) -> IForest:
    """minimize(unfold(build_cycle_preorder(acc))), listing every loop."""
    return minimize(unfold(build_cycle_preorder(acc)))


def reduces(a: MullerKAcceptor, b: MullerKAcceptor) -> bool:
    check_same_k(a, b)
    return leq_h(degree_forest(a), degree_forest(b))


def equivalent(a: MullerKAcceptor, b: MullerKAcceptor) -> bool:
    check_same_k(a, b)
    return degree_forest(a) == degree_forest(b)


def in_level(acc: MullerKAcceptor, F: IForest) -> bool:
    F = itf.as_forest(F)
    if F.k != acc.k:
        raise InputError(f"forest has k={F.k} but the acceptor has k={acc.k}")
    if F.depth > 2:
        raise InputError("levels are named by forests of depth <= 2")
    return leq_h(degree_forest(acc), F)


def tree_into_preorder(T: ITree, pre2: Cycle2Preorder) -> bool:
    """Search directly for a morphism from T into the loop preorder.

    Outer nodes map to loops, monotonically along reachability; the label
    tree of each outer node maps into the loops of the chosen component,
    monotonically along reverse inclusion and with matching labels.
    """
    T = itf.lift(T, 2) if T.depth < 2 else T
    if T.depth != 2:
        raise InputError("tree_into_preorder needs a depth-2 tree")
    loops = pre2.loops
    n = len(loops)
    inner_memo = {}

    def inner(v: ITree, x: int) -> bool:
        key = (v, x)
        r = inner_memo.get(key)
        if r is None:
            r = pre2.labels[x] == v.label and all(
                any(inner(c, y) for y in pre2.leq1[x]) for c in v.children)
            inner_memo[key] = r
        return r

    class_of = {}
    for ci, cls in enumerate(pre2.classes()):
        for i in cls:
            class_of[i] = cls

    label_memo = {}

    def label_fits(v: ITree, x: int) -> bool:
        key = (v, tuple(class_of[x]))
        r = label_memo.get(key)
        if r is None:
            r = any(inner(v, y) for y in class_of[x])
            label_memo[key] = r
        return r

    outer_memo = {}

    def outer(t: ITree, x: int) -> bool:
        key = (t, x)
        r = outer_memo.get(key)
        if r is None:
            r = label_fits(t.label, x) and all(
                any(outer(c, y) for y in pre2.leq0[x]) for c in t.children)
            outer_memo[key] = r
        return r

    return any(outer(T, x) for x in range(n))
