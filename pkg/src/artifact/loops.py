"""Loops of an automaton and the two preorders on them.

A loop is a reachable, strongly connected set of states whose induced
subgraph has at least one edge.  Loops are compared by reachability
(``leq0``) and by reverse inclusion (``leq1``).
"""

from __future__ import annotations

from dataclasses import dataclass

from .acceptors import Automaton, MullerKAcceptor
from .errors import InputError, InternalError, ResourceError

DEFAULT_LOOP_CAP = 2**16


def sccs(aut: Automaton, within=None) -> list:
    """Strongly connected components of the subgraph induced on ``within``.

    Components come back as frozensets sorted by their smallest state.
    Iterative Tarjan, so deep graphs do not hit the recursion limit.
    """
    nodes = sorted(aut.states if within is None else within)
    inside = set(nodes)
    delta = aut.delta
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(delta[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in inside:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(delta[w])))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
    out.sort(key=min)
    return out


def has_internal_edge(aut: Automaton, s) -> bool:
    return any(t in s for q in s for t in aut.delta[q])


def _strongly_connected(aut: Automaton, s: frozenset) -> bool:
    if not s:
        return False
    start = next(iter(s))
    for forward in (True, False):
        seen = {start}
        todo = [start]
        while todo:
            q = todo.pop()
            if forward:
                nxt = [t for t in aut.delta[q] if t in s]
            else:
                nxt = [p for p in s if q in aut.delta[p]]
            for t in nxt:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        if len(seen) != len(s):
            return False
    return True


def is_loop(aut: Automaton, s) -> bool:
    """Check the loop conditions directly."""
    s = frozenset(s)
    if not s or any(not isinstance(q, int) or not 0 <= q < aut.num_states for q in s):
        return False
    if not s & aut.reachable():
        return False
    return has_internal_edge(aut, s) and _strongly_connected(aut, s)


def reachable_sccs(aut: Automaton) -> list:
    """Reachable components that carry at least one internal edge."""
    return [c for c in sccs(aut, aut.reachable()) if has_internal_edge(aut, c)]


def _enumerate_within(aut: Automaton, top: frozenset, cap: int, found: set):
    stack = [top]
    found.add(top)
    while stack:
        x = stack.pop()
        if len(x) == 1:
            continue
        for q in sorted(x):
            for e in sccs(aut, x - {q}):
                if e not in found and has_internal_edge(aut, e):
                    found.add(e)
                    if len(found) > cap:
                        raise ResourceError(f"more than {cap} loops; use a smaller automaton")
                    stack.append(e)


def loop_sort_key(c) -> tuple:
    return tuple(sorted(c))


def loops(aut: Automaton, cap: int = DEFAULT_LOOP_CAP) -> list:
    """All loops, sorted by their state lists.

    Every strongly connected proper subset of a strongly connected set X
    misses some state q of X, so it lies inside a component of X - {q}.
    Descending through such components from each reachable component
    therefore visits every loop, and each only a bounded number of times.
    """
    found = set()
    for c in reachable_sccs(aut):
        _enumerate_within(aut, c, cap, found)
    return sorted(found, key=loop_sort_key)


def subloops(aut: Automaton, c, cap: int = DEFAULT_LOOP_CAP) -> list:
    """Loops contained in the loop c, c included."""
    c = frozenset(c)
    if not is_loop(aut, c):
        raise InputError(f"{sorted(c)} is not a loop")
    found = set()
    _enumerate_within(aut, c, cap, found)
    return sorted(found, key=loop_sort_key)


def _reaches(aut: Automaton, src, dst) -> bool:
    target = frozenset(dst)
    seen = set(src)
    if seen & target:
        return True
    todo = list(seen)
    while todo:
        q = todo.pop()
        for t in aut.delta[q]:
            if t in target:
                return True
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return False


def cycle_order(c, d, automaton: Automaton) -> tuple:
    """``(c leq0 d, c leq1 d)`` for two loops."""
    c, d = frozenset(c), frozenset(d)
    for s in (c, d):
        if not is_loop(automaton, s):
            raise InputError(f"{sorted(s)} is not a loop")
    return _reaches(automaton, [next(iter(c))], d), c >= d


@dataclass(frozen=True)
class Cycle2Preorder:
    """Loops with reachability (leq0), reverse inclusion (leq1) and labels.

    ``leq0[i]`` and ``leq1[i]`` are the sets of indices j with
    loops[i] <= loops[j] in the respective preorder.
    """

    loops: tuple
    leq0: tuple
    leq1: tuple
    labels: tuple
    k: int

    def classes(self) -> list:
        """Index lists of the leq0-equivalence classes, in loop order."""
        seen = set()
        out = []
        for i in range(len(self.loops)):
            if i in seen:
                continue
            cls = sorted(j for j in self.leq0[i] if i in self.leq0[j])
            seen.update(cls)
            out.append(cls)
        return out

    def least_in_class(self, cls) -> int:
        for i in cls:
            if all(j in self.leq1[i] for j in cls):
                return i
        raise InternalError("class without a leq1-least loop")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "loops": [sorted(c) for c in self.loops],
            "leq0": [sorted(s) for s in self.leq0],
            "leq1": [sorted(s) for s in self.leq1],
            "labels": list(self.labels),
        }


def build_cycle_preorder(acc: MullerKAcceptor, cap: int = DEFAULT_LOOP_CAP) -> Cycle2Preorder:
    aut = acc.automaton
    ls = loops(aut, cap)
    comp_of = {}
    comps = reachable_sccs(aut)
    all_comps = sccs(aut, aut.reachable())
    for j, c in enumerate(all_comps):
        for q in c:
            comp_of[q] = j
    # reachability between components
    reach = {}
    for j, c in enumerate(all_comps):
        seen = {j}
        todo = [j]
        while todo:
            x = todo.pop()
            for q in all_comps[x]:
                for t in aut.delta[q]:
                    y = comp_of[t]
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
        reach[j] = seen
    cid = [comp_of[next(iter(c))] for c in ls]
    leq0 = tuple(frozenset(j for j in range(len(ls)) if cid[j] in reach[cid[i]]) for i in range(len(ls)))
    leq1 = tuple(frozenset(j for j in range(len(ls)) if ls[i] >= ls[j]) for i in range(len(ls)))
    labels = tuple(acc.label(c) for c in ls)
    for v in labels:
        if not 0 <= v < acc.k:
            raise InternalError(f"label {v} not below k={acc.k}")
    pre = Cycle2Preorder(tuple(ls), leq0, leq1, labels, acc.k)
    for i in range(len(ls)):
        for j in leq1[i]:
            if not (j in leq0[i] and i in leq0[j]):
                raise InternalError("leq1-comparable loops in different components")
    for cls in pre.classes():
        union = frozenset().union(*(ls[i] for i in cls))
        top = pre.least_in_class(cls)
        if ls[top] != union:
            raise InternalError("class is not topped by the union of its loops")
    if len(pre.classes()) != len(comps):
        raise InternalError("classes do not match reachable components")
    return pre
