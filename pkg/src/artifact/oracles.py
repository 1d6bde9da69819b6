"""Brute-force reference procedures used by the tests and by ``selfcheck``.

Each one decides a question from its definition by exhaustive search and
shares no code path with the procedure it checks.
"""

from __future__ import annotations

from .acceptors import Automaton
from .iforests import IForest, ITree, as_forest, lift


def _flatten(t: ITree, parent=None, out=None):
    """Nodes of t as (label, parent index) pairs in preorder."""
    if out is None:
        out = []
    me = len(out)
    out.append((t.label, parent))
    for c in t.children:
        _flatten(c, me, out)
    return out


def _forest_nodes(trees):
    out = []
    for t in trees:
        _flatten(t, None, out)
    return out


def _ancestors(nodes):
    """anc[i] = set of j with j an ancestor-or-self of i."""
    anc = []
    for i, (_, p) in enumerate(nodes):
        s = {i}
        if p is not None:
            s |= anc[p]
        anc.append(s)
    return anc


def brute_leq(F, G) -> bool:
    """Search all maps from the nodes of F to the nodes of G for one that is
    monotone (ancestors to ancestors-or-self) and does not decrease labels."""
    F, G = as_forest(F), as_forest(G)
    d = max(F.depth, G.depth)
    fn = _forest_nodes([lift(t, d) for t in F.trees])
    gn = _forest_nodes([lift(t, d) for t in G.trees])
    if not fn:
        return True
    if not gn:
        return False
    ganc = _ancestors(gn)
    ok = [[_brute_label_leq(a, b) for b, _ in gn] for a, _ in fn]

    def extend(i, image):
        if i == len(fn):
            return True
        _, p = fn[i]
        for j in range(len(gn)):
            if not ok[i][j]:
                continue
            if p is not None and image[p] not in ganc[j]:
                continue
            image.append(j)
            if extend(i + 1, image):
                return True
            image.pop()
        return False

    return extend(0, [])


def _brute_label_leq(a, b) -> bool:
    if isinstance(a, int):
        return a == b
    return brute_leq(IForest([a]), IForest([b]))


def brute_equiv(F, G) -> bool:
    return brute_leq(F, G) and brute_leq(G, F)


def lasso_infinity_sets(aut: Automaton, max_prefix: int, max_period: int) -> set:
    """All infinity sets of lassos u.v^omega with |u| <= max_prefix and
    1 <= |v| <= max_period.

    Periods are explored breadth-first by length.  A period is summarized by
    its action on states together with the set of states it passes through
    from each state; periods with equal summaries extend identically, so
    keeping one per summary covers every period without listing them all.
    """
    n = aut.num_states
    delta = aut.delta
    starts = {aut.initial}
    frontier = {aut.initial}
    for _ in range(max_prefix):
        frontier = {delta[q][a] for q in frontier for a in range(aut.alphabet_size)}
        starts |= frontier
    ident = tuple(range(n))
    layer = {(ident, tuple(frozenset() for _ in range(n)))}
    seen = set()
    out = set()
    for _ in range(max_period):
        nxt = set()
        for act, passed in layer:
            for a in range(aut.alphabet_size):
                act2 = tuple(delta[act[q]][a] for q in range(n))
                passed2 = tuple(passed[q] | {act2[q]} for q in range(n))
                key = (act2, passed2)
                if key in seen:
                    continue
                seen.add(key)
                nxt.add(key)
                for q in starts:
                    hist = {}
                    x = q
                    while x not in hist:
                        hist[x] = True
                        x = act2[x]
                    inf = set()
                    y = x
                    while True:
                        inf |= passed2[y]
                        y = act2[y]
                        if y == x:
                            break
                    out.add(frozenset(inf))
        layer = nxt
    return out


def brute_counting_pattern(aut: Automaton, max_len: int | None = None) -> bool:
    """Some word cycles a reachable state with period > 1.

    Words are explored breadth-first, one per distinct action on states, so
    without ``max_len`` the search is complete.  For each word v and
    reachable q the powers q.v, q.v^2, ... are followed until they repeat.
    """
    reach = sorted(aut.reachable())
    n = aut.num_states
    seen = {tuple(range(n))}
    layer = [tuple(range(n))]
    length = 0
    while layer and (max_len is None or length < max_len):
        length += 1
        nxt = []
        for act in layer:
            for a in range(aut.alphabet_size):
                act2 = tuple(aut.delta[act[q]][a] for q in range(n))
                if act2 in seen:
                    continue
                seen.add(act2)
                nxt.append(act2)
                for q in reach:
                    x = act2[q]
                    steps = 1
                    while x != q and steps <= n:
                        x = act2[x]
                        steps += 1
                    if x == q and steps > 1:
                        return True
        layer = nxt
    return False


def brute_smallest_equivalent(F, k: int, candidates) -> int:
    """Size of the smallest candidate forest equivalent to F."""
    best = as_forest(F).size
    for g in candidates:
        g = as_forest(g, k)
        if g.size < best and brute_equiv(g, F):
            best = g.size
    return best
