"""The acceptance checks as plain functions.

Each ``check_*`` returns ``(name, passed, detail)``.  Defaults are the full
acceptance sizes; ``run_all`` shrinks the expensive ones for the CLI.
"""

from __future__ import annotations

import itertools
import random
import time

from . import iforests as itf
from .acceptors import Automaton, LassoWord, MullerKAcceptor, eval_lasso, has_balanced_counting_pattern
from .acceptors import has_d_counting_pattern, is_aperiodic, run
from .constructions import (const_acc, dot_acc, dot_case, oplus_acc, pi_acc, qi_acc, qi_case,
                            rho_acc)
from .degrees import degree_forest, reduces, tree_into_preorder, unfold
from .iforests import IForest, equiv_h, leq_h, tree
from .loops import build_cycle_preorder, loops
from .oracles import brute_counting_pattern, lasso_infinity_sets
from .sampling import random_acceptor, random_aperiodic_acceptor, random_automaton

M2 = Automaton(2, [[0, 1], [1, 0]])
M3 = Automaton(2, [[1, 1], [1, 1]])


def _timed(name, fn, limit=None):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        ok = False
        detail += f"; took {dt:.1f}s, over {limit}s"
    else:
        detail += f"; {dt:.2f}s"
    return name, ok, detail


def check_mset_base(ks=(2, 3, 4)):
    def body():
        for k in ks:
            for i in range(k):
                got = set(itf.mset(IForest([tree(i)], k, 1)))
                want = {tree(j) for j in range(k) if j != i}
                if got != want:
                    return False, f"k={k} i={i}: got {sorted(map(itf.to_text, got))}"
        return True, f"k in {list(ks)}"
    return _timed("mset base case", body, 1)


def check_mset_completeness(max_nodes=4, ks=(2, 3)):
    def body():
        pairs = 0
        for k in ks:
            gs = [IForest(g, k, 1) for g in itf.enumerate_raw_forests(k, 1, max_nodes)]
            for F in itf.enumerate_forests(k, 1, max_nodes):
                ms = [IForest([t], k, 1) for t in itf.mset(F)]
                for T in ms:
                    if leq_h(T, F):
                        return False, f"{T} lies below {F}"
                for G in gs:
                    if not leq_h(G, F):
                        pairs += 1
                        if not any(leq_h(T, G) for T in ms):
                            return False, f"no M-tree of {F} below {G}"
        return True, f"{pairs} pairs checked"
    return _timed("mset completeness", body, 60)


def _antichain(classes, size):
    n = len(classes)
    le = [[leq_h(classes[i], classes[j]) for j in range(n)] for i in range(n)]
    for combo in itertools.combinations(range(n), size):
        if all(not le[a][b] and not le[b][a] for a, b in itertools.combinations(combo, 2)):
            return [classes[i] for i in combo]
    return None


def check_initial_segment(max_nodes=6):
    """Bottom of the depth-1, k=2 quotient."""
    def body():
        classes = itf.enumerate_forests(2, 1, max_nodes)
        anti = _antichain(classes, 3)
        if anti:
            return False, "antichain " + ", ".join(map(str, anti))
        names = ["[0]", "[1]", "[0,1]", "[0(1)]", "[1(0)]"]
        want = [itf.parse_forest(s, 2) for s in names]
        if any(w not in classes for w in want):
            return False, "a bottom class is missing from the enumeration"
        low = [c for c in classes if leq_h(c, want[3]) or leq_h(c, want[4])]
        if set(low) != set(want):
            return False, "classes below [0(1)] or [1(0)]: " + ", ".join(map(str, low))
        for c in classes:
            if c not in low and not all(leq_h(w, c) and not leq_h(c, w) for w in want):
                return False, f"{c} is not above the bottom classes"
        z, o, zo, a, b = want
        lt = lambda x, y: leq_h(x, y) and not leq_h(y, x)
        inc = lambda x, y: not leq_h(x, y) and not leq_h(y, x)
        order_ok = (inc(z, o) and lt(z, zo) and lt(o, zo) and lt(zo, a) and lt(zo, b) and inc(a, b))
        if not order_ok:
            return False, "order among the bottom classes differs"
        return True, f"{len(classes)} classes, widest antichain 2"
    return _timed("k=2 initial segment", body, 30)


def check_antichain_k3(max_nodes=4):
    def body():
        classes = itf.enumerate_forests(3, 1, max_nodes)
        anti = _antichain(classes, 3)
        if not anti:
            return False, "no antichain of size 3"
        # the singletons are the obvious witness; report a larger one too
        big = _antichain([c for c in classes if c.size > 1], 3)
        detail = "witness " + ", ".join(map(str, anti))
        if big:
            detail += "; also " + ", ".join(map(str, big))
        return True, detail
    return _timed("k=3 antichain", body, 30)


def _subset_loops(aut: Automaton) -> set:
    """Loops by definition: reachable subsets in which every state reaches
    every state, itself included, by a nonempty path inside the subset."""
    reach = sorted(aut.reachable())
    out = set()
    for r in range(1, len(reach) + 1):
        for combo in itertools.combinations(reach, r):
            s = frozenset(combo)
            ok = True
            for x in combo:
                seen = {t for t in aut.delta[x] if t in s}
                todo = list(seen)
                while todo:
                    y = todo.pop()
                    for t in aut.delta[y]:
                        if t in s and t not in seen:
                            seen.add(t)
                            todo.append(t)
                if seen != s:
                    ok = False
                    break
            if ok:
                out.add(s)
    return out


def check_loop_oracle(samples=200, max_prefix=6, max_period=8, seed=5):
    def body():
        rng = random.Random(seed)
        for trial in range(samples):
            aut = random_automaton(rng, 6, 3)
            got = set(loops(aut))
            lasso = lasso_infinity_sets(aut, max_prefix, max_period)
            if got != lasso:
                return False, f"sample {trial}: loops {sorted(map(sorted, got))} vs lassos {sorted(map(sorted, lasso))}"
            if got != _subset_loops(aut):
                return False, f"sample {trial}: strong-connectivity characterization differs"
        return True, f"{samples} automata"
    return _timed("loop oracle", body, 60)


def check_unfolding_maximal(samples=100, max_nodes=4, seed=6):
    def body():
        rng = random.Random(seed)
        trees = {k: itf.enumerate_trees(k, 2, max_nodes) for k in (2, 3)}
        count = 0
        for trial in range(samples):
            k = rng.choice((2, 3))
            acc = random_acceptor(rng, k, 5, 2)
            pre = build_cycle_preorder(acc)
            U = unfold(pre)
            for T in trees[k]:
                count += 1
                a = tree_into_preorder(T, pre)
                b = leq_h(IForest([T], k, 2), U)
                if a != b:
                    return False, f"sample {trial} tree {itf.to_text(T)}: morphism {a}, leq {b}"
        return True, f"{count} (tree, acceptor) pairs"
    return _timed("unfolding maximality", body, 120)


def check_round_trip(max_nodes=4, k=2):
    def body():
        bad = []
        forests = itf.enumerate_forests(k, 2, max_nodes)
        for F in forests:
            got = degree_forest(rho_acc(F))
            if not equiv_h(got, F):
                leafy = any(not x.label.children for t in F.trees for x in itf.nodes(t))
                bad.append(f"{F} -> {got}" + (" (has singleton labels)" if leafy else ""))
        if bad:
            return False, "; ".join(bad)
        return True, f"{len(forests)} forests"
    return _timed("round trip", body, 120)


def check_homomorphism(samples=50, seed=8):
    def body():
        rng = random.Random(seed)
        for trial in range(samples):
            k = rng.choice((2, 3))
            a = random_acceptor(rng, k, 3, alphabet_size=2)
            b = random_acceptor(rng, k, 3, alphabet_size=2)
            i = rng.randrange(k)
            da, db = degree_forest(a), degree_forest(b)
            for what, acc, want in (("oplus", oplus_acc(a, b), itf.join(da, db)),
                                    ("qi", qi_acc(i, a), itf.qi_forest(i, da)),
                                    ("dot", dot_acc(a, b), itf.dot_forest(da, db))):
                got = degree_forest(acc)
                if not equiv_h(got, want):
                    return False, f"sample {trial} {what}: {got} vs {want}"
        return True, f"{samples} pairs, three operations each"
    return _timed("degree homomorphism", body, 120)


def _words(max_len, min_len=0):
    return [w for n in range(min_len, max_len + 1) for w in itertools.product((0, 1), repeat=n)]


class _PeriodTable:
    """Labels of u.v^omega for every start state and every period v up to a
    length, computed along the trie of periods with bitmask passed-sets."""

    def __init__(self, periods, index):
        self.periods = periods
        self.index = index

    def labels(self, acc: MullerKAcceptor, starts) -> dict:
        aut = acc.automaton
        n = aut.num_states
        delta = aut.delta
        acts = {(): tuple(range(n))}
        passed = {(): (0,) * n}
        starts = sorted(set(starts))
        out = {q: [0] * len(self.periods) for q in starts}
        memo = {}
        for j, v in enumerate(self.periods):
            p, a = v[:-1], v[-1]
            act_p, pas_p = acts[p], passed[p]
            act = tuple(delta[x][a] for x in act_p)
            pas = tuple(pas_p[q] | (1 << act[q]) for q in range(n))
            acts[v], passed[v] = act, pas
            for q in starts:
                seen = set()
                x = q
                while x not in seen:
                    seen.add(x)
                    x = act[x]
                mask = 0
                y = x
                while True:
                    mask |= pas[y]
                    y = act[y]
                    if y == x:
                        break
                lab = memo.get(mask)
                if lab is None:
                    lab = acc.label(frozenset(s for s in range(n) if mask >> s & 1))
                    memo[mask] = lab
                out[q][j] = lab
        return out


def check_construction_semantics(samples=20, max_prefix=6, max_period=12, seed=9):
    def body():
        rng = random.Random(seed)
        prefixes = _words(max_prefix)
        periods = _words(max_period, 1)
        index = {v: j for j, v in enumerate(periods)}
        table = _PeriodTable(periods, index)
        # the case analysis depends only on the word, so do it once
        qi_keys, dot_keys = {}, {}
        qi_cases, dot_cases = [], []
        for u in prefixes:
            rq, rd = [], []
            for v in periods:
                w = LassoWord(u, v)
                c = qi_case(w)
                rq.append(qi_keys.setdefault(c, len(qi_keys)))
                side, rest = dot_case(w)
                if side == "B":
                    c = ("B", rest.prefix, index[rest.period])
                else:
                    c = ("A", rest)
                rd.append(dot_keys.setdefault(c, len(dot_keys)))
            qi_cases.append(rq)
            dot_cases.append(rd)
        checked = 0
        for trial in range(samples):
            k = rng.choice((2, 3))
            a = random_acceptor(rng, k, 3, alphabet_size=2)
            b = random_acceptor(rng, k, 3, alphabet_size=2)
            b2 = random_acceptor(rng, k, 3, alphabet_size=2)
            i = rng.randrange(k)
            # qi
            acc = qi_acc(i, a)
            ends = [run(acc.automaton, acc.automaton.initial, u) for u in prefixes]
            got = table.labels(acc, ends)
            want = [i if c is None else eval_lasso(a, c) for c in qi_keys]
            for ui, q in enumerate(ends):
                row, cases = got[q], qi_cases[ui]
                for j in range(len(periods)):
                    if row[j] != want[cases[j]]:
                        return False, f"qi sample {trial}: lasso {LassoWord(prefixes[ui], periods[j])}"
            # dot
            acc = dot_acc(b, b2)
            ends = [run(acc.automaton, acc.automaton.initial, u) for u in prefixes]
            got = table.labels(acc, ends)
            b2_rows = table.labels(b2, b2.automaton.states)
            want = []
            for c in dot_keys:
                if c[0] == "A":
                    want.append(eval_lasso(b, c[1]))
                else:
                    q = run(b2.automaton, b2.automaton.initial, c[1])
                    want.append(b2_rows[q][c[2]])
            for ui, q in enumerate(ends):
                row, cases = got[q], dot_cases[ui]
                for j in range(len(periods)):
                    if row[j] != want[cases[j]]:
                        return False, f"dot sample {trial}: lasso {LassoWord(prefixes[ui], periods[j])}"
            checked += 2 * len(prefixes) * len(periods)
        return True, f"{checked} lasso evaluations"
    return _timed("construction semantics", body, 120)


def check_aperiodic_closure(samples=50, seed=10):
    def body():
        rng = random.Random(seed)
        for trial in range(samples):
            k = rng.choice((2, 3))
            a = random_aperiodic_acceptor(rng, k, 4)
            b = random_aperiodic_acceptor(rng, k, 4)
            i = rng.randrange(k)
            built = {"oplus": oplus_acc(a, b), "qi": qi_acc(i, a), "dot": dot_acc(a, b),
                     "pi": pi_acc(i, a), "rho": rho_acc(degree_forest(a)),
                     "const": const_acc(i, k)}
            for name, acc in built.items():
                if not is_aperiodic(acc.automaton):
                    return False, f"sample {trial}: {name} is not aperiodic"
        return True, f"{samples} samples, five constructions and const"
    return _timed("aperiodicity closure", body, 60)


def check_join_law(samples=50, seed=11):
    def body():
        rng = random.Random(seed)
        nonvacuous = 0
        for trial in range(samples):
            k = rng.choice((2, 3))
            a, b, c = (random_acceptor(rng, k, 3, alphabet_size=2) for _ in range(3))
            ab = oplus_acc(a, b)
            if not (reduces(a, ab) and reduces(b, ab)):
                return False, f"sample {trial}: an argument is not below the join"
            for cc in (c, oplus_acc(c, ab), dot_acc(ab, c)):
                if reduces(a, cc) and reduces(b, cc):
                    nonvacuous += 1
                    if not reduces(ab, cc):
                        return False, f"sample {trial}: join is not least"
        return True, f"{samples} triples, {nonvacuous} upper bounds tested"
    return _timed("join law", body, 30)


def check_patterns(samples=200, seed=12):
    def body():
        rng = random.Random(seed)
        counts = [0, 0]
        for trial in range(samples):
            aut = random_automaton(rng, 5, 3)
            ap = is_aperiodic(aut)
            d1 = has_d_counting_pattern(aut, 1)
            br = brute_counting_pattern(aut)
            if not (ap == (not d1) == (not br)):
                return False, f"sample {trial}: aperiodic={ap} d1={d1} search={br}"
            counts[ap] += 1
        fixed = (not is_aperiodic(M2) and is_aperiodic(M3) and has_d_counting_pattern(M2, 2)
                 and has_balanced_counting_pattern(M2))
        if not fixed:
            return False, "M2/M3 facts differ"
        return True, f"{counts[1]} aperiodic, {counts[0]} not"
    return _timed("pattern checks", body, 30)


ALL = [check_mset_base, check_mset_completeness, check_initial_segment, check_antichain_k3,
       check_loop_oracle, check_unfolding_maximal, check_round_trip, check_homomorphism,
       check_construction_semantics, check_aperiodic_closure, check_join_law, check_patterns]


def run_all(max_nodes: int = 4) -> list:
    """All checks at reduced size; max_nodes bounds the forest enumerations."""
    n = max(1, max_nodes)
    return [
        check_mset_base(),
        check_mset_completeness(min(n, 4)),
        check_initial_segment(max(n, 2)),
        check_antichain_k3(max(min(n, 4), 1)),
        check_loop_oracle(40),
        check_unfolding_maximal(20, min(n, 4)),
        check_round_trip(min(n, 4)),
        check_homomorphism(10),
        check_construction_semantics(2, 4, 8),
        check_aperiodic_closure(10),
        check_join_law(10),
        check_patterns(50),
    ]
