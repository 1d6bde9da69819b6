"""Iterated labeled trees and forests under the homomorphic preorder.

A depth-1 tree carries base labels ``0..k-1``; a depth-(n+1) tree carries
depth-n trees as labels.  A base label ``i`` at higher depth stands for the
single-node tree labeled ``i``, so trees of different depths can be mixed
and are lifted to a common depth on construction.

Trees are hash-consed: structurally equal trees are the same object, which
makes the memo tables of the preorder cheap to key.
"""

from __future__ import annotations

import itertools
import threading

from .errors import InputError, ResourceError

DEFAULT_VERIFY_BOUND = 6
DEFAULT_ENUM_CAP = 10**6


class ITree:
    """An immutable, interned labeled tree.  Build with :func:`tree`."""

    __slots__ = ("label", "children", "depth", "size", "key", "_hash")

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"ITree({to_text(self)})"

    def __str__(self):
        return to_text(self)

    def __reduce__(self):
        return (tree, (self.label, self.children))


_intern: dict = {}
_intern_lock = threading.Lock()


def _label_key(label):
    return (0, label) if isinstance(label, int) else (1, label.key)


def _new(label, children: tuple, depth: int) -> ITree:
    ident = (label, children)
    t = _intern.get(ident)
    if t is not None:
        return t
    with _intern_lock:
        t = _intern.get(ident)
        if t is None:
            t = object.__new__(ITree)
            t.label = label
            t.children = children
            t.depth = depth
            t.size = (1 if isinstance(label, int) else label.size) + sum(c.size for c in children)
            t.key = (_label_key(label), tuple(c.key for c in children))
            t._hash = hash(t.key)
            _intern[ident] = t
    return t


def leaf_label(i: int, depth: int):
    """The label that base value i denotes at the given depth."""
    if depth == 1:
        return i
    return _new(leaf_label(i, depth - 1), (), depth - 1)


def lift(t: ITree, depth: int) -> ITree:
    """View a tree as a tree of higher depth, each base i read as s(i)."""
    if t.depth == depth:
        return t
    if t.depth > depth:
        raise InputError(f"cannot lower a depth-{t.depth} tree to depth {depth}")
    label = t.label
    if isinstance(label, int):
        new_label = leaf_label(label, depth)
    else:
        new_label = lift(label, depth - 1)
    return _new(new_label, tuple(sorted(lift(c, depth) for c in t.children)), depth)


def tree(label, children=()) -> ITree:
    """Build a tree; labels and children are lifted to a common depth."""
    children = tuple(children)
    for c in children:
        if not isinstance(c, ITree):
            raise InputError(f"child {c!r} is not a tree")
    if isinstance(label, bool) or not isinstance(label, (int, ITree)):
        raise InputError(f"label {label!r} must be an integer or a tree")
    if isinstance(label, int) and label < 0:
        raise InputError("base labels must be nonnegative")
    depth = 1 if isinstance(label, int) else label.depth + 1
    for c in children:
        depth = max(depth, c.depth)
    if isinstance(label, int):
        label = leaf_label(label, depth)
    elif label.depth != depth - 1:
        label = lift(label, depth - 1)
    children = tuple(sorted(lift(c, depth) for c in children))
    return _new(label, children, depth)


def s_wrap(t: ITree) -> ITree:
    """The single node labeled by t."""
    return _new(t, (), t.depth + 1)


def nodes(t: ITree):
    """All subtrees of t (one per node), preorder."""
    yield t
    for c in t.children:
        yield from nodes(c)


def base_labels(t: ITree) -> set:
    out = set()
    for n in nodes(t):
        if isinstance(n.label, int):
            out.add(n.label)
        else:
            out |= base_labels(n.label)
    return out


def is_leaf_tree(t: ITree) -> bool:
    """True when t is a base label in disguise: s(s(...s(i)))."""
    while not t.children:
        if isinstance(t.label, int):
            return True
        t = t.label
    return False


class IForest:
    """A finite list of trees of a common depth, with the label bound k."""

    __slots__ = ("trees", "k", "depth")

    def __init__(self, trees=(), k: int | None = None, depth: int | None = None):
        trees = tuple(trees)
        for t in trees:
            if not isinstance(t, ITree):
                raise InputError(f"{t!r} is not a tree")
        d = max([t.depth for t in trees] + [depth or 1])
        self.trees = tuple(lift(t, d) for t in trees)
        self.depth = d
        if k is None:
            labels = set().union(*(base_labels(t) for t in trees)) if trees else set()
            k = max(2, max(labels) + 1) if labels else 2
        elif labels_exceed(self.trees, k):
            raise InputError(f"forest uses a label >= k={k}")
        self.k = k

    def __iter__(self):
        return iter(self.trees)

    def __len__(self):
        return len(self.trees)

    @property
    def size(self) -> int:
        return sum(t.size for t in self.trees)

    def __eq__(self, other):
        return isinstance(other, IForest) and self.trees == other.trees and self.k == other.k

    def __hash__(self):
        return hash((self.trees, self.k))

    def __repr__(self):
        return f"IForest({to_text(self)}, k={self.k})"

    def __str__(self):
        return to_text(self)


def labels_exceed(trees, k) -> bool:
    return any(v >= k for t in trees for v in base_labels(t))


def as_forest(x, k=None) -> IForest:
    if isinstance(x, IForest):
        return x
    if isinstance(x, ITree):
        return IForest([x], k)
    if isinstance(x, (list, tuple)):
        return IForest(x, k)
    raise InputError(f"{x!r} is not a forest")


def _common(F: IForest, G: IForest):
    d = max(F.depth, G.depth)
    return [lift(t, d) for t in F.trees], [lift(t, d) for t in G.trees], d


# the preorder

_emb_memo: dict = {}


def _label_leq(a, b) -> bool:
    if isinstance(a, int):
        return a == b
    return _emb(a, b)


def _emb(t: ITree, s: ITree) -> bool:
    """t maps homomorphically into s."""
    key = (t, s)
    r = _emb_memo.get(key)
    if r is None:
        r = (_label_leq(t.label, s.label) and all(_emb(c, s) for c in t.children)) \
            or any(_emb(t, c) for c in s.children)
        _emb_memo[key] = r
    return r


def tree_leq(t: ITree, s: ITree) -> bool:
    d = max(t.depth, s.depth)
    return _emb(lift(t, d), lift(s, d))


def leq_h(F, G) -> bool:
    """Every tree of F maps into some tree of G."""
    F, G = as_forest(F), as_forest(G)
    fs, gs, _ = _common(F, G)
    return all(any(_emb(t, s) for s in gs) for t in fs)


def equiv_h(F, G) -> bool:
    return leq_h(F, G) and leq_h(G, F)


# structural operations

def join(F, G) -> IForest:
    F, G = as_forest(F), as_forest(G)
    fs, gs, d = _common(F, G)
    return IForest(fs + gs, max(F.k, G.k), d)


def _graft(t: ITree, below: tuple) -> ITree:
    if not t.children:
        return tree(t.label, below)
    return tree(t.label, [_graft(c, below) for c in t.children])


def dot_forest(F, G) -> IForest:
    """Attach a copy of G below every leaf of F."""
    F, G = as_forest(F), as_forest(G)
    k = max(F.k, G.k)
    if not F.trees:
        return IForest(G.trees, k, G.depth)
    fs, gs, d = _common(F, G)
    if not gs:
        return IForest(fs, k, d)
    return IForest([_graft(t, tuple(gs)) for t in fs], k, d)


def r_flatten(F) -> IForest:
    """The forest of all node labels of F."""
    F = as_forest(F)
    if F.depth < 2:
        raise InputError("r_flatten needs a forest of depth >= 2")
    return IForest([n.label for t in F.trees for n in nodes(t)], F.k, F.depth - 1)


def qi_forest(i: int, F) -> IForest:
    """s(i . r(F)): one node labeled by the tree with root i over r(F)."""
    F = as_forest(F)
    if not 0 <= i < F.k:
        raise InputError(f"label {i} is not below k={F.k}")
    inner = tree(i, r_flatten(F).trees)
    return IForest([s_wrap(inner)], F.k)


# minimization

def _tree_reductions(t: ITree):
    """Trees obtained from t by one deletion, contraction or label shrink."""
    ch = t.children
    for j, c in enumerate(ch):
        rest = ch[:j] + ch[j + 1:]
        yield tree(t.label, rest)
        if c.children:
            yield tree(t.label, rest + c.children)
    for j, c in enumerate(ch):
        rest = ch[:j] + ch[j + 1:]
        for c2 in _tree_reductions(c):
            yield tree(t.label, rest + (c2,))
    if not isinstance(t.label, int):
        for lab in _label_reductions(t.label):
            yield tree(lab, ch)


def _label_reductions(v: ITree):
    for n in nodes(v):
        if n is not v:
            yield n
    yield from _tree_reductions(v)


def _forest_reductions(trees: tuple):
    for j, t in enumerate(trees):
        yield trees[:j] + trees[j + 1:]
    for j, t in enumerate(trees):
        if t.children:
            yield trees[:j] + t.children + trees[j + 1:]
    for j, t in enumerate(trees):
        for t2 in _tree_reductions(t):
            yield trees[:j] + (t2,) + trees[j + 1:]


def _forest_equiv(a: tuple, b: tuple) -> bool:
    return all(any(_emb(x, y) for y in b) for x in a) and \
        all(any(_emb(y, x) for x in a) for y in b)


def _size(trees) -> int:
    return sum(t.size for t in trees)


def _greedy(trees: tuple) -> tuple:
    trees = tuple(sorted(set(trees)))
    while True:
        n = _size(trees)
        for cand in _forest_reductions(trees):
            if _size(cand) < n and _forest_equiv(cand, trees):
                trees = tuple(sorted(set(cand)))
                break
        else:
            return trees


_min_tree_memo: dict = {}


def minimize_tree(t: ITree) -> ITree:
    """A smallest tree equivalent to t, in canonical form."""
    r = _min_tree_memo.get(t)
    if r is not None:
        return r
    cur = _canon_labels(t)
    while True:
        n = cur.size
        for cand in itertools.chain(_tree_reductions(cur), (c for c in nodes(cur) if c is not cur)):
            if cand.size < n and _emb(cand, cur) and _emb(cur, cand):
                cur = cand
                break
        else:
            break
    cur = _canon_labels(cur)
    _min_tree_memo[t] = cur
    return cur


def _canon_labels(t: ITree) -> ITree:
    label = t.label if isinstance(t.label, int) else minimize_tree(t.label)
    return tree(label, [_canon_labels(c) for c in t.children])


_small_classes_cache: dict = {}


def _classes_below(k: int, depth: int, n: int) -> list:
    key = (k, depth, n)
    if key not in _small_classes_cache:
        _small_classes_cache[key] = enumerate_forests(k, depth, n)
    return _small_classes_cache[key]


def minimize(F, verify_bound: int = DEFAULT_VERIFY_BOUND) -> IForest:
    """A canonical smallest forest h-equivalent to F.

    Greedy single-step reductions (tree deletion, root removal, subtree
    deletion, node contraction, label shrinking) are applied while they
    preserve equivalence.  When the result has at most ``verify_bound``
    nodes it is compared against every equivalence class with fewer nodes.
    """
    F = as_forest(F)
    trees = _greedy(tuple(_canon_labels(t) for t in F.trees))
    trees = tuple(sorted(set(_canon_labels(t) for t in trees)))
    out = IForest(trees, F.k, F.depth)
    if verify_bound and trees and out.size <= verify_bound and out.size > 1:
        k_eff = max(base_labels_forest(out)) + 1
        for cls in _classes_below(max(k_eff, 2), out.depth, out.size - 1):
            if _forest_equiv(cls.trees, trees):
                # greedy got stuck above the minimum; the smaller class wins
                return IForest(cls.trees, F.k, F.depth)
    return out


def base_labels_forest(F: IForest) -> set:
    return set().union(*(base_labels(t) for t in F.trees)) if F.trees else set()


def canonical_decomposition(F) -> list:
    """The pairwise incomparable trees of the minimal form."""
    return list(minimize(F).trees)


# the M operator

def _m_tree(t: ITree, k: int) -> list:
    if t.depth == 1:
        i = t.label
        if not t.children:
            return [tree(j) for j in range(k) if j != i]
        below = _m_forest(t.children, k)
        return [tree(j, [g]) for j in range(k) if j != i for g in below]
    heads = [s_wrap(v) for v in _m_tree(t.label, k)]
    if not t.children:
        return heads
    below = _m_forest(t.children, k)
    return [tree(h.label, [g]) for h in heads for g in below]


def _m_forest(trees: tuple, k: int) -> list:
    if len(trees) == 1:
        return _m_tree(trees[0], k)
    parts = [_m_tree(t, k) for t in trees]
    return [tree(j, choice) for j in range(k) for choice in itertools.product(*parts)]


def mset(F) -> list:
    """Trees not below F that together lie below every forest not below F.

    Computed by the clause recursion on the minimal form of F; the results
    are minimized, deduplicated and sorted.
    """
    F = as_forest(F)
    if F.depth > 2:
        raise InputError("mset supports forests of depth <= 2")
    trees = minimize(F).trees
    if not trees:
        raise InputError("mset of the empty forest is undefined")
    out = {minimize_tree(t) for t in _m_forest(trees, F.k)}
    return sorted(out)


# enumeration

def _enum_tables(k: int, depth: int, n: int, cap: int):
    """Trees of each exact size 1..n (lists), built bottom-up."""
    trees_by = {}
    forests_by = {}
    if depth > 1:
        lower_trees, _ = _enum_tables(k, depth - 1, n, cap)
    total = [0]

    def labels_of(s):
        if depth == 1:
            return list(range(k)) if s == 1 else []
        return lower_trees.get(s, [])

    def forests_of(m):
        # multisets of trees, total size m; trees indexed by (size, position)
        if m in forests_by:
            return forests_by[m]
        flat = [(s, j) for s in range(1, m + 1) for j in range(len(trees_by.get(s, [])))]
        out = []

        def rec(remaining, start, acc):
            if remaining == 0:
                out.append(tuple(trees_by[s][j] for s, j in acc))
                total[0] += 1
                if total[0] > cap:
                    raise ResourceError(f"enumeration exceeds cap of {cap} forests")
                return
            for idx in range(start, len(flat)):
                s, j = flat[idx]
                if s > remaining:
                    break
                acc.append((s, j))
                rec(remaining - s, idx, acc)
                acc.pop()

        rec(m, 0, [])
        forests_by[m] = out
        return out

    for m in range(1, n + 1):
        level = []
        for s in range(1, m + 1):
            for lab in labels_of(s):
                if m == s:
                    level.append(tree(lab))
                else:
                    for kids in forests_of(m - s):
                        level.append(tree(lab, kids))
                        if len(level) > cap:
                            raise ResourceError(f"enumeration exceeds cap of {cap} trees")
        trees_by[m] = sorted(set(level))
        forests_by.clear()
    return trees_by, forests_of


def enumerate_trees(k: int, depth: int, max_nodes: int, cap: int = DEFAULT_ENUM_CAP) -> list:
    """Every tree with at most max_nodes nodes (no deduplication up to equivalence)."""
    trees_by, _ = _enum_tables(k, depth, max_nodes, cap)
    return [t for s in range(1, max_nodes + 1) for t in trees_by.get(s, [])]


def enumerate_raw_forests(k: int, depth: int, max_nodes: int, cap: int = DEFAULT_ENUM_CAP) -> list:
    """Every nonempty forest with at most max_nodes nodes, as tuples of trees."""
    _, forests_of = _enum_tables(k, depth, max_nodes, cap)
    return [f for m in range(1, max_nodes + 1) for f in forests_of(m)]


def enumerate_forests(k: int, depth: int, max_nodes: int, cap: int = DEFAULT_ENUM_CAP) -> list:
    """One canonical minimal forest per equivalence class of forests with
    at most max_nodes nodes, sorted by (size, canonical key)."""
    reps = {}
    for f in enumerate_raw_forests(k, depth, max_nodes, cap):
        g = _greedy(tuple(_canon_labels(t) for t in f))
        g = tuple(sorted(set(_canon_labels(t) for t in g)))
        reps[g] = True
    classes = sorted(reps, key=lambda g: (_size(g), tuple(t.key for t in g)))
    kept = []
    for g in classes:
        if not any(_forest_equiv(g, h) for h in kept if _size(h) == _size(g)):
            kept.append(g)
    return [IForest(g, k, depth) for g in kept]


def hasse(k: int, depth: int, max_nodes: int, cap: int = DEFAULT_ENUM_CAP) -> str:
    """DOT digraph of the covering relation between the enumerated classes."""
    classes = enumerate_forests(k, depth, max_nodes, cap)
    n = len(classes)
    less = [[i != j and leq_h(classes[i], classes[j]) for j in range(n)] for i in range(n)]
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=box];"]
    for i, f in enumerate(classes):
        lines.append(f'  n{i} [label="{to_text(f)}"];')
    for i in range(n):
        for j in range(n):
            if less[i][j] and not any(less[i][c] and less[c][j] for c in range(n) if c not in (i, j)):
                lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def covers(classes: list) -> list:
    """Covering pairs (i, j) of the strict order on a list of classes."""
    n = len(classes)
    less = [[i != j and leq_h(classes[i], classes[j]) for j in range(n)] for i in range(n)]
    return [(i, j) for i in range(n) for j in range(n)
            if less[i][j] and not any(less[i][c] and less[c][j] for c in range(n) if c not in (i, j))]


# text and JSON

def _label_text(label) -> str:
    return str(label) if isinstance(label, int) else f"<{to_text(label)}>"


def to_text(x) -> str:
    if isinstance(x, IForest):
        return "[" + ",".join(to_text(t) for t in x.trees) + "]"
    s = _label_text(x.label)
    if x.children:
        s += "(" + ",".join(to_text(c) for c in x.children) + ")"
    return s


class _Parser:
    def __init__(self, text: str):
        self.s = text.replace("⟨", "<").replace("⟩", ">")
        self.i = 0

    def error(self, msg):
        raise InputError(f"forest syntax: {msg} at position {self.i} in {self.s!r}")

    def peek(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.i += 1

    def label(self):
        c = self.peek()
        if c == "<":
            self.i += 1
            t = self.tree()
            self.expect(">")
            return t
        j = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected a label")
        return int(self.s[j:self.i])

    def tree(self):
        lab = self.label()
        kids = []
        if self.peek() == "(":
            self.i += 1
            kids.append(self.tree())
            while self.peek() == ",":
                self.i += 1
                kids.append(self.tree())
            self.expect(")")
        return tree(lab, kids)

    def forest(self):
        if self.peek() == "[":
            self.i += 1
            out = []
            if self.peek() != "]":
                out.append(self.tree())
                while self.peek() == ",":
                    self.i += 1
                    out.append(self.tree())
            self.expect("]")
        else:
            out = [self.tree()]
        if self.peek():
            self.error("trailing input")
        return out


def parse_forest(text: str, k: int | None = None) -> IForest:
    """Parse ``[T1,T2]``, ``i(T1,T2)``, ``<T>`` notation."""
    return IForest(_Parser(text).forest(), k)


def parse_tree(text: str) -> ITree:
    trees = _Parser(text).forest()
    if len(trees) != 1:
        raise InputError(f"expected a single tree, got {len(trees)}")
    return trees[0]


def tree_to_json(t: ITree) -> dict:
    label = t.label if isinstance(t.label, int) else tree_to_json(t.label)
    return {"label": label, "children": [tree_to_json(c) for c in t.children]}


def forest_to_json(F: IForest) -> dict:
    return {"k": F.k, "depth": F.depth, "trees": [tree_to_json(t) for t in F.trees]}


def tree_from_json(obj, where="tree") -> ITree:
    if not isinstance(obj, dict):
        raise InputError(f"{where} must be an object")
    if "label" not in obj:
        raise InputError(f"{where}: missing field 'label'")
    lab = obj["label"]
    if isinstance(lab, dict):
        lab = tree_from_json(lab, where + ".label")
    elif not isinstance(lab, int) or isinstance(lab, bool) or lab < 0:
        raise InputError(f"{where}: field 'label' must be a nonnegative integer or a node")
    kids = obj.get("children", [])
    if not isinstance(kids, list):
        raise InputError(f"{where}: field 'children' must be a list")
    return tree(lab, [tree_from_json(c, f"{where}.children[{j}]") for j, c in enumerate(kids)])


def forest_from_json(obj) -> IForest:
    if not isinstance(obj, dict):
        raise InputError("forest JSON must be an object")
    for key in ("k", "trees"):
        if key not in obj:
            raise InputError(f"forest: missing field '{key}'")
    k = obj["k"]
    if not isinstance(k, int) or k < 2:
        raise InputError("forest: field 'k' must be an integer >= 2")
    trees = obj["trees"]
    if not isinstance(trees, list) or not trees:
        raise InputError("forest: field 'trees' must be a nonempty list")
    depth = obj.get("depth")
    if depth is not None and (not isinstance(depth, int) or depth < 1):
        raise InputError("forest: field 'depth' must be a positive integer")
    ts = [tree_from_json(t, f"trees[{j}]") for j, t in enumerate(trees)]
    if depth is not None and any(t.depth > depth for t in ts):
        raise InputError(f"forest: a tree is deeper than the declared depth {depth}")
    return IForest(ts, k, depth)
