"""Acceptors for the operations on k-partitions over the binary alphabet.

Letters of the ternary alphabet are coded by six-bit blocks that all start
with ``11``; since ``11`` never occurs elsewhere inside or across blocks,
a decoder anchored at position 0 can never lose alignment.  The builders
below simulate the argument acceptors on decoded input and label loops by
structure; ``spec_eval_qi`` and ``spec_eval_dot`` evaluate the case
definitions directly on lassos and serve as independent references.
"""

from __future__ import annotations

import json
import math
import os
from typing import Sequence

from . import iforests as itf
from .acceptors import (Automaton, Labeling, LassoWord, MullerKAcceptor, check_same_k,
                        eval_lasso)
from .errors import InputError

BLOCKS = {0: "110000", 1: "110100", 2: "110010"}
_DECODE = {v: k for k, v in BLOCKS.items()}
BLOCK = 6


def _prefixes(words) -> set:
    return {w[:j] for w in words for j in range(len(w))}


_ANY_PREFIX = _prefixes(BLOCKS.values())
_DATA_PREFIX = _prefixes([BLOCKS[0], BLOCKS[1]])
_SEP_PREFIX = _prefixes([BLOCKS[2]])


def _word(w) -> tuple:
    if isinstance(w, str):
        if not all(c in "0123456789" for c in w):
            raise InputError(f"{w!r} is not a word of digits")
        return tuple(int(c) for c in w)
    return tuple(w)


def _like(src, bits: list):
    return "".join(map(str, bits)) if isinstance(src, str) else tuple(bits)


def encode_f(w):
    """Code each letter 0, 1, 2 by its block."""
    out = []
    for a in _word(w):
        if a not in BLOCKS:
            raise InputError(f"letter {a} outside the ternary alphabet")
        out.extend(int(c) for c in BLOCKS[a])
    return _like(w, out)


def encode_g(w):
    """Code each bit by its block followed by the block of 2."""
    out = []
    for a in _word(w):
        if a not in (0, 1):
            raise InputError(f"letter {a} outside the binary alphabet")
        out.extend(int(c) for c in BLOCKS[a] + BLOCKS[2])
    return _like(w, out)


def decode_f(w):
    """Inverse of encode_f on finite words made of whole blocks."""
    bits = "".join(map(str, _word(w)))
    if len(bits) % BLOCK:
        raise InputError("length is not a multiple of the block length")
    out = []
    for j in range(0, len(bits), BLOCK):
        blk = bits[j:j + BLOCK]
        if blk not in _DECODE:
            raise InputError(f"{blk} is not a block")
        out.append(_DECODE[blk])
    return _like(w, out)


def decode_g(w):
    """Inverse of encode_g on finite words made of whole block pairs."""
    letters = _word(decode_f(w))
    if len(letters) % 2 or any(a == 2 for a in letters[::2]) or any(a != 2 for a in letters[1::2]):
        raise InputError("not the image of a binary word")
    return _like(w, list(letters[::2]))


# generic breadth-first builder

def _build(start, step, alphabet_size: int):
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        row = []
        for a in range(alphabet_size):
            t = step(s, a)
            j = index.get(t)
            if j is None:
                j = index[t] = len(order)
                order.append(t)
            row.append(j)
        rows.append(row)
    return Automaton(alphabet_size, rows, 0), order


def _binary(acc: MullerKAcceptor):
    if acc.automaton.alphabet_size != 2:
        raise InputError("this construction works over the binary alphabet only")


class _ConstLabeling(Labeling):
    def __init__(self, value):
        self.value = value

    def label(self, loop):
        return self.value

    def forced(self, loop):
        return loop


def const_acc(i: int, k: int, alphabet_size: int = 2) -> MullerKAcceptor:
    """One state with all self-loops, labeled i."""
    if not 0 <= i < k:
        raise InputError(f"constant {i} is not below k={k}")
    aut = Automaton(alphabet_size, [[0] * alphabet_size], 0)
    return MullerKAcceptor(aut, k, _ConstLabeling(i), validate=False)


class _PartLabeling(Labeling):
    """Labels inherited from sub-acceptors living in tagged coordinates.

    ``parts[tag] = (acceptor, coordinate)`` says that states tagged ``tag``
    carry a state of that acceptor at that tuple position; ``special``
    states force ``special_label`` on every loop that meets them.
    """

    def __init__(self, states, parts, special=frozenset(), special_label=None):
        self.states = states
        self.parts = parts
        self.special = frozenset(special)
        self.special_label = special_label

    def _part(self, loop):
        s = self.states[next(iter(loop))]
        acc, pos = self.parts[s[0]]
        return acc, pos, frozenset(self.states[x][pos] for x in loop)

    def label(self, loop):
        if loop & self.special:
            return self.special_label
        acc, _, proj = self._part(loop)
        return acc.label(proj)

    def forced(self, loop):
        hit = loop & self.special
        if hit:
            return hit
        acc, pos, proj = self._part(loop)
        inner = acc.forced(proj)
        if not inner:
            return frozenset()
        return frozenset(x for x in loop if self.states[x][pos] in inner)


def oplus_acc(a: MullerKAcceptor, b: MullerKAcceptor) -> MullerKAcceptor:
    """Letter 0 continues as a, any other first letter as b."""
    check_same_k(a, b)
    m = a.automaton.alphabet_size
    if b.automaton.alphabet_size != m:
        raise InputError("acceptors disagree on the alphabet")
    da, db = a.automaton.delta, b.automaton.delta

    def step(s, x):
        if s[0] == "fresh":
            return ("A", a.automaton.initial) if x == 0 else ("B", b.automaton.initial)
        if s[0] == "A":
            return ("A", da[s[1]][x])
        return ("B", db[s[1]][x])

    aut, order = _build(("fresh",), step, m)
    lab = _PartLabeling(order, {"A": (a, 1), "B": (b, 1)})
    return MullerKAcceptor(aut, a.k, lab, validate=False)


def qi_acc(i: int, a: MullerKAcceptor) -> MullerKAcceptor:
    """Value i off the block code or with infinitely many 2-blocks; otherwise
    the value of a on the decoded word after the last 2-block."""
    _binary(a)
    if not 0 <= i < a.k:
        raise InputError(f"label {i} is not below k={a.k}")
    da = a.automaton.delta
    init = a.automaton.initial

    def step(s, x):
        if s[0] == "sink":
            return s
        p = s[1] + str(x)
        if p in _DECODE:
            letter = _DECODE[p]
            q = init if letter == 2 else da[s[2]][letter]
            return ("D", "", q)
        if p in _ANY_PREFIX:
            return ("D", p, s[2])
        return ("sink",)

    aut, order = _build(("D", "", init), step, 2)
    marked = BLOCKS[2][:-1]
    special = {j for j, s in enumerate(order) if s[0] == "sink" or s[1] == marked}
    lab = _PartLabeling(order, {"D": (a, 2)}, special, i)
    return MullerKAcceptor(aut, a.k, lab, validate=False)


def dot_acc(a: MullerKAcceptor, b: MullerKAcceptor) -> MullerKAcceptor:
    """a on g-coded input; after the first letter that leaves every g-code,
    b on the rest."""
    _binary(a)
    _binary(b)
    check_same_k(a, b)
    da, db = a.automaton.delta, b.automaton.delta

    def step(s, x):
        if s[0] == "B":
            return ("B", db[s[1]][x])
        _, phase, p, q = s
        p = p + str(x)
        if phase == "data":
            if p == BLOCKS[0] or p == BLOCKS[1]:
                return ("A", "sep", "", da[q][_DECODE[p]])
            if p in _DATA_PREFIX:
                return ("A", "data", p, q)
        else:
            if p == BLOCKS[2]:
                return ("A", "data", "", q)
            if p in _SEP_PREFIX:
                return ("A", "sep", p, q)
        return ("B", b.automaton.initial)

    aut, order = _build(("A", "data", "", a.automaton.initial), step, 2)
    lab = _PartLabeling(order, {"A": (a, 3), "B": (b, 1)})
    return MullerKAcceptor(aut, a.k, lab, validate=False)


def pi_acc(i: int, a: MullerKAcceptor) -> MullerKAcceptor:
    return dot_acc(const_acc(i, a.k), a)


def _oplus_all(accs: Sequence[MullerKAcceptor]) -> MullerKAcceptor:
    out = accs[0]
    for x in accs[1:]:
        out = oplus_acc(out, x)
    return out


def nu_acc(v: itf.ITree, k: int) -> MullerKAcceptor:
    """Leaves give constants; an inner node labeled i gives q_i over the sum
    of its children."""
    if v.depth != 1:
        raise InputError("nu_acc needs a depth-1 tree")
    if not v.children:
        return const_acc(v.label, k)
    return qi_acc(v.label, _oplus_all([nu_acc(c, k) for c in v.children]))


def _rho_tree(t: itf.ITree, k: int) -> MullerKAcceptor:
    head = nu_acc(t.label, k)
    if not t.children:
        return head
    return dot_acc(head, _oplus_all([_rho_tree(c, k) for c in t.children]))


def rho_acc(F, k: int | None = None, max_states: int | None = None) -> MullerKAcceptor:
    """Witness acceptor for a depth-2 forest: the sum of its trees' acceptors."""
    F = itf.as_forest(F)
    if k is None:
        k = F.k
    if not F.trees:
        raise InputError("rho_acc of the empty forest is undefined")
    if F.depth > 2:
        raise InputError("rho_acc needs a forest of depth <= 2")
    trees = [itf.lift(t, 2) for t in F.trees]
    acc = _oplus_all([_rho_tree(t, k) for t in trees])
    if max_states is not None and acc.automaton.num_states > max_states:
        raise InputError(f"rho_acc built {acc.automaton.num_states} states, above {max_states}")
    return acc


# direct evaluation of the case definitions

def _aligned(w: LassoWord, unit: int) -> tuple:
    """(prefix, period) of the same word with both lengths multiples of unit."""
    start = -(-len(w.prefix) // unit) * unit
    per = len(w.period) * unit // math.gcd(len(w.period), unit)
    bits = w.take(start + per)
    return bits[:start], bits[start:]


def _blocks(bits: tuple) -> list:
    return ["".join(map(str, bits[j:j + BLOCK])) for j in range(0, len(bits), BLOCK)]


def qi_case(w: LassoWord):
    """``None`` for the first case, else the decoded lasso whose a-value is taken."""
    if any(x not in (0, 1) for x in w.prefix + w.period):
        raise InputError("binary lasso expected")
    pre, per = _aligned(w, BLOCK)
    pre_b, per_b = _blocks(pre), _blocks(per)
    if any(b not in _DECODE for b in pre_b + per_b):
        return None
    if any(_DECODE[b] == 2 for b in per_b):
        return None
    letters = [_DECODE[b] for b in pre_b]
    last = max((j for j, x in enumerate(letters) if x == 2), default=-1)
    return LassoWord(letters[last + 1:], [_DECODE[b] for b in per_b])


def spec_eval_qi(i: int, a: MullerKAcceptor, w: LassoWord) -> int:
    tail = qi_case(w)
    return i if tail is None else eval_lasso(a, tail)


def _g_extendable(bits: tuple) -> bool:
    """Whether the finite word is a prefix of some g-code."""
    s = "".join(map(str, bits))
    for j in range(0, len(s), BLOCK):
        blk = s[j:j + BLOCK]
        allowed = (BLOCKS[0], BLOCKS[1]) if (j // BLOCK) % 2 == 0 else (BLOCKS[2],)
        if not any(c.startswith(blk) for c in allowed):
            return False
    return True


def dot_case(w: LassoWord):
    """("A", decoded lasso) when the word is a g-code, else ("B", rest)."""
    if any(x not in (0, 1) for x in w.prefix + w.period):
        raise InputError("binary lasso expected")
    unit = 2 * BLOCK
    pre, per = _aligned(w, unit)
    if _g_extendable(pre + per):
        # the aligned period repeats whole block pairs, so one copy decides
        return "A", LassoWord(decode_g(pre), decode_g(per))
    n = 1
    while _g_extendable(w.take(n)):
        n += 1
    return "B", w.drop(n)


def spec_eval_dot(a: MullerKAcceptor, b: MullerKAcceptor, w: LassoWord) -> int:
    side, rest = dot_case(w)
    return eval_lasso(a if side == "A" else b, rest)


# expressions for the command line

def build_expr(expr, base_dir: str = ".", k: int | None = None) -> MullerKAcceptor:
    """Evaluate a construction expression given as parsed JSON."""
    from .acceptors import acceptor_from_json

    if not isinstance(expr, dict):
        raise InputError("expression must be an object")
    if "file" in expr:
        path = os.path.join(base_dir, expr["file"])
        try:
            with open(path) as fh:
                return acceptor_from_json(json.load(fh))
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise InputError(f"{path}: invalid JSON ({e.msg})") from None
    op = expr.get("op")
    args = expr.get("args", [])
    if not isinstance(args, list):
        raise InputError("expression: field 'args' must be a list")
    kk = expr.get("k", k)
    subs = [build_expr(x, base_dir, kk) for x in args]
    arity = {"oplus": 2, "dot": 2, "qi": 1, "pi": 1, "const": 0}
    if op not in arity:
        raise InputError(f"expression: unknown op {op!r}")
    if len(subs) != arity[op]:
        raise InputError(f"expression: op {op!r} takes {arity[op]} arguments, got {len(subs)}")
    if op in ("qi", "pi", "const"):
        i = expr.get("i")
        if not isinstance(i, int) or isinstance(i, bool):
            raise InputError(f"expression: op {op!r} needs an integer field 'i'")
    if op == "oplus":
        return oplus_acc(*subs)
    if op == "dot":
        return dot_acc(*subs)
    if op == "qi":
        return qi_acc(i, subs[0])
    if op == "pi":
        return pi_acc(i, subs[0])
    if kk is None:
        raise InputError("expression: op 'const' needs 'k' here or on an enclosing expression")
    return const_acc(i, kk)
