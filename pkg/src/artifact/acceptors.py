"""Deterministic automata, Muller k-acceptors and their run semantics.

States are the integers ``0..n-1`` and letters the integers ``0..m-1``.
A Muller k-acceptor pairs an automaton with a labeling of its loops; the
value of an infinite word is the label of the set of states its run visits
infinitely often.  Only ultimately periodic words (lassos) are evaluated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InputError, ResourceError, SemanticError

DEFAULT_MONOID_CAP = 10**6


class Automaton:
    """A complete deterministic automaton ``(Q, delta, initial)``."""

    __slots__ = ("alphabet_size", "delta", "initial", "_reach")

    def __init__(self, alphabet_size: int, delta: Sequence[Sequence[int]], initial: int = 0):
        if not isinstance(alphabet_size, int) or alphabet_size < 1:
            raise InputError("alphabet_size must be a positive integer")
        rows = tuple(tuple(row) for row in delta)
        n = len(rows)
        if n == 0:
            raise InputError("an automaton needs at least one state")
        for q, row in enumerate(rows):
            if len(row) != alphabet_size:
                raise InputError(f"delta[{q}] has {len(row)} entries, expected {alphabet_size}")
            for a, t in enumerate(row):
                if not isinstance(t, int) or not 0 <= t < n:
                    raise InputError(f"delta[{q}][{a}] = {t!r} is not a state")
        if not isinstance(initial, int) or not 0 <= initial < n:
            raise InputError(f"initial state {initial!r} is not a state")
        self.alphabet_size = alphabet_size
        self.delta = rows
        self.initial = initial
        self._reach = None

    @property
    def num_states(self) -> int:
        return len(self.delta)

    @property
    def states(self) -> range:
        return range(len(self.delta))

    def step(self, q: int, a: int) -> int:
        return self.delta[q][a]

    def check_word(self, w: Iterable[int]) -> tuple:
        w = tuple(w)
        for a in w:
            if not isinstance(a, int) or not 0 <= a < self.alphabet_size:
                raise InputError(f"letter {a!r} outside alphabet of size {self.alphabet_size}")
        return w

    def reachable(self) -> frozenset:
        """States reachable from the initial state."""
        if self._reach is None:
            seen = {self.initial}
            todo = [self.initial]
            while todo:
                q = todo.pop()
                for t in self.delta[q]:
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
            self._reach = frozenset(seen)
        return self._reach

    def restrict_reachable(self) -> tuple:
        """Return ``(automaton, old_states)`` renumbered onto the reachable part.

        States are renumbered in breadth-first order from the initial state.
        """
        order = [self.initial]
        index = {self.initial: 0}
        i = 0
        while i < len(order):
            q = order[i]
            i += 1
            for t in self.delta[q]:
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
        rows = [[index[t] for t in self.delta[q]] for q in order]
        return Automaton(self.alphabet_size, rows, 0), tuple(order)

    def __eq__(self, other):
        return (isinstance(other, Automaton) and self.alphabet_size == other.alphabet_size
                and self.initial == other.initial and self.delta == other.delta)

    def __hash__(self):
        return hash((self.alphabet_size, self.initial, self.delta))

    def __repr__(self):
        return f"Automaton(alphabet_size={self.alphabet_size}, states={self.num_states}, initial={self.initial})"


def run(automaton: Automaton, q: int, w: Iterable[int]) -> int:
    """The state reached from ``q`` after reading the finite word ``w``."""
    if not isinstance(q, int) or not 0 <= q < automaton.num_states:
        raise InputError(f"{q!r} is not a state")
    delta = automaton.delta
    for a in automaton.check_word(w):
        q = delta[q][a]
    return q


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word ``prefix . period^omega``."""

    prefix: tuple
    period: tuple

    def __init__(self, prefix: Iterable[int] = (), period: Iterable[int] = (0,)):
        prefix = tuple(int(a) for a in prefix)
        period = tuple(int(a) for a in period)
        if not period:
            raise InputError("the period of a lasso must be nonempty")
        if any(a < 0 for a in prefix + period):
            raise InputError("letters must be nonnegative")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "LassoWord":
        """Parse ``"u,v"`` where u and v are digit strings (u may be empty)."""
        if "," not in text:
            raise InputError("lasso must be written as <prefix>,<period>")
        u, v = text.split(",", 1)
        u, v = u.strip(), v.strip()
        if not (u.isdigit() or u == "") or not v.isdigit():
            raise InputError(f"cannot parse lasso {text!r}")
        return cls(tuple(int(c) for c in u), tuple(int(c) for c in v))

    def letter(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> tuple:
        """The first n letters."""
        p = self.prefix
        if n <= len(p):
            return p[:n]
        rest = n - len(p)
        return p + (self.period * (rest // len(self.period) + 1))[:rest]

    def drop(self, n: int) -> "LassoWord":
        """The suffix starting at position n."""
        if n <= len(self.prefix):
            return LassoWord(self.prefix[n:], self.period)
        r = (n - len(self.prefix)) % len(self.period)
        return LassoWord((), self.period[r:] + self.period[:r])

    def __str__(self):
        return "".join(map(str, self.prefix)) + "," + "".join(map(str, self.period))


def _as_automaton(obj) -> Automaton:
    return obj.automaton if isinstance(obj, MullerKAcceptor) else obj


def infinity_set(acc, w: LassoWord) -> frozenset:
    """States visited infinitely often by the run on ``w``.

    ``acc`` may be an acceptor or a bare automaton.
    """
    aut = _as_automaton(acc)
    aut.check_word(w.prefix + w.period)
    delta = aut.delta
    q = aut.initial
    for a in w.prefix:
        q = delta[q][a]
    seen = {}
    i = 0
    while q not in seen:
        seen[q] = i
        for a in w.period:
            q = delta[q][a]
        i += 1
    visited = {q}
    start = q
    while True:
        for a in w.period:
            q = delta[q][a]
            visited.add(q)
        if q == start:
            break
    return frozenset(visited)


class Labeling:
    """Assigns a value to each loop of an automaton.

    ``forced(c)`` may return a subset S of the loop c such that every
    subloop of c meeting S carries the same label as c.  The degree
    computation uses it to skip large regions of equally labeled loops;
    returning the empty set is always correct.
    """

    def label(self, loop: frozenset) -> int:
        raise NotImplementedError

    def forced(self, loop: frozenset) -> frozenset:
        return frozenset()

    def explicit(self):
        """The label table if this labeling is given by one, else None."""
        return None


class TableLabeling(Labeling):
    """Labels read from a finite table, with an optional default value."""

    def __init__(self, table: Mapping, default: int | None = None):
        self.table = {frozenset(c): int(v) for c, v in table.items()}
        self.default = default

    def label(self, loop):
        v = self.table.get(loop)
        if v is None:
            if self.default is None:
                raise SemanticError(f"no label for loop {sorted(loop)}")
            return self.default
        return v

    def explicit(self):
        return self.table


class FunctionLabeling(Labeling):
    """Labels computed by a plain function of the loop."""

    def __init__(self, fn, forced=None):
        self._fn = fn
        self._forced = forced

    def label(self, loop):
        return self._fn(loop)

    def forced(self, loop):
        return self._forced(loop) if self._forced else frozenset()


class MullerKAcceptor:
    """An automaton together with a k-valued labeling of its loops."""

    def __init__(self, automaton: Automaton, k: int, labels, validate: bool = True,
                 default_label: int | None = None):
        if not isinstance(k, int) or k < 2:
            raise InputError("k must be an integer >= 2")
        if default_label is not None and not 0 <= default_label < k:
            raise InputError(f"default_label {default_label} is not below k={k}")
        self.automaton = automaton
        self.k = k
        if isinstance(labels, Labeling):
            self.labeling = labels
        else:
            self.labeling = TableLabeling(dict(labels), default_label)
        self._cache = {}
        if validate:
            self.validate()

    def label(self, loop: Iterable[int]) -> int:
        loop = frozenset(loop)
        v = self._cache.get(loop)
        if v is None:
            v = self.labeling.label(loop)
            self._cache[loop] = v
        return v

    def forced(self, loop: frozenset) -> frozenset:
        return self.labeling.forced(loop)

    def validate(self):
        """Check that every loop gets exactly one label below k."""
        from .loops import is_loop, loops

        table = self.labeling.explicit()
        if table is not None:
            for c, v in table.items():
                if not 0 <= v < self.k:
                    raise InputError(f"label {v} of loop {sorted(c)} is not below k={self.k}")
                if not is_loop(self.automaton, c):
                    raise InputError(f"{sorted(c)} is not a loop of the automaton")
            if self.labeling.default is None:
                for c in loops(self.automaton):
                    if c not in table:
                        raise InputError(f"loop {sorted(c)} has no label")
        return self

    def label_table(self, cap: int | None = None) -> dict:
        """Labels of all loops, computed by enumeration."""
        from .loops import loops

        kw = {} if cap is None else {"cap": cap}
        return {c: self.label(c) for c in loops(self.automaton, **kw)}

    def __repr__(self):
        return f"MullerKAcceptor(k={self.k}, {self.automaton!r})"


def eval_lasso(acc: MullerKAcceptor, w: LassoWord) -> int:
    """The value of the acceptor on the lasso ``w``."""
    return acc.label(infinity_set(acc, w))


def product_k(components: Sequence, k: int | None = None) -> MullerKAcceptor:
    """Combine k-1 (automaton, accepting family) pairs into a k-acceptor.

    A product loop gets label l when its l-th projection lies in the l-th
    family, and label k-1 when it lies in none.  Two hits are an error.
    """
    from .loops import loops

    comps = [(aut, {frozenset(f) for f in fams}) for aut, fams in components]
    if not comps:
        raise InputError("product_k needs at least one component")
    if k is None:
        k = len(comps) + 1
    if len(comps) != k - 1:
        raise InputError(f"{len(comps)} components given for k={k}; expected {k - 1}")
    m = comps[0][0].alphabet_size
    if any(aut.alphabet_size != m for aut, _ in comps):
        raise InputError("components must share the alphabet")
    start = tuple(aut.initial for aut, _ in comps)
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        row = []
        for a in range(m):
            t = tuple(aut.delta[q][a] for (aut, _), q in zip(comps, s))
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        rows.append(row)
    aut = Automaton(m, rows, 0)
    table = {}
    for c in loops(aut):
        hits = [l for l, (_, fams) in enumerate(comps)
                if frozenset(order[x][l] for x in c) in fams]
        if len(hits) > 1:
            states = sorted(order[x] for x in c)
            raise SemanticError(f"product loop {states} projects into the families of "
                                f"components {hits[0]} and {hits[1]}")
        table[c] = hits[0] if hits else k - 1
    acc = MullerKAcceptor(aut, k, table, validate=False)
    acc.product_states = tuple(order)
    return acc


# transition monoid and pattern checks

@dataclass(frozen=True)
class TransitionMap:
    """The action of a word on the states, with a shortest witness word."""

    mapping: tuple
    witness: tuple

    def __call__(self, q: int) -> int:
        return self.mapping[q]


def _closure(gens, identity, compose, cap, what):
    """Breadth-first closure; returns dict element -> shortest witness."""
    found = {identity: ()}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        wx = found[x]
        for a, g in gens:
            y = compose(x, g)
            if y not in found:
                found[y] = wx + (a,)
                if len(found) > cap:
                    raise ResourceError(f"{what} exceeds cap of {cap} elements")
                queue.append(y)
    return found


def _compose(x, g):
    return tuple(g[q] for q in x)


def transition_monoid(automaton: Automaton, cap: int = DEFAULT_MONOID_CAP) -> list:
    """All word actions on the reachable part, identity included.

    The result is indexed by the reachable states renumbered in
    breadth-first order (see ``Automaton.restrict_reachable``).
    """
    aut, _ = automaton.restrict_reachable()
    n = aut.num_states
    gens = [(a, tuple(aut.delta[q][a] for q in range(n))) for a in range(aut.alphabet_size)]
    found = _closure(gens, tuple(range(n)), _compose, cap, "transition monoid")
    return [TransitionMap(m, w) for m, w in found.items()]


def _cyclic_states(m: tuple) -> set:
    """States lying on a cycle of length > 1 of the map m."""
    n = len(m)
    out = set()
    for q in range(n):
        x = m[q]
        steps = 1
        while x != q and steps <= n:
            x = m[x]
            steps += 1
        if x == q and steps > 1:
            out.add(q)
    return out


def is_aperiodic(automaton: Automaton, cap: int = DEFAULT_MONOID_CAP) -> bool:
    """True iff no word permutes reachable states along a cycle of length > 1."""
    return all(not _cyclic_states(t.mapping) for t in transition_monoid(automaton, cap))


def has_d_counting_pattern(automaton: Automaton, d: int, cap: int = DEFAULT_MONOID_CAP) -> bool:
    """Some word of length divisible by d cycles a reachable state with period > 1."""
    if not isinstance(d, int) or d < 1:
        raise InputError("d must be a positive integer")
    aut, _ = automaton.restrict_reachable()
    n = aut.num_states
    gens = [(a, (tuple(aut.delta[q][a] for q in range(n)), 1)) for a in range(aut.alphabet_size)]

    def compose(x, g):
        return (_compose(x[0], g[0]), (x[1] + g[1]) % d)

    found = _closure(gens, (tuple(range(n)), 0), compose, cap, "length-tracked monoid")
    return any(r == 0 and _cyclic_states(m) for m, r in found)


def has_balanced_counting_pattern(automaton: Automaton, cap: int | None = None) -> bool:
    """Equal-length words u, v where v cycles a reachable state q with period
    n > 1 and u fixes each of q, q.v, ..., q.v^(n-1)."""
    if cap is None:
        cap = DEFAULT_MONOID_CAP ** 2
    aut, _ = automaton.restrict_reachable()
    n = aut.num_states
    m = aut.alphabet_size
    acts = [tuple(aut.delta[q][a] for q in range(n)) for a in range(m)]
    gens = [((x, y), (acts[x], acts[y])) for x in range(m) for y in range(m)]

    def compose(p, g):
        return (_compose(p[0], g[0]), _compose(p[1], g[1]))

    ident = tuple(range(n))
    found = _closure(gens, (ident, ident), compose, cap, "pair monoid")
    for mu, mv in found:
        for q in _cyclic_states(mv):
            x = q
            while True:
                if mu[x] != x:
                    break
                x = mv[x]
                if x == q:
                    return True
    return False


# JSON

def _require(obj, key, where):
    if key not in obj:
        raise InputError(f"{where}: missing field '{key}'")
    return obj[key]


def _int_field(obj, key, where, minimum=None):
    v = _require(obj, key, where)
    if not isinstance(v, int) or isinstance(v, bool) or (minimum is not None and v < minimum):
        raise InputError(f"{where}: field '{key}' must be an integer"
                         + (f" >= {minimum}" if minimum is not None else ""))
    return v


def _automaton_from_json(obj, where) -> Automaton:
    m = _int_field(obj, "alphabet_size", where, 1)
    n = _int_field(obj, "states", where, 1)
    delta = _require(obj, "delta", where)
    if not isinstance(delta, list) or len(delta) != n:
        raise InputError(f"{where}: field 'delta' must list {n} rows")
    for q, row in enumerate(delta):
        if not isinstance(row, list) or any(not isinstance(t, int) or isinstance(t, bool) for t in row):
            raise InputError(f"{where}: field 'delta[{q}]' must be a list of integers")
    initial = obj.get("initial", 0)
    try:
        return Automaton(m, delta, initial)
    except InputError as e:
        raise InputError(f"{where}: {e}") from None


def acceptor_from_json(obj) -> MullerKAcceptor:
    """Read either the direct or the tuple (product) form."""
    if not isinstance(obj, dict):
        raise InputError("acceptor JSON must be an object")
    k = _int_field(obj, "k", "acceptor", 2)
    if "components" in obj:
        comps = obj["components"]
        if not isinstance(comps, list):
            raise InputError("acceptor: field 'components' must be a list")
        parsed = []
        for j, c in enumerate(comps):
            where = f"components[{j}]"
            if not isinstance(c, dict):
                raise InputError(f"{where} must be an object")
            aut = _automaton_from_json(c, where)
            fams = _require(c, "accepting", where)
            if not isinstance(fams, list):
                raise InputError(f"{where}: field 'accepting' must be a list of state lists")
            parsed.append((aut, [frozenset(f) for f in fams]))
        return product_k(parsed, k)
    aut = _automaton_from_json(obj, "acceptor")
    labels = _require(obj, "labels", "acceptor")
    if not isinstance(labels, list):
        raise InputError("acceptor: field 'labels' must be a list")
    table = {}
    for j, entry in enumerate(labels):
        where = f"acceptor: labels[{j}]"
        if not isinstance(entry, dict):
            raise InputError(f"{where} must be an object")
        loop = _require(entry, "loop", where)
        if not isinstance(loop, list) or not loop or any(not isinstance(s, int) for s in loop):
            raise InputError(f"{where}: field 'loop' must be a nonempty list of states")
        key = frozenset(loop)
        if len(key) != len(loop):
            raise InputError(f"{where}: field 'loop' repeats a state")
        if key in table:
            raise InputError(f"{where}: duplicate loop {sorted(key)}")
        table[key] = _int_field(entry, "label", where, 0)
    default = obj.get("default_label")
    if default is not None and (not isinstance(default, int) or isinstance(default, bool)):
        raise InputError("acceptor: field 'default_label' must be an integer")
    return MullerKAcceptor(aut, k, table, default_label=default)


def acceptor_to_json(acc: MullerKAcceptor, cap: int | None = None) -> dict:
    """Direct form, listing every loop explicitly."""
    aut = acc.automaton
    table = acc.label_table(cap)
    entries = sorted((sorted(c), v) for c, v in table.items())
    return {
        "k": acc.k,
        "alphabet_size": aut.alphabet_size,
        "states": aut.num_states,
        "initial": aut.initial,
        "delta": [list(row) for row in aut.delta],
        "labels": [{"loop": c, "label": v} for c, v in entries],
    }


def check_same_k(a: MullerKAcceptor, b: MullerKAcceptor):
    if a.k != b.k:
        raise InputError(f"acceptors disagree on k ({a.k} vs {b.k})")


__all__ = [
    "Automaton", "LassoWord", "MullerKAcceptor", "Labeling", "TableLabeling",
    "FunctionLabeling", "TransitionMap", "run", "infinity_set", "eval_lasso",
    "product_k", "transition_monoid", "is_aperiodic", "has_d_counting_pattern",
    "has_balanced_counting_pattern", "acceptor_from_json", "acceptor_to_json",
]
