"""Seeded random automata and acceptors for property checks."""

from __future__ import annotations

import random

from .acceptors import Automaton, MullerKAcceptor, is_aperiodic
from .loops import loops


def random_automaton(rng: random.Random, max_states: int = 6, max_letters: int = 3,
                     min_letters: int = 1) -> Automaton:
    n = rng.randint(1, max_states)
    m = rng.randint(min_letters, max_letters)
    delta = [[rng.randrange(n) for _ in range(m)] for _ in range(n)]
    return Automaton(m, delta, 0)


def random_acceptor(rng: random.Random, k: int, max_states: int = 5, max_letters: int = 2,
                    alphabet_size: int | None = None) -> MullerKAcceptor:
    """A random complete labeling on the reachable part of a random automaton."""
    if alphabet_size is None:
        aut = random_automaton(rng, max_states, max_letters)
    else:
        aut = random_automaton(rng, max_states, alphabet_size, alphabet_size)
    aut, _ = aut.restrict_reachable()
    table = {c: rng.randrange(k) for c in loops(aut)}
    return MullerKAcceptor(aut, k, table)


def random_aperiodic_acceptor(rng: random.Random, k: int, max_states: int = 4,
                              alphabet_size: int = 2, tries: int = 10_000) -> MullerKAcceptor:
    """Rejection sampling on ``random_acceptor``."""
    for _ in range(tries):
        acc = random_acceptor(rng, k, max_states, alphabet_size=alphabet_size)
        if is_aperiodic(acc.automaton):
            return acc
    raise RuntimeError("no aperiodic sample found")
