"""Seeded random machines and homomorphisms for property suites."""

from __future__ import annotations

import random
import string

from .machines import LEND, REND, Nfa

SYMBOLS = "abc"


def random_nfa(rng: random.Random, max_states: int = 6, max_symbols: int = 3,
               max_branch: int = 3, alphabet: tuple[str, ...] | None = None,
               min_states: int = 1) -> Nfa:
    """A random machine; halting states are drawn so that every kind of path occurs."""
    n = rng.randint(max(min_states, 1), max_states)
    if alphabet is None:
        alphabet = tuple(SYMBOLS[:rng.randint(1, max_symbols)])
    states = list(range(n))
    rng.shuffle(states)
    halting = states[:rng.randint(0, max(0, n - 1))]
    accept = {q for q in halting if rng.random() < 0.5}
    reject = set(halting) - accept
    start = rng.choice([q for q in range(n) if q not in halting] or [0])
    delta = {}
    for q in range(n):
        if q in accept or q in reject:
            continue
        for sym in (LEND, *alphabet, REND):
            k = rng.choice([0, 1, 1, 2, 2, 3][: 1 + 2 * max_branch])
            k = min(k, max_branch, n)
            delta[(q, sym)] = rng.sample(range(n), k)
    return Nfa(alphabet, n, start, accept, reject, delta, name=f"r{rng.randrange(10**6)}")


def random_word(rng: random.Random, alphabet, max_len: int) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))


def random_homomorphism(rng: random.Random, domain, codomain, max_len: int = 3) -> dict[str, str]:
    return {s: random_word(rng, codomain, max_len) for s in domain}


def random_prefix_code(rng: random.Random, domain, codomain="01", max_len: int = 4) -> dict[str, str]:
    """Non-erasing prefix-free images for every letter of ``domain``."""
    while True:
        images = [random_word(rng, codomain, max_len) or rng.choice(codomain) for _ in domain]
        if len(set(images)) == len(images) and not any(
                a != b and b.startswith(a) for a in images for b in images):
            return dict(zip(domain, images))


def fresh_symbols(k: int) -> tuple[str, ...]:
    return tuple(string.ascii_lowercase[:k])
