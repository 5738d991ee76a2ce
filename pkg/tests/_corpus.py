"""Shared test fixtures: the stratified 50-word corpus and random sums.

The corpus covers, for each of the five left-boundary shapes (none, m0 = 1,
m0 = 2 via a leading b^2, and the two negative mirrors), all five right
shapes - which is what exercises every one-step transport row combination.
"""

from __future__ import annotations

import random
from fractions import Fraction

from qmforge.counting import BrooksSum, brooks_sum
from qmforge.freegroup import Alphabet, Word, parse_word

CORPUS_TEXT = [
    # b-truncated rows
    "aba", "aba'", "ab", "abb", "a'b", "a'bb", "ab'", "ab'b'", "a'b'", "a'b'b'",
    # m0 > 0
    "ba", "bba", "bab", "babb", "baba'b", "bab'a'b", "bab'", "bab'b'", "baba'b'", "bab'a'b'",
    "ba'", "bba'", "ba'bab", "ba'b'ab", "ba'b", "bba'b", "ba'bab'", "ba'b'ab'", "ba'b'", "bba'b'",
    # m0 < 0
    "b'a", "b'b'a", "b'ab", "b'b'ab", "b'aba'b", "b'ab'a'b", "b'ab'", "b'b'ab'", "b'aba'b'", "b'ab'a'b'",
    "b'a'", "b'b'a'", "b'a'bab", "b'a'b'ab", "b'a'b", "b'b'a'b", "b'a'bab'", "b'a'b'ab'", "b'a'b'", "b'b'a'b'",
]


def corpus(alphabet: Alphabet) -> list[Word]:
    return [parse_word(t, alphabet) for t in CORPUS_TEXT]


def random_reduced_word(rng: random.Random, alphabet: Alphabet, length: int) -> Word:
    letters = list(alphabet.letters())
    out: list[int] = []
    while len(out) < length:
        x = rng.choice(letters)
        if out and x == -out[-1]:
            continue
        out.append(x)
    return tuple(out)


def random_brooks_sum(
    rng: random.Random,
    alphabet: Alphabet,
    max_keys: int = 6,
    max_len: int = 5,
    max_coeff: int = 5,
) -> BrooksSum:
    entries: dict[Word, Fraction] = {}
    for _ in range(rng.randint(1, max_keys)):
        w = random_reduced_word(rng, alphabet, rng.randint(1, max_len))
        c = rng.randint(-max_coeff, max_coeff)
        if c:
            entries[w] = entries.get(w, Fraction(0)) + c
    return brooks_sum({k: v for k, v in entries.items() if v})
