"""Shared helpers: small rings plus random matrices and words.

Randomized tests seed their own `random.Random` so reruns are
reproducible; nothing here touches the global RNG state.
"""

import random

import pytest

from symwitt import (
    Conj,
    Elem,
    GroupWord,
    Ideal,
    IntegerRing,
    ModularRing,
    RingMatrix,
    parse_ring,
)

Z = IntegerRing()

# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _no_output_color(monkeypatch):
    # frozen-byte assertions assume uncolored output
    monkeypatch.delenv("OUTPUT_COLOR", raising=False)


@pytest.fixture
def rng():
    return random.Random(20260814)


def zmod(n):
    return ModularRing(n)


def f4():
    return parse_ring("f4")


def rand_element(rng, ring):
    els = ring.elements()
    return els[rng.randrange(len(els))]


def rand_alternating(rng, ring, size):
    m = [[ring.zero] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            x = rand_element(rng, ring)
            m[i][j] = x
            m[j][i] = ring.neg(x)
    return RingMatrix.from_rows(ring, m)


def rand_elem_token(rng, ring, size, ideal=None):
    i = rng.randrange(1, size + 1)
    j = rng.randrange(1, size + 1)
    while j == i:
        j = rng.randrange(1, size + 1)
    if ideal is None:
        a = rand_element(rng, ring)
    else:
        mem = ideal.members()
        a = mem[rng.randrange(len(mem))]
    return Elem(i, j, a)


def rand_word(rng, ring, size, ideal=None, length=4, conjugated=False):
    """Random word; core entries restricted to `ideal` when given."""
    toks = []
    for _ in range(length):
        core = rand_elem_token(rng, ring, size, ideal)
        if conjugated and rng.random() < 0.5:
            toks.append(Conj((rand_elem_token(rng, ring, size),), core))
        else:
            toks.append(core)
    return GroupWord(ring, size, tuple(toks))


def ideal_of(ring, *gens):
    return Ideal(ring, tuple(ring.check(g) for g in gens))
