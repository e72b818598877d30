import random
from fractions import Fraction

import pytest

from cuntzmod.algebra import monomial, words_upto, zero

COEFF_POOL = [
    Fraction(1),
    Fraction(-1),
    Fraction(1, 2),
    Fraction(-1, 2),
    Fraction(2),
    Fraction(3, 4),
    Fraction(-5, 3),
]


def random_element(rng: random.Random, n: int, max_terms: int = 4, max_len: int = 2, allow_zero: bool = True):
    """A random exact element with small rational coefficients."""
    k = rng.randint(0 if allow_zero else 1, max_terms)
    acc = zero(n)
    for _ in range(k):
        mu = tuple(rng.randint(1, n) for _ in range(rng.randint(0, max_len)))
        nu = tuple(rng.randint(1, n) for _ in range(rng.randint(0, max_len)))
        acc = acc + monomial(n, mu, nu, rng.choice(COEFF_POOL))
    return acc


def monomial_elements(n: int, max_len: int):
    ws = words_upto(n, max_len)
    return [monomial(n, mu, nu) for mu in ws for nu in ws]


@pytest.fixture
def rng():
    return random.Random(20260809)
