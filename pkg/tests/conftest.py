"""Shared fixtures: the standard family roster used across suites."""

from fractions import Fraction
import random

import pytest

from umbralcalc.psi import AdmissibleSequence

N = 12
BOUND = N + 1  # families carry one spare index for diagonal weights
SEED = 20240811


def random_custom_family(rng: random.Random, bound: int) -> AdmissibleSequence:
    """Nonzero small rationals, deterministic for a given rng state."""
    values = []
    for _ in range(bound):
        num = 0
        while num == 0:
            num = rng.randint(-5, 5)
        values.append(Fraction(num, rng.randint(1, 4)))
    return AdmissibleSequence.custom(values, bound, label="custom(seeded)")


def family_roster(bound: int = BOUND):
    rng = random.Random(SEED)
    return [
        AdmissibleSequence.classical(bound),
        AdmissibleSequence.q_deformed(2, bound),
        AdmissibleSequence.q_deformed(Fraction(1, 2), bound),
        AdmissibleSequence.fibonacci(bound),
        AdmissibleSequence.hyperbolic(bound),
        random_custom_family(rng, bound),
    ]


@pytest.fixture(scope="session")
def families():
    return family_roster()


@pytest.fixture(scope="session")
def degree():
    return N
