"""Shared fixtures and independent oracles used across the test suite."""

import itertools

import numpy as np
import pytest

from qmt import (
    Event,
    GenSpec,
    QuantumSystem,
    classify,
    eval_D,
    generate,
)

# Reference 2-atom systems used throughout: one strongly positive with a
# negative entry, one positive-entry with a non-PSD atomic matrix, one
# weakly positive system outside both classes, and one strongly positive
# system with non-real entries.
M_MATRIX = np.array([[2.0, -1.0], [-1.0, 1.0]])
N_MATRIX = np.array([[0.2, 0.4], [0.4, 0.0]])
WEAK_ONLY_MATRIX = np.array([[0.6, 0.5j], [-0.5j, 0.4]])
HALF_I_MATRIX = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
HALF_SWAP_MATRIX = np.array([[0.0, 0.5], [0.5, 0.0]])


@pytest.fixture(scope="session")
def m_system():
    return QuantumSystem(M_MATRIX)


@pytest.fixture(scope="session")
def n_system():
    return QuantumSystem(N_MATRIX)


@pytest.fixture(scope="session")
def weak_only_system():
    return QuantumSystem(WEAK_ONLY_MATRIX)


@pytest.fixture(scope="session")
def half_i_system():
    return QuantumSystem(HALF_I_MATRIX)


def random_hermitian_system(rng, n):
    """Random normalized Hermitian (quasi-)system, any positivity."""
    c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (c + c.conj().T) / 2.0
    total = h.sum().real
    while abs(total) < 0.1:
        c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (c + c.conj().T) / 2.0
        total = h.sum().real
    return QuantumSystem(h / total)


def gen_posentry_not_strong(n, seed):
    """Positive-entry system that is not strongly positive (retry until hit)."""
    for attempt in range(200):
        s = generate(GenSpec("posentry", n, seed + 10000 * attempt))
        if not classify(s).strongly_positive:
            return s
    raise AssertionError("no positive-entry, non-PSD draw found")


def gen_strong_not_posentry(n, seed):
    """Strongly positive system with some negative or non-real entry."""
    for attempt in range(200):
        s = generate(GenSpec("strong", n, seed + 10000 * attempt))
        if not classify(s).positive_entry:
            return s
    raise AssertionError("no strongly-positive, non-positive-entry draw found")


# ---------------------------------------------------------------------------
# Independent oracles.  These deliberately avoid the library's computation
# paths: set arithmetic on explicit index tuples, principal minors instead of
# eigenvalues, per-event summation instead of vectorized sweeps.


def oracle_event_value(matrix, a_indices, b_indices):
    """Functional value by explicit double loop over atom indices."""
    total = 0j
    for i in a_indices:
        for j in b_indices:
            total += matrix[i, j]
    return total


def oracle_psd_by_minors(matrix, tol=1e-10):
    """PSD iff every principal minor is non-negative (Hermitian input)."""
    n = matrix.shape[0]
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            sub = matrix[np.ix_(combo, combo)]
            if np.linalg.det(sub).real < -tol:
                return False
    return True


def oracle_weakly_positive(system, tol=1e-9):
    """Weak positivity by per-event evaluation through eval_D."""
    n = system.n
    for bits in range(1 << n):
        value = eval_D(system, Event(bits, n), Event(bits, n))
        if value.real < -tol:
            return False, bits
    return True, None
