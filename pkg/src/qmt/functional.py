"""Quantum systems as atomic matrices, their functional, and quantal measures.

A finite system is fully determined by the complex matrix of functional
values on pairs of singleton events (the atoms); all other values follow by
bi-additivity.  The constructor enforces Hermiticity and unit entry sum.
Weak positivity is a classification result, not a construction invariant,
so non-weakly-positive "quasi-systems" are representable too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import ENUMERATION_LIMIT, Event
from .errors import (
    ArityMismatchError,
    AxiomViolationError,
    BruteForceLimitError,
    SumRuleViolationError,
)

MEASURE_TABLE_LIMIT = 16


@dataclass(frozen=True)
class Tolerance:
    """Absolute plus Frobenius-scaled relative slack for float comparisons."""

    eps_abs: float = 1e-9
    eps_rel: float = 1e-9

    def __post_init__(self):
        if self.eps_abs < 0 or self.eps_rel < 0:
            raise ValueError("tolerances must be non-negative")

    def scaled(self, matrix: np.ndarray) -> float:
        return self.eps_abs + self.eps_rel * float(np.linalg.norm(matrix))


DEFAULT_TOL = Tolerance()


class QuantumSystem:
    """An n-atom system: atom labels plus the n x n atomic matrix.

    ``matrix[i, j]`` is the functional value on the singleton pair
    ({atom i}, {atom j}).  The matrix must be Hermitian and its entries
    must sum to 1, both within ``tol``.
    """

    __slots__ = ("matrix", "labels", "metadata")

    def __init__(self, matrix, labels=None, *, tol: Tolerance = DEFAULT_TOL, metadata=None):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise AxiomViolationError(f"atomic matrix must be square, got shape {m.shape}")
        n = m.shape[0]
        if n == 0:
            raise AxiomViolationError("a system needs at least one atom")
        if labels is None:
            labels = tuple(f"g{i}" for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise AxiomViolationError(
                    f"{len(labels)} labels for a {n}-atom matrix"
                )
        slack = tol.scaled(m)
        herm_residual = float(np.abs(m - m.conj().T).max())
        if herm_residual > slack:
            raise AxiomViolationError(
                f"matrix is not Hermitian (max residual {herm_residual:.3e})"
            )
        total = complex(m.sum())
        if abs(total - 1.0) > slack:
            raise AxiomViolationError(
                f"entries sum to {total:.6g}, expected 1"
            )
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "metadata", dict(metadata or {}))

    def __setattr__(self, name, value):
        raise AttributeError("QuantumSystem is immutable")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def atom(self, i: int) -> Event:
        if not 0 <= i < self.n:
            raise ValueError(f"atom index {i} out of range for {self.n} atoms")
        return Event(1 << i, self.n)

    def atoms(self) -> tuple[Event, ...]:
        return tuple(self.atom(i) for i in range(self.n))

    def full_event(self) -> Event:
        return Event.full(self.n)

    def empty_event(self) -> Event:
        return Event.empty(self.n)

    def __repr__(self) -> str:
        return f"QuantumSystem(n={self.n}, labels={self.labels!r})"


def _check_event(s: QuantumSystem, e: Event) -> None:
    if e.arity != s.n:
        raise ArityMismatchError(f"event arity {e.arity} != system arity {s.n}")


def eval_D(s: QuantumSystem, a: Event, b: Event) -> complex:
    """Bi-additive functional value: the sum of atomic entries over a x b."""
    _check_event(s, a)
    _check_event(s, b)
    if not a or not b:
        return 0j
    rows = np.fromiter(a.indices(), dtype=np.intp)
    cols = np.fromiter(b.indices(), dtype=np.intp)
    return complex(s.matrix[np.ix_(rows, cols)].sum())


def event_matrix(s: QuantumSystem, events: Sequence[Event]) -> np.ndarray:
    """Hermitian matrix of functional values over a list of distinct events."""
    if len(set(events)) != len(events):
        raise ValueError("events must be distinct")
    k = len(events)
    out = np.zeros((k, k), dtype=complex)
    for i, a in enumerate(events):
        for j, b in enumerate(events):
            if j < i:
                out[i, j] = np.conj(out[j, i])
            else:
                out[i, j] = eval_D(s, a, b)
    return out


def quantal_measure(s: QuantumSystem, a: Event, tol: Tolerance = DEFAULT_TOL) -> float:
    """Diagonal value mu(a) = D(a, a); real for any Hermitian system."""
    z = eval_D(s, a, a)
    if abs(z.imag) > tol.scaled(s.matrix):
        raise AxiomViolationError(
            f"measure of {a!r} has imaginary residue {z.imag:.3e}; input not Hermitian"
        )
    return z.real


def event_measures(matrix: np.ndarray, chunk: int = 1 << 14) -> np.ndarray:
    """Measures of all 2**n events, indexed by bitmask, in one vectorized sweep.

    Each mask is expanded to a 0/1 indicator vector v and evaluated as the
    binary quadratic form v M v^T, which equals the bi-additive diagonal
    value on that event.
    """
    n = matrix.shape[0]
    if n > ENUMERATION_LIMIT:
        raise BruteForceLimitError(f"event sweep over 2**{n} masks exceeds limit")
    total = 1 << n
    out = np.empty(total, dtype=float)
    shifts = np.arange(n, dtype=np.uint64)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        v = (masks[:, None] >> shifts[None, :] & 1).astype(float)
        out[start : start + len(masks)] = ((v @ matrix) * v).sum(axis=1).real
    return out


@dataclass(frozen=True)
class AxiomReport:
    hermitian: bool
    hermitian_residual: float
    normalized: bool
    entry_sum: complex
    additivity: str
    weakly_positive: bool | None
    weak_violation: Event | None
    weak_violation_value: float | None

    @property
    def is_system(self) -> bool:
        return self.hermitian and self.normalized


def check_axioms(
    matrix,
    tol: Tolerance = DEFAULT_TOL,
    *,
    check_weak: bool = True,
    weak_limit: int = ENUMERATION_LIMIT,
) -> AxiomReport:
    """Check the functional axioms on a raw matrix or a constructed system.

    Hermiticity and normalisation are tested numerically.  Additivity holds
    by construction in the atomic representation, so it is reported as such
    rather than re-tested.  The weak-positivity sweep is optional and only
    runs when 2**n is within ``weak_limit``.
    """
    m = matrix.matrix if isinstance(matrix, QuantumSystem) else np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise AxiomViolationError(f"matrix must be square, got shape {m.shape}")
    slack = tol.scaled(m)
    herm_residual = float(np.abs(m - m.conj().T).max())
    hermitian = herm_residual <= slack
    entry_sum = complex(m.sum())
    normalized = abs(entry_sum - 1.0) <= slack

    weakly_positive = None
    violation = None
    violation_value = None
    n = m.shape[0]
    if check_weak and hermitian and n <= weak_limit:
        mu = event_measures(m)
        bad = np.nonzero(mu < -slack)[0]
        weakly_positive = bad.size == 0
        if not weakly_positive:
            violation = Event(int(bad[0]), n)
            violation_value = float(mu[bad[0]])
    return AxiomReport(
        hermitian=hermitian,
        hermitian_residual=herm_residual,
        normalized=normalized,
        entry_sum=entry_sum,
        additivity="by construction (bi-additive evaluation)",
        weakly_positive=weakly_positive,
        weak_violation=violation,
        weak_violation_value=violation_value,
    )


def _sum_rule_residuals(values: np.ndarray, n: int):
    """Yield (alpha, beta, gamma, residual) over all pairwise-disjoint triples.

    Triples are enumerated by assigning each atom to one of four buckets
    (alpha, beta, gamma, unused), 4**n assignments in total.
    """
    for assign in range(4**n):
        a = b = c = 0
        code = assign
        for atom in range(n):
            bucket = code & 3
            code >>= 2
            if bucket == 1:
                a |= 1 << atom
            elif bucket == 2:
                b |= 1 << atom
            elif bucket == 3:
                c |= 1 << atom
        residual = (
            values[a | b | c]
            - values[a | b]
            - values[b | c]
            - values[a | c]
            + values[a]
            + values[b]
            + values[c]
        )
        yield a, b, c, residual


@dataclass(frozen=True)
class SumRuleReport:
    passed: bool
    max_residual: float
    exhaustive: bool
    worst_triple: tuple[Event, Event, Event] | None

    def __bool__(self) -> bool:
        return self.passed


def check_quantal_sum_rule(
    s: QuantumSystem,
    tol: Tolerance = DEFAULT_TOL,
    *,
    exhaustive_limit: int = 8,
    samples: int = 2000,
    seed: int = 0,
) -> SumRuleReport:
    """Test the quantal sum rule on disjoint triples of events.

    Exhaustive over all 4**n assignments when n <= exhaustive_limit,
    otherwise over ``samples`` seeded random disjoint triples.
    """
    n = s.n
    slack = tol.scaled(s.matrix)
    exhaustive = n <= exhaustive_limit
    if exhaustive:
        values = event_measures(s.matrix)
        triples = _sum_rule_residuals(values, n)
    else:
        rng = np.random.Generator(np.random.Philox(key=seed))

        def sampled():
            for _ in range(samples):
                buckets = rng.integers(0, 4, size=n)
                masks = [0, 0, 0]
                for atom, bucket in enumerate(buckets):
                    if bucket:
                        masks[bucket - 1] |= 1 << atom
                evs = [Event(mask, n) for mask in masks]
                mu = [quantal_measure(s, e, tol) for e in evs]
                mu_pairs = [
                    quantal_measure(s, evs[0] | evs[1], tol),
                    quantal_measure(s, evs[1] | evs[2], tol),
                    quantal_measure(s, evs[0] | evs[2], tol),
                ]
                mu_all = quantal_measure(s, evs[0] | evs[1] | evs[2], tol)
                residual = mu_all - sum(mu_pairs) + sum(mu)
                yield masks[0], masks[1], masks[2], residual

        triples = sampled()

    worst = 0.0
    worst_triple = None
    for a, b, c, residual in triples:
        r = abs(residual)
        if r > worst:
            worst = r
            worst_triple = (Event(a, n), Event(b, n), Event(c, n))
    passed = worst <= slack
    return SumRuleReport(
        passed=passed,
        max_residual=worst,
        exhaustive=exhaustive,
        worst_triple=None if passed else worst_triple,
    )


@dataclass(frozen=True)
class MeasureTable:
    """Real-valued measure on every event of a small system, indexed by bitmask."""

    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1 or self.n > MEASURE_TABLE_LIMIT:
            raise BruteForceLimitError(
                f"measure tables support 1 <= n <= {MEASURE_TABLE_LIMIT}, got {self.n}"
            )
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} values, got shape {vals.shape}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, float]) -> "MeasureTable":
        vals = np.zeros(1 << n)
        for mask, value in mapping.items():
            vals[mask] = value
        return cls(n, vals)

    def value(self, e: Event) -> float:
        if e.arity != self.n:
            raise ArityMismatchError(f"event arity {e.arity} != table arity {self.n}")
        return float(self.values[e.bits])

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        """Raise unless the table is normalized and satisfies the sum rule."""
        eps = tol.eps_abs + tol.eps_rel * float(np.abs(self.values).max())
        if abs(self.values[0]) > eps:
            raise SumRuleViolationError(f"empty event has measure {self.values[0]:.3e}")
        if abs(self.values[-1] - 1.0) > eps:
            raise SumRuleViolationError(f"full event has measure {self.values[-1]:.6g}")
        if self.n <= 8:
            for a, b, c, residual in _sum_rule_residuals(self.values, self.n):
                if abs(residual) > eps:
                    raise SumRuleViolationError(
                        f"sum rule residual {residual:.3e} on disjoint triple "
                        f"({a:#x}, {b:#x}, {c:#x})"
                    )


def measure_table(s: QuantumSystem, tol: Tolerance = DEFAULT_TOL) -> MeasureTable:
    """Tabulate mu over every event of a small system."""
    if s.n > MEASURE_TABLE_LIMIT:
        raise BruteForceLimitError(f"n={s.n} exceeds measure-table limit {MEASURE_TABLE_LIMIT}")
    return MeasureTable(s.n, event_measures(s.matrix))


def system_from_measure(
    table: MeasureTable,
    labels: Iterable[str] | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> QuantumSystem:
    """Canonical real symmetric system realizing a quantal measure.

    The atomic entries come from the half-sum rule
    ``D(A, B) = (mu(A|B) + mu(A&B) - mu(A\\B) - mu(B\\A)) / 2`` evaluated on
    singleton pairs.  The construction is valid exactly when the table obeys
    the quantal sum rule; this is enforced by checking that the induced
    functional reproduces the table on every event.
    """
    n = table.n
    vals = table.values
    eps = tol.eps_abs + tol.eps_rel * float(np.abs(vals).max())
    if abs(vals[0]) > eps:
        raise SumRuleViolationError(f"empty event has measure {vals[0]:.3e}")
    if abs(vals[-1] - 1.0) > eps:
        raise SumRuleViolationError(f"full event has measure {vals[-1]:.6g}")
    m = np.zeros((n, n))
    for i in range(n):
        m[i, i] = vals[1 << i]
        for j in range(i + 1, n):
            off = 0.5 * (vals[(1 << i) | (1 << j)] - vals[1 << i] - vals[1 << j])
            m[i, j] = m[j, i] = off
    try:
        system = QuantumSystem(m, labels, tol=tol)
    except AxiomViolationError as exc:
        raise SumRuleViolationError(
            f"measure does not induce a normalized functional: {exc}"
        ) from exc
    induced = event_measures(system.matrix)
    gaps = np.abs(induced - vals)
    worst = int(gaps.argmax())
    if gaps[worst] > tol.scaled(system.matrix):
        raise SumRuleViolationError(
            f"measure violates the quantal sum rule: event {worst:#x} maps to "
            f"{induced[worst]:.9g}, table says {vals[worst]:.9g}"
        )
    return system
