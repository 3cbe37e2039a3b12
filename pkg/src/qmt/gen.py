"""Seeded generators for each positivity class.

Every generator is deterministic in its seed (counter-based Philox stream)
and certifies its output with the classification module before returning,
so a returned system is guaranteed to sit in the requested class.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import classify
from .errors import SearchExhaustedError
from .functional import DEFAULT_TOL, QuantumSystem, Tolerance

KINDS = (
    "strong",
    "posentry",
    "classical",
    "weak_not_strong_not_posentry",
    "hermitian_only",
)

RNG_ALGORITHM = "philox4x64"


@dataclass(frozen=True)
class GenSpec:
    kind: str
    atoms: int
    seed: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.atoms < 1:
            raise ValueError("atoms must be >= 1")
        if self.kind == "weak_not_strong_not_posentry" and self.atoms < 2:
            raise ValueError("the weak-only class needs at least 2 atoms")


def _complex_normal(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _draw_posentry(rng, n):
    r = rng.uniform(0.0, 1.0, size=(n, n))
    sym = (r + r.T) / 2.0
    return sym / sym.sum()


def _draw_strong(rng, n):
    while True:
        a = _complex_normal(rng, n)
        gram = a.conj().T @ a
        total = gram.sum().real
        if total > 0.1:
            return gram / total


def _draw_classical(rng, n):
    weights = rng.uniform(0.1, 1.0, size=n)
    return np.diag(weights / weights.sum()).astype(complex)


def _draw_hermitian(rng, n):
    while True:
        c = _complex_normal(rng, n)
        h = (c + c.conj().T) / 2.0
        total = h.sum().real
        if abs(total) > 0.1:
            return h / total


def _draw_weak_only(rng, n):
    """Positive-entry base plus a scaled imaginary antisymmetric part.

    For a real 0/1 indicator v and real antisymmetric K the form v.T (iK) v
    vanishes, so every event measure equals the base system's, which is
    non-negative; weak positivity is exact by construction.  Scaling K up
    pushes an eigenvalue negative without ever touching the measures.
    Scaling continues until the imaginary part is sizeable too: near-real
    entries carry phases so close to zero that the self-composition witness
    would need exponents beyond double precision.
    """
    base = _draw_posentry(rng, n)
    anti = rng.standard_normal((n, n))
    anti = anti - anti.T
    peak = np.abs(anti).max()
    if peak < 1e-6:
        return None
    anti /= peak
    real_peak = float(np.abs(base).max())
    kappa = real_peak / 1024.0
    for _ in range(80):
        candidate = base + 1j * kappa * anti
        lo = float(np.linalg.eigvalsh(candidate)[0])
        # Both margins must be decisive: systems scraping the class boundary
        # (barely negative minors, near-real entries) force self-composition
        # exponents beyond what double precision can verify.
        decisively_non_psd = lo < -0.02 * float(np.linalg.norm(candidate))
        decisive_phase = kappa >= 0.35 * real_peak
        if decisively_non_psd and decisive_phase:
            return candidate
        kappa *= 2.0
    return None


def generate(
    spec: GenSpec,
    tol: Tolerance = DEFAULT_TOL,
    *,
    max_retries: int = 1000,
) -> QuantumSystem:
    """Draw a system of the requested class, certified by ``classify``."""
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    metadata = {
        "generator": spec.kind,
        "atoms": spec.atoms,
        "seed": spec.seed,
        "rng": RNG_ALGORITHM,
    }
    n = spec.atoms
    for _ in range(max_retries):
        if spec.kind == "strong":
            matrix = _draw_strong(rng, n)
        elif spec.kind == "posentry":
            matrix = _draw_posentry(rng, n)
        elif spec.kind == "classical":
            matrix = _draw_classical(rng, n)
        elif spec.kind == "hermitian_only":
            matrix = _draw_hermitian(rng, n)
        else:
            matrix = _draw_weak_only(rng, n)
        if matrix is None:
            continue
        system = QuantumSystem(matrix, tol=tol, metadata=metadata)
        if _certified(system, spec.kind, tol):
            return system
    raise SearchExhaustedError(
        f"could not generate a certified {spec.kind!r} system in {max_retries} tries"
    )


def _certified(system: QuantumSystem, kind: str, tol: Tolerance) -> bool:
    if kind == "hermitian_only":
        return True  # constructor already enforced the quasi-system axioms
    c = classify(system, tol)
    if kind == "strong":
        return c.strongly_positive
    if kind == "posentry":
        return c.positive_entry
    if kind == "classical":
        return c.classical
    return c.weakly_positive and not c.strongly_positive and not c.positive_entry
