"""Probe systems for the composition-based positivity test.

For any complex vector v over a list of disjoint events, one can build an
auxiliary PSD system whose composition with the system under test evaluates
the quadratic form v^dagger M v / rho on the corresponding event matrix M.
A negative value certifies that the tested system is not strongly positive
and, at the same time, exhibits a weak-positivity violation of the composed
pair, i.e. non-membership in the dual of the strongly positive class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Event, ProductRectangle
from .classify import is_in_dual_of_posentry, is_strongly_positive
from .compose import eval_composed_factored
from .errors import AxiomViolationError
from .functional import DEFAULT_TOL, QuantumSystem, Tolerance


class ProbeSystem(QuantumSystem):
    """PSD system built from a vector v, with normalizer rho = 1 + |sum(v)|^2.

    The atomic matrix carries conj(v_A) v_B / rho on the v-block, 1/rho on
    the extra corner atom, and zeros elsewhere.  The corner atom keeps rho
    strictly positive even when the components of v sum to zero.
    """

    __slots__ = ("rho", "vector")

    def __init__(self, v, *, tol: Tolerance = DEFAULT_TOL):
        vec = np.array(v, dtype=complex).reshape(-1)
        if vec.size == 0:
            raise ValueError("probe vector must be non-empty")
        total = complex(vec.sum())
        rho = 1.0 + abs(total) ** 2
        m = vec.size
        matrix = np.zeros((m + 1, m + 1), dtype=complex)
        matrix[:m, :m] = np.outer(vec.conj(), vec) / rho
        matrix[m, m] = 1.0 / rho
        labels = tuple(f"p{i}" for i in range(m)) + ("x",)
        super().__init__(matrix, labels, tol=tol, metadata={"rho": rho})
        object.__setattr__(self, "rho", rho)
        vec.flags.writeable = False
        object.__setattr__(self, "vector", vec)


def build_probe_system(v, tol: Tolerance = DEFAULT_TOL) -> ProbeSystem:
    """Construct the PSD probe for a vector; PSD and normalized by construction."""
    probe = ProbeSystem(v, tol=tol)
    lo = float(np.linalg.eigvalsh(probe.matrix)[0])
    if lo < -tol.scaled(probe.matrix):
        raise AxiomViolationError(f"probe system unexpectedly not PSD (lambda_min={lo:.3e})")
    return probe


def probe_quadratic_form(
    s: QuantumSystem,
    events: Sequence[Event],
    v,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Evaluate v^dagger M v / rho through composition with the probe.

    The composed event pairs each listed event A_i with the probe atom p_i;
    its composed diagonal value collapses to the quadratic form on the event
    matrix M of ``events``, scaled by 1/rho.  Requires pairwise disjoint
    events so the union is an event of the composed algebra.
    """
    probe = build_probe_system(v, tol)
    if len(events) != probe.n - 1:
        raise ValueError(
            f"vector length {probe.n - 1} does not match {len(events)} events"
        )
    seen = 0
    for e in events:
        if e.arity != s.n:
            raise ValueError(f"event {e!r} does not belong to the probed system")
        if seen & e.bits:
            raise ValueError("probe events must be pairwise disjoint")
        seen |= e.bits
    rects = [
        ProductRectangle(e, probe.atom(i)) for i, e in enumerate(events)
    ]
    value = eval_composed_factored(s, probe, rects, rects)
    if abs(value.imag) > tol.scaled(s.matrix):
        raise AxiomViolationError(
            f"probe value has imaginary residue {value.imag:.3e}"
        )
    return value.real


@dataclass(frozen=True)
class DualReport:
    in_dual_of_posentry: bool
    dual_violation: tuple[int, int] | None
    strongly_positive: bool
    min_eigenvalue: float
    probe_vector: np.ndarray
    probe_value: float


def dual_membership_report(s: QuantumSystem, tol: Tolerance = DEFAULT_TOL) -> DualReport:
    """Report dual-of-P membership and strong positivity with a probe demo.

    The probe vector is the most-negative eigenvector of the atomic matrix;
    when the system is not strongly positive the reported probe value is a
    concrete negative composed measure realizing the exclusion.
    """
    dual = is_in_dual_of_posentry(s, tol)
    strong = is_strongly_positive(s, tol)
    value = probe_quadratic_form(s, s.atoms(), strong.eigenvector, tol)
    return DualReport(
        in_dual_of_posentry=dual.ok,
        dual_violation=dual.index,
        strongly_positive=strong.ok,
        min_eigenvalue=strong.min_eigenvalue,
        probe_vector=strong.eigenvector,
        probe_value=value,
    )
