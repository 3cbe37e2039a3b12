"""Constructive self-composition counterexamples.

Any weakly positive system that is neither strongly positive nor
positive-entry composes with itself, a computable number of times, into a
quasi-system with a negative-measure event.  This module builds that event
explicitly: it locates a disjoint event pair with a non-trivial phase and a
principal atomic submatrix with negative determinant, picks exponents from
the cosine sign recipe and the even/odd permutation sums, and verifies the
predicted negative value by direct summation over the event's product
components (plus, when small enough, against the materialized Kronecker
power).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import Event, ProductRectangle, embed_product
from .classify import (
    Classification,
    classify,
    is_positive_entry,
    is_strongly_positive,
    is_weakly_positive,
)
from .compose import MATERIALIZATION_LIMIT, compose, self_compose
from .errors import (
    AxiomViolationError,
    PreconditionError,
    QCapError,
    QmtError,
    SearchExhaustedError,
)
from .functional import DEFAULT_TOL, QuantumSystem, Tolerance, eval_D, quantal_measure

PERM_ORDER_MIN = 2
PERM_ORDER_MAX = 6
NEG_DET_SIZE_CAP = 6
DEFAULT_Q_CAP = 64
# Constructed values below this magnitude cannot be verified in doubles.
VALUE_FLOOR = 1e-280
# Bounds on the case-b plan search.
SUBSET_SEARCH_LIMIT = 24
PAIR_SEARCH_LIMIT = 24
# Literal double-sum verification up to this many components; beyond it the
# same double sum is evaluated blockwise (grouped by shared prefixes and
# permutation blocks), which is algebraically identical.
ORACLE_PAIR_CAP = 2048
COMPONENT_LIST_CAP = 65536
PHASE_FALLBACK_LIMIT = 10


@dataclass(frozen=True)
class PolarEntry:
    """Polar form of a functional value, with r >= 0 and theta in (-pi, pi]."""

    r: float
    theta: float


def polar(z: complex, eps: float = 0.0) -> PolarEntry:
    """Polar decomposition with tolerance snapping.

    Values with modulus <= eps collapse to (0, 0); values that are real
    within eps get theta 0 (non-negative) or exactly pi (negative), so that
    sign decisions downstream see clean phases.
    """
    r = abs(z)
    if r <= eps:
        return PolarEntry(0.0, 0.0)
    if abs(z.imag) <= eps:
        if z.real >= -eps:
            return PolarEntry(r, 0.0)
        return PolarEntry(r, math.pi)
    return PolarEntry(r, math.atan2(z.imag, z.real))


def _permutations_by_parity(m: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    even, odd = [], []
    for perm in itertools.permutations(range(m)):
        inversions = sum(
            1
            for i in range(m)
            for j in range(i + 1, m)
            if perm[i] > perm[j]
        )
        (even if inversions % 2 == 0 else odd).append(perm)
    return even, odd


def _perm_block_sum(
    matrix: np.ndarray,
    rows: Sequence[tuple[int, ...]],
    cols: Sequence[tuple[int, ...]],
) -> complex:
    """Sum over permutation pairs of the entrywise product along slots."""
    p = np.array(rows, dtype=np.intp)
    q = np.array(cols, dtype=np.intp)
    vals = matrix[p[:, None, :], q[None, :, :]]
    return complex(vals.prod(axis=2).sum())


def _perm_block_sums(matrix: np.ndarray) -> tuple[complex, complex, complex, complex]:
    """(even-even, even-odd, odd-even, odd-odd) double permutation sums.

    Each block is enumerated directly; no parity identities are assumed,
    so these sums can serve as an independent check of those identities.
    """
    m = matrix.shape[0]
    even, odd = _permutations_by_parity(m)
    ee = _perm_block_sum(matrix, even, even)
    eo = _perm_block_sum(matrix, even, odd)
    oe = _perm_block_sum(matrix, odd, even)
    oo = _perm_block_sum(matrix, odd, odd)
    return ee, eo, oe, oo


@dataclass(frozen=True)
class PermSums:
    """Even-even and even-odd permutation double sums of a Hermitian matrix."""

    ee: float
    eo: float
    order: int


def perm_sums(matrix: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> PermSums:
    """Compute ee and eo; both are real for Hermitian input.

    Guarded to orders 2..6: the double sum has (m!/2)**2 terms.
    """
    n = np.asarray(matrix, dtype=complex)
    m = n.shape[0]
    if n.ndim != 2 or n.shape[0] != n.shape[1]:
        raise ValueError(f"matrix must be square, got shape {n.shape}")
    if not PERM_ORDER_MIN <= m <= PERM_ORDER_MAX:
        raise ValueError(f"permutation sums support order 2..{PERM_ORDER_MAX}, got {m}")
    ee, eo, _, _ = _perm_block_sums(n)
    half = math.factorial(m) // 2
    scale = half * half * max(1.0, float(np.abs(n).max())) ** m
    slack = tol.eps_abs + tol.eps_rel * scale
    if abs(ee.imag) > slack or abs(eo.imag) > slack:
        raise AxiomViolationError(
            f"permutation sums have imaginary residues ({ee.imag:.3e}, {eo.imag:.3e}); "
            "input is not Hermitian"
        )
    return PermSums(ee=ee.real, eo=eo.real, order=m)


def det_identity_residual(matrix: np.ndarray) -> float:
    """Residual of the identity m! * det = 2*ee - 2*eo for a square matrix."""
    n = np.asarray(matrix, dtype=complex)
    m = n.shape[0]
    if not PERM_ORDER_MIN <= m <= PERM_ORDER_MAX:
        raise ValueError(f"identity check supports order 2..{PERM_ORDER_MAX}, got {m}")
    ee, eo, _, _ = _perm_block_sums(n)
    det = complex(np.linalg.det(n))
    return abs(math.factorial(m) * det - 2.0 * ee + 2.0 * eo)


def cos_sign_pair(theta: float) -> tuple[int, int]:
    """Exponents (n, m) with cos(n*theta) < 0 and cos(m*theta) >= 0.

    Recipe, on t = |theta|: for t <= pi/2 take m=1 and n = floor(pi/(2t) + 1);
    for t in (pi/2, 3pi/4] take n=1, m=3; for t in (3pi/4, pi] take n=1, m=2.
    """
    if not -math.pi < theta <= math.pi:
        raise ValueError(f"theta must lie in (-pi, pi], got {theta}")
    if theta == 0.0:
        raise ValueError("theta must be non-zero")
    t = abs(theta)
    if t <= math.pi / 2:
        n, m = int(math.floor(math.pi / (2 * t) + 1)), 1
    elif t <= 3 * math.pi / 4:
        n, m = 1, 3
    else:
        n, m = 1, 2
    if not (math.cos(n * t) < 0.0 and math.cos(m * t) >= 0.0):
        raise QmtError(f"cosine sign recipe failed for theta={theta!r}: n={n}, m={m}")
    return n, m


class PhasePair(NamedTuple):
    first: Event
    second: Event
    theta: float
    modulus: float


def find_phase_pair(s: QuantumSystem, tol: Tolerance = DEFAULT_TOL) -> PhasePair:
    """Disjoint event pair with non-zero modulus and non-zero phase.

    For a weakly positive system the diagonal atomic entries are atom
    measures, hence non-negative, so any entry violating the positive-entry
    condition sits off the diagonal and the scan over off-diagonal atomic
    pairs is sufficient.  Among valid pairs the one with the largest phase
    magnitude wins (ties by row-major order): phases near zero force huge
    exponents downstream.  A generic event-pair search with the
    disjointness splitting A1 = A&B, A2 = A\\B, B2 = B\\A is kept as a
    fallback for inputs at the tolerance boundary.
    """
    candidates = _pair_candidates(s, tol)
    if candidates:
        return candidates[0]
    if s.n <= PHASE_FALLBACK_LIMIT:
        hit = _phase_pair_fallback(s, tol.scaled(s.matrix))
        if hit is not None:
            return hit
    raise SearchExhaustedError(
        "no event pair with non-trivial phase: system is positive-entry within tolerance"
    )


def _phase_pair_fallback(s: QuantumSystem, eps: float) -> PhasePair | None:
    n = s.n
    total = 1 << n
    shifts = np.arange(n, dtype=np.uint64)
    masks = np.arange(total, dtype=np.uint64)
    indicators = (masks[:, None] >> shifts[None, :] & 1).astype(complex)
    row_sums = indicators @ s.matrix  # row_sums[a] = sum of rows in mask a

    def candidate(a_bits: int, b_bits: int) -> PhasePair | None:
        if a_bits == 0 or b_bits == 0:
            return None
        value = complex(indicators[b_bits] @ row_sums[a_bits])
        pe = polar(value, eps)
        if pe.r > 0.0 and pe.theta != 0.0:
            return PhasePair(Event(a_bits, n), Event(b_bits, n), pe.theta, pe.r)
        return None

    for a_bits in range(1, total):
        values = row_sums[a_bits] @ indicators.T
        for b_bits in range(1, total):
            pe = polar(complex(values[b_bits]), eps)
            if pe.r == 0.0 or pe.theta == 0.0:
                continue
            if a_bits & b_bits == 0:
                return PhasePair(Event(a_bits, n), Event(b_bits, n), pe.theta, pe.r)
            a1 = a_bits & b_bits
            a2 = a_bits & ~b_bits
            b2 = b_bits & ~a_bits
            for pair in ((a1, b2), (a2, a1), (a2, b2)):
                found = candidate(*pair)
                if found is not None:
                    return found
    return None


class NegDetSubset(NamedTuple):
    atoms: tuple[int, ...]
    submatrix: np.ndarray
    det: float


def _neg_det_candidates(s: QuantumSystem, tol: Tolerance, *, size_cap: int, limit: int):
    """Yield negative-determinant principal subsets, smallest size first.

    Within each size, subsets come in ascending bitmask order.  Small
    subsets keep the permutation sums and component counts downstream
    small, so they are preferred, but later candidates matter when the
    first subset's permutation sums leave no feasible exponent.
    """
    n = s.n
    m = s.matrix
    found = 0
    for size in range(2, min(n, size_cap) + 1):
        masked = sorted(
            (sum(1 << i for i in combo), combo)
            for combo in itertools.combinations(range(n), size)
        )
        for _, combo in masked:
            idx = np.array(combo, dtype=np.intp)
            sub = m[np.ix_(idx, idx)]
            det = complex(np.linalg.det(sub)).real
            if det < -tol.scaled(sub):
                sub = sub.copy()
                sub.flags.writeable = False
                yield NegDetSubset(tuple(combo), sub, float(det))
                found += 1
                if found >= limit:
                    return


def find_negative_det_subset(
    s: QuantumSystem,
    tol: Tolerance = DEFAULT_TOL,
    *,
    size_cap: int = NEG_DET_SIZE_CAP,
) -> NegDetSubset:
    """Smallest atom subset whose principal submatrix has negative determinant.

    Smallest size first, ties broken by ascending subset bitmask.  A
    Hermitian matrix that is not PSD always has such a subset, though
    possibly larger than the size cap.
    """
    for neg in _neg_det_candidates(s, tol, size_cap=size_cap, limit=1):
        return neg
    lo = float(np.linalg.eigvalsh(s.matrix)[0])
    raise SearchExhaustedError(
        f"no principal submatrix of size <= {size_cap} has negative determinant "
        f"(lambda_min = {lo:.3e}); the system is PSD or borderline"
    )


@dataclass(frozen=True)
class Witness:
    """A verified negative-measure event in a k-fold self-composition.

    ``factors`` lists the distinct building-block events; each component of
    the constructed event is a k-tuple of factor ids (index into
    ``factors``), standing for the product event of those factors in slot
    order.  ``components`` is None when the count exceeds the
    materialization cap; the verified value is then computed blockwise.
    """

    case: str
    phase_pair: PhasePair
    neg_det_atoms: tuple[int, ...] | None
    ee: float | None
    eo: float | None
    p: int | None
    q: int | None
    k: int
    x_p: float | None
    y_p: float | None
    factors: tuple[Event, ...]
    component_count: int
    components: tuple[tuple[int, ...], ...] | None
    predicted_value: float
    verified_value: float
    cross_checked: bool
    cross_check_value: float | None

    def component_atom_tuples(self) -> tuple[tuple[int, ...], ...]:
        """Components as atom-index tuples; requires singleton factors."""
        if self.components is None:
            raise QmtError(f"{self.component_count} components were not materialized")
        atom_of = []
        for f in self.factors:
            idx = f.indices()
            if len(idx) != 1:
                raise QmtError(f"factor {f!r} is not a single atom")
            atom_of.append(idx[0])
        return tuple(tuple(atom_of[fid] for fid in comp) for comp in self.components)


def _factor_values(s: QuantumSystem, factors: Sequence[Event]) -> np.ndarray:
    out = np.zeros((len(factors), len(factors)), dtype=complex)
    for i, a in enumerate(factors):
        for j, b in enumerate(factors):
            out[i, j] = eval_D(s, a, b)
    return out


def _double_sum(values: np.ndarray, comps: np.ndarray) -> complex:
    """Literal double sum over components of slot-wise entry products."""
    total = 0j
    for c in comps:
        total += complex(values[c[None, :], comps].prod(axis=1).sum())
    return total


def _neg_cos_candidates(theta: float, hi: int) -> list[int]:
    # The recipe exponent can be huge for tiny phases; scan a bounded window
    # and always include the guaranteed exponent itself.
    n_neg, _ = cos_sign_pair(theta)
    out = [p for p in range(1, hi + 1) if math.cos(p * theta) < 0.0]
    if n_neg not in out:
        out.append(n_neg)
    return out


def _pair_candidates(s: QuantumSystem, tol: Tolerance) -> list[PhasePair]:
    """Valid atomic phase pairs, largest phase magnitude first."""
    eps = tol.scaled(s.matrix)
    out = []
    for i in range(s.n):
        for j in range(s.n):
            if i == j:
                continue
            pe = polar(complex(s.matrix[i, j]), eps)
            if pe.r > 0.0 and pe.theta != 0.0:
                out.append((-abs(pe.theta), i, j, PhasePair(s.atom(i), s.atom(j), pe.theta, pe.r)))
    out.sort(key=lambda item: item[:3])
    return [item[3] for item in out]


class _PlanB(NamedTuple):
    rank: tuple
    case: str
    pair: PhasePair
    neg: NegDetSubset
    sums: PermSums
    p: int
    q: int
    x_p: float
    y_p: float
    predicted: float


def _search_case_b(
    s: QuantumSystem,
    tol: Tolerance,
    pairs: Sequence[PhasePair],
    q_cap: int,
) -> _PlanB:
    """Pick subset, phase pair and exponents for the general construction.

    All combinations of candidate subsets (canonical order) and phase pairs
    are planned; the exponent p must make cos(p*theta) non-negative
    (even-odd sum non-positive) or negative (otherwise), and in the mixed
    subcase q grows until the positive term is at most half the negative
    one.  Among feasible plans the one with the fewest event components
    wins, then the smallest power k: any feasible plan proves the point,
    so the cheapest one to verify is preferred.
    """
    best = None
    ratios = []
    subsets = list(
        _neg_det_candidates(s, tol, size_cap=NEG_DET_SIZE_CAP, limit=SUBSET_SEARCH_LIMIT)
    )
    if not subsets:
        lo = float(np.linalg.eigvalsh(s.matrix)[0])
        raise SearchExhaustedError(
            f"no principal submatrix of size <= {NEG_DET_SIZE_CAP} has negative "
            f"determinant (lambda_min = {lo:.3e})"
        )
    for si, neg in enumerate(subsets):
        sums = perm_sums(neg.submatrix, tol)
        ee, eo = sums.ee, sums.eo
        if ee >= eo:
            raise QmtError(
                f"negative determinant {neg.det:.3e} but ee={ee:.6g} >= eo={eo:.6g}; "
                "permutation sums are inconsistent"
            )
        m = sums.order
        half = math.factorial(m) // 2
        if eo > 0.0:
            ratios.append(ee / eo)
        for pi, pair in enumerate(pairs[:PAIR_SEARCH_LIMIT]):
            theta = pair.theta
            raa = max(0.0, quantal_measure(s, pair.first, tol))
            rbb = max(0.0, quantal_measure(s, pair.second, tol))
            if eo <= 0.0:
                case = "b_i"
                _, p_nonneg = cos_sign_pair(theta)
                p_list = [p_nonneg]
            else:
                case = "b_ii" if ee <= 0.0 else "b_iii"
                p_list = _neg_cos_candidates(theta, q_cap)
            for p in p_list:
                x_p = raa**p + rbb**p
                y_p = 2.0 * pair.modulus**p
                cos_p = math.cos(p * theta)
                if case == "b_iii":
                    target = 0.5 * y_p * abs(cos_p)
                    ratio = ee / eo
                    xq = x_p * ratio
                    q = 1
                    while xq > target and q < q_cap:
                        xq *= ratio
                        q += 1
                    if xq > target:
                        continue
                else:
                    q = 1
                predicted = x_p * ee**q + y_p * cos_p * eo**q
                if not predicted < -VALUE_FLOOR:
                    continue
                rank = (2 * half**q, p + m * q, si, pi, p)
                plan = _PlanB(rank, case, pair, neg, sums, p, q, x_p, y_p, predicted)
                if best is None or plan.rank < best.rank:
                    best = plan
    if best is None:
        worst = max(ratios) if ratios else float("nan")
        max_theta = max(abs(pr.theta) for pr in pairs)
        raise QCapError(
            f"no witness within q <= {q_cap}: even-even/even-odd ratio up to "
            f"{worst:.9g} and phase magnitude at most {max_theta:.3e} leave no "
            "feasible exponents; raise --qmax"
        )
    return best


def build_witness(
    s: QuantumSystem,
    tol: Tolerance = DEFAULT_TOL,
    *,
    q_cap: int = DEFAULT_Q_CAP,
    cross_check_limit: int = MATERIALIZATION_LIMIT,
) -> Witness:
    """Construct and verify a negative-measure event for Sys^(x k).

    Preconditions: the system is weakly positive, not strongly positive,
    not positive-entry, and has at least two atoms.  Case (a) applies when
    both phase-pair diagonals vanish; otherwise case (b) splits on the
    signs of the permutation sums of the negative-determinant submatrix.
    """
    eps = tol.scaled(s.matrix)
    if s.n < 2:
        raise PreconditionError("witness construction needs at least 2 atoms")
    if not is_weakly_positive(s, tol).ok:
        raise PreconditionError("system is not weakly positive")
    if is_strongly_positive(s, tol).ok:
        raise PreconditionError("system is strongly positive")
    if is_positive_entry(s, tol).ok:
        raise PreconditionError("system is positive entry")

    pairs = _pair_candidates(s, tol)
    if not pairs:
        # tolerance-boundary inputs: fall back to the event-pair splitting
        pairs = [find_phase_pair(s, tol)]
    primary = pairs[0]
    r_aa = max(0.0, quantal_measure(s, primary.first, tol))
    r_bb = max(0.0, quantal_measure(s, primary.second, tol))
    if r_aa <= eps and r_bb <= eps:
        try:
            return _case_a(s, tol, primary, cross_check_limit)
        except QCapError:
            pass  # phase too shallow for the pure-phase event; try the general form

    plan = _search_case_b(s, tol, pairs, q_cap)
    pair = plan.pair
    case = plan.case
    neg = plan.neg
    ee, eo = plan.sums.ee, plan.sums.eo
    p, q = plan.p, plan.q
    m = plan.sums.order
    k = p + m * q
    predicted = plan.predicted

    factors = (pair.first, pair.second) + tuple(s.atom(i) for i in neg.atoms)
    even, odd = _permutations_by_parity(m)
    half = len(even)
    count = 2 * half**q

    components = None
    if count <= COMPONENT_LIST_CAP:
        components = _materialize_components(p, q, m, even, odd)
        if len(set(components)) != len(components):
            raise QmtError("witness components are not pairwise distinct")

    values = _factor_values(s, factors)
    if components is not None and count <= ORACLE_PAIR_CAP:
        comps = np.array(components, dtype=np.intp)
        verified_c = _double_sum(values, comps)
    else:
        verified_c = _blockwise_value(values, p, q, m)
    if abs(verified_c.imag) > max(eps, 1e-12 * max(1.0, abs(verified_c))):
        raise QmtError(f"verified value has imaginary residue {verified_c.imag:.3e}")
    verified = verified_c.real

    cross_value = None
    cross_checked = False
    if s.n**k <= cross_check_limit and components is not None:
        cross_value = _materialized_value(s, factors, components, k, tol)
        cross_checked = True

    return _finish(
        Witness(
            case=case,
            phase_pair=pair,
            neg_det_atoms=neg.atoms,
            ee=ee,
            eo=eo,
            p=p,
            q=q,
            k=k,
            x_p=plan.x_p,
            y_p=plan.y_p,
            factors=factors,
            component_count=count,
            components=components,
            predicted_value=predicted,
            verified_value=verified,
            cross_checked=cross_checked,
            cross_check_value=cross_value,
        ),
        tol,
    )


def _case_a(
    s: QuantumSystem,
    tol: Tolerance,
    pair: PhasePair,
    cross_check_limit: int,
) -> Witness:
    k, _ = cos_sign_pair(pair.theta)
    predicted = 2.0 * pair.modulus**k * math.cos(k * pair.theta)
    if not predicted < -VALUE_FLOOR:
        raise QCapError(
            f"constructed value {predicted:.3e} is not decisively negative in double "
            f"precision (theta = {pair.theta:.3e}, k = {k})"
        )
    factors = (pair.first, pair.second)
    components = ((0,) * k, (1,) * k)
    values = _factor_values(s, factors)
    verified_c = _double_sum(values, np.array(components, dtype=np.intp))
    verified = verified_c.real

    cross_value = None
    cross_checked = False
    if s.n**k <= cross_check_limit:
        cross_value = _materialized_value(s, factors, components, k, tol)
        cross_checked = True

    return _finish(
        Witness(
            case="a",
            phase_pair=pair,
            neg_det_atoms=None,
            ee=None,
            eo=None,
            p=None,
            q=None,
            k=k,
            x_p=None,
            y_p=None,
            factors=factors,
            component_count=2,
            components=components,
            predicted_value=predicted,
            verified_value=verified,
            cross_checked=cross_checked,
            cross_check_value=cross_value,
        ),
        tol,
    )


def _materialize_components(
    p: int,
    q: int,
    m: int,
    even: list[tuple[int, ...]],
    odd: list[tuple[int, ...]],
) -> tuple[tuple[int, ...], ...]:
    """Component tuples of factor ids: prefix then q permutation blocks.

    Factor id 0 is the first phase event, 1 the second, 2..m+1 the
    negative-determinant atoms in subset order.
    """
    out = []
    for prefix_id, perms in ((0, even), (1, odd)):
        prefix = (prefix_id,) * p
        for choice in itertools.product(perms, repeat=q):
            tail = tuple(2 + pi_i for pi in choice for pi_i in pi)
            out.append(prefix + tail)
    return tuple(out)


def _blockwise_value(values: np.ndarray, p: int, q: int, m: int) -> complex:
    """Double sum over all component pairs, grouped by prefix and blocks.

    The component set is a union of two product sets (prefix times q
    permutation blocks), so the full double sum factors exactly into four
    prefix values times q-th powers of directly enumerated permutation
    block sums.
    """
    w = values[2 : 2 + m, 2 : 2 + m]
    ee_c, eo_c, oe_c, oo_c = _perm_block_sums(w)
    paa = values[0, 0] ** p
    pbb = values[1, 1] ** p
    pab = values[0, 1] ** p
    pba = values[1, 0] ** p
    return paa * ee_c**q + pbb * oo_c**q + pab * eo_c**q + pba * oe_c**q


def _materialized_value(
    s: QuantumSystem,
    factors: Sequence[Event],
    components: Sequence[tuple[int, ...]],
    k: int,
    tol: Tolerance,
) -> float:
    """Measure of the embedded event on the materialized Kronecker power."""
    power = self_compose(s, k, tol)
    n = s.n
    bits = 0
    for comp in components:
        partial = [0]
        for fid in comp:
            atoms = factors[fid].indices()
            partial = [base * n + a for base in partial for a in atoms]
        for idx in partial:
            bits |= 1 << idx
    event = Event(bits, n**k)
    return quantal_measure(power, event, tol)


def _finish(w: Witness, tol: Tolerance) -> Witness:
    slack = tol.eps_abs + tol.eps_rel * max(1.0, abs(w.predicted_value))
    if abs(w.predicted_value - w.verified_value) > slack:
        raise QmtError(
            f"predicted {w.predicted_value:.12e} and verified {w.verified_value:.12e} "
            "witness values disagree"
        )
    if w.verified_value >= 0.0:
        raise QmtError(
            f"constructed event has non-negative measure {w.verified_value:.3e}"
        )
    if w.cross_checked and w.cross_check_value is not None:
        gap = abs(w.cross_check_value - w.verified_value)
        if gap > tol.eps_abs + tol.eps_rel * max(1.0, abs(w.verified_value)):
            raise QmtError(
                f"materialized cross-check {w.cross_check_value:.12e} disagrees "
                f"with the component sum {w.verified_value:.12e}"
            )
    return w


@dataclass(frozen=True)
class TensorProbeReport:
    """Composition of a positive-entry-only with a strongly-positive-only system."""

    composed: QuantumSystem
    classification: Classification
    padded_event_matrix: np.ndarray
    padded_min_eigenvalue: float
    entry_pair: tuple[Event, Event]
    entry_value: complex


def tensor_closed_probe(
    s1: QuantumSystem,
    s2: QuantumSystem,
    tol: Tolerance = DEFAULT_TOL,
) -> TensorProbeReport:
    """Compose s1 in P\\S with s2 in S\\P and exhibit the inherited defects.

    The event matrix over the padded events atom x Omega_2 reproduces the
    first factor's atomic matrix, so its negative eigenvalue rules out
    strong positivity of the composition; the padded pair Omega_1 x {i},
    Omega_1 x {j} reproduces the second factor's violating entry, ruling
    out the positive-entry property.
    """
    c1 = classify(s1, tol)
    if not (c1.positive_entry and not c1.strongly_positive):
        raise PreconditionError("first system must be positive-entry and not strongly positive")
    c2 = classify(s2, tol)
    if not (c2.strongly_positive and not c2.positive_entry):
        raise PreconditionError("second system must be strongly positive and not positive-entry")

    composed = compose(s1, s2, tol)
    full2 = Event.full(s2.n)
    padded = [embed_product(ProductRectangle(s1.atom(i), full2)) for i in range(s1.n)]
    pmat = np.zeros((s1.n, s1.n), dtype=complex)
    for i in range(s1.n):
        for j in range(s1.n):
            pmat[i, j] = eval_D(composed, padded[i], padded[j])
    lo = float(np.linalg.eigvalsh(pmat)[0])

    i, j = c2.entry_violation
    full1 = Event.full(s1.n)
    pa = embed_product(ProductRectangle(full1, s2.atom(i)))
    pb = embed_product(ProductRectangle(full1, s2.atom(j)))
    entry_value = eval_D(composed, pa, pb)

    result = classify(composed, tol)
    if result.strongly_positive or result.positive_entry:
        raise QmtError("composed system unexpectedly fell back into S or P")
    return TensorProbeReport(
        composed=composed,
        classification=result,
        padded_event_matrix=pmat,
        padded_min_eigenvalue=lo,
        entry_pair=(pa, pb),
        entry_value=complex(entry_value),
    )
