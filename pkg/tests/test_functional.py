import numpy as np
import pytest

from qmt import (
    ArityMismatchError,
    AxiomViolationError,
    Event,
    MeasureTable,
    QuantumSystem,
    SumRuleViolationError,
    Tolerance,
    check_axioms,
    check_quantal_sum_rule,
    eval_D,
    event_matrix,
    measure_table,
    quantal_measure,
    system_from_measure,
)

from conftest import oracle_event_value, random_hermitian_system


def ev(indices, n=2):
    return Event.from_indices(indices, n)


class TestQuantumSystem:
    def test_rejects_non_hermitian(self):
        with pytest.raises(AxiomViolationError, match="Hermitian"):
            QuantumSystem([[0.5, 0.5], [0.2, 0.0]])

    def test_rejects_non_normalized(self):
        with pytest.raises(AxiomViolationError, match="sum"):
            QuantumSystem([[2.0, -1.0], [-1.0, 0.5]])

    def test_rejects_non_square(self):
        with pytest.raises(AxiomViolationError):
            QuantumSystem([[1.0, 0.0]])

    def test_rejects_wrong_label_count(self):
        with pytest.raises(AxiomViolationError):
            QuantumSystem([[1.0]], labels=("a", "b"))

    def test_matrix_is_read_only(self, m_system):
        with pytest.raises(ValueError):
            m_system.matrix[0, 0] = 5.0

    def test_default_labels(self, n_system):
        assert n_system.labels == ("g0", "g1")

    def test_eps_widening_admits_borderline(self):
        m = np.array([[0.25, 0.25], [0.25, 0.25 + 3e-9]])
        with pytest.raises(AxiomViolationError):
            QuantumSystem(m)
        QuantumSystem(m, tol=Tolerance(1e-8, 1e-8))


class TestEvalD:
    def test_normalization_reference_n(self, n_system):
        assert eval_D(n_system, Event.full(2), Event.full(2)) == pytest.approx(1.0)

    def test_empty_event_gives_zero(self, n_system):
        assert eval_D(n_system, Event.empty(2), Event.full(2)) == 0

    def test_full_sum_of_m(self, m_system):
        assert eval_D(m_system, ev([0, 1]), ev([0, 1])) == pytest.approx(1.0)

    def test_arity_mismatch(self, m_system):
        with pytest.raises(ArityMismatchError):
            eval_D(m_system, Event.full(3), Event.full(3))

    def test_bi_additivity_on_random_disjoint_pairs(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(2, 6))
            s = random_hermitian_system(rng, n)
            mask_a = int(rng.integers(0, 1 << n))
            mask_b = int(rng.integers(0, 1 << n)) & ~mask_a
            mask_c = int(rng.integers(0, 1 << n))
            a, b, c = Event(mask_a, n), Event(mask_b, n), Event(mask_c, n)
            lhs = eval_D(s, a | b, c)
            rhs = eval_D(s, a, c) + eval_D(s, b, c)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_hermitian_symmetry(self):
        rng = np.random.default_rng(12)
        s = random_hermitian_system(rng, 4)
        for _ in range(50):
            a = Event(int(rng.integers(0, 16)), 4)
            b = Event(int(rng.integers(0, 16)), 4)
            assert eval_D(s, a, b) == pytest.approx(np.conj(eval_D(s, b, a)))

    def test_against_double_loop_oracle(self):
        rng = np.random.default_rng(13)
        s = random_hermitian_system(rng, 5)
        for _ in range(30):
            a = Event(int(rng.integers(0, 32)), 5)
            b = Event(int(rng.integers(0, 32)), 5)
            expected = oracle_event_value(s.matrix, a.indices(), b.indices())
            assert eval_D(s, a, b) == pytest.approx(expected)


class TestEventMatrix:
    def test_atoms_reproduce_atomic_matrix(self, n_system):
        m = event_matrix(n_system, list(n_system.atoms()))
        assert np.allclose(m, n_system.matrix)

    def test_coarse_grained_entries(self, n_system):
        m = event_matrix(n_system, [ev([0]), ev([0, 1])])
        assert np.allclose(m, [[0.2, 0.6], [0.6, 1.0]])

    def test_empty_event(self, n_system):
        assert np.allclose(event_matrix(n_system, [Event.empty(2)]), [[0.0]])

    def test_requires_distinct_events(self, n_system):
        with pytest.raises(ValueError):
            event_matrix(n_system, [ev([0]), ev([0])])


class TestQuantalMeasure:
    def test_full_event_is_one(self, m_system):
        assert quantal_measure(m_system, Event.full(2)) == pytest.approx(1.0)

    def test_zero_diagonal_atom(self, n_system):
        assert quantal_measure(n_system, ev([1])) == pytest.approx(0.0)

    def test_union_value(self, n_system):
        assert quantal_measure(n_system, ev([0, 1])) == pytest.approx(1.0)

    def test_imaginary_residue_rejected(self):
        # admit a slightly non-Hermitian matrix, then measure it strictly
        loose = Tolerance(1e-5, 1e-5)
        skewed = QuantumSystem([[0.25, 0.25 + 1e-6j], [0.25, 0.25]], tol=loose)
        with pytest.raises(AxiomViolationError, match="imaginary"):
            quantal_measure(skewed, ev([0, 1]))
        assert quantal_measure(skewed, ev([0, 1]), tol=loose) == pytest.approx(1.0)


class TestCheckAxioms:
    def test_all_pass_on_reference_system(self, m_system):
        report = check_axioms(m_system)
        assert report.hermitian and report.normalized and report.is_system
        assert report.weakly_positive is True
        assert "construction" in report.additivity

    def test_normalization_failure(self):
        report = check_axioms(np.array([[2.0, -1.0], [-1.0, 0.5]]))
        assert report.hermitian and not report.normalized
        assert report.entry_sum == pytest.approx(0.5)

    def test_weak_positivity_detail(self):
        report = check_axioms(np.array([[1.5, -0.25], [-0.25, 0.0]]))
        assert report.is_system and report.weakly_positive is True

    def test_weak_violation_reported(self):
        report = check_axioms(np.array([[-0.5, 0.5], [0.5, 0.5]]))
        assert report.weakly_positive is False
        assert report.weak_violation == ev([0])
        assert report.weak_violation_value == pytest.approx(-0.5)

    def test_weak_check_skippable(self):
        report = check_axioms(np.eye(2) / 2.0, check_weak=False)
        assert report.weakly_positive is None


class TestQuantalSumRule:
    def test_holds_for_any_hermitian_system(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            s = random_hermitian_system(rng, 3)
            report = check_quantal_sum_rule(s)
            assert report.passed and report.exhaustive

    def test_empty_triple_is_trivial(self, m_system):
        assert check_quantal_sum_rule(m_system).passed

    def test_sampled_path_on_larger_system(self):
        rng = np.random.default_rng(22)
        s = random_hermitian_system(rng, 10)
        report = check_quantal_sum_rule(s, exhaustive_limit=8, samples=200)
        assert report.passed and not report.exhaustive


class TestMeasureTable:
    def test_from_system_and_validate(self, n_system):
        table = measure_table(n_system)
        table.validate()
        assert table.value(Event.full(2)) == pytest.approx(1.0)
        assert table.value(Event.empty(2)) == pytest.approx(0.0)

    def test_rejects_wrong_size(self):
        with pytest.raises(ValueError):
            MeasureTable(2, np.zeros(3))

    def test_validate_rejects_unnormalized(self):
        table = MeasureTable(1, np.array([0.0, 0.5]))
        with pytest.raises(SumRuleViolationError):
            table.validate()

    def test_validate_rejects_sum_rule_break(self):
        # three atoms, tamper with a pair value so the (0,1,2) triple breaks
        values = np.zeros(8)
        values[0b111] = 1.0
        values[0b001] = 0.2
        values[0b010] = 0.3
        values[0b100] = 0.5
        values[0b011] = 0.5
        values[0b110] = 0.8
        values[0b101] = 0.9  # should be 0.7 for additivity
        with pytest.raises(SumRuleViolationError):
            MeasureTable(3, values).validate()


class TestMeasureCorrespondence:
    def test_classical_probability_vector(self):
        values = np.array([0.0, 0.3, 0.7, 1.0])
        system = system_from_measure(MeasureTable(2, values))
        assert np.allclose(system.matrix, np.diag([0.3, 0.7]))

    def test_single_atom(self):
        system = system_from_measure(MeasureTable(1, np.array([0.0, 1.0])))
        assert np.allclose(system.matrix, [[1.0]])

    def test_interference_off_diagonal(self):
        # both atoms carry unit measure yet the whole space has measure one
        values = np.array([0.0, 1.0, 1.0, 1.0])
        system = system_from_measure(MeasureTable(2, values))
        assert system.matrix[0, 1] == pytest.approx(-0.5)
        assert quantal_measure(system, Event.full(2)) == pytest.approx(1.0)

    def test_round_trip_on_derived_tables(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            n = int(rng.integers(1, 5))
            r = rng.uniform(0.0, 1.0, size=(n, n))
            sym = (r + r.T) / 2.0
            base = QuantumSystem(sym / sym.sum())
            table = measure_table(base)
            rebuilt = system_from_measure(table)
            assert np.allclose(rebuilt.matrix, base.matrix, atol=1e-12)
            rebuilt_table = measure_table(rebuilt)
            assert np.allclose(rebuilt_table.values, table.values, atol=1e-12)

    def test_sum_rule_violation_rejected(self):
        values = np.array([0.0, 0.6, 0.6, 1.0, 0.9, 1.2, 1.2, 1.0])
        # a genuinely non-quantal table: tampering breaks bi-additivity
        values[0b011] = 0.1
        with pytest.raises(SumRuleViolationError):
            system_from_measure(MeasureTable(3, values))
