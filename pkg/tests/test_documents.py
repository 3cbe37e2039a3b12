import numpy as np
import pytest

from qmt import DocumentError, GenSpec, generate
from qmt.documents import (
    BUNDLED,
    SystemDocument,
    bundled_document,
    dumps,
    loads,
    read_document,
    write_document,
)


class TestBundledDocuments:
    @pytest.mark.parametrize("name", BUNDLED)
    def test_loadable_and_valid(self, name):
        doc = bundled_document(name)
        system = doc.to_system()
        assert system.n == 2
        assert doc.name == name

    def test_reference_values(self):
        m = bundled_document("strong_not_posentry").matrix
        assert np.allclose(m, [[2, -1], [-1, 1]])
        n = bundled_document("posentry_not_strong").matrix
        assert np.allclose(n, [[0.2, 0.4], [0.4, 0.0]])
        h = bundled_document("dual_posentry_member").matrix
        assert np.allclose(h, [[0.5, 0.5j], [-0.5j, 0.5]])

    def test_unknown_name(self):
        with pytest.raises(DocumentError):
            bundled_document("missing")


class TestRoundTrip:
    def test_write_read_write_is_byte_identical(self, tmp_path):
        system = generate(GenSpec("weak_not_strong_not_posentry", 3, 77))
        doc = SystemDocument("probe", system.labels, system.matrix, {"k": 1.5, "a": "x"})
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        write_document(first, doc)
        write_document(second, read_document(first))
        assert first.read_bytes() == second.read_bytes()

    def test_dumps_loads_preserves_values(self):
        matrix = np.array([[0.25, 0.25 + 0.1j], [0.25 - 0.1j, 0.25]])
        doc = SystemDocument("x", ("a", "b"), matrix, {})
        again = loads(dumps(doc))
        assert np.array_equal(again.matrix, matrix)
        assert again.atoms == ("a", "b")

    def test_seventeen_digit_floats(self):
        matrix = np.array([[1.0 / 3.0]])
        text = dumps(SystemDocument("third", ("a",), matrix, {}))
        assert "0.33333333333333331" in text


class TestParsing:
    def test_rejects_invalid_json(self):
        with pytest.raises(DocumentError, match="invalid JSON"):
            loads("{not json")

    def test_rejects_missing_fields(self):
        with pytest.raises(DocumentError, match="missing"):
            loads('{"name": "x"}')

    def test_rejects_ragged_matrix(self):
        with pytest.raises(DocumentError):
            loads(
                '{"name": "x", "atoms": ["a", "b"],'
                ' "matrix": [[{"re": 1, "im": 0}]], "metadata": {}}'
            )

    def test_rejects_string_encoded_complex(self):
        with pytest.raises(DocumentError):
            loads(
                '{"name": "x", "atoms": ["a"], "matrix": [["1+2j"]], "metadata": {}}'
            )

    def test_rejects_boolean_entries(self):
        with pytest.raises(DocumentError):
            loads(
                '{"name": "x", "atoms": ["a"],'
                ' "matrix": [[{"re": true, "im": 0}]], "metadata": {}}'
            )

    def test_shape_label_mismatch(self):
        with pytest.raises(DocumentError):
            SystemDocument("x", ("a", "b"), np.eye(3), {})

    def test_non_finite_rejected_on_write(self):
        doc = SystemDocument("x", ("a",), np.array([[1.0]]), {})
        object.__setattr__(doc, "matrix", np.array([[np.inf]]))
        with pytest.raises(DocumentError):
            dumps(doc)
