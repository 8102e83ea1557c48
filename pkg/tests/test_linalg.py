import numpy as np
import pytest

from kacwalk import linalg


def test_as_matrix_copies_and_coerces():
    raw = [[1, 2], [3, 4]]
    A = linalg.as_matrix(raw)
    assert A.dtype == np.float64
    A[0, 0] = 99.0
    assert raw[0][0] == 1


@pytest.mark.parametrize("bad", [np.zeros(3), np.zeros((2, 2, 2)),
                                 np.zeros((0, 3)), [[np.nan, 1.0]]])
def test_as_matrix_rejects(bad):
    with pytest.raises(ValueError):
        linalg.as_matrix(bad)


@pytest.mark.parametrize("bad", [np.zeros((2, 2)), [], [np.inf]])
def test_as_vector_rejects(bad):
    with pytest.raises(ValueError):
        linalg.as_vector(bad)


def test_matvec_matches_manual():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((5, 3))
    x = rng.standard_normal(3)
    manual = np.array([float(A[i] @ x) for i in range(5)])
    assert np.allclose(linalg.matvec(A, x), manual, rtol=0, atol=1e-14)


def test_matvec_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        linalg.matvec(np.eye(3), np.ones(4))


def test_gram_entry_is_row_inner_product():
    A = np.array([[1.0, 0.0], [0.6, 0.8]])
    assert linalg.gram_entry(A, 0, 1) == pytest.approx(0.6, abs=1e-15)
    assert linalg.gram_entry(A, 1, 1) == pytest.approx(1.0, abs=1e-15)


def test_gram_entry_range_checked():
    with pytest.raises(IndexError):
        linalg.gram_entry(np.eye(2), 0, 2)


def test_normalize_rows_unit_norms():
    rng = np.random.default_rng(7)
    A = linalg.normalize_rows(rng.standard_normal((8, 5)))
    assert np.abs(np.linalg.norm(A, axis=1) - 1.0).max() < 1e-14


def test_normalize_rows_zero_row():
    with pytest.raises(ValueError, match="zero row"):
        linalg.normalize_rows(np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_frobenius_sq_known_value():
    assert linalg.frobenius_sq([[3.0, 4.0], [0.0, 1.0]]) == pytest.approx(26.0)


def test_frobenius_sq_equals_sum_of_squared_singular_values():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 4))
    sig = linalg.singular_values(A)
    assert linalg.frobenius_sq(A) == pytest.approx(float((sig**2).sum()),
                                                   rel=1e-12)


def test_singular_values_closed_form_2x2():
    # Rows e1 and (e1 + e2)/sqrt(2): A^T A has trace 2 and det 1/2, so the
    # squared singular values are 1 +- sqrt(2)/2.
    A = np.array([[1.0, 0.0], [1.0, 1.0]]) / np.array([[1.0], [np.sqrt(2.0)]])
    sig = linalg.singular_values(A)
    expected = np.sqrt([1.0 + np.sqrt(2.0) / 2.0, 1.0 - np.sqrt(2.0) / 2.0])
    assert np.abs(sig - expected).max() < 1e-12


def test_singular_values_match_gram_eigenvalues():
    rng = np.random.default_rng(11)
    A = rng.standard_normal((7, 4))
    sig = linalg.singular_values(A)
    eig = np.sort(np.linalg.eigvalsh(A.T @ A))[::-1]
    assert np.abs(sig**2 - eig).max() < 1e-10
    assert np.all(np.diff(sig) <= 0)


def test_singular_values_padded_to_column_count():
    sig = linalg.singular_values(np.array([[1.0, 0.0, 0.0]]))
    assert sig.shape == (3,)
    assert np.allclose(sig, [1.0, 0.0, 0.0])
