import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk import corpus
from qwalk.errors import ValidationError
from qwalk.linalg import (
    EigenMultiset,
    cluster,
    conj_transpose,
    determinant,
    eig_general,
    eig_hermitian,
    is_hermitian,
    is_isometry,
    is_unitary,
    matmul,
    multiset_equal,
)

SQRT3 = np.sqrt(3.0)


def random_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def random_unitary(rng, n):
    return corpus.random_isometry(n, n, rng)


def sorted_c(values):
    return np.array(sorted(np.asarray(values, dtype=complex), key=lambda z: (round(z.real, 6), round(z.imag, 6))))


def test_matmul_identity_and_involution(rng):
    x = random_complex(rng, 2, 5)
    assert np.allclose(matmul(np.eye(2), x), x)
    swap = np.array([[0, 1], [1, 0]])
    assert np.array_equal(matmul(swap, swap), np.eye(2))
    with pytest.raises(ValidationError):
        matmul(np.eye(2), np.eye(3))


def test_conj_transpose(rng):
    sym = np.array([[1.0, 2.0], [2.0, 5.0]])
    assert np.array_equal(conj_transpose(sym), sym)
    assert np.array_equal(conj_transpose(np.array([[1j]])), np.array([[-1j]]))
    a = random_complex(rng, 3, 4)
    assert np.array_equal(conj_transpose(conj_transpose(a)), a)


def test_determinant_examples(rng):
    assert determinant(np.eye(5)) == pytest.approx(1.0)
    assert determinant(np.diag([2.0, 3.0])) == pytest.approx(6.0)
    assert determinant(np.zeros((3, 3))) == 0
    assert abs(abs(determinant(random_unitary(rng, 9))) - 1.0) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_determinant_matches_numpy_and_eigenvalue_product(n, seed):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, n)
    ref = np.linalg.det(a)
    assert abs(determinant(a) - ref) <= 1e-9 * max(1.0, abs(ref))
    prod = np.prod(eig_general(a).values)
    assert abs(prod - ref) <= 1e-6 * abs(ref)


def test_eig_hermitian_small_golden_matrices():
    vals, _ = eig_hermitian(np.full((2, 2), 0.5))
    assert np.allclose(vals, [0.0, 1.0], atol=1e-12)
    vals, _ = eig_hermitian(np.diag([0.25, 1.0, 0.25]))
    assert np.allclose(vals, [0.25, 0.25, 1.0], atol=1e-15)
    vals, vecs = eig_hermitian(np.zeros((4, 4)))
    assert not vals.any() and np.allclose(vecs.conj().T @ vecs, np.eye(4))


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 2**32 - 1))
def test_eig_hermitian_against_numpy(n, seed):
    rng = np.random.default_rng(seed)
    z = random_complex(rng, n)
    a = z + z.conj().T
    vals, vecs = eig_hermitian(a)
    assert np.allclose(vals, np.linalg.eigvalsh(a), atol=1e-9 * max(1.0, np.abs(a).max()))
    assert np.all(np.diff(vals) >= 0)
    recon = vecs @ np.diag(vals) @ vecs.conj().T
    assert np.linalg.norm(a - recon) <= 1e-8 * np.linalg.norm(a)
    assert is_unitary(vecs)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_gram_matrices_are_psd(n, k, seed):
    m = random_complex(np.random.default_rng(seed), n, k)
    vals, _ = eig_hermitian(m.conj().T @ m)
    assert vals[0] >= -1e-9


def test_eig_general_examples():
    w = np.zeros((4, 4))
    w[0, 3] = w[1, 2] = w[2, 1] = w[3, 0] = 1
    assert multiset_equal(eig_general(w), [1, 1, -1, -1], 1e-12)
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert multiset_equal(eig_general(rot), [1j, -1j], 1e-12)
    # product of the two reflections on the seven-edge triangle search space
    w7 = np.zeros((7, 7))
    for i, j, v in [(0, 5, -1), (1, 4, -1), (2, 0, -1), (3, 1, -1), (4, 3, 1), (5, 2, 1), (6, 6, 1)]:
        w7[i, j] = v
    expected = [1, 1, 1] + [(-1 + 1j * SQRT3) / 2] * 2 + [(-1 - 1j * SQRT3) / 2] * 2
    assert multiset_equal(eig_general(w7), expected, 1e-9)


@pytest.mark.parametrize(
    "matrix",
    [
        np.eye(4),
        np.zeros((3, 3)),
        np.array([[1.0, 1.0], [0.0, 1.0]]),
        np.roll(np.eye(12), 1, axis=0),
        np.roll(np.eye(5), 2, axis=1),
    ],
)
def test_eig_general_degenerate_cases(matrix):
    assert multiset_equal(eig_general(matrix), np.linalg.eigvals(matrix), 1e-7)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_eig_general_residuals(n, seed):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, n)
    ms = eig_general(a, vectors=True)
    assert len(ms) == n
    norm = np.linalg.norm(a, 2)
    for k, lam in enumerate(ms.values):
        v = ms.vectors[:, k]
        assert np.linalg.norm(a @ v - lam * v) <= 1e-7 * norm
    assert multiset_equal(ms, np.linalg.eigvals(a), 1e-7)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_unitary_eigenvalues_on_circle(n, seed):
    vals = eig_general(random_unitary(np.random.default_rng(seed), n)).values
    assert np.all(np.abs(np.abs(vals) - 1.0) <= 1e-7)


def test_multiset_equal_examples():
    assert multiset_equal([1, -1], [-1, 1], 1e-12)
    assert multiset_equal([1], [1 + 2e-8], 1e-7)
    report = multiset_equal([1j, -1j], [1j, 1j], 1e-7)
    assert not report and report.max_distance == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        multiset_equal([1], [1, 2])


def test_isometry_checks():
    k = np.array([[1, 0], [1, 0], [0, 1], [0, 1]]) / np.sqrt(2)
    assert is_isometry(k)
    assert not is_isometry(np.array([[1.0], [1.0]]))
    assert is_hermitian(np.array([[1, 1j], [-1j, 2]]))
    assert not is_unitary(k)


def test_cluster_groups_repeats():
    groups = cluster([1, 1 + 1e-9, -1, 1j, 1j])
    assert sorted(k for _, k in groups) == [1, 2, 2]
    assert EigenMultiset([1, 1, 2]).clusters() == [(1 + 0j, 2), (2 + 0j, 1)]
