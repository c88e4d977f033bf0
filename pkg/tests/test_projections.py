import numpy as np
import pytest
import scipy.stats
from hypothesis import given, strategies as st

from grasswig.errors import NotHermitian, NotIdempotent, NotOrthonormal, RankMismatch, SpectrumNotSeparated
from grasswig.projections import (
    Frame,
    complement,
    frame_of,
    haar_unitary,
    project_from_frame,
    random_frame,
    random_projection,
    validate_projection,
)

dims = st.integers(2, 12).flatmap(lambda d: st.tuples(st.just(d), st.integers(1, d - 1)))
seeds = st.integers(0, 2**32 - 1)


def test_canonical_frame_gives_diagonal():
    F = np.eye(5)[:, :3]
    P = project_from_frame(F)
    assert P.rank == 3 and P.dim == 5
    np.testing.assert_array_equal(P.matrix, np.diag([1, 1, 1, 0, 0]).astype(complex))


def test_symmetric_rank_one_in_two_dims():
    P = project_from_frame(np.array([[1], [1]]) / np.sqrt(2))
    np.testing.assert_allclose(P.matrix, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)


def test_gaussian_frame_orthonormalized(rng):
    Z = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
    q, _ = np.linalg.qr(Z)
    P = project_from_frame(q)
    assert abs(np.trace(P.matrix).real - 2) < 1e-12
    validate_projection(P.matrix, tol=1e-12, rank=2)


def test_non_orthonormal_frame_rejected():
    with pytest.raises(NotOrthonormal):
        project_from_frame(np.array([[1.0], [1.0]]))


def test_identity_is_not_a_rank_n_point():
    with pytest.raises(RankMismatch):
        validate_projection(np.eye(3))


def test_zero_matrix_rejected():
    with pytest.raises(RankMismatch):
        validate_projection(np.zeros((3, 3)))


def test_validate_diag_rank_one():
    P = validate_projection(np.diag([1.0, 0, 0]))
    assert P.rank == 1 and P.dim == 3


def test_validate_rejects_non_idempotent():
    with pytest.raises(NotIdempotent):
        validate_projection(np.diag([0.9, 0.1]))


def test_validate_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        validate_projection(np.array([[1, 1], [0, 0]]))


def test_validate_eigen_count_cross_check():
    # trace 2 but three eigenvalues above 1/2; only a loose tol lets it reach the check
    with pytest.raises(RankMismatch, match="eigenvalues"):
        validate_projection(np.diag([0.6, 0.6, 0.8]), tol=0.25)


def test_validate_expected_rank():
    with pytest.raises(RankMismatch):
        validate_projection(np.diag([1.0, 0, 0]), rank=2)


def test_random_projection_deterministic():
    a = random_projection(4, 2, seed=7)
    b = random_projection(4, 2, seed=7)
    np.testing.assert_array_equal(a.matrix, b.matrix)


def test_random_projection_requires_n_below_d():
    with pytest.raises(RankMismatch):
        random_projection(3, 3, seed=0)


@given(dims, seeds)
def test_generated_projection_invariants(dn, seed):
    d, n = dn
    P = random_projection(d, n, seed).matrix
    assert np.abs(P @ P - P).max() <= 1e-10
    assert np.abs(P - P.conj().T).max() <= 1e-12
    assert abs(np.trace(P) - n) <= 1e-10


def test_haar_average_of_diagonal_entry():
    # E[tr P E11] = n / d for a Haar-random range
    rng = np.random.default_rng(2024)
    vals = [random_projection(4, 2, rng).matrix[0, 0].real for _ in range(1000)]
    assert abs(np.mean(vals) - 0.5) < 0.05


def test_haar_unitary_entry_distribution():
    # for d = 2, |U_11|^2 is uniform on [0, 1] under Haar measure
    rng = np.random.default_rng(99)
    x = [abs(haar_unitary(2, rng)[0, 0]) ** 2 for _ in range(2000)]
    assert scipy.stats.kstest(x, "uniform").pvalue > 1e-3


def test_haar_unitary_phase_distribution():
    # the phase of a Haar entry is uniform; uncorrected QR concentrates it
    rng = np.random.default_rng(5)
    ph = [np.angle(haar_unitary(3, rng)[0, 0]) for _ in range(2000)]
    assert scipy.stats.kstest((np.array(ph) + np.pi) / (2 * np.pi), "uniform").pvalue > 1e-3


def test_complement_of_diag():
    P = validate_projection(np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(complement(P).matrix, np.diag([0, 1]).astype(complex))


@given(dims, seeds)
def test_complement_involution_and_rank(dn, seed):
    d, n = dn
    P = random_projection(d, n, seed)
    C = complement(P)
    assert C.rank == d - n
    validate_projection(C.matrix, rank=d - n)
    assert complement(C) is P


@given(dims, seeds)
def test_complement_trace_identity(dn, seed):
    # tr (I-P)(I-Q) = d - 2n + tr PQ
    d, n = dn
    rng = np.random.default_rng(seed)
    P, Q = random_projection(d, n, rng), random_projection(d, n, rng)
    lhs = np.trace(complement(P).matrix @ complement(Q).matrix).real
    rhs = d - 2 * n + np.trace(P.matrix @ Q.matrix).real
    assert abs(lhs - rhs) < 1e-12


def test_complement_identity_at_d_equal_2n():
    rng = np.random.default_rng(1)
    P, Q = random_projection(4, 2, rng), random_projection(4, 2, rng)
    lhs = np.trace(complement(P).matrix @ complement(Q).matrix).real
    assert abs(lhs - np.trace(P.matrix @ Q.matrix).real) < 1e-12


def test_frame_of_coordinate_projection():
    F = frame_of(validate_projection(np.diag([1.0, 0, 0])))
    assert F.matrix.shape == (3, 1)
    assert abs(abs(F.matrix[0, 0]) - 1) < 1e-15
    np.testing.assert_allclose(F.matrix[1:, 0], 0, atol=1e-15)


@given(dims, seeds)
def test_frame_roundtrip(dn, seed):
    d, n = dn
    P = random_projection(d, n, seed)
    F = frame_of(P)
    assert np.abs(F.matrix.conj().T @ F.matrix - np.eye(n)).max() <= 1e-12
    assert np.abs(project_from_frame(F).matrix - P.matrix).max() <= 1e-10


@given(dims, seeds)
def test_frame_gauge(dn, seed):
    # frames of the same projection differ by a right unitary
    d, n = dn
    F = random_frame(d, n, seed).matrix
    G = frame_of(project_from_frame(F)).matrix
    W = F.conj().T @ G
    assert np.abs(W.conj().T @ W - np.eye(n)).max() < 1e-10
    assert np.abs(F @ W - G).max() < 1e-10


def test_frame_of_rejects_unseparated_spectrum():
    with pytest.raises(SpectrumNotSeparated):
        frame_of(np.diag([1.0, 0.5, 0.0]))


def test_projection_is_read_only():
    P = random_projection(3, 1, 0)
    with pytest.raises(ValueError):
        P.matrix[0, 0] = 2


def test_frame_rejects_wide_matrix():
    with pytest.raises(NotOrthonormal):
        Frame(np.ones((2, 3)))
