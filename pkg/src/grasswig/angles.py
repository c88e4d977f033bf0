"""Principal angles, transition probability and adjacency between projections."""

import enum

import numpy as np

from .errors import CrossCheckFailed, DimensionMismatch, GrasswigError
from .projections import Projection

__all__ = [
    "AdjacencyClass",
    "classify_adjacency",
    "hs_distance",
    "principal_angles",
    "rank_of_difference",
    "transition_probability",
    "two_projections_identity_residual",
]

ANGLE_TOL = 1e-7
IMAG_TOL = 1e-10


class AdjacencyClass(enum.Enum):
    EQUAL = "Equal"
    ORTHOGONAL_ADJACENT = "OrthogonalAdjacent"
    NON_ORTHOGONAL_ADJACENT = "NonOrthogonalAdjacent"
    NON_ADJACENT = "NonAdjacent"

    @property
    def is_adjacent(self):
        return self in (AdjacencyClass.ORTHOGONAL_ADJACENT, AdjacencyClass.NON_ORTHOGONAL_ADJACENT)


def _check_pair(P, Q):
    if P.dim != Q.dim:
        raise DimensionMismatch(f"dimensions differ: {P.dim} vs {Q.dim}")
    if P.rank != Q.rank:
        raise DimensionMismatch(f"ranks differ: {P.rank} vs {Q.rank}")


def transition_probability(P, Q):
    """Return ``tr PQ`` (real, in ``[0, n]``)."""
    _check_pair(P, Q)
    # tr(PQ) = sum_ij P_ij Q_ji; avoids forming the product
    tr = np.sum(P.matrix * Q.matrix.T)
    if abs(tr.imag) > IMAG_TOL:
        raise GrasswigError(f"tr PQ has imaginary part {tr.imag:.3e}; inputs are not Hermitian")
    return float(tr.real)


def hs_distance(A, B):
    """Hilbert-Schmidt (Frobenius) distance between two operators."""
    a = A.matrix if isinstance(A, Projection) else np.asarray(A)
    b = B.matrix if isinstance(B, Projection) else np.asarray(B)
    return float(np.linalg.norm(a - b))


def principal_angles(P, Q):
    """Principal angles between ``im P`` and ``im Q``, sorted descending.

    Cosines are the singular values of ``F_P* F_Q`` for frames of the two
    ranges, which coincide with the n largest singular values of ``PQ``.
    Angles whose cosine exceeds ``1/sqrt(2)`` are instead taken from the
    sines, i.e. the singular values of ``(I - P) F_Q``, where arccos loses
    accuracy.
    """
    _check_pair(P, Q)
    fp, fq = P.frame.matrix, Q.frame.matrix
    cos = np.clip(np.linalg.svd(fp.conj().T @ fq, compute_uv=False), 0.0, 1.0)
    sin = np.linalg.svd(fq - fp @ (fp.conj().T @ fq), compute_uv=False)
    sin = np.clip(np.sort(sin), 0.0, 1.0)
    theta = np.where(cos**2 < 0.5, np.arccos(cos), np.arcsin(sin))
    return np.sort(theta)[::-1]


def two_projections_identity_residual(P, Q):
    """``|tr PQ - sum_j cos^2 theta_j|``, a self-consistency check."""
    theta = principal_angles(P, Q)
    return abs(transition_probability(P, Q) - float(np.sum(np.cos(theta) ** 2)))


def rank_of_difference(P, Q, tol=ANGLE_TOL):
    """Number of eigenvalues of ``P - Q`` exceeding ``tol`` in absolute value."""
    return int(np.count_nonzero(np.abs(np.linalg.eigvalsh(P.matrix - Q.matrix)) > tol))


def classify_adjacency(P, Q, tol=ANGLE_TOL):
    """Classify the pair by counting non-zero principal angles.

    Exactly one non-zero angle means adjacent; it is orthogonal adjacency
    when that angle is within ``tol`` of pi/2. For adjacent pairs the
    verdict is cross-checked against ``rank(P - Q) == 2``.
    """
    theta = principal_angles(P, Q)
    nonzero = int(np.count_nonzero(theta > tol))
    if nonzero == 0:
        return AdjacencyClass.EQUAL
    if nonzero > 1:
        return AdjacencyClass.NON_ADJACENT
    r = rank_of_difference(P, Q, tol)
    if r != 2:
        raise CrossCheckFailed(f"one non-zero angle ({theta[0]:.3e}) but rank(P - Q) = {r}")
    if theta[0] >= np.pi / 2 - tol:
        return AdjacencyClass.ORTHOGONAL_ADJACENT
    return AdjacencyClass.NON_ORTHOGONAL_ADJACENT
