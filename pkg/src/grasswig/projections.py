"""Rank-n orthogonal projections on C^d: construction, validation, sampling.

A projection is stored as a dense Hermitian ``(d, d)`` complex array together
with its rank. Frames are ``(d, n)`` arrays with orthonormal columns spanning
the range of a projection.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import (
    NotHermitian,
    NotIdempotent,
    NotOrthonormal,
    ProjectionError,
    RankMismatch,
    SpectrumNotSeparated,
)

__all__ = [
    "Frame",
    "Projection",
    "complement",
    "default_tol",
    "frame_of",
    "haar_unitary",
    "project_from_frame",
    "projection_onto",
    "random_frame",
    "random_projection",
    "validate_projection",
]

# per-dimension validation tolerance; scaled by d
DEFAULT_TOL = 1e-8


def default_tol(d):
    return DEFAULT_TOL * d


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Frame:
    """Orthonormal columns spanning an n-dimensional subspace of C^d."""

    matrix: np.ndarray
    tol: float = 1e-10

    def __post_init__(self):
        m = _readonly(self.matrix)
        if m.ndim != 2 or m.shape[1] > m.shape[0] or m.shape[1] < 1:
            raise NotOrthonormal(f"frame must be (d, n) with 1 <= n <= d, got {m.shape}")
        gram_err = np.abs(m.conj().T @ m - np.eye(m.shape[1])).max()
        if gram_err > self.tol:
            raise NotOrthonormal(f"columns not orthonormal (max |F*F - I| = {gram_err:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def rank(self):
        return self.matrix.shape[1]


@dataclass(frozen=True, eq=False)
class Projection:
    """A validated rank-n orthogonal projection on C^d.

    Build instances through :func:`validate_projection`,
    :func:`project_from_frame` or :func:`random_projection`; the constructor
    itself does not re-validate.
    """

    matrix: np.ndarray
    rank: int
    tol: float = 0.0
    _complement_of: "Projection | None" = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _readonly(self.matrix))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @cached_property
    def frame(self):
        return frame_of(self)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"Projection(dim={self.dim}, rank={self.rank})"


def validate_projection(M, tol=None, rank=None, symmetrize=True):
    """Check that ``M`` is a rank-n orthogonal projection and wrap it.

    Parameters
    ----------
    M : array_like, shape (d, d)
        Candidate matrix.
    tol : float, optional
        Max-entry tolerance for the Hermitian, idempotent and trace tests.
        Defaults to ``1e-8 * d``.
    rank : int, optional
        Expected rank; a different rank raises :class:`RankMismatch`.
    symmetrize : bool
        Store the Hermitian part ``(M + M*) / 2`` (default) rather than
        ``M`` itself.

    Returns
    -------
    Projection

    Raises
    ------
    NotHermitian, NotIdempotent, RankMismatch
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ProjectionError(f"expected a square matrix, got shape {M.shape}")
    d = M.shape[0]
    if tol is None:
        tol = default_tol(d)

    herm_err = np.abs(M - M.conj().T).max()
    if herm_err > tol:
        raise NotHermitian(f"max |M - M*| = {herm_err:.3e} > {tol:.1e}")
    H = 0.5 * (M + M.conj().T)

    idem_err = np.abs(H @ H - H).max()
    if idem_err > tol:
        raise NotIdempotent(f"max |M^2 - M| = {idem_err:.3e} > {tol:.1e}")

    tr = np.trace(H)
    n = int(round(tr.real))
    if abs(tr.imag) > tol or abs(tr.real - n) > tol:
        raise RankMismatch(f"trace {tr:.6g} is not within {tol:.1e} of an integer")
    n_eig = int(np.count_nonzero(np.linalg.eigvalsh(H) >= 0.5))
    if n_eig != n:
        raise RankMismatch(f"rounded trace {n} but {n_eig} eigenvalues >= 1/2")
    if not 1 <= n < d:
        raise RankMismatch(f"rank {n} outside 1 <= n < d = {d}")
    if rank is not None and n != rank:
        raise RankMismatch(f"expected rank {rank}, got {n}")
    return Projection(H if symmetrize else M, n, tol)


def project_from_frame(F):
    """Return the projection ``F F*`` onto the span of a frame."""
    if not isinstance(F, Frame):
        F = Frame(F)
    d, n = F.matrix.shape
    if n >= d:
        raise RankMismatch(f"frame of rank {n} spans all of C^{d}")
    m = F.matrix @ F.matrix.conj().T
    return Projection(0.5 * (m + m.conj().T), n)


def projection_onto(vectors):
    """Projection onto the column span of ``vectors`` (need not be orthonormal)."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    q = scipy.linalg.orth(v)
    return project_from_frame(q)


def frame_of(P):
    """Orthonormal frame for ``im P`` from the eigenvectors with eigenvalue near 1."""
    m = np.asarray(P.matrix if isinstance(P, Projection) else P, dtype=complex)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if np.any((w > 0.25) & (w < 0.75)):
        raise SpectrumNotSeparated(f"eigenvalues not clustered at 0 and 1: {w}")
    keep = w >= 0.5
    # eigh sorts ascending; reverse so the frame is ordered by decreasing eigenvalue
    return Frame(v[:, keep][:, ::-1])


def complement(P):
    """Return ``I - P``; applying it twice gives back ``P`` itself."""
    if P._complement_of is not None:
        return P._complement_of
    d = P.dim
    return Projection(np.eye(d) - P.matrix, d - P.rank, P.tol, _complement_of=P)


def _phase_fixed_qr(Z):
    q, r = np.linalg.qr(Z)
    diag = np.diagonal(r)
    ph = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    # Z = (Q L)(L^-1 R) with L = diag(phases) leaves R with a positive diagonal
    return q * ph[None, :]


def random_frame(d, n, seed=None):
    """Haar-random ``(d, n)`` frame: QR of a complex Gaussian with phase correction."""
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))) / np.sqrt(2)
    return Frame(_phase_fixed_qr(Z))


def haar_unitary(d, seed=None):
    """Haar-distributed ``(d, d)`` unitary matrix."""
    return random_frame(d, d, seed).matrix.copy()


def random_projection(d, n, seed=None):
    """Projection with Haar-distributed n-dimensional range in C^d.

    ``seed`` may be an integer or a :class:`numpy.random.Generator`.
    """
    if not 1 <= n < d:
        raise RankMismatch(f"need 1 <= n < d, got n={n}, d={d}")
    return project_from_frame(random_frame(d, n, seed))
