"""Real-linear extension of a projection map to all Hermitian matrices.

A map phi on rank-n projections that preserves ``tr PQ`` extends uniquely to
a real-linear, injective Phi on Hermitian matrices with
``tr Phi(A) Phi(B) = tr AB``. Phi is built here by evaluating phi on d^2
rank-n projections that span the Hermitian space and solving for the
linear map in a fixed orthonormal coordinate system.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import (
    BasisSelectionFailed,
    DimensionTooSmall,
    OracleInvalidOutput,
    OracleLookupError,
    ProjectionError,
)
from .projections import Projection, random_projection, validate_projection

__all__ = [
    "ExtendedMap",
    "HermitianBasisElement",
    "PreservationReport",
    "RankOneDecomposition",
    "TabulatedOracle",
    "check_trace_form",
    "check_transition_preserving",
    "evaluate_oracle",
    "extend_map",
    "from_hermitian_coords",
    "hermitian_basis",
    "hermitian_coords",
    "projection_spanning_basis",
    "random_hermitian",
    "rank_one_decomposition",
]

LOOKUP_TOL = 1e-9
PRESERVE_TOL = 1e-8


# --- Hermitian coordinates ------------------------------------------------


@dataclass(frozen=True, eq=False)
class HermitianBasisElement:
    matrix: np.ndarray
    # ("diag", j), ("re", j, k) or ("im", j, k)
    kind: tuple


def _offdiag_pairs(d):
    return [(j, k) for j in range(d) for k in range(j + 1, d)]


def hermitian_basis(d):
    """Orthonormal (for the trace form) real basis of d x d Hermitian matrices.

    Ordered ``E_jj``, then ``(E_jk + E_kj)/sqrt 2``, then
    ``i (E_jk - E_kj)/sqrt 2`` for ``j < k``.
    """
    out = []
    for j in range(d):
        m = np.zeros((d, d), complex)
        m[j, j] = 1
        out.append(HermitianBasisElement(m, ("diag", j)))
    for j, k in _offdiag_pairs(d):
        m = np.zeros((d, d), complex)
        m[j, k] = m[k, j] = 1 / np.sqrt(2)
        out.append(HermitianBasisElement(m, ("re", j, k)))
    for j, k in _offdiag_pairs(d):
        m = np.zeros((d, d), complex)
        m[j, k] = 1j / np.sqrt(2)
        m[k, j] = -1j / np.sqrt(2)
        out.append(HermitianBasisElement(m, ("im", j, k)))
    return out


def hermitian_coords(A):
    """Coordinates of Hermitian ``A`` (shape (..., d, d)) in :func:`hermitian_basis`."""
    A = np.asarray(A.matrix if isinstance(A, Projection) else A)
    d = A.shape[-1]
    j, k = np.triu_indices(d, 1)
    diag = np.diagonal(A, axis1=-2, axis2=-1).real
    upper = A[..., j, k]
    return np.concatenate([diag, np.sqrt(2) * upper.real, np.sqrt(2) * upper.imag], axis=-1)


def from_hermitian_coords(x, d):
    x = np.asarray(x, dtype=float)
    j, k = np.triu_indices(d, 1)
    m = len(j)
    A = np.zeros(x.shape[:-1] + (d, d), complex)
    idx = np.arange(d)
    A[..., idx, idx] = x[..., :d]
    upper = (x[..., d : d + m] + 1j * x[..., d + m :]) / np.sqrt(2)
    A[..., j, k] = upper
    A[..., k, j] = upper.conj()
    return A


def random_hermitian(d, rng):
    """Hermitian matrix with Gaussian coordinates, scaled to unit HS norm."""
    x = rng.standard_normal(d * d)
    return from_hermitian_coords(x / np.linalg.norm(x), d)


# --- rank-one projections as combinations of rank-n ones -------------------


@dataclass(frozen=True, eq=False)
class RankOneDecomposition:
    coefficients: np.ndarray
    projections: list

    def combine(self):
        return sum(t * P.matrix for t, P in zip(self.coefficients, self.projections))


def _complete_orthonormal(e1, count):
    """``count`` orthonormal vectors orthogonal to unit ``e1``.

    Pivoted QR of ``I - e1 e1*`` prefers standard basis directions, so
    ``e1 = e_1`` completes with ``e_2, e_3, ...`` up to signs.
    """
    d = e1.shape[0]
    comp = np.eye(d) - np.outer(e1, e1.conj())
    q, _, _ = scipy.linalg.qr(comp, pivoting=True)
    return q[:, :count]


def rank_one_decomposition(p, n):
    """Write a rank-one projection as ``sum_j t_j P_j`` over n+1 rank-n projections.

    With ``e_1`` spanning ``im p`` completed to orthonormal ``e_1..e_{n+1}``
    and ``Pi`` the projection onto their span, ``P_j = Pi - e_j e_j*`` and
    ``t = (1/n - 1, 1/n, ..., 1/n)``. The coefficients sum to ``1/n``.
    """
    if p.rank != 1:
        raise ProjectionError(f"expected a rank-one projection, got rank {p.rank}")
    d = p.dim
    if d < n + 1:
        raise DimensionTooSmall(f"need d >= n + 1, got d={d}, n={n}")
    e1 = p.frame.matrix[:, 0]
    E = np.column_stack([e1, _complete_orthonormal(e1, n)])
    Pi = E @ E.conj().T
    projs = []
    for j in range(n + 1):
        m = Pi - np.outer(E[:, j], E[:, j].conj())
        projs.append(Projection(0.5 * (m + m.conj().T), n))
    coeffs = np.full(n + 1, 1.0 / n)
    coeffs[0] = 1.0 / n - 1.0
    return RankOneDecomposition(coeffs, projs)


def _rank_one_parts(A):
    """Spectral decomposition of Hermitian ``A`` into weighted rank-one projections."""
    w, v = np.linalg.eigh(A)
    parts = []
    for lam, vec in zip(w, v.T):
        if abs(lam) > 1e-12:
            m = np.outer(vec, vec.conj())
            parts.append(Projection(0.5 * (m + m.conj().T), 1))
    return parts


@lru_cache(maxsize=None)
def _spanning_basis(d, n, rank_tol):
    target = d * d
    chosen, coords = [], []
    q_basis = np.zeros((target, 0))
    for elem in hermitian_basis(d):
        for p in _rank_one_parts(elem.matrix):
            for P in rank_one_decomposition(p, n).projections:
                x = hermitian_coords(P)
                resid = x - q_basis @ (q_basis.T @ x)
                # second pass keeps the Gram-Schmidt residual accurate
                resid = resid - q_basis @ (q_basis.T @ resid)
                r = np.linalg.norm(resid)
                if r > rank_tol * np.linalg.norm(x):
                    chosen.append(P)
                    coords.append(x)
                    q_basis = np.column_stack([q_basis, resid / r])
                    if len(chosen) == target:
                        X = np.column_stack(coords)
                        return tuple(chosen), np.linalg.inv(X)
    raise BasisSelectionFailed(f"collected {len(chosen)} of {target} independent projections")


def projection_spanning_basis(d, n, rank_tol=1e-3):
    """d^2 rank-n projections spanning the Hermitian d x d matrices.

    Candidates come from splitting each element of :func:`hermitian_basis`
    into rank-one projections and each of those via
    :func:`rank_one_decomposition`; they are swept in order and kept when
    they raise the rank of the collection.

    Returns
    -------
    projections : tuple of Projection
    change : ndarray, shape (d^2, d^2)
        ``change @ hermitian_coords(A)`` gives the coefficients of ``A`` in
        the selected projections.
    """
    if not 1 <= n < d:
        raise ValueError(f"need 1 <= n < d, got n={n}, d={d}")
    projs, change = _spanning_basis(d, n, rank_tol)
    return list(projs), change.copy()


# --- oracles ----------------------------------------------------------------


class TabulatedOracle:
    """A projection map known on finitely many inputs.

    Lookups match an input within Hilbert-Schmidt distance ``lookup_tol``;
    anything else raises :class:`OracleLookupError`.
    """

    def __init__(self, inputs, outputs, roles=None, lookup_tol=LOOKUP_TOL):
        if len(inputs) != len(outputs):
            raise ValueError("inputs and outputs differ in length")
        self.inputs = list(inputs)
        self.outputs = list(outputs)
        self.roles = list(roles) if roles is not None else ["sample"] * len(self.inputs)
        self.lookup_tol = lookup_tol
        self._stack = np.stack([P.matrix for P in self.inputs]) if self.inputs else None

    def __len__(self):
        return len(self.inputs)

    def __call__(self, P):
        if self._stack is None:
            raise OracleLookupError("empty table")
        dist = np.linalg.norm(self._stack - P.matrix[None], axis=(1, 2))
        i = int(np.argmin(dist))
        if dist[i] > self.lookup_tol:
            raise OracleLookupError(f"no tabulated input within {self.lookup_tol:.0e} (nearest {dist[i]:.3e})")
        return self.outputs[i]

    def inputs_with_role(self, *roles):
        return [P for P, r in zip(self.inputs, self.roles) if r in roles]

    @property
    def dim(self):
        return self.inputs[0].dim

    @property
    def rank(self):
        return self.inputs[0].rank


def evaluate_oracle(oracle, P, tol=None):
    """Apply ``oracle`` to ``P`` and validate the result as a rank-n projection."""
    out = oracle(P)
    try:
        if isinstance(out, Projection):
            if out.rank != P.rank or out.dim != P.dim:
                raise ProjectionError(f"image has dim {out.dim}, rank {out.rank}")
            return out
        return validate_projection(out, tol, rank=P.rank)
    except ProjectionError as exc:
        raise OracleInvalidOutput(f"oracle output is not a rank-{P.rank} projection: {exc}") from exc


# --- the extension ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtendedMap:
    """Phi as a real (d^2, d^2) matrix acting on Hermitian coordinates."""

    matrix: np.ndarray
    d: int
    n: int

    def apply(self, A):
        """Phi(A) for a Hermitian matrix or Projection."""
        return from_hermitian_coords(self.matrix @ hermitian_coords(A), self.d)

    def smallest_singular_value(self):
        return float(np.linalg.svd(self.matrix, compute_uv=False)[-1])


def extend_map(oracle, d, n):
    """Real-linear extension of ``oracle`` determined by the spanning basis."""
    basis, change = projection_spanning_basis(d, n)
    images = np.column_stack([hermitian_coords(evaluate_oracle(oracle, P)) for P in basis])
    # Phi(A) = sum_k c_k(A) phi(B_k) with c = change @ coords(A)
    return ExtendedMap(images @ change, d, n)


def check_trace_form(Phi, trials=200, seed=0):
    """Max over random unit Hermitian pairs of ``|tr Phi(A)Phi(B) - tr AB|``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        a = hermitian_coords(random_hermitian(Phi.d, rng))
        b = hermitian_coords(random_hermitian(Phi.d, rng))
        # coordinates are orthonormal for the trace form
        worst = max(worst, abs((Phi.matrix @ a) @ (Phi.matrix @ b) - a @ b))
    return float(worst)


@dataclass(frozen=True, eq=False)
class PreservationReport:
    max_residual: float
    violating_pair: tuple | None
    pairs_checked: int

    @property
    def preserving(self):
        return self.violating_pair is None


def _sample_inputs(oracle, d, n, count, rng):
    if isinstance(oracle, TabulatedOracle):
        pool = oracle.inputs
        return [pool[i] for i in rng.integers(0, len(pool), count)]
    return [random_projection(d, n, rng) for _ in range(count)]


def check_transition_preserving(oracle, d, n, trials=100, seed=0, tol=PRESERVE_TOL):
    """Worst ``|tr phi(P)phi(Q) - tr PQ|`` over ``trials`` random pairs.

    Pairs are random Haar projections for callables and random pairs of
    table inputs for a :class:`TabulatedOracle`. ``violating_pair`` is the
    worst pair when its residual exceeds ``tol``.
    """
    rng = np.random.default_rng(seed)
    left = _sample_inputs(oracle, d, n, trials, rng)
    right = _sample_inputs(oracle, d, n, trials, rng)
    cache = {}

    def image(P):
        key = id(P)
        if key not in cache:
            cache[key] = evaluate_oracle(oracle, P)
        return cache[key]

    worst, witness = 0.0, None
    for P, Q in zip(left, right):
        fp, fq = image(P), image(Q)
        res = abs(np.sum(fp.matrix * fq.matrix.T).real - np.sum(P.matrix * Q.matrix.T).real)
        if res > worst:
            worst, witness = res, (P, Q)
    return PreservationReport(float(worst), witness if worst > tol else None, trials)

