"""The sets A_{P,Q} = {R : R and P + Q - R are both rank-n projections}.

For adjacent P, Q everything reduces to the 2x2 block on the plane M2 that
P and Q do not share. There the set is a circle of rank-one projections for
non-orthogonal adjacency and the whole Bloch sphere for orthogonal
adjacency. This module builds that reduction, parametrizes the circle, and
probes the dimension of the set numerically without using the classifier.
"""

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.spatial import cKDTree
from scipy.spatial.transform import Rotation

from .angles import ANGLE_TOL, AdjacencyClass, classify_adjacency, rank_of_difference
from .errors import InsufficientSamples, NotAdjacent, NotNonOrthAdjacent, ProjectionError
from .projections import (
    Projection,
    haar_unitary,
    project_from_frame,
    random_projection,
    validate_projection,
)

__all__ = [
    "AdjacentBlocks",
    "CircleParam",
    "DimensionEstimate",
    "ProbeReport",
    "adjacent_blocks",
    "aset_dimension_probe",
    "aset_membership",
    "aset_parametrize",
    "bloch_projector",
    "bloch_vector",
    "circle_param",
    "circle_phase",
    "distance_to_circle",
    "probe_aset",
    "random_pair",
]

PROBE_MEMBER_TOL = 1e-6
MIN_MEMBERS = 10


class DimensionEstimate(enum.Enum):
    ZERO = 0
    ONE = 1
    TWO = 2
    AT_LEAST_2 = "AtLeast2"


def aset_membership(P, Q, R, tol=None):
    """True iff ``R`` and ``P + Q - R`` are rank-n projections at ``tol``."""
    n = P.rank
    try:
        if not isinstance(R, Projection):
            R = validate_projection(R, tol, rank=n)
        elif R.rank != n:
            return False
        validate_projection(P.matrix + Q.matrix - R.matrix, tol, rank=n)
    except ProjectionError:
        return False
    return True


@dataclass(frozen=True, eq=False)
class AdjacentBlocks:
    """Orthogonal splitting C^d = M1 + M2 + M3 for an adjacent pair.

    ``m1`` (d, n-1) spans im P & im Q, ``m2`` (d, 2) completes it to
    im P + im Q, ``m3`` spans the rest. ``p2``/``q2`` are the rank-one 2x2
    compressions of P and Q to M2.
    """

    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    p2: np.ndarray
    q2: np.ndarray

    def embed(self, r2):
        """``Pi_M1 + M2 r2 M2*`` as a d x d matrix."""
        return self.m1 @ self.m1.conj().T + self.m2 @ r2 @ self.m2.conj().T


def _unit(v):
    return v / np.linalg.norm(v)


def adjacent_blocks(P, Q):
    """Split the space for an adjacent pair (``rank(P - Q) == 2``)."""
    r = rank_of_difference(P, Q)
    if r != 2:
        raise NotAdjacent(f"rank(P - Q) = {r}, adjacency needs 2")
    fp, fq = P.frame.matrix, Q.frame.matrix
    # compressions of the overlap operator to im P and im Q; eigenvalue 1 on M1
    _, vp = np.linalg.eigh(fp.conj().T @ Q.matrix @ fp)
    _, vq = np.linalg.eigh(fq.conj().T @ P.matrix @ fq)
    m1 = fp @ vp[:, 1:]
    u = _unit(fp @ vp[:, 0])
    w = fq @ vq[:, 0]
    w = _unit(w - u * (u.conj() @ w))
    m2 = np.column_stack([u, w])
    m3 = scipy.linalg.null_space(np.hstack([m1, m2]).conj().T)
    p2 = m2.conj().T @ P.matrix @ m2
    q2 = m2.conj().T @ Q.matrix @ m2
    return AdjacentBlocks(m1, m2, m3, 0.5 * (p2 + p2.conj().T), 0.5 * (q2 + q2.conj().T))


@dataclass(frozen=True, eq=False)
class CircleParam:
    """Eigen-data of ``p2 + q2 = W diag(s, 2 - s) W*`` with ``0 < s < 1``."""

    s: float
    basis_change: np.ndarray

    def block(self, t):
        """Rank-one 2x2 member of the reduced A-set at phase ``t``."""
        s = self.s
        off = 0.5 * np.sqrt(s * (2 - s)) * np.exp(1j * t)
        r = np.array([[s / 2, off], [np.conj(off), (2 - s) / 2]])
        W = self.basis_change
        return W @ r @ W.conj().T

    def phase_of(self, r2):
        """Phase ``t`` whose block is closest to ``r2``."""
        W = self.basis_change
        return float(np.angle((W.conj().T @ r2 @ W)[0, 1]))


def circle_param(blocks):
    w, W = np.linalg.eigh(blocks.p2 + blocks.q2)
    s = float(w[0])
    if not 0 < s < 1 - ANGLE_TOL:
        raise NotNonOrthAdjacent(f"smallest eigenvalue of p2 + q2 is {s:.3e}, need 0 < s < 1")
    return CircleParam(s, W)


def _nonorth_setup(P, Q):
    cls = classify_adjacency(P, Q)
    if cls is not AdjacencyClass.NON_ORTHOGONAL_ADJACENT:
        raise NotNonOrthAdjacent(f"pair is {cls.value}")
    blocks = adjacent_blocks(P, Q)
    return blocks, circle_param(blocks)


def aset_parametrize(P, Q, t):
    """Member of A_{P,Q} at circle phase ``t`` (non-orthogonally adjacent pairs).

    In the eigenbasis of ``p2 + q2`` the 2x2 block has diagonal
    ``(s/2, (2-s)/2)`` and off-diagonal ``sqrt(s(2-s))/2 * exp(it)``.
    """
    blocks, cp = _nonorth_setup(P, Q)
    m = blocks.embed(cp.block(t))
    return Projection(0.5 * (m + m.conj().T), P.rank)


def circle_phase(P, Q, R):
    """Phase ``t`` with ``aset_parametrize(P, Q, t)`` closest to ``R``."""
    blocks, cp = _nonorth_setup(P, Q)
    r2 = blocks.m2.conj().T @ np.asarray(R.matrix if isinstance(R, Projection) else R) @ blocks.m2
    return cp.phase_of(r2)


def distance_to_circle(cp, r2):
    """Hilbert-Schmidt distance from a 2x2 block to the parametrized circle."""
    return float(np.linalg.norm(r2 - cp.block(cp.phase_of(r2))))


# --- Bloch sphere helpers -------------------------------------------------


def bloch_vector(r2):
    """Bloch vector(s) of 2x2 Hermitian trace-one matrices, shape (..., 3)."""
    r2 = np.asarray(r2)
    return np.stack(
        [2 * r2[..., 0, 1].real, -2 * r2[..., 0, 1].imag, (r2[..., 0, 0] - r2[..., 1, 1]).real],
        axis=-1,
    )


def bloch_projector(v):
    """``(I + v . sigma) / 2`` for Bloch vector(s) ``v`` of shape (..., 3)."""
    v = np.asarray(v, dtype=float)
    x, y, z = v[..., 0], v[..., 1], v[..., 2]
    out = np.empty(v.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = (1 + z) / 2
    out[..., 1, 1] = (1 - z) / 2
    out[..., 0, 1] = (x - 1j * y) / 2
    out[..., 1, 0] = (x + 1j * y) / 2
    return out


def _projection_defect(X, rank):
    """Batched max-entry defect of X being a Hermitian idempotent of given rank."""
    Xh = np.swapaxes(X.conj(), -1, -2)
    herm = np.abs(X - Xh).max(axis=(-2, -1))
    idem = np.abs(X @ X - X).max(axis=(-2, -1))
    tr = np.abs(np.trace(X, axis1=-2, axis2=-1) - rank)
    return np.maximum(np.maximum(herm, idem), tr)


# --- dimension probe ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProbeReport:
    estimate: DimensionEstimate
    n_members: int
    rank_difference: int
    # Bloch vectors of members, shape (N, B, 3) with B reduced blocks
    members: np.ndarray


def _bloch_grid(samples, rng):
    m = int(np.ceil(np.sqrt(samples)))
    theta = np.pi * (np.arange(m) + 0.5) / m
    phi = 2 * np.pi * np.arange(m) / m
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    pts = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    pts = pts.reshape(-1, 3)
    # seeded rigid rotation of the chart so no solution set aligns with the grid poles
    return Rotation.random(random_state=rng).apply(pts)


def _refine(points, p2, q2, iters=60, max_step=0.5):
    """Newton steps on the sphere towards ``det(p2 + q2 - r) = 0``.

    With tr(p2 + q2 - r) = 1 fixed, the defect of ``X = p2 + q2 - r`` being a
    projection is ``(|b(X)|^2 - 1) / 4`` where ``b`` is the Bloch vector, so
    the refinement solves ``|c - n|^2 = 1`` for unit ``n`` with ``c`` the
    Bloch vector sum of p2 and q2.
    """
    c = bloch_vector(p2) + bloch_vector(q2)
    n = points.copy()
    for _ in range(iters):
        diff = n - c
        g = np.einsum("ij,ij->i", diff, diff) - 1.0
        grad = 2 * diff
        tang = grad - np.einsum("ij,ij->i", grad, n)[:, None] * n
        tn2 = np.einsum("ij,ij->i", tang, tang)
        step = np.where(tn2 > 1e-14, g / np.where(tn2 > 1e-14, tn2, 1.0), 0.0)[:, None] * tang
        norm = np.linalg.norm(step, axis=1)
        step *= np.minimum(1.0, max_step / np.maximum(norm, 1e-300))[:, None]
        n = n - step
        n /= np.linalg.norm(n, axis=1)[:, None]
    return n


def _block_members(p2, q2, samples, rng, tol):
    grid = _bloch_grid(samples, rng)
    pts = _refine(grid, p2, q2)
    X = (p2 + q2)[None, :, :] - bloch_projector(pts)
    ok = _projection_defect(X, 1) <= tol
    pts = pts[ok]
    _, keep = np.unique(np.round(pts, 9), axis=0, return_index=True)
    return pts[np.sort(keep)]


def _local_dimension(members, rel=0.1, n_anchors=64):
    """Mode over anchors of the local PCA dimension in the tangent space.

    ``members`` has shape (N, B, 3): N points on a product of B Bloch
    spheres. Neighbourhoods are the k nearest members; offsets are projected
    onto the tangent space at the anchor before the SVD.
    """
    N, B, _ = members.shape
    if N < 2:
        return 0
    spread = np.sqrt(((members - members.mean(axis=0)) ** 2).sum(axis=-1).mean(axis=0))
    if np.all(spread < 1e-9):
        return 0
    scale = np.where(spread > 1e-12, 1.0 / np.maximum(spread, 1e-12), 1.0)
    flat = (members * scale[None, :, None]).reshape(N, -1)
    k = min(N - 1, max(10, N // 100))
    tree = cKDTree(flat)
    anchors = np.unique(np.linspace(0, N - 1, min(N, n_anchors)).astype(int))
    dims = []
    for a in anchors:
        _, idx = tree.query(flat[a], k=k + 1)
        off = members[idx] - members[a]
        normal = members[a]
        off = off - np.einsum("kbj,bj->kb", off, normal)[..., None] * normal[None]
        off = (off * scale[None, :, None]).reshape(len(idx), -1)
        off = off - off.mean(axis=0)
        sv = np.linalg.svd(off, compute_uv=False)
        if sv[0] < 1e-9:
            dims.append(0)
        else:
            dims.append(int(np.count_nonzero(sv > rel * sv[0])))
    return int(np.bincount(dims).argmax())


def _principal_blocks(P, Q):
    """Orthonormal 2-planes spanned by principal vector pairs, largest angle first."""
    fp, fq = P.frame.matrix, Q.frame.matrix
    U, S, Wh = np.linalg.svd(fp.conj().T @ fq)
    u_all = fp @ U
    w_all = fq @ Wh.conj().T
    out = []
    for j in np.argsort(S):
        u, w = u_all[:, j], w_all[:, j]
        w_perp = w - u * (u.conj() @ w)
        if np.linalg.norm(w_perp) < ANGLE_TOL:
            continue
        B = np.column_stack([u, _unit(w_perp)])
        out.append((u, B))
    return out


def probe_aset(P, Q, samples=1024, seed=0, tol=PROBE_MEMBER_TOL):
    """Numerically estimate the dimension of A_{P,Q}.

    The probe only looks at ``rank(P - Q)``:

    * 0: the set is ``{P}``, dimension 0;
    * 2: reduce to the 2x2 block, refine a seeded Bloch-sphere grid of about
      ``samples`` points onto the membership condition, keep points passing
      membership at ``tol``, and estimate the local dimension of that cloud;
    * larger: build the product sub-family over the two principal-vector
      planes with the largest angles; a dimension of at least two there is
      reported as ``AT_LEAST_2``.
    """
    if samples < 100:
        raise ValueError("samples must be >= 100")
    rng = np.random.default_rng(seed)
    r = rank_of_difference(P, Q)
    if r == 0:
        members = bloch_vector(np.array([[1.0, 0.0], [0.0, 0.0]]))[None, None, :]
        return ProbeReport(DimensionEstimate.ZERO, 1, 0, members)

    if r == 2:
        blocks = adjacent_blocks(P, Q)
        members = _block_members(blocks.p2, blocks.q2, samples, rng, tol)
        if len(members) < MIN_MEMBERS:
            raise InsufficientSamples(f"only {len(members)} members found")
        members = members[:, None, :]
        dim = _local_dimension(members)
        return ProbeReport(DimensionEstimate(dim), len(members), r, members)

    planes = _principal_blocks(P, Q)[:2]
    per_block = []
    for u, B in planes:
        p2 = B.conj().T @ np.outer(u, u.conj()) @ B
        qb = B.conj().T @ Q.matrix @ B
        mem = _block_members(p2, 0.5 * (qb + qb.conj().T), samples, rng, tol)
        if len(mem) < MIN_MEMBERS:
            raise InsufficientSamples(f"only {len(mem)} members found in a principal block")
        if len(mem) > 40:
            mem = mem[np.sort(rng.choice(len(mem), 40, replace=False))]
        per_block.append(mem)
    (ua, Ba), (ub, Bb) = planes
    ia, ib = np.meshgrid(np.arange(len(per_block[0])), np.arange(len(per_block[1])), indexing="ij")
    va, vb = per_block[0][ia.ravel()], per_block[1][ib.ravel()]
    base = P.matrix - np.outer(ua, ua.conj()) - np.outer(ub, ub.conj())
    R = (
        base[None]
        + Ba[None] @ bloch_projector(va) @ Ba.conj().T[None]
        + Bb[None] @ bloch_projector(vb) @ Bb.conj().T[None]
    )
    n = P.rank
    ok = (_projection_defect(R, n) <= tol) & (
        _projection_defect((P.matrix + Q.matrix)[None] - R, n) <= tol
    )
    members = np.stack([va, vb], axis=1)[ok]
    if len(members) < MIN_MEMBERS:
        raise InsufficientSamples(f"only {len(members)} product members passed membership")
    dim = _local_dimension(members)
    est = DimensionEstimate.AT_LEAST_2 if dim >= 2 else DimensionEstimate(dim)
    return ProbeReport(est, len(members), r, members)


def aset_dimension_probe(P, Q, samples=1024, seed=0):
    return probe_aset(P, Q, samples, seed).estimate


def random_pair(d, n, kind, seed=None):
    """Random pair of rank-n projections of a requested adjacency class.

    ``kind`` is an :class:`AdjacencyClass` (or its value string). Adjacent
    pairs share a Haar-random (n-1)-plane; the remaining angle of a
    non-orthogonal pair has ``cos^2`` uniform on ``[0.001, 0.999]``.
    ``NON_ADJACENT`` returns two independent Haar projections.
    """
    kind = AdjacencyClass(kind)
    rng = np.random.default_rng(seed)
    if kind is AdjacencyClass.NON_ADJACENT:
        return random_projection(d, n, rng), random_projection(d, n, rng)
    if kind is AdjacencyClass.EQUAL:
        P = random_projection(d, n, rng)
        return P, P
    if d < n + 1:
        raise ValueError("adjacent pairs need d >= n + 1")
    U = haar_unitary(d, rng)
    shared, ea, eb = U[:, : n - 1], U[:, n - 1], U[:, n]
    if kind is AdjacencyClass.ORTHOGONAL_ADJACENT:
        other = eb
    else:
        c = np.sqrt(rng.uniform(0.001, 0.999))
        other = c * ea + np.sqrt(1 - c**2) * np.exp(2j * np.pi * rng.uniform()) * eb
    P = project_from_frame(np.column_stack([shared, ea]))
    Q = project_from_frame(np.column_stack([shared, other]))
    return P, Q
