"""Classify a transition-probability-preserving map and recover its operator.

Pipeline of :func:`classify_map`: check preservation, extend to Phi, decide
whether Phi sends rank-one projections to rank-one projections (plain form)
or to ``I/n`` minus one (complement form, only when ``d = 2n``), read off
the unitary or antiunitary ``V`` from the rank-one action, and verify
``phi(P) = V P V*`` (or ``I - V P V*``) on fresh projections.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    LinearityAmbiguous,
    NotPreserving,
    NotWigner,
    OracleLookupError,
    PhaseFixFailed,
    ProjectionError,
    VerificationFailed,
)
from .extend import (
    PRESERVE_TOL,
    ExtendedMap,
    TabulatedOracle,
    check_transition_preserving,
    evaluate_oracle,
    extend_map,
    hermitian_coords,
)
from .projections import Projection, complement, projection_onto, random_projection, validate_projection

__all__ = [
    "DualOracle",
    "Form",
    "Linearity",
    "WignerClassification",
    "classify_map",
    "detect_form",
    "dualize_oracle",
    "extend_table",
    "induced_action",
    "probe_family",
    "rank_one_image",
    "reconstruct_isometry",
]

FORM_TOL = 1e-6
VERIFY_TOL = 1e-6
UNITARY_TOL = 1e-8


class Form(enum.Enum):
    PLAIN = "plain"
    COMPLEMENT = "complement"


class Linearity(enum.Enum):
    LINEAR = "linear"
    ANTILINEAR = "antilinear"


def induced_action(V, linearity, form, P):
    """Image of ``P`` under the map induced by ``V``.

    Antilinear operators act as ``P -> V conj(P) V*`` with ``conj`` the
    entrywise conjugate in the standard basis.
    """
    m = np.asarray(P.matrix if isinstance(P, Projection) else P)
    if Linearity(linearity) is Linearity.ANTILINEAR:
        m = m.conj()
    out = V @ m @ V.conj().T
    if Form(form) is Form.COMPLEMENT:
        out = np.eye(V.shape[0]) - out
    return out


@dataclass(frozen=True, eq=False)
class WignerClassification:
    form: Form
    linearity: Linearity
    V: np.ndarray
    residual: float
    verified_pairs: int

    def __call__(self, P):
        return induced_action(self.V, self.linearity, self.form, P)


def rank_one_image(Phi, p):
    """Phi applied to a rank-one projection; Hermitian, not necessarily a projection."""
    return Phi.apply(p)


def detect_form(Phi, d, n, trials=20, seed=0, tol=FORM_TOL):
    """Plain if Phi keeps random rank-one projections rank-one projections.

    Complement if instead ``I/n - Phi(p)`` is a rank-one projection, which can
    only happen for ``d = 2n``. Otherwise :class:`NotWigner`.
    """
    rng = np.random.default_rng(seed)
    images = [Phi.apply(random_projection(d, 1, rng)) for _ in range(trials)]

    def all_rank_one(mats):
        try:
            for m in mats:
                validate_projection(m, tol, rank=1)
        except ProjectionError:
            return False
        return True

    if all_rank_one(images):
        return Form.PLAIN
    if d == 2 * n and all_rank_one(np.eye(d) / n - m for m in images):
        return Form.COMPLEMENT
    raise NotWigner("Phi maps rank-one projections neither to rank-one projections nor to their I/n complements")


def probe_family(d):
    """The 2d rank-one projections read by :func:`reconstruct_isometry`.

    ``e_j e_j*`` for every j, the projections onto ``e_1 + e_j`` for j >= 2,
    and the projection onto ``e_1 + i e_2``.
    """
    eye = np.eye(d)
    fam = [projection_onto(eye[:, j]) for j in range(d)]
    fam += [projection_onto(eye[:, 0] + eye[:, j]) for j in range(1, d)]
    fam.append(projection_onto(eye[:, 0] + 1j * eye[:, 1]))
    return fam


def _top_vector(m):
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return v[:, -1]


def reconstruct_isometry(psi, d, tol=FORM_TOL):
    """Recover ``V`` and its linearity from a rank-one map ``psi``.

    ``psi`` takes a rank-one :class:`Projection` and returns a matrix close
    to the rank-one projection it is sent to. Columns ``f_j`` of ``V`` span
    the images of ``e_j e_j*``; their phases are fixed against ``f_1`` using
    the images of the projections onto ``e_1 + e_j``, and the image of
    ``e_1 + i e_2`` decides between linear and antilinear.

    Returns ``(V, Linearity)``; ``V`` is normalised so that the first
    non-negligible entry of its first column is real positive.
    """
    fam = probe_family(d)
    diag, sums, lin_probe = fam[:d], fam[d : 2 * d - 1], fam[-1]
    cols = [_top_vector(psi(diag[0]))]
    f1 = cols[0]
    for j in range(1, d):
        g = _top_vector(psi(diag[j]))
        X = psi(sums[j - 1])
        overlap = 2 * (f1.conj() @ X @ g)
        if abs(overlap) < 1e-6:
            raise PhaseFixFailed(f"phase overlap {abs(overlap):.2e} for column {j}")
        cols.append(np.conj(overlap / abs(overlap)) * g)
    V = np.column_stack(cols)

    Y = psi(lin_probe)
    d_lin = np.linalg.norm(Y - projection_onto(V[:, 0] + 1j * V[:, 1]).matrix)
    d_anti = np.linalg.norm(Y - projection_onto(V[:, 0] - 1j * V[:, 1]).matrix)
    if min(d_lin, d_anti) > tol:
        raise LinearityAmbiguous(f"distances to linear/antilinear candidates: {d_lin:.2e}, {d_anti:.2e}")
    linearity = Linearity.LINEAR if d_lin <= d_anti else Linearity.ANTILINEAR

    k = int(np.argmax(np.abs(V[:, 0]) > 1e-8))
    V = V * (abs(V[k, 0]) / V[k, 0])
    return V, linearity


def extend_table(table, d, n):
    """Phi from a table whose inputs need not contain the spanning basis.

    Least-squares fit of the linear map over every tabulated pair; the
    inputs must span the Hermitian space.
    """
    X = np.stack([hermitian_coords(P) for P in table.inputs])
    Y = np.stack([hermitian_coords(P) for P in table.outputs])
    if np.linalg.matrix_rank(X) < d * d:
        raise NotWigner(f"table inputs span less than the {d * d}-dimensional Hermitian space")
    sol, *_ = np.linalg.lstsq(X, Y, rcond=None)
    return ExtendedMap(sol.T, d, n)


def _extend(oracle, d, n):
    try:
        return extend_map(oracle, d, n)
    except OracleLookupError:
        if isinstance(oracle, TabulatedOracle):
            return extend_table(oracle, d, n)
        raise


def _verification_inputs(oracle, d, n, count, rng):
    if isinstance(oracle, TabulatedOracle):
        pool = oracle.inputs_with_role("probe", "random", "sample") or oracle.inputs
        return pool
    return [random_projection(d, n, rng) for _ in range(count)]


def classify_map(
    oracle,
    d,
    n,
    seed=0,
    trials=100,
    verify=50,
    tol_preserve=PRESERVE_TOL,
    tol_verify=VERIFY_TOL,
):
    """Decide the Wigner form of ``oracle`` and reconstruct its operator.

    Raises
    ------
    NotPreserving
        Sampling found a pair with ``|tr phi(P)phi(Q) - tr PQ| > tol_preserve``.
    NotWigner
        Phi fits neither the plain nor the complement pattern.
    VerificationFailed
        The reconstructed map misses ``phi`` by more than ``tol_verify``
        (Hilbert-Schmidt) on the verification sample.
    """
    if not d > n >= 2:
        raise ValueError(f"need d > n >= 2, got d={d}, n={n}")
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    s_check, s_form, s_verify = seed.spawn(3)

    report = check_transition_preserving(oracle, d, n, trials, s_check, tol_preserve)
    if not report.preserving:
        raise NotPreserving(
            f"tr PQ not preserved (max residual {report.max_residual:.3e})",
            report.max_residual,
            report.violating_pair,
        )

    Phi = _extend(oracle, d, n)
    form = detect_form(Phi, d, n, seed=s_form)
    if form is Form.PLAIN:
        psi = Phi.apply
    else:
        psi = lambda p: np.eye(d) / n - Phi.apply(p)  # noqa: E731
    V, linearity = reconstruct_isometry(psi, d)

    unit_err = np.abs(V.conj().T @ V - np.eye(d)).max()
    if unit_err > UNITARY_TOL:
        raise VerificationFailed(f"reconstructed V is not unitary (max |V*V - I| = {unit_err:.2e})")

    rng = np.random.default_rng(s_verify)
    inputs = _verification_inputs(oracle, d, n, verify, rng)
    residual = 0.0
    for P in inputs:
        out = evaluate_oracle(oracle, P)
        residual = max(residual, float(np.linalg.norm(out.matrix - induced_action(V, linearity, form, P))))
    if residual > tol_verify:
        raise VerificationFailed(f"verification residual {residual:.3e} exceeds {tol_verify:.1e}")
    return WignerClassification(form, linearity, V, residual, len(inputs))


class DualOracle:
    """``P -> I - phi(I - P)``, acting on projections of the complementary rank."""

    def __init__(self, base, d):
        self.base = base
        self.d = d

    def __call__(self, P):
        out = self.base(complement(P))
        if isinstance(out, Projection):
            return complement(out)
        return np.eye(self.d) - np.asarray(out)


def dualize_oracle(oracle, d):
    """Dual map on rank ``d - m`` projections of a map on rank-m projections.

    Dualizing twice returns the original oracle (for tables: the very same
    projection objects).
    """
    if isinstance(oracle, DualOracle):
        return oracle.base
    if isinstance(oracle, TabulatedOracle):
        outputs = [evaluate_oracle(oracle, P) for P in oracle.inputs]
        return TabulatedOracle(
            [complement(P) for P in oracle.inputs],
            [complement(P) for P in outputs],
            oracle.roles,
            oracle.lookup_tol,
        )
    return DualOracle(oracle, d)
