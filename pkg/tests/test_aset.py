import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from grasswig.angles import AdjacencyClass, hs_distance
from grasswig.aset import (
    DimensionEstimate,
    adjacent_blocks,
    aset_dimension_probe,
    aset_membership,
    aset_parametrize,
    bloch_projector,
    bloch_vector,
    circle_param,
    circle_phase,
    distance_to_circle,
    probe_aset,
    random_pair,
)
from grasswig.errors import InsufficientSamples, NotAdjacent, NotNonOrthAdjacent
from grasswig.projections import haar_unitary, project_from_frame, random_projection, validate_projection

from helpers import span_projection

seeds = st.integers(0, 2**32 - 1)
NONORTH = AdjacencyClass.NON_ORTHOGONAL_ADJACENT
ORTH = AdjacencyClass.ORTHOGONAL_ADJACENT


def conj(U, P):
    return project_from_frame(U @ P.frame.matrix)


def rank_one(alpha, beta):
    v = np.array([np.cos(alpha), np.exp(1j * beta) * np.sin(alpha)])
    return np.outer(v, v.conj())


def reduced_members_by_root_finding(p2, q2, n_beta=24, n_alpha=400):
    """Rank-one r with det(p2 + q2 - r) = 0, located meridian by meridian with brentq."""
    found = []
    alphas = np.linspace(0, np.pi / 2, n_alpha)
    for beta in np.linspace(0, 2 * np.pi, n_beta, endpoint=False):
        f = lambda a: np.linalg.det(p2 + q2 - rank_one(a, beta)).real  # noqa: E731
        vals = np.array([f(a) for a in alphas])
        for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
            a = brentq(f, alphas[i], alphas[i + 1], xtol=1e-15)
            found.append(rank_one(a, beta))
    return found


# --- membership -----------------------------------------------------------


def test_membership_of_endpoints():
    P, Q = random_pair(5, 2, NONORTH, 0)
    assert aset_membership(P, Q, P)
    assert aset_membership(P, Q, Q)


def test_membership_orthogonal_example(e4, orth_pair_4):
    P, Q = orth_pair_4
    R = span_projection(e4[0], (e4[1] + e4[2]) / np.sqrt(2))
    # direct computation: P + Q - R = e1e1* + ww* with w = (e2 - e3)/sqrt2
    w = (e4[1] - e4[2]) / np.sqrt(2)
    S = P.matrix + Q.matrix - R.matrix
    np.testing.assert_allclose(S, np.outer(e4[0], e4[0]) + np.outer(w, w.conj()), atol=1e-15)
    np.testing.assert_allclose(S @ S, S, atol=1e-15)
    assert aset_membership(P, Q, R)


def test_random_projection_is_not_a_member():
    P, Q = random_pair(4, 2, NONORTH, 1)
    assert not aset_membership(P, Q, random_projection(4, 2, 9))


def test_membership_accepts_raw_matrix():
    P, Q = random_pair(4, 2, NONORTH, 2)
    assert aset_membership(P, Q, np.array(Q.matrix))
    assert not aset_membership(P, Q, np.eye(4))


@given(seeds)
def test_membership_equivariance(seed):
    rng = np.random.default_rng(seed)
    P, Q = random_pair(5, 2, NONORTH, rng)
    U = haar_unitary(5, rng)
    for R in [aset_parametrize(P, Q, rng.uniform(0, 2 * np.pi)), random_projection(5, 2, rng)]:
        assert aset_membership(P, Q, R) == aset_membership(conj(U, P), conj(U, Q), conj(U, R))


# --- blocks -----------------------------------------------------------------


def test_blocks_coordinate_case(e4, orth_pair_4):
    P, Q = orth_pair_4
    b = adjacent_blocks(P, Q)
    proj = lambda F: F @ F.conj().T  # noqa: E731
    np.testing.assert_allclose(proj(b.m1), np.outer(e4[0], e4[0]), atol=1e-12)
    np.testing.assert_allclose(proj(b.m2), np.diag([0, 1, 1, 0]), atol=1e-12)
    np.testing.assert_allclose(proj(b.m3), np.outer(e4[3], e4[3]), atol=1e-12)


@pytest.mark.parametrize("kind", [NONORTH, ORTH])
@pytest.mark.parametrize("d,n", [(4, 2), (6, 3), (7, 2), (3, 1)])
def test_blocks_reconstruct_pair(kind, d, n):
    rng = np.random.default_rng(d * 10 + n)
    for _ in range(5):
        P, Q = random_pair(d, n, kind, rng)
        b = adjacent_blocks(P, Q)
        frames = np.hstack([b.m1, b.m2, b.m3])
        assert frames.shape == (d, d)
        assert np.abs(frames.conj().T @ frames - np.eye(d)).max() < 1e-10
        assert np.abs(b.embed(b.p2) - P.matrix).max() < 1e-10
        assert np.abs(b.embed(b.q2) - Q.matrix).max() < 1e-10
        validate_projection(b.p2, tol=1e-10, rank=1)
        validate_projection(b.q2, tol=1e-10, rank=1)


def test_blocks_reject_non_adjacent():
    P, Q = random_pair(4, 2, AdjacencyClass.NON_ADJACENT, 0)
    with pytest.raises(NotAdjacent):
        adjacent_blocks(P, Q)


# --- circle parametrization ---------------------------------------------------


@given(seeds, st.floats(-10, 10))
def test_parametrized_points_are_members(seed, t):
    P, Q = random_pair(5, 2, NONORTH, seed)
    R = aset_parametrize(P, Q, t)
    assert aset_membership(P, Q, R, tol=1e-10)


def test_periodicity():
    P, Q = random_pair(4, 2, NONORTH, 3)
    a, b = aset_parametrize(P, Q, 0.7), aset_parametrize(P, Q, 0.7 + 2 * np.pi)
    assert np.abs(a.matrix - b.matrix).max() <= 1e-12


@given(seeds)
def test_endpoints_lie_on_circle(seed):
    P, Q = random_pair(4, 2, NONORTH, seed)
    for R in (P, Q):
        t = circle_phase(P, Q, R)
        assert np.abs(aset_parametrize(P, Q, t).matrix - R.matrix).max() < 1e-10


def test_parametrize_needs_non_orthogonal(orth_pair_4):
    with pytest.raises(NotNonOrthAdjacent):
        aset_parametrize(*orth_pair_4, 0.0)
    P, Q = random_pair(4, 2, AdjacencyClass.NON_ADJACENT, 0)
    with pytest.raises(NotNonOrthAdjacent):
        aset_parametrize(P, Q, 0.0)


def test_circle_eigenvalues():
    P, Q = random_pair(6, 3, NONORTH, 4)
    cp = circle_param(adjacent_blocks(P, Q))
    assert 0 < cp.s < 1
    w = np.linalg.eigvalsh(adjacent_blocks(P, Q).p2 + adjacent_blocks(P, Q).q2)
    np.testing.assert_allclose(w, [cp.s, 2 - cp.s], atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_closed_curve_of_64_points(seed):
    P, Q = random_pair(5, 2, NONORTH, seed)
    ts = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    Rs = [aset_parametrize(P, Q, t) for t in ts]
    assert all(aset_membership(P, Q, R, tol=1e-10) for R in Rs)
    D = np.array([[hs_distance(A, B) for B in Rs] for A in Rs])
    assert np.all(D[~np.eye(64, dtype=bool)] > 1e-9)
    gaps = np.array([D[i, (i + 1) % 64] for i in range(64)])
    assert gaps.max() <= 4 * gaps.mean()


@pytest.mark.parametrize("seed", range(8))
def test_root_finding_members_lie_on_circle(seed):
    P, Q = random_pair(4, 2, NONORTH, seed)
    b = adjacent_blocks(P, Q)
    cp = circle_param(b)
    found = reduced_members_by_root_finding(b.p2, b.q2)
    assert len(found) >= 10
    for r in found:
        assert distance_to_circle(cp, r) < 1e-6
        assert aset_membership(P, Q, b.embed(r), tol=1e-8)


def test_root_finding_sees_whole_sphere_for_orthogonal(orth_pair_4):
    b = adjacent_blocks(*orth_pair_4)
    # p2 + q2 = I, so det(I - r) = 0 for every rank-one r
    for a, beta in np.random.default_rng(0).uniform(0, 3, (20, 2)):
        assert abs(np.linalg.det(b.p2 + b.q2 - rank_one(a, beta))) < 1e-12


def test_bloch_roundtrip():
    v = np.random.default_rng(0).standard_normal((10, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    np.testing.assert_allclose(bloch_vector(bloch_projector(v)), v, atol=1e-15)


# --- dimension probe ------------------------------------------------------------


def test_probe_equal_pair():
    P = random_projection(4, 2, 0)
    assert aset_dimension_probe(P, P) is DimensionEstimate.ZERO


def test_probe_orthogonal(orth_pair_4):
    assert aset_dimension_probe(*orth_pair_4) is DimensionEstimate.TWO


def test_probe_non_orthogonal(nonorth_pair_4):
    assert aset_dimension_probe(*nonorth_pair_4) is DimensionEstimate.ONE


def test_probe_generic():
    P, Q = random_pair(4, 2, AdjacencyClass.NON_ADJACENT, 5)
    assert aset_dimension_probe(P, Q) is DimensionEstimate.AT_LEAST_2


@pytest.mark.parametrize(
    "kind,expected",
    [(NONORTH, DimensionEstimate.ONE), (ORTH, DimensionEstimate.TWO),
     (AdjacencyClass.NON_ADJACENT, DimensionEstimate.AT_LEAST_2)],
)
@pytest.mark.parametrize("d,n", [(6, 3), (7, 2)])
def test_probe_larger_spaces(kind, expected, d, n):
    rng = np.random.default_rng(17)
    for _ in range(5):
        P, Q = random_pair(d, n, kind, rng)
        assert aset_dimension_probe(P, Q, samples=400, seed=rng) is expected


def test_probe_members_on_circle():
    P, Q = random_pair(4, 2, NONORTH, 8)
    cp = circle_param(adjacent_blocks(P, Q))
    rep = probe_aset(P, Q, samples=400, seed=1)
    assert rep.n_members >= 10
    assert max(distance_to_circle(cp, bloch_projector(v)) for v in rep.members[:, 0]) < 1e-6


def test_probe_product_members_pass_full_membership():
    P, Q = random_pair(4, 2, AdjacencyClass.NON_ADJACENT, 3)
    rep = probe_aset(P, Q, samples=400)
    assert rep.rank_difference == 4 and rep.n_members >= 10


def test_probe_is_order_and_seed_stable():
    P, Q = random_pair(4, 2, NONORTH, 6)
    a, b = probe_aset(P, Q, seed=3), probe_aset(P, Q, seed=3)
    np.testing.assert_array_equal(a.members, b.members)


def test_probe_rejects_few_samples(nonorth_pair_4):
    with pytest.raises(ValueError):
        probe_aset(*nonorth_pair_4, samples=50)


def test_probe_insufficient_members(nonorth_pair_4):
    with pytest.raises(InsufficientSamples):
        probe_aset(*nonorth_pair_4, tol=1e-300)
