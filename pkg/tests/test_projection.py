"""Tests for coarse-grid correction projections and their measurements."""

import json

import numpy as np
import pytest

import compatamg as cm
from compatamg.linalg import SingularMatrixError, m_orthonormal_basis
from conftest import random_pair_case, random_spd, random_stable

A2 = np.array([[1.0, 0.0], [-1.0, 1.0]])
P2 = cm.CFPartition(2, (0,), (1,))
PI_OBLIQUE = np.array([[0.0, 1.0], [0.0, 1.0]])  # rank-1 oblique projection


def _split(n):
    return cm.default_splitting(n, "alternate")


def test_build_pi_smallest_example():
    pair = cm.make_pair(P2, np.array([[1.0]]), np.array([[0.0]]))
    pi, K = cm.build_pi(A2, pair)
    np.testing.assert_allclose(pi, [[0.0, 0.0], [0.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(K, [[1.0]], atol=1e-15)


def test_build_pi_idempotent_and_rank():
    rng = np.random.default_rng(0)
    for _ in range(20):
        A, _, pair = random_pair_case(rng)
        pi, _ = cm.build_pi(A, pair)
        scale = np.linalg.norm(pi)
        assert np.linalg.norm(pi @ pi - pi) <= 1e-10 * scale
        assert abs(np.trace(pi) - pair.nc) <= 1e-10 * max(1, scale)


def test_build_pi_galerkin_spd():
    # symmetric pair on an SPD matrix gives a correction symmetric in A
    A = cm.generate(cm.ProblemSpec("laplacian1d", n=12))
    part = _split(12)
    W = cm.ideal_w(cm.partition(A, part))
    pair = cm.TransferPair(
        part.assemble_rows(W, np.eye(part.nc)),
        part.assemble_rows(W, np.eye(part.nc)),
        part,
    )
    pi, _ = cm.build_pi(A, pair)
    AP = A @ pi
    assert np.linalg.norm(AP - AP.T) <= 1e-12 * np.linalg.norm(AP)
    assert abs(cm.pi_m_norm(pi, A) - 1.0) <= 1e-10


def test_build_pi_singular_coarse_operator():
    part = cm.CFPartition(4, (0, 1), (2, 3))
    pair = cm.make_pair(part, np.eye(2), -np.eye(2))  # R*P = 0 with A = I
    with pytest.raises(SingularMatrixError, match="incompatible"):
        cm.build_pi(np.eye(4), pair)


def test_pi_m_norm_examples():
    assert cm.pi_m_norm(np.diag([0.0, 1.0]), np.eye(2)) == pytest.approx(1.0)
    assert cm.pi_m_norm(PI_OBLIQUE, np.eye(2)) == pytest.approx(np.sqrt(2.0))


def test_norm_equals_complement_norm():
    rng = np.random.default_rng(2)
    for _ in range(20):
        A, M, pair = random_pair_case(rng)
        pi, _ = cm.build_pi(A, pair)
        a = cm.pi_m_norm(pi, M)
        b = cm.operator_m_norm(np.eye(pi.shape[0]) - pi, M)
        assert abs(a - b) <= 1e-10 * max(1.0, a)


def test_nonorth_measure_examples():
    pair = cm.make_pair(P2, np.array([[1.0]]), np.array([[0.0]]))
    pi, _ = cm.build_pi(A2, pair)
    assert cm.nonorth_measure(pi, np.eye(2)) <= 1e-10
    assert cm.nonorth_measure(PI_OBLIQUE, np.eye(2)) == pytest.approx(1.0, abs=1e-12)


def test_nonorth_measure_consistency():
    # the amplification over the M-complement satisfies norm^2 = 1 + sup^2
    rng = np.random.default_rng(4)
    for _ in range(50):
        A, M, pair = random_pair_case(rng)
        pi, _ = cm.build_pi(A, pair)
        nrm = cm.pi_m_norm(pi, M)
        sup = cm.nonorth_measure(pi, M)
        assert abs(np.sqrt(nrm**2 - 1.0) - sup) <= 1e-8 * max(1.0, sup)


def test_min_canonical_angle_examples():
    pair = cm.make_pair(P2, np.array([[1.0]]), np.array([[0.0]]))
    pi, _ = cm.build_pi(A2, pair)
    assert cm.min_canonical_angle(pi, np.eye(2)) == pytest.approx(np.pi / 2)
    assert cm.min_canonical_angle(PI_OBLIQUE, np.eye(2)) == pytest.approx(np.pi / 4)


def test_angle_norm_identities():
    rng = np.random.default_rng(6)
    for _ in range(30):
        A, M, pair = random_pair_case(rng)
        pi, _ = cm.build_pi(A, pair)
        nrm = cm.pi_m_norm(pi, M)
        th = cm.min_canonical_angle(pi, M)
        assert abs(nrm * np.sin(th) - 1.0) <= 1e-8
        assert abs(nrm**2 - (1.0 + 1.0 / np.tan(th) ** 2)) <= 1e-7 * max(1, nrm**2)


def test_orthogonality_checks_examples():
    all_true = cm.orthogonality_checks(np.diag([0.0, 1.0]), np.eye(2))
    assert all_true.all_true and all_true.agree
    all_false = cm.orthogonality_checks(PI_OBLIQUE, np.eye(2))
    assert not any(all_false.as_dict().values())
    assert all_false.agree


@pytest.mark.parametrize("m2", [0.5, 1.0, 2.0, 4.0])
def test_orthogonality_checks_diag_family(m2):
    # a projection is M-orthogonal exactly when its complement amplification
    # vanishes; this oblique projection never is, for any diagonal SPD M
    M = np.diag([1.0, m2])
    checks = cm.orthogonality_checks(PI_OBLIQUE, M)
    assert checks.agree
    assert checks.all_true == (cm.nonorth_measure(PI_OBLIQUE, M) <= 1e-8)
    assert not checks.all_true


def test_checks_agree_on_random_and_catalog():
    rng = np.random.default_rng(8)
    for _ in range(25):
        A, M, pair = random_pair_case(rng)
        pi, _ = cm.build_pi(A, pair)
        assert cm.orthogonality_checks(pi, M).agree
    A = random_stable(np.random.default_rng(9), 12)
    part = _split(12)
    for entry in cm.catalog_pairs(A, part):
        if entry.skipped:
            continue
        M = cm.realize_norm(entry.norm, A)
        pi, _ = cm.build_pi(A, entry.pair)
        checks = cm.orthogonality_checks(pi, M)
        assert checks.agree and checks.all_true


def test_verify_compat_equation_examples():
    A = cm.generate(cm.ProblemSpec("advection1d", n=16))
    part = _split(16)
    pair, tag = cm.single_operator_pair(A, part, 1)
    assert cm.verify_compat_equation(A, cm.realize_norm(tag, A), pair)

    rng = np.random.default_rng(10)
    Ar = random_stable(rng, 12)
    pr = _split(12)
    zero = cm.make_pair(pr, np.zeros((pr.nf, pr.nc)), np.zeros((pr.nf, pr.nc)))
    assert not cm.verify_compat_equation(Ar, np.eye(12), zero)


def test_uniqueness_block_diagonal_family():
    # restriction ideal on A with zero interpolation block stays orthogonal in
    # every norm whose matrix is block diagonal over the splitting
    rng = np.random.default_rng(12)
    A = random_stable(rng, 20)
    part = _split(20)
    pair = cm.make_pair(
        part, cm.ideal_z(cm.partition(A, part)), np.zeros((part.nf, part.nc))
    )
    pi, _ = cm.build_pi(A, pair)
    for _ in range(5):
        Mff = random_spd(rng, part.nf)
        Mcc = random_spd(rng, part.nc)
        Mf = np.zeros((20, 20))
        Mf[: part.nf, : part.nf] = Mff
        Mf[part.nf :, part.nf :] = Mcc
        M = part.from_ffirst(Mf)
        assert cm.verify_compat_equation(A, M, pair)
        assert cm.orthogonality_checks(pi, M).all_true


def test_adjoint_norm_invariant():
    rng = np.random.default_rng(14)
    for _ in range(15):
        A, M, pair = random_pair_case(rng)
        pi, _ = cm.build_pi(A, pair)
        a = cm.pi_m_norm(pi, M)
        b = cm.pi_m_norm(cm.m_adjoint(pi, M), M)
        assert abs(a - b) <= 1e-10 * max(1.0, a)


def test_m_orthonormal_representation():
    # with M-orthonormal bases V for the range and U for the range of the
    # M-adjoint, the projection is V (U*MV)^{-1} U*M and its M-norm is
    # the spectral norm of (U*MV)^{-1}
    rng = np.random.default_rng(16)
    for _ in range(10):
        A, M, pair = random_pair_case(rng)
        pi, _ = cm.build_pi(A, pair)
        V = m_orthonormal_basis(pi, M)
        U = m_orthonormal_basis(cm.m_adjoint(pi, M), M)
        Kc = U.T @ M @ V
        nrm = cm.pi_m_norm(pi, M)
        assert abs(np.linalg.norm(np.linalg.inv(Kc), 2) - nrm) <= 1e-8 * max(1, nrm)
        rebuilt = V @ np.linalg.solve(Kc, U.T @ M)
        assert np.linalg.norm(rebuilt - pi) <= 1e-8 * max(1, np.linalg.norm(pi))


def test_projection_report_serialization():
    rng = np.random.default_rng(18)
    A, M, pair = random_pair_case(rng)
    report = cm.projection_report(A, pair, M, norm_tag="Custom", provenance="random pair")
    d = report.as_dict()
    assert set(d) == {
        "norm",
        "provenance",
        "pi_norm",
        "nonorth_sup",
        "min_angle",
        "is_m_orthogonal",
        "symmetry_residual",
    }
    loaded = json.loads(report.to_json())
    assert loaded["norm"] == "Custom"
    assert loaded["pi_norm"] == pytest.approx(report.m_norm)
    assert report.m_norm >= 1.0 - 1e-12
    assert not report.is_m_orthogonal

    Ao = cm.generate(cm.ProblemSpec("advection1d", n=10))
    po = _split(10)
    pair_o, tag = cm.single_operator_pair(Ao, po, 1)
    rep_o = cm.projection_report(
        Ao, pair_o, cm.realize_norm(tag, Ao), norm_tag=tag, provenance="single1"
    )
    assert rep_o.is_m_orthogonal
    assert rep_o.symmetry_residual <= 1e-10
