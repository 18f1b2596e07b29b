"""Ladder algebra: shift action, eigenstates, K/J saturation, q-deformation.

Matrix elements on truncated windows and dense-matrix brute force serve
as the oracles for the closed forms.
"""

import cmath
import math

import numpy as np
import pytest

from circleqm.circlespace import CircleState, Sector, apply_operator, basis_state, inner
from circleqm.ladder import (
    LadderContext,
    apply_B,
    apply_Bdag,
    apply_complexifier,
    apply_number_op,
    eigen_residual,
    kj_matrix_elements,
    kj_report,
    pair_stats,
    qdeform_residual,
)
from circleqm.zakcs import PhasePoint, WZParams, w_state

RNG = np.random.default_rng(77)


def random_state(sector, n_lo=-3, width=6, rng=RNG):
    c = rng.normal(size=width) + 1j * rng.normal(size=width)
    return CircleState(sector, n_lo, c).normalized()


class TestShiftAction:
    def test_lowering_on_basis(self):
        ctx = LadderContext(1.0, Sector(0.0))
        out = apply_B(ctx, basis_state(0, Sector(0.0)))
        assert out.n_lo == -1
        assert out.coeffs[0] == pytest.approx(math.exp(-0.5), rel=1e-14)

    def test_raising_on_basis(self):
        ctx = LadderContext(0.7, Sector(0.4))
        out = apply_Bdag(ctx, basis_state(2, Sector(0.4)))
        assert out.n_lo == 3
        assert out.coeffs[0] == pytest.approx(
            math.exp(0.7 * (2 + 0.4 + 0.5)), rel=1e-14)

    def test_adjointness(self):
        ctx = LadderContext(0.9, Sector(0.25))
        rng = np.random.default_rng(1)
        psi = random_state(Sector(0.25), rng=rng)
        chi = random_state(Sector(0.25), n_lo=-1, width=5, rng=rng)
        lhs = inner(apply_Bdag(ctx, psi), chi)
        rhs = inner(psi, apply_B(ctx, chi))
        assert abs(lhs - rhs) < 1e-12

    def test_commutator_with_momentum(self):
        # [L, B] = -B on random states
        ctx = LadderContext(1.0, Sector(0.3))
        psi = random_state(Sector(0.3))
        lb = apply_operator("L", apply_B(ctx, psi))
        bl = apply_B(ctx, apply_operator("L", psi))
        resid = lb.coeffs - bl.coeffs + apply_B(ctx, psi).coeffs
        assert np.max(np.abs(resid)) < 1e-13

    def test_bdag_b_diagonal(self):
        ctx = LadderContext(0.8, Sector(0.4))
        for n in (-2, 0, 3):
            out = apply_Bdag(ctx, apply_B(ctx, basis_state(n, Sector(0.4))))
            assert out.n_lo == n
            assert out.coeffs[0] == pytest.approx(
                math.exp(0.8 * (2 * (n + 0.4) - 1)), rel=1e-13)

    def test_commutation_with_bdag(self):
        # [B, Bdag] = 2 sinh(eps) e^{2 eps L}
        ctx = LadderContext(0.6, Sector(0.15))
        psi = random_state(Sector(0.15))
        b_bd = apply_B(ctx, apply_Bdag(ctx, psi))
        bd_b = apply_Bdag(ctx, apply_B(ctx, psi))
        eig = np.exp(2 * 0.6 * (psi.indices + 0.15))
        ref = 2 * math.sinh(0.6) * eig * psi.coeffs
        assert np.max(np.abs(b_bd.coeffs - bd_b.coeffs - ref)) < 1e-12

    def test_weyl_type_exchange(self):
        # Bdag B = e^{-2 eps} B Bdag as operators
        ctx = LadderContext(0.5, Sector(0.7))
        psi = random_state(Sector(0.7))
        lhs = apply_Bdag(ctx, apply_B(ctx, psi)).coeffs
        rhs = math.exp(-1.0) * apply_B(ctx, apply_Bdag(ctx, psi)).coeffs
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_complexifier_conjugation_is_lowering(self):
        # C U C^{-1} e_n = e^{eps(n + delta - 1/2)} e_{n-1} = B e_n, with
        # U realized as the n -> n-1 shift
        ctx = LadderContext(1.2, Sector(0.6))
        for n in (-1, 0, 2):
            e_n = basis_state(n, Sector(0.6))
            shifted = CircleState(
                Sector(0.6), n - 1,
                apply_complexifier(ctx, e_n, inverse=True).coeffs)
            via_complexifier = apply_complexifier(ctx, shifted)
            direct = apply_B(ctx, e_n)
            assert via_complexifier.n_lo == direct.n_lo
            assert np.max(np.abs(via_complexifier.coeffs
                                 - direct.coeffs)) < 1e-12 * np.max(
                np.abs(direct.coeffs))

    def test_sector_mismatch_rejected(self):
        ctx = LadderContext(1.0, Sector(0.1))
        with pytest.raises(ValueError):
            apply_B(ctx, basis_state(0, Sector(0.2)))


class TestEigenRelation:
    @pytest.mark.parametrize("eps,delta,z", [
        (1.0, 0.0, 0j), (0.5, 0.4, 2.0 + 3.0j), (1.0, 0.4, 1.0 - 0.5j),
        (0.5, 0.0, 0.3 + 1.0j)])
    def test_eigen_residual_small(self, eps, delta, z):
        ctx = LadderContext(eps, Sector(delta))
        assert eigen_residual(ctx, PhasePoint.from_z(z)) < 1e-10

    def test_coefficient_recursion(self):
        eps, delta = 0.8, 0.3
        params = WZParams(eps, Sector(delta))
        z = PhasePoint(0.7, 0.2)
        st = w_state(params, z, window_tol=1e-13)
        eta = cmath.exp(-1j * z.z)
        for i in range(st.coeffs.size - 1):
            n = st.n_lo + i
            ratio = st.coeffs[i + 1] / st.coeffs[i]
            ref = eta * math.exp(-eps * (n + delta + 0.5))
            assert abs(ratio - ref) < 1e-13 * abs(ref)


class TestKJReport:
    def test_imaginary_axis_means(self):
        ctx = LadderContext(1.0, Sector(0.0))
        rep = kj_report(ctx, PhasePoint(0.0, 0.7))
        assert rep.mean_j == pytest.approx(0.0, abs=1e-14)
        assert rep.mean_k == pytest.approx(2 * math.exp(0.7), rel=1e-14)

    GRID = [(eps, z) for eps in (0.5, 1.0) for z in (0j, 1.0 + 0.5j, 2.0j)]

    @pytest.mark.parametrize("eps,z", GRID)
    def test_exact_saturation(self, eps, z):
        ctx = LadderContext(eps, Sector(0.0))
        rep = kj_report(ctx, PhasePoint.from_z(z))
        assert rep.saturated
        lhs = rep.var_k * rep.var_j
        rhs = rep.covariance ** 2 + 0.25 * abs(rep.commutator_mean) ** 2
        assert abs(lhs - rhs) < 1e-12 * max(lhs, 1e-30)

    @pytest.mark.parametrize("eps,z", GRID)
    def test_closed_forms_vs_matrix_elements(self, eps, z):
        for delta in (0.0, 0.4):
            ctx = LadderContext(eps, Sector(delta))
            rep = kj_report(ctx, PhasePoint.from_z(z))
            mat = kj_matrix_elements(ctx, PhasePoint.from_z(z))
            scale = max(abs(rep.var_k), 1.0)
            assert abs(rep.mean_k - mat.mean_k) < 1e-8 * scale
            assert abs(rep.mean_j - mat.mean_j) < 1e-8 * scale
            assert abs(rep.var_k - mat.var_k) < 1e-8 * scale
            assert abs(rep.var_j - mat.var_j) < 1e-8 * scale
            assert abs(rep.covariance - mat.covariance) < 1e-8 * scale
            assert abs(rep.commutator_mean - mat.commutator_mean) < 1e-8 * scale

    @pytest.mark.parametrize("theta_ang,l", [(0.0, 0.0), (1.2, 0.5),
                                             (4.0, -0.8), (3.14, 1.0)])
    def test_parameter_recovery(self, theta_ang, l):
        ctx = LadderContext(1.0, Sector(0.2))
        rep = kj_report(ctx, PhasePoint(theta_ang, l))
        assert rep.theta_recovered == pytest.approx(
            theta_ang % (2 * math.pi), abs=1e-10)
        assert rep.l_recovered == pytest.approx(l, abs=1e-10)

    def test_pair_stats_vs_dense_matrices(self):
        # brute-force oracle: build B as a dense matrix on a window and
        # compute every statistic with plain linear algebra
        eps, delta = 0.9, 0.3
        ctx = LadderContext(eps, Sector(delta))
        n_lo, n_hi = -6, 6
        dim = n_hi - n_lo + 1
        b_mat = np.zeros((dim, dim), dtype=complex)
        for j, n in enumerate(range(n_lo, n_hi + 1)):
            if j > 0:
                b_mat[j - 1, j] = math.exp(eps * (n + delta - 0.5))
        k_mat = b_mat + b_mat.conj().T
        j_mat = 1j * (b_mat.conj().T - b_mat)
        rng = np.random.default_rng(6)
        c = np.zeros(dim, dtype=complex)
        c[3:-3] = rng.normal(size=dim - 6) + 1j * rng.normal(size=dim - 6)
        c /= np.linalg.norm(c)
        state = CircleState(Sector(delta), n_lo, c)
        rep = pair_stats(ctx, state)

        def expval(m):
            return np.vdot(c, m @ c)

        mean_k = expval(k_mat).real
        mean_j = expval(j_mat).real
        assert rep.mean_k == pytest.approx(mean_k, abs=1e-12)
        assert rep.mean_j == pytest.approx(mean_j, abs=1e-12)
        assert rep.var_k == pytest.approx(
            expval(k_mat @ k_mat).real - mean_k ** 2, abs=1e-10)
        assert rep.var_j == pytest.approx(
            expval(j_mat @ j_mat).real - mean_j ** 2, abs=1e-10)
        sym = 0.5 * (k_mat @ j_mat + j_mat @ k_mat)
        assert rep.covariance == pytest.approx(
            expval(sym).real - mean_k * mean_j, abs=1e-10)
        comm = k_mat @ j_mat - j_mat @ k_mat
        assert rep.commutator_mean == pytest.approx(expval(comm), abs=1e-10)


class TestQDeform:
    def test_residual_vanishes(self):
        for eps, delta, n in [(1.0, 0.0, 0), (0.5, 0.3, 2), (2.0, 0.7, -3)]:
            ctx = LadderContext(eps, Sector(delta))
            assert qdeform_residual(ctx, n) < 1e-12 * math.exp(
                2 * eps * abs(n + delta + ctx.shift_constant))

    def test_shift_constant_value(self):
        ctx = LadderContext(1.0, Sector(0.0))
        assert ctx.shift_constant == pytest.approx(0.427, abs=5e-4)
        assert ctx.shift_constant == pytest.approx(
            0.5 * math.log(2 * math.sinh(1.0)), rel=1e-15)

    def test_deformation_parameter(self):
        ctx = LadderContext(0.8, Sector(0.0))
        assert ctx.q_def == pytest.approx(math.exp(-1.6))
        assert 0 < ctx.q_def < 1

    def test_number_expectation_tunable_to_integer(self):
        # at eps = 1 the shift is 0.427...; delta = 1 - shift makes the
        # ground-level number expectation an exact integer
        ctx0 = LadderContext(1.0, Sector(0.0))
        delta = 1.0 - ctx0.shift_constant
        ctx = LadderContext(1.0, Sector(delta))
        e0 = basis_state(0, Sector(delta))
        out = apply_number_op(ctx, e0)
        mean_n = inner(e0, out).real
        assert mean_n == pytest.approx(1.0, abs=1e-12)

    def test_number_op_eigenvalues(self):
        ctx = LadderContext(1.0, Sector(0.573))
        out = apply_number_op(ctx, basis_state(2, Sector(0.573)))
        assert out.coeffs[0].real == pytest.approx(
            2 + 0.573 + ctx.shift_constant, rel=1e-13)
