"""Special-function kernel checks against independent oracles.

Theta values are cross-checked between the direct and modular-transformed
series, Bessel functions against scipy and the classical sum identities,
and the elliptic record against the theta-ratio identity web.
"""

import cmath
import math

import numpy as np
import pytest
from scipy import integrate, special

from circleqm.specfun import (
    ThetaNome,
    bessel_i,
    bessel_j,
    elliptic_suite,
    g_ratio,
    theta,
    theta_derivs,
)


class TestThetaNome:
    def test_from_q_roundtrip(self):
        nome = ThetaNome.from_q(0.3 + 0.1j)
        assert abs(cmath.exp(1j * math.pi * nome.tau) - nome.q) < 1e-15

    def test_from_tau(self):
        nome = ThetaNome.from_tau(2j)
        assert abs(nome.q - math.exp(-2 * math.pi)) < 1e-15

    @pytest.mark.parametrize("q", [1.0, -1.0, 1.2, 0.5 + 0.9j])
    def test_rejects_unit_disk_boundary(self, q):
        with pytest.raises(ValueError):
            ThetaNome.from_q(q)

    def test_rejects_inconsistent_pair(self):
        with pytest.raises(ValueError):
            ThetaNome(0.5, 2j)


class TestTheta:
    def test_zero_nome_leading_term(self):
        assert theta(3, 0.0, ThetaNome.from_q(0.0)) == 1.0

    def test_period_pi(self):
        nome = ThetaNome.from_q(0.17)
        for z in [0.0, 0.4, 1.3 + 0.2j, -2.0 + 1j]:
            assert abs(theta(3, z + math.pi, nome) - theta(3, z, nome)) < 1e-13

    def test_direct_vs_transform_tau_2i(self):
        nome = ThetaNome.from_tau(2j)
        a = theta(3, 0.3, nome, method="direct")
        b = theta(3, 0.3, nome, method="transform")
        assert abs(a - b) < 1e-12 * abs(a)

    def test_theta4_small_nome_leading_terms(self):
        q = math.exp(-math.pi ** 2)
        assert abs(q - 5.2e-5) < 3e-7  # the nome driving the fast series
        val = theta(4, 0.0, ThetaNome.from_q(q))
        assert abs(val - (1.0 - 2.0 * q)) < 1e-12

    @pytest.mark.parametrize("kind", [2, 3, 4])
    def test_even_in_zeta(self, kind):
        nome = ThetaNome.from_q(0.22)
        for z in [0.7, 0.3 + 0.4j]:
            assert abs(theta(kind, z, nome) - theta(kind, -z, nome)) < 1e-14

    def test_modular_identity_grid(self):
        # theta3(z|tau) = (-i tau)^(-1/2) exp(z^2/(i pi tau)) theta3(z/tau|-1/tau)
        for im_tau in [0.5, 1.0, 2.0, 5.0]:
            tau = 1j * im_tau
            nome = ThetaNome.from_tau(tau)
            nome2 = ThetaNome.from_tau(-1.0 / tau)
            for re_z in np.linspace(-math.pi, math.pi, 5):
                for im_z in np.linspace(-2.0, 2.0, 5):
                    z = complex(re_z, im_z)
                    lhs = theta(3, z, nome, method="direct")
                    rhs = ((-1j * tau) ** -0.5
                           * cmath.exp(z * z / (1j * math.pi * tau))
                           * theta(3, z / tau, nome2, method="direct"))
                    assert abs(lhs - rhs) < 1e-12 * abs(lhs)

    def test_theta2_to_theta4_transform_grid(self):
        # theta2(z|tau) = (-i tau)^(-1/2) exp(z^2/(i pi tau)) theta4(z/tau|-1/tau)
        for im_tau in [0.6, 1.0, 3.0]:
            tau = 1j * im_tau
            nome = ThetaNome.from_tau(tau)
            nome2 = ThetaNome.from_tau(-1.0 / tau)
            for z in [0.0, 0.4, 1.0 + 0.5j, -0.9 + 1.2j]:
                lhs = theta(2, z, nome, method="direct")
                rhs = ((-1j * tau) ** -0.5
                       * cmath.exp(z * z / (1j * math.pi * tau))
                       * theta(4, z / tau, nome2, method="direct"))
                assert abs(lhs - rhs) < 1e-12 * max(abs(lhs), 1e-3)

    def test_real_positive_on_axes_for_real_nome(self):
        nome = ThetaNome.from_q(0.4)
        for t in np.linspace(-3, 3, 13):
            v_real = theta(3, t, nome)
            v_imag = theta(3, 1j * t, nome)
            assert abs(v_real.imag) < 1e-13 * abs(v_real)
            assert v_real.real > 0
            assert abs(v_imag.imag) < 1e-12 * abs(v_imag)
            assert v_imag.real > 0

    def test_complex_nome(self):
        # against mpmath-free oracle: direct brute-force partial sum
        q = 0.3 * cmath.exp(0.7j)
        nome = ThetaNome.from_q(q)
        z = 0.4 + 0.2j
        brute = 1 + sum(q ** (n * n) * (cmath.exp(2j * n * z) + cmath.exp(-2j * n * z))
                        for n in range(1, 60))
        assert abs(theta(3, z, nome) - brute) < 1e-13 * abs(brute)

    def test_array_input(self):
        nome = ThetaNome.from_q(0.2)
        zs = np.linspace(0, 3, 7)
        vals = theta(3, zs, nome)
        assert vals.shape == zs.shape
        for z, v in zip(zs, vals):
            assert abs(v - theta(3, z, nome)) < 1e-14 * abs(v)

    def test_rejects_bad_inputs(self):
        nome = ThetaNome.from_q(0.2)
        with pytest.raises(ValueError):
            theta(1, 0.0, nome)
        with pytest.raises(ValueError):
            theta(3, math.nan, nome)
        with pytest.raises(ValueError):
            theta(3, 0.0, 1.5)


class TestThetaDerivs:
    def test_theta3_even_first_deriv_zero(self):
        for q in [0.05, 0.3, 0.6]:
            _, d1, _ = theta_derivs(3, 0.0, ThetaNome.from_q(q))
            assert abs(d1) < 1e-14

    def test_first_deriv_vs_finite_difference(self):
        nome = ThetaNome.from_q(math.exp(-1.0))
        z, h = 0.7, 1e-5
        _, d1, _ = theta_derivs(3, z, nome)
        fd = (theta(3, z + h, nome) - theta(3, z - h, nome)) / (2 * h)
        assert abs(d1 - fd) < 1e-8 * abs(d1)

    def test_second_deriv_vs_finite_difference(self):
        nome = ThetaNome.from_q(math.exp(-1.0))
        z, h = 0.7, 1e-4
        v, _, d2 = theta_derivs(4, z, nome)
        fd = (theta(4, z + h, nome) - 2 * v + theta(4, z - h, nome)) / h ** 2
        assert abs(d2 - fd) < 1e-6 * max(abs(d2), 1.0)

    def test_theta4_second_deriv_leading_term(self):
        q = math.exp(-math.pi ** 2)
        _, _, d2 = theta_derivs(4, 0.0, ThetaNome.from_q(q))
        assert abs(d2 - 8.0 * q) < 1e-12

    def test_transform_route_derivs(self):
        nome = ThetaNome.from_q(0.5)
        z = 0.3 + 0.1j
        va, d1a, d2a = theta_derivs(3, z, nome, method="direct")
        vb, d1b, d2b = theta_derivs(3, z, nome, method="transform")
        assert abs(va - vb) < 1e-12 * abs(va)
        assert abs(d1a - d1b) < 1e-11 * max(abs(d1a), 1.0)
        assert abs(d2a - d2b) < 1e-10 * max(abs(d2a), 1.0)


class TestBesselI:
    def test_at_origin(self):
        assert bessel_i(0, 0.0) == 1.0
        assert bessel_i(2, 0.0) == 0.0

    def test_table_ratio_x2(self):
        assert abs(bessel_i(1, 2.0) / bessel_i(0, 2.0) - 0.6977) < 1e-4

    def test_negative_argument_parity(self):
        assert bessel_i(1, -3.0) == -bessel_i(1, 3.0)
        assert bessel_i(0, -3.0) == bessel_i(0, 3.0)

    def test_fractional_negative_argument_principal_branch(self):
        val = bessel_i(0.5, -2.0)
        ref = cmath.exp(1j * math.pi * 0.5) * bessel_i(0.5, 2.0)
        assert abs(val - ref) < 1e-14 * abs(ref)
        assert abs(val.imag) > 0  # complex result flags the branch choice

    @pytest.mark.parametrize("nu", [0.0, 1.0, 0.5, 2.7, -0.3, 5.0])
    @pytest.mark.parametrize("x", [0.1, 1.0, 7.5, 19.0, 25.0, 60.0, 300.0])
    def test_against_scipy(self, nu, x):
        assert bessel_i(nu, x) == pytest.approx(special.iv(nu, x), rel=1e-12)

    def test_ratio_bound(self):
        # 0 < I1(x)/(x I0(x)) <= 1/2, equality only as x -> 0
        for x in [1e-3, 0.1, 0.7, 3.0, 15.0, 40.0, 200.0]:
            r = bessel_i(1, x) / (x * bessel_i(0, x))
            assert 0.0 < r <= 0.5

    @pytest.mark.parametrize("n", [0, 1, 3])
    @pytest.mark.parametrize("x", [0.5, 2.0, 6.0])
    def test_integer_order_integral_representation(self, n, x):
        # I_n(x) = (1/2 pi) int_0^{2 pi} e^{x cos phi} cos(n phi) dphi
        val, _ = integrate.quad(
            lambda phi: math.exp(x * math.cos(phi)) * math.cos(n * phi),
            0.0, 2.0 * math.pi, limit=200)
        assert bessel_i(n, x) == pytest.approx(val / (2 * math.pi), rel=1e-11)

    @pytest.mark.parametrize("nu", [0.5, 1.3, 2.7])
    @pytest.mark.parametrize("x", [0.8, 4.0, 12.0, 30.0])
    def test_fractional_order_recurrence(self, nu, x):
        # I_{nu-1}(x) - I_{nu+1}(x) = (2 nu / x) I_nu(x)
        lhs = bessel_i(nu - 1, x) - bessel_i(nu + 1, x)
        rhs = 2 * nu / x * bessel_i(nu, x)
        assert lhs == pytest.approx(rhs, rel=1e-11)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            bessel_i(0, math.inf)


class TestBesselJ:
    def test_at_origin(self):
        assert bessel_j(0, 0) == 1.0
        assert bessel_j(3, 0) == 0.0

    def test_negative_order_parity(self):
        for z in [0.7, 2.0 + 1.0j, 9.3]:
            assert abs(bessel_j(-3, z) - (-1) ** 3 * bessel_j(3, z)) < 1e-14

    @pytest.mark.parametrize("x", [0.5, 1.5, 3.0, 7.0])
    def test_squared_sum_identity(self, x):
        total = abs(bessel_j(0, x)) ** 2 + 2 * sum(
            abs(bessel_j(n, x)) ** 2 for n in range(1, 40))
        assert abs(total - 1.0) < 1e-12

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 11])
    @pytest.mark.parametrize("z", [0.3, 4.9, 5.1, 12.0, 1.0 + 2.0j,
                                   -3.0 + 0.5j, 8.0 - 4.0j])
    def test_against_scipy(self, n, z):
        ref = special.jv(n, z)
        assert abs(bessel_j(n, z) - ref) < 1e-12 * max(abs(ref), 1e-8)

    def test_product_sum_identity(self):
        # sum_n J_n(z) J_{-n}(z) = J_0(2z)
        z = 1.3 - 0.4j
        total = sum(bessel_j(n, z) * bessel_j(-n, z) for n in range(-25, 26))
        assert abs(total - bessel_j(0, 2 * z)) < 1e-13

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            bessel_j(0, complex(math.inf, 0))


class TestEllipticSuite:
    def test_zero_argument(self):
        rec = elliptic_suite(0.0, ThetaNome.from_q(math.exp(-1.0)))
        assert rec.sn == 0.0
        assert rec.cn == 1.0
        assert rec.dn == 1.0
        assert abs(rec.Z) < 1e-12

    def test_moduli_identity(self):
        rec = elliptic_suite(0.4, ThetaNome.from_q(math.exp(-1.0)))
        assert abs(rec.k ** 2 + rec.kprime ** 2 - 1.0) < 1e-12

    def test_sn_cn_dn_identities(self):
        rec = elliptic_suite(0.4, ThetaNome.from_q(math.exp(-1.0)))
        assert abs(rec.sn ** 2 + rec.cn ** 2 - 1.0) < 1e-12
        assert abs(rec.dn ** 2 + rec.k ** 2 * rec.sn ** 2 - 1.0) < 1e-12

    def test_theta_null_K_vs_agm(self):
        rec = elliptic_suite(0.0, ThetaNome.from_q(math.exp(-1.0)))
        assert rec.K == pytest.approx(special.ellipk(rec.k ** 2), rel=1e-13)

    @pytest.mark.parametrize("q", [0.1, math.exp(-1.0), 0.5])
    @pytest.mark.parametrize("zeta", [0.15, 0.4, 0.9, 1.4])
    def test_dn_ratio_identity(self, q, zeta):
        # theta4/theta3 (zeta) = sqrt(k') / dn(u, k)
        nome = ThetaNome.from_q(q)
        rec = elliptic_suite(zeta, nome)
        lhs = (theta(4, zeta, nome) / theta(3, zeta, nome)).real
        rhs = math.sqrt(rec.kprime) / rec.dn
        assert abs(lhs - rhs) < 1e-9 * abs(rhs)

    @pytest.mark.parametrize("q", [0.1, math.exp(-1.0)])
    @pytest.mark.parametrize("zeta", [0.15, 0.4, 1.1])
    def test_log_deriv_identity(self, q, zeta):
        # theta3'/theta3 = theta4'/theta4 - (2K/pi) k^2 cn sn / dn,
        # with theta4'/theta4 = (2K/pi) Z(u)
        nome = ThetaNome.from_q(q)
        rec = elliptic_suite(zeta, nome)
        v3, d3, _ = theta_derivs(3, zeta, nome)
        v4, d4, _ = theta_derivs(4, zeta, nome)
        two_k_pi = 2.0 * rec.K / math.pi
        assert abs((d4 / v4).real - two_k_pi * rec.Z) < 1e-9 * max(abs(rec.Z), 1.0)
        rhs = (d4 / v4).real - two_k_pi * rec.k ** 2 * rec.cn * rec.sn / rec.dn
        assert abs((d3 / v3).real - rhs) < 1e-9 * max(abs(rhs), 1.0)

    @pytest.mark.parametrize("q", [0.1, math.exp(-1.0)])
    @pytest.mark.parametrize("zeta", [0.15, 0.4, 1.1])
    def test_second_log_deriv_identity(self, q, zeta):
        # d^2 log theta3 / dzeta^2 = (4K^2/pi^2) [k'^2/dn^2 - E/K]
        nome = ThetaNome.from_q(q)
        rec = elliptic_suite(zeta, nome)
        v, d1, d2 = theta_derivs(3, zeta, nome)
        lhs = (d2 / v - (d1 / v) ** 2).real
        rhs = (4.0 * rec.K ** 2 / math.pi ** 2) * (
            rec.kprime ** 2 / rec.dn ** 2 - rec.E / rec.K)
        assert abs(lhs - rhs) < 1e-9 * max(abs(rhs), 1.0)

    def test_rejects_complex_nome(self):
        with pytest.raises(ValueError):
            elliptic_suite(0.3, ThetaNome.from_q(0.3 + 0.2j))


# The I1/I0 ratio table: x, I1/I0, I1/(x I0), g = 1 - r1^2 - r2.
RATIO_TABLE = [
    (0.0, 0.0, 0.5, 0.5),
    (0.1, 0.0499, 0.4994, 0.4981),
    (0.5, 0.2425, 0.4850, 0.4562),
    (1.0, 0.4464, 0.4464, 0.3543),
    (2.0, 0.6977, 0.3489, 0.1644),
    (5.0, 0.8934, 0.1787, 2.32e-2),
    (10.0, 0.9486, 9.47e-2, 5.29e-3),
    (50.0, 0.9900, 1.95e-2, 1.99e-4),
    (100.0, 0.9950, 9.95e-3, 4.60e-5),
]


class TestGRatio:
    @pytest.mark.parametrize("x,r1,r2,g", RATIO_TABLE)
    def test_reference_table(self, x, r1, r2, g):
        rec = g_ratio(x)
        assert abs(rec.r1 - r1) < 5e-4
        assert abs(rec.r2 - r2) < 5e-4
        assert abs(rec.g - g) < 5e-4

    def test_even(self):
        for x in [0.05, 0.7, 3.0, 42.0]:
            assert g_ratio(x).g == pytest.approx(g_ratio(-x).g, rel=1e-13)

    def test_large_x_asymptote(self):
        for x in [50.0, 200.0, 1000.0]:
            assert g_ratio(x).g == pytest.approx(0.5 / x ** 2, rel=0.05)

    def test_r2_bound(self):
        for x in [0.0, 0.01, 0.5, 2.0, 20.0, 500.0, -3.0]:
            assert 0.0 < g_ratio(x).r2 <= 0.5

    def test_against_scipy(self):
        for x in [0.3, 1.7, 12.0, 80.0]:
            rec = g_ratio(x)
            assert rec.r1 == pytest.approx(
                special.i1(x) / special.i0(x), rel=1e-12)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            g_ratio(math.nan)
