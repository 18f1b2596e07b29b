"""Spectral propagation, theta propagator kernel, coherent-family evolution."""

import cmath
import math

import numpy as np
import pytest

from circleqm.circlespace import (
    CircleState,
    Params,
    Sector,
    apply_operator,
    basis_state,
    fidelity,
    inner,
)
from circleqm.evolve import (
    EvolutionSpec,
    evolve_min,
    evolve_w,
    kernel,
    kernel_apply,
    propagate,
)
from circleqm.mincs import MinUncParams, min_state
from circleqm.zakcs import PhasePoint, WZParams, w_state, w_value

RNG = np.random.default_rng(99)


def random_state(sector, n_lo=-2, width=5, rng=RNG):
    c = rng.normal(size=width) + 1j * rng.normal(size=width)
    return CircleState(sector, n_lo, c).normalized()


class TestPropagate:
    def test_zero_time_identity(self):
        spec = EvolutionSpec(Params(1.0, 1.0), Sector(0.3), 0.0)
        psi = random_state(Sector(0.3))
        out = propagate(spec, psi)
        assert np.max(np.abs(out.coeffs - psi.coeffs)) == 0.0

    def test_basis_state_global_phase(self):
        eps, delta, wt, n = 0.7, 0.4, 1.3, 2
        spec = EvolutionSpec(Params(eps, 1.0), Sector(delta), wt)
        out = propagate(spec, basis_state(n, Sector(delta)))
        expected = cmath.exp(-0.5j * eps * (n + delta) ** 2 * wt)
        assert abs(out.coeffs[0] - expected) < 1e-15
        assert abs(abs(out.coeffs[0]) - 1.0) < 1e-15

    def test_full_revival(self):
        spec = EvolutionSpec(Params(1.0, 1.0), Sector(0.0), 4 * math.pi)
        psi = random_state(Sector(0.0), n_lo=-7, width=15)
        out = propagate(spec, psi)
        assert fidelity(psi, out) > 1 - 1e-12

    def test_rational_sector_revival_up_to_phase(self):
        sector = Sector.from_fraction(2, 5)
        q = sector.covering_order
        spec = EvolutionSpec(Params(1.0, 1.0), sector, 4 * math.pi * q * q)
        psi = random_state(sector, n_lo=-6, width=13)
        out = propagate(spec, psi)
        assert fidelity(psi, out) > 1 - 1e-10

    def test_unitarity(self):
        spec = EvolutionSpec(Params(1.3, 0.9), Sector(0.62), 2.7)
        psi = random_state(Sector(0.62))
        assert propagate(spec, psi).norm_sq() == pytest.approx(
            psi.norm_sq(), abs=1e-15)

    def test_group_property(self):
        delta = 0.21
        psi = random_state(Sector(delta))
        params = Params(0.8, 1.1)
        one = propagate(EvolutionSpec(params, Sector(delta), 0.7),
                        propagate(EvolutionSpec(params, Sector(delta), 1.3), psi))
        both = propagate(EvolutionSpec(params, Sector(delta), 2.0), psi)
        assert np.max(np.abs(one.coeffs - both.coeffs)) < 1e-14

    def test_negative_time_inverts(self):
        delta = 0.11
        psi = random_state(Sector(delta))
        params = Params(1.0, 1.0)
        back = propagate(EvolutionSpec(params, Sector(delta), -0.9),
                         propagate(EvolutionSpec(params, Sector(delta), 0.9), psi))
        assert np.max(np.abs(back.coeffs - psi.coeffs)) < 1e-14

    def test_energy_conserved(self):
        spec = EvolutionSpec(Params(1.0, 1.0), Sector(0.37), 3.3)
        psi = random_state(Sector(0.37))
        l2_before = inner(psi, apply_operator("L2", psi)).real
        out = propagate(spec, psi)
        l2_after = inner(out, apply_operator("L2", out)).real
        assert abs(l2_after - l2_before) < 1e-12 * max(abs(l2_before), 1.0)


class TestKernel:
    def test_two_faces_agree_at_reference_point(self):
        spec = EvolutionSpec(Params(1.0, 1.0), Sector(0.3), 0.7, eta=1e-6)
        a = kernel(spec, 0.4, form="series")
        b = kernel(spec, 0.4, form="gaussian")
        assert abs(a - b) < 1e-9 * abs(a)

    @pytest.mark.parametrize("eps,delta,wt", [
        (1.0, 0.0, 0.5), (1.0, 0.3, 0.7), (0.5, 0.7, 2.0), (2.0, 0.2, 1.1)])
    def test_two_faces_agree_on_grid(self, eps, delta, wt):
        spec = EvolutionSpec(Params(eps, 1.0), Sector(delta), wt, eta=1e-6)
        dphi = np.linspace(-math.pi, math.pi, 9)
        a = kernel(spec, dphi, form="series")
        b = kernel(spec, dphi, form="gaussian")
        scale = np.max(np.abs(a))
        assert np.max(np.abs(a - b)) < 1e-9 * scale

    def test_free_spreading_structure_at_small_time(self):
        # at delta = 0 and small t the kernel is the free Gaussian
        # sqrt(2 pi/(i eps T)) exp(i dphi^2/(2 eps T)) up to the tiny
        # reciprocal-nome theta correction
        eps, wt, eta = 1.0, 1e-3, 1e-5
        spec = EvolutionSpec(Params(eps, 1.0), Sector(0.0), wt, eta=eta)
        T = complex(wt, -eta)
        for dphi in (0.0, 0.05):
            free = cmath.sqrt(2 * math.pi) * (1j * eps * T) ** -0.5 \
                * cmath.exp(-dphi ** 2 / (2j * eps * T))
            val = kernel(spec, dphi)
            assert abs(val - free) < 1e-6 * abs(free)

    def test_rejects_unregularized(self):
        spec = EvolutionSpec(Params(1.0, 1.0), Sector(0.0), 0.5, eta=0.0)
        with pytest.raises(ValueError):
            kernel(spec, 0.3)

    def test_quadrature_matches_propagate(self):
        eps, delta, wt, eta = 1.0, 0.2, 0.9, 1e-6
        sector = Sector(delta)
        psi = CircleState(sector, -1,
                          np.array([0.3 - 0.1j, 0.8 + 0.2j, -0.4 + 0.5j]))
        psi = psi.normalized()
        spec = EvolutionSpec(Params(eps, 1.0), sector, wt, eta=eta)
        phi_out = np.linspace(0, 2 * math.pi, 5, endpoint=False)
        via_kernel = kernel_apply(spec, psi, phi_out)
        ref = propagate(spec, psi).evaluate(phi_out)
        assert np.max(np.abs(via_kernel - ref)) < 1e-6

    def test_delta_limit_convergence_sweep(self):
        # as t -> 0 (eta = t/100) the kernel approaches the reproducing
        # delta-functional: convolution against a fixed smooth state
        # converges to the state's value
        sector = Sector(0.3)
        psi = CircleState(sector, -1,
                          np.array([0.5, 1.0, 0.5 + 0.5j])).normalized()
        phi0 = 1.1
        errors = []
        for wt in (1e-2, 1e-3, 1e-4):
            spec = EvolutionSpec(Params(1.0, 1.0), sector, wt, eta=wt / 100)
            val = kernel_apply(spec, psi, phi0)
            errors.append(abs(val - psi.evaluate(phi0)))
        assert errors[0] > errors[1] > errors[2]
        assert errors[-1] < 1e-3


class TestEvolveW:
    def test_zero_time_matches_family(self):
        params = WZParams(1.0, Sector(0.4))
        z = PhasePoint(0.8, 0.5)
        spec = EvolutionSpec(Params(1.0, 1.0), Sector(0.4), 0.0)
        phi = np.linspace(0, 2 * math.pi, 9)
        vals = evolve_w(spec, z)(phi)
        ref = w_value(params, z, phi)
        assert np.max(np.abs(vals - ref)) < 1e-12 * np.max(np.abs(ref))

    @pytest.mark.parametrize("delta,wt", [(0.0, 1.0), (0.4, 1.0), (0.4, 2.7)])
    def test_matches_spectral_propagation(self, delta, wt):
        eps = 1.0
        params = WZParams(eps, Sector(delta))
        z = PhasePoint(1.2, 0.6)
        spec = EvolutionSpec(Params(eps, 1.0), Sector(delta), wt)
        closed = evolve_w(spec, z)
        spectral = propagate(spec, w_state(params, z, window_tol=1e-15))
        phi = np.linspace(0, 2 * math.pi, 13)
        a = closed(phi)
        b = spectral.evaluate(phi)
        assert np.max(np.abs(a - b)) < 1e-9 * np.max(np.abs(b))

    def test_delta_zero_only_nome_moves(self):
        # the theta argument keeps theta fixed at delta = 0: the evolved
        # state at phi equals the family form with the original z but the
        # rotated nome
        eps, wt = 1.0, 1.5
        spec = EvolutionSpec(Params(eps, 1.0), Sector(0.0), wt)
        z = PhasePoint(0.7, 0.3)
        from circleqm.specfun import ThetaNome, theta
        nome_t = ThetaNome.from_q(cmath.exp(-0.5 * eps * (1 + 1j * wt)))
        phi = np.linspace(0, 2 * math.pi, 7)
        ref = theta(3, (phi - z.z) / 2.0, nome_t)
        vals = evolve_w(spec, z)(phi)
        assert np.max(np.abs(vals - ref)) < 1e-12 * np.max(np.abs(ref))


class TestEvolveMin:
    def test_zero_time_matches_family(self):
        p = MinUncParams(0.4, 1.3, 0.6, 0.9)
        spec = EvolutionSpec(Params(1.0, 1.0), p.sector, 0.0)
        out = evolve_min(spec, p)
        ref = min_state(p)
        assert np.max(np.abs(out.coeffs - ref.coeffs)) < 1e-15

    def test_magnitudes_invariant(self):
        p = MinUncParams(0.0, 0.3, 0.2, 1.1)
        spec = EvolutionSpec(Params(0.8, 1.0), p.sector, 2.2)
        out = evolve_min(spec, p)
        ref = min_state(p)
        assert np.max(np.abs(np.abs(out.coeffs) - np.abs(ref.coeffs))) < 1e-15

    @pytest.mark.parametrize("wt", [0.4, 1.7, 5.0])
    def test_matches_spectral_propagation(self, wt):
        p = MinUncParams(0.9, 2.3, 0.5, 0.8)
        spec = EvolutionSpec(Params(1.0, 1.0), p.sector, wt)
        out = evolve_min(spec, p)
        ref = propagate(spec, min_state(p))
        assert np.max(np.abs(out.coeffs - ref.coeffs)) < 1e-12

    def test_momentum_constant_and_angle_disperses(self):
        # <L> is conserved; the angular distribution spreads at early times
        # (no rigid rotation once sigma != 0)
        p = MinUncParams(0.0, 0.0, 0.0, 1.5)
        sector = p.sector
        spread, mean_l = [], []
        for wt in (0.0, 0.3, 0.6, 1.0, 1.5):
            spec = EvolutionSpec(Params(1.0, 1.0), sector, wt)
            psi = evolve_min(spec, p).normalized()
            c_psi = apply_operator("C", psi)
            s_psi = apply_operator("S", psi)
            l_psi = apply_operator("L", psi)
            mean_c = inner(psi, c_psi).real
            mean_s = inner(psi, s_psi).real
            spread.append(1.0 - mean_c ** 2 - mean_s ** 2)
            mean_l.append(inner(psi, l_psi).real)
        assert all(b > a for a, b in zip(spread, spread[1:]))
        assert np.max(np.abs(np.diff(mean_l))) < 1e-12
