"""Holomorphic coherent states on the circle via Gaussian periodization.

A line Gaussian coherent state labelled by z = theta + i*l is wrapped onto
the circle by the phase-twisted periodization sum; the result is a theta
function of (phi - z)/2.  Splitting off the non-holomorphic prefactor
leaves the entire family w_z(phi) = e^{i phi delta} theta3[(phi - z +
i eps delta)/2, e^{-eps/2}], whose basis coefficients f_{n,delta}(z) =
exp(-eps(n^2/2 + n delta)) exp(-i n z) span a reproducing-kernel space of
holomorphic functions on the cylinder.  All expectation values close in
theta ratios of the fast (small-nome) series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from circleqm.circlespace import CircleState, Sector
from circleqm.specfun import ThetaNome, theta, theta_derivs

__all__ = [
    "PhasePoint",
    "WZParams",
    "WZExpectations",
    "WZLeadingOrder",
    "WZCompletenessResiduals",
    "BargmannFunction",
    "gaussian_cs",
    "zak_periodize",
    "zak_small_nome",
    "w_state",
    "w_value",
    "w_norm_sq",
    "norm_constant",
    "periodized_norm_constant",
    "w_overlap",
    "fn_basis",
    "bargmann_forward",
    "bargmann_inverse",
    "w_expectations",
    "transition_prob",
    "density",
    "completeness_residual_wz",
]


@dataclass(frozen=True)
class PhasePoint:
    """Complexified label z = theta + i l of a coherent state (theta the
    classical angle reduced to [0, 2 pi), l the dimensionless momentum)."""

    theta: float
    l_tilde: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % (2.0 * math.pi))
        object.__setattr__(self, "l_tilde", float(self.l_tilde))

    @property
    def z(self) -> complex:
        return complex(self.theta, self.l_tilde)

    @classmethod
    def from_z(cls, z: complex) -> "PhasePoint":
        z = complex(z)
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class WZParams:
    """Stiffness epsilon > 0 plus the boundary-condition sector."""

    epsilon: float
    sector: Sector

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    @property
    def delta(self) -> float:
        return self.sector.delta


def _as_point(z) -> PhasePoint:
    return z if isinstance(z, PhasePoint) else PhasePoint.from_z(z)


def gaussian_cs(epsilon: float, z, xi):
    """The line coherent state (eps pi)^(-1/4) e^{-(|z|^2+z^2)/(4 eps)}
    e^{-xi^2/(2 eps) + z xi / eps}; normalized on the line, annihilated by
    Q + i eps P with eigenvalue z."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    z = _as_point(z).z
    xi = np.asarray(xi, dtype=float)
    pref = (epsilon * math.pi) ** -0.25 * np.exp(
        -(abs(z) ** 2 + z * z) / (4.0 * epsilon))
    vals = pref * np.exp(-xi ** 2 / (2.0 * epsilon) + z * xi / epsilon)
    return vals if vals.shape else complex(vals)


def zak_periodize(params: WZParams, z, phi):
    """Both faces of the periodized Gaussian: the twisted sum over winding
    copies and its theta closed form.

    Returns (series, closed) evaluated on phi; the two agree identically
    through the imaginary-argument transformation of theta3.
    """
    eps, delta = params.epsilon, params.delta
    z = _as_point(z).z
    phi = np.asarray(phi, dtype=float)
    pref = (eps * math.pi) ** -0.25
    # winding sum: Gaussians at phi + 2 pi n, phases e^{-i 2 pi n delta}
    n_max = 3 + int(math.ceil((abs(z) + math.sqrt(80.0 * eps) + np.max(np.abs(phi)))
                              / (2.0 * math.pi)))
    series = np.zeros(phi.shape, dtype=complex)
    amp = cmath.exp(-(abs(z) ** 2 + z * z) / (4.0 * eps))
    for n in range(-n_max, n_max + 1):
        x = phi + 2.0 * math.pi * n
        series += (cmath.exp(-2j * math.pi * n * delta)
                   * np.exp(-x * x / (2.0 * eps) + z * x / eps))
    series = pref * amp * series

    nome = ThetaNome.from_q(math.exp(-2.0 * math.pi ** 2 / eps))
    zeta = 1j * math.pi * (phi - z + 1j * eps * delta) / eps
    closed = (pref
              * np.exp(-(abs(z) ** 2 - z * z) / (4.0 * eps)
                       - (phi - z) ** 2 / (2.0 * eps))
              * theta(3, zeta, nome))
    if series.shape:
        return series, closed
    return complex(series), complex(closed)


def zak_small_nome(params: WZParams, z, phi):
    """The same periodized state written with the nome e^{-eps/2} (the
    modular partner of the winding-sum form)."""
    eps, delta = params.epsilon, params.delta
    z = _as_point(z).z
    phi = np.asarray(phi, dtype=float)
    nome = ThetaNome.from_q(math.exp(-0.5 * eps))
    pref = ((2.0 * math.pi) ** -0.5 * (eps / math.pi) ** 0.25
            * cmath.exp(-(abs(z) ** 2 - z * z) / (4.0 * eps))
            * cmath.exp(-eps * delta ** 2 / 2.0))
    vals = pref * np.exp(1j * (phi - z) * delta) * theta(
        3, (phi - z + 1j * eps * delta) / 2.0, nome)
    return vals if vals.shape else complex(vals)


def w_state(params: WZParams, z, window_tol: float = 1e-12) -> CircleState:
    """Coefficient window of the holomorphic (unnormalized) family member.

    c_m = exp(-eps(m^2/2 + m delta)) exp(-i m z); the window is centered at
    the magnitude peak m* = round((l - eps delta)/eps) with half-width
    ceil(sqrt(2 ln(1/tol)/eps)) + 5 (Gaussian coefficient decay).
    """
    if not 0.0 < window_tol < 1.0:
        raise ValueError("window_tol must lie in (0, 1)")
    eps, delta = params.epsilon, params.delta
    zc = _as_point(z).z
    l_tilde = zc.imag
    center = int(round((l_tilde - eps * delta) / eps))
    half = int(math.ceil(math.sqrt(2.0 * math.log(1.0 / window_tol) / eps))) + 5
    ms = np.arange(center - half, center + half + 1)
    log_c = -eps * (ms.astype(float) ** 2 / 2.0 + ms * delta) - 1j * ms * zc
    coeffs = np.exp(log_c)
    return CircleState(params.sector, int(ms[0]), coeffs)


def w_value(params: WZParams, z, phi, method: str = "auto"):
    """Closed form e^{i phi delta} theta3[(phi - z + i eps delta)/2,
    e^{-eps/2}]; `method` selects the theta evaluation route so the two
    printed faces of the formula can be compared."""
    eps, delta = params.epsilon, params.delta
    zc = _as_point(z).z
    phi = np.asarray(phi, dtype=float)
    nome = ThetaNome.from_q(math.exp(-0.5 * eps))
    vals = np.exp(1j * phi * delta) * theta(
        3, (phi - zc + 1j * eps * delta) / 2.0, nome, method=method)
    return vals if vals.shape else complex(vals)


def w_norm_sq(params: WZParams, z) -> float:
    """Squared norm theta3[i(l - eps delta), e^{-eps}]."""
    eps, delta = params.epsilon, params.delta
    y = _as_point(z).l_tilde - eps * delta
    nome = ThetaNome.from_q(math.exp(-eps))
    return theta(3, 1j * y, nome).real


def norm_constant(params: WZParams, z) -> float:
    """N_z = (w_z, w_z)^(-1/2), the holomorphic-family normalizer."""
    return w_norm_sq(params, z) ** -0.5


def periodized_norm_constant(params: WZParams, z) -> float:
    """C_z = sqrt(2 pi / theta3[pi(l - eps delta)/eps, e^{-pi^2/eps}]),
    the normalizer of the periodized Gaussian itself."""
    eps, delta = params.epsilon, params.delta
    y = _as_point(z).l_tilde - eps * delta
    nome = ThetaNome.from_q(math.exp(-math.pi ** 2 / eps))
    return math.sqrt(2.0 * math.pi / theta(3, math.pi * y / eps, nome).real)


def w_overlap(params: WZParams, z1, z2) -> complex:
    """Reproducing kernel K(z1, z2) = theta3[(conj(z1) - z2 + 2 i eps
    delta)/2, e^{-eps}] = (w_{z1}, w_{z2})."""
    eps, delta = params.epsilon, params.delta
    z1c, z2c = _as_point(z1).z, _as_point(z2).z
    nome = ThetaNome.from_q(math.exp(-eps))
    return complex(theta(
        3, (np.conj(z1c) - z2c + 2j * eps * delta) / 2.0, nome))


def fn_basis(params: WZParams, n: int, z) -> complex:
    """Orthonormal basis f_{n,delta}(z) = exp(-eps(n^2/2 + n delta))
    exp(-i n z) of the holomorphic-function space."""
    eps, delta = params.epsilon, params.delta
    zc = _as_point(z).z
    return cmath.exp(-eps * (n * n / 2.0 + n * delta) - 1j * n * zc)


@dataclass(frozen=True)
class BargmannFunction:
    """Expansion of a holomorphic-space element over f_{n,delta}.

    Obtained from a circle state with coefficients b_n as ftilde(z) =
    (f, w_z) = sum conj(b_n) f_{n,delta}(z); evaluation and norm follow.
    """

    params: WZParams
    n_lo: int
    coeffs: np.ndarray

    def evaluate(self, z) -> complex:
        zc = _as_point(z).z
        return complex(sum(
            c * fn_basis(self.params, n, zc)
            for n, c in zip(range(self.n_lo, self.n_lo + self.coeffs.size),
                            self.coeffs)))

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def bargmann_forward(params: WZParams, state: CircleState) -> BargmannFunction:
    """Unitary map to the holomorphic space: coefficients conj(b_n)."""
    if state.sector.delta != params.delta:
        raise ValueError("state sector must match the map's sector")
    return BargmannFunction(params, state.n_lo, np.conj(state.coeffs))


def bargmann_inverse(bf: BargmannFunction) -> CircleState:
    """Back to the circle: b_n = conj(coefficient of f_{n,delta})."""
    return CircleState(bf.params.sector, bf.n_lo, np.conj(bf.coeffs))


@dataclass(frozen=True)
class WZLeadingOrder:
    """First-order small-nome approximations: the theta ratio, the momentum
    mean and the scaled momentum variance."""

    ratio43: float
    mean_l: float
    var_l_scaled: float
    corr_cl_scaled: float


@dataclass(frozen=True)
class WZExpectations:
    """Closed-form moment record of the normalized holomorphic state.

    var_l_scaled is eps^2 (Delta L)^2 and corr_cl_scaled is eps <S(C, L)>;
    leading holds the small-nome approximations for comparison.
    """

    mean_u: complex
    mean_udag: complex
    mean_c: float
    mean_s: float
    mean_l: float
    mean_c2: float
    mean_s2: float
    var_c: float
    var_s: float
    var_l_scaled: float
    corr_cl_scaled: float
    leading: WZLeadingOrder

    @property
    def var_sum(self) -> float:
        return self.var_c + self.var_s


def w_expectations(params: WZParams, z) -> WZExpectations:
    """Evaluate every closed form through ratios of the fast small-nome
    theta series at zeta = pi (l - eps delta)/eps, q = e^{-pi^2/eps}."""
    eps, delta = params.epsilon, params.delta
    pt = _as_point(z)
    theta_ang, l_tilde = pt.theta, pt.l_tilde
    y = l_tilde - eps * delta
    zeta = math.pi * y / eps
    nome = ThetaNome.from_q(math.exp(-math.pi ** 2 / eps))
    t3, d3, dd3 = theta_derivs(3, zeta, nome)
    t4, d4, _ = theta_derivs(4, zeta, nome)
    t3, d3, dd3 = t3.real, d3.real, dd3.real
    t4, d4 = t4.real, d4.real
    ratio43 = t4 / t3
    ca, sa = math.cos(theta_ang), math.sin(theta_ang)
    e4 = math.exp(-eps / 4.0)
    e1 = math.exp(-eps)
    e2 = math.exp(-eps / 2.0)

    mean_c = ca * e4 * ratio43
    mean_s = sa * e4 * ratio43
    # mean momentum: delta + (1/2) d/dl log theta3[i(l - eps delta)] =
    # l/eps + (pi/2 eps) theta3'/theta3 at the transformed argument -- the
    # delta offset cancels against the Gaussian-envelope derivative
    # (confirmed by the coefficient-space oracle)
    mean_l = l_tilde / eps + (math.pi / (2.0 * eps)) * d3 / t3
    mean_c2 = 0.5 + e1 * (ca * ca - 0.5)
    mean_s2 = 0.5 + e1 * (sa * sa - 0.5)
    var_c = mean_c2 - e2 * ca * ca * ratio43 ** 2
    var_s = mean_s2 - e2 * sa * sa * ratio43 ** 2
    var_l_scaled = eps / 2.0 + (math.pi ** 2 / 4.0) * (dd3 / t3 - (d3 / t3) ** 2)
    corr_cl_scaled = (math.pi / 2.0) * e4 * ca * ratio43 * (d4 / t4 - d3 / t3)

    q = nome.q.real
    osc = 2.0 * math.pi * y / eps
    leading = WZLeadingOrder(
        ratio43=1.0 - 4.0 * q * math.cos(osc),
        mean_l=l_tilde / eps
               + (math.pi / (2.0 * eps)) * (-4.0 * q * math.sin(osc)),
        var_l_scaled=eps / 2.0 - 2.0 * math.pi ** 2 * q * math.cos(osc),
        corr_cl_scaled=4.0 * math.pi * q * e4 * ca * math.sin(osc),
    )
    return WZExpectations(
        mean_u=cmath.exp(-1j * theta_ang) * e4 * ratio43,
        mean_udag=cmath.exp(1j * theta_ang) * e4 * ratio43,
        mean_c=mean_c, mean_s=mean_s, mean_l=mean_l,
        mean_c2=mean_c2, mean_s2=mean_s2,
        var_c=var_c, var_s=var_s,
        var_l_scaled=var_l_scaled, corr_cl_scaled=corr_cl_scaled,
        leading=leading,
    )


def transition_prob(m: int, params: WZParams, z) -> float:
    """Probability of angular momentum m + delta in the normalized state:
    sqrt(eps/pi) e^{-[l - eps(m+delta)]^2/eps} / theta3[pi(l - eps
    delta)/eps, e^{-pi^2/eps}]; peaks at l = eps(m + delta)."""
    eps, delta = params.epsilon, params.delta
    l_tilde = _as_point(z).l_tilde
    nome = ThetaNome.from_q(math.exp(-math.pi ** 2 / eps))
    norm = theta(3, math.pi * (l_tilde - eps * delta) / eps, nome).real
    return (math.sqrt(eps / math.pi)
            * math.exp(-(l_tilde - eps * (m + delta)) ** 2 / eps) / norm)


def density(params: WZParams, z, phi):
    """Angular probability density of the normalized periodized Gaussian:
    (2 pi / sqrt(eps pi)) e^{-(phi-theta)^2/eps} |theta3[i pi (phi - z +
    i eps delta)/eps, e^{-2 pi^2/eps}]|^2 / theta3[pi(l - eps delta)/eps,
    e^{-pi^2/eps}]; integrates to 1 against dphi/2pi."""
    eps, delta = params.epsilon, params.delta
    pt = _as_point(z)
    phi = np.asarray(phi, dtype=float)
    num_nome = ThetaNome.from_q(math.exp(-2.0 * math.pi ** 2 / eps))
    den_nome = ThetaNome.from_q(math.exp(-math.pi ** 2 / eps))
    tvals = theta(3, 1j * math.pi * (phi - pt.z + 1j * eps * delta) / eps,
                  num_nome)
    den = theta(3, math.pi * (pt.l_tilde - eps * delta) / eps, den_nome).real
    vals = (2.0 * math.pi / math.sqrt(eps * math.pi)
            * np.exp(-(phi - pt.theta) ** 2 / eps)
            * np.abs(tvals) ** 2 / den)
    return vals if vals.shape else float(vals)


@dataclass(frozen=True)
class WZCompletenessResiduals:
    """Identity-resolution defects of the two integral forms: the raw
    Gaussian-measure form and the theta-weighted normalized form."""

    gauss: complex
    weighted: complex


def completeness_residual_wz(m1: int, m2: int, params: WZParams,
                             l_cut: float = 8.0,
                             n_nodes: int = 80) -> WZCompletenessResiduals:
    """Resolve the identity over the family, truncating the momentum
    integral at +- l_cut sqrt(eps) around the matrix element's center.

    The angle integral is done analytically (it kills m1 != m2 exactly);
    the remaining radial integrals are Gauss-Legendre.  The weighted form
    evaluates the theta weight and the state normalizer separately, so
    their cancellation is part of what is being checked.
    """
    if l_cut <= 0:
        raise ValueError("l_cut must be positive")
    if m1 != m2:
        return WZCompletenessResiduals(0j, 0j)
    eps, delta = params.epsilon, params.delta
    m = m1
    x_gl, w_gl = np.polynomial.legendre.leggauss(n_nodes)

    center = eps * (m + delta)
    half_width = l_cut * math.sqrt(eps)
    l_nodes = center + half_width * x_gl
    wts = half_width * w_gl

    # Gaussian-measure form: integrand (1/eps) sqrt(eps/pi) e^{-[l-eps(m+d)]^2/eps}
    gauss_integrand = (math.sqrt(eps / math.pi) / eps
                       * np.exp(-(l_nodes - center) ** 2 / eps))
    gauss = float(np.sum(wts * gauss_integrand)) - 1.0

    # theta-weighted normalized form: weight e^{-y^2/eps} theta3[iy, e^-eps]
    # /sqrt(eps pi) times N_z^2 |f_m|^2.  The theta weight comes from the
    # closed form but the normalizer from the coefficient sum, so their
    # cancellation is itself under test.
    nome = ThetaNome.from_q(math.exp(-eps))
    weighted_integrand = np.empty(n_nodes)
    for i, l_t in enumerate(l_nodes):
        y = l_t - eps * delta
        t3 = theta(3, 1j * y, nome).real
        z_i = PhasePoint(0.0, l_t)
        norm_sq = w_state(params, z_i, window_tol=1e-15).norm_sq()
        f_m_sq = math.exp(-eps * m * m - 2.0 * eps * m * delta + 2.0 * m * l_t)
        weighted_integrand[i] = (math.exp(-y * y / eps) / math.sqrt(eps * math.pi)
                                 * t3 * f_m_sq / norm_sq)
    weighted = float(np.sum(wts * weighted_integrand)) - 1.0
    return WZCompletenessResiduals(complex(gauss), complex(weighted))
