"""Fractional-sector Hilbert spaces over the circle.

A sector delta in [0, 1) labels the quasi-periodic boundary condition
psi(phi + 2 pi) = exp(i 2 pi delta) psi(phi).  States live in a finite
window of Fourier coefficients over the twisted basis
e_{n,delta}(phi) = exp(i (n + delta) phi); the basic self-adjoint
observables are C = cos phi, S = sin phi and the dimensionless angular
momentum L with eigenvalues n + delta.  hbar = 1 and unit radius
throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

__all__ = [
    "Sector",
    "RepLabel",
    "Params",
    "CircleState",
    "UncertaintyReport",
    "basis_state",
    "apply_operator",
    "inner",
    "inner_quadrature",
    "uncertainty_report",
    "rep_apply",
    "energy",
    "ground_state",
    "delta_from_flux",
    "time_reversal",
    "parity",
    "fidelity",
]


@dataclass(frozen=True)
class Sector:
    """Boundary-condition label delta in [0, 1), optionally with the covering
    order q when delta = p/q in lowest terms."""

    delta: float
    covering_order: Optional[int] = None

    def __post_init__(self):
        if not (0.0 <= self.delta < 1.0):
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")
        q = self.covering_order
        if q is not None:
            if q < 1 or q != int(q):
                raise ValueError("covering_order must be a positive integer")
            p = self.delta * q
            if abs(p - round(p)) > 1e-12:
                raise ValueError("delta * covering_order must be an integer")
            if math.gcd(int(round(p)), int(q)) != 1:
                raise ValueError("delta = p/q must be in lowest terms")

    @classmethod
    def from_fraction(cls, p: int, q: int) -> "Sector":
        frac = Fraction(p, q)
        return cls(float(frac % 1), (frac % 1).denominator)


@dataclass(frozen=True)
class RepLabel:
    """Label (rho, sector) of an irreducible representation; rho scales the
    translation generators."""

    rho: float
    sector: Sector

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")


@dataclass(frozen=True)
class Params:
    """Dimensionless stiffness epsilon = hbar/(m omega r^2) and the frequency
    omega used only by time evolution."""

    epsilon: float
    omega: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class CircleState:
    """Quasi-periodic wavefunction as a coefficient window over e_{n,delta}.

    coeffs[j] multiplies e_{n_lo + j, delta}.  Evaluation reduces phi modulo
    2 pi first and reattaches the winding phase exp(i 2 pi delta k), so the
    boundary condition holds exactly by construction.
    """

    sector: Sector
    n_lo: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficient window must be a nonempty 1-d array")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def n_hi(self) -> int:
        return self.n_lo + self.coeffs.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_lo, self.n_hi + 1)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm_sq() - 1.0) < tol

    def normalized(self) -> "CircleState":
        return CircleState(self.sector, self.n_lo, self.coeffs / self.norm())

    def evaluate(self, phi):
        """psi(phi) = sum_n c_n exp(i (n + delta) phi), winding-exact."""
        phi = np.asarray(phi, dtype=float)
        k = np.floor(phi / (2.0 * math.pi))
        phi0 = phi - 2.0 * math.pi * k
        freq = self.indices + self.sector.delta
        vals = np.exp(1j * np.multiply.outer(phi0, freq)) @ self.coeffs
        vals = vals * np.exp(1j * 2.0 * math.pi * self.sector.delta * k)
        return vals if vals.shape else complex(vals)

    def trimmed(self, tol: float = 0.0) -> "CircleState":
        """Drop zero (or sub-tol) coefficients at both window edges."""
        mag = np.abs(self.coeffs)
        keep = np.nonzero(mag > tol)[0]
        if keep.size == 0:
            return CircleState(self.sector, self.n_lo, self.coeffs[:1])
        lo, hi = keep[0], keep[-1]
        return CircleState(self.sector, self.n_lo + int(lo),
                           self.coeffs[lo:hi + 1])

    def to_json(self) -> str:
        return json.dumps({
            "delta": self.sector.delta,
            "n_lo": self.n_lo,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        })

    @classmethod
    def from_json(cls, text: str) -> "CircleState":
        doc = json.loads(text)
        coeffs = np.array([complex(re, im) for re, im in doc["coeffs"]])
        return cls(Sector(float(doc["delta"])), int(doc["n_lo"]), coeffs)


def basis_state(n: int, sector: Sector) -> CircleState:
    """The basis element e_{n,delta}: a single unit coefficient."""
    return CircleState(sector, int(n), np.array([1.0 + 0j]))


_OPERATOR_TAGS = ("C", "S", "L", "L2")


def apply_operator(which: str, state: CircleState) -> CircleState:
    """Apply C = cos phi, S = sin phi, L or L^2 in coefficient space.

    C and S shift the window by one on each side, c_n -> (c_{n-1} + c_{n+1})/2
    and (c_{n-1} - c_{n+1})/(2i); L multiplies by the eigenvalue n + delta.
    """
    if which not in _OPERATOR_TAGS:
        raise ValueError(f"operator must be one of {_OPERATOR_TAGS}")
    c = state.coeffs
    if which in ("C", "S"):
        out = np.zeros(c.size + 2, dtype=complex)
        if which == "C":
            out[2:] += 0.5 * c      # c_{n-1} contribution at index n
            out[:-2] += 0.5 * c     # c_{n+1} contribution
        else:
            out[2:] += c / 2j
            out[:-2] -= c / 2j
        return CircleState(state.sector, state.n_lo - 1, out)
    eig = state.indices + state.sector.delta
    if which == "L":
        return CircleState(state.sector, state.n_lo, c * eig)
    return CircleState(state.sector, state.n_lo, c * eig * eig)


def _common_window(s2: CircleState, s1: CircleState):
    lo = min(s2.n_lo, s1.n_lo)
    hi = max(s2.n_hi, s1.n_hi)
    a = np.zeros(hi - lo + 1, dtype=complex)
    b = np.zeros(hi - lo + 1, dtype=complex)
    a[s2.n_lo - lo: s2.n_hi - lo + 1] = s2.coeffs
    b[s1.n_lo - lo: s1.n_hi - lo + 1] = s1.coeffs
    return a, b


def _require_same_sector(s2: CircleState, s1: CircleState) -> None:
    if s2.sector.delta != s1.sector.delta:
        raise ValueError(
            "states with different delta live in different Hilbert spaces")


def inner(state2: CircleState, state1: CircleState) -> complex:
    """Scalar product (psi2, psi1) = sum_n conj(c2_n) c1_n."""
    _require_same_sector(state2, state1)
    a, b = _common_window(state2, state1)
    return complex(np.vdot(a, b))


def inner_quadrature(state2: CircleState, state1: CircleState,
                     n_nodes: Optional[int] = None) -> complex:
    """Scalar product by trapezoidal quadrature of conj(psi2) psi1 / 2 pi.

    The integrand is an exactly 2 pi periodic trigonometric polynomial even
    for delta != 0, so the uniform rule with more nodes than twice the
    bandwidth is exact; serves as the independent oracle for `inner`.
    """
    _require_same_sector(state2, state1)
    width = max(state2.n_hi, state1.n_hi) - min(state2.n_lo, state1.n_lo) + 1
    m = n_nodes or (4 * width + 16)
    phi = np.arange(m) * (2.0 * math.pi / m)
    vals = np.conj(state2.evaluate(phi)) * state1.evaluate(phi)
    return complex(np.mean(vals))


def fidelity(state2: CircleState, state1: CircleState) -> float:
    """|<psi2, psi1>| / (||psi2|| ||psi1||)."""
    return abs(inner(state2, state1)) / (state2.norm() * state1.norm())


@dataclass(frozen=True)
class UncertaintyReport:
    """All the ingredients of the variance inequality for a pair (A, B).

    lhs = (Delta A)^2 (Delta B)^2, rhs = |<S(A,B)>|^2 + |<[A,B]>|^2 / 4,
    where S(A,B) = (AB + BA)/2 - <A><B>.  When the inequality is saturated,
    sigma = gamma - i s solves (B - <B>) psi = sigma (A - <A>) psi.
    """

    mean_a: float
    mean_b: float
    var_a: float
    var_b: float
    covariance: float
    commutator_mean: complex
    lhs: float
    rhs: float
    saturated: bool
    sigma: Optional[complex]


def uncertainty_report(a: str, b: str, state: CircleState) -> UncertaintyReport:
    """Evaluate the variance inequality for operators a, b on a normalized
    copy of `state`."""
    psi = state.normalized()
    a_psi = apply_operator(a, psi)
    b_psi = apply_operator(b, psi)
    mean_a = inner(psi, a_psi).real
    mean_b = inner(psi, b_psi).real
    # <A^2> - <A>^2 can come out a few ulp negative on eigenstates; clamp
    # within the cancellation noise, never beyond it.
    sq_a = inner(a_psi, a_psi).real
    sq_b = inner(b_psi, b_psi).real
    var_a = max(sq_a - mean_a ** 2, 0.0) \
        if sq_a - mean_a ** 2 > -1e-12 * max(sq_a, 1.0) else sq_a - mean_a ** 2
    var_b = max(sq_b - mean_b ** 2, 0.0) \
        if sq_b - mean_b ** 2 > -1e-12 * max(sq_b, 1.0) else sq_b - mean_b ** 2
    ab = inner(a_psi, b_psi)
    covariance = ab.real - mean_a * mean_b
    commutator_mean = ab - np.conj(ab)  # <AB> - <BA> = 2i Im <A psi, B psi>
    lhs = var_a * var_b
    rhs = covariance ** 2 + 0.25 * abs(commutator_mean) ** 2
    saturated = abs(lhs - rhs) < 1e-10 * max(lhs, 1e-30)
    sigma = None
    if saturated and var_a > 0:
        gamma = covariance / var_a
        s = (0.5j * commutator_mean / var_a).real
        sigma = complex(gamma, -s)
    return UncertaintyReport(mean_a, mean_b, var_a, var_b, covariance,
                             complex(commutator_mean), lhs, rhs, saturated,
                             sigma)


def rep_apply(alpha: float, a: float, b: float, rep: RepLabel,
              state: CircleState) -> CircleState:
    """Act with the group element (alpha, t = a + i b) in the representation
    labelled by rep.

    The rotation is diagonal, c_n -> exp(-i (n + delta) alpha) c_n.  The
    translation multiplies pointwise by exp(-i rho (a cos phi + b sin phi)),
    realized on a uniform grid followed by spectral projection with the
    window grown to hold the Bessel tail of the multiplier.
    """
    if rep.sector.delta != state.sector.delta:
        raise ValueError("representation sector must match the state sector")
    delta = state.sector.delta
    out = state
    if alpha != 0.0:
        phases = np.exp(-1j * (out.indices + delta) * alpha)
        out = CircleState(out.sector, out.n_lo, out.coeffs * phases)
    radius = rep.rho * math.hypot(a, b)
    if radius == 0.0:
        return out
    grow = int(math.ceil(radius)) + 20
    for attempt in range(2):
        n_lo = out.n_lo - grow
        n_hi = out.n_hi + grow
        m = 4 * (n_hi - n_lo + 1) + 16
        phi = np.arange(m) * (2.0 * math.pi / m)
        vals = out.evaluate(phi) * np.exp(
            -1j * rep.rho * (a * np.cos(phi) + b * np.sin(phi)))
        # project onto e_{n,delta}; the delta phases cancel against evaluate's
        freq = np.arange(n_lo, n_hi + 1) + delta
        coeffs = np.exp(-1j * np.outer(freq, phi)) @ vals / m
        new = CircleState(out.sector, n_lo, coeffs)
        tail = abs(new.norm_sq() - out.norm_sq())
        if tail < 1e-12 * max(out.norm_sq(), 1e-30):
            return new
        grow += int(math.ceil(10.0 * radius ** (1.0 / 3.0)))
    raise RuntimeError("translation window growth failed the tail-energy check")


def energy(n: int, params: Params, sector: Sector) -> float:
    """Spectrum E_n = (1/2) epsilon (n + delta)^2 in units hbar omega = 1."""
    return 0.5 * params.epsilon * (n + sector.delta) ** 2


def ground_state(params: Params, sector: Sector):
    """Lowest level: n* = 0 for delta < 1/2, n* = -1 for delta > 1/2.

    Returns (n_star, energy, degenerate); at delta = 1/2 the two candidates
    coincide in energy and the flag is set (n_star reported as 0).
    """
    d = sector.delta
    e0 = energy(0, params, sector)
    e1 = energy(-1, params, sector)
    if abs(e0 - e1) < 1e-15 * max(abs(e0), 1.0):
        return 0, e0, True
    return (0, e0, False) if e0 < e1 else (-1, e1, False)


def delta_from_flux(charge: float, flux: float):
    """Sector and interference shift of a threaded flux line (hbar = 1):
    delta = frac(q Phi / 2 pi), Delta theta = q Phi."""
    shift = charge * flux
    delta = (shift / (2.0 * math.pi)) % 1.0
    return delta, shift


def time_reversal(state: CircleState) -> CircleState:
    """Complex conjugation: maps the sector to (1 - delta) mod 1.

    conj(e_{n,delta}) = e_{-n-1, 1-delta} for delta != 0 and e_{-n, 0} at
    delta = 0, so coefficients are conjugated and the window reversed with
    the matching index relabeling.
    """
    d = state.sector.delta
    conj = np.conj(state.coeffs[::-1])
    if d == 0.0:
        return CircleState(Sector(0.0), -state.n_hi, conj)
    new_sector = Sector(1.0 - d)
    return CircleState(new_sector, -state.n_hi - 1, conj)


def parity(state: CircleState) -> CircleState:
    """Reflection: eigenvalues (n + delta) -> -(n + delta), same relabeling
    as time reversal but without conjugation."""
    d = state.sector.delta
    rev = state.coeffs[::-1].copy()
    if d == 0.0:
        return CircleState(Sector(0.0), -state.n_hi, rev)
    return CircleState(Sector(1.0 - d), -state.n_hi - 1, rev)
