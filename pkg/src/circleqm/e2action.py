"""Classical Euclidean-group action on the cylinder phase space.

Group elements (alpha, t = a + i b) compose by rotating the translation
part; they act on points s = (phi, p_phi) symplectically and transitively.
Covering modes distinguish the base group (alpha mod 2 pi), the q-fold
covers (mod 2 pi q) and the universal cover (no reduction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "GroupElement",
    "PhaseSpacePoint",
    "compose",
    "identity",
    "act",
    "solve_transporter",
    "symplectic_residual",
    "induced_fields",
    "poisson_bracket",
]

_MODES = ("base", "cover", "universal")


def _reduce_alpha(alpha: float, mode: str, cover_q: Optional[int]) -> float:
    if mode == "base":
        return alpha % (2.0 * math.pi)
    if mode == "cover":
        if not cover_q or cover_q < 1:
            raise ValueError("cover mode needs a positive covering order")
        return alpha % (2.0 * math.pi * cover_q)
    if mode == "universal":
        return alpha
    raise ValueError(f"covering mode must be one of {_MODES}")


@dataclass(frozen=True)
class GroupElement:
    """Rotation parameter alpha (reduced per covering mode) and complex
    translation t = a + i b."""

    alpha: float
    t: complex
    mode: str = "base"
    cover_q: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha",
                           _reduce_alpha(float(self.alpha), self.mode,
                                         self.cover_q))
        object.__setattr__(self, "t", complex(self.t))

    @property
    def a(self) -> float:
        return self.t.real

    @property
    def b(self) -> float:
        return self.t.imag


def identity(mode: str = "base", cover_q: Optional[int] = None) -> GroupElement:
    return GroupElement(0.0, 0j, mode, cover_q)


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Point (phi mod 2 pi, p_phi) of the cylinder."""

    phi: float
    p_phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))
        object.__setattr__(self, "p_phi", float(self.p_phi))


def compose(g2: GroupElement, g1: GroupElement) -> GroupElement:
    """g2 after g1: (alpha1 + alpha2, t2 + e^{i alpha2} t1)."""
    if g2.mode != g1.mode or g2.cover_q != g1.cover_q:
        raise ValueError("covering modes must match")
    alpha = g1.alpha + g2.alpha
    t = g2.t + np.exp(1j * g2.alpha) * g1.t
    return GroupElement(alpha, complex(t), g2.mode, g2.cover_q)


def act(g: GroupElement, s: PhaseSpacePoint) -> PhaseSpacePoint:
    """(phi, p) -> (phi + alpha mod 2 pi, p + a sin(phi+alpha) - b cos(phi+alpha))."""
    phi = s.phi + g.alpha
    p = s.p_phi + g.a * math.sin(phi) - g.b * math.cos(phi)
    return PhaseSpacePoint(phi, p)


def solve_transporter(s1: PhaseSpacePoint, s2: PhaseSpacePoint) -> GroupElement:
    """A group element carrying s1 to s2 (transitivity witness).

    alpha = phi2 - phi1; the momentum offset is absorbed by a alone when
    |sin phi2| is away from zero, by b alone otherwise -- the two branches
    cover the whole circle.
    """
    alpha = (s2.phi - s1.phi) % (2.0 * math.pi)
    dp = s2.p_phi - s1.p_phi
    sin2 = math.sin(s2.phi)
    if abs(sin2) > 1e-8:
        return GroupElement(alpha, complex(dp / sin2, 0.0))
    return GroupElement(alpha, complex(0.0, -dp / math.cos(s2.phi)))


def symplectic_residual(g: GroupElement, s: PhaseSpacePoint,
                        step: float = 1e-6) -> float:
    """|det J - 1| of the action's Jacobian at s, by central differences."""
    def image(phi, p):
        # unwrapped copy of `act`: same derivatives, no mod-2pi rounding
        shifted = phi + g.alpha
        return shifted, p + g.a * math.sin(shifted) - g.b * math.cos(shifted)

    phi, p = s.phi, s.p_phi
    # evaluate at exactly representable offsets so the denominators are exact
    phi_p, phi_m = phi + step, phi - step
    p_p, p_m = p + step, p - step
    fpp, gpp = image(phi_p, p)
    fpm, gpm = image(phi_m, p)
    dphi_dphi = (fpp - fpm) / (phi_p - phi_m)
    dp_dphi = (gpp - gpm) / (phi_p - phi_m)
    f2p, g2p = image(phi, p_p)
    f2m, g2m = image(phi, p_m)
    dphi_dp = (f2p - f2m) / (p_p - p_m)
    dp_dp = (g2p - g2m) / (p_p - p_m)
    det = dphi_dphi * dp_dp - dphi_dp * dp_dphi
    return abs(det - 1.0)


def induced_fields(s: PhaseSpacePoint, step: float = 1e-6):
    """Vector fields induced at s by the three one-parameter subgroups.

    Convention: the field pulls functions back along exp(-A gamma), so each
    component is minus the derivative of the orbit.  Returns a dict with
    entries "X1", "X2", "L", each a (d phi, d p) tuple; analytically these
    are (0, -sin phi), (0, cos phi) and (-1, 0), the Hamiltonian fields of
    cos phi, sin phi and p_phi.
    """
    out = {}
    for name, make in (("X1", lambda g: GroupElement(0.0, complex(g, 0.0))),
                       ("X2", lambda g: GroupElement(0.0, complex(0.0, g))),
                       ("L", lambda g: GroupElement(g, 0j, "universal"))):
        plus = act(make(step), s)
        minus = act(make(-step), s)
        dphi = (((plus.phi - minus.phi) + math.pi) % (2.0 * math.pi)
                - math.pi) / (2 * step)
        dp = (plus.p_phi - minus.p_phi) / (2 * step)
        out[name] = (-dphi, -dp)
    return out


def poisson_bracket(f, g, s: PhaseSpacePoint, step: float = 1e-5) -> float:
    """{f, g} = d_phi f d_p g - d_p f d_phi g by central differences."""
    phi, p = s.phi, s.p_phi
    df_dphi = (f(phi + step, p) - f(phi - step, p)) / (2 * step)
    df_dp = (f(phi, p + step) - f(phi, p - step)) / (2 * step)
    dg_dphi = (g(phi + step, p) - g(phi - step, p)) / (2 * step)
    dg_dp = (g(phi, p + step) - g(phi, p - step)) / (2 * step)
    return df_dphi * dg_dp - df_dp * dg_dphi
