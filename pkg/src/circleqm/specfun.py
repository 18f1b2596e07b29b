"""Special-function kernel.

Jacobi theta functions (kinds 2, 3, 4) with automatic modular acceleration,
modified Bessel functions I_nu of real order, Bessel functions J_n of integer
order and complex argument, a Jacobi-elliptic evaluation suite, and the
I1/I0 ratio functions that control the circular minimal-uncertainty family.

Conventions: theta_3(zeta, q) = sum_n q^(n^2) exp(2 i n zeta) with nome
q = exp(i pi tau), Im(tau) > 0, and analogously for kinds 2 and 4.  All
fractional powers of the nome are taken through tau, so they are branch-free.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

__all__ = [
    "ThetaNome",
    "EllipticRecord",
    "GRatio",
    "theta",
    "theta_derivs",
    "bessel_i",
    "bessel_j",
    "elliptic_suite",
    "g_ratio",
]

# Switch to the modular-transformed series once |q| exceeds exp(-pi); both
# series then converge at the same (fast) rate at the crossover.
_TRANSFORM_CUT = math.exp(-math.pi)
# Truncation margin in natural-log units: terms below exp(-_LOG_MARGIN) times
# the largest term cannot move the sum at double precision.
_LOG_MARGIN = 40.0
_MAX_TERMS = 200_000


@dataclass(frozen=True)
class ThetaNome:
    """Nome q and half-period ratio tau, mutually consistent via q = exp(i pi tau).

    Requires |q| < 1 strictly (equivalently Im tau > 0).  Powers q^w are
    evaluated as exp(w * i*pi*tau), which fixes the branch of fractional
    powers once and for all.
    """

    q: complex
    tau: complex

    def __post_init__(self):
        q = complex(self.q)
        if not (math.isfinite(q.real) and math.isfinite(q.imag)):
            raise ValueError("nome must be finite")
        if abs(q) >= 1.0:
            raise ValueError(f"|q| must be < 1, got |q| = {abs(q)}")
        if abs(q) > 0.0:
            tau = complex(self.tau)
            if tau.imag <= 0.0:
                raise ValueError("Im(tau) must be positive")
            if abs(cmath.exp(1j * math.pi * tau) - q) > 1e-12 * max(abs(q), 1e-300):
                raise ValueError("q and tau are inconsistent")

    @classmethod
    def from_q(cls, q) -> "ThetaNome":
        q = complex(q)
        if q == 0:
            return cls(0j, complex(0.0, math.inf))
        return cls(q, cmath.log(q) / (1j * math.pi))

    @classmethod
    def from_tau(cls, tau) -> "ThetaNome":
        tau = complex(tau)
        return cls(cmath.exp(1j * math.pi * tau), tau)

    @property
    def log_q(self) -> complex:
        """Principal log of the nome, i*pi*tau."""
        if self.q == 0:
            return complex(-math.inf, 0.0)
        return 1j * math.pi * self.tau


def _check_kind(kind: int) -> None:
    if kind not in (2, 3, 4):
        raise ValueError(f"theta kind must be 2, 3 or 4, got {kind}")


def _n_cutoff(a: float, b: float) -> int:
    """Smallest n beyond which |q|^(n^2) exp(2 n b) is negligible.

    a = -Re(log q) > 0, b = max |Im zeta|.  Terms peak at n ~ b/a with log
    magnitude b^2/a; everything beyond b/a + sqrt(margin/a) is at least
    exp(-margin) below the peak.
    """
    n = int(math.ceil(b / a + math.sqrt(_LOG_MARGIN / a))) + 2
    if n > _MAX_TERMS:
        raise ValueError("theta series truncation exceeds term budget; "
                         "nome too close to the unit circle")
    return n


def _theta_sum(kind: int, zeta: np.ndarray, lq: complex, want_derivs: bool):
    """Direct series for theta and (optionally) its first two zeta-derivatives."""
    v = np.zeros(zeta.shape, dtype=complex)
    d1 = np.zeros(zeta.shape, dtype=complex) if want_derivs else None
    d2 = np.zeros(zeta.shape, dtype=complex) if want_derivs else None

    if lq.real == -math.inf:  # q = 0: only the leading term survives
        if kind in (3, 4):
            v += 1.0
        return v, d1, d2

    a = -lq.real
    b = float(np.max(np.abs(zeta.imag))) if zeta.size else 0.0
    nmax = _n_cutoff(a, b)

    if kind in (3, 4):
        v += 1.0
        chunk = max(1, 4_000_000 // max(zeta.size, 1))
        for start in range(1, nmax + 1, chunk):
            n = np.arange(start, min(start + chunk, nmax + 1), dtype=float)
            w = np.exp(n * n * lq)
            if kind == 4:
                w = w * np.where(n.astype(int) % 2 == 0, 1.0, -1.0)
            ep = np.exp(2j * np.multiply.outer(n, zeta))
            em = np.exp(-2j * np.multiply.outer(n, zeta))
            wb = w.reshape((-1,) + (1,) * zeta.ndim)
            v += np.sum(wb * (ep + em), axis=0)
            if want_derivs:
                nb = n.reshape((-1,) + (1,) * zeta.ndim)
                d1 += np.sum(wb * 2j * nb * (ep - em), axis=0)
                d2 += np.sum(wb * (-4.0 * nb * nb) * (ep + em), axis=0)
    else:  # kind == 2
        chunk = max(1, 4_000_000 // max(zeta.size, 1))
        for start in range(0, nmax + 1, chunk):
            n = np.arange(start, min(start + chunk, nmax + 1), dtype=float)
            m = n + 0.5
            c = 2.0 * n + 1.0
            w = np.exp(m * m * lq)
            ep = np.exp(1j * np.multiply.outer(c, zeta))
            em = np.exp(-1j * np.multiply.outer(c, zeta))
            wb = w.reshape((-1,) + (1,) * zeta.ndim)
            cb = c.reshape((-1,) + (1,) * zeta.ndim)
            v += np.sum(wb * (ep + em), axis=0)
            if want_derivs:
                d1 += np.sum(wb * 1j * cb * (ep - em), axis=0)
                d2 += np.sum(wb * (-cb * cb) * (ep + em), axis=0)
    return v, d1, d2


# Under tau -> -1/tau kind 3 maps to itself and kinds 2 and 4 swap.
_MODULAR_PARTNER = {2: 4, 3: 3, 4: 2}


def _theta_transformed(kind: int, zeta: np.ndarray, nome: ThetaNome,
                       want_derivs: bool):
    """Modular-transformed evaluation: small-nome series at -1/tau.

    theta_k(zeta|tau) = (-i tau)^(-1/2) exp(zeta^2/(i pi tau))
                        * theta_k'(zeta/tau | -1/tau).
    """
    tau = nome.tau
    tau2 = -1.0 / tau
    lq2 = 1j * math.pi * tau2
    w = zeta / tau
    g, g1, g2 = _theta_sum(_MODULAR_PARTNER[kind], w, lq2, want_derivs)
    pref = (-1j * tau) ** (-0.5)
    c = 1.0 / (1j * math.pi * tau)
    envelope = pref * np.exp(c * zeta * zeta)
    v = envelope * g
    if not want_derivs:
        return v, None, None
    d1 = envelope * (2.0 * c * zeta * g + g1 / tau)
    d2 = envelope * ((2.0 * c + 4.0 * c * c * zeta * zeta) * g
                     + 4.0 * c * zeta * g1 / tau + g2 / tau / tau)
    return v, d1, d2


def _theta_dispatch(kind: int, zeta, nome: ThetaNome, method: str,
                    want_derivs: bool):
    _check_kind(kind)
    if not isinstance(nome, ThetaNome):
        nome = ThetaNome.from_q(nome)
    scalar = np.isscalar(zeta) or (isinstance(zeta, np.ndarray) and zeta.ndim == 0)
    z = np.asarray(zeta, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise ValueError("zeta must be finite")

    if method == "auto":
        use_transform = False
        if nome.q != 0 and abs(nome.q) > _TRANSFORM_CUT:
            q2 = cmath.exp(1j * math.pi * (-1.0 / nome.tau))
            use_transform = abs(q2) < abs(nome.q)
        method = "transform" if use_transform else "direct"
    if method == "transform":
        if nome.q == 0:
            raise ValueError("modular transform undefined at q = 0")
        v, d1, d2 = _theta_transformed(kind, z, nome, want_derivs)
    elif method == "direct":
        v, d1, d2 = _theta_sum(kind, z, nome.log_q, want_derivs)
    else:
        raise ValueError(f"unknown method {method!r}")

    if scalar:
        v = complex(v)
        if want_derivs:
            return v, complex(d1), complex(d2)
        return v
    if want_derivs:
        return v, d1, d2
    return v


def theta(kind: int, zeta, nome, method: str = "auto"):
    """Jacobi theta function of the given kind (2, 3 or 4).

    Parameters
    ----------
    kind : int
        2, 3 or 4.
    zeta : complex or ndarray
        Argument(s); must be finite.
    nome : ThetaNome or complex
        Nome with |q| < 1; bare complex values are wrapped via the principal
        log.
    method : {"auto", "direct", "transform"}
        "auto" sums the series directly for small |q| and switches to the
        tau -> -1/tau transformed series once |q| > exp(-pi) (when that
        actually shrinks the nome).  The two routes agree to ~1e-15 relative
        and are exposed separately so they can be cross-checked.

    Returns
    -------
    complex or ndarray
    """
    return _theta_dispatch(kind, zeta, nome, method, want_derivs=False)


def theta_derivs(kind: int, zeta, nome, method: str = "auto"):
    """Theta value and first two derivatives with respect to zeta.

    Term-wise differentiated series (direct route) or the chain rule applied
    to the modular-transformed representation.  Returns (value, d/dzeta,
    d2/dzeta2).
    """
    return _theta_dispatch(kind, zeta, nome, method, want_derivs=True)


# ---------------------------------------------------------------------------
# Modified Bessel I_nu, real order


def _iv_series(nu: float, x: float) -> float:
    """Ascending series for I_nu(x), x > 0, nu not a negative integer."""
    t = math.exp(nu * math.log(0.5 * x)) / math.gamma(nu + 1.0)
    s = t
    x2 = 0.25 * x * x
    for k in range(1, 400):
        t *= x2 / (k * (nu + k))
        s += t
        if abs(t) < 1e-17 * abs(s):
            break
    return s


def _iv_asym_factor(nu: float, x: float) -> float:
    """S(nu, x) in I_nu(x) ~ exp(x)/sqrt(2 pi x) * S, truncated at the
    smallest term."""
    mu = 4.0 * nu * nu
    t = 1.0
    s = 1.0
    prev = math.inf
    for k in range(1, 60):
        t *= -(mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(t) >= prev:
            break
        s += t
        prev = abs(t)
        if abs(t) < 1e-17 * abs(s):
            break
    return s


def bessel_i(nu: float, x: float):
    """Modified Bessel function I_nu(x), real order, real argument.

    Ascending series for |x| <= 20, asymptotic expansion beyond.  For
    negative x: integer orders use the parity relation I_n(-x) =
    (-1)^n I_n(x); fractional orders return the principal-branch
    continuation exp(i pi nu) I_nu(|x|), which is complex -- a nonzero
    imaginary part is the caller's signal that a branch choice was made.
    """
    nu = float(nu)
    x = float(x)
    if not (math.isfinite(nu) and math.isfinite(x)):
        raise ValueError("bessel_i requires finite order and argument")
    if nu < 0 and nu == int(nu):
        nu = -nu  # I_{-n} = I_n
    if x < 0:
        base = bessel_i(nu, -x)
        if nu == int(nu):
            return base if int(nu) % 2 == 0 else -base
        return cmath.exp(1j * math.pi * nu) * base
    if x == 0.0:
        if nu == 0:
            return 1.0
        if nu > 0:
            return 0.0
        return math.inf
    if x <= 20.0:
        return _iv_series(nu, x)
    return math.exp(x) / math.sqrt(2.0 * math.pi * x) * _iv_asym_factor(nu, x)


# ---------------------------------------------------------------------------
# Bessel J_n, integer order, complex argument


def _jn_series(n: int, z: complex) -> complex:
    # seed in log space: (z/2)^n / n! overflows the factorial past n ~ 170
    t = cmath.exp(n * cmath.log(0.5 * z) - math.lgamma(n + 1.0))
    s = t
    z2 = 0.25 * z * z
    for k in range(1, 400):
        t *= -z2 / (k * (n + k))
        s += t
        if abs(t) < 1e-17 * abs(s):
            break
    return s


def _jn_miller(n: int, z: complex) -> complex:
    """Backward recurrence with region-adapted normalization.

    On the real axis the even-order identity J_0 + 2 sum J_{2k} = 1 is well
    conditioned; off axis its terms grow like exp(|Im z|) while the sum stays
    at 1, so there we normalize instead by J_0 + 2 sum (-+i)^k J_k =
    exp(-+iz), whose target grows with the terms.  The start-order cushion
    scales like |z|^(1/3) (the width of the turning region): a flat +15
    already loses ~1e-3 by |z| ~ 80.
    """
    az = abs(z)
    nstart = (n + int(math.ceil(az)) + 15
              + int(math.ceil(8.0 * max(az, 1.0) ** (1.0 / 3.0))))
    yp = 0j                       # y_{k+1}
    y = complex(1e-160, 0.0)      # y_k, arbitrary seed
    target = y if nstart == n else None
    use_exp_norm = z.imag != 0.0
    sgn = 1.0 if z.imag >= 0 else -1.0
    w = complex(0.0, -sgn)        # sum weights w^k, w = -i for Im z > 0
    wk = w ** nstart
    norm_sum = 0j
    if nstart > 0:
        norm_sum = y * wk if use_exp_norm else (y if nstart % 2 == 0 else 0j)
    two_over_z = 2.0 / z
    for k in range(nstart, 0, -1):
        ym = k * two_over_z * y - yp  # y_{k-1}
        yp, y = y, ym
        idx = k - 1
        wk = wk / w
        if idx == n:
            target = y
        if idx > 0:
            if use_exp_norm:
                norm_sum += y * wk
            elif idx % 2 == 0:
                norm_sum += y
        if abs(y.real) > 1e250 or abs(y.imag) > 1e250:
            y *= 1e-250
            yp *= 1e-250
            norm_sum *= 1e-250
            if target is not None:
                target *= 1e-250
    norm = y + 2.0 * norm_sum
    if use_exp_norm:
        return target * cmath.exp(-sgn * 1j * z) / norm
    return target / norm


def bessel_j(n: int, z) -> complex:
    """Bessel function J_n(z), integer order, complex argument.

    Ascending series for |z| <= 5, Miller backward recurrence (start order
    |n| + ceil(|z|) + 15, normalized by the even-order sum identity extended
    to complex z) beyond.
    """
    if n != int(n):
        raise ValueError("bessel_j takes an integer order")
    n = int(n)
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("bessel_j requires a finite argument")
    if n < 0:
        val = bessel_j(-n, z)
        return -val if n % 2 else val
    if z == 0:
        return complex(1.0) if n == 0 else 0j
    if abs(z) <= 5.0:
        return _jn_series(n, z)
    return _jn_miller(n, z)


# ---------------------------------------------------------------------------
# Elliptic suite


@dataclass(frozen=True)
class EllipticRecord:
    """Jacobi elliptic data attached to a real nome and real argument.

    sn, cn, dn are evaluated by scipy's Landen/AGM machinery and are therefore
    independent of the theta series above -- the theta-ratio identities
    relating the two routes make genuine cross-checks.  Z is Jacobi's Zeta,
    E_u the incomplete second integral int_0^u dn^2, K and E the complete
    integrals, u = (2K/pi) * zeta.
    """

    sn: float
    cn: float
    dn: float
    Z: float
    k: float
    kprime: float
    K: float
    E: float
    u: float


def elliptic_suite(zeta: float, nome: ThetaNome) -> EllipticRecord:
    """Evaluate the elliptic-function record for real zeta and real nome.

    The moduli come from the theta null values, k = theta2^2/theta3^2 (0, q)
    and k' = theta4^2/theta3^2 (0, q), with 2K/pi = theta3^2(0, q); E(u, k)
    is computed by adaptive quadrature of dn^2.
    """
    if not isinstance(nome, ThetaNome):
        nome = ThetaNome.from_q(nome)
    q = nome.q
    if abs(q.imag) > 1e-14 or not (0.0 < q.real < 1.0):
        raise ValueError("elliptic_suite requires a real nome in (0, 1)")
    u_zeta = float(zeta)

    t2 = theta(2, 0.0, nome).real
    t3 = theta(3, 0.0, nome).real
    t4 = theta(4, 0.0, nome).real
    k = (t2 / t3) ** 2
    kprime = (t4 / t3) ** 2
    K = 0.5 * math.pi * t3 * t3
    u = t3 * t3 * u_zeta
    m = k * k

    sn, cn, dn, _ = special.ellipj(u, m)
    E = float(special.ellipe(m))
    if u == 0.0:
        E_u = 0.0
    else:
        E_u, _err = integrate.quad(lambda v: special.ellipj(v, m)[2] ** 2,
                                   0.0, u, epsabs=1e-12, epsrel=1e-12,
                                   limit=200)
    Z = E_u - u * E / K
    return EllipticRecord(sn=float(sn), cn=float(cn), dn=float(dn), Z=Z,
                          k=k, kprime=kprime, K=K, E=E, u=u)


# ---------------------------------------------------------------------------
# I1/I0 ratio functions


@dataclass(frozen=True)
class GRatio:
    """r1 = I1(x)/I0(x), r2 = I1(x)/(x I0(x)), g = 1 - r1^2 - r2."""

    r1: float
    r2: float
    g: float


def g_ratio(x: float) -> GRatio:
    """Ratio functions of the modified Bessel pair I1, I0.

    A small-|x| series keeps r2 finite (and equal to 1/2) at x = 0; for
    |x| > 20 the shared exponential prefactor cancels so the ratios never
    overflow.  r2 lies in (0, 1/2] for every finite x and g is even with
    g(x) -> 1/(2 x^2) as |x| -> infinity.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("g_ratio requires a finite argument")
    ax = abs(x)
    if ax < 0.1:
        x2 = 0.25 * x * x
        t0, i0 = 1.0, 1.0
        t1, i1x = 0.5, 0.5  # I1(x)/x series
        for k in range(1, 30):
            t0 *= x2 / (k * k)
            i0 += t0
            t1 *= x2 / (k * (k + 1))
            i1x += t1
            if t0 < 1e-18 and t1 < 1e-18:
                break
        r2 = i1x / i0
        r1 = x * r2
    elif ax <= 20.0:
        r1 = math.copysign(_iv_series(1.0, ax) / _iv_series(0.0, ax), x)
        r2 = r1 / x
    else:
        r1 = math.copysign(
            _iv_asym_factor(1.0, ax) / _iv_asym_factor(0.0, ax), x)
        r2 = r1 / x
    return GRatio(r1=r1, r2=r2, g=1.0 - r1 * r1 - r2)
