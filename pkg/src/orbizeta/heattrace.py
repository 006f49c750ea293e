"""Geometric side of the twisted trace formula and the Laplace-Mellin checks.

All functions here work by quadrature over the spectral parameter lambda and,
for :func:`lm_log_det_numeric`, over the heat time t.  They share no code with
the closed-form factors in :mod:`orbizeta.zetafactors`, which is the point.

Conventions: ``A = Delta - 1/4``; theta_geometric(t) is the geometric side of
Tr exp(-tA).  With x = s - 1/2 the Laplace variable is x^2 = s(s-1) + 1/4.

Two integrand rewrites keep everything finite and overflow free:

* identity kernel: lambda sinh(2 pi lambda)/(cosh(2 pi lambda) + cos(pi m))
  = lambda - lambda f(m, lambda)/2 on lambda >= 0, with
  f = 4 u (u + c)/((1 - u)^2 + 4 cos^2(pi m/2) u), u = exp(-2 pi lambda), c = cos(pi m);
* elliptic kernel: (cosh(2(pi - theta) lambda) + e^{i pi m} cosh(2 theta lambda))/(cosh 2 pi lambda + cos pi m)
  = (sinh(pi l) sinh((pi - 2 theta) l) + k e^{i pi m/2} cosh(2 theta l))/(sinh^2(pi l) + k^2),
  k = cos(pi m/2).

At m = 1 the elliptic kernel loses its double pole pair at lambda = 0 through a
pinch; the limit from m < 1 is recovered by a half-weight endpoint term in the
discrete sum (odd l with 1 <= l <= |m|, weight 1/2 at l = |m|).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, special

from . import specfun as sf
from .errors import FitError, QuadratureError
from .geodesics import LengthSpectrum
from .orbifold import OrbifoldSignature, RepresentationData, c_rho, elliptic_classes
from .specfun import EvalResult, Method, csum

__all__ = [
    "QuadratureSpec",
    "HeatCoefficients",
    "discrete_terms",
    "identity_kernel",
    "identity_f",
    "elliptic_kernel",
    "identity_term",
    "identity_alpha1",
    "elliptic_term",
    "hyperbolic_term",
    "theta_geometric",
    "alpha_coefficients",
    "identity_digamma_check",
    "elliptic_series_check",
    "hyperbolic_kbessel_check",
    "lm_log_det_numeric",
]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    decay_cutoff: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def halved(self) -> "QuadratureSpec":
        return QuadratureSpec(self.rel_tol / 2, self.abs_tol / 2, self.max_subdivisions, self.decay_cutoff)


DEFAULT_QUAD = QuadratureSpec()


def _quad(f: Callable[[float], float], a: float, b: float, spec: QuadratureSpec, points=None,
          what: str = "integral") -> tuple[float, float]:
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions, full_output=1)
    if points:
        pts = sorted(p for p in points if a < p < b)
        if pts:
            kw["points"] = pts
    val, err, info, *rest = integrate.quad(f, a, b, **kw)
    if not (math.isfinite(val) and math.isfinite(err)):
        raise QuadratureError(f"{what}: non-finite result")
    # QUADPACK flags roundoff even when the target is met; judge by the estimate
    budget = max(spec.abs_tol, spec.rel_tol * abs(val))
    if rest and err > 1e3 * budget:
        raise QuadratureError(f"{what}: error estimate {err:.3g} above tolerance ({rest[0].strip()[:60]})")
    return val, err


def _cutoff(rate: float, spec: QuadratureSpec, scale: float = 1.0) -> float:
    """lambda beyond which scale * exp(-rate lambda) < abs_tol * 1e-2."""
    if spec.decay_cutoff is not None:
        return spec.decay_cutoff
    target = spec.abs_tol * 1e-2
    return max(1.0, math.log(max(scale, 1e-300) / target) / rate + 1.0)


def discrete_terms(m) -> list[tuple[int, Fraction]]:
    """(l, weight) for odd l with 1 <= l <= |m|; the endpoint l = |m| carries weight 1/2."""
    m = Fraction(m)
    out = []
    ell = 1
    while ell <= abs(m):
        out.append((ell, Fraction(1, 2) if ell == abs(m) else Fraction(1)))
        ell += 2
    return out


def _sign(m: Fraction) -> int:
    return (m > 0) - (m < 0)


@lru_cache(maxsize=None)
def _cos_half(m: Fraction) -> float:
    # cos(pi m/2), exactly zero at m = +-1
    if abs(m) == 1:
        return 0.0
    return math.cos(math.pi * float(m) / 2)


# --------------------------------------------------------------------------
# kernels


def identity_f(m, lam: float) -> float:
    """f(m, lambda) = 4(1 + e^{2 pi l} cos pi m)/(e^{4 pi l} + 2 e^{2 pi l} cos pi m + 1), l >= 0."""
    m = Fraction(m)
    ch = _cos_half(m)
    c = 2 * ch * ch - 1
    u = math.exp(-2 * math.pi * lam)
    om = -math.expm1(-2 * math.pi * lam)
    if ch == 0.0:
        # m = +-1: c = -1 and f = -4u/(1 - u), without squaring a tiny 1 - u
        return -4 * u / om
    return 4 * u * (u + c) / (om * om + 4 * ch * ch * u)


def identity_kernel(m, lam: float) -> float:
    """lambda sinh(2 pi lambda)/(cosh(2 pi lambda) + cos(pi m)), evaluated directly."""
    m = Fraction(m)
    ch = _cos_half(m)
    a = abs(lam)
    if 2 * math.pi * a > 600:
        return a
    sh = math.sinh(math.pi * a)
    # cosh(2x) + cos(pi m) = 2 (sinh^2 x + cos^2(pi m/2))
    return lam * math.sinh(2 * math.pi * lam) / (2 * (sh * sh + ch * ch))


def _sinh_ratio(a: float, lam: float) -> float:
    # sinh(a lam) / sinh(pi lam) for lam > 0
    s = 1.0 if a >= 0 else -1.0
    a = abs(a)
    if a == 0:
        return 0.0
    return s * math.exp((a - math.pi) * lam) * math.expm1(-2 * a * lam) / math.expm1(-2 * math.pi * lam)


def _elliptic_parts(theta: float, m: Fraction, lam: float) -> tuple[float, float]:
    """(K1, K2) with kernel = K1 + e^{i pi m/2} K2, both real and even in lambda."""
    lam = abs(lam)
    k = _cos_half(m)
    if math.pi * lam < 1.0:
        sh = math.sinh(math.pi * lam)
        den = sh * sh + k * k
        if den == 0.0:
            return (math.pi - 2 * theta) / math.pi, 0.0
        if k == 0.0:
            return _sinh_ratio(math.pi - 2 * theta, lam) if lam > 0 else (math.pi - 2 * theta) / math.pi, 0.0
        return sh * math.sinh((math.pi - 2 * theta) * lam) / den, k * math.cosh(2 * theta * lam) / den
    # scaled: divide through by sinh^2(pi lam)
    e2 = -math.expm1(-2 * math.pi * lam)
    inv_sh2 = 4 * math.exp(-2 * math.pi * lam) / (e2 * e2)
    den = 1.0 + k * k * inv_sh2
    k1 = _sinh_ratio(math.pi - 2 * theta, lam) / den
    ch_over = 2 * (math.exp((2 * theta - 2 * math.pi) * lam) + math.exp((-2 * theta - 2 * math.pi) * lam)) / (e2 * e2)
    k2 = k * ch_over / den
    return k1, k2


def elliptic_kernel(theta: float, m, lam: float) -> complex:
    m = Fraction(m)
    k1, k2 = _elliptic_parts(theta, m, lam)
    return k1 + cmath.exp(0.5j * math.pi * float(m)) * k2


# --------------------------------------------------------------------------
# identity term


def _identity_decay_integral(t: float, m: Fraction, spec: QuadratureSpec, subtract: bool = False,
                             weight: Callable[[float], float] | None = None) -> tuple[float, float]:
    """int_0^inf g(lambda) lambda f(m, lambda) dlambda with g = exp(-t l^2), 1 - exp(-t l^2) or ``weight``."""
    if weight is None:
        if subtract:
            def weight(lam):
                return -math.expm1(-t * lam * lam)
        else:
            def weight(lam):
                return math.exp(-t * lam * lam)

    def integrand(lam):
        return weight(lam) * lam * identity_f(m, lam)

    hi = _cutoff(2 * math.pi, spec, scale=8.0)
    return _quad(integrand, 0.0, hi, spec, points=[1.0], what="identity integral")


def identity_alpha1(sig: OrbifoldSignature, rep: RepresentationData, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """t^0 coefficient of the identity term: -C_rho int_0^inf lambda f dlambda + discrete sum at t = 0."""
    m = rep.m
    val, _ = _identity_decay_integral(0.0, m, spec)
    disc = math.fsum(float(w * (abs(m) - ell)) for ell, w in discrete_terms(m))
    return c_rho(sig, rep) * (-val + disc)


def identity_term(t: float, sig: OrbifoldSignature, rep: RepresentationData,
                  spec: QuadratureSpec = DEFAULT_QUAD) -> EvalResult:
    """I(t) = C_rho [int_R e^{-t l^2} l sinh(2 pi l)/(cosh 2 pi l + cos pi m) dl + discrete sum].

    The integral is 1/t - int_0^inf e^{-t l^2} l f(m, l) dl; only the second,
    exponentially decaying piece is computed numerically.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    m = rep.m
    val, err = _identity_decay_integral(t, m, spec)
    disc = math.fsum(float(w * (abs(m) - ell)) * math.exp(float((abs(m) - ell) / 2) ** 2 * t)
                     for ell, w in discrete_terms(m))
    cr = c_rho(sig, rep)
    return EvalResult(cr * (1.0 / t - val + disc), cr * err, Method.QUADRATURE)


def _identity_subtracted(t: float, sig, rep, spec) -> tuple[float, float]:
    """I(t) - C_rho/t - alpha1_identity."""
    m = rep.m
    val, err = _identity_decay_integral(t, m, spec, subtract=True)
    disc = math.fsum(float(w * (abs(m) - ell)) * math.expm1(float((abs(m) - ell) / 2) ** 2 * t)
                     for ell, w in discrete_terms(m))
    cr = c_rho(sig, rep)
    return cr * (val + disc), cr * err


# --------------------------------------------------------------------------
# elliptic term


def _elliptic_integral(theta: float, m: Fraction, spec: QuadratureSpec,
                       weight: Callable[[float], float]) -> tuple[complex, float]:
    """int_R weight(l) K_theta(l) dl for an even weight."""
    rate = 2 * min(theta, math.pi - theta)
    hi = _cutoff(rate, spec, scale=4.0)
    k = _cos_half(m)
    pts = [1.0 / math.pi, 1.0, 4.0]
    if 0 < k < 0.3:
        pts += [k / math.pi, 4 * k / math.pi]
    v1, e1 = _quad(lambda x: weight(x) * _elliptic_parts(theta, m, x)[0], 0.0, hi, spec, pts, "elliptic integral")
    v2, e2 = _quad(lambda x: weight(x) * _elliptic_parts(theta, m, x)[1], 0.0, hi, spec, pts, "elliptic integral")
    ph = cmath.exp(0.5j * math.pi * float(m))
    return 2 * (v1 + ph * v2), 2 * (e1 + e2)


def _elliptic_sum(rep: RepresentationData, spec: QuadratureSpec, weight, discrete) -> tuple[complex, float]:
    m = rep.m
    sgn = _sign(m)
    terms, errs = [], []
    for j, k, nu, theta, tr in elliptic_classes(rep):
        coef = tr / (4 * nu * math.sin(theta))
        val, err = _elliptic_integral(theta, m, spec, weight)
        disc = 2j * sgn * csum(float(w) * cmath.exp(1j * sgn * float(abs(m) - ell) * theta) * discrete(float(abs(m) - ell) / 2)
                               for ell, w in discrete_terms(m))
        terms.append(coef * (val + disc))
        errs.append(abs(coef) * err)
    return csum(terms), math.fsum(errs)


def elliptic_term(t: float, sig: OrbifoldSignature, rep: RepresentationData,
                  spec: QuadratureSpec = DEFAULT_QUAD) -> EvalResult:
    """E(t) = sum over elliptic classes Tr/(4 nu sin theta) [int_R e^{-t l^2} K_theta dl + discrete].

    t = 0 is accepted and gives the t^0 heat coefficient of the elliptic part.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    rep.check_signature(sig)
    if t == 0:
        def weight(lam):
            return 1.0
    else:
        def weight(lam):
            return math.exp(-t * lam * lam)
    val, err = _elliptic_sum(rep, spec, weight, lambda a: math.exp(a * a * t))
    return EvalResult(val, err, Method.QUADRATURE)


def _elliptic_subtracted(t: float, rep, spec) -> tuple[complex, float]:
    """E(t) - E(0)."""
    return _elliptic_sum(rep, spec, lambda lam: math.expm1(-t * lam * lam), lambda a: math.expm1(a * a * t))


# --------------------------------------------------------------------------
# hyperbolic term


def hyperbolic_term(t: float, spectrum: LengthSpectrum, dim: int = 1) -> tuple[complex, float]:
    """H(t) = (1/(2 sqrt(4 pi t))) sum l Tr rho(gamma)/(n sinh(l/2)) e^{-l^2/4t}, with a tail estimate.

    The tail uses a prime-geodesic density e^l/l above l_max together with the
    eigenvalue growth exponent of the spectrum; it is a heuristic bound.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    pref = 1.0 / (2 * math.sqrt(4 * math.pi * t))
    terms = []
    for r in spectrum.records:
        ell = r.length
        terms.append(r.class_count * ell * r.trace(dim) / (r.n_gamma * math.sinh(ell / 2)) * math.exp(-ell * ell / (4 * t)))
    value = pref * csum(terms)
    big_l = max(spectrum.l_max, 1.0)
    c = spectrum.growth_exponent()
    slope = big_l / (2 * t) - c - 0.5
    if slope > 0:
        tail = pref * 2 * dim * math.exp((c + 0.5) * big_l - big_l * big_l / (4 * t)) / slope
    else:
        tail = math.inf
    return value, tail


def theta_geometric(t: float, sig: OrbifoldSignature, rep: RepresentationData, spectrum: LengthSpectrum | None = None,
                    spec: QuadratureSpec = DEFAULT_QUAD) -> EvalResult:
    """Identity + hyperbolic + elliptic contributions to Tr exp(-tA)."""
    spectrum = spectrum if spectrum is not None else LengthSpectrum()
    i = identity_term(t, sig, rep, spec)
    e = elliptic_term(t, sig, rep, spec)
    h, _ = hyperbolic_term(t, spectrum, rep.dim)
    return EvalResult(i.value + e.value + h, i.abs_err + e.abs_err, Method.QUADRATURE)


# --------------------------------------------------------------------------
# heat coefficients


@dataclass(frozen=True)
class HeatCoefficients:
    alpha0: float
    alpha1: float
    alpha0_reading: float
    alpha1_reading: float
    fit_residual: float

    def __iter__(self):
        return iter((self.alpha0, self.alpha1))


def alpha_coefficients(sig: OrbifoldSignature, rep: RepresentationData, spec: QuadratureSpec = DEFAULT_QUAD,
                       n_points: int = 25, tol: float = 1e-8) -> HeatCoefficients:
    """alpha_0, alpha_1 from a least-squares fit of theta - H on a small-t log-grid.

    Model: a0/t + a1 + a2 t + a3 t^2 + a4 t^3 on [t_max/100, t_max].  The
    elliptic kernels decay like exp(-2 theta lambda), so their t-moments grow
    quickly for small rotation angles; t_max = 0.1 (rate/pi)^4 with rate the
    slowest decay (capped at pi) keeps the truncated model accurate.  The
    readings alpha0 = C_rho and alpha1 = identity t^0 part + E(0) are returned
    alongside for comparison.
    """
    rate = min([math.pi] + [2 * min(theta, math.pi - theta) for *_, theta, _ in elliptic_classes(rep)])
    t_max = 0.1 * (rate / math.pi) ** 4
    ts = np.logspace(math.log10(t_max / 100), math.log10(t_max), n_points)
    ys = []
    for t in ts:
        i = identity_term(float(t), sig, rep, spec).value
        e = elliptic_term(float(t), sig, rep, spec).value
        ys.append((i + e).real)
    ys = np.array(ys)
    design = np.column_stack([1 / ts, np.ones_like(ts), ts, ts ** 2, ts ** 3])
    # scale rows by t so the 1/t column does not dominate the conditioning
    w = ts
    sol, *_ = np.linalg.lstsq(design * w[:, None], ys * w, rcond=None)
    resid = float(np.sqrt(np.mean((design @ sol - ys) ** 2)))
    if resid > tol:
        raise FitError(f"heat-coefficient fit residual {resid:.3g} above {tol:.3g}")
    a1_read = identity_alpha1(sig, rep, spec) + elliptic_term(0.0, sig, rep, spec).value.real
    return HeatCoefficients(float(sol[0]), float(sol[1]), c_rho(sig, rep), a1_read, resid)


# --------------------------------------------------------------------------
# resolvent-type identities


def identity_digamma_check(s: float, m, spec: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """(2 log(s-1/2) + int_0^inf l f/(l^2+(s-1/2)^2) dl - discrete, psi(s+m/2) + psi(s-m/2))."""
    m = Fraction(m)
    x = s - 0.5
    if not x > 0:
        raise ValueError("need s > 1/2")
    val, _ = _identity_decay_integral(0.0, m, spec, weight=lambda lam: 1.0 / (lam * lam + x * x))
    disc = math.fsum(float(w * (abs(m) - ell)) / (x * x - float((abs(m) - ell) / 2) ** 2)
                     for ell, w in discrete_terms(m))
    lhs = 2 * math.log(x) + val - disc
    h = float(m) / 2
    rhs = sf.digamma(s + h).value.real + sf.digamma(s - h).value.real
    return lhs, rhs


def _hejhal_series(s: float, theta: float, nu: int, m: float) -> complex:
    """sum_{j>=0} [e^{-2i theta (j - m/2 + 1/2)}/(j - m/2 + s) - e^{2i theta (j + m/2 + 1/2)}/(j + m/2 + s)].

    The phases are nu-periodic in j with vanishing mean, so grouping j = nu q + l
    turns each half into -(1/nu) sum_l phase_l psi((l + b)/nu).
    """
    b1, c1 = s - m / 2, -m / 2 + 0.5
    b2, c2 = s + m / 2, m / 2 + 0.5
    terms = []
    for ell in range(nu):
        terms.append(-cmath.exp(-2j * theta * (ell + c1)) * sf.digamma((ell + b1) / nu).value / nu)
        terms.append(cmath.exp(2j * theta * (ell + c2)) * sf.digamma((ell + b2) / nu).value / nu)
    return csum(terms)


def elliptic_series_check(s: float, sig: OrbifoldSignature, rep: RepresentationData,
                          spec: QuadratureSpec = DEFAULT_QUAD) -> tuple[complex, complex]:
    """(integral side, series side) of the elliptic resolvent identity.

    Both equal (1/(2s-1)) d/ds log Z_ell,0(s).
    """
    rep.check_signature(sig)
    x = s - 0.5
    m = rep.m
    integral, _ = _elliptic_sum(rep, spec, lambda lam: 1.0 / (lam * lam + x * x),
                                lambda a: 1.0 / (x * x - a * a))
    series = []
    for j, k, nu, theta, tr in elliptic_classes(rep):
        coef = tr / (4 * nu * math.sin(theta))
        series.append(coef * 1j / x * _hejhal_series(s, theta, nu, float(m)))
    return integral, csum(series)


def hyperbolic_kbessel_check(s: float, spectrum: LengthSpectrum, dim: int = 1) -> tuple[complex, complex]:
    """(t-transform of H via K_{-1/2}, sum over records of Tr e^{-(s-1/2) l}/(2 n sinh(l/2))).

    int_0^inf e^{-t x^2} H(t) dt/t is evaluated termwise from
    int_0^inf t^{v-1} e^{-a t - b/t} dt = 2 (b/a)^{v/2} K_v(2 sqrt(ab)) with v = -1/2,
    a = x^2, b = l^2/4, using scipy's modified Bessel function.  For a spectrum
    closed under powers up to l_max the second value is -log Z(s) up to the
    terms beyond l_max.
    """
    x = s - 0.5
    if not x > 0:
        raise ValueError("need s > 1/2")
    bessel, direct = [], []
    for r in spectrum.records:
        ell = r.length
        weight = r.class_count * ell * r.trace(dim) / (r.n_gamma * math.sinh(ell / 2))
        a, b = x * x, ell * ell / 4
        integral = 2 * (b / a) ** (-0.25) * special.kv(-0.5, 2 * math.sqrt(a * b))
        bessel.append(weight * integral / (2 * math.sqrt(4 * math.pi)))
        direct.append(r.class_count * r.trace(dim) * math.exp(-x * ell) / (2 * r.n_gamma * math.sinh(ell / 2)))
    return csum(bessel), csum(direct)


# --------------------------------------------------------------------------
# regularised log-determinant by quadrature


def lm_log_det_numeric(s: float, sig: OrbifoldSignature, rep: RepresentationData,
                       spectrum: LengthSpectrum | None = None, spec: QuadratureSpec = DEFAULT_QUAD,
                       outer: QuadratureSpec | None = None) -> EvalResult:
    """-log det(Delta + s(s-1)) from the subtracted heat-trace integral.

    -log det = int_0^inf e^{-t x^2} (theta(t) - a0/t - a1) dt/t
               + 2 a0 x^2 log x - a0 x^2 - 2 a1 log x,   x = s - 1/2.

    The t-range is split at 1.  On (0, 1] the subtraction is done inside the
    lambda-integrals (1 - e^{-t l^2} weights), on [1, inf) the raw geometric
    side is used.  a0 = C_rho; a1 is the t^0 reading of the same quadratures,
    so the subtraction is exact.
    """
    spectrum = spectrum if spectrum is not None else LengthSpectrum()
    outer = outer or QuadratureSpec(rel_tol=1e-10, abs_tol=1e-12, max_subdivisions=200)
    x = s - 0.5
    if not x > 0:
        raise ValueError("need s > 1/2")
    a = x * x
    dim = rep.dim
    a0 = c_rho(sig, rep)
    e0 = elliptic_term(0.0, sig, rep, spec).value
    a1 = identity_alpha1(sig, rep, spec) + e0.real
    inner_err = [0.0]

    def small_t(t, part):
        i, ie = _identity_subtracted(t, sig, rep, spec)
        e, ee = _elliptic_subtracted(t, rep, spec) if rep.elliptic_orders else (0j, 0.0)
        h, _ = hyperbolic_term(t, spectrum, dim)
        inner_err[0] = max(inner_err[0], ie + ee)
        v = (i + e + h) * math.exp(-t * a) / t
        return v.real if part == 0 else v.imag

    def large_t(t, part):
        th = theta_geometric(t, sig, rep, spectrum, spec).value
        v = (th - a0 / t - a1) * math.exp(-t * a) / t
        return v.real if part == 0 else v.imag

    lengths = sorted({r.length for r in spectrum.records})
    peaks = [ell / (2 * math.sqrt(a)) for ell in lengths]
    t_hi = 1.0 + 45.0 / a
    total, errs = [], []
    for part in (0, 1):
        if part == 1 and not rep.elliptic_orders and all(r.rho_eigenvalues is None for r in spectrum.records):
            break
        v1, e1 = _quad(lambda t: small_t(t, part), 0.0, 1.0, outer, peaks, "t-integral on (0,1]")
        v2, e2 = _quad(lambda t: large_t(t, part), 1.0, t_hi, outer, peaks, "t-integral on [1,inf)")
        total.append(v1 + v2)
        errs.append(e1 + e2)
    body = complex(total[0], total[1] if len(total) > 1 else 0.0)
    lx = math.log(x)
    value = body + 2 * a0 * a * lx - a0 * a - 2 * a1 * lx
    # truncation of the t-range and of the time-integrated inner errors
    tail_t = abs(a0 + abs(a1)) * math.exp(-t_hi * a)
    err = math.fsum(errs) + inner_err[0] * (1.0 + 1.0 / a) + tail_t
    return EvalResult(value, err, Method.QUADRATURE)
