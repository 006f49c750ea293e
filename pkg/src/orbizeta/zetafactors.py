"""Closed-form factors of the determinant identity

    det(Delta + s(s-1)) = Z(s) * Z_I(s) * Z_ell(s) * exp(C)

together with the truncated twisted Selberg zeta function, the s = 1 values,
the Yamaguchi family of representations and the predicted multiplicities of
the zeros and poles of Z.

Two constants are exposed.  :func:`torsion_factor` evaluates the displayed
closed formula ``dim chi (2 zeta'(-1) - log sqrt(2 pi)) + elliptic sum``.
:func:`determinant_constant` is the exponent that actually makes the constant
term of ``log(Z_I Z_ell e^C)`` vanish at large s, i.e. the constant entering
:func:`log_det`; it equals ``2 C_rho (2 zeta'(-1) - log sqrt(2 pi) - 1/4)``
plus the same elliptic sum.  The two differ by a topological term
``-dim chi (4 zeta'(-1) - log(2 pi) - 1/4)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import specfun as sf
from .errors import ConvergenceError, NonRealError, PoleError, ZeroError
from .geodesics import LengthSpectrum
from .orbifold import (OrbifoldSignature, RepresentationData, _trace_power, alpha_coeffs, c_m_exact, c_rho, elliptic_classes,
                       volume)
from .specfun import EPS, EvalResult, Method, csum

__all__ = [
    "DeterminantBreakdown",
    "MultiplicityResult",
    "log_z_identity",
    "log_z_elliptic",
    "log_z_elliptic_zero",
    "elliptic_zero_ratio",
    "torsion_factor",
    "torsion_elliptic_sum",
    "determinant_constant",
    "torsion_limit",
    "yamaguchi_rep",
    "yamaguchi_set",
    "yamaguchi_torsion_closed_form",
    "torsion_limit_table",
    "trig_sum_closed_form",
    "sigma_conv",
    "log_selberg_zeta",
    "selberg_log_derivative",
    "log_det",
    "det_at_one",
    "predicted_multiplicity",
    "log_z_identity_cyclic",
    "log_z_elliptic_cyclic",
    "cyclic_coefficient",
    "torsion_factor_cyclic",
    "torsion_factor_torsion_free",
    "alpha1_asymptotic",
    "constant_term_residual",
]


def _named(fn, arg, label):
    try:
        return fn(arg)
    except (PoleError, ZeroError) as exc:
        raise PoleError(f"{label} at s-argument {arg}: {exc}") from exc


def _combine(parts: Sequence[tuple[complex, EvalResult]]) -> tuple[complex, float]:
    """sum of coefficient * value, with propagated absolute error."""
    value = csum(c * r.value for c, r in parts)
    err = math.fsum(abs(c) * r.abs_err for c, r in parts) + 4 * EPS * math.fsum(abs(c * r.value) for c, r in parts)
    return value, err


# --------------------------------------------------------------------------
# identity and elliptic factors


def log_z_identity(s, sig: OrbifoldSignature, rep: RepresentationData) -> EvalResult:
    """log Z_I(s) = 2 C_rho [s log 2pi + s(1-s) + (1+m)/2 logG(s+m/2) + (1-m)/2 logG(s-m/2)
    - log G(s+m/2+1) - log G(s-m/2+1)]  (G Barnes, Gamma for logG)."""
    s = complex(s)
    m = float(rep.m)
    h = m / 2
    cr = c_rho(sig, rep)
    g_plus = _named(sf.log_gamma, s + h, "Z_I: Gamma(s+m/2) has a pole")
    g_minus = _named(sf.log_gamma, s - h, "Z_I: Gamma(s-m/2) has a pole")
    b_plus = _named(sf.log_barnes_g, s + h, "Z_I: G(s+m/2+1) vanishes")
    b_minus = _named(sf.log_barnes_g, s - h, "Z_I: G(s-m/2+1) vanishes")
    poly = s * math.log(2 * math.pi) + s * (1 - s)
    inner, err = _combine([((1 + m) / 2, g_plus), ((1 - m) / 2, g_minus), (-1.0, b_plus), (-1.0, b_minus)])
    value = 2 * cr * (poly + inner)
    err = 2 * cr * (err + 4 * EPS * abs(poly))
    return EvalResult(value, err, Method.RECURSION)


def _elliptic_log_gamma_terms(s: complex, rep: RepresentationData, weights) -> tuple[complex, float]:
    h = float(rep.m) / 2
    parts = []
    for j, nu in enumerate(rep.elliptic_orders):
        for ell in range(nu):
            c, ct = weights(j, ell)
            if c:
                parts.append((c, _named(sf.log_gamma, (s - h + ell) / nu, "Z_ell: Gamma((s-m/2+l)/nu) has a pole")))
            if ct:
                parts.append((ct, _named(sf.log_gamma, (s + h + ell) / nu, "Z_ell: Gamma((s+m/2+l)/nu) has a pole")))
    if not parts:
        return 0j, 0.0
    return _combine(parts)


def log_z_elliptic(s, sig: OrbifoldSignature, rep: RepresentationData) -> EvalResult:
    """log Z_ell(s) = sum_{j,l} C_m(j,l) logG((s-m/2+l)/nu_j) + C~_m(j,l) logG((s+m/2+l)/nu_j)."""
    rep.check_signature(sig)
    s = complex(s)

    def weights(j, ell):
        c, ct = c_m_exact(rep, j, ell)
        return float(c), float(ct)

    value, err = _elliptic_log_gamma_terms(s, rep, weights)
    return EvalResult(value, err, Method.RECURSION)


def log_z_elliptic_zero(s, sig: OrbifoldSignature, rep: RepresentationData) -> EvalResult:
    """The alpha-coefficient form Z_ell,0 of the elliptic factor."""
    rep.check_signature(sig)
    s = complex(s)
    h = float(rep.m) / 2
    n = rep.dim
    parts = []
    for j, nu in enumerate(rep.elliptic_orders):
        e = n * (1 - 1 / nu)
        lin = EvalResult(s * math.log(nu), 4 * EPS * abs(s * math.log(nu)), Method.SERIES)
        parts.append((e, lin))
        parts.append((-e / 2, _named(sf.log_gamma, s - h, "Z_ell,0: Gamma(s-m/2) has a pole")))
        parts.append((-e / 2, _named(sf.log_gamma, s + h, "Z_ell,0: Gamma(s+m/2) has a pole")))
    if rep.elliptic_orders:
        def weights(j, ell):
            a, at = alpha_coeffs(rep, j, ell)
            nu = rep.elliptic_orders[j]
            return a / nu, at / nu

        v2, e2 = _elliptic_log_gamma_terms(s, rep, weights)
        v1, e1 = _combine(parts)
        return EvalResult(v1 + v2, e1 + e2, Method.RECURSION)
    return EvalResult(0j, 0.0, Method.SERIES)


def elliptic_zero_ratio(sig: OrbifoldSignature, rep: RepresentationData) -> float:
    """log(Z_ell,0 / Z_ell) = sum_j dim(nu_j - 1)/(2 nu_j) log((2pi)^{nu_j - 1} nu_j)."""
    return math.fsum(rep.dim * (nu - 1) / (2 * nu) * ((nu - 1) * math.log(2 * math.pi) + math.log(nu))
                     for nu in sig.elliptic_orders)


# --------------------------------------------------------------------------
# constants


def torsion_elliptic_sum(rep: RepresentationData, imag_tol: float = 1e-9) -> float:
    """sum_j log(nu_j)/(2 nu_j) sum_k Tr(rho(gamma_j)^k) e^{i pi k m/nu_j} / sin^2(pi k/nu_j)."""
    m = float(rep.m)
    terms = []
    for j, k, nu, theta, tr in elliptic_classes(rep):
        terms.append(math.log(nu) / (2 * nu) * tr * cmath.exp(1j * k * math.pi * m / nu) / math.sin(theta) ** 2)
    total = csum(terms)
    if abs(total.imag) > imag_tol * max(1.0, abs(total.real)):
        raise NonRealError(f"elliptic torsion sum has imaginary part {total.imag:.3g}")
    return total.real


def torsion_factor(sig: OrbifoldSignature, rep: RepresentationData) -> float:
    """dim chi (2 zeta'(-1) - log sqrt(2pi)) + elliptic trace sum (closed formula)."""
    rep.check_signature(sig)
    _, z1 = sf.zeta_derivative_constants()
    base = rep.dim * float(sig.chi) * (2 * z1 - 0.5 * math.log(2 * math.pi))
    return base + torsion_elliptic_sum(rep)


def determinant_constant(sig: OrbifoldSignature, rep: RepresentationData, *,
                         zeta_prime_minus1: float | None = None) -> float:
    """Constant C in det = Z Z_I Z_ell e^C.

    2 C_rho (2 zeta'(-1) - log sqrt(2pi) - 1/4) + elliptic trace sum.  The optional
    override of zeta'(-1) exists for sensitivity studies.
    """
    rep.check_signature(sig)
    z1 = sf.zeta_derivative_constants()[1] if zeta_prime_minus1 is None else zeta_prime_minus1
    base = 2 * c_rho(sig, rep) * (2 * z1 - 0.5 * math.log(2 * math.pi) - 0.25)
    return base + torsion_elliptic_sum(rep)


def torsion_limit(sig: OrbifoldSignature) -> float:
    """chi (2 zeta'(-1) - log sqrt(2 pi)): the large-N limit of C/(2N) in the Yamaguchi family."""
    _, z1 = sf.zeta_derivative_constants()
    return float(sig.chi) * (2 * z1 - 0.5 * math.log(2 * math.pi))


def trig_sum_closed_form(nu: int, r: int) -> Fraction:
    """sum_{k=1}^{nu-1} e^{2 pi i r k/nu} / sin^2(pi k/nu) = (nu^2 - 6 nu r + 6 r^2 - 1)/3."""
    return Fraction(nu * nu - 6 * nu * r + 6 * r * r - 1, 3)


def yamaguchi_rep(sig: OrbifoldSignature, n_half: int) -> RepresentationData:
    """The 2N-dimensional family with m = 1 and
    Tr(rho(gamma_j)^k) e^{i pi k/nu_j} = sum_{p=-(N-1)}^{N} e^{2 pi i p k/nu_j}."""
    if n_half < 1:
        raise ValueError("N must be >= 1")
    angles = tuple(tuple((-p) % nu for p in range(-(n_half - 1), n_half + 1)) for nu in sig.elliptic_orders)
    return RepresentationData(2 * n_half, Fraction(1), sig.elliptic_orders, angles)


def yamaguchi_set(nu: int, n_half: int) -> list[int]:
    """Residues r in 0..nu-1 occurring floor(2N/nu)+1 times among -(N-1)..N."""
    q = 2 * n_half // nu
    extra = 2 * n_half - nu * q
    return sorted({(n_half - nu * q - i) % nu for i in range(extra)})


def yamaguchi_torsion_closed_form(sig: OrbifoldSignature, n_half: int) -> float:
    _, z1 = sf.zeta_derivative_constants()
    base = 2 * n_half * float(sig.chi) * (2 * z1 - 0.5 * math.log(2 * math.pi))
    ell = []
    for nu in sig.elliptic_orders:
        inner = sum((trig_sum_closed_form(nu, r) for r in yamaguchi_set(nu, n_half)), Fraction(0))
        ell.append(math.log(nu) / (2 * nu) * float(inner))
    return base + math.fsum(ell)


def torsion_limit_table(sig: OrbifoldSignature, n_list: Iterable[int]) -> list[tuple[int, float]]:
    """(N, C/(2N)) for the Yamaguchi family, C from the closed form."""
    return [(n, yamaguchi_torsion_closed_form(sig, n) / (2 * n)) for n in n_list]


# --------------------------------------------------------------------------
# truncated Selberg zeta


def sigma_conv(spectrum: LengthSpectrum | None, margin: float = 0.1) -> float:
    """1 + c + margin, c fitted from the stored eigenvalues."""
    c = spectrum.growth_exponent() if spectrum is not None else 0.0
    return 1.0 + c + margin


def _auto_k_max(s: complex, spectrum: LengthSpectrum, dim: int) -> int:
    k = 0
    for r in spectrum.primitives:
        big = max(abs(z) for z in r.eigenvalues(dim))
        need = (40.0 + math.log(max(big, 1e-300) * len(r.eigenvalues(dim)) * r.class_count)) / r.primitive_length - s.real
        k = max(k, int(math.ceil(need)))
    return min(max(k, 0), 100000)


def _zeta_terms(s: complex, spectrum: LengthSpectrum, k_max: int, dim: int):
    for r in spectrum.primitives:
        ell = r.primitive_length
        for lam in r.eigenvalues(dim):
            for k in range(k_max + 1):
                x = lam * cmath.exp(-(s + k) * ell)
                yield r.class_count, x


def _tails(s: complex, spectrum: LengthSpectrum, k_max: int, dim: int, sig_c: float) -> float:
    k_tail = []
    for r in spectrum.primitives:
        ell = r.primitive_length
        for lam in r.eigenvalues(dim):
            x = abs(lam) * math.exp(-(s.real + k_max + 1) * ell)
            if x < 1:
                k_tail.append(r.class_count * x / ((1 - math.exp(-ell)) * (1 - x)))
            else:
                k_tail.append(math.inf)
    # primes beyond l_max: density e^l / l, |contribution| <= dim e^{(c - sigma) l}
    c = spectrum.growth_exponent()
    gap = s.real - 1 - c
    big_l = max(spectrum.l_max, 1.0)
    geo = dim * math.exp(-gap * big_l) / (gap * big_l) if gap > 0 else math.inf
    return math.fsum(k_tail) + geo


def _log_selberg_raw(s: complex, spectrum: LengthSpectrum, k_max: int, dim: int) -> tuple[complex, float]:
    terms = []
    for count, x in _zeta_terms(s, spectrum, k_max, dim):
        if x == 1:
            raise ZeroError("Z(s) has a vanishing Euler factor")
        terms.append(count * cmath.log(1 - x) if abs(x) > 1e-3 else -count * _log1m_series(x))
    value = csum(terms)
    return value, 8 * EPS * math.fsum(abs(t) for t in terms)


def _log1m_series(x: complex) -> complex:
    # -log(1-x) for small x
    acc = 0j
    p = x
    for n in range(1, 12):
        acc += p / n
        p *= x
    return acc


def log_selberg_zeta(s, spectrum: LengthSpectrum, k_max: int | None = None, dim: int = 1,
                     check: bool = True) -> tuple[EvalResult, float]:
    """Truncated log Z(s) = sum_{prime, l<=L} sum_{k<=k_max} sum_p log(1 - lambda_p e^{-(s+k) l}).

    Returns the value and a truncation tail bound (k-tail plus a prime-geodesic
    density heuristic for lengths beyond l_max).
    """
    s = complex(s)
    sc = sigma_conv(spectrum)
    if check and s.real <= sc:
        raise ConvergenceError(f"Re(s) = {s.real:g} <= sigma_conv = {sc:g}")
    if k_max is None:
        k_max = _auto_k_max(s, spectrum, dim)
    value, err = _log_selberg_raw(s, spectrum, k_max, dim)
    tail = _tails(s, spectrum, k_max, dim, sc)
    return EvalResult(value, err, Method.SERIES, diagnostic=s.real <= sc), tail


def selberg_log_derivative(s, spectrum: LengthSpectrum, dim: int = 1) -> complex:
    """L(s) = sum_gamma l(gamma_0) Tr rho(gamma) e^{-(s-1/2) l} / (2 sinh(l/2)) over all stored records.

    (The n_Gamma in the denominator cancels against l(gamma) = n l(gamma_0).)
    """
    s = complex(s)
    terms = []
    for r in spectrum.records:
        ell = r.length
        terms.append(r.class_count * ell * r.trace(dim) * cmath.exp(-(s - 0.5) * ell)
                     / (2 * r.n_gamma * math.sinh(ell / 2)))
    return csum(terms)


# --------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class DeterminantBreakdown:
    s: complex
    log_z: complex
    log_z_identity: complex
    log_z_elliptic: complex
    torsion_factor: float
    log_det: complex
    truncation_tail_bound: float
    abs_err: float

    def as_dict(self) -> dict:
        return {
            "s": self.s, "log_z": self.log_z, "log_z_identity": self.log_z_identity,
            "log_z_elliptic": self.log_z_elliptic, "torsion_factor": self.torsion_factor,
            "log_det": self.log_det, "truncation_tail_bound": self.truncation_tail_bound,
            "abs_err": self.abs_err,
        }


def log_det(s, sig: OrbifoldSignature, rep: RepresentationData, spectrum: LengthSpectrum | None = None,
            k_max: int | None = None) -> DeterminantBreakdown:
    """log det(Delta + s(s-1)) assembled from its four parts."""
    rep.check_signature(sig)
    s = complex(s)
    spectrum = spectrum if spectrum is not None else LengthSpectrum()
    z, tail = log_selberg_zeta(s, spectrum, k_max, rep.dim)
    zi = log_z_identity(s, sig, rep)
    ze = log_z_elliptic(s, sig, rep)
    const = determinant_constant(sig, rep)
    total = z.value + zi.value + ze.value + const
    return DeterminantBreakdown(s, z.value, zi.value, ze.value, const, total, tail,
                                z.abs_err + zi.abs_err + ze.abs_err)


def _zeta_value(s: complex, spectrum: LengthSpectrum, k_max: int, dim: int) -> complex:
    try:
        v, _ = _log_selberg_raw(s, spectrum, k_max, dim)
    except ZeroError:
        return 0j
    return cmath.exp(v)


def _derivative(f, x: float, order: int, h: float = 1e-3, levels: int = 4) -> tuple[complex, float]:
    """order-th derivative by symmetric differences at h, h/2, ..., Richardson in h^2."""
    def diff(step):
        acc = []
        for i in range(order + 1):
            acc.append((-1) ** i * math.comb(order, i) * f(x + (order / 2 - i) * step))
        return csum(acc) / step ** order

    row = [diff(h / 2 ** j) for j in range(levels)]
    prev = row[-1]
    for lev in range(1, levels):
        f4 = 4.0 ** lev
        prev = row[-1]
        row = [(f4 * row[i + 1] - row[i]) / (f4 - 1) for i in range(len(row) - 1)]
    return row[-1], abs(row[-1] - prev)


def det_at_one(sig: OrbifoldSignature, rep: RepresentationData, spectrum: LengthSpectrum | None,
               m_rho: int, k_max: int = 200) -> EvalResult:
    """det (M_rho = 0) or det* (M_rho > 0) at s = 1.

    The truncated product only converges for sigma_conv < 1; otherwise the
    result is flagged ``diagnostic``.  The value returned is the determinant
    itself, not its logarithm.
    """
    if m_rho < 0:
        raise ValueError("M_rho must be >= 0")
    rep.check_signature(sig)
    spectrum = spectrum if spectrum is not None else LengthSpectrum()
    diag = sigma_conv(spectrum) >= 1.0
    rest = log_z_identity(1.0, sig, rep).value + log_z_elliptic(1.0, sig, rep).value + determinant_constant(sig, rep)
    if m_rho == 0:
        try:
            lz, _ = _log_selberg_raw(1 + 0j, spectrum, k_max, rep.dim)
        except ZeroError as exc:
            raise ConvergenceError("Z(1) vanishes although M_rho = 0") from exc
        return EvalResult(cmath.exp(lz + rest), 0.0, Method.SERIES, diagnostic=diag)
    d, err = _derivative(lambda x: _zeta_value(complex(x), spectrum, k_max, rep.dim), 1.0, m_rho)
    scale = cmath.exp(rest) / math.factorial(m_rho)
    return EvalResult(d * scale, err * abs(scale), Method.SERIES, diagnostic=diag)


# --------------------------------------------------------------------------
# multiplicities


@dataclass(frozen=True)
class MultiplicityResult:
    value: complex
    nearest: int
    defect: float

    @property
    def integral(self) -> bool:
        return self.defect <= 1e-6


def predicted_multiplicity(sig: OrbifoldSignature, rep: RepresentationData, n: int, sign: int) -> MultiplicityResult:
    """N_+-(m, n) = Vol dim/(4pi) (+-m + 2n + 1) +- i sum_ell Tr/(2 M sin theta) e^{+-2i theta (n +- m/2 + 1/2)}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    rep.check_signature(sig)
    m = float(rep.m)
    base = volume(sig) * rep.dim / (4 * math.pi) * (sign * m + 2 * n + 1)
    terms = [base]
    for j, k, nu, theta, tr in elliptic_classes(rep):
        terms.append(sign * 1j * tr / (2 * nu * math.sin(theta))
                     * cmath.exp(sign * 2j * theta * (n + sign * m / 2 + 0.5)))
    v = csum(terms)
    nearest = round(v.real)
    return MultiplicityResult(v, nearest, abs(v - nearest))


# --------------------------------------------------------------------------
# cyclic closed forms, evaluated independently of the general formulas


def log_z_identity_cyclic(s, sig: OrbifoldSignature, rep: RepresentationData) -> complex:
    """2 C_rho (s log 2pi + s(1-s) + log Gamma(s) - 2 log G(s+1))."""
    s = complex(s)
    cr = c_rho(sig, rep)
    return 2 * cr * (s * math.log(2 * math.pi) + s * (1 - s) + sf.log_gamma(s).value - 2 * sf.log_barnes_g(s).value)


def cyclic_coefficient(rep: RepresentationData, j: int, ell: int) -> complex:
    """(1/nu) sum_k Tr(rho(gamma_j)^k) sin(pi k (2l+1)/nu) / sin(pi k/nu)."""
    nu = rep.elliptic_orders[j]
    terms = [_trace_power(rep, j, k) * math.sin(math.pi * k * (2 * ell + 1) / nu) / math.sin(math.pi * k / nu)
             for k in range(1, nu)]
    return csum(terms) / nu


def log_z_elliptic_cyclic(s, sig: OrbifoldSignature, rep: RepresentationData) -> complex:
    """sum_{j,l} C_j(l) log Gamma((s+l)/nu_j), the product form for cyclic twists."""
    s = complex(s)
    terms = []
    for j, nu in enumerate(sig.elliptic_orders):
        for ell in range(nu):
            terms.append(cyclic_coefficient(rep, j, ell) * sf.log_gamma((s + ell) / nu).value)
    return csum(terms)


def torsion_factor_cyclic(sig: OrbifoldSignature, rep: RepresentationData) -> float:
    """dim chi (2 zeta'(-1) - log sqrt 2pi) + sum_j log nu/(2 nu) sum_k Tr / sin^2."""
    _, z1 = sf.zeta_derivative_constants()
    terms = [rep.dim * float(sig.chi) * (2 * z1 - 0.5 * math.log(2 * math.pi))]
    for j, k, nu, theta, tr in elliptic_classes(rep):
        terms.append(math.log(nu) / (2 * nu) * tr / math.sin(theta) ** 2)
    return csum(terms).real


def torsion_factor_torsion_free(sig: OrbifoldSignature, rep: RepresentationData) -> float:
    """2 C_rho (2 zeta'(-1) - log sqrt 2pi), the closed constant for surfaces without cone points."""
    _, z1 = sf.zeta_derivative_constants()
    return 2 * c_rho(sig, rep) * (2 * z1 - 0.5 * math.log(2 * math.pi))


# --------------------------------------------------------------------------
# large-s matching


def _bracket(s: complex, a0: float, a1: float) -> complex:
    x = s - 0.5
    lx = cmath.log(x)
    return 2 * a0 * x * x * lx - a0 * x * x - 2 * a1 * lx


def constant_term_residual(s, sig: OrbifoldSignature, rep: RepresentationData, alpha0: float, alpha1: float,
                           constant: float | None = None) -> complex:
    """log(Z_I Z_ell e^C)(s) + [2 a0 x^2 log x - a0 x^2 - 2 a1 log x], x = s - 1/2.

    Tends to zero as s grows when C is the determinant constant.
    """
    s = complex(s)
    c = determinant_constant(sig, rep) if constant is None else constant
    lhs = log_z_identity(s, sig, rep).value + log_z_elliptic(s, sig, rep).value + c
    return lhs + _bracket(s, alpha0, alpha1)


def alpha1_asymptotic(sig: OrbifoldSignature, rep: RepresentationData,
                      s_grid: Sequence[float] = (40.0, 60.0, 80.0, 120.0, 160.0, 240.0, 320.0)) -> float:
    """alpha_1 by matching the large-s expansion of log(Z_I Z_ell).

    R(s) = log Z_I + log Z_ell + 2 a0 x^2 log x - a0 x^2 is fitted by
    2 a1 log x + c0 + c1/x + c2/x^2 + c3/x^3 (least squares over s_grid).
    """
    a0 = c_rho(sig, rep)
    rows, rhs = [], []
    for s in s_grid:
        x = s - 0.5
        r = log_z_identity(s, sig, rep).value.real + log_z_elliptic(s, sig, rep).value.real
        r += 2 * a0 * x * x * math.log(x) - a0 * x * x
        rows.append([2 * math.log(x), 1.0, 1 / x, 1 / x ** 2, 1 / x ** 3])
        rhs.append(r)
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return float(sol[0])
