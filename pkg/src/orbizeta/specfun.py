"""Complex special functions: log-gamma, polygamma, Barnes G, Bernoulli numbers.

Everything runs in binary64.  The production paths shift the argument with the
functional equation until an asymptotic series is accurate to a few ulps, and
sum the pieces with :func:`math.fsum` on real and imaginary parts separately.

``log_barnes_g(s)`` follows the convention ``log G(s + 1)`` throughout, so
that ``log_barnes_g(0) == log_barnes_g(1) == 0`` and the zeros sit at
``s = -1, -2, ...``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError, PoleError, ZeroError

__all__ = [
    "Method",
    "EvalResult",
    "csum",
    "bernoulli",
    "bernoulli_even",
    "zeta_derivative_constants",
    "EULER_GAMMA",
    "log_gamma",
    "digamma",
    "trigamma",
    "log_barnes_g_product",
    "log_barnes_g_product_extrapolated",
    "log_barnes_g_asymptotic",
    "log_barnes_g",
]

EPS = 2.220446049250313e-16
EULER_GAMMA = 0.57721566490153286061
HALF_LOG_2PI = 0.91893853320467274178

# zeta'(0) = -log sqrt(2 pi); zeta'(-1) = 1/12 - log A (Glaisher)
ZETA_PRIME_0 = -HALF_LOG_2PI
ZETA_PRIME_MINUS1 = -0.16542114370045092921

# argument threshold for the Stirling-type series
_SHIFT = 15.0
_N_STIRLING = 11


class Method(str, Enum):
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"
    RECURSION = "recursion"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class EvalResult:
    """A complex value with an absolute error estimate and the method used."""

    value: complex
    abs_err: float
    method: Method
    diagnostic: bool = False

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ArithmeticError(f"non-finite value {v!r} from {self.method.value}")
        if not self.abs_err >= 0:
            raise ValueError("abs_err must be non-negative")
        object.__setattr__(self, "value", v)

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag


def csum(terms: Iterable[complex]) -> complex:
    """Correctly rounded sum of complex terms (fsum on each component)."""
    re, im = [], []
    for t in terms:
        t = complex(t)
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))


def _abs_sum(terms: Iterable[complex]) -> float:
    return math.fsum(abs(t) for t in terms)


# --------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # sum_{k=0}^{j} C(j+1, k) B_k = 0, with B_1 = -1/2
    table = [Fraction(1)]
    for j in range(1, n + 1):
        acc = Fraction(0)
        c = 1  # C(j+1, 0)
        for k in range(j):
            acc += c * table[k]
            c = c * (j + 1 - k) // (k + 1)
        table.append(-acc / (j + 1))
    return tuple(table)


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _bernoulli_table(max(n, 32))[n]


def bernoulli_even(k: int) -> Fraction:
    """Return B_{2k+2} exactly; this is the coefficient family of the Barnes series."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return bernoulli(2 * k + 2)


_B2K = [float(bernoulli(2 * k)) for k in range(0, 2 * _N_STIRLING + 4)]


def zeta_derivative_constants() -> tuple[float, float]:
    """(zeta'(0), zeta'(-1)) as floats."""
    return ZETA_PRIME_0, ZETA_PRIME_MINUS1


# --------------------------------------------------------------------------
# Gamma family


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _shift_up(z: complex, threshold: float = _SHIFT) -> tuple[complex, list[complex]]:
    shifted = []
    w = z
    while w.real < threshold:
        shifted.append(w)
        w += 1.0
    return w, shifted


def log_gamma(z) -> EvalResult:
    """Principal log Gamma.

    The upward recursion accumulates ``log(z + k)`` term by term, which keeps
    the imaginary part continuous off the negative real axis.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"log_gamma: pole at z={z.real:g}")
    w, shifted = _shift_up(z)
    lw = cmath.log(w)
    parts = [(w - 0.5) * lw, -w, HALF_LOG_2PI]
    inv = 1.0 / w
    inv2 = inv * inv
    p = inv
    for k in range(1, _N_STIRLING + 1):
        parts.append(_B2K[k] / (2 * k * (2 * k - 1)) * p)
        p *= inv2
    tail = abs(_B2K[_N_STIRLING + 1] / ((2 * _N_STIRLING + 2) * (2 * _N_STIRLING + 1)) * p)
    parts.extend(-cmath.log(x) for x in shifted)
    value = csum(parts)
    err = tail + 4 * EPS * _abs_sum(parts)
    method = Method.RECURSION if shifted else Method.ASYMPTOTIC
    return EvalResult(value, err, method)


def digamma(z) -> EvalResult:
    """psi(z) = Gamma'(z)/Gamma(z)."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"digamma: pole at z={z.real:g}")
    w, shifted = _shift_up(z)
    inv = 1.0 / w
    inv2 = inv * inv
    parts = [cmath.log(w), -0.5 * inv]
    p = inv2
    for k in range(1, _N_STIRLING + 1):
        parts.append(-_B2K[k] / (2 * k) * p)
        p *= inv2
    tail = abs(_B2K[_N_STIRLING + 1] / (2 * _N_STIRLING + 2) * p)
    parts.extend(-1.0 / x for x in shifted)
    value = csum(parts)
    err = tail + 4 * EPS * _abs_sum(parts)
    return EvalResult(value, err, Method.RECURSION if shifted else Method.ASYMPTOTIC)


def trigamma(z) -> EvalResult:
    """psi'(z) = sum_{k>=0} (z+k)^-2."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"trigamma: pole at z={z.real:g}")
    w, shifted = _shift_up(z)
    inv = 1.0 / w
    inv2 = inv * inv
    parts = [inv, 0.5 * inv2]
    p = inv2 * inv
    for k in range(1, _N_STIRLING + 1):
        parts.append(_B2K[k] * p)
        p *= inv2
    tail = abs(_B2K[_N_STIRLING + 1] * p)
    parts.extend(1.0 / (x * x) for x in shifted)
    value = csum(parts)
    err = tail + 4 * EPS * _abs_sum(parts)
    return EvalResult(value, err, Method.RECURSION if shifted else Method.ASYMPTOTIC)


# --------------------------------------------------------------------------
# Barnes G


def _barnes_zero_check(s: complex, name: str) -> None:
    if s.imag == 0.0 and s.real <= -1.0 and s.real == math.floor(s.real):
        raise ZeroError(f"{name}: G(s+1) vanishes at s={s.real:g}")


def _product_terms(s: complex, n: np.ndarray) -> np.ndarray:
    # n log(1 + s/n) - s + s^2/(2n); a Taylor tail avoids cancellation for n >> |s|
    x = s / n
    out = np.empty(n.shape, dtype=complex)
    small = np.abs(x) < 0.02
    xs = x[small]
    acc = np.zeros(xs.shape, dtype=complex)
    for k in range(14, 2, -1):
        acc = acc * xs + (1.0 if k % 2 else -1.0) / k
    out[small] = n[small] * acc * xs ** 3
    xb, nb = x[~small], n[~small]
    out[~small] = nb * np.log1p(xb) - s + s * s / (2 * nb)
    return out


def _fsum_c(arr: np.ndarray) -> complex:
    return complex(math.fsum(arr.real), math.fsum(arr.imag))


def log_barnes_g_product(s, n_terms: int) -> EvalResult:
    """Partial Weierstrass product for log G(s+1), truncated after n_terms factors.

    Slowly convergent (tail ~ s^3/(3N)); intended as an independent oracle.
    """
    s = complex(s)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    _barnes_zero_check(s, "log_barnes_g_product")
    n = np.arange(1, n_terms + 1, dtype=float)
    terms = _product_terms(s, n)
    head = 0.5 * s * math.log(2 * math.pi) - 0.5 * ((1 + EULER_GAMMA) * s * s + s)
    value = head + _fsum_c(terms)
    err = abs(s) ** 3 / (3.0 * n_terms)
    return EvalResult(value, err, Method.SERIES)


def log_barnes_g_product_extrapolated(s, n_terms: int = 10**6, levels: int = 3) -> EvalResult:
    """Richardson extrapolation in 1/N of the partial products at N/2^j, j = 0..levels."""
    s = complex(s)
    _barnes_zero_check(s, "log_barnes_g_product_extrapolated")
    n = np.arange(1, n_terms + 1, dtype=float)
    terms = _product_terms(s, n)
    head = 0.5 * s * math.log(2 * math.pi) - 0.5 * ((1 + EULER_GAMMA) * s * s + s)
    sizes = [n_terms >> j for j in range(levels, -1, -1)]
    if sizes[0] < 1:
        raise ValueError("n_terms too small for the requested levels")
    row = [head + _fsum_c(terms[:m]) for m in sizes]
    # errors expand in 1/N, 1/N^2, ...; sizes double at each step
    prev = row[-1]
    for lev in range(1, levels + 1):
        f = 2.0 ** lev
        prev = row[-1]
        row = [(f * row[i + 1] - row[i]) / (f - 1) for i in range(len(row) - 1)]
    value = row[-1]
    err = abs(value - prev) if levels >= 1 else abs(s) ** 3 / (3.0 * n_terms)
    return EvalResult(value, err, Method.SERIES)


def _barnes_asymptotic_parts(s: complex, order: int) -> tuple[list[complex], float]:
    ls = cmath.log(s)
    parts = [0.5 * s * s * (ls - 1.5), -ls / 12.0, -s * ZETA_PRIME_0, ZETA_PRIME_MINUS1]
    inv2 = 1.0 / (s * s)
    p = inv2
    for k in range(1, order + 1):
        parts.append(float(bernoulli_even(k)) / (4 * k * (k + 1)) * p)
        p *= inv2
    k = order + 1
    omitted = abs(float(bernoulli_even(k)) / (4 * k * (k + 1)) * p)
    return parts, omitted


def log_barnes_g_asymptotic(s, order: int = 8) -> EvalResult:
    """Large-s expansion of log G(s+1) with ``order`` Bernoulli correction terms.

    Valid for Re(s) > 0; the error estimate is the first omitted term, which is a
    heuristic for an asymptotic series and reliable once |s| >= 5.
    """
    s = complex(s)
    if s.real <= 0:
        raise DomainError("log_barnes_g_asymptotic needs Re(s) > 0")
    if order < 0:
        raise ValueError("order must be >= 0")
    parts, omitted = _barnes_asymptotic_parts(s, order)
    value = csum(parts)
    return EvalResult(value, omitted + 4 * EPS * _abs_sum(parts), Method.ASYMPTOTIC)


def log_barnes_g(s) -> EvalResult:
    """log G(s+1) via upward recursion and the asymptotic expansion.

    log G(s+1) = log G(s+N+1) - sum_{k=1}^{N} log Gamma(s+k), with the log-gamma
    increments accumulated so the branch is continuous along the shift.
    """
    s = complex(s)
    _barnes_zero_check(s, "log_barnes_g")
    w = s
    increments = []
    while w.real < 12.0:
        w += 1.0
        increments.append(log_gamma(w))
    parts, omitted = _barnes_asymptotic_parts(w, 10)
    parts = parts + [-r.value for r in increments]
    value = csum(parts)
    err = omitted + math.fsum(r.abs_err for r in increments) + 4 * EPS * _abs_sum(parts)
    return EvalResult(value, err, Method.RECURSION if increments else Method.ASYMPTOTIC)
