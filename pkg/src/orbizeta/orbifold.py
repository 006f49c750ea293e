"""Orbisurface signatures, twist data and the elliptic coefficient tables.

A representation is described only through what the determinant formulas
consume: its dimension ``n``, the central parameter ``m`` (the fibre loop acts
by ``exp(-i pi m)``), and for each elliptic generator ``gamma_j`` of order
``nu_j`` the integers ``alpha_jp`` with

    eigenvalues of rho(gamma_j) = exp(-2 pi i (m/2 + alpha_jp) / nu_j).

Elliptic classes are indexed from 0 in the Python API.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import InvariantViolation, NonHyperbolicError, NonRealError
from .specfun import csum

__all__ = [
    "OrbifoldSignature",
    "RepresentationData",
    "EigenPolicy",
    "EllipticCoefficients",
    "as_fraction",
    "euler_characteristic",
    "volume",
    "c_rho",
    "trace_power",
    "alpha_coeffs",
    "c_m_coeffs",
    "c_m_exact",
    "elliptic_coefficients",
    "elliptic_classes",
    "center_order_check",
]


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions, ``"p/q"`` strings and floats (exact binary value)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite rational")
        return Fraction(x).limit_denominator(10**12)
    raise TypeError(f"cannot read {x!r} as a rational")


@dataclass(frozen=True)
class OrbifoldSignature:
    genus: int
    elliptic_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elliptic_orders", tuple(int(v) for v in self.elliptic_orders))
        if self.genus < 0:
            raise ValueError("genus must be >= 0")
        if any(v < 2 for v in self.elliptic_orders):
            raise ValueError("elliptic orders must be >= 2")
        if self.chi >= 0:
            raise NonHyperbolicError(f"chi = {self.chi} is not negative")

    @property
    def chi(self) -> Fraction:
        return 2 - 2 * self.genus + sum((Fraction(1, v) - 1 for v in self.elliptic_orders), Fraction(0))

    @property
    def r(self) -> int:
        return len(self.elliptic_orders)

    def __str__(self):
        orders = ",".join(str(v) for v in self.elliptic_orders)
        return f"({self.genus};{orders})"


class EigenPolicy(str, Enum):
    TRIVIAL = "trivial"
    FROM_FILE = "from_file"


@dataclass(frozen=True)
class RepresentationData:
    """Twist data: dimension, central parameter and elliptic angle integers.

    ``elliptic_orders`` duplicates the signature so that traces can be computed
    from the representation alone; :meth:`check_signature` cross-validates.
    """

    dim: int
    m: Fraction
    elliptic_orders: tuple[int, ...]
    elliptic_angles: tuple[tuple[int, ...], ...]
    geodesic_eigen_policy: EigenPolicy = EigenPolicy.TRIVIAL

    def __post_init__(self):
        m = as_fraction(self.m)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "elliptic_orders", tuple(int(v) for v in self.elliptic_orders))
        object.__setattr__(self, "elliptic_angles", tuple(tuple(int(a) for a in row) for row in self.elliptic_angles))
        object.__setattr__(self, "geodesic_eigen_policy", EigenPolicy(self.geodesic_eigen_policy))
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not (-1 < m <= 1):
            raise ValueError(f"m = {m} outside (-1, 1]")
        if len(self.elliptic_angles) != len(self.elliptic_orders):
            raise ValueError("one angle list per elliptic class is required")
        for j, (nu, row) in enumerate(zip(self.elliptic_orders, self.elliptic_angles)):
            if len(row) != self.dim:
                raise ValueError(f"class {j}: expected {self.dim} angles, got {len(row)}")
            if any(not (0 <= a < nu) for a in row):
                raise ValueError(f"class {j}: angles must lie in 0..{nu - 1}")
        # rho(gamma_j)^nu_j must act as the central element exp(-i pi m)
        target = cmath.exp(-1j * math.pi * float(m))
        for j in range(len(self.elliptic_orders)):
            for lam in self.eigenvalues(j):
                if abs(lam ** self.elliptic_orders[j] - target) > 1e-12:
                    raise InvariantViolation(f"class {j}: rho(gamma)^nu is not exp(-i pi m) Id")

    @classmethod
    def trivial(cls, sig: OrbifoldSignature, dim: int = 1) -> "RepresentationData":
        return cls(dim, Fraction(0), sig.elliptic_orders, tuple((0,) * dim for _ in sig.elliptic_orders))

    @classmethod
    def from_angles(cls, sig: OrbifoldSignature, m, angles: Sequence[Sequence[int]],
                    policy=EigenPolicy.TRIVIAL) -> "RepresentationData":
        rows = tuple(tuple(row) for row in angles)
        dim = len(rows[0]) if rows else 1
        return cls(dim, as_fraction(m), sig.elliptic_orders, rows, policy)

    def check_signature(self, sig: OrbifoldSignature) -> None:
        if tuple(sig.elliptic_orders) != self.elliptic_orders:
            raise InvariantViolation(
                f"representation orders {self.elliptic_orders} do not match signature {sig.elliptic_orders}")

    def eigenvalues(self, j: int) -> list[complex]:
        nu = self.elliptic_orders[j]
        h = float(self.m) / 2
        return [cmath.exp(-2j * math.pi * (h + a) / nu) for a in self.elliptic_angles[j]]


def euler_characteristic(sig: OrbifoldSignature) -> Fraction:
    """chi = 2 - 2g + sum (1/nu_j - 1), exactly."""
    return sig.chi


def volume(sig: OrbifoldSignature) -> float:
    """Hyperbolic area for curvature -1: -2 pi chi."""
    chi = sig.chi
    if chi >= 0:
        raise NonHyperbolicError(f"chi = {chi} is not negative")
    return -2 * math.pi * float(chi)


def c_rho(sig: OrbifoldSignature, rep: RepresentationData) -> float:
    """dim * Vol / (4 pi) = -dim chi / 2."""
    return float(-rep.dim * sig.chi / 2)


def _trace_power(rep: RepresentationData, j: int, k: int) -> complex:
    nu = rep.elliptic_orders[j]
    h = rep.m / 2
    terms = []
    for a in rep.elliptic_angles[j]:
        # reduce the phase exactly before going to floating point
        ph = (k * (h + a) / nu) % 1
        terms.append(cmath.exp(-2j * math.pi * float(ph)))
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def trace_power(rep: RepresentationData, j: int, k: int) -> complex:
    """Tr(rho(gamma_j)^k) for 1 <= k <= nu_j - 1."""
    if not 0 <= j < len(rep.elliptic_orders):
        raise IndexError(f"elliptic class {j} out of range")
    nu = rep.elliptic_orders[j]
    if not 1 <= k <= nu - 1:
        raise IndexError(f"power k={k} outside 1..{nu - 1}")
    return _trace_power(rep, j, k)


def alpha_coeffs(rep: RepresentationData, j: int, ell: int) -> tuple[int, int]:
    """(alpha_j(l), alpha~_j(l)): sums of the residues of alpha_jp + l and -alpha_jp + l mod nu_j."""
    nu = rep.elliptic_orders[j]
    if not 0 <= ell <= nu - 1:
        raise IndexError(f"l={ell} outside 0..{nu - 1}")
    row = rep.elliptic_angles[j]
    return sum((a + ell) % nu for a in row), sum((-a + ell) % nu for a in row)


def c_m_coeffs(rep: RepresentationData, j: int, ell: int) -> tuple[complex, complex]:
    """(C_m, C~_m) for class j and residue l, from their finite trigonometric sums."""
    nu = rep.elliptic_orders[j]
    if not 0 <= ell <= nu - 1:
        raise IndexError(f"l={ell} outside 0..{nu - 1}")
    m = float(rep.m)
    c, ct = [], []
    for k in range(1, nu):
        tr = _trace_power(rep, j, k)
        base = tr * 1j * cmath.exp(1j * math.pi * k * m / nu) / (2 * math.sin(math.pi * k / nu))
        phase = math.pi * k * (2 * ell + 1) / nu
        c.append(-base * cmath.exp(-1j * phase) / nu)
        ct.append(base * cmath.exp(1j * phase) / nu)
    return csum(c), csum(ct)


def c_m_exact(rep: RepresentationData, j: int, ell: int) -> tuple[Fraction, Fraction]:
    """Exact rational (C_m, C~_m) through alpha_j(l) = n(nu_j - 1)/2 + nu_j C_m."""
    nu = rep.elliptic_orders[j]
    a, at = alpha_coeffs(rep, j, ell)
    base = Fraction(rep.dim * (nu - 1), 2)
    return (a - base) / nu, (at - base) / nu


@dataclass(frozen=True)
class EllipticCoefficients:
    """Per (j, l) tables; ``c_m``/``c_m_tilde`` come from the trigonometric sums."""

    orders: tuple[int, ...]
    alpha: tuple[tuple[int, ...], ...]
    alpha_tilde: tuple[tuple[int, ...], ...]
    c_m: tuple[tuple[complex, ...], ...]
    c_m_tilde: tuple[tuple[complex, ...], ...]
    c_m_rational: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    c_m_tilde_rational: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    def sum_rule_residuals(self) -> list[tuple[float, float]]:
        """|sum_l (C_m + C~_m)| and |sum_l (C_m - C~_m)| per class."""
        out = []
        for c, ct in zip(self.c_m, self.c_m_tilde):
            out.append((abs(sum(c) + sum(ct)), abs(sum(c) - sum(ct))))
        return out

    def identity_residuals(self) -> list[float]:
        """max over l of |trig-sum C - rational C| per class (both C and C~)."""
        out = []
        for rows in zip(self.c_m, self.c_m_tilde, self.c_m_rational, self.c_m_tilde_rational):
            c, ct, q, qt = rows
            out.append(max(max(abs(x - float(y)) for x, y in zip(c, q)),
                           max(abs(x - float(y)) for x, y in zip(ct, qt))))
        return out


def elliptic_coefficients(rep: RepresentationData, imag_tol: float = 1e-10) -> EllipticCoefficients:
    """Build the full coefficient table and check that the C values are real."""
    alpha, alpha_t, cm, cmt, q, qt = [], [], [], [], [], []
    for j, nu in enumerate(rep.elliptic_orders):
        pairs = [alpha_coeffs(rep, j, ell) for ell in range(nu)]
        alpha.append(tuple(p[0] for p in pairs))
        alpha_t.append(tuple(p[1] for p in pairs))
        cs = [c_m_coeffs(rep, j, ell) for ell in range(nu)]
        for c, ct in cs:
            if abs(c.imag) > imag_tol or abs(ct.imag) > imag_tol:
                raise NonRealError(f"class {j}: C coefficient has imaginary part {max(abs(c.imag), abs(ct.imag)):.3g}")
        cm.append(tuple(c for c, _ in cs))
        cmt.append(tuple(ct for _, ct in cs))
        ex = [c_m_exact(rep, j, ell) for ell in range(nu)]
        q.append(tuple(e[0] for e in ex))
        qt.append(tuple(e[1] for e in ex))
    return EllipticCoefficients(rep.elliptic_orders, tuple(alpha), tuple(alpha_t), tuple(cm), tuple(cmt),
                                tuple(q), tuple(qt))


def elliptic_classes(rep: RepresentationData):
    """Yield (j, k, nu, theta, trace) for the non-trivial elliptic classes gamma_j^k.

    theta = pi k / nu is the rotation parameter and nu the centraliser order.
    """
    for j, nu in enumerate(rep.elliptic_orders):
        for k in range(1, nu):
            yield j, k, nu, math.pi * k / nu, _trace_power(rep, j, k)


def center_order_check(sig: OrbifoldSignature, rep: RepresentationData) -> tuple[bool, Fraction]:
    """Informational: is exp(-i pi m)^(N n chi) = 1 with N = lcm(1, nu_j)?

    Returns the flag and the exponent m N n chi / 2 (an integer when the check holds).
    """
    n_lcm = math.lcm(1, *sig.elliptic_orders) if sig.elliptic_orders else 1
    expo = rep.m * n_lcm * rep.dim * sig.chi / 2
    return expo.denominator == 1, expo
