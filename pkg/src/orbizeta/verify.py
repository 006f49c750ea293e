"""Invariant suite behind ``orbizeta verify``.

Each check compares two independent evaluations and reports the measured
residual against its tolerance.  Failures are data: the suite never raises
for a failing check, only records it (an exception inside a check is reported
as a failure with its message).
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from . import heattrace as ht
from . import specfun as sf
from . import zetafactors as zf
from .errors import OrbizetaError
from .geodesics import GeodesicRecord, LengthSpectrum
from .orbifold import OrbifoldSignature, RepresentationData, c_rho, elliptic_coefficients

__all__ = ["CheckResult", "VerifyReport", "run_suite", "report_from_json", "DEFAULT_CHECKS"]


@dataclass
class CheckResult:
    name: str
    residual: float | None
    tolerance: float
    passed: bool
    detail: str = ""


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        doc = {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> VerifyReport:
    doc = json.loads(text)
    return VerifyReport([CheckResult(**c) for c in doc["checks"]])


# --------------------------------------------------------------------------
# fixtures


def _g2():
    sig = OrbifoldSignature(2, ())
    return sig, RepresentationData.trivial(sig)


def _237():
    sig = OrbifoldSignature(0, (2, 3, 7))
    return sig, RepresentationData.trivial(sig)


def _one_two_m1():
    sig = OrbifoldSignature(1, (2,))
    return sig, RepresentationData.from_angles(sig, 1, [[0, 1]])


# --------------------------------------------------------------------------
# checks: each returns (residual, detail)


def _barnes_asymptotic(opts):
    worst = 0.0
    for s in (5.0, 10.0, 20.0):
        a = sf.log_barnes_g_asymptotic(s, 4).value
        p = sf.log_barnes_g_product_extrapolated(s).value
        worst = max(worst, abs(a - p))
    return worst, "asymptotic(order 4) vs extrapolated product at s = 5, 10, 20"


def _barnes_recursion(opts):
    rng = random.Random(20240611)
    worst = 0.0
    for _ in range(100):
        s = complex(rng.uniform(1, 10), rng.uniform(-5, 5))
        d = sf.log_barnes_g(s + 1).value - sf.log_gamma(s + 1).value - sf.log_barnes_g(s).value
        d = complex(d.real, math.remainder(d.imag, 2 * math.pi))
        worst = max(worst, abs(d))
    return worst, "log G(s+2) - log Gamma(s+1) - log G(s+1) on 100 random points"


def _digamma_identity(opts):
    worst = 0.0
    for s in (2.0, 5.0, 20.0):
        for m in (0, Fraction(1, 4), Fraction(-3, 4), 1):
            lhs, rhs = ht.identity_digamma_check(s, m, opts["quad"])
            worst = max(worst, abs(lhs - rhs))
    return worst, "quadrature vs psi(s+m/2)+psi(s-m/2)"


def _elliptic_identity(opts):
    worst = 0.0
    for sig, rep in (_237(), _one_two_m1()):
        for s in (2.0, 3.5):
            integral, series = ht.elliptic_series_check(s, sig, rep, opts["quad"])
            h = 1e-4
            diff = (zf.log_z_elliptic_zero(s + h, sig, rep).value - zf.log_z_elliptic_zero(s - h, sig, rep).value) / (2 * h)
            worst = max(worst, abs(integral - series), abs(series - diff / (2 * s - 1)))
    return worst, "integral vs digamma series vs (1/(2s-1)) d/ds log Z_ell,0"


def _kbessel(opts):
    recs = []
    for l0, count in ((2.0, 2), (2.7, 1)):
        k = 1
        while k * l0 <= 80:
            recs.append(GeodesicRecord(k * l0, l0, k, count))
            k += 1
    recs.sort(key=lambda r: (r.length, r.n_gamma))
    spec = LengthSpectrum(tuple(recs), 80.0)
    worst = 0.0
    for s in (3.0, 5.0):
        bessel, _ = ht.hyperbolic_kbessel_check(s, spec)
        z, _ = zf.log_selberg_zeta(s, spec)
        worst = max(worst, abs(bessel + z.value))
    return worst, "K_{-1/2} transform of H vs -log Z on a power-closed spectrum"


def _constant_term(opts):
    sig, rep = _g2()
    a1 = ht.identity_alpha1(sig, rep, opts["quad"])
    c = zf.determinant_constant(sig, rep, zeta_prime_minus1=sf.ZETA_PRIME_MINUS1 + opts.get("zeta1_shift", 0.0))
    r = zf.constant_term_residual(400.0, sig, rep, c_rho(sig, rep), a1, constant=c)
    return abs(r), "genus 2, trivial rep, s = 400"


def _alpha1_agreement(opts):
    worst = 0.0
    for sig, rep in (_g2(), _237()):
        read = ht.identity_alpha1(sig, rep, opts["quad"]) + ht.elliptic_term(0.0, sig, rep, opts["quad"]).value.real
        worst = max(worst, abs(read - zf.alpha1_asymptotic(sig, rep)))
    return worst, "heat t^0 reading vs large-s matching"


def _yamaguchi(opts):
    worst = 0.0
    for sig in (OrbifoldSignature(0, (2, 3, 7)), OrbifoldSignature(1, (5, 6))):
        for n in range(1, 13):
            rep = zf.yamaguchi_rep(sig, n)
            worst = max(worst, abs(zf.yamaguchi_torsion_closed_form(sig, n) - zf.torsion_factor(sig, rep)))
    return worst, "closed form vs definition for N <= 12"


def _sum_rules(opts):
    worst = 0.0
    for sig, rep in (_237(), _one_two_m1(), (OrbifoldSignature(0, (3, 3, 4)), zf.yamaguchi_rep(OrbifoldSignature(0, (3, 3, 4)), 3))):
        co = elliptic_coefficients(rep)
        worst = max([worst] + [max(pair) for pair in co.sum_rule_residuals()] + co.identity_residuals())
    return worst, "C_m sum rules and alpha identities"


def _multiplicity(opts):
    sig, rep = _237()
    worst = 0.0
    for n in range(6):
        for sign in (1, -1):
            worst = max(worst, zf.predicted_multiplicity(sig, rep, n, sign).defect)
    return worst, "N_+-(0, n) integrality for (0;2,3,7)"


def _cyclic_identity(opts):
    worst = 0.0
    for sig, rep in (_g2(), _237()):
        for s in (1.5, 3.0, 7.25):
            worst = max(worst, abs(zf.log_z_identity(s, sig, rep).value - zf.log_z_identity_cyclic(s, sig, rep)))
    return worst, "general vs cyclic identity factor"


def _lm_cross(opts):
    sig, rep = _237()
    lm = ht.lm_log_det_numeric(5.0, sig, rep, spec=opts["quad"])
    ld = zf.log_det(5.0, sig, rep)
    return abs(lm.value + ld.log_det), "(0;2,3,7), empty spectrum, s = 5"


DEFAULT_CHECKS: list[tuple[str, Callable, float]] = [
    ("barnes_asymptotic_vs_product", _barnes_asymptotic, 1e-9),
    ("barnes_recursion", _barnes_recursion, 1e-9),
    ("digamma_identity", _digamma_identity, 1e-8),
    ("elliptic_identity", _elliptic_identity, 1e-6),
    ("hyperbolic_kbessel", _kbessel, 1e-8),
    ("constant_term_vanishing", _constant_term, 1e-6),
    ("alpha1_two_ways", _alpha1_agreement, 1e-5),
    ("yamaguchi_closed_form", _yamaguchi, 1e-9),
    ("coefficient_sum_rules", _sum_rules, 1e-10),
    ("multiplicity_integrality", _multiplicity, 1e-9),
    ("cyclic_identity_factor", _cyclic_identity, 1e-10),
    ("lm_vs_closed_form", _lm_cross, 1e-6),
]


def run_suite(zeta1_shift: float = 0.0, tol_scale: float = 1.0, only: list[str] | None = None,
              quad: ht.QuadratureSpec | None = None) -> VerifyReport:
    """Run the invariant suite.

    ``zeta1_shift`` perturbs zeta'(-1) inside the determinant constant (a
    sensitivity probe); ``quad`` is used by every quadrature-based check.
    """
    opts = {"zeta1_shift": zeta1_shift, "quad": quad or ht.DEFAULT_QUAD}
    report = VerifyReport()
    for name, fn, tol in DEFAULT_CHECKS:
        if only and name not in only:
            continue
        tol = tol * tol_scale
        try:
            residual, detail = fn(opts)
            ok = math.isfinite(residual) and residual <= tol
        except (OrbizetaError, ArithmeticError, ValueError) as exc:
            residual, detail, ok = math.inf, f"{type(exc).__name__}: {exc}", False
        # non-finite residuals are written as null to keep the report strict JSON
        res = float(residual) if math.isfinite(residual) else None
        report.checks.append(CheckResult(name, res, tol, ok, detail))
    return report
