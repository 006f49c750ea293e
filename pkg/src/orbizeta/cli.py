"""Command-line interface: ``orbizeta {info,factors,verify,spectrum,torsion}``.

Configuration is a JSON document validated against :data:`CONFIG_SCHEMA`
(unknown keys are rejected).  Rationals may be given as strings ("1/2").
Tables go to ``--out`` or stdout as CSV or JSON with floats printed to 17
significant digits, so identical inputs give byte-identical output.

Exit codes: 0 success, 1 verification failure, 2 configuration or input
error, 3 spectrum audit failure, 4 any other numerical error.  Every error
path writes one line ``orbizeta: error: <Kind>: <message>`` to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from . import __version__
from . import zetafactors as zf
from .errors import AuditFailure, ConfigError, InvariantViolation, OrbizetaError, ParseError
from .geodesics import LengthSpectrum, generate_spectrum, load_group, load_spectrum, save_spectrum, systole
from .heattrace import QuadratureSpec
from .orbifold import (EigenPolicy, OrbifoldSignature, RepresentationData, alpha_coeffs, c_rho,
                       elliptic_coefficients, volume)
from .verify import run_suite

_RATIONAL = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}

CONFIG_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "signature": {
            "type": "object",
            "additionalProperties": False,
            "required": ["genus"],
            "properties": {
                "genus": {"type": "integer", "minimum": 0},
                "elliptic_orders": {"type": "array", "items": {"type": "integer", "minimum": 2}},
            },
        },
        "representation": {
            "oneOf": [
                {"type": "string", "pattern": r"^(trivial|yamaguchi:[1-9][0-9]*)$"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["dim", "m"],
                    "properties": {
                        "dim": {"type": "integer", "minimum": 1},
                        "m": _RATIONAL,
                        "elliptic_angles": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                        "geodesic_eigen_policy": {"enum": ["trivial", "from_file"]},
                    },
                },
            ]
        },
        "spectrum": {
            "oneOf": [
                {"type": "null"},
                {"type": "object", "additionalProperties": False, "required": ["path"],
                 "properties": {"path": {"type": "string"}}},
                {"type": "object", "additionalProperties": False, "required": ["generate"],
                 "properties": {"generate": {
                     "type": "object", "additionalProperties": False, "required": ["group", "l_max"],
                     "properties": {"group": {"type": "string"},
                                    "l_max": {"type": "number", "exclusiveMinimum": 0},
                                    "audit_margin": {"type": "integer", "minimum": 1}}}}},
            ]
        },
        "s_grid": {
            "type": "array",
            "items": {"oneOf": [
                {"type": "number"},
                {"type": "string"},
                {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
            ]},
        },
        "quadrature": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rel_tol": {"type": "number", "exclusiveMinimum": 0},
                "abs_tol": {"type": "number", "exclusiveMinimum": 0},
                "max_subdivisions": {"type": "integer", "minimum": 1},
                "decay_cutoff": {"type": ["number", "null"]},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"format": {"enum": ["csv", "json"]}, "path": {"type": ["string", "null"]}},
        },
    },
}


@dataclass
class JobConfig:
    signature: OrbifoldSignature | None
    representation: RepresentationData | None
    yamaguchi_n: int | None
    spectrum: LengthSpectrum | None
    generate: dict | None
    s_grid: list[complex]
    quadrature: QuadratureSpec
    fmt: str
    out: str | None


# --------------------------------------------------------------------------
# parsing


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc


def _parse_s_item(item) -> complex:
    if isinstance(item, list):
        return complex(item[0], item[1])
    if isinstance(item, str):
        return parse_complex(item)
    return complex(item)


def build_config(doc: dict, base_dir: Path = Path(".")) -> JobConfig:
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    sig = None
    if "signature" in doc:
        try:
            sig = OrbifoldSignature(doc["signature"]["genus"], tuple(doc["signature"].get("elliptic_orders", ())))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    rep, yam = None, None
    spec_rep = doc.get("representation", "trivial" if sig is not None else None)
    if spec_rep is not None:
        if sig is None:
            raise ConfigError("representation given without signature")
        try:
            if spec_rep == "trivial":
                rep = RepresentationData.trivial(sig)
            elif isinstance(spec_rep, str):
                yam = int(spec_rep.split(":")[1])
                rep = zf.yamaguchi_rep(sig, yam)
            else:
                angles = spec_rep.get("elliptic_angles", [[0] * spec_rep["dim"] for _ in sig.elliptic_orders])
                rep = RepresentationData(spec_rep["dim"], Fraction(str(spec_rep["m"]).replace(" ", "")),
                                         sig.elliptic_orders, angles,
                                         EigenPolicy(spec_rep.get("geodesic_eigen_policy", "trivial")))
        except (ValueError, ZeroDivisionError, InvariantViolation) as exc:
            raise ConfigError(f"representation: {exc}") from exc
    spectrum, generate = None, None
    sp = doc.get("spectrum")
    if sp and "path" in sp:
        spectrum = load_spectrum(base_dir / sp["path"])
    elif sp and "generate" in sp:
        generate = dict(sp["generate"])
        generate["group"] = str(base_dir / generate["group"])
    q = doc.get("quadrature", {})
    quad = QuadratureSpec(q.get("rel_tol", 1e-12), q.get("abs_tol", 1e-14), q.get("max_subdivisions", 200),
                          q.get("decay_cutoff"))
    out = doc.get("output", {})
    return JobConfig(sig, rep, yam, spectrum, generate, [_parse_s_item(x) for x in doc.get("s_grid", [])], quad,
                     out.get("format", "csv"), out.get("path"))


def load_config(path: str | None) -> JobConfig:
    if path is None:
        return build_config({})
    p = Path(path)
    try:
        doc = json.loads(p.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return build_config(doc, p.parent)


# --------------------------------------------------------------------------
# output


def fmt_float(x: float) -> str:
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(x, ".17g")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v) if math.isfinite(v) else "null"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    return json.dumps(str(v))


def render_table(columns: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str, meta: dict | None = None) -> str:
    if fmt == "json":
        body = {"columns": list(columns), "rows": [dict(zip(columns, r)) for r in rows]}
        if meta:
            body = {"meta": meta, **body}
        lines = ["{"]
        items = list(body.items())
        for i, (k, v) in enumerate(items):
            sep = "," if i < len(items) - 1 else ""
            if k == "rows":
                inner = ",\n".join("    " + _json_value(r) for r in v)
                lines.append(f'  "rows": [\n{inner}\n  ]{sep}' if v else f'  "rows": []{sep}')
            else:
                lines.append(f"  {json.dumps(k)}: {_json_value(v)}{sep}")
        lines.append("}")
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    if meta:
        for k, v in meta.items():
            buf.write(f"# {k}={_cell(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _threads() -> int:
    raw = os.environ.get("ORBIZETA_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"ORBIZETA_THREADS={raw!r} is not an integer") from None
    return max(1, n)


def _require(cfg: JobConfig) -> tuple[OrbifoldSignature, RepresentationData]:
    if cfg.signature is None or cfg.representation is None:
        raise ConfigError("this command needs a signature (and optionally a representation) in --config")
    return cfg.signature, cfg.representation


def _frac(q: Fraction) -> str:
    return str(q)


# --------------------------------------------------------------------------
# commands


def cmd_info(cfg: JobConfig, args) -> int:
    sig, rep = _require(cfg)
    co = elliptic_coefficients(rep)
    sums = co.sum_rule_residuals()
    meta = {"signature": str(sig), "chi": _frac(sig.chi), "volume": volume(sig), "dim": rep.dim, "m": _frac(rep.m),
            "C_rho": c_rho(sig, rep)}
    cols = ["j", "nu", "l", "alpha", "alpha_tilde", "C_m", "C_m_tilde", "C_m_exact", "C_m_tilde_exact",
            "sum_rule_plus", "sum_rule_minus"]
    rows = []
    for j, nu in enumerate(sig.elliptic_orders):
        for ell in range(nu):
            a, at = alpha_coeffs(rep, j, ell)
            rows.append([j, nu, ell, a, at, co.c_m[j][ell].real, co.c_m_tilde[j][ell].real,
                         _frac(co.c_m_rational[j][ell]), _frac(co.c_m_tilde_rational[j][ell]),
                         sums[j][0], sums[j][1]])
    _emit(render_table(cols, rows, args.format or cfg.fmt, meta), args.out or cfg.out)
    return 0


FACTOR_COLUMNS = ["s_re", "s_im", "log_z_re", "log_z_im", "log_z_tail_bound", "log_z_identity_re",
                  "log_z_identity_im", "log_z_elliptic_re", "log_z_elliptic_im", "constant", "log_det_re",
                  "log_det_im", "abs_err", "error"]


def _factor_row(s: complex, sig, rep, spectrum, k_max=None) -> list:
    try:
        b = zf.log_det(s, sig, rep, spectrum, k_max)
        return [s.real, s.imag, b.log_z.real, b.log_z.imag, b.truncation_tail_bound, b.log_z_identity.real,
                b.log_z_identity.imag, b.log_z_elliptic.real, b.log_z_elliptic.imag, b.torsion_factor,
                b.log_det.real, b.log_det.imag, b.abs_err, None]
    except (OrbizetaError, ArithmeticError, ValueError) as exc:
        return [s.real, s.imag] + [None] * 11 + [f"{type(exc).__name__}: {exc}".replace("\n", " ")]


def _spectrum_for(cfg: JobConfig, audit: int | None) -> LengthSpectrum:
    if cfg.spectrum is not None:
        return cfg.spectrum
    if cfg.generate is not None:
        g = cfg.generate
        grp = load_group(g["group"])
        margin = audit if audit is not None else g.get("audit_margin", 1)
        orders = cfg.signature.elliptic_orders if cfg.signature is not None else None
        return generate_spectrum(grp, g["l_max"], margin, elliptic_orders=orders)
    return LengthSpectrum()


def cmd_factors(cfg: JobConfig, args) -> int:
    sig, rep = _require(cfg)
    grid = [parse_complex(x) for x in args.s.split(",")] if args.s else list(cfg.s_grid)
    if not grid and not args.at_one:
        raise ConfigError("no s values: give --s or s_grid in the config")
    spectrum = _spectrum_for(cfg, args.audit)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda s: _factor_row(s, sig, rep, spectrum), grid))
    cols = list(FACTOR_COLUMNS)
    if args.at_one:
        if args.m_rho is None:
            raise ConfigError("--at-one needs --m-rho K")
        try:
            d = zf.det_at_one(sig, rep, spectrum, args.m_rho)
            extra = [1.0, 0.0] + [None] * 8 + [d.value.real, d.value.imag, d.abs_err,
                                               "diagnostic: product not convergent at s=1" if d.diagnostic else None]
        except (OrbizetaError, ArithmeticError, ValueError) as exc:
            extra = [1.0, 0.0] + [None] * 11 + [f"{type(exc).__name__}: {exc}"]
        rows.append(extra)
        meta = {"s1_row": f"det{'*' if args.m_rho else ''} at s=1 (not logarithm), M_rho={args.m_rho}"}
    else:
        meta = None
    _emit(render_table(cols, rows, args.format or cfg.fmt, meta), args.out or cfg.out)
    return 0


def cmd_verify(cfg: JobConfig, args) -> int:
    report = run_suite(zeta1_shift=args.zeta1_shift, tol_scale=args.tol if args.tol else 1.0, quad=cfg.quadrature)
    _emit(report.to_json(), args.out or cfg.out)
    for c in report.checks:
        if not c.passed:
            print(f"orbizeta: check failed: {c.name}: residual {c.residual} > {c.tolerance}", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_spectrum(cfg: JobConfig, args) -> int:
    if cfg.spectrum is None and cfg.generate is None:
        raise ConfigError("spectrum command needs spectrum.path or spectrum.generate in the config")
    spec = _spectrum_for(cfg, args.audit)
    out = args.out or cfg.out
    if out is None:
        raise ConfigError("spectrum command needs --out (or output.path) for the spectrum JSON")
    save_spectrum(spec, out)
    bins: dict[int, int] = {}
    for r in spec.records:
        bins[int(math.floor(r.length))] = bins.get(int(math.floor(r.length)), 0) + r.class_count
    meta = {"records": len(spec.records), "l_max": spec.l_max, "source": spec.source.value,
            "audit": "passed" if spec.audited else "not audited",
            "systole": systole(spec) if spec.records else None}
    rows = [[b, b + 1, n] for b, n in sorted(bins.items())]
    sys.stdout.write(render_table(["length_from", "length_to", "classes"], rows, args.format or cfg.fmt, meta))
    return 0


def cmd_torsion(cfg: JobConfig, args) -> int:
    sig, rep = _require(cfg)
    limit = zf.torsion_limit(sig)
    cols = ["N", "dim", "C_definition", "C_closed_form", "closed_minus_definition", "C_over_dim", "limit",
            "deviation"]
    rows = []
    if cfg.yamaguchi_n is not None:
        for n in range(1, cfg.yamaguchi_n + 1):
            r = zf.yamaguchi_rep(sig, n)
            c_def = zf.torsion_factor(sig, r)
            c_cf = zf.yamaguchi_torsion_closed_form(sig, n)
            rows.append([n, 2 * n, c_def, c_cf, c_cf - c_def, c_def / (2 * n), limit, c_def / (2 * n) - limit])
    else:
        c_def = zf.torsion_factor(sig, rep)
        rows.append([None, rep.dim, c_def, None, None, c_def / rep.dim, limit, c_def / rep.dim - limit])
    _emit(render_table(cols, rows, args.format or cfg.fmt, {"signature": str(sig)}), args.out or cfg.out)
    return 0


COMMANDS = {"info": cmd_info, "factors": cmd_factors, "verify": cmd_verify, "spectrum": cmd_spectrum,
            "torsion": cmd_torsion}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbizeta", description="Twisted Selberg zeta factors and determinant checks "
                                                             "for compact hyperbolic orbisurfaces.")
    p.add_argument("--version", action="version", version=f"orbizeta {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--s", metavar="LIST", help='comma separated complex values, e.g. "3,2.5+1i"')
    p.add_argument("--at-one", action="store_true", help="append the s = 1 determinant row")
    p.add_argument("--m-rho", type=int, metavar="K", help="multiplicity of the zero eigenvalue (with --at-one)")
    p.add_argument("--audit", type=int, metavar="N", help="audit margin for spectrum generation")
    p.add_argument("--tol", type=float, metavar="X", help="scale factor for verify tolerances")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--zeta1-shift", type=float, default=0.0, help=argparse.SUPPRESS)
    return p


def _warning_line(message, category, filename, lineno, line=None) -> str:
    return f"orbizeta: warning: {category.__name__}: {message}\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    saved, warnings.formatwarning = warnings.formatwarning, _warning_line
    try:
        if args.audit is not None and args.audit < 1:
            raise ConfigError("--audit must be >= 1")
        if args.tol is not None and not args.tol > 0:
            raise ConfigError("--tol must be positive")
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, ParseError, InvariantViolation) as exc:
        code = 2
        err = exc
    except AuditFailure as exc:
        code = 3
        err = exc
    except (OrbizetaError, ArithmeticError, ValueError, OSError) as exc:
        code = 4
        err = exc
    finally:
        warnings.formatwarning = saved
    msg = str(err).replace("\n", " ")
    print(f"orbizeta: error: {type(err).__name__}: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
