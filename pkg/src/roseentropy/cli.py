"""Command-line front end.

    roseentropy entropy --lengths 1,2
    roseentropy lim --input lengths.json
    roseentropy census --lengths 1,2 --scale 1 --rmax 40 --window 20,40
    roseentropy certify --displacements 1,1 --delta 1
    roseentropy collar --h 1 --priors 1,2 --strict
    roseentropy report --lengths 1,2,3

Exit codes: 0 ok, 1 invalid input, 2 solver did not converge,
3 infeasible/undefined bound with --strict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .bounds import (
    DEFAULT_CERT_TOL,
    certify,
    collar2_asymptotic,
    collar_report,
    exact_min_last_length,
)
from .census import DEFAULT_TABLE_CAP, ScaledLengths, census_curve, growth_rate_estimate
from .core import ConvergenceError, GroupSample, RoseLengths, ValidationError, validate_lengths
from .entropy import DEFAULT_SPECTRAL_TOL, DEFAULT_TOL, lim_entropy, positive_solution, rose_entropy

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_STRICT = 0, 1, 2, 3
TOL_ENV = "ROSEENTROPY_TOL"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for non-convergence
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse number list {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"cannot parse radius {text!r}") from None


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- input


def parse_input(document: Any):
    """Turn a JSON object or CSV text into RoseLengths or GroupSample.

    JSON: ``{"lengths": [...]}`` or ``{"displacements": [...], "delta": x}``.
    CSV: one-line header ``length`` (one value per row), or
    ``displacement,delta`` where delta is given on the first data row and
    left blank or repeated on the others.
    """
    if isinstance(document, str):
        return _parse_csv(document)
    if not isinstance(document, dict):
        raise ValidationError("input must be a JSON object")
    if "lengths" in document:
        if "displacements" in document:
            raise ValidationError("give either 'lengths' or 'displacements', not both")
        values = document["lengths"]
        if not isinstance(values, list):
            raise ValidationError("field 'lengths' must be an array")
        try:
            return RoseLengths(tuple(values))
        except ValidationError as exc:
            raise ValidationError(f"field 'lengths': {exc}") from None
    if "displacements" in document:
        values = document["displacements"]
        if not isinstance(values, list):
            raise ValidationError("field 'displacements' must be an array")
        if "delta" not in document:
            raise ValidationError("field 'delta' is required with 'displacements'")
        try:
            return GroupSample(tuple(values), document["delta"])
        except ValidationError as exc:
            raise ValidationError(f"field 'displacements'/'delta': {exc}") from None
    raise ValidationError("expected a 'lengths' or 'displacements' field")


def _parse_csv(text: str):
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValidationError("empty CSV input")
    header = [c.strip().lower() for c in rows[0]]
    body = rows[1:]
    if header == ["length"]:
        values = []
        for n, row in enumerate(body, start=2):
            if len(row) != 1:
                raise ValidationError(f"line {n}: expected one value")
            values.append(_csv_number(row[0], n, "length"))
        return RoseLengths(tuple(values))
    if header == ["displacement", "delta"]:
        values, delta = [], None
        for n, row in enumerate(body, start=2):
            if len(row) != 2:
                raise ValidationError(f"line {n}: expected displacement,delta")
            values.append(_csv_number(row[0], n, "displacement"))
            if row[1].strip():
                d = _csv_number(row[1], n, "delta")
                if delta is not None and d != delta:
                    raise ValidationError(f"line {n}: conflicting delta {d} != {delta}")
                delta = d
        if delta is None:
            raise ValidationError("no delta value in CSV")
        return GroupSample(tuple(values), delta)
    raise ValidationError(f"line 1: unknown CSV header {rows[0]!r}")


def _csv_number(cell: str, line: int, field: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ValidationError(f"line {line}: field '{field}' is not a number: {cell!r}") from None


def _load(path: str):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    if p.suffix.lower() == ".csv":
        return parse_input(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return parse_input(doc)


def _input_object(args, inline_field: str):
    inline = getattr(args, inline_field, None)
    if (inline is None) == (args.input is None):
        raise ValidationError(f"give exactly one of --{inline_field} or --input")
    if args.input is not None:
        return _load(args.input)
    if inline_field == "displacements":
        if args.delta is None:
            raise ValidationError("--delta is required with --displacements")
        return GroupSample(tuple(_floats(inline)), args.delta)
    return validate_lengths(_floats(inline))


def _lengths(args) -> RoseLengths:
    obj = _input_object(args, "lengths")
    if not isinstance(obj, RoseLengths):
        raise ValidationError("this command needs lengths, not displacements")
    return obj


def _echo(obj) -> dict:
    if isinstance(obj, GroupSample):
        return {"displacements": list(obj.displacements), "delta": obj.delta}
    return {"lengths": list(obj.lengths)}


# ---------------------------------------------------------------- commands


def _solution(sol) -> dict:
    return {
        "h": sol.h,
        "residual": sol.residual,
        "bracket": [sol.bracket_low, sol.bracket_high],
        "iterations": sol.iterations,
        "method": sol.method,
    }


def _cmd_entropy(args):
    lengths = _lengths(args)
    sol = rose_entropy(lengths, tol=args.tol)
    return _echo(lengths), _solution(sol), False


def _cmd_lim(args):
    lengths = _lengths(args)
    sol = lim_entropy(lengths, tol=args.spectral_tol)
    x = positive_solution(lengths, sol.h, tol=max(args.spectral_tol * 100, 1e-8))
    d = [math.exp(-sol.h * a) for a in lengths]
    k = lengths.k
    results = _solution(sol)
    results["positive_solution"] = list(x)
    results["line_difference_spread"] = max((1 + di) * xi for di, xi in zip(d, x)) - min(
        (1 + di) * xi for di, xi in zip(d, x)
    )
    results["line_sum_residual"] = math.fsum((1 - (2 * k - 1) * di) * xi for di, xi in zip(d, x))
    return _echo(lengths), results, False


def _census_block(lengths: RoseLengths, scale: int, r_max, step, window, cap: int) -> dict:
    scaled = ScaledLengths.from_lengths(lengths.lengths, scale)
    curve = census_curve(scaled, r_max, step, cap=cap)
    if window is None:
        # largest sampled radius not above r_max/2, and the last sample
        window = (max(math.floor(r_max / 2 / step), 1) * step, curve.radii[-1])
    slope = growth_rate_estimate(curve, window)
    return {
        "scale": scaled.scale,
        "lengths_used": [_fmt_fraction(q) for q in scaled.lengths],
        "lengths_used_float": [float(q) for q in scaled.lengths],
        "radii": [_fmt_fraction(r) for r in curve.radii],
        "counts": list(curve.counts),
        "window": [_fmt_fraction(Fraction(w)) for w in window],
        "growth_rate": slope,
    }


def _cmd_census(args):
    lengths = _lengths(args)
    r_max = _fraction(args.rmax)
    step = _fraction(args.step) if args.step else Fraction(1, args.scale)
    window = None
    if args.window:
        parts = args.window.split(",")
        if len(parts) != 2:
            raise ValidationError("--window needs two radii R1,R2")
        window = tuple(_fraction(p) for p in parts)
    block = _census_block(lengths, args.scale, r_max, step, window, args.cap)
    return _echo(lengths), block, False


def _certificate(sample: GroupSample, tol: float) -> dict:
    cert = certify(sample, tol=tol)
    return {
        "sum_value": cert.sum_value,
        "satisfied": cert.satisfied,
        "delta_lower_bound": cert.delta_lower_bound,
        "max_displacement_bound": cert.max_displacement_bound,
    }


def _cmd_certify(args):
    obj = _input_object(args, "displacements")
    if not isinstance(obj, GroupSample):
        raise ValidationError("certify needs displacements and delta")
    res = _certificate(obj, args.cert_tol)
    return _echo(obj), res, not res["satisfied"]


def _collar_dict(rep) -> dict:
    return {
        "exact_bound": rep.exact_bound,
        "feasible": rep.feasible,
        "asymptotic_bound": rep.asymptotic_bound,
        "comparison_bcgs": rep.comparison_bcgs,
        "margin": rep.margin,
        "plug_back_residual": rep.plug_back_residual,
        "vacuous": rep.vacuous,
    }


def _cmd_collar(args):
    if args.h is None or args.priors is None:
        raise ValidationError("collar needs --h and --priors")
    priors = _floats(args.priors)
    rep = collar_report(args.h, priors)
    inputs = {"h": rep.h, "priors": list(rep.prior_lengths)}
    strict_fail = (not rep.feasible) or rep.asymptotic_bound is None
    return inputs, _collar_dict(rep), strict_fail


def _cmd_report(args):
    lengths = _lengths(args)
    sol = rose_entropy(lengths, tol=args.tol)
    results: dict = {"entropy": _solution(sol)}
    strict_fail = False
    if lengths.k >= 2:
        results["lim"] = _cmd_lim(args)[1]
        h = sol.h
        r_max = Fraction(args.rmax) if args.rmax else Fraction(math.ceil(30 / h))
        results["census"] = _census_block(
            lengths, args.scale, r_max, Fraction(1, 2 * args.scale), None, args.cap
        )
        results["census"]["relative_error"] = abs(results["census"]["growth_rate"] / h - 1)
        results["certificate"] = _certificate(GroupSample(lengths.lengths, h), args.cert_tol)
        ordered = sorted(lengths.lengths)
        rep = collar_report(h, ordered[:-1])
        results["collar"] = _collar_dict(rep)
        strict_fail = not rep.feasible
        sweep = []
        for e in range(1, 9):
            l1 = 10.0**-e
            exact = exact_min_last_length(h, [l1])
            asym = collar2_asymptotic(h, l1)
            sweep.append({"l1": l1, "exact": exact, "asymptotic": asym, "gap": exact - asym})
        results["collar2_sweep"] = sweep
    return _echo(lengths), results, strict_fail


_HANDLERS = {
    "entropy": _cmd_entropy,
    "lim": _cmd_lim,
    "census": _cmd_census,
    "certify": _cmd_certify,
    "collar": _cmd_collar,
    "report": _cmd_report,
}


# ---------------------------------------------------------------- output


def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        for key, v in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, v, out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, "" if value is None else value))


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    rows: list = []
    _flatten("", doc, rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows((k, repr(v) if isinstance(v, float) else v) for k, v in rows)
        return buf.getvalue()
    return "".join(f"{k}: {v!r}\n" if isinstance(v, float) else f"{k}: {v}\n" for k, v in rows)


# ---------------------------------------------------------------- entry


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ValidationError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol > 0:
        raise ValidationError(f"{TOL_ENV} must be positive")
    return tol


def build_parser(default_tol: float = DEFAULT_TOL) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON or CSV input file (path xor inline values)")
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--tol", type=float, default=default_tol,
                        help=f"logistic-sum residual tolerance (env {TOL_ENV})")
    common.add_argument("--spectral-tol", type=float, default=DEFAULT_SPECTRAL_TOL,
                        help="tolerance on Perron root - 1")
    common.add_argument("--cert-tol", type=float, default=DEFAULT_CERT_TOL,
                        help="slack on the certificate sum")
    common.add_argument("--strict", action="store_true",
                        help="exit 3 on infeasible/undefined bounds or failed certificates")

    census_opts = argparse.ArgumentParser(add_help=False)
    census_opts.add_argument("--scale", type=int, default=1, help="length denominator")
    census_opts.add_argument("--cap", type=int, default=DEFAULT_TABLE_CAP,
                             help="maximum number of radius layers")

    parser = _Parser(prog="roseentropy", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", parents=[common], help="entropy by logistic root")
    p.add_argument("--lengths")
    p = sub.add_parser("lim", parents=[common], help="entropy by Perron root")
    p.add_argument("--lengths")
    p = sub.add_parser("census", parents=[common, census_opts], help="exact ball counts")
    p.add_argument("--lengths")
    p.add_argument("--rmax", required=True)
    p.add_argument("--step")
    p.add_argument("--window", help="R1,R2 (default rmax/2,rmax)")
    p = sub.add_parser("certify", parents=[common], help="displacement inequality")
    p.add_argument("--displacements")
    p.add_argument("--delta", type=float)
    p = sub.add_parser("collar", parents=[common], help="last-loop length bounds")
    p.add_argument("--h", type=float)
    p.add_argument("--priors")
    p = sub.add_parser("report", parents=[common, census_opts], help="everything at once")
    p.add_argument("--lengths")
    p.add_argument("--rmax", help="census radius (default ceil(30/h))")
    return parser


def run(argv: Optional[list] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        default_tol = _default_tol()
    except ValidationError as exc:
        print(f"roseentropy: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = build_parser(default_tol).parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        for name in ("tol", "spectral_tol", "cert_tol"):
            if not getattr(args, name) > 0:
                raise ValidationError(f"--{name.replace('_', '-')} must be positive")
        inputs, results, strict_fail = _HANDLERS[args.command](args)
    except ValidationError as exc:
        print(f"roseentropy: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"roseentropy: no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    doc = {
        "command": args.command,
        "version": __version__,
        "inputs": inputs,
        "config": {"tol": args.tol, "spectral_tol": args.spectral_tol, "cert_tol": args.cert_tol},
        "results": results,
    }
    stdout.write(render(doc, args.format))
    if args.strict and strict_fail:
        return EXIT_STRICT
    return EXIT_OK


def main() -> None:
    sys.exit(run())
