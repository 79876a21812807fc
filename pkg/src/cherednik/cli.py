"""Command-line front end: one subcommand per library computation.

Functions travel as CSV with a header row -- ``x,f_re,f_im`` for spatial
samples, ``lambda,g_re,g_im`` for spectral samples -- with floats written
to 17 significant digits so a dump/load cycle is lossless.  Reports come
out as JSON keyed by the report's record fields (``--output foo.csv``
flattens them to key,value rows; ``--output foo.json`` on a table turns
rows into objects).  A plain ``key = value`` config file can stand in for
the common flags; explicit flags win.

Exit codes: 0 success, 1 a computation refused (tolerance, convergence,
parameter domain), 2 usage errors -- bad flags, bad config, malformed
input files.  Identical invocations produce identical output bytes:
nothing below draws on wall clock, process state, or randomness.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import convolution as cv
from . import paley_wiener as pw
from . import transform as tr
from .errors import CherednikError
from .model import (
    GridFunction,
    LebesgueExponent,
    SpatialGrid,
    SpectralFunction,
    SpectralGrid,
    strip_halfwidth,
)
from .params import Parameters
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .special import opdam_g

__all__ = ["run", "main"]

_SPATIAL_COLUMNS = ("x", "f_re", "f_im")
_SPECTRAL_COLUMNS = ("lambda", "g_re", "g_im")

_DEFAULTS = {
    "alpha": 0.75,
    "beta": 0.25,
    "x_max": 7.2,
    "x_steps": 577,
    "lambda_max": 16.0,
    "lambda_steps": 361,
    "tol": None,
}
_CONFIG_KEYS = {
    "alpha": float,
    "beta": float,
    "x_max": float,
    "x_steps": int,
    "lambda_max": float,
    "lambda_steps": int,
    "tol": float,
}


class _UsageError(Exception):
    """Bad flags, bad config, or an input file that is not what it claims."""


def _builtin_values(x: np.ndarray) -> np.ndarray:
    # built-in demonstration function: smooth, fast-decaying, mixed parity
    return np.exp(-x * x) * (1.0 + 0.5 * x)


def _builtin_spectral_values(lam: np.ndarray) -> np.ndarray:
    # flat-topped bump supported in [-2, 2]
    vals = np.zeros(lam.size, dtype=complex)
    inside = np.abs(lam) < 2.0
    u = lam[inside] / 2.0
    vals[inside] = np.exp(-0.1 / (1.0 - u * u))
    return vals


# ---------------------------------------------------------------- flag glue


def _params(args) -> Parameters:
    try:
        return Parameters(args.alpha, args.beta)
    except CherednikError as exc:
        raise _UsageError(str(exc)) from exc


def _spatial_grid(args) -> SpatialGrid:
    try:
        return SpatialGrid(args.x_max, args.x_steps)
    except CherednikError as exc:
        raise _UsageError(str(exc)) from exc


def _spectral_grid(args) -> SpectralGrid:
    try:
        return SpectralGrid.symmetric(args.lambda_max, args.lambda_steps)
    except CherednikError as exc:
        raise _UsageError(str(exc)) from exc


def _spec(args) -> QuadratureSpec:
    if args.tol is None:
        return DEFAULT_SPEC
    try:
        return QuadratureSpec(abs_tol=args.tol, rel_tol=args.tol)
    except CherednikError as exc:
        raise _UsageError(str(exc)) from exc


def _require(args, name: str) -> str:
    value = getattr(args, name, None)
    if value is None:
        raise _UsageError(f"--{name} is required for '{args.command}'")
    return value


def _float_list(text: str) -> List[float]:
    try:
        values = [float(token) for token in text.split(",") if token.strip()]
    except ValueError:
        values = []
    if not values:
        raise _UsageError(f"expected comma-separated numbers, got {text!r}")
    return values


def _input_or_builtin(args) -> GridFunction:
    if args.input is not None:
        return _read_spatial(args.input)
    grid = _spatial_grid(args)
    return GridFunction(grid, _builtin_values(grid.nodes))


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    cfg = {}
    for lineno, line in enumerate(lines, 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise _UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = stripped.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _apply_config(args):
    cfg = _load_config(args.config) if args.config else {}
    unknown = sorted(set(cfg) - set(_CONFIG_KEYS))
    if unknown:
        raise _UsageError("unknown config keys: " + ", ".join(unknown))
    for key, cast in _CONFIG_KEYS.items():
        if getattr(args, key) is not None:
            continue  # explicit flag beats config beats default
        if key in cfg:
            try:
                setattr(args, key, cast(cfg[key]))
            except ValueError:
                raise _UsageError(
                    f"config value {key} = {cfg[key]!r} is not a number"
                ) from None
        else:
            setattr(args, key, _DEFAULTS[key])


# ----------------------------------------------------------------- CSV I/O


def _read_csv(path: str, columns: Tuple[str, ...]) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows or tuple(cell.strip() for cell in rows[0]) != columns:
        raise _UsageError(f"{path}: expected header {','.join(columns)}")
    body = [row for row in rows[1:] if row]
    if len(body) < 2:
        raise _UsageError(f"{path}: need at least 2 data rows")
    try:
        data = np.array([[float(cell) for cell in row] for row in body])
    except ValueError:
        raise _UsageError(f"{path}: non-numeric or ragged data rows") from None
    if data.ndim != 2 or data.shape[1] != len(columns):
        raise _UsageError(f"{path}: expected {len(columns)} columns per row")
    return data


def _read_spatial(path: str) -> GridFunction:
    data = _read_csv(path, _SPATIAL_COLUMNS)
    nodes = data[:, 0]
    try:
        grid = SpatialGrid(-nodes[0], nodes.size)
    except CherednikError as exc:
        raise _UsageError(f"{path}: {exc}") from exc
    if not np.allclose(grid.nodes, nodes, rtol=0.0, atol=1e-9 * grid.spacing):
        raise _UsageError(f"{path}: x column must be a uniform grid symmetric around 0")
    return GridFunction(grid, data[:, 1] + 1j * data[:, 2])


def _read_spectral(path: str) -> SpectralFunction:
    data = _read_csv(path, _SPECTRAL_COLUMNS)
    lam = data[:, 0]
    try:
        if lam.size % 2 == 1 and lam[0] == -lam[-1]:
            grid = SpectralGrid.symmetric(lam[-1], lam.size)
        else:
            grid = SpectralGrid(lam[0], lam[-1], lam.size)
    except CherednikError as exc:
        raise _UsageError(f"{path}: {exc}") from exc
    if not np.allclose(grid.real_nodes, lam, rtol=0.0, atol=1e-9 * grid.spacing):
        raise _UsageError(f"{path}: lambda column must be uniformly spaced")
    return SpectralFunction(grid, data[:, 1] + 1j * data[:, 2])


# ------------------------------------------------------------------ output


def _fmt(value) -> str:
    return format(float(value), ".17g")


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"


def _csv_text(columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else _fmt(cell) for cell in row])
    return buf.getvalue()


def _write_out(args, text: str):
    if args.output is None:
        sys.stdout.write(text)
        return
    try:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _UsageError(f"cannot write {args.output}: {exc.strerror or exc}") from exc


def _emit_table(args, columns: Sequence[str], rows):
    if args.output is not None and args.output.lower().endswith(".json"):
        payload = [dict(zip(columns, row)) for row in rows]
        _write_out(args, _json_text(payload))
    else:
        _write_out(args, _csv_text(columns, rows))


def _render_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, int, float, np.integer, np.floating)):
        return _fmt(value) if not isinstance(value, bool) else str(value).lower()
    return json.dumps(value, sort_keys=True, default=_json_default)


def _emit_report(args, fields: dict):
    if args.output is not None and args.output.lower().endswith(".csv"):
        rows = [(key, _render_cell(value)) for key, value in fields.items()]
        _write_out(args, _csv_text(("key", "value"), rows))
    else:
        _write_out(args, _json_text(fields))


def _emit_error(kind: str, message: str):
    obj = {"error": {"type": kind, "message": message}}
    sys.stderr.write(json.dumps(obj, sort_keys=True) + "\n")


# ------------------------------------------------------------- subcommands


def _cmd_eval_g(args) -> int:
    params = _params(args)
    if args.lam is not None:
        lams = _float_list(args.lam)
    else:
        lams = [float(v) for v in _spectral_grid(args).real_nodes]
    if args.x is not None:
        xs = np.asarray(_float_list(args.x))
    else:
        xs = _spatial_grid(args).nodes
    rows = []
    for lam in lams:
        vals = np.atleast_1d(opdam_g(params, lam, xs))
        rows.extend(
            (lam, float(x), float(v.real), float(v.imag)) for x, v in zip(xs, vals)
        )
    _emit_table(args, ("lambda", "x", "g_re", "g_im"), rows)
    return 0


def _cmd_transform(args) -> int:
    f = _read_spatial(_require(args, "input"))
    sgrid = _spectral_grid(args)
    hf = tr.forward_function(_params(args), f, sgrid)
    rows = [
        (float(lam), float(v.real), float(v.imag))
        for lam, v in zip(sgrid.real_nodes, hf.values)
    ]
    _emit_table(args, _SPECTRAL_COLUMNS, rows)
    return 0


def _cmd_inverse(args) -> int:
    g = _read_spectral(_require(args, "input"))
    xgrid = _spatial_grid(args)
    f = tr.inverse_function(_params(args), g, xgrid)
    rows = [
        (float(x), float(v.real), float(v.imag))
        for x, v in zip(xgrid.nodes, f.values)
    ]
    _emit_table(args, _SPATIAL_COLUMNS, rows)
    return 0


def _cmd_roundtrip(args) -> int:
    f = _input_or_builtin(args)
    _, err = tr.roundtrip(_params(args), f, _spectral_grid(args))
    _emit_report(args, {"relative_error": err})
    return 0


def _cmd_plancherel(args) -> int:
    f = _input_or_builtin(args)
    report = tr.plancherel_energy(_params(args), f, _spectral_grid(args))
    _emit_report(args, asdict(report))
    return 0


def _cmd_hy(args) -> int:
    params = _params(args)
    f = _input_or_builtin(args)
    sgrid = _spectral_grid(args)
    rows = []
    for p in _float_list(args.p):
        try:
            exponent = LebesgueExponent(p)
        except CherednikError as exc:
            raise _UsageError(str(exc)) from exc
        ratio = tr.hy_ratio(params, f, exponent, sgrid)
        rows.append((exponent.p, exponent.q, ratio))
    _emit_table(args, ("p", "q", "ratio"), rows)
    return 0


def _cmd_strip(args) -> int:
    params = _params(args)
    f = _input_or_builtin(args)
    try:
        exponent = LebesgueExponent(args.p)
    except CherednikError as exc:
        raise _UsageError(str(exc)) from exc
    eta = args.eta
    if eta is None:
        eta = 0.5 * strip_halfwidth(params, exponent)
    if args.xi is not None:
        xis = _float_list(args.xi)
    else:
        xis = [float(v) for v in _spectral_grid(args).real_nodes]
    rows = []
    for xi in xis:
        value, bound = tr.strip_eval(params, f, xi, eta, exponent)
        rows.append((xi, eta, value.real, value.imag, bound))
    _emit_table(args, ("xi", "eta", "h_re", "h_im", "bound"), rows)
    return 0


def _cmd_translate(args) -> int:
    params = _params(args)
    ctx = cv.calibrate(params, _spec(args))
    f = _input_or_builtin(args)
    rows = []
    for y in _float_list(_require(args, "y")):
        value = cv.translate(ctx, f, args.x, y)
        rows.append((y, value.real, value.imag))
    _emit_table(args, ("y", "tau_re", "tau_im"), rows)
    return 0


def _cmd_convolve(args) -> int:
    params = _params(args)
    ctx = cv.calibrate(params, _spec(args))
    f = _read_spatial(_require(args, "input"))
    g = _read_spatial(_require(args, "input2"))
    out = cv.convolve_grid(ctx, f, g, _spatial_grid(args))
    rows = [
        (float(x), float(v.real), float(v.imag))
        for x, v in zip(out.grid.nodes, out.values)
    ]
    _emit_table(args, _SPATIAL_COLUMNS, rows)
    return 0


def _cmd_kernel(args) -> int:
    params = _params(args)
    ctx = cv.calibrate(params, _spec(args))
    rows = []
    for z in _spatial_grid(args).nodes:
        if z == 0.0:
            continue  # the kernel's z section is not defined on the axes
        rows.append((float(z), cv.kernel_value(ctx, args.x, args.y, float(z))))
    _emit_table(args, ("z", "k"), rows)
    return 0


def _cmd_calibrate(args) -> int:
    params = _params(args)
    ctx = cv.calibrate(params, _spec(args))
    _emit_report(args, {"alpha": params.alpha, "beta": params.beta, "M": ctx.M})
    return 0


def _cmd_pw_radius(args) -> int:
    params = _params(args)
    if args.route == "operator":
        f = _input_or_builtin(args)
        n_max = 2 if args.n_max is None else args.n_max
        report = pw.operator_radius(params, f, n_max)
    else:
        if args.input is not None:
            g = _read_spectral(args.input)
        else:
            sgrid = _spectral_grid(args)
            g = SpectralFunction(sgrid, _builtin_spectral_values(sgrid.real_nodes))
        n_max = 64 if args.n_max is None else args.n_max
        report = pw.spectral_radius(params, g, n_max)
    _emit_report(args, asdict(report))
    return 0


def _cmd_pw_type(args) -> int:
    f = _input_or_builtin(args)
    slope = pw.exponential_type(
        _params(args), f, (args.eta_min, args.eta_max), args.samples
    )
    _emit_report(
        args,
        {
            "eta_min": args.eta_min,
            "eta_max": args.eta_max,
            "samples": args.samples,
            "slope": slope,
        },
    )
    return 0


def _cmd_pw_member(args) -> int:
    f = _input_or_builtin(args)
    report = pw.pw_membership(_params(args), f, args.m_max, args.n_max)
    _emit_report(args, asdict(report))
    return 0


_HANDLERS = {
    "eval-g": _cmd_eval_g,
    "transform": _cmd_transform,
    "inverse": _cmd_inverse,
    "roundtrip": _cmd_roundtrip,
    "plancherel": _cmd_plancherel,
    "hy": _cmd_hy,
    "strip": _cmd_strip,
    "translate": _cmd_translate,
    "convolve": _cmd_convolve,
    "kernel": _cmd_kernel,
    "calibrate": _cmd_calibrate,
    "pw-radius": _cmd_pw_radius,
    "pw-type": _cmd_pw_type,
    "pw-member": _cmd_pw_member,
}


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--alpha", type=float, help="first parameter (> -1/2, >= beta)")
    parser.add_argument("--beta", type=float, help="second parameter (>= -1/2)")
    parser.add_argument("--x-max", dest="x_max", type=float,
                        help="spatial grid half-width")
    parser.add_argument("--x-steps", dest="x_steps", type=int,
                        help="spatial grid point count (odd)")
    parser.add_argument("--lambda-max", dest="lambda_max", type=float,
                        help="spectral grid extent")
    parser.add_argument("--lambda-steps", dest="lambda_steps", type=int,
                        help="spectral grid point count (odd)")
    parser.add_argument("--tol", type=float,
                        help="quadrature tolerance (absolute and relative)")
    parser.add_argument("--input", help="input CSV path")
    parser.add_argument("--output",
                        help="output path; a .json suffix selects JSON, "
                             "a .csv suffix a table (default: stdout)")
    parser.add_argument("--config",
                        help="'key = value' file supplying defaults for the "
                             "flags above")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cherednik",
        description="Transform-pair computations on sampled functions: "
                    "eigenfunction tables, forward/inverse transforms, "
                    "Plancherel and norm-inequality checks, product-formula "
                    "convolution, and support-radius estimators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        return p

    p = add("eval-g", "table of eigenfunction values G_lambda(x)")
    p.add_argument("--lambda", dest="lam", metavar="LIST",
                   help="comma-separated lambda values (default: spectral grid)")
    p.add_argument("--x", metavar="LIST",
                   help="comma-separated x values (default: spatial grid)")

    add("transform", "forward transform of an input CSV function")
    add("inverse", "inverse transform of an input spectral CSV")
    add("roundtrip",
        "inverse-of-forward relative error (built-in function when no --input)")
    add("plancherel", "spatial energy against both spectral energy forms")

    p = add("hy", "norm ratio ||Hf||_q / ||f||_p over a list of exponents")
    p.add_argument("--p", default="1,1.2,1.5,2", metavar="LIST",
                   help="comma-separated exponents in [1,2]")

    p = add("strip", "transform values on a horizontal line inside the "
                     "L^p holomorphy strip, with their Hoelder bounds")
    p.add_argument("--p", type=float, default=1.2, help="exponent in [1,2]")
    p.add_argument("--eta", type=float,
                   help="imaginary part (default: half the strip half-width)")
    p.add_argument("--xi", metavar="LIST",
                   help="comma-separated real parts (default: spectral grid)")

    p = add("translate", "generalized translation tau_x f at given points")
    p.add_argument("--x", type=float, required=True, help="translation offset")
    p.add_argument("--y", metavar="LIST", help="comma-separated evaluation points")

    p = add("convolve", "convolution of two input CSV functions on the x grid")
    p.add_argument("--input2", help="second input CSV (the right factor)")

    p = add("kernel", "product-formula kernel slice K(x, y, .) over the x grid")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)

    add("calibrate", "kernel mass constant for the given parameters")

    p = add("pw-radius", "support-radius estimate from spectral moments "
                         "(or Laplacian powers with --route operator)")
    p.add_argument("--n-max", dest="n_max", type=int,
                   help="top moment order (default 64; 2 on the operator route)")
    p.add_argument("--route", choices=("spectral", "operator"), default="spectral")

    p = add("pw-type", "least-squares exponential type of the transform "
                       "up the imaginary axis")
    p.add_argument("--eta-min", dest="eta_min", type=float, default=5.0)
    p.add_argument("--eta-max", dest="eta_max", type=float, default=15.0)
    p.add_argument("--samples", type=int, default=21)

    p = add("pw-member", "weighted-norm membership table")
    p.add_argument("--m-max", dest="m_max", type=int, default=3)
    p.add_argument("--n-max", dest="n_max", type=int, default=4)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv (sys.argv[1:] when None) and execute; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        _apply_config(args)
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except CherednikError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1


def main():
    sys.exit(run())
