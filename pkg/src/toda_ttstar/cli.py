"""Command-line front end.

Exit codes: 0 success, 2 malformed input, 3 solver non-convergence,
4 a verification failed. Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .classify import (
    canonicalize_to_toda_frame,
    classify_frame,
    classify_tuple,
    normalization_shift,
    normalize_l,
    reduce_system,
)
from .core import FrameStructure, check_zn_symmetry, validate_ttstar_frame
from .errors import ConvergenceError, NotFixedPointError, TodaError
from .identities import run_identity_suite
from .solver.radial import (
    AsymptoticData,
    GridSpec,
    SolverOptions,
    extract_asymptotics,
    parse_solve_request,
    read_csv,
    solution_to_csv,
    solve_radial_toda,
)
from .walgebra import fraction_str, minimal_model_data, to_fraction

log = logging.getLogger("toda_ttstar")

EXIT_OK, EXIT_SCHEMA, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 2, 3, 4

COMMANDS = ("validate", "classify", "normalize", "reduce", "solve", "asymptotics", "ceff", "verify-identities")

# builtin values for options that may also come from --config
DEFAULTS: dict[str, Any] = {
    "tol": None,
    "grid_points": None,
    "x_min": None,
    "x_max": None,
    "arithmetic": "float",
    "jobs": 1,
    "format": None,
    "window": 5,
    "n_max": 8,
    "samples": 50,
}


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.payload = {"error": kind, "message": message, **extra}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_SCHEMA, "usage", message)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_input(source: str | None) -> Any:
    """--input is either inline JSON or a path to a JSON file."""
    if source is None:
        raise CliError(EXIT_SCHEMA, "schema", "--input is required for this command")
    text = source.strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise CliError(EXIT_SCHEMA, "schema", f"cannot read input {source!r}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_SCHEMA, "schema", f"invalid JSON: {exc}") from exc


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise CliError(EXIT_SCHEMA, "schema", "input must be a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise CliError(EXIT_SCHEMA, "schema", f"missing field(s): {', '.join(missing)}")


def _exact(v) -> str:
    return fraction_str(Fraction(v))


def _values(obj, key: str, exact: bool) -> tuple:
    raw = obj[key]
    if not isinstance(raw, list):
        raise CliError(EXIT_SCHEMA, "schema", f"{key!r} must be a list")
    if exact:
        return tuple(to_fraction(v) for v in raw)
    try:
        return tuple(float(v) for v in raw)
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_SCHEMA, "schema", f"bad value in {key!r}: {exc}") from exc


# -- commands -----------------------------------------------------------------

def cmd_validate(args) -> tuple[int, str]:
    s = FrameStructure.from_dict(_load_input(args.input))
    tol = args.tol or 1e-12
    report = validate_ttstar_frame(s, tol)
    out = report.to_dict()
    out["zn_symmetric"] = bool(check_zn_symmetry(s, tol))
    return (EXIT_OK if report.passed else EXIT_VERIFY), _dump(out)


def cmd_classify(args) -> tuple[int, str]:
    obj = _load_input(args.input)
    if isinstance(obj, dict) and "eta" in obj:
        s = FrameStructure.from_dict(obj)
        tol = args.tol or 1e-10
        try:
            report = classify_frame(s, tol).to_dict()
            canon = canonicalize_to_toda_frame(s, tol)
        except NotFixedPointError as exc:
            raise CliError(EXIT_VERIFY, "not_fixed_point", str(exc)) from exc
        report["w"] = list(canon.w)
        report["u0"] = {"re": canon.u0.real, "im": canon.u0.imag}
        report["residual"] = canon.residual
        return EXIT_OK, _dump(report)
    _require(obj, "n", "values")
    report = classify_tuple(int(obj["n"]), int(obj.get("l", 0)), _values(obj, "values", False))
    return EXIT_OK, _dump(report.to_dict())


def cmd_normalize(args) -> tuple[int, str]:
    obj = _load_input(args.input)
    _require(obj, "n", "l", "values")
    exact = args.arithmetic == "exact"
    vals = _values(obj, "values", exact)
    res = normalize_l(int(obj["n"]), int(obj["l"]), vals, tol=0 if exact else (args.tol or 1e-12))
    values = [_exact(v) for v in res.values] if exact else list(res.values)
    return EXIT_OK, _dump({"n": int(obj["n"]), "l": int(obj["l"]), "l_new": res.l_new, "shift": res.shift,
                           "values": values})


def cmd_reduce(args) -> tuple[int, str]:
    obj = _load_input(args.input)
    _require(obj, "n", "l")
    n, l = int(obj["n"]), int(obj["l"])
    l_new, shift = normalization_shift(n, l)
    out = reduce_system(n, l_new).to_dict()
    out["l_input"], out["shift"] = l, shift
    return EXIT_OK, _dump(out)


def _solve_overrides(args) -> tuple[dict, dict]:
    grid = {k: v for k, v in (("x_min", args.x_min), ("x_max", args.x_max), ("points", args.grid_points))
            if v is not None}
    opts = {"tol": args.tol} if args.tol is not None else {}
    return grid, opts


def _solve_record(payload: tuple[dict, dict, dict, int]) -> dict:
    """Worker: solve one request; never raises, so a batch always completes."""
    record, grid_over, opts_over, window = payload
    try:
        data, grid, opts = parse_solve_request(record)
        grid = GridSpec(**{**grid.__dict__, **grid_over})
        opts = SolverOptions(**{**opts.__dict__, **opts_over})
        sol = solve_radial_toda(data, grid, opts)
    except ConvergenceError as exc:
        return {"status": EXIT_CONVERGENCE, "error": {"error": "convergence", "message": str(exc),
                                                      "residual": exc.residual, "iterations": exc.iterations}}
    except (TodaError, ValueError, TypeError) as exc:
        return {"status": EXIT_SCHEMA, "error": {"error": "schema", "message": str(exc)}}
    summary = sol.summary(window)
    summary["converged"] = True
    summary["window"] = window
    return {"status": EXIT_OK, "summary": summary, "csv": solution_to_csv(sol),
            "solution": {"x": sol.x.tolist(), "w": sol.w.tolist()}}


def cmd_solve(args) -> tuple[int, str]:
    obj = _load_input(args.input)
    batch = isinstance(obj, list) or (isinstance(obj, dict) and "records" in obj)
    records = obj if isinstance(obj, list) else obj.get("records", [obj])
    if not records or not all(isinstance(r, dict) for r in records):
        raise CliError(EXIT_SCHEMA, "schema", "solve input must be a request object or a list of them")
    grid_over, opts_over = _solve_overrides(args)
    fmt = args.format or "csv"
    payloads = [(r, grid_over, opts_over, args.window) for r in records]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_solve_record, payloads))
    else:
        results = [_solve_record(p) for p in payloads]

    if not batch:
        res = results[0]
        if res["status"] != EXIT_OK:
            raise CliError(res["status"], res["error"]["error"], res["error"]["message"],
                           **{k: v for k, v in res["error"].items() if k not in ("error", "message")})
        if args.output:
            out = Path(args.output)
            if fmt == "csv":
                out.write_text(res["csv"])
            else:
                out.write_text(_dump(res["solution"]))
            out.with_suffix(".summary.json").write_text(_dump(res["summary"]))
        return EXIT_OK, _dump(res["summary"])

    if not args.output:
        raise CliError(EXIT_SCHEMA, "schema", "batch solve needs --output DIR for per-record files")
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    index, status = [], EXIT_OK
    for i, res in enumerate(results):
        stem = outdir / f"record_{i:03d}"
        if res["status"] == EXIT_OK:
            if fmt == "csv":
                stem.with_suffix(".csv").write_text(res["csv"])
            else:
                stem.with_suffix(".json").write_text(_dump(res["solution"]))
            stem.with_suffix(".summary.json").write_text(_dump(res["summary"]))
            index.append({"record": i, "status": "ok", "m_hat": res["summary"]["m_hat"]})
        else:
            status = max(status, res["status"])
            index.append({"record": i, "status": "failed", **res["error"]})
    return status, _dump({"records": index})


def cmd_asymptotics(args) -> tuple[int, str]:
    if args.input is None:
        raise CliError(EXIT_SCHEMA, "schema", "--input must name a solution CSV")
    path = Path(args.input)
    if not path.exists():
        raise CliError(EXIT_SCHEMA, "schema", f"no such file: {args.input}")
    sol = read_csv(path)
    return EXIT_OK, _dump({"m_hat": list(extract_asymptotics(sol, args.window)), "window": args.window})


def cmd_ceff(args) -> tuple[int, str]:
    obj = _load_input(args.input)
    _require(obj, "m")
    Q = obj.get("Q")
    if "n" in obj:
        m = tuple(to_fraction(v) for v in obj["m"])
        data = AsymptoticData(int(obj["n"]), int(obj.get("l", 0)), m)
    else:
        data = obj["m"]
    return EXIT_OK, _dump(minimal_model_data(data, Q=Q).to_dict())


def cmd_verify_identities(args) -> tuple[int, str]:
    if args.n_max < 1:
        raise CliError(EXIT_SCHEMA, "schema", "--n-max must be >= 1")
    results = run_identity_suite(args.n_max, args.samples)
    ok = all(r.passed for r in results)
    if (args.format or "text") == "json":
        text = _dump({"passed": ok, "results": [
            {"name": r.name, "params": r.params, "passed": r.passed} for r in results]})
    else:
        text = "".join(r.line() + "\n" for r in results)
        text += f"{sum(r.passed for r in results)}/{len(results)} identities hold\n"
    return (EXIT_OK if ok else EXIT_VERIFY), text


HANDLERS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "normalize": cmd_normalize,
    "reduce": cmd_reduce,
    "solve": cmd_solve,
    "asymptotics": cmd_asymptotics,
    "ceff": cmd_ceff,
    "verify-identities": cmd_verify_identities,
}


# -- parsing --------------------------------------------------------------------

def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toda-ttstar", description="Toda-type tt*-structures: classify, normalize, solve.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="inline JSON or a path (CSV for asymptotics)")
    p.add_argument("--output", help="output file, or directory for batch solves")
    p.add_argument("--config", help="JSON file with option defaults; flags win")
    p.add_argument("--tol", type=_positive(float))
    p.add_argument("--grid-points", type=_positive(int))
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--arithmetic", choices=("float", "exact"))
    p.add_argument("--jobs", type=_positive(int))
    p.add_argument("--format", choices=("json", "csv", "text"))
    p.add_argument("--window", type=_positive(int))
    p.add_argument("--n-max", type=int)
    p.add_argument("--samples", type=_positive(int))
    for key in DEFAULTS:
        p.set_defaults(**{key: None})
    return p


def _apply_config(args) -> None:
    config = {}
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(EXIT_SCHEMA, "schema", f"cannot load config {args.config!r}: {exc}") from exc
        if not isinstance(config, dict):
            raise CliError(EXIT_SCHEMA, "schema", "config must be a JSON object")
        unknown = set(config) - set(DEFAULTS) - {"input", "output"}
        if unknown:
            raise CliError(EXIT_SCHEMA, "schema", f"unknown config keys: {sorted(unknown)}")
    for key, default in {**DEFAULTS, "input": None, "output": None}.items():
        if getattr(args, key) is None:
            setattr(args, key, config.get(key, default))
    if args.tol is not None and not args.tol > 0:
        raise CliError(EXIT_SCHEMA, "schema", "tol must be positive")


def _setup_logging() -> None:
    level = os.environ.get("TODA_TTSTAR_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    try:
        args = build_parser().parse_args(argv)
        _apply_config(args)
        log.info("command %s", args.command)
        code, text = HANDLERS[args.command](args)
    except CliError as exc:
        sys.stderr.write(json.dumps(exc.payload, sort_keys=True) + "\n")
        return exc.code
    except ConvergenceError as exc:
        sys.stderr.write(json.dumps({"error": "convergence", "message": str(exc)}, sort_keys=True) + "\n")
        return EXIT_CONVERGENCE
    except (TodaError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(json.dumps({"error": "schema", "message": str(exc)}, sort_keys=True) + "\n")
        return EXIT_SCHEMA
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
