"""Command-line front end.

Commands: ``structure``, ``state``, ``verify``, ``distributions``. A run is
configured by a JSON file (``--config``) with individual flags overriding it.
Exit codes: 0 all checks pass, 1 numeric failure, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .algebra import build_structure
from .errors import HyperCSError
from .matrixstates import DiagonalLabel, make_matrix_state
from .specfun import ModelParams
from .thermal import (
    LinearSpectrum,
    VerificationReport,
    entropy_closed,
    entropy_matrix_route,
    entropy_series,
    husimi_q,
    p_function_linear,
    reproduce_two_level_ho,
    thermal_two_level,
    verify_identity_resolution,
    verify_p_moments,
)

log = logging.getLogger("hypercs")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("identity", "pmoments", "entropy", "twolevel")
DEFAULT_TOLERANCES = {"moment": 1e-6, "quad": 1e-10, "entropy": 1e-9, "twolevel": 1e-8}
ENTROPY_GRID = (0.1, 0.25, 0.5, 0.75, 0.9)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    n_max: int = 40
    beta: float = 1.0
    hbar_omega: float = 1.0
    e0: float = 0.0
    label: DiagonalLabel = field(default_factory=lambda: DiagonalLabel(0, 0))
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_path: Optional[str] = None
    format: str = "json"
    truncate_norm: bool = True

    def validate(self) -> "RunConfig":
        if self.n_max < 1:
            raise ConfigError("n_max must be >= 1")
        if not self.beta > 0:
            raise ConfigError("beta must be positive")
        if not self.hbar_omega >= 0:
            raise ConfigError("hbar_omega must be non-negative")
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise ConfigError(f"tolerance {name!r} must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        return self

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "n_max": self.n_max,
            "beta": self.beta,
            "hbar_omega": self.hbar_omega,
            "e0": self.e0,
            "label": self.label.to_json(),
            "tolerances": self.tolerances,
            "output_path": self.output_path,
            "format": self.format,
            "truncate_norm": self.truncate_norm,
        }


_CONFIG_KEYS = set(RunConfig().to_json())


def config_from_json(obj: dict) -> RunConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(obj) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig()
    try:
        if "params" in obj:
            cfg.params = ModelParams.from_json(obj["params"])
        if "label" in obj:
            cfg.label = DiagonalLabel.from_json(obj["label"])
        for key in ("beta", "hbar_omega", "e0"):
            if key in obj:
                setattr(cfg, key, float(obj[key]))
        if "n_max" in obj:
            cfg.n_max = int(obj["n_max"])
        if "tolerances" in obj:
            cfg.tolerances = {**DEFAULT_TOLERANCES,
                              **{k: float(v) for k, v in obj["tolerances"].items()}}
        for key in ("output_path", "format"):
            if key in obj:
                setattr(cfg, key, obj[key])
        if "truncate_norm" in obj:
            cfg.truncate_norm = bool(obj["truncate_norm"])
    except (TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from None
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return config_from_json(obj)


def _floats(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(v) for v in text.split(","))


def _complex(text: str) -> complex:
    parts = _floats(text)
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    return complex(*parts)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    try:
        if args.params_a is not None or args.params_b is not None:
            upper = _floats(args.params_a) if args.params_a is not None else cfg.params.upper
            lower = _floats(args.params_b) if args.params_b is not None else cfg.params.lower
            cfg.params = ModelParams(upper, lower)
    except ValueError as exc:
        raise ConfigError(f"invalid parameters: {exc}") from None
    for key in ("n_max", "beta", "hbar_omega", "e0"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, val)
    if args.z is not None or args.sigma is not None:
        cfg.label = DiagonalLabel(
            args.z if args.z is not None else cfg.label.z,
            args.sigma if args.sigma is not None else cfg.label.sigma,
        )
    if args.tol is not None:
        cfg.tolerances = {**cfg.tolerances, "moment": args.tol}
    if args.out is not None:
        cfg.output_path = args.out
    if args.format is not None:
        cfg.format = args.format
    if args.truncate_norm is not None:
        cfg.truncate_norm = args.truncate_norm
    return cfg.validate()


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return v


def render(payload: dict, columns: list, rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({**payload, "columns": columns, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
        log.info("wrote %s", cfg.output_path)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_structure(cfg: RunConfig) -> int:
    table = build_structure(cfg.params, cfg.n_max)
    rows = [{"n": n, "e": float(table.e[n]), "rho": float(table.rho[n])}
            for n in range(table.dim)]
    payload = {"command": "structure", "params": cfg.params.to_json(),
               "gamma_ratio": table.gamma_ratio}
    emit(render(payload, ["n", "e", "rho"], rows, cfg.format), cfg)
    return EXIT_OK


def cmd_state(cfg: RunConfig) -> int:
    table = build_structure(cfg.params, cfg.n_max)
    state = make_matrix_state(table, cfg.label, truncate_norm=cfg.truncate_norm)
    rows = []
    for slot, comp in enumerate(state.components()):
        for n, c in enumerate(comp.coeffs):
            if c == 0:
                continue
            rows.append({"slot": slot, "n": n, "re": float(c.real), "im": float(c.imag),
                         "prob": float(abs(c) ** 2)})
    payload = {"command": "state", "params": cfg.params.to_json(),
               "label": cfg.label.to_json(), "truncate_norm": cfg.truncate_norm}
    emit(render(payload, ["slot", "n", "re", "im", "prob"], rows, cfg.format), cfg)
    return EXIT_OK


def _entropy_report(cfg: RunConfig) -> VerificationReport:
    tol = cfg.tolerances["entropy"]
    report = VerificationReport("entropy closed form vs log series", tol)
    model = thermal_two_level(cfg.beta, cfg.e0, cfg.e0 + cfg.hbar_omega)
    cases = [("config", model.weights)] + [(f"w0={w0:g}", np.array([w0, 1.0 - w0]))
                                           for w0 in ENTROPY_GRID]
    for name, w in cases:
        closed = entropy_closed(w)
        series = entropy_series(w, tol=1e-14)
        matrix = entropy_matrix_route(w, tol=1e-14)
        report.rows.append({
            "n": name, "lhs": series, "rhs": closed,
            "rel_err": max(abs(series - closed), abs(matrix - closed)),
            "matrix_route": matrix, "w0": float(w[0]),
        })
    report.checks["max_mixed_is_ln2"] = {
        "passed": entropy_closed([0.5, 0.5]) == math.log(2), "value": entropy_closed([0.5, 0.5])}
    report.checks["pure_is_zero"] = {
        "passed": entropy_closed([1.0, 0.0]) == 0.0, "value": entropy_closed([1.0, 0.0])}
    return report


def run_suite(name: str, cfg: RunConfig) -> VerificationReport:
    tol = cfg.tolerances
    if name == "identity":
        return verify_identity_resolution(cfg.params, range(11), tol["quad"], tol["moment"])
    if name == "pmoments":
        spec = LinearSpectrum(cfg.hbar_omega, cfg.e0)
        return verify_p_moments(spec, cfg.beta, cfg.params, range(9), tol["quad"], tol["moment"])
    if name == "entropy":
        return _entropy_report(cfg)
    if name == "twolevel":
        return reproduce_two_level_ho(cfg.beta, cfg.hbar_omega, tol["twolevel"])
    raise ConfigError(f"unknown suite {name!r}")


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    names = SUITES if suite == "all" else (suite,)
    reports = []
    for name in names:
        try:
            report = run_suite(name, cfg)
        except HyperCSError as exc:
            log.error("suite %s failed: %s", name, exc)
            report = VerificationReport(name, float("nan"))
            report.checks["error"] = {"passed": False, "value": str(exc)}
        reports.append((name, report))
        status = "PASS" if report.passed else "FAIL"
        print(f"[{status}] {name}: {report.name} (max err {report.max_rel_err:.3e}, "
              f"tol {report.tolerance:g})", file=sys.stderr)
    ok = all(r.passed for _, r in reports)
    payload = {"command": "verify", "suite": suite, "passed": ok, "config": cfg.to_json(),
               "reports": {name: r.to_dict() for name, r in reports}}
    if cfg.format == "json":
        emit(json.dumps(payload, indent=2) + "\n", cfg)
    else:
        rows = [{"suite": name, "n": row["n"], "lhs": row["lhs"], "rhs": row["rhs"],
                 "rel_err": row["rel_err"], "passed": r.passed}
                for name, r in reports for row in r.rows]
        emit(render({}, ["suite", "n", "lhs", "rhs", "rel_err", "passed"], rows, "csv"), cfg)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_distributions(cfg: RunConfig, points: int, x_min: float, x_max: float) -> int:
    if points < 1:
        raise ConfigError("grid needs at least one point")
    if not 0 < x_min <= x_max:
        raise ConfigError("need 0 < x_min <= x_max")
    grid = np.geomspace(x_min, x_max, points)
    table = build_structure(cfg.params, cfg.n_max)
    spec = LinearSpectrum(cfg.hbar_omega, cfg.e0)
    model = spec.model(cfg.beta, cfg.n_max + 1)
    q = np.atleast_1d(husimi_q(model, table, grid, truncate_norm=cfg.truncate_norm))
    try:
        p = np.atleast_1d(p_function_linear(spec, cfg.beta, cfg.params, grid))
    except (OverflowError, ValueError) as exc:
        log.warning("P-function unavailable: %s", exc)
        p = np.full_like(grid, np.nan)
    rows = [{"x": float(x), "Q": float(qv), "P": float(pv)} for x, qv, pv in zip(grid, q, p)]
    payload = {"command": "distributions", "config": cfg.to_json()}
    emit(render(payload, ["x", "Q", "P"], rows, cfg.format), cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration; flags override it")
    p.add_argument("--params-a", help="comma-separated upper parameters a_i")
    p.add_argument("--params-b", help="comma-separated lower parameters b_j")
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--beta", type=float)
    p.add_argument("--hbar-omega", type=float, dest="hbar_omega")
    p.add_argument("--e0", type=float)
    p.add_argument("--z", type=_complex, help="slot-0 label as re,im")
    p.add_argument("--sigma", type=_complex, help="slot-1 label as re,im")
    p.add_argument("--tol", type=float, help="relative tolerance for moment checks")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--truncate-norm", action=argparse.BooleanOptionalAction, default=None,
                   help="normalize with the truncated series (default) or the full pFq")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercs",
        description="Matrix-argument hypergeometric coherent states: tables and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("structure", help="tabulate e(n) and rho(n)"))
    _common(sub.add_parser("state", help="slot coefficients of |z u0 + sigma u1>"))
    p_verify = sub.add_parser("verify", help="run verification suites")
    _common(p_verify)
    p_verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p_dist = sub.add_parser("distributions", help="sample Q and P on a log grid")
    _common(p_dist)
    p_dist.add_argument("--grid-points", type=int, default=200)
    p_dist.add_argument("--x-min", type=float, default=1e-3)
    p_dist.add_argument("--x-max", type=float, default=1e3)
    return parser


def _setup_logging() -> None:
    level = os.environ.get("HYPERCS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = resolve_config(args)
        if args.command == "structure":
            return cmd_structure(cfg)
        if args.command == "state":
            return cmd_state(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite)
        return cmd_distributions(cfg, args.grid_points, args.x_min, args.x_max)
    except ConfigError as exc:
        print(f"hypercs: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HyperCSError, OverflowError, ArithmeticError) as exc:
        print(f"hypercs: numeric failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
