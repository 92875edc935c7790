"""Command-line interface.

Usage::

    relalter gamma --velocity 0.6c
    relalter gamma --mass 5.9722e24 --radius 6.371e6
    relalter alter --mass 1 --gamma 0.8
    relalter verify --op laplacian --n 1000 --modes 5 --gamma 0.5,0.9,0.999
    relalter verify --op hj --gamma 0.8
    relalter eigen --op laplacian --n 100 --modes 3

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .alterations import RULE_TEXT, MeasuredQuantity, QuantityKind, alter, fractional_shift
from .exceptions import ConvergenceError, InvalidInputError, RelalterError
from .hamilton_jacobi import (
    DEFAULT_HJ_RESIDUAL_TOL,
    DEFAULT_MASS_INVARIANCE_TOL,
    hj_closed_family,
    hj_residual,
    verify_mass_invariance,
)
from .metric import (
    CODATA_2018,
    AlterationFactor,
    Constants,
    GravitationalSource,
    KinematicFrame,
    schwarzschild_lambda,
    special_lambda,
)
from .sepvar import (
    DEFAULT_EIGEN_RESIDUAL_TOL,
    DEFAULT_FD_TOL,
    DEFAULT_FRAME_SCALING_TOL,
    Grid1D,
    discretize,
    eigenmodes,
    eigenvalues,
    load_matrix_csv,
    verify_frame_scaling,
)

__all__ = ["RunConfig", "main", "build_parser"]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

TOLERANCE_KEYS = ("eigen_residual", "frame_scaling", "frame_scaling_fd", "hj_residual", "mass_invariance")
DEFAULT_TOLERANCES = {
    "eigen_residual": DEFAULT_EIGEN_RESIDUAL_TOL,
    "frame_scaling": DEFAULT_FRAME_SCALING_TOL,
    "frame_scaling_fd": DEFAULT_FD_TOL,
    "hj_residual": DEFAULT_HJ_RESIDUAL_TOL,
    "mass_invariance": DEFAULT_MASS_INVARIANCE_TOL,
}


@dataclass
class RunConfig:
    constants: Constants = CODATA_2018
    output_format: str = "json"
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0

    def __post_init__(self):
        if self.output_format not in ("json", "csv"):
            raise InvalidInputError(f"output format must be json or csv, got {self.output_format!r}")
        unknown = set(self.tolerances) - set(TOLERANCE_KEYS)
        if unknown:
            raise InvalidInputError(f"unknown tolerance keys: {sorted(unknown)}")
        for key, value in self.tolerances.items():
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidInputError(f"tolerance {key} must be > 0, got {value!r}")

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        """Defaults, overlaid with a JSON config file when ``path`` is given."""
        if path is None:
            return cls()
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise InvalidInputError(f"{path}: expected a JSON object")
        unknown = set(data) - {"constants", "tolerances", "output_format", "seed"}
        if unknown:
            raise InvalidInputError(f"{path}: unknown keys {sorted(unknown)}")
        tolerances = dict(DEFAULT_TOLERANCES)
        tolerances.update(data.get("tolerances", {}))
        return cls(
            constants=Constants.from_mapping(data.get("constants", {})),
            output_format=data.get("output_format", "json"),
            tolerances=tolerances,
            seed=int(data.get("seed", 0)),
        )


# --------------------------------------------------------------------------
# argument parsing


def parse_velocity(text: str, c: float) -> float:
    """``"0.6c"`` -> 0.6 * c; plain numbers are m/s."""
    s = text.strip()
    try:
        if s.lower().endswith("c"):
            return float(s[:-1]) * c
        return float(s)
    except ValueError:
        raise InvalidInputError(f"cannot parse velocity {text!r}") from None


def parse_float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: usage error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config with constants{G,c,h_planck} and tolerances{...}")
    common.add_argument("--format", choices=("json", "csv"), dest="output_format", default=None)
    common.add_argument("--seed", type=int, default=None, help="seed for randomized sweeps")

    parser = _Parser(prog="relalter", description="Relativistic alteration factors and separation-of-variables checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gamma", parents=[common], help="compute lambda and gamma")
    p.add_argument("--mass", type=float, help="source mass, kg")
    p.add_argument("--radius", type=float, help="radial coordinate, m")
    p.add_argument("--velocity", help="relative velocity, m/s or with a c suffix (0.6c)")
    p.set_defaults(handler=cmd_gamma)

    p = sub.add_parser("alter", parents=[common], help="apply an alteration rule")
    q = p.add_mutually_exclusive_group(required=True)
    q.add_argument("--frequency", type=float, help="s-frame frequency, Hz")
    q.add_argument("--energy", type=float, help="s-frame energy gap, J")
    q.add_argument("--mass", type=float, help="s-frame mass, kg")
    q.add_argument("--rate", type=float, help="s-frame separation constant / decay rate, 1/s")
    p.add_argument("--gamma", type=float, help="alteration factor gamma in (0, 1]")
    p.add_argument("--velocity", help="relative velocity, m/s or with a c suffix")
    p.add_argument("--source-mass", type=float, help="gravitating mass, kg")
    p.add_argument("--source-radius", type=float, help="radius in the gravitational field, m")
    p.set_defaults(handler=cmd_alter)

    p = sub.add_parser("verify", parents=[common], help="run frame-scaling / Hamilton-Jacobi checks")
    _operator_args(p, ops=("laplacian", "schrodinger", "custom", "hj"))
    p.add_argument("--gamma", type=parse_float_list, default=[0.5, 0.9, 0.999], help="comma-separated gamma values")
    p.add_argument("--eigen-residual-tol", type=float)
    p.add_argument("--frame-tol", type=float)
    p.add_argument("--fd-tol", type=float)
    p.add_argument("--hj-tol", type=float)
    p.add_argument("--mass-tol", type=float)
    p.add_argument("--hj-mass", type=float, default=1.0, help="s-frame mass for --op hj")
    p.add_argument("--amplitude", type=float, default=1.0, help="h(r) = A r^2 amplitude for --op hj")
    p.add_argument("--C", type=float, default=1.0, help="integration constant for --op hj")
    p.add_argument("--families", type=int, default=10, help="random HJ families to residual-check")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("eigen", parents=[common], help="dump eigenvalues (and modes) as CSV")
    _operator_args(p, ops=("laplacian", "schrodinger", "custom"))
    p.add_argument("--eigen-residual-tol", type=float)
    p.add_argument("--modes-out", help="also write x, mode_0, mode_1, ... to this CSV file")
    p.set_defaults(handler=cmd_eigen)
    return parser


def _operator_args(p: argparse.ArgumentParser, ops: Sequence[str]) -> None:
    p.add_argument("--op", choices=ops, required=True)
    p.add_argument("--n", type=int, default=100, help="interior grid points")
    p.add_argument("--length", type=float, default=1.0, help="interval length")
    p.add_argument("--modes", type=int, default=5)
    p.add_argument("--potential", type=float, default=1.0, help="constant potential p for --op schrodinger")
    p.add_argument("--matrix", help="CSV file with a symmetric matrix for --op custom")
    p.add_argument("--k", type=float, default=1.0, help="constant k of D(T) = k dT/dt")


# --------------------------------------------------------------------------
# output


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(records: Iterable[dict], fmt: str, out=None) -> None:
    """JSON lines, or CSV with the union of keys as header.

    Floats are written with ``repr``, the shortest string that parses back
    to the same double.
    """
    out = out or sys.stdout
    records = list(records)
    if fmt == "json":
        for rec in records:
            out.write(json.dumps(rec, allow_nan=False) + "\n")
        return
    header: list[str] = []
    for rec in records:
        header.extend(k for k in rec if k not in header)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        writer.writerow([_format_value(rec[k]) if k in rec else "" for k in header])


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config)
    if args.output_format is not None:
        cfg.output_format = args.output_format
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _tolerance(args, cfg: RunConfig, flag: str, key: str) -> float:
    value = getattr(args, flag, None)
    if value is None:
        return cfg.tolerances[key]
    if not (math.isfinite(value) and value > 0):
        raise InvalidInputError(f"--{flag.replace('_', '-')} must be > 0")
    return value


# --------------------------------------------------------------------------
# commands


def cmd_gamma(args) -> int:
    cfg = _config(args)
    gravitational = args.mass is not None or args.radius is not None
    if gravitational == (args.velocity is not None):
        raise InvalidInputError("give exactly one of --mass/--radius or --velocity")
    if gravitational:
        if args.mass is None or args.radius is None:
            raise InvalidInputError("--mass and --radius go together")
        factor = schwarzschild_lambda(GravitationalSource(args.mass, args.radius), cfg.constants)
    else:
        factor = special_lambda(KinematicFrame(parse_velocity(args.velocity, cfg.constants.c)), cfg.constants)
    record = factor.to_dict()
    record["fractional_shift"] = fractional_shift(factor)
    emit([record], cfg.output_format)
    return EXIT_OK


def _factor_from_args(args, cfg: RunConfig) -> AlterationFactor:
    sources = [
        args.gamma is not None,
        args.velocity is not None,
        args.source_mass is not None or args.source_radius is not None,
    ]
    if sum(sources) != 1:
        raise InvalidInputError("give exactly one factor source: --gamma, --velocity, or --source-mass/--source-radius")
    if args.gamma is not None:
        return AlterationFactor.from_gamma(args.gamma)
    if args.velocity is not None:
        return special_lambda(KinematicFrame(parse_velocity(args.velocity, cfg.constants.c)), cfg.constants)
    if args.source_mass is None or args.source_radius is None:
        raise InvalidInputError("--source-mass and --source-radius go together")
    return schwarzschild_lambda(GravitationalSource(args.source_mass, args.source_radius), cfg.constants)


def cmd_alter(args) -> int:
    cfg = _config(args)
    for kind, value in (
        (QuantityKind.FREQUENCY, args.frequency),
        (QuantityKind.ENERGY, args.energy),
        (QuantityKind.MASS, args.mass),
        (QuantityKind.SEPARATION_CONSTANT, args.rate),
    ):
        if value is not None:
            break
    factor = _factor_from_args(args, cfg)
    q_s = MeasuredQuantity(value, kind)
    q_m = alter(q_s, factor)
    emit(
        [{
            "quantity": kind.value,
            "rule": RULE_TEXT[kind],
            "gamma": factor.gamma,
            "s_value": q_s.value,
            "m_value": q_m.value,
        }],
        cfg.output_format,
    )
    return EXIT_OK


def _build_operator(args):
    kind = {"laplacian": "laplacian", "schrodinger": "schrodinger_with_potential", "custom": "custom_matrix"}[args.op]
    if kind == "custom_matrix":
        if not args.matrix:
            raise InvalidInputError("--op custom needs --matrix FILE")
        return discretize(kind, None, k_const=args.k, matrix=load_matrix_csv(args.matrix))
    return discretize(kind, Grid1D(args.length, args.n), args.potential, args.k)


def _verify_hj(args, cfg: RunConfig, gammas: list[float]) -> list[dict]:
    hj_tol = _tolerance(args, cfg, "hj_tol", "hj_residual")
    mass_tol = _tolerance(args, cfg, "mass_tol", "mass_invariance")
    records = []
    fam = hj_closed_family(args.amplitude, args.C, args.hj_mass)
    families = [("given", fam)]
    rng = np.random.default_rng(cfg.seed)
    for i in range(max(args.families, 0)):
        A = float(rng.uniform(0.1, 10.0) * rng.choice([-1.0, 1.0]))
        families.append((f"random[{i}]", hj_closed_family(A, float(rng.uniform(0.1, 10.0)), float(rng.uniform(0.1, 10.0)))))
    r = np.linspace(0.0, 2.0, 9)
    for label, fm in families:
        # stay on the pole-free side: |lam1/2| t <= C/2
        t_max = 0.5 * fm.C / (0.5 * abs(fm.sep_constant))
        t = np.linspace(0.0, t_max, 9)
        res = hj_residual(fm, r, t)
        records.append({
            "check": "hj_residual",
            "family": label,
            "amplitude": fm.amplitude,
            "C": fm.C,
            "mass": fm.mass,
            "lambda1": fm.sep_constant,
            "residual": res,
            "pass": res <= hj_tol,
        })
    for g in gammas:
        rep = verify_mass_invariance(args.hj_mass, AlterationFactor.from_gamma(g), A=args.amplitude, C=args.C, tol=mass_tol)
        records.append(rep.to_record())
    return records


def cmd_verify(args) -> int:
    cfg = _config(args)
    gammas = args.gamma
    for g in gammas:
        AlterationFactor.from_gamma(g)
    if args.op == "hj":
        records = _verify_hj(args, cfg, gammas)
    else:
        op = _build_operator(args)
        eig_tol = _tolerance(args, cfg, "eigen_residual_tol", "eigen_residual")
        frame_tol = _tolerance(args, cfg, "frame_tol", "frame_scaling")
        fd_tol = _tolerance(args, cfg, "fd_tol", "frame_scaling_fd")
        sols = eigenmodes(op, args.modes, residual_tol=eig_tol)
        records = [
            verify_frame_scaling(s, AlterationFactor.from_gamma(g), tol=frame_tol, fd_tol=fd_tol).to_record()
            for s in sols
            for g in gammas
        ]
    emit(records, cfg.output_format)
    return EXIT_OK if all(r["pass"] for r in records) else EXIT_FAILED


def cmd_eigen(args) -> int:
    cfg = _config(args)
    fmt = args.output_format or "csv"
    op = _build_operator(args)
    if args.modes_out:
        sols = eigenmodes(op, args.modes, residual_tol=_tolerance(args, cfg, "eigen_residual_tol", "eigen_residual"))
        values = [s.sep_constant for s in sols]
        x = op.grid.nodes if op.grid is not None else np.arange(op.size, dtype=float)
        with open(args.modes_out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x"] + [f"mode_{s.index}" for s in sols])
            for i in range(op.size):
                writer.writerow([repr(float(x[i]))] + [repr(float(s.mode[i])) for s in sols])
    else:
        values = eigenvalues(op, args.modes).tolist()
    emit([{"index": i, "eigenvalue": float(v)} for i, v in enumerate(values)], fmt)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except ConvergenceError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except RelalterError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"io-error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
