"""Command-line front end.

Subcommands:

    steady   solve one steady state and report moments plus residuals
    sweep    sweep tau (equal-rate regime by default) into figure-ready CSV
    dist     emit a photon-number distribution (exact limit or numeric)
    check    run the numeric-versus-analytic cross-check suite

Exit codes are a stable contract: 0 success, 1 usage error, 2 numerical
failure (no convergence, truncation, degenerate generator), 3 when a
verification check fails.

CSV output uses %.12e fields, comma separators and LF line endings, and
is byte-identical across runs.  When `--out` is given, sweep and dist
also render a figure next to the data file (same stem, .png) unless
--no-plot is passed; the CSV remains the canonical record.  Relative
`--out` paths are resolved against $ATOMLASER_OUTDIR when it is set.
"""

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .analytic import (first_order_closed_form, inversion_residual, quad_residual,
                       second_order_closed_form)
from .checks import run_checks
from .liouvillian import (DegenerateLiouvillianError, ModelParams, SpaceConfig,
                          StepSizeError, TruncationError, steady_state)
from .observables import mandel_q, moments, photon_distribution

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFICATION = 3

OUTDIR_ENV = "ATOMLASER_OUTDIR"

SWEEP_HEADER = "tau,mean_n_numeric,q_numeric,mean_n_order2,q_order2,mean_n_order1,q_order1"


class UsageError(Exception):
    """Bad flag combination or value, detected after parsing."""


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a tau sweep, numeric and closed-form columns."""

    tau: float
    mean_n_numeric: float
    q_numeric: float
    mean_n_order2: float
    q_order2: float
    mean_n_order1: float
    q_order1: float


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    # nan is the documented sentinel for Q at vanishing intensity
    return "nan" if math.isnan(x) else "%.12e" % x


def _resolve_out(raw: str | None) -> Path | None:
    if raw is None:
        return None
    path = Path(raw)
    base = os.environ.get(OUTDIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _write_text(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _add_rate_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("rates (dimensionless, units of 2g)")
    group.add_argument("--tau", type=float, default=None, help="cavity decay rate")
    group.add_argument("--omega", type=float, default=None,
                       help="pump rate (default: equal to --tau)")
    group.add_argument("--eta", type=float, default=None,
                       help="spontaneous emission rate (default: 0)")
    dim = parser.add_argument_group("rates (dimensional, converted at the boundary)")
    dim.add_argument("--g", type=float, default=None, help="atom-field coupling")
    dim.add_argument("--kappa", type=float, default=None, help="cavity decay")
    dim.add_argument("--gamma", type=float, default=None, help="spontaneous emission")
    dim.add_argument("--pump", type=float, default=None, help="incoherent pump")


def _params_from_args(args) -> ModelParams:
    dimensional = {"--g": args.g, "--kappa": args.kappa,
                   "--gamma": args.gamma, "--pump": args.pump}
    dimensionless = {"--tau": args.tau, "--omega": args.omega, "--eta": args.eta}
    if any(v is not None for v in dimensional.values()):
        if any(v is not None for v in dimensionless.values()):
            raise UsageError("give dimensionless rates or dimensional parameters, not both")
        missing = [k for k, v in dimensional.items() if v is None]
        if missing:
            raise UsageError(f"dimensional mode needs all of --g --kappa --gamma --pump "
                             f"(missing {' '.join(missing)})")
        if args.g <= 0:
            raise UsageError("--g must be positive")
        for flag in ("--kappa", "--gamma", "--pump"):
            if dimensional[flag] < 0:
                raise UsageError(f"{flag} must be nonnegative")
        return ModelParams.from_dimensional(g=args.g, kappa=args.kappa,
                                            gamma=args.gamma, pump=args.pump)
    if args.tau is None:
        raise UsageError("--tau is required (or give all dimensional flags)")
    tau = args.tau
    omega = args.omega if args.omega is not None else tau
    eta = args.eta if args.eta is not None else 0.0
    for flag, value in (("--tau", tau), ("--omega", omega), ("--eta", eta)):
        if value < 0:
            raise UsageError(f"{flag} must be nonnegative")
    return ModelParams(omega=omega, eta=eta, tau=tau)


def _check_positive_int(name: str, value: int) -> None:
    if value < 1:
        raise UsageError(f"{name} must be a positive integer")


def cmd_steady(args) -> int:
    params = _params_from_args(args)
    _check_positive_int("--nmax", args.nmax)
    result = steady_state(params, SpaceConfig(args.nmax), tol=args.tol)
    m = moments(result.rho)
    probs = photon_distribution(result.rho)

    flux = inversion_residual(m, params)
    quad = (quad_residual(m, params)
            if params.tau > 0.0 and params.omega + params.eta > 0.0 else math.nan)

    if args.format == "json":
        payload = {
            "omega": params.omega, "eta": params.eta, "tau": params.tau,
            "n_max": args.nmax,
            "mean_n": m.n1, "n2": m.n2, "n3": m.n3, "n4": m.n4,
            "inversion": m.d, "mandel_q": m.q,
            "quad_residual": None if math.isnan(quad) else quad,
            "flux_residual": flux,
            "solver_residual": result.residual, "tail_mass": result.tail_mass,
            "distribution": [float(p) for p in probs],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = ["quantity,value"]
        scalars = [
            ("omega", params.omega), ("eta", params.eta), ("tau", params.tau),
            ("n_max", float(args.nmax)),
            ("mean_n", m.n1), ("n2", m.n2), ("n3", m.n3), ("n4", m.n4),
            ("inversion", m.d), ("mandel_q", m.q),
            ("quad_residual", quad), ("flux_residual", flux),
            ("solver_residual", result.residual), ("tail_mass", result.tail_mass),
        ]
        lines += [f"{name},{_fmt(value)}" for name, value in scalars]
        lines += [f"rho_{n},{_fmt(p)}" for n, p in enumerate(probs)]
        text = "\n".join(lines) + "\n"

    _write_text(_resolve_out(args.out), text)
    return EXIT_OK


def _sweep_point(tau: float, omega: float | None, eta: float, n_max: int) -> SweepRow:
    params = ModelParams(omega=omega if omega is not None else tau, eta=eta, tau=tau)
    m = moments(steady_state(params, SpaceConfig(n_max)).rho)
    n1_2, n2_2 = second_order_closed_form(tau)
    n1_1, n2_1 = first_order_closed_form(tau)
    return SweepRow(tau=tau,
                    mean_n_numeric=m.n1, q_numeric=m.q,
                    mean_n_order2=n1_2, q_order2=mandel_q(n1_2, n2_2),
                    mean_n_order1=n1_1, q_order1=mandel_q(n1_1, n2_1))


def cmd_sweep(args) -> int:
    if args.tau_min <= 0:
        raise UsageError("--tau-min must be positive (tau = 0 is degenerate)")
    if args.tau_max < args.tau_min:
        raise UsageError("--tau-max must be >= --tau-min")
    _check_positive_int("--points", args.points)
    _check_positive_int("--nmax", args.nmax)
    _check_positive_int("--workers", args.workers)
    if args.omega is not None and args.omega < 0:
        raise UsageError("--omega must be nonnegative")
    if args.eta < 0:
        raise UsageError("--eta must be nonnegative")

    taus = np.linspace(args.tau_min, args.tau_max, args.points)

    def solve(tau: float):
        try:
            return _sweep_point(float(tau), args.omega, args.eta, args.nmax)
        except (TruncationError, DegenerateLiouvillianError) as exc:
            return exc

    # grid points are independent; output order is the grid order no
    # matter how the pool schedules them
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            outcomes = list(pool.map(solve, taus))
    else:
        outcomes = [solve(t) for t in taus]

    failures = [(t, o) for t, o in zip(taus, outcomes) if isinstance(o, Exception)]
    if failures:
        for tau, exc in failures:
            print(f"tau={tau:.6g}: {exc}", file=sys.stderr)
        print(f"{len(failures)} of {len(outcomes)} grid points failed; "
              "no output written", file=sys.stderr)
        return EXIT_NUMERICAL

    lines = [SWEEP_HEADER]
    for row in outcomes:
        lines.append(",".join(_fmt(getattr(row, f.name)) for f in fields(SweepRow)))
    out = _resolve_out(args.out)
    _write_text(out, "\n".join(lines) + "\n")

    if out is not None and not args.no_plot:
        from .plotting import save_figure, sweep_figure
        save_figure(sweep_figure(outcomes), out.with_suffix(".png"))
    return EXIT_OK


def cmd_dist(args) -> int:
    if args.mode == "exact":
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        from .strong_coupling import exact_distribution
        probs = exact_distribution(tol=args.tol).probs
        label = "exact distribution, slow equal rates"
    else:
        params = _params_from_args(args)
        _check_positive_int("--nmax", args.nmax)
        result = steady_state(params, SpaceConfig(args.nmax))
        probs = photon_distribution(result.rho)
        label = (f"numeric distribution, omega={params.omega:g} "
                 f"eta={params.eta:g} tau={params.tau:g}")

    lines = ["n,rho_n"]
    lines += [f"{n},{_fmt(p)}" for n, p in enumerate(probs)]
    out = _resolve_out(args.out)
    _write_text(out, "\n".join(lines) + "\n")

    if out is not None and not args.no_plot:
        from .plotting import distribution_figure, save_figure
        save_figure(distribution_figure(probs, label), out.with_suffix(".png"))
    return EXIT_OK


def cmd_check(args) -> int:
    _check_positive_int("--grid-size", args.grid_size)
    _check_positive_int("--nmax", args.nmax)
    results = run_checks(grid_size=args.grid_size, n_max=args.nmax)
    text = json.dumps([r.to_dict() for r in results], indent=2) + "\n"
    sys.stdout.write(text)
    out = _resolve_out(args.out)
    if out is not None:
        _write_text(out, text)
    failures = [r for r in results if not r.ok]
    if failures:
        for r in failures:
            print(f"check failed: {r.check_name} "
                  f"(value={r.value:.6e}, threshold={r.threshold:.6e})", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="atomlaser",
                     description="Steady states and photon statistics of a "
                                 "single-atom laser with incoherent pump.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_steady = sub.add_parser("steady", help="solve one steady state")
    _add_rate_flags(p_steady)
    p_steady.add_argument("--nmax", type=int, default=20, help="Fock cutoff")
    p_steady.add_argument("--tol", type=float, default=1e-10,
                          help="steady-state residual tolerance")
    p_steady.add_argument("--format", choices=("csv", "json"), default="csv")
    p_steady.add_argument("--out", default=None, help="write report here instead of stdout")
    p_steady.set_defaults(func=cmd_steady)

    p_sweep = sub.add_parser("sweep", help="sweep tau into figure-ready CSV")
    p_sweep.add_argument("--tau-min", type=float, default=0.05)
    p_sweep.add_argument("--tau-max", type=float, default=3.0)
    p_sweep.add_argument("--points", type=int, default=30)
    p_sweep.add_argument("--omega", type=float, default=None,
                         help="fix the pump rate (default: track tau)")
    p_sweep.add_argument("--eta", type=float, default=0.0,
                         help="spontaneous emission rate (default 0)")
    p_sweep.add_argument("--nmax", type=int, default=20, help="Fock cutoff")
    p_sweep.add_argument("--workers", type=int, default=1,
                         help="concurrent grid-point solves")
    p_sweep.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_sweep.add_argument("--no-plot", action="store_true",
                         help="skip the figure next to --out")
    p_sweep.set_defaults(func=cmd_sweep)

    p_dist = sub.add_parser("dist", help="photon-number distribution")
    p_dist.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    _add_rate_flags(p_dist)
    p_dist.add_argument("--nmax", type=int, default=20, help="Fock cutoff (numeric mode)")
    p_dist.add_argument("--tol", type=float, default=1e-13,
                        help="tail cutoff of the exact distribution")
    p_dist.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_dist.add_argument("--no-plot", action="store_true",
                        help="skip the figure next to --out")
    p_dist.set_defaults(func=cmd_dist)

    p_check = sub.add_parser("check", help="run the cross-check suite")
    p_check.add_argument("--grid-size", type=int, default=3,
                         help="axis size of the (omega, eta, tau) grid")
    p_check.add_argument("--nmax", type=int, default=20, help="Fock cutoff")
    p_check.add_argument("--out", default=None, help="also write the JSON report here")
    p_check.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationError, DegenerateLiouvillianError, StepSizeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
