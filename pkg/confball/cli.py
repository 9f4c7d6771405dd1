"""Command line interface of confball.

Every subcommand is a pure function of its arguments, its input files
and its seed. Exit codes: 0 on success, 1 on a numeric, domain or I/O
failure and 2 on a usage error.
"""

import argparse
import itertools
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd

from confball.bounds.lower import lower_bound_radius
from confball.bounds.upper import upper_bound_rho
from confball.core.builder import build_family, load_config
from confball.core.callback import LoggingCallback
from confball.core.procedure import BallBuilder
from confball.distributions.chi2 import NoncentralChi2, chi2_quantile
from confball.distributions.envelopes import birge_lower, birge_upper
from confball.errors import ConfballError, PreconditionError
from confball.io import (
    FORMATS,
    emit,
    load_matrix_csv,
    load_vector_csv,
    write_vector_csv,
)
from confball.models.family import ModelFamily
from confball.models.fourier import fourier_family
from confball.radii.variance import Interval, Known, VarianceSpec
from confball.sim.functions import FUNCTIONS, figure_data, test_function
from confball.sim.study import SimulationConfig, coverage_mc, run_table1
from confball.varselect.design import per_size_counts
from confball.varselect.selection import (
    VariableSelector,
    selection_radius_bound,
)

logger = logging.getLogger(__name__)

COMMANDS = ("radii", "ball", "select", "simulate", "coverage", "bounds",
            "figure")

DIST_Z = (0.0, 1.0, 10.0, 100.0, 1000.0)
DIST_D = (1, 2, 5, 100, 995)
DIST_U = (1e-4, 1e-2, 0.05, 0.2, 0.5)

DEFAULT_ALPHA = 0.2
DEFAULT_BETA = 0.1

_DESCRIPTIONS = {
    "radii": (
        "Squared radii of all models of a family. For a model of "
        "dimension D >= 1 with N = n - D and known variance, "
        "rho^2 = sigma2 * sup_z [z + q(0, D, beta_m / psi(z))] with "
        "psi(z) = P[chi2(z, N) <= q(0, N, alpha)]. For D = 0 it is "
        "sigma2 * z_bar with psi(z_bar) = beta_m and for the full model "
        "q(0, n, beta_m) * sigma2. Under a variance interval the "
        "supremum also runs over sigma2 in [(1 - eta) tau2, tau2]."
    ),
    "ball": (
        "Confidence ball of an observation: every model m is tested by "
        "||y - P_m y||^2 <= q(0, N_m, alpha) tau2, the accepted model "
        "with the smallest radius rho_m is selected and the ball "
        "B(P_m y, rho_m) has coverage at least 1 - beta."
    ),
    "select": (
        "Variable selection: all column subsets m of at most --max-size "
        "columns get beta_m = beta / (n C(n, |m|)), the full model "
        "beta / 2, and the confidence ball is built over this family."
    ),
    "simulate": (
        "Numerical study on the dyadic trigonometric family "
        "m = 2, ..., 2^K with beta_(2^k) = beta 2^-k: counts of the "
        "smallest accepted model of F1, F2 and F3. The JSON summary goes to "
        "--summary, or next to --out as <out>-summary.json."
    ),
    "coverage": (
        "Monte Carlo estimate of P[f in B(f_hat, rho_hat)] >= 1 - beta "
        "and of the coverage of the intersection of all accepted balls."
    ),
    "bounds": (
        "Explicit lower and upper bounds of the squared radii next to "
        "the computed ones. With --dist, a table of quantiles "
        "q(z, d, u) and their envelopes z + d - 2 sqrt((2z + d) "
        "log(1/(1-u))) and z + d + 2 sqrt((2z + d) log(1/u)) + "
        "2 log(1/u)."
    ),
    "figure": "One simulated sample x_i, F(x_i), y_i = F(x_i) + sigma eps_i.",
}


@dataclass
class RunConfig:
    """Validated arguments of one command line run."""

    command: str
    alpha: Optional[float] = DEFAULT_ALPHA
    beta: Optional[float] = DEFAULT_BETA
    variance: VarianceSpec = field(default_factory=lambda: Known(1.0))
    data: Optional[str] = None
    design: Optional[str] = None
    family: Optional[str] = None
    preset: Optional[str] = None
    out: Optional[str] = None
    fmt: str = "json"
    seed: int = 0
    replicates: int = 100
    threads: Optional[int] = None
    verbose: int = 0
    options: dict[str, Any] = field(default_factory=dict)


def _add_common(parser: argparse.ArgumentParser, fmt: str) -> None:
    parser.add_argument("--alpha", type=float, default=None,
                        help="level of the tests (default: the family "
                             "configuration, else 0.2)")
    parser.add_argument("--beta", type=float, default=None,
                        help="global risk (default: the family "
                             "configuration, else 0.1)")
    parser.add_argument("--sigma2", type=float, default=None,
                        help="known noise variance (default 1 when none "
                             "of --sigma2, --tau2 is given)")
    parser.add_argument("--tau2", type=float, default=None,
                        help="upper end of the variance interval")
    parser.add_argument("--eta", type=float, default=None,
                        help="relative width of the variance interval")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None,
                        help="output file (default: standard output)")
    parser.add_argument("--format", dest="fmt", choices=FORMATS,
                        default=fmt)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads, capped by CONFBALL_THREADS")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def _add_family(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", default=None,
                        help="JSON family configuration")
    parser.add_argument("--preset", choices=("table1",), default=None,
                        help="dyadic trigonometric family")
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--K", type=int, default=8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confball",
        description="Nonasymptotic Euclidean confidence balls for the "
                    "mean of a Gaussian vector.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    radii = commands.add_parser("radii", description=_DESCRIPTIONS["radii"])
    _add_family(radii)
    _add_common(radii, "csv")

    ball = commands.add_parser("ball", description=_DESCRIPTIONS["ball"])
    ball.add_argument("--data", required=True, help="CSV observation")
    _add_family(ball)
    ball.add_argument("--center-out", default=None,
                      help="CSV file receiving the center")
    _add_common(ball, "json")

    select = commands.add_parser("select",
                                 description=_DESCRIPTIONS["select"])
    select.add_argument("--data", required=True, help="CSV observation")
    select.add_argument("--design", required=True, help="CSV design matrix")
    select.add_argument("--max-size", type=int, required=True)
    select.add_argument("--allocation", choices=("dimensional", "uniform"),
                        default="dimensional")
    _add_common(select, "json")

    simulate = commands.add_parser("simulate",
                                   description=_DESCRIPTIONS["simulate"])
    simulate.add_argument("--preset", choices=("table1",), default="table1")
    simulate.add_argument("--n", type=int, default=1000)
    simulate.add_argument("--K", type=int, default=8)
    simulate.add_argument("--sigma", type=float, default=1.0)
    simulate.add_argument("--replicates", type=int, default=100)
    simulate.add_argument("--summary", default=None,
                          help="JSON file receiving the summary (default: "
                               "<out>-summary.json next to --out)")
    simulate.add_argument("--records", default=None,
                          help="CSV file receiving the replicate records")
    _add_common(simulate, "csv")

    coverage = commands.add_parser("coverage",
                                   description=_DESCRIPTIONS["coverage"])
    coverage.add_argument("--function", choices=FUNCTIONS, required=True)
    coverage.add_argument("--n", type=int, default=1000)
    coverage.add_argument("--K", type=int, default=8)
    coverage.add_argument("--replicates", type=int, default=1000)
    coverage.add_argument("--true-sigma2", type=float, default=None,
                          help="variance of the simulated noise "
                               "(default tau2)")
    _add_common(coverage, "json")

    bounds = commands.add_parser("bounds", description=_DESCRIPTIONS["bounds"])
    _add_family(bounds)
    bounds.add_argument("--dist", action="store_true",
                        help="print the quantile envelope table")
    bounds.add_argument("--z", type=float, nargs="+", default=None)
    bounds.add_argument("--d", type=int, nargs="+", default=None)
    bounds.add_argument("--u", type=float, nargs="+", default=None)
    _add_common(bounds, "csv")

    figure = commands.add_parser("figure", description=_DESCRIPTIONS["figure"])
    figure.add_argument("--function", choices=FUNCTIONS, required=True)
    figure.add_argument("--n", type=int, default=1000)
    figure.add_argument("--sigma", type=float, default=1.0)
    _add_common(figure, "csv")
    return parser


def _variance(parser: argparse.ArgumentParser,
              args: argparse.Namespace) -> VarianceSpec:
    if args.sigma2 is not None and (args.tau2 is not None
                                    or args.eta is not None):
        parser.error("--sigma2 can't be combined with --tau2/--eta")
    if args.eta is not None and args.tau2 is None:
        parser.error("--eta needs --tau2")
    try:
        if args.tau2 is not None:
            return Interval(args.tau2, 0.0 if args.eta is None else args.eta)
        return Known(1.0 if args.sigma2 is None else args.sigma2)
    except ConfballError as error:
        parser.error(str(error))


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parses and validates the command line.

    :param argv: Arguments without the program name, ``sys.argv[1:]``
        if ``None``., defaults to None
    :type argv: Sequence[str], optional
    :rtype: RunConfig
    :raises: SystemExit with code 2 on a usage error
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("alpha", "beta"):
        value = getattr(args, name)
        if value is not None and not 0.0 < value < 1.0:
            parser.error(f"--{name} has to lie in (0, 1)")
    variance = _variance(parser, args)
    family = getattr(args, "family", None)
    alpha, beta = args.alpha, args.beta
    # levels missing on the command line come from the family configuration
    if family is None:
        alpha = DEFAULT_ALPHA if alpha is None else alpha
        beta = DEFAULT_BETA if beta is None else beta
    if alpha is not None and beta is not None and not alpha + beta < 1.0:
        parser.error("--alpha and --beta need alpha + beta < 1")
    preset = getattr(args, "preset", None)
    needs_family = (args.command in ("radii", "ball")
                    or (args.command == "bounds" and not args.dist))
    if needs_family:
        if (family is None) == (preset is None):
            parser.error("exactly one of --family and --preset is needed")
    replicates = getattr(args, "replicates", 100)
    if replicates < 1:
        parser.error("--replicates has to be positive")
    if args.threads is not None and args.threads < 1:
        parser.error("--threads has to be positive")
    known = {"command", "alpha", "beta", "sigma2", "tau2", "eta", "data",
             "design", "family", "preset", "out", "fmt", "seed",
             "replicates", "threads", "verbose"}
    return RunConfig(
        command=args.command,
        alpha=alpha,
        beta=beta,
        variance=variance,
        data=getattr(args, "data", None),
        design=getattr(args, "design", None),
        family=family,
        preset=preset,
        out=args.out,
        fmt=args.fmt,
        seed=args.seed,
        replicates=replicates,
        threads=args.threads,
        verbose=args.verbose,
        options={key: value for key, value in vars(args).items()
                 if key not in known},
    )


def _family(config: RunConfig) -> ModelFamily:
    if config.family is not None:
        return build_family(config.family)
    return fourier_family(config.options["n"], config.options["K"],
                          config.beta)


def _builder(config: RunConfig) -> BallBuilder:
    """Ball builder of the family of the run. Levels not given on the
    command line are the ``alpha`` and ``beta`` of the family
    configuration, with defaults 0.2 and 0.1.
    """
    family = _family(config)
    alpha, beta = config.alpha, config.beta
    if alpha is None:
        alpha = load_config(config.family).get("alpha", DEFAULT_ALPHA)
    if beta is None:
        beta = DEFAULT_BETA if family.beta is None else family.beta
    return BallBuilder(family, alpha, config.variance, beta)


def _radii_table(builder: BallBuilder) -> pd.DataFrame:
    family = builder.family
    radii = builder.radii()
    return pd.DataFrame({
        "model_id": family.ids(),
        "D": family.dims(),
        "N": [model.N for model in family],
        "beta_m": family.levels(),
        "rho_sq": radii,
        "rho_sq_over_n": [rho / family.n for rho in radii],
    })


def run_radii(config: RunConfig) -> pd.DataFrame:
    return _radii_table(_builder(config))


def run_ball(config: RunConfig) -> dict[str, Any]:
    builder = _builder(config)
    ball = builder.build(load_vector_csv(config.data))
    center_path = config.options.get("center_out")
    if center_path is not None:
        write_vector_csv(ball.center, center_path, header="center")
    return {
        "selected": ball.selected,
        "radius_sq": ball.radius_sq,
        "coverage": ball.nominal_coverage,
        "trivial_radius_sq": ball.trivial_radius_sq,
        "center_csv_path": center_path,
        "per_model": [
            {"model_id": r.model_id, "D": r.D, "rho_sq": r.rho_sq,
             "accepted": r.accepted}
            for r in ball.per_model
        ],
    }


def run_select(config: RunConfig) -> dict[str, Any]:
    y = load_vector_csv(config.data)
    X = load_matrix_csv(config.design)
    selector = VariableSelector(X, config.alpha, config.beta,
                                config.variance,
                                config.options["max_size"],
                                config.options["allocation"])
    selection = selector.select(y)
    bound = None
    if selection.columns is not None and \
            config.options["allocation"] == "dimensional":
        bound = selection_radius_bound(len(y), len(selection.columns),
                                       config.alpha, config.beta,
                                       config.variance.tau2)
    return {
        "selected_columns": (None if selection.columns is None
                             else list(selection.columns)),
        "radius_sq": selection.ball.radius_sq,
        "bound": bound,
        "per_size_counts": {str(size): count for size, count
                            in per_size_counts(selector.family).items()},
    }


def run_simulate(config: RunConfig) -> pd.DataFrame:
    options = config.options
    sim_config = SimulationConfig(
        n=options["n"],
        alpha=config.alpha,
        beta=config.beta,
        K=options["K"],
        sigma=options["sigma"],
        replicates=config.replicates,
        seed=config.seed,
        threads=config.threads,
    )
    report = run_table1(sim_config, callbacks=[LoggingCallback()])
    summary = options.get("summary")
    if summary is None and config.out is not None:
        summary = os.path.splitext(config.out)[0] + "-summary.json"
    if summary is not None:
        emit(report.summary(), "json", summary)
    else:
        logger.info("Summary: %s", report.summary())
    if options.get("records") is not None:
        emit(report.records_frame(), "csv", options["records"])
    return report.table


def run_coverage(config: RunConfig) -> dict[str, Any]:
    options = config.options
    family = fourier_family(options["n"], options["K"], config.beta)
    f = test_function(options["function"], options["n"])
    result = coverage_mc(f, family, config.alpha, config.variance,
                         config.replicates, config.seed,
                         sigma2=options.get("true_sigma2"),
                         threads=config.threads,
                         callbacks=[LoggingCallback()])
    result["function"] = options["function"]
    return result


def _dist_table(config: RunConfig) -> pd.DataFrame:
    options = config.options
    rows = []
    for z, d, u in itertools.product(options.get("z") or DIST_Z,
                                     options.get("d") or DIST_D,
                                     options.get("u") or DIST_U):
        rows.append({
            "z": z,
            "d": d,
            "u": u,
            "q": chi2_quantile(u, NoncentralChi2(z, d)),
            "birge_lo": birge_lower(z, d, 1.0 - u),
            "birge_hi": birge_upper(z, d, u),
        })
    return pd.DataFrame(rows)


def run_bounds(config: RunConfig) -> pd.DataFrame:
    if config.options.get("dist"):
        return _dist_table(config)
    builder = _builder(config)
    table = _radii_table(builder)
    lower, upper = [], []
    eta, tau2 = config.variance.eta, config.variance.tau2
    for D, N, beta_m in zip(table["D"], table["N"], table["beta_m"]):
        try:
            lower.append(lower_bound_radius(int(D), int(N), eta,
                                            builder.alpha, builder.beta,
                                            tau2))
        except PreconditionError as error:
            logger.warning("No lower bound: %s", error)
            lower.append(math.nan)
        upper.append(upper_bound_rho(int(D), int(N), eta, builder.alpha,
                                     float(beta_m), tau2))
    rho = table["rho_sq"].to_numpy()
    lower_arr = np.array(lower)
    return pd.DataFrame({
        "model_id": table["model_id"],
        "lower": lower_arr,
        "rho_sq": rho,
        "upper": upper,
        "lower_ok": [None if math.isnan(lo) else bool(lo <= r)
                     for lo, r in zip(lower_arr, rho)],
        "upper_ok": [bool(r <= up) for r, up in zip(rho, upper)],
    })


def run_figure(config: RunConfig) -> pd.DataFrame:
    options = config.options
    return figure_data(options["function"], options["n"], options["sigma"],
                       config.seed)


_RUNNERS = {
    "radii": run_radii,
    "ball": run_ball,
    "select": run_select,
    "simulate": run_simulate,
    "coverage": run_coverage,
    "bounds": run_bounds,
    "figure": run_figure,
}


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``confball`` command.

    :returns: The exit code.
    :rtype: int
    """
    try:
        config = parse_args(argv)
    except SystemExit as exit_:
        return 0 if exit_.code is None else int(exit_.code)
    _configure_logging(config.verbose)
    try:
        report = _RUNNERS[config.command](config)
        emit(report, config.fmt, config.out)
    except (ConfballError, OSError) as error:
        logger.error("%s failed: %s", config.command, error)
        print(f"confball {config.command}: {error}", file=sys.stderr)
        return 1
    return 0
