"""Command line entry points: ``verify``, ``converge`` and ``demo``.

Exit codes: 0 success, 1 property failure, 2 usage or config error.
"""

# standard imports
import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

# third party imports
import scipy.linalg
from loguru import logger

# ncqsi imports
from ncqsi.algebra.state import gns_norm
from ncqsi.cli.exceptions import ConfigError
from ncqsi.cli.schema import (
    Experiment,
    ProjectionFamilySuite,
    SuiteConfig,
    ThmContinuousSuite,
    ThmMonotoneSuite,
    ThmTracialSuite,
    load_experiment,
)
from ncqsi.config import Tolerances, configure_logger, get_settings
from ncqsi.integration.constants import Side
from ncqsi.integration.integrate import integrate, integrate_net, mu_increment, oracle_integral
from ncqsi.verify.fixtures import (
    qubit_pair_filtration,
    qubit_pair_martingale,
    spectral_step_integrand,
)
from ncqsi.verify.report import CheckReport, Measurement, write_reports
from ncqsi.verify.suites import (
    norm_gap_rows,
    suite_projection_family,
    suite_remark2,
    suite_thm_continuous,
    suite_thm_monotone,
    suite_thm_tracial,
)

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_CONFIG_ERROR = 2

DEMO_TRIALS = 20


# Structs
@dataclass
class SuiteCompleted:
    report: CheckReport


@dataclass
class SuiteCrashed:
    name: str
    message: str

    def as_report(self, seed: int) -> CheckReport:
        return CheckReport.from_measurements(
            self.name, 0, [(seed, [Measurement(f"crashed: {self.message}", 1.0, 0.0)])]
        )


SuiteOutcome = SuiteCompleted | SuiteCrashed


def run_suite(suite: SuiteConfig, experiment: Experiment, seed: int) -> SuiteOutcome:
    flt = experiment.filtration
    tol = experiment.tolerances
    try:
        if isinstance(suite, ProjectionFamilySuite):
            report = suite_projection_family(flt, suite.trials, seed, tol)
        elif isinstance(suite, ThmMonotoneSuite):
            report = suite_thm_monotone(
                flt, experiment.process(suite.f), experiment.process(suite.X), suite.trials, seed, tol
            )
        elif isinstance(suite, ThmContinuousSuite):
            report = suite_thm_continuous(
                flt,
                experiment.process(suite.f),
                experiment.process(suite.X),
                suite.eps,
                suite.trials,
                seed,
                tol,
            )
        elif isinstance(suite, ThmTracialSuite):
            report = suite_thm_tracial(
                flt,
                experiment.process(suite.f),
                experiment.process(suite.X),
                suite.grid,
                suite.trials,
                seed,
                tol,
            )
        else:
            generator, threshold = experiment.remark2_inputs(suite)
            report = suite_remark2(
                flt, experiment.process(suite.X), generator, threshold, suite.trials, seed, tol
            )
    except Exception as e:
        logger.exception(f"run_suite: {suite.name} crashed")
        return SuiteCrashed(suite.name, f"{type(e).__name__}: {e}")
    return SuiteCompleted(report)


#########################################
# Commands
#########################################


def cmd_verify(config_path: Path, out_path: Path, seed: Optional[int] = None) -> int:
    try:
        experiment = load_experiment(config_path)
    except ConfigError as e:
        logger.error(f"cmd_verify: {e}")
        return EXIT_CONFIG_ERROR

    seed = experiment.seed if seed is None else seed
    suites = experiment.config.experiment.suites
    if not suites:
        logger.error(f"cmd_verify: {config_path} requests no suites")
        return EXIT_CONFIG_ERROR

    reports = []
    for suite in suites:
        outcome = run_suite(suite, experiment, seed)
        match outcome:
            case SuiteCompleted(report=report):
                reports.append(report)
            case SuiteCrashed():
                reports.append(outcome.as_report(seed))

    write_reports(reports, out_path)
    failed = [r.name for r in reports if not r.passed]
    if failed:
        logger.error(f"cmd_verify: failed suites {failed}; reports in {out_path}")
        return EXIT_PROPERTY_FAILURE
    logger.info(f"cmd_verify: all {len(reports)} suites passed; reports in {out_path}")
    return EXIT_OK


def cmd_converge(config_path: Path, out_csv: Path) -> int:
    try:
        experiment = load_experiment(config_path)
    except ConfigError as e:
        logger.error(f"cmd_converge: {e}")
        return EXIT_CONFIG_ERROR

    spec = experiment.config.experiment.converge
    if spec is None:
        logger.error(f"cmd_converge: {config_path} has no experiment.converge section")
        return EXIT_CONFIG_ERROR

    tol = experiment.tolerances
    engine = integrate if spec.engine == "dyadic" else integrate_net
    a, b = spec.interval
    result = engine(
        experiment.process(spec.f),
        experiment.process(spec.X),
        a,
        b,
        Side(spec.side),
        tol.tol_conv if spec.tol_conv is None else spec.tol_conv,
        tol.max_depth if spec.max_depth is None else spec.max_depth,
    )
    result.write_csv(out_csv)

    logger.info(
        f"cmd_converge: {spec.engine} {spec.side} integral on [{a}, {b}]: "
        f"{len(result.diagnostics)} rows, converged={result.converged}, "
        f"gap to oracle {result.oracle_gap:.3e}"
    )
    return EXIT_OK if result.converged else EXIT_PROPERTY_FAILURE


def _demo_pairs(jumps: Sequence[float], horizon: float) -> list[tuple[float, float]]:
    pairs = []
    for tau in jumps:
        pairs += [(max(0.0, tau - 0.1), tau), (max(0.0, tau - 0.01), min(horizon, tau + 0.01))]
    knots = sorted({0.0, *jumps, horizon})
    for lo, hi in zip(knots, knots[1:]):
        pairs.append((lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)))
    return pairs


def cmd_demo() -> int:
    """Walk through the spectral step counterexample on the two-qubit chain."""
    tol = Tolerances()
    flt = qubit_pair_filtration()
    X = qubit_pair_martingale(flt)
    f = spectral_step_integrand(flt)
    jumps = f.spectral_jump_times()
    T = flt.horizon

    print("Spectral step integrand on the chain M_2 (x) M_2, trace state, jumps s = (1, 2)")
    eigenvalues = scipy.linalg.eigvalsh(f.generator.entries)
    print(f"  generator spectrum: {sorted(set(round(float(x), 12) for x in eigenvalues))}")
    print(f"  f(t) switches on a spectral projection at t = {[round(t, 12) for t in jumps]}")
    print()
    print("Norm gaps ||f(t) - f(s)||: one whenever (s, t] holds a spectral jump, zero otherwise")
    print(f"  {'s':>10} {'t':>10} {'gap':>10}")
    for s, t, gap in norm_gap_rows(f, _demo_pairs(jumps, T)):
        print(f"  {s:>10.4f} {t:>10.4f} {gap:>10.6f}")
    print()

    knots = [0.0, *flt.jump_times]
    print("Increments mu((a, b]) = omega(|X(b) - X(a)|^2) of X_T = sigma_x (x) 1 + sigma_z (x) sigma_x")
    for a, b in zip(knots, knots[1:]):
        print(f"  mu(({a:g}, {b:g}]) = {mu_increment(X, a, b, tol.tol_eq):.12f}")
    print()

    result = integrate(f, X, 0.0, T, Side.RIGHT, tol.suite_tol_conv, tol.max_depth)
    oracle = oracle_integral(f, X, 0.0, T, Side.RIGHT)
    print("The integral of f against X exists even though f is nowhere norm continuous:")
    print(
        f"  dyadic limit reached after {len(result.diagnostics)} depths, "
        f"gap to the closed form {result.oracle_gap:.3e}"
    )
    print(f"  ||closed form Omega||_H = {gns_norm(oracle, flt.state):.6f}")
    print()

    report = suite_remark2(flt, X, trials=DEMO_TRIALS, seed=0, tol=tol)
    verdict = "passed" if report.passed else f"FAILED ({len(report.failures)} failures)"
    print(f"Property suite remark2 over {report.trials} trials: {verdict}")
    return EXIT_OK if report.passed else EXIT_PROPERTY_FAILURE


#########################################
# Argument parsing
#########################################


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncqsi", description="Stochastic integrals on finite tensor-chain filtrations"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run the property suites named in a config")
    verify.add_argument("--config", type=Path, required=True)
    verify.add_argument("--out", type=Path, required=True, help="JSON report path")
    verify.add_argument("--seed", type=int, default=None, help="override the config seed")

    converge = commands.add_parser("converge", help="write a mesh-limit convergence table")
    converge.add_argument("--config", type=Path, required=True)
    converge.add_argument("--out", type=Path, required=True, help="CSV path")

    commands.add_parser("demo", help="walk through the spectral step counterexample")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    settings = get_settings()
    configure_logger(
        level=settings.log_level,
        log_to_file=settings.log_file is not None,
        output_directory=None if settings.log_file is None else settings.log_file.parent,
        log_filename="ncqsi.log" if settings.log_file is None else settings.log_file.name,
    )

    if args.command == "verify":
        return cmd_verify(args.config, args.out, args.seed)
    if args.command == "converge":
        return cmd_converge(args.config, args.out)
    return cmd_demo()
