"""Named, seedable property suites.

Each suite collects ``Measurement``s per trial seed (trial i uses seed + i) and
reduces them into a ``CheckReport`` ordered by seed. Trials are independent and
run on a thread pool capped by ``NCQSI_THREADS``.
"""

# standard imports
import itertools
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

# third party imports
import numpy as np
from loguru import logger

# ncqsi imports
from ncqsi.algebra.chain import Element, min_eigenvalue, operator_norm, psd_check
from ncqsi.algebra.exceptions import NotHermitianError, ProcessKindError
from ncqsi.algebra.filtration import Filtration
from ncqsi.algebra.process import NormContinuousAdapted, Process, certify, modulus_delta
from ncqsi.algebra.ramps import RampTable
from ncqsi.algebra.state import gns_inner, gns_norm, l2_norm, state_value
from ncqsi.config import Tolerances, get_settings
from ncqsi.integration.constants import Side
from ncqsi.integration.exceptions import MartingaleDefectError
from ncqsi.integration.integrate import (
    commutant_action,
    integral_process,
    integrate,
    integrate_net,
    mu_increment,
)
from ncqsi.integration.partition import Partition
from ncqsi.integration.sums import left_sum, right_sum, sigma_operator
from ncqsi.verify.fixtures import spectral_step_integrand
from ncqsi.verify.random_instances import (
    make_rng,
    random_element,
    random_fine_partition,
    random_level_element,
    random_martingale,
    random_new_point,
    random_partition,
    random_psd,
    random_times,
)
from ncqsi.verify.report import CheckReport, Measurement

DEFAULT_TRIALS = 100
DEFAULT_EPS = (0.3, 0.1, 0.03)

# theta'' always carries a point this fraction of (b - a) below every jump.
CAUCHY_OFFSET = 1e-7

Seeded = list[tuple[int, list[Measurement]]]


def run_trials(trial: Callable[[int], list[Measurement]], trials: int, seed: int) -> Seeded:
    seeds = [seed + i for i in range(trials)]
    threads = min(get_settings().threads, max(1, trials))
    if threads == 1:
        return [(s, trial(s)) for s in seeds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(zip(seeds, pool.map(trial, seeds)))


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def _relative(residual: float, scale: float) -> float:
    return residual / max(1.0, scale)


def certify_grid(flt: Filtration, extra: Sequence[float] = ()) -> list[float]:
    """0, every jump time, T, the midpoints between them, plus ``extra``."""
    knots = sorted({0.0, *flt.jump_times, flt.horizon})
    mids = [(lo + hi) / 2 for lo, hi in zip(knots, knots[1:])]
    return sorted({*knots, *mids, *(float(t) for t in extra)})


def _martingale_precondition(X: Process, grid: Sequence[float], tol: Tolerances) -> Measurement:
    cert = certify(X, grid, tol.tol_eq)
    return Measurement("X martingale defect", cert.martingale_defect, tol.tol_eq)


def _report(name: str, trials: int, seeded: Seeded) -> CheckReport:
    report = CheckReport.from_measurements(name, trials, seeded)
    if report.passed:
        logger.info(
            f"{name}: passed {trials} trials (worst violation {report.worst_violation:.3e})"
        )
    else:
        logger.error(
            f"{name}: {len(report.failures)} failures over {trials} trials, "
            f"first: {report.failures[0].quantity} = {report.failures[0].magnitude:.3e}"
        )
    return report


#########################################
# Projection family
#########################################


def projection_family_measurements(
    flt: Filtration, trials: int, seed: int, tol: Tolerances
) -> tuple[int, Seeded]:
    margin = flt.state.faithfulness_margin()
    if margin < tol.tol_psd:
        logger.error(f"suite_projection_family: state is not faithful (margin {margin:.3e})")
        return 0, [(seed, [Measurement("faithfulness deficit", tol.tol_psd - margin, 0.0)])]

    gns = flt.gns
    flt.projection_matrix_level(0)  # fill the projection cache before the pool starts
    P = flt.projection_matrix
    state = flt.state
    shape = flt.shape
    T = flt.horizon

    def trial(trial_seed: int) -> list[Measurement]:
        rng = make_rng(trial_seed)
        s, t, u, v = sorted(random_times(rng, flt, 4))
        ps, pt, pu, pv = P(s), P(t), P(u), P(v)
        out = []
        for name, p in (("P_s", ps), ("P_t", pt)):
            out.append(Measurement(f"{name} idempotent", _max_abs(p @ p - p), tol.tol_eq))
            out.append(Measurement(f"{name} self-adjoint", _max_abs(p - p.conj().T), tol.tol_eq))
        out.append(Measurement("P_t - P_s positive", max(0.0, -min_eigenvalue(pt - ps)), tol.tol_eq))
        out.append(Measurement("P_s P_t = P_s", _max_abs(ps @ pt - ps), tol.tol_eq))
        out.append(
            Measurement("disjoint increments orthogonal", _max_abs((pt - ps) @ (pv - pu)), tol.tol_eq)
        )

        x = random_element(rng, shape)
        y = random_element(rng, shape)
        ex, ey = flt.cond_expect(x, t), flt.cond_expect(y, t)
        pair_scale = x.scale() * y.scale()
        out.append(
            Measurement(
                "<P_t x, y> = <x, P_t y>",
                _relative(abs(gns_inner(ex, y, state) - gns_inner(x, ey, state)), pair_scale),
                tol.tol_identity,
            )
        )
        out.append(
            Measurement(
                "P_t coords(x) = coords(E_t x)",
                _relative(float(np.linalg.norm(pt @ gns.coords(x) - gns.coords(ex))), x.scale()),
                tol.tol_eq,
            )
        )
        out.append(
            Measurement(
                "tower E_s E_t = E_s",
                _relative(flt.cond_expect(ex, s).max_abs_diff(flt.cond_expect(x, s)), x.scale()),
                tol.tol_identity,
            )
        )
        out.append(
            Measurement(
                "omega invariance",
                _relative(abs(state_value(ex, state) - state_value(x, state)), x.scale()),
                tol.tol_identity,
            )
        )
        level = flt.level_of(t)
        a = random_level_element(rng, shape, level)
        b = random_level_element(rng, shape, level)
        lhs = flt.cond_expect(a @ x @ b, t)
        rhs = a @ ex @ b
        out.append(
            Measurement(
                "bimodule E_t(a x b) = a E_t(x) b",
                _relative(lhs.max_abs_diff(rhs), max(lhs.scale(), rhs.scale())),
                tol.tol_identity,
            )
        )
        positive = flt.cond_expect(Element(shape, random_psd(rng, shape.acting_dim)), t)
        out.append(
            Measurement(
                "E_t positive",
                _relative(max(0.0, -min_eigenvalue(positive)), operator_norm(positive)),
                tol.tol_psd,
            )
        )

        X = random_martingale(rng, flt)
        theta = random_partition(rng, 0.0, T)
        xb = gns.coords(X.eval(T))
        scale = float(np.linalg.norm(xb))
        worst = 0.0
        for lo, hi in theta.subintervals():
            lhs = gns.coords(X.eval(hi) - X.eval(lo))
            rhs = flt.projection_increment(lo, hi) @ xb
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
        out.append(
            Measurement("increment identity dX Omega = dP X(b) Omega", _relative(worst, scale), tol.tol_identity)
        )
        return out

    return trials, run_trials(trial, trials, seed)


def suite_projection_family(
    flt: Filtration,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerances = Tolerances(),
) -> CheckReport:
    logger.info(f"suite_projection_family: {trials} trials from seed {seed}")
    ran, seeded = projection_family_measurements(flt, trials, seed, tol)
    return _report("projection_family", ran, seeded)


#########################################
# Monotone integrands
#########################################


def _mesh_limit_measurements(
    label: str, f: Process, X: Process, tol: Tolerances, net: bool = True
) -> list[Measurement]:
    T = X.horizon
    scale = gns_norm(X.eval(T), X.filtration.state)
    out = []
    engines = [("dyadic", integrate)] + ([("net", integrate_net)] if net else [])
    for engine_name, engine in engines:
        result = engine(f, X, 0.0, T, Side.RIGHT, tol.suite_tol_conv, tol.max_depth)
        out.append(
            Measurement(
                f"{label} {engine_name} limit successive gap",
                result.last_successive_gap,
                tol.suite_tol_conv,
            )
        )
        out.append(
            Measurement(
                f"{label} {engine_name} limit gap to oracle",
                _relative(result.oracle_gap, scale),
                tol.suite_tol_conv,
            )
        )
    return out


def thm_monotone_measurements(
    flt: Filtration, f: Process, X: Process, trials: int, seed: int, tol: Tolerances
) -> tuple[int, Seeded]:
    T = flt.horizon
    grid = certify_grid(flt, random_times(make_rng(seed), flt, 8))
    precondition = _martingale_precondition(X, grid, tol)
    if precondition.failed:
        logger.error("suite_thm_monotone: integrator is not a martingale, skipping trials")
        return 0, [(seed, [precondition])]

    cert = certify(f, grid, tol.tol_psd)
    suite_level = [
        precondition,
        Measurement("f adapted defect", cert.adapted_defect, tol.tol_eq),
        Measurement("f hermitian defect", cert.hermitian_defect, tol.tol_eq),
        Measurement("f monotone defect", cert.monotone_defect, tol.tol_psd),
        *_mesh_limit_measurements("sigma net", f, X, tol),
    ]

    gns = flt.gns
    flt.projection_matrix_level(0)
    c = max(operator_norm(f.eval(0.0)), operator_norm(f.eval(T)))
    xb = gns.coords(X.eval(T))
    xb_scale = float(np.linalg.norm(xb))

    def trial(trial_seed: int) -> list[Measurement]:
        rng = make_rng(trial_seed)
        theta = random_partition(rng, 0.0, T)
        refined = theta.refine_one_point(random_new_point(rng, theta))
        sigma = sigma_operator(theta, f)
        sigma_refined = sigma_operator(refined, f)
        step = sigma_refined - sigma
        try:
            refinement_defect = 0.0 if psd_check(step, tol.tol_psd) else -min_eigenvalue(step)
        except NotHermitianError:
            refinement_defect = _max_abs(step - step.conj().T)

        s_vec = gns.coords(right_sum(theta, f, X))
        return [
            Measurement("sigma self-adjoint", _max_abs(sigma - sigma.conj().T), tol.tol_eq),
            Measurement("one-point refinement increment PSD", refinement_defect, tol.tol_psd),
            Measurement("norm bound ||sigma|| - c", operator_norm(sigma) - c, tol.tol_psd),
            Measurement(
                "sigma X(b) Omega = S Omega",
                _relative(float(np.linalg.norm(sigma @ xb - s_vec)), xb_scale),
                tol.tol_identity,
            ),
        ]

    return trials, [(seed, suite_level), *run_trials(trial, trials, seed)]


def suite_thm_monotone(
    flt: Filtration,
    f: Process,
    X: Process,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerances = Tolerances(),
) -> CheckReport:
    logger.info(f"suite_thm_monotone: f={f.kind.value}, {trials} trials from seed {seed}")
    ran, seeded = thm_monotone_measurements(flt, f, X, trials, seed, tol)
    return _report("thm_monotone", ran, seeded)


#########################################
# Norm-continuous integrands
#########################################


def suite_thm_continuous(
    flt: Filtration,
    f: Process,
    X: Process,
    eps_list: Sequence[float] = DEFAULT_EPS,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerances = Tolerances(),
) -> CheckReport:
    logger.info(f"suite_thm_continuous: eps={list(eps_list)}, {trials} trials from seed {seed}")
    if not isinstance(f, NormContinuousAdapted):
        raise ProcessKindError("suite_thm_continuous", f.kind.value)

    T = flt.horizon
    grid = certify_grid(flt, random_times(make_rng(seed), flt, 8))
    precondition = _martingale_precondition(X, grid, tol)
    if precondition.failed:
        logger.error("suite_thm_continuous: integrator is not a martingale, skipping trials")
        return _report("thm_continuous", 0, [(seed, [precondition])])

    cert = certify(f, grid, tol.tol_eq)
    suite_level = [
        precondition,
        Measurement("f adapted defect", cert.adapted_defect, tol.tol_eq),
        *_mesh_limit_measurements("Cauchy", f, X, tol, net=False),
    ]

    state = flt.state
    xb_norm = gns_norm(X.eval(T), state)
    near_jumps = [s - CAUCHY_OFFSET * T for s in flt.jump_times if 0 < s - CAUCHY_OFFSET * T < T]

    def trial(trial_seed: int) -> list[Measurement]:
        rng = make_rng(trial_seed)
        out = []
        for eps in eps_list:
            delta = modulus_delta(f, eps / (2 * xb_norm)) if xb_norm > 0 else np.inf
            coarse = random_fine_partition(rng, 0.0, T, delta)
            extra_inner = np.unique([*near_jumps, *random_partition(rng, 0.0, T).points[1:-1]])
            fine = coarse.union(Partition([0.0, *extra_inner, T]))
            gap = gns_norm(right_sum(fine, f, X) - right_sum(coarse, f, X), state)
            out.append(Measurement(f"eps={eps:g}: ||(S'' - S') Omega||", gap, eps / 2))

            modulus = modulus_delta(f, eps)
            t1 = float(rng.uniform(0, T))
            t2 = float(np.clip(t1 + rng.uniform(-1, 1) * min(modulus, T), 0, T))
            out.append(
                Measurement(
                    f"eps={eps:g}: ||f(t') - f(t'')|| within delta",
                    operator_norm(f.eval(t1) - f.eval(t2)),
                    eps,
                )
            )
        return out

    return _report("thm_continuous", trials, [(seed, suite_level), *run_trials(trial, trials, seed)])


#########################################
# Tracial integrals
#########################################


def suite_thm_tracial(
    flt: Filtration,
    f: Process,
    X: Process,
    grid: Optional[Sequence[float]] = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerances = Tolerances(),
) -> CheckReport:
    """Martingale property of both integral processes and the tracial adjoint symmetry.

    On a product state only the checks that do not need a trace are run.
    """
    logger.info(f"suite_thm_tracial: {trials} trials from seed {seed}")
    state = flt.state
    grid = certify_grid(flt) if grid is None else sorted(set(float(t) for t in grid))
    precondition = _martingale_precondition(X, certify_grid(flt, grid), tol)
    if precondition.failed:
        logger.error("suite_thm_tracial: integrator is not a martingale, skipping trials")
        return _report("thm_tracial", 0, [(seed, [precondition])])
    if not state.is_tracial:
        logger.info("suite_thm_tracial: product state, skipping the tracial norm symmetry")

    cert = certify(f, grid, tol.tol_eq)
    suite_level = [precondition, Measurement("f adapted defect", cert.adapted_defect, tol.tol_eq)]
    for side, label in ((Side.RIGHT, "Z"), (Side.LEFT, "Y")):
        values = dict(integral_process(f, X, side, grid))
        worst = 0.0
        for s, t in itertools.combinations_with_replacement(grid, 2):
            defect = l2_norm(flt.cond_expect(values[t], s) - values[s], state)
            worst = max(worst, _relative(defect, l2_norm(values[t], state)))
        suite_level.append(Measurement(f"{label} martingale defect", worst, tol.tol_eq))

    gns = flt.gns
    T = flt.horizon
    f_star, X_star = f.adjoint(), X.adjoint()

    def trial(trial_seed: int) -> list[Measurement]:
        rng = make_rng(trial_seed)
        theta = random_partition(rng, 0.0, T)
        s_left = left_sum(theta, f, X)
        s_right = right_sum(theta, f, X)
        s_adjoint = right_sum(theta, f_star, X_star)
        out = [
            Measurement(
                "left sum = adjoint of right sum of adjoints",
                _relative(s_left.max_abs_diff(s_adjoint.adjoint()), s_left.scale()),
                tol.tol_identity,
            )
        ]
        if state.is_tracial:
            out.append(
                Measurement(
                    "||S^l(f, X)||_2 = ||S^r(f*, X*)||_2",
                    _relative(abs(l2_norm(s_left, state) - l2_norm(s_adjoint, state)), l2_norm(s_left, state)),
                    tol.tol_identity,
                )
            )

        y = random_element(rng, flt.shape)
        left_action = gns.left_mult(s_right)
        right_action = gns.right_mult(y)
        scale = operator_norm(left_action) * operator_norm(right_action)
        out.append(
            Measurement(
                "L_S R_y = R_y L_S",
                _relative(_max_abs(left_action @ right_action - right_action @ left_action), scale),
                tol.tol_identity,
            )
        )
        action = gns.coords(commutant_action(s_right, y))
        out.append(
            Measurement(
                "S acting on y Omega",
                _relative(float(np.linalg.norm(action - left_action @ gns.coords(y))), scale),
                tol.tol_identity,
            )
        )
        return out

    return _report("thm_tracial", trials, [(seed, suite_level), *run_trials(trial, trials, seed)])


#########################################
# Spectral step counterexample
#########################################


def straddling_pairs(
    jumps: Sequence[float], horizon: float, rng: np.random.Generator, k: int
) -> list[tuple[float, float]]:
    """k pairs s < tau <= t around randomly chosen spectral jumps tau."""
    pairs = []
    for _ in range(k):
        tau = float(rng.choice(jumps))
        s = float(rng.uniform(max(0.0, tau - 0.5), tau))
        t = tau if rng.uniform() < 0.25 else float(rng.uniform(tau, min(horizon, tau + 0.5)))
        if s < tau <= t:
            pairs.append((s, t))
    return pairs


def steady_pairs(
    jumps: Sequence[float], horizon: float, rng: np.random.Generator, k: int
) -> list[tuple[float, float]]:
    """k pairs s <= t inside one interval [tau_i, tau_{i+1}) between spectral jumps."""
    knots = sorted({0.0, *jumps, horizon})
    pairs = []
    for _ in range(k):
        i = int(rng.integers(0, len(knots) - 1))
        lo, hi = knots[i], knots[i + 1]
        s, t = sorted(float(x) for x in rng.uniform(lo, hi, 2))
        pairs.append((s, t))
    return pairs


def norm_gap_rows(f: Process, pairs: Sequence[tuple[float, float]]) -> list[tuple[float, float, float]]:
    return [(s, t, operator_norm(f.eval(t) - f.eval(s))) for s, t in pairs]


def suite_remark2(
    flt: Filtration,
    X: Process,
    generator: Optional[Element] = None,
    threshold: Optional[RampTable] = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    tol: Tolerances = Tolerances(),
) -> CheckReport:
    """A projection-valued monotone f that is nowhere norm continuous still integrates."""
    logger.info(f"suite_remark2: {trials} trials from seed {seed}")
    f = spectral_step_integrand(flt, generator, threshold)
    jumps = f.spectral_jump_times()
    state = flt.state
    T = flt.horizon

    grid = certify_grid(flt, jumps)
    precondition = _martingale_precondition(X, grid, tol)
    if precondition.failed:
        logger.error("suite_remark2: integrator is not a martingale, skipping trials")
        return _report("remark2", 0, [(seed, [precondition])])

    suite_level = [precondition]
    suite_level.append(Measurement("spectral jumps missing", 0.0 if jumps else 1.0, 0.0))
    for t in grid:
        p = f.eval(t)
        suite_level.append(Measurement(f"f({t:g})^2 = f({t:g})", (p @ p).max_abs_diff(p), tol.tol_eq))
        suite_level.append(Measurement(f"f({t:g}) self-adjoint", p.hermitian_defect(), tol.tol_eq))

    x_terminal = X.eval(T)
    total = state_value(x_terminal.adjoint() @ x_terminal, state).real - abs(state_value(x_terminal, state)) ** 2
    try:
        full = mu_increment(X, 0.0, T, tol.tol_eq)
        suite_level.append(
            Measurement("mu((0, T]) second moment", _relative(abs(full - total), abs(total)), tol.tol_identity)
        )
    except MartingaleDefectError as e:
        suite_level.append(Measurement("mu forms disagree", abs(e.increment_form - e.difference_form), tol.tol_eq))

    def trial(trial_seed: int) -> list[Measurement]:
        rng = make_rng(trial_seed)
        out = []
        if jumps:
            for s, t, gap in norm_gap_rows(f, straddling_pairs(jumps, T, rng, 2)):
                out.append(Measurement("straddling ||f(t) - f(s)|| - 1", abs(gap - 1.0), tol.tol_identity))
        for s, t, gap in norm_gap_rows(f, steady_pairs(jumps, T, rng, 1)):
            out.append(Measurement("steady ||f(t) - f(s)||", gap, tol.tol_identity))

        a, b, c = sorted(float(x) for x in rng.uniform(0, T, 3))
        try:
            mu_ab = mu_increment(X, a, b, tol.tol_eq)
            mu_bc = mu_increment(X, b, c, tol.tol_eq)
            mu_ac = mu_increment(X, a, c, tol.tol_eq)
        except MartingaleDefectError as e:
            out.append(Measurement("mu forms disagree", abs(e.increment_form - e.difference_form), tol.tol_eq))
            return out
        out.append(Measurement("mu nonnegative", _relative(max(0.0, -mu_ab), abs(mu_ac)), tol.tol_identity))
        out.append(
            Measurement("mu additive", _relative(abs(mu_ab + mu_bc - mu_ac), abs(mu_ac)), tol.tol_identity)
        )
        return out

    seeded: Seeded = [(seed, suite_level), *run_trials(trial, trials, seed)]
    _, monotone = thm_monotone_measurements(flt, f, X, trials, seed, tol)
    for trial_seed, measurements in monotone:
        seeded.append(
            (
                trial_seed,
                [Measurement(f"thm_monotone: {m.quantity}", m.residual, m.tolerance) for m in measurements],
            )
        )
    return _report("remark2", trials, seeded)
