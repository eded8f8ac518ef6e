import pytest

from ncqsi.algebra.exceptions import ProcessKindError
from ncqsi.verify import (
    dumps_reports,
    suite_projection_family,
    suite_remark2,
    suite_thm_continuous,
    suite_thm_monotone,
    suite_thm_tracial,
)
from ncqsi.verify.fixtures import (
    decreasing_integrand,
    drifting_integrator,
    linear_integrand,
    non_faithful_filtration,
    qubit_pair_martingale,
    ramp_monotone,
    spectral_step_integrand,
    step_profile_integrand,
)
from ncqsi.verify.random_instances import make_rng, random_monotone
from ncqsi.verify.suites import norm_gap_rows, run_trials, steady_pairs, straddling_pairs

TRIALS = 5


def quantities(report):
    return {f.quantity for f in report.failures}


@pytest.mark.parametrize("which", ["flt", "product_flt"])
def test_projection_family_passes(request, which, tol):
    report = suite_projection_family(request.getfixturevalue(which), TRIALS, seed=0, tol=tol)
    assert report.passed, report.failures
    assert report.trials == TRIALS
    assert report.worst_violation <= 0


def test_projection_family_passes_on_random_product_states(random_product_flt, tol):
    report = suite_projection_family(random_product_flt, TRIALS, seed=4, tol=tol)
    assert report.passed, report.failures


def test_thm_monotone_passes_on_random_product_states(random_product_flt, tol):
    flt = random_product_flt
    f = random_monotone(make_rng(5), flt)
    report = suite_thm_monotone(flt, f, qubit_pair_martingale(flt), TRIALS, seed=5, tol=tol)
    assert report.passed, report.failures


def test_projection_family_flags_non_faithful_state(tol):
    report = suite_projection_family(non_faithful_filtration(), TRIALS, seed=0, tol=tol)
    assert not report.passed
    assert report.trials == 0
    assert quantities(report) == {"faithfulness deficit"}


def test_thm_monotone_passes_for_ramps(flt, X, tol):
    report = suite_thm_monotone(flt, ramp_monotone(flt), X, TRIALS, seed=0, tol=tol)
    assert report.passed, report.failures


def test_thm_monotone_passes_for_spectral_step(product_flt, product_X, tol):
    f = spectral_step_integrand(product_flt)
    report = suite_thm_monotone(product_flt, f, product_X, TRIALS, seed=1, tol=tol)
    assert report.passed, report.failures


def test_thm_monotone_passes_for_integrand_flat_until_late(flt, X, late_ramp, tol):
    report = suite_thm_monotone(flt, late_ramp, X, TRIALS, seed=3, tol=tol)
    assert report.passed, report.failures


def test_thm_monotone_passes_for_random_monotone(flt, X, tol):
    f = random_monotone(make_rng(12), flt)
    report = suite_thm_monotone(flt, f, X, TRIALS, seed=2, tol=tol)
    assert report.passed, report.failures


def test_thm_monotone_flags_decreasing_integrand(flt, X, tol):
    report = suite_thm_monotone(flt, decreasing_integrand(flt), X, TRIALS, seed=0, tol=tol)
    assert not report.passed
    assert "f monotone defect" in quantities(report)


def test_thm_monotone_skips_trials_without_martingale(flt, tol):
    report = suite_thm_monotone(flt, ramp_monotone(flt), drifting_integrator(flt), TRIALS, seed=0, tol=tol)
    assert report.trials == 0
    assert quantities(report) == {"X martingale defect"}


def test_thm_continuous_passes(flt, X, tol):
    report = suite_thm_continuous(flt, linear_integrand(flt), X, trials=TRIALS, seed=0, tol=tol)
    assert report.passed, report.failures


def test_thm_continuous_flags_understated_lipschitz_constant(flt, X, tol):
    report = suite_thm_continuous(flt, step_profile_integrand(flt), X, trials=TRIALS, seed=0, tol=tol)
    assert not report.passed
    assert any("||(S'' - S') Omega||" in q for q in quantities(report))


def test_thm_continuous_needs_norm_continuous_integrand(flt, X, tol):
    with pytest.raises(ProcessKindError):
        suite_thm_continuous(flt, ramp_monotone(flt), X, trials=TRIALS, seed=0, tol=tol)


@pytest.mark.parametrize("which", ["flt", "product_flt"])
def test_thm_tracial_passes(request, which, tol):
    flt = request.getfixturevalue(which)
    X = request.getfixturevalue("X" if which == "flt" else "product_X")
    report = suite_thm_tracial(flt, linear_integrand(flt), X, trials=TRIALS, seed=0, tol=tol)
    assert report.passed, report.failures


def test_thm_tracial_flags_drifting_integrator(flt, tol):
    report = suite_thm_tracial(flt, linear_integrand(flt), drifting_integrator(flt), trials=TRIALS, tol=tol)
    assert not report.passed


def test_remark2_passes(flt, X, tol):
    report = suite_remark2(flt, X, trials=TRIALS, seed=0, tol=tol)
    assert report.passed, report.failures
    assert report.name == "remark2"


def test_remark2_flags_drifting_integrator(flt, tol):
    report = suite_remark2(flt, drifting_integrator(flt), trials=TRIALS, tol=tol)
    assert not report.passed
    assert report.trials == 0


def test_norm_gap_tables(flt):
    f = spectral_step_integrand(flt)
    jumps = f.spectral_jump_times()
    rng = make_rng(0)
    for _, _, gap in norm_gap_rows(f, straddling_pairs(jumps, flt.horizon, rng, 20)):
        assert gap == pytest.approx(1.0)
    for _, _, gap in norm_gap_rows(f, steady_pairs(jumps, flt.horizon, rng, 20)):
        assert gap == pytest.approx(0.0, abs=1e-12)


def test_trials_use_consecutive_seeds():
    seeded = run_trials(lambda s: [s], 4, 10)
    assert seeded == [(10, [10]), (11, [11]), (12, [12]), (13, [13])]


def test_reports_are_deterministic(flt, X, tol):
    first = dumps_reports([suite_thm_monotone(flt, ramp_monotone(flt), X, TRIALS, seed=3, tol=tol)])
    second = dumps_reports([suite_thm_monotone(flt, ramp_monotone(flt), X, TRIALS, seed=3, tol=tol)])
    assert first == second
