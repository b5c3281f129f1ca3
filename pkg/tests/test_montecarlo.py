import math

import numpy as np
import pytest

from kacgeron.core import GeronimusParams, eval_pair_recurrence
from kacgeron.errors import RootCountDiagnosticError
from kacgeron.expectation import expected_real_zeros, kac_expected_zeros
from kacgeron.montecarlo import (
    RootCountConfig,
    SimulationReport,
    _basis_matrix,
    _resolve_workers,
    colleague_matrix,
    count_real_roots,
    run_simulation,
    sample_polynomial,
)


def test_basis_matrix_is_identity_for_kac():
    assert np.array_equal(_basis_matrix(0.0, 8), np.eye(9))


@pytest.mark.parametrize("alpha", (0.5, -0.7))
def test_basis_matrix_rows_evaluate_to_phi(alpha):
    # rows hold the normalized family, i.e. the monic pair over rho^m
    pa = GeronimusParams(alpha)
    mat = _basis_matrix(alpha, 12)
    for x in (-0.8, 0.3, 1.4):
        values = np.polynomial.polynomial.polyval(x, mat.T)
        for m in range(13):
            monic = eval_pair_recurrence(pa, m, x).phi
            assert values[m] == pytest.approx(monic / pa.rho ** m, rel=1e-10)


def test_sample_polynomial_kac_returns_weights():
    rng = np.random.default_rng(3)
    coeffs = sample_polynomial(GeronimusParams(0.0), 6, rng)
    eta = np.random.default_rng(3).standard_normal(7)
    assert np.array_equal(coeffs, eta)


def test_sample_polynomial_degree_one_formula():
    # eta0 phi_0 + eta1 phi_1 = (eta0 - eta1 alpha/rho) + (eta1/rho) x
    pa = GeronimusParams(0.5)
    coeffs = sample_polynomial(pa, 1, np.random.default_rng(7))
    eta = np.random.default_rng(7).standard_normal(2)
    assert coeffs[0] == pytest.approx(eta[0] - eta[1] * pa.alpha / pa.rho)
    assert coeffs[1] == pytest.approx(eta[1] / pa.rho)
    with pytest.raises(ValueError):
        sample_polynomial(pa, -1, np.random.default_rng(0))


def test_colleague_eigenvalues_match_monomial_roots():
    pa = GeronimusParams(0.3)
    eta = np.random.default_rng(19).standard_normal(26)
    coeffs = eta @ _basis_matrix(pa.alpha, 25)
    from_monomial = np.sort_complex(np.roots(coeffs[::-1]))
    from_colleague = np.sort_complex(np.linalg.eigvals(
        colleague_matrix(pa, eta)))
    assert np.allclose(from_colleague, from_monomial, rtol=1e-8, atol=1e-8)


def test_colleague_matrix_validation():
    pa = GeronimusParams(0.3)
    with pytest.raises(ValueError):
        colleague_matrix(pa, [1.0, 2.0, 0.0])
    with pytest.raises(ValueError):
        colleague_matrix(pa, [1.0])


def test_count_real_roots_examples():
    assert count_real_roots([-1.0, 0.0, 1.0]) == 2
    assert count_real_roots([1.0, 0.0, 1.0]) == 0
    assert count_real_roots([-6.0, 11.0, -6.0, 1.0]) == 3
    assert count_real_roots([0.0, 0.0, 0.0]) == 0
    assert count_real_roots([4.0]) == 0
    # trailing zeros drop the effective degree
    assert count_real_roots([-1.0, 0.0, 1.0, 0.0, 0.0]) == 2


def test_count_config_validation():
    with pytest.raises(ValueError):
        RootCountConfig(method="qr")
    with pytest.raises(ValueError):
        RootCountConfig(imag_tol=0.0)
    with pytest.raises(ValueError):
        RootCountConfig(sturm_max_degree=0)


def test_cross_check_passes_on_separated_roots():
    cfg = RootCountConfig(cross_check=True)
    assert count_real_roots([-4.0, 0.0, -3.0, 0.0, 1.0], cfg) == 2
    rng = np.random.default_rng(5)
    pa = GeronimusParams(0.5)
    for _ in range(10):
        coeffs = sample_polynomial(pa, 20, rng)
        count_real_roots(coeffs, cfg)  # must not raise


def test_cross_check_flags_tolerance_artifact():
    # x^2 + 1e-40 has a conjugate pair hugging the axis far inside
    # imag_tol, so the eigenvalue count says 2, the exact count 0,
    # and nothing sits in the ambiguity band to excuse the gap
    cfg = RootCountConfig(cross_check=True)
    with pytest.raises(RootCountDiagnosticError):
        count_real_roots([1e-40, 0.0, 1.0], cfg)


def test_run_simulation_is_schedule_independent():
    pa = GeronimusParams(0.5)
    one = run_simulation(pa, 12, trials=400, seed=11, workers=1)
    two = run_simulation(pa, 12, trials=400, seed=11, workers=2)
    assert one.histogram == two.histogram
    assert one.mean_real_zeros == two.mean_real_zeros
    assert one.failed_trials == two.failed_trials == 0


def test_run_simulation_degenerate_degrees():
    pa = GeronimusParams(-0.4)
    flat = run_simulation(pa, 0, trials=150, seed=1, workers=1)
    assert flat.mean_real_zeros == 0.0
    line = run_simulation(pa, 1, trials=150, seed=1, workers=1)
    assert line.mean_real_zeros == 1.0
    assert line.histogram == {1: 150}
    assert line.std_error == 0.0


def test_run_simulation_validation():
    pa = GeronimusParams(0.5)
    with pytest.raises(ValueError):
        run_simulation(pa, -1, trials=200, seed=0)
    with pytest.raises(ValueError):
        run_simulation(pa, 10, trials=50, seed=0)
    with pytest.raises(ValueError):
        run_simulation(pa, 40, trials=200, seed=0,
                       config=RootCountConfig(method="sturm"))
    with pytest.raises(ValueError):
        run_simulation(pa, 10, trials=200, seed=0, workers=0)


def test_resolve_workers_sources(monkeypatch):
    monkeypatch.setenv("KACGERON_WORKERS", "3")
    assert _resolve_workers(None) == 3
    assert _resolve_workers(2) == 2  # explicit argument wins
    monkeypatch.setenv("KACGERON_WORKERS", "0")
    with pytest.raises(ValueError):
        _resolve_workers(None)
    monkeypatch.delenv("KACGERON_WORKERS")
    assert _resolve_workers(None) >= 1


def test_simulation_tracks_quadrature_kac():
    report = run_simulation(GeronimusParams(0.0), 10, trials=3000, seed=42,
                            workers=1)
    gap = abs(report.mean_real_zeros - kac_expected_zeros(10))
    assert gap <= 4.0 * report.std_error


def test_simulation_tracks_quadrature_geronimus():
    pa = GeronimusParams(0.5)
    report = run_simulation(pa, 50, trials=2000, seed=7, workers=1)
    gap = abs(report.mean_real_zeros - expected_real_zeros(pa, 50))
    assert gap <= 4.0 * report.std_error


def test_simulation_on_colleague_routes():
    # wide coefficient span forces the phi-basis matrix at small n,
    # and the raw degree cap forces it at large n
    spanned = GeronimusParams(0.9)
    report = run_simulation(spanned, 30, trials=400, seed=3, workers=1)
    gap = abs(report.mean_real_zeros - expected_real_zeros(spanned, 30))
    assert gap <= 4.0 * report.std_error

    tall = GeronimusParams(0.5)
    big = run_simulation(tall, 320, trials=100, seed=5, workers=1)
    gap = abs(big.mean_real_zeros - expected_real_zeros(tall, 320))
    assert gap <= 4.0 * big.std_error


def test_odd_degree_trials_always_find_a_zero():
    report = run_simulation(GeronimusParams(-0.5), 15, trials=500, seed=9,
                            workers=1)
    assert min(report.histogram) >= 1
    assert report.failed_trials == 0


def test_sturm_and_companion_methods_agree():
    pa = GeronimusParams(0.5)
    fast = run_simulation(pa, 18, trials=300, seed=21, workers=1)
    exact = run_simulation(pa, 18, trials=300, seed=21, workers=1,
                           config=RootCountConfig(method="sturm"))
    assert fast.histogram == exact.histogram
    assert exact.root_method == "sturm"


def test_eigenvalue_counts_survive_exact_cross_check():
    # 1e4 trials, each eigenvalue count replayed through the exact
    # Sturm counter; any disagreement outside the ambiguity band
    # raises, so completing the run certifies full agreement.  Takes
    # about a minute; the span at (0.5, 25) keeps the monomial route
    # live so both counters actually run.
    report = run_simulation(GeronimusParams(0.5), 25, trials=10_000, seed=33,
                            workers=1, config=RootCountConfig(cross_check=True))
    assert report.failed_trials == 0


def test_draws_are_standard_gaussian():
    # 1e6 weights through the flat-case path, which hands them back
    # unchanged; 5 sigma windows on mean and variance
    rng = np.random.default_rng(123)
    pa = GeronimusParams(0.0)
    draws = np.concatenate([sample_polynomial(pa, 999, rng)
                            for _ in range(1000)])
    assert abs(draws.mean()) < 5.0 / math.sqrt(1e6)
    assert abs(draws.var(ddof=1) - 1.0) < 5.0 * math.sqrt(2.0 / 1e6)


def test_report_consistency_guards():
    with pytest.raises(ValueError):
        SimulationReport(alpha=0.0, n=2, trials=10, mean_real_zeros=1.0,
                         std_error=0.0, histogram={1: 9})
    with pytest.raises(ValueError):
        SimulationReport(alpha=0.0, n=2, trials=10, mean_real_zeros=2.0,
                         std_error=0.0, histogram={1: 9}, failed_trials=1)
