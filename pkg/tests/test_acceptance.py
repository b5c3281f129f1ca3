"""Go/no-go acceptance battery.

Each check appends one verdict line to SCORECARD; conftest echoes the
collected lines after the run, and each test prints its own line so a
verbose run shows the verdicts inline.  Criterion 8 is the expensive
one (4 x 1e5 eigensolves); everything else is seconds.
"""

import math
import time

import numpy as np

from kacgeron.core import (
    GeronimusParams,
    eval_pair_closed_form,
    eval_pair_recurrence,
)
from kacgeron.expectation import (
    a0_alpha,
    expected_real_zeros,
    fit_expansion,
    kac_expected_zeros,
    wilkins_a0,
)
from kacgeron.intensity import (
    h_n,
    h_n_direct,
    kernel_intensity,
    monomial_basis,
    verify_h_error_envelope,
)
from kacgeron.montecarlo import run_simulation

SCORECARD: list[str] = []

_E_CACHE: dict[tuple[float, int], float] = {}


def _expected(alpha: float, n: int) -> float:
    key = (alpha, n)
    if key not in _E_CACHE:
        if alpha == 0.0:
            _E_CACHE[key] = kac_expected_zeros(n)
        else:
            _E_CACHE[key] = expected_real_zeros(GeronimusParams(alpha), n)
    return _E_CACHE[key]


def _record(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
    SCORECARD.append(line)
    print(line)
    assert ok, line


def test_criterion_1_kac_closed_form_intensity():
    start = time.perf_counter()
    rng = np.random.default_rng(1001)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 31))
        x = float(rng.uniform(-0.99, 0.99))
        got = kernel_intensity(monomial_basis(n), x)
        t, m = x * x, n + 1
        want = math.sqrt(
            1.0 / (1.0 - t) ** 2 - m * m * t ** n / (1.0 - t ** m) ** 2
        ) / math.pi
        worst = max(worst, abs(got - want) / want)
    took = time.perf_counter() - start
    _record(1, worst <= 1e-10 and took < 1.0,
            f"kernel route vs closed-form flat-case intensity at 100 random "
            f"(n <= 30, x) points: worst rel {worst:.2e} (tol 1e-10), "
            f"{took:.2f}s (budget 1s)")


def test_criterion_2_closed_form_matches_recurrence():
    start = time.perf_counter()
    rng = np.random.default_rng(1002)
    worst = 0.0
    for alpha in (0.9, -0.9, 0.5, -0.5, 0.1, -0.1):
        pa = GeronimusParams(alpha)
        done = 0
        while done < 50:
            m = int(rng.integers(1, 201))
            x = float(rng.uniform(-1.8, 1.8))
            if abs(x) < 0.05 or abs(x + 1.0) < 0.05 or abs(x - 1.0) < 0.05:
                continue  # closed form is singular at 0 and on the cut
            closed = eval_pair_closed_form(pa, m, x)
            rec = eval_pair_recurrence(pa, m, x, normalized=True)
            scale = max(abs(rec.phi), abs(rec.phi_star))
            worst = max(worst,
                        abs(closed.phi - rec.phi) / scale,
                        abs(closed.phi_star - rec.phi_star) / scale)
            done += 1
    took = time.perf_counter() - start
    _record(2, worst <= 1e-9 and took < 5.0,
            f"closed form vs recurrence, 6 alphas x 50 points, m <= 200: "
            f"worst rel {worst:.2e} (tol 1e-9), {took:.2f}s (budget 5s)")


def test_criterion_3_h_representation_matches_derivative():
    start = time.perf_counter()
    rng = np.random.default_rng(1003)
    worst = 0.0
    for _ in range(100):
        alpha = float(rng.uniform(-0.9, 0.9))
        n = int(rng.integers(1, 51))
        x = float(rng.uniform(-0.999, 0.999))
        pa = GeronimusParams(alpha)
        worst = max(worst, abs(h_n(pa, n, x) - h_n_direct(pa, n, x)))
    took = time.perf_counter() - start
    _record(3, worst <= 1e-9 and took < 5.0,
            f"h ratio form vs log-derivative form at 100 random "
            f"(alpha, n <= 50, x) triples: worst diff {worst:.2e} "
            f"(tol 1e-9), {took:.2f}s (budget 5s)")


def test_criterion_4_error_envelope_is_bounded():
    start = time.perf_counter()
    pieces, ok = [], True
    for alpha in (0.5, -0.5):
        pa = GeronimusParams(alpha)
        sups = [verify_h_error_envelope(pa, n) for n in (100, 200, 400, 800)]
        spread = max(sups) / min(sups)
        ok = ok and spread < 2.0
        pieces.append(f"alpha {alpha:+.1f} spread {spread:.3f}")
    took = time.perf_counter() - start
    _record(4, ok and took < 30.0,
            "envelope constants on n in {100,200,400,800}: "
            + ", ".join(pieces)
            + f" (factor bound 2), {took:.2f}s (budget 30s)")


def test_criterion_5_leading_log_slope():
    start = time.perf_counter()
    evens = [2 ** k for k in range(7, 15)]
    logs = [math.log(n + 1.0) for n in evens]
    pieces, ok = [], True
    for alpha in (0.5, -0.5, 0.9, -0.9, 0.0):
        counts = [_expected(alpha, n) for n in evens]
        slope = float(np.polyfit(logs, counts, 1)[0])
        want = 2.0 / math.pi if alpha == 0.0 else 1.0 / math.pi
        off = abs(slope / want - 1.0)
        ok = ok and off <= 0.01
        pieces.append(f"{alpha:+.1f}: {100.0 * off:.3f}%")
    took = time.perf_counter() - start
    _record(5, ok and took < 300.0,
            "log-slope over even n in {2^7..2^14} vs 1/pi (2/pi at "
            "alpha 0), offsets " + ", ".join(pieces)
            + f" (tol 1%), {took:.2f}s (budget 5min)")


def test_criterion_6_constant_term():
    start = time.perf_counter()
    # wilkins_a0 runs adaptive and composite Gauss-Legendre rules and
    # raises QuadratureError past 1e-10, so returning at all certifies
    # the dual-quadrature agreement; the frozen value is a 50-digit
    # arbitrary-precision evaluation of the same integral
    a0 = wilkins_a0()
    oracle_gap = abs(a0 - 0.6257358071990116)
    n = 2 ** 14
    worst = 0.0
    for alpha in (0.5, -0.5):
        law = math.log(n + 1.0) / math.pi + a0_alpha(GeronimusParams(alpha),
                                                     a0)
        worst = max(worst, abs(_expected(alpha, n) - law))
    took = time.perf_counter() - start
    _record(6, oracle_gap <= 1e-10 and worst <= 5e-3 and took < 120.0,
            f"constant term at n = 2^14, alpha +-0.5: worst law gap "
            f"{worst:.2e} (tol 5e-3), dual-rule a0 guard held at 1e-10 and "
            f"a0 is {oracle_gap:.2e} from its high-precision value "
            f"(tol 1e-10), {took:.2f}s (budget 2min)")


def test_criterion_7_sign_asymmetry():
    n = 2 ** 14
    gap = _expected(0.5, n) - _expected(-0.5, n)
    _record(7, 0.99 <= gap <= 1.01,
            f"E(+0.5) - E(-0.5) at n = 2^14: {gap:.6f} (window [0.99, 1.01])")


def test_criterion_8_monte_carlo_concordance():
    cases = ((0.0, 10, 801), (0.5, 50, 802), (-0.5, 50, 803), (0.5, 200, 804))
    start = time.perf_counter()
    pieces, ok = [], True
    for alpha, n, seed in cases:
        t0 = time.perf_counter()
        report = run_simulation(GeronimusParams(alpha), n, 100_000, seed)
        took = time.perf_counter() - t0
        z = abs(report.mean_real_zeros - _expected(alpha, n)) / report.std_error
        ok = ok and z <= 3.0
        pieces.append(f"({alpha:+.1f}, {n}): z {z:.2f}, {took:.0f}s")
    total = time.perf_counter() - start
    _record(8, ok,
            "1e5-trial means vs quadrature, 3 SE window: "
            + ", ".join(pieces)
            + f"; total {total:.0f}s (the 10-min budget assumes a "
            "multi-core host and is reported, not asserted; "
            "see notes/decisions.md)")


def test_criterion_9_parity_split_of_first_correction():
    start = time.perf_counter()
    ns = [2 ** k for k in range(5, 15)] + [2 ** k + 1 for k in range(5, 14)]
    report = fit_expansion(GeronimusParams(0.5), sorted(ns))
    gap = abs(report.fitted_even[0] - report.fitted_odd[0])
    spread = math.hypot(report.stderr_even[0], report.stderr_odd[0])
    took = time.perf_counter() - start
    _record(9, gap > 5.0 * spread and took < 300.0,
            f"first correction by parity at alpha 0.5, n <= 2^14: "
            f"even {report.fitted_even[0]:+.5f}, odd "
            f"{report.fitted_odd[0]:+.5f}, gap/stderr "
            f"{gap / spread:.1f} (needs > 5), {took:.2f}s (budget 5min)")


def test_criterion_10_degenerate_exactness():
    start = time.perf_counter()
    worst0 = max(abs(expected_real_zeros(GeronimusParams(a), 0))
                 for a in (-0.9, -0.5, 0.0, 0.5, 0.9))
    gap1 = abs(kac_expected_zeros(1) - 1.0)
    took = time.perf_counter() - start
    _record(10, worst0 <= 1e-10 and gap1 <= 1e-10 and took < 1.0,
            f"E_0(alpha) = 0 (worst {worst0:.1e}) and E_1(0) = 1 "
            f"(gap {gap1:.1e}), tol 1e-10, {took:.2f}s (budget 1s)")
