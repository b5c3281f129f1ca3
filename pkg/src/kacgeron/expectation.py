"""Expected number of real zeros, asymptotic constants, and parity fits.

The expected count over the whole real line reduces to the window
integral

    E_n = 2 * integral_{-1}^{1} rho_n(x) dx,

because the intensity transported through x -> 1/x carries equal mass
outside the window (h is invariant and the 1/|1 - x^2| weight is the
Jacobian of the fold).  The integrand has three distinct shapes that
each get their own substitution: an O(n) ramp within (n+1)^(-1/2) of
-1, slowly varying bulk, and for alpha > 0 an exponentially narrow
spike near +1 that carries one full expected zero.  expected_real_zeros
integrates each piece on its natural variable; with
endpoint_substitution disabled it falls back to a single adaptive pass
in x with the spike located by breakpoints, which is the slower
cross-check mode.

The n -> infinity constants: wilkins_a0 evaluates the logarithmic-law
constant for the alpha = 0 ensemble from its integral representation
with two independent quadrature rules, and a0_alpha maps it to the
constant of the alpha != 0 law.  fit_expansion estimates the
inverse-power corrections empirically, separately for each parity of n,
pinning the p = 0 term to the closed form rather than fitting it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .core import GeronimusParams
from .errors import (IllConditionedFitError, MissingCoefficientError,
                     QuadratureError)
from .intensity import _EXP_FLOOR, _density

_INV_PI = 1.0 / math.pi

# below this value of (n+1)*|alpha| the two half-windows agree beyond
# quadrature resolution and the alpha = 0 parity fold is used
_FOLD_THRESHOLD = 1e-8


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and limits shared by every quadrature in this module."""

    abs_tol: float = 1e-11
    rel_tol: float = 1e-11
    max_subdivisions: int = 400
    endpoint_substitution: bool = True

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be at least 10")


def _quad(func, a: float, b: float, config: QuadratureConfig,
          points=None, allowance: float = 0.0) -> float:
    # request a couple of digits beyond the configured tolerance and
    # judge the reported estimate against the configured one; allowance
    # widens the gate where the integrand itself is known to carry
    # representation noise the rule cannot settle below
    eps = 0.01 * min(config.abs_tol, config.rel_tol)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, estimate = quad(func, a, b, points=points, epsabs=eps,
                               epsrel=eps, limit=config.max_subdivisions)
    gate = max(config.abs_tol, config.rel_tol * abs(value))
    if estimate > 100.0 * gate + allowance:
        raise QuadratureError(
            f"adaptive rule stalled at error estimate {estimate:.3e}",
            error_estimate=estimate)
    return value


def aux_gamma(s: float) -> float:
    """gamma(s) = 2s / (e^s - e^{-s}), continued by gamma(0) = 1."""
    if s < 0.0:
        raise ValueError("s must be nonnegative")
    if s == 0.0:
        return 1.0
    if s < 1e-4:
        q = s * s
        return 1.0 / (1.0 + q / 6.0 * (1.0 + q / 20.0))
    if s > 30.0:
        # sinh overflows long before s does
        return 2.0 * s * math.exp(-s) / -math.expm1(-2.0 * s)
    return s / math.sinh(s)


def _gamma_complement(t: float) -> float:
    # 1 - gamma(t) without the subtraction; series below t = 0.15,
    # grouped expm1 difference above (relative error ~ 6 eps / t^2)
    q = t * t
    if t < 0.15:
        return q / 6.0 * (1.0 - q * (7.0 / 60.0) * (
            1.0 - q * (31.0 / 294.0) * (
                1.0 - q * (127.0 / 1240.0) * (1.0 - q * (2555.0 / 25146.0)))))
    if t > 30.0:
        # gamma is below 6e-12 here, so nothing cancels, and sinh
        # would overflow past t ~ 710
        return 1.0 - aux_gamma(t)
    sh = math.sinh(t)
    return (0.5 * (math.expm1(t) - math.expm1(-t)) - t) / sh


def aux_f(t: float) -> float:
    """f(t) = sqrt(1 - gamma(t)^2); vanishes like t/sqrt(3) at zero."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 0.0
    if t < 1e-3:
        q = t * t
        return math.sqrt(q / 3.0 * (1.0 - q / 5.0))
    g = aux_gamma(t)
    return math.sqrt(_gamma_complement(t) * (1.0 + g))


def _f_over_t(t: float) -> float:
    if t < 1e-3:
        q = t * t
        return math.sqrt((1.0 - q / 5.0) / 3.0)
    return aux_f(t) / t


def _a0_tail_cut(abs_tol: float) -> float:
    # |f(t) - 1| < 8 t^2 e^{-2t} for t >= 1, so the discarded tail of
    # (f - 1)/t is below 2 e^{-2T} (2T + 1)
    cut = 40.0
    while 2.0 * math.exp(-2.0 * cut) * (2.0 * cut + 1.0) >= 0.1 * abs_tol:
        cut += 5.0
    return cut


@lru_cache(maxsize=32)
def _wilkins_a0(abs_tol: float, rel_tol: float, max_subdivisions: int) -> float:
    config = QuadratureConfig(abs_tol, rel_tol, max_subdivisions)
    cut = _a0_tail_cut(abs_tol)
    adaptive = (_quad(_f_over_t, 0.0, 1.0, config)
                + _quad(lambda t: (aux_f(t) - 1.0) / t, 1.0, cut, config))
    nodes, weights = np.polynomial.legendre.leggauss(40)
    composite = 0.0
    edges = np.concatenate([np.linspace(0.0, 1.0, 5),
                            np.linspace(1.0, cut, 14)[1:]])
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        for t, w in zip(mid + half * nodes, half * weights):
            part = _f_over_t(t) if t <= 1.0 else (aux_f(t) - 1.0) / t
            composite += w * part
    if abs(adaptive - composite) > 1e-10:
        raise QuadratureError(
            "independent rules disagree on the constant-term integral",
            error_estimate=abs(adaptive - composite))
    return (2.0 / math.pi) * (math.log(2.0) + adaptive)


def wilkins_a0(config: QuadratureConfig | None = None) -> float:
    """Constant term of the alpha = 0 growth law, from its integral form.

    Evaluated twice, by adaptive subdivision and by a fixed composite
    Gauss-Legendre rule; a disagreement beyond 1e-10 raises
    QuadratureError.  The infinite tail is truncated where its analytic
    bound drops below a tenth of abs_tol.
    """
    config = config or QuadratureConfig()
    return _wilkins_a0(config.abs_tol, config.rel_tol,
                       config.max_subdivisions)


def a0_alpha(params: GeronimusParams, a0: float) -> float:
    """Constant term of the alpha != 0 law from the alpha = 0 one."""
    if params.alpha == 0.0:
        raise ValueError(
            "the alpha = 0 law has leading coefficient 2/pi and constant "
            "a0 itself; this mapping is undefined there")
    sign = 1.0 if params.alpha > 0.0 else -1.0
    return 0.5 * (a0 + 1.0 + sign) + _INV_PI * math.log(2.0 / abs(params.alpha))


def _left_panels(params: GeronimusParams, n: int,
                 config: QuadratureConfig) -> float:
    # x in [-1, 0] in two pieces: t = (n+1)(1+x) resolves the ramp whose
    # height grows like n, then log(1+x) carries the rest to x = 0.
    # Integrands already carry the factor 2 of the whole-line fold.
    m = n + 1
    nu = m ** -0.5

    def ramp(t: float) -> float:
        um = t / m
        return 2.0 * _density(params, n, um - 1.0, um, 2.0 - um) / m

    total = _quad(ramp, 0.0, math.sqrt(m), config)
    if nu < 1.0:
        def left_log(s: float) -> float:
            um = math.exp(s)
            return 2.0 * _density(params, n, um - 1.0, um, 2.0 - um) * um

        total += _quad(left_log, math.log(nu), 0.0, config)
    return total


def _spike_scales(params: GeronimusParams, m: int) -> tuple[float, float]:
    # returns (log eps(1)^m, s*) where u = e^{s*} is the spike center
    # in u = 1 - x; only meaningful for alpha > 0
    big_l = m * math.log(params.eps_at_one)
    om = -math.expm1(big_l) if big_l > _EXP_FLOOR else 1.0
    y1 = 16.0 * params.alpha ** 2 * om / params.rho ** 2
    return big_l, 0.5 * (big_l + math.log(y1))


def _right_panel(params: GeronimusParams, n: int,
                 config: QuadratureConfig) -> float:
    # x in [0, 1] on s = log(1 - x), plus the analytic unit mass when
    # the alpha > 0 spike sits too deep for floating point at all
    m = n + 1
    smin = -(40.0 + math.log(m + 1.0))
    pts = [-math.log(m) - 2.0, -math.log(m) + 2.0]
    extra = 0.0
    if params.alpha > 0.0:
        big_l, sstar = _spike_scales(params, m)
        if sstar > -300.0:
            smin = min(smin, sstar - 35.0)
            pts += [sstar + k for k in (-10.0, -3.0, 0.0, 3.0, 10.0)]
            pts += [big_l / 3.0 - 2.0, big_l / 3.0, big_l / 3.0 + 2.0]
        else:
            extra = 1.0

    def right_log(s: float) -> float:
        up = math.exp(s)
        return 2.0 * _density(params, n, 1.0 - up, 2.0 - up, up) * up

    pts = sorted(p for p in set(pts) if smin < p < 0.0)
    return _quad(right_log, smin, 0.0, config, points=pts or None) + extra


def _raw_count(params: GeronimusParams, n: int,
               config: QuadratureConfig) -> float:
    # adaptive passes in the x variable itself.  The alpha > 0 spike is
    # resolved in place through breakpoints while its width w = e^{s*}
    # stays above ~2.5e-13; there 1 - x carries only ulp(1)/w relative
    # resolution, so the value (and the rule's error estimate) floor
    # out near 2e-16/w.  Below that width the region beyond the
    # boundary layer is swapped for its analytic unit mass, which the
    # true strip integral approaches superpolynomially.  Both limits
    # meet near 1e-4 in a narrow band of (alpha, n) around the
    # handoff; elsewhere this route is good to ppm level or better.
    # The substituted panels (the default route) have neither
    # limitation; this pass exists as an independent cross-check.
    m = n + 1
    nu = m ** -0.5
    segments: list[tuple[float, float, list[float], float]] = [
        (-1.0, -1.0 + nu, [], 0.0), (-1.0 + nu, 0.0, [], 0.0)]
    extra = 0.0
    right = (0.0, 1.0, [1.0 - nu], 0.0)
    if params.alpha > 0.0:
        big_l, sstar = _spike_scales(params, m)
        dpow = math.exp(big_l / 3.0) if big_l / 3.0 > _EXP_FLOOR else 0.0
        if sstar > math.log(2.5e-13):
            # breakpoint ladder at most 1.5 e-folds apart from the bulk
            # edge down through the layer.  The shoulder spans many
            # decades of 1 - x; over one wide cell the dyadic refinement
            # converges only linearly and the extrapolation table locks
            # onto a truncated tail while reporting a small estimate.
            width = math.exp(sstar)
            pts = [1.0 - nu, 1.0 - dpow]
            pts += [1.0 - math.exp(s)
                    for s in np.arange(math.log(nu), math.log(dpow), -1.5)]
            pts += [1.0 - math.exp(sstar + k)
                    for k in np.arange(-6.0, 6.1, 1.5)]
            allowance = min(4.4e-14 / width, 1e-3) if width < 1e-6 else 0.0
            right = (0.0, 1.0, [p for p in pts if 0.0 < p < 1.0], allowance)
        elif dpow > 1e-13:
            # layer too narrow to sample in x but its outer boundary is
            # still representable: stop there and add the unit mass
            extra = 1.0
            pts = [1.0 - nu]
            pts += [1.0 - math.exp(s)
                    for s in np.arange(math.log(nu), math.log(dpow), -1.5)]
            right = (0.0, 1.0 - dpow,
                     [p for p in pts if 0.0 < p < 1.0 - dpow],
                     min(4.4e-14 / dpow, 1e-3))
        else:
            # boundary itself within ulps of the endpoint: everything
            # the rule can see out there has underflowed, so integrate
            # straight across and add the unit mass
            extra = 1.0
    segments.append(right)

    def integrand(x: float) -> float:
        return 2.0 * _density(params, n, x, 1.0 + x, 1.0 - x)

    value = extra
    for lo, hi, inside, allowance in segments:
        value += _quad(integrand, lo, hi, config,
                       points=sorted(set(inside)) or None,
                       allowance=allowance)
    return value


def expected_real_zeros(params: GeronimusParams, n: int,
                        config: QuadratureConfig | None = None) -> float:
    """E_n: expected number of real zeros of the degree-n random span.

    Integrates the closed-form intensity over the whole real line via
    the [-1, 1] fold.  At alpha = 0 (and when (n+1)|alpha| is below
    resolution) the integrand is even and only the left half is
    computed.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    config = config or QuadratureConfig()
    if n == 0:
        return 0.0
    m = n + 1
    if not config.endpoint_substitution:
        return _raw_count(params, n, config)
    left = _left_panels(params, n, config)
    if m * abs(params.alpha) < _FOLD_THRESHOLD:
        return 2.0 * left
    return left + _right_panel(params, n, config)


def kac_expected_zeros(n: int, config: QuadratureConfig | None = None) -> float:
    """E_n for the constant-coefficient-free case alpha = 0."""
    return expected_real_zeros(GeronimusParams(0.0), n, config)


@dataclass(frozen=True)
class ExpansionReport:
    """Fitted inverse-power corrections to the growth law, per parity.

    fitted_even[p-1] and fitted_odd[p-1] estimate the coefficient of
    (n+1)^{-p} for even and odd n; the p = 0 term is pinned to
    a0_alpha, which both parities share.  stderr_* are the usual
    least-squares standard errors.
    """

    alpha: float
    a0_wilkins: float
    a0_alpha: float
    fitted_even: tuple[float, ...]
    fitted_odd: tuple[float, ...]
    stderr_even: tuple[float, ...]
    stderr_odd: tuple[float, ...]
    residual_norm: float
    n_range: tuple[int, int]

    def __post_init__(self) -> None:
        sign = 1.0 if self.alpha > 0.0 else -1.0
        implied = (0.5 * (self.a0_wilkins + 1.0 + sign)
                   + _INV_PI * math.log(2.0 / abs(self.alpha)))
        if abs(implied - self.a0_alpha) > 1e-12:
            raise ValueError("a0_alpha is not consistent with a0_wilkins")


def asymptotic_estimate(params: GeronimusParams, n: int,
                        report: ExpansionReport, order: int = 1) -> float:
    """Growth law truncated after order terms, parity matched to n.

    order = 1 is the bare log(n+1)/pi + a0_alpha; each further order
    consumes one fitted coefficient of the matching parity.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if params.alpha != report.alpha:
        raise ValueError("report was fitted at a different alpha")
    coeffs = report.fitted_even if n % 2 == 0 else report.fitted_odd
    if order - 1 > len(coeffs):
        raise MissingCoefficientError(
            f"order {order} needs {order - 1} fitted coefficients, "
            f"report holds {len(coeffs)} for this parity")
    value = _INV_PI * math.log(n + 1.0) + report.a0_alpha
    for p in range(1, order):
        value += coeffs[p - 1] * float(n + 1) ** -p
    return value


def _parity_fit(n_values: list[int], residuals: dict[int, float],
                depth: int) -> tuple[tuple[float, ...], tuple[float, ...], float]:
    mp1 = np.array([float(n + 1) for n in n_values])
    design = np.column_stack([mp1 ** -p for p in range(1, depth + 1)])
    if np.linalg.cond(design) > 1e12:
        raise IllConditionedFitError(
            "design matrix condition number exceeds 1e12; reduce depth "
            "or spread n_values")
    y = np.array([residuals[n] for n in n_values])
    coeffs, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    fitted = design @ coeffs
    rss = float(np.sum((y - fitted) ** 2))
    dof = len(n_values) - depth
    covariance = np.linalg.inv(design.T @ design) * (rss / dof)
    stderr = np.sqrt(np.diag(covariance))
    return tuple(coeffs), tuple(stderr), rss


def fit_expansion(params: GeronimusParams, n_values: list[int],
                  depth: int = 2,
                  config: QuadratureConfig | None = None,
                  count_fn=None) -> ExpansionReport:
    """Least-squares estimate of the (n+1)^{-p} corrections, by parity.

    Subtracts the pinned log(n+1)/pi + a0_alpha from E_n at each
    supplied n and fits sum_{p=1}^{depth} A_p (n+1)^{-p} on the even
    and odd subsequences separately.  Each parity needs at least
    depth + 2 entries so the standard errors are defined.  count_fn
    overrides the E_n evaluator (testing hook).
    """
    if params.alpha == 0.0:
        raise ValueError("the corrections are defined against the "
                         "alpha != 0 law; use kac_expected_zeros at 0")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    config = config or QuadratureConfig()
    evens = sorted({n for n in n_values if n % 2 == 0})
    odds = sorted({n for n in n_values if n % 2 == 1})
    if len(evens) < depth + 2 or len(odds) < depth + 2:
        raise ValueError(
            f"need at least {depth + 2} entries of each parity, "
            f"got {len(evens)} even / {len(odds)} odd")
    if count_fn is None:
        count_fn = lambda k: expected_real_zeros(params, k, config)
    a0 = wilkins_a0(config)
    pinned = a0_alpha(params, a0)
    residuals = {n: count_fn(n) - _INV_PI * math.log(n + 1.0) - pinned
                 for n in evens + odds}
    fit_even, err_even, rss_even = _parity_fit(evens, residuals, depth)
    fit_odd, err_odd, rss_odd = _parity_fit(odds, residuals, depth)
    return ExpansionReport(
        alpha=params.alpha,
        a0_wilkins=a0,
        a0_alpha=pinned,
        fitted_even=fit_even,
        fitted_odd=fit_odd,
        stderr_even=err_even,
        stderr_odd=err_odd,
        residual_norm=math.sqrt(rss_even + rss_odd),
        n_range=(min(evens + odds), max(evens + odds)),
    )
