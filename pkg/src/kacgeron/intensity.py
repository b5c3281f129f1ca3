"""Real-zero intensity of random combinations of the polynomial family.

For independent standard Gaussian weights eta_i, the expected number of
real zeros of sum_i eta_i f_i(x) in a window is the integral of the
Edelman-Kostlan intensity built from the kernels

    K(x)      = sum f_i(x)^2,
    K10(x)    = sum f_i'(x) f_i(x),
    K11(x)    = sum f_i'(x)^2,
    rho_n(x)  = sqrt(K K11 - K10^2) / (pi K).

For the orthonormal family phi_0..phi_n this collapses, through the
Christoffel-Darboux identity, to

    rho_n(x) = sqrt(1 - h_{n+1}(x)^2) / (pi |1 - x^2|),
    h_{n+1}  = (1 - x^2) b'_{n+1} / (1 - b_{n+1}^2),
    b_{n+1}  = phi_{n+1} / phi*_{n+1},

with h_{n+1}(1/x) = h_{n+1}(x).  The direct definition cancels badly in
floating point: 1 - h_{n+1}^2 dips to zero at parity-dependent rates near
x = -1 and has an exponentially thin spike near x = 1 for alpha > 0.
The production path therefore evaluates the factorization

    1 - h_{n+1}^2 = (1-x)^2 W1 W2 / B^2,
    B  = (1 - E)(S + R E),              E = eps(x)^(n+1),
    W1 = rho^2 (1 - E^2)/r - (n+1)(1+x) E/x,
    W2 = (1 - E)(S^2 + R^2 E)/r + (n+1)(1+x)(1-x)^2 E/x,

where R = r + alpha(1+x), S = r - alpha(1+x), R S = rho^2 (1-x)^2, and
every subtraction that can go deep is regrouped through expm1/log1p so
the cancellation happens inside a single exponent.  h_{n+1} itself uses
the numerator form

    h_{n+1} = (1+x) [ -(alpha/r)(1-E)(S - R E) + (n+1)(1-x)^2 eps^n
              4 rho^2/phi^2 ] / B,

which keeps relative accuracy where h is small and reduces exactly to
the monomial formula (n+1) x^n (1-x^2)/(1-x^(2n+2)) at alpha = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import GeronimusParams
from .errors import DegenerateKernelError, EmptyRangeError, PoleError

__all__ = [
    "BasisFamily",
    "IntensityProfile",
    "monomial_basis",
    "geronimus_basis",
    "kernel_intensity",
    "h_n",
    "h_limit",
    "h_n_direct",
    "b_ratio",
    "b_limit",
    "b_ratio_with_derivative",
    "cd_ratio_intensity",
    "sample_profile",
    "verify_h_error_envelope",
]

_EXP_FLOOR = -745.0  # exp underflows to 0 below this


def _d3(q: float) -> float:
    """sum_{k>=3} q^k / k = -log1p(-q) - q - q^2/2, by series.

    Every caller has q below ~0.025, where sixteen terms reach full
    precision; the direct log1p form would lose the q^3 head.
    """
    acc = 0.0
    t = q * q * q
    for k in range(3, 19):
        acc += t / k
        t *= q
    return acc


def _sinh_tail(x: float) -> float:
    """sinh(x) - x for |x| < 0.05, exact to working precision."""
    x2 = x * x
    return (x * x2 / 6.0) * (1.0 + (x2 / 20.0)
                             * (1.0 + (x2 / 42.0) * (1.0 + x2 / 72.0)))


def _w1_subtractive(rho2: float, r: float, phi: float, m: int, um: float,
                    ax: float, X: float, eX: float,
                    x_positive: bool) -> float:
    """W1 = rho^2(1 - e^{-2X})/r - m um e^{-X}/|x| when the terms compete.

    Equal to e^{-X}(K sinh X - L) with K = 2 rho^2/r, L = m um/|x|.  For
    X >= 0.05 one expm1 regroup suffices; below that the difference
    K X - L vanishes to third order in the endpoint offset, so it is
    evaluated from the exact cancellation-free rearrangements
        x > 0:  K X - L = m (2 rho^2 x D3(q) - 2 r^3/phi)/(r x),
        x < 0:  K X - L = m um ((r^2-um^2) phi D3(q)/(2um) - 2um^2)
                          / (phi r (1-um)),
    with q = 2r/phi resp. 2um/phi and D3(q) = -log1p(-q) - q - q^2/2.
    """
    if X >= 0.05:
        num = m * um * r
        den = rho2 * ax
        if num < den * 1e300:
            return (rho2 / r) * -math.expm1(math.log(eX + num / den) - X)
        # rho2*|x| down at the subnormal floor overflows num/den; its log
        # is still tame, and eX <= 1 cannot compete with Z >= 1e300
        return (rho2 / r) * -math.expm1(
            math.log(num) - math.log(rho2) - math.log(ax) - X)
    if x_positive:
        q = 2.0 * r / phi
        kx_l = m * (2.0 * rho2 * ax * _d3(q) - 2.0 * r * r * r / phi) / (r * ax)
    else:
        q = 2.0 * um / phi
        inner = (r - um) * (r + um) * phi * _d3(q) / (2.0 * um) - 2.0 * um * um
        kx_l = m * um * inner / (phi * r * ax)
    return eX * ((2.0 * rho2 / r) * _sinh_tail(X) + kx_l)


def _w2_even_left(alpha: float, rho2: float, r: float, phi: float, m: int,
                  um: float, up: float, ax: float, S: float, R: float,
                  X: float, eX: float) -> float:
    """W2 at x < 0 with even n+1, where E = +e^{-X} makes it subtractive.

    W2 = (1-E)(S^2+R^2 E)/r - m um up^2 E/(1-um).  For X >= 0.05 the
    whole thing collapses into one expm1; below, the X^1 coefficient
    cancels the m um up^2 term to third order in um, and the exact
    remainder (2 alpha^2 - 1) / r^2 polynomial form takes over:
        X(S^2+R^2)/r - M = m u (P0 + r P1)/(r phi^2 (1-u))
                           + m (2r^2 + 2 alpha^2 u^2) D3(q)/r,
        P0 = 8u^3(1-u)(2 alpha^2 - 1) - 2u^5,    P1 = -2u^2 r^2,
    with the even/odd exponential tail restored term by term
    (S^2 - R^2 = -4 alpha um r and S^2 + R^2 = 2r^2 + 2 alpha^2 um^2).
    """
    if X >= 0.05:
        s2 = S * S + R * R * eX
        num = m * um * up * up * r
        den = ax * s2
        if num < den * 1e300:
            return den * -math.expm1(math.log1p(num / den) - X) / (r * ax)
        # same subnormal-floor overflow as in _w1_subtractive
        return s2 * -math.expm1(
            math.log(num) - math.log(ax) - math.log(s2) - X) / r
    u = um
    q = 2.0 * u / phi
    p0 = 8.0 * u ** 3 * (1.0 - u) * (2.0 * alpha * alpha - 1.0) - 2.0 * u ** 5
    s2_sum = 2.0 * r * r + 2.0 * (alpha * um) ** 2
    t_head = u * (p0 - 2.0 * u * u * r * r * r) / (r * phi * phi * ax)
    inner = m * (t_head + s2_sum * _d3(q) / r)
    # restore exp(-X) tail: even powers carry S^2 - R^2, odd S^2 + R^2
    coeff_even = -4.0 * alpha * um  # (S^2 - R^2)/r
    xk = X * X
    fact = 2.0
    for k in range(2, 10):
        c = coeff_even if k % 2 == 0 else s2_sum / r
        inner += c * xk / fact
        xk *= X
        fact *= k + 1.0
    return eX * inner


def _s_minus_re(alpha: float, um: float, r: float, R: float, S: float,
                X: float, eX: float, squared: bool, right: bool) -> float:
    """S^k - R^k e^{-X} (k = 1 or 2) without deep cancellation.

    Left of the origin the identities S - R = -2 alpha um and
    S^2 - R^2 = -4 alpha um r turn the difference into
        S   - R   e^{-X} = S  (-expm1(-X)) - 2 alpha um   e^{-X},
        S^2 - R^2 e^{-X} = S^2(-expm1(-X)) - 4 alpha um r e^{-X},
    which keep the division-computed small root in front, so nothing
    re-subtracts even when alpha pushes S far under R.  Right of the
    origin S itself collapses like (1-x)^2 and those forms re-subtract;
    there d = X + k log(S/R) is far from the dangerous zone and a single
    expm1 in d is exact.
    """
    k = 2 if squared else 1
    if right:
        d = X + k * math.log(S / R)
        if d >= 0.0:
            return -(S ** k) * math.expm1(-d)
        return (R ** k) * eX * math.expm1(d)
    omE = -math.expm1(-X) if X < -_EXP_FLOOR else 1.0
    if squared:
        return S * S * omE - 4.0 * alpha * um * r * eX
    return S * omE - 2.0 * alpha * um * eX


# ---------------------------------------------------------------------------
# stable building blocks on the real interval


@dataclass(frozen=True)
class _Pieces:
    """Point-local quantities; um = 1+x and up = 1-x carry the exact offsets."""

    rho2: float
    um: float
    up: float
    r: float
    phi: float
    R: float
    S: float
    c: float  # -log|eps(x)|, >= 0


def _pieces(params: GeronimusParams, x: float, um: float, up: float) -> _Pieces:
    alpha = params.alpha
    rho2 = (1.0 - alpha) * (1.0 + alpha)
    # radicand of r written around the nearer endpoint
    if x <= 0.0:
        r = math.sqrt(4.0 * rho2 * (1.0 - um) + um * um)
    else:
        r = math.sqrt(4.0 * alpha * alpha * (1.0 - up) + up * up)
    phi = um + r
    # R S = rho^2 up^2 exactly; compute the additive one, divide for the other
    if alpha >= 0.0:
        R = r + alpha * um
        S = rho2 * up * up / R
    else:
        S = r - alpha * um
        R = rho2 * up * up / S
    # c = -log|eps|; |eps| = 4 rho^2 |x| / phi^2 exactly, but the log1p
    # route through 1 - |eps| (= 2r/phi or 2(1+x)/phi) conditions better
    # when |eps| is close to 1, so switch on which side of 1/2 we sit
    if x == 0.0:
        c = math.inf
    else:
        e_mag = 4.0 * rho2 * abs(x) / (phi * phi)
        if e_mag == 0.0:
            # alpha within rounding of +-1 can underflow eps outright
            c = math.inf
        elif e_mag <= 0.5:
            c = -math.log(e_mag)
        elif x > 0.0:
            c = -math.log1p(-2.0 * r / phi)
        else:
            c = -math.log1p(-2.0 * um / phi)
    return _Pieces(rho2=rho2, um=um, up=up, r=r, phi=phi, R=R, S=S, c=c)


def _w_forms(params: GeronimusParams, n: int, x: float, um: float,
             up: float) -> tuple[float, float, float]:
    """(W1, W2, B) at an interior point, nonnegativity clamped.

    E = eps^(n+1) = sign * exp(-X) with X = (n+1) c; the sign is negative
    exactly when x < 0 and n+1 is odd.  Each parity has one of W1/W2
    genuinely dipping to zero near x = -1 (and W1 near x = +1); those
    combinations are evaluated as -expm1(log(...) - X) so the deep
    cancellation sits in a single well-conditioned exponent.
    """
    m = n + 1
    q = _pieces(params, x, um, up)
    alpha = params.alpha
    rho2, r, phi, R, S = q.rho2, q.r, q.phi, q.R, q.S
    if x == 0.0:
        return rho2 / r, S * S / r, S
    X = m * q.c
    eX = math.exp(-X) if X < -_EXP_FLOOR else 0.0
    omE = -math.expm1(-X) if X < -_EXP_FLOOR else 1.0  # 1 - e^{-X}
    neg = x < 0.0 and m % 2 == 1  # E = -e^{-X}
    ax = abs(x)

    # W1 = rho^2 (1 - E^2)/r - m um E/x; the E/x term is positive unless
    # x < 0 with even m, in which case it adds instead of subtracting.
    if x > 0.0 or neg:
        W1 = _w1_subtractive(rho2, r, phi, m, um, ax, X, eX, x > 0.0)
    else:
        W1 = (rho2 / r) * -math.expm1(-2.0 * X) + m * um * eX / ax

    # W2 = (1 - E)(S^2 + R^2 E)/r + m um up^2 E/x
    if x > 0.0:
        W2 = omE * (S * S + R * R * eX) / r + m * um * up * up * eX / ax
    elif neg:
        W2 = ((1.0 + eX)
              * _s_minus_re(alpha, um, r, R, S, X, eX, True, False)
              / r + m * um * up * up * eX / ax)
    else:
        W2 = _w2_even_left(alpha, rho2, r, phi, m, um, up, ax, S, R, X, eX)

    if neg:
        B = (1.0 + eX) * _s_minus_re(alpha, um, r, R, S, X, eX, False, False)
    else:
        B = omE * (S + R * eX)
    return max(W1, 0.0), max(W2, 0.0), B


def _density(params: GeronimusParams, n: int, x: float, um: float,
             up: float) -> float:
    """rho_n at an interior point of (-1, 1) through the W factorization."""
    if n == 0:
        # h_1 == 1 identically: a degree-0 sample is a nonzero constant
        return 0.0
    W1, W2, B = _w_forms(params, n, x, um, up)
    return math.sqrt(W1 * W2) / (math.pi * um * B)


def _h_closed(params: GeronimusParams, n: int, x: float, um: float,
              up: float) -> float:
    """h_{n+1} at x in (-1, 1) via the relative-accurate numerator form."""
    if n == 0:
        return 1.0
    m = n + 1
    alpha = params.alpha
    q = _pieces(params, x, um, up)
    r, R, S = q.r, q.R, q.S
    if x == 0.0:
        return -alpha * um / r
    X = m * q.c
    eX = math.exp(-X) if X < -_EXP_FLOOR else 0.0
    neg = x < 0.0 and m % 2 == 1
    # E_over_x = eps^n 4 rho^2/phi^2, sign (sign x)^n
    nc = n * q.c
    mag = math.exp(-nc) * 4.0 * q.rho2 / (q.phi * q.phi) if nc < -_EXP_FLOOR else 0.0
    e_over_x = mag if (x > 0.0 or n % 2 == 0) else -mag
    if neg:
        s_minus = S + R * eX  # S - R E with E = -e^{-X}
        one_mE = 1.0 + eX
        B = one_mE * _s_minus_re(alpha, um, r, R, S, X, eX, False, False)
    else:
        s_minus = _s_minus_re(alpha, um, r, R, S, X, eX, False, x > 0.0)
        one_mE = -math.expm1(-X) if X < -_EXP_FLOOR else 1.0
        B = one_mE * (S + R * eX)
    N = um * (-(alpha / r) * one_mE * s_minus + m * up * up * e_over_x)
    return N / B


# ---------------------------------------------------------------------------
# scaled derivative jets through the recurrence


def _pair_jets(params: GeronimusParams, m: int, x: float,
               order: int) -> tuple[np.ndarray, np.ndarray]:
    """Taylor coefficients of (phi_m, phi*_m) at x up to the given order.

    Jointly rescaled whenever magnitudes pass 1e100; only scale-free
    ratios of the two jets are meaningful to callers.
    """
    k = order + 1
    a = np.zeros(k)
    b = np.zeros(k)
    a[0] = 1.0
    b[0] = 1.0
    alpha = params.alpha
    inv_rho = 1.0 / params.rho
    for _ in range(m):
        xa = x * a
        xa[1:] += a[:-1]  # multiply the jet by (x + w)
        a, b = (xa - alpha * b) * inv_rho, (b - alpha * xa) * inv_rho
        mag = max(np.max(np.abs(a)), np.max(np.abs(b)))
        if mag > 1e100:
            a /= mag
            b /= mag
    return a, b


def h_n_direct(params: GeronimusParams, n: int, x: float) -> float:
    """h_{n+1}(x) straight from the definition via the recurrence.

    Reference path for cross-checks; loses accuracy within ~1e-8 of the
    endpoints where 1 - b^2 degenerates.
    """
    if abs(x) > 1.0:
        return h_n_direct(params, n, 1.0 / x)
    a, b = _pair_jets(params, n + 1, x, order=1)
    num = (1.0 - x * x) * (a[1] * b[0] - a[0] * b[1])
    den = (b[0] - a[0]) * (b[0] + a[0])
    return num / den


def b_ratio_with_derivative(params: GeronimusParams, n: int,
                            x: float) -> tuple[float, float]:
    """(b_{n+1}(x), b'_{n+1}(x)) at real x from the recurrence jets."""
    a, b = _pair_jets(params, n + 1, x, order=1)
    if b[0] == 0.0:
        raise PoleError(f"phi*_{n + 1} vanishes at x = {x}")
    val = a[0] / b[0]
    der = (a[1] * b[0] - a[0] * b[1]) / (b[0] * b[0])
    return val, der


# ---------------------------------------------------------------------------
# public h and b evaluations


def h_n(params: GeronimusParams, n: int, x: float) -> float:
    """Ratio h_{n+1}(x) entering the degree-n intensity.

    Exact values are returned at x = +-1 (1 and -(-1)^(n+1)); outside
    [-1, 1] the reflection h(1/x) = h(x) applies.  n = 0 returns the
    identity h_1 == 1.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x = float(x)
    if x == 1.0:
        return 1.0
    if x == -1.0:
        return -(-1.0) ** (n + 1)
    if abs(x) > 1.0:
        # h(1/x) = h(x); the offsets (x +- 1)/x carry full relative
        # accuracy where 1 -+ 1/x would round
        return _h_closed(params, n, 1.0 / x, (x + 1.0) / x, (x - 1.0) / x)
    return _h_closed(params, n, x, 1.0 + x, 1.0 - x)


def h_limit(params: GeronimusParams, x: float) -> float:
    """Pointwise limit h(x) = -alpha (1+x)/r(x) of h_{n+1} on [-1, 1]."""
    x = float(x)
    if params.alpha == 0.0:
        # r(1) = 0 makes the formula 0/0 there; the limit vanishes
        # identically, which is also its continuous extension
        return 0.0
    if abs(x) > 1.0:
        x, um, up = 1.0 / x, (x + 1.0) / x, (x - 1.0) / x
    else:
        um, up = 1.0 + x, 1.0 - x
    q = _pieces(params, x, um, up)
    return -params.alpha * um / q.r


def b_ratio(params: GeronimusParams, n: int, z) -> complex:
    """Ratio b_{n+1}(z) = phi_{n+1}(z)/phi*_{n+1}(z) off the arc.

    Closed form with eps^(n+1) taken through the log so large n stays
    representable.  Raises PoleError where phi*_{n+1} vanishes.
    """
    from .core import branch_values

    if n < 0:
        raise ValueError("n must be >= 0")
    m = n + 1
    alpha = params.alpha
    bv = branch_values(params, z)
    lam = 2.0 * (1.0 + alpha)
    if z == 0 or bv.eps == 0:
        # eps underflows for subnormal z long before z itself does
        epow = 0.0
    elif isinstance(bv.eps, complex):
        import cmath

        epow = cmath.exp(m * cmath.log(bv.eps))
    else:
        le = math.log(abs(bv.eps))
        mag = math.exp(m * le) if m * le > _EXP_FLOOR else 0.0
        epow = mag if bv.eps >= 0.0 or m % 2 == 0 else -mag
    num = (bv.phi_big - lam) - epow * (bv.psi_big - lam)
    den = (bv.phi_big - lam * z) - epow * (bv.psi_big - lam * z)
    if den == 0:
        raise PoleError(f"phi*_{m} vanishes at z = {z!r}")
    val = num / den
    if isinstance(val, complex) and not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise PoleError(f"ratio b_{m} overflowed at z = {z!r}")
    return val


def b_limit(params: GeronimusParams, z) -> complex:
    """Limit b(z) = -2 alpha / (r(z) + 1 - z) of b_{n+1} inside the disk."""
    from .core import branch_values

    bv = branch_values(params, z)
    den = bv.r + 1.0 - z
    if den == 0:
        raise PoleError(f"b limit has a pole at z = {z!r}")
    return -2.0 * params.alpha / den


# ---------------------------------------------------------------------------
# endpoint intensity via order-3 jets


def _series_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Truncated power-series quotient, both length k, den[0] != 0."""
    k = len(num)
    out = np.zeros(k)
    for j in range(k):
        acc = num[j] - np.dot(out[:j], den[j:0:-1][: j])
        out[j] = acc / den[0]
    return out


def _endpoint_intensity(params: GeronimusParams, n: int, side: int) -> float:
    """Limit of rho_n at x = side (+-1) from third-order jets.

    With w = x - side, both 1 - x^2 and 1 - b^2 vanish linearly, so
    h = 1 - x^2 over 1 - b^2 times b' has a finite series whose square
    deficit 1 - h^2 starts at w^2; the intensity limit is
    sqrt(coefficient)/(2 pi).
    """
    if n == 0:
        return 0.0
    a, b = _pair_jets(params, n + 1, float(side), order=3)
    bj = _series_div(a, b)
    b0, b1, b2, b3 = bj
    # numerator (1-x^2) b' and denominator 1-b^2 share the root at w=0
    if side == 1:
        one_minus_x2 = np.array([0.0, -2.0, -1.0, 0.0])
    else:
        one_minus_x2 = np.array([0.0, 2.0, -1.0, 0.0])
    bprime = np.array([b1, 2.0 * b2, 3.0 * b3, 0.0])
    num_full = np.convolve(one_minus_x2, bprime)[:4]
    one_minus_b2 = np.array([
        (1.0 - b0) * (1.0 + b0),
        -2.0 * b0 * b1,
        -(b1 * b1 + 2.0 * b0 * b2),
        -2.0 * (b0 * b3 + b1 * b2),
    ])
    # both series start at w^1; divide the shifted parts
    h = _series_div(num_full[1:], one_minus_b2[1:])
    h0, h1, h2 = h
    # 1 - h^2 = e0 + e1 w + e2 w^2; e0, e1 vanish identically here
    e2 = -(h1 * h1 + 2.0 * h0 * h2)
    return math.sqrt(max(e2, 0.0)) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# intensity entry points


def cd_ratio_intensity(params: GeronimusParams, n: int, x: float) -> float:
    """Real-zero intensity rho_n(x) of the degree-n Gaussian combination.

    Valid for every real x; endpoints use the jet limit, |x| > 1 uses
    h(1/x) = h(x) with the local 1/|1 - x^2| weight.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    x = float(x)
    if n == 0:
        return 0.0
    if 0.0 < abs(x) < 2.2250738585072014e-308:
        x = 0.0  # subnormal x underflows the W forms; the density is flat here
    if abs(x) == 1.0:
        return _endpoint_intensity(params, n, int(x))
    if abs(x) > 1.0:
        y = 1.0 / x
        um_y, up_y = (x + 1.0) / x, (x - 1.0) / x
        W1, W2, B = _w_forms(params, n, y, um_y, up_y)
        s = math.sqrt(W1 * W2) * up_y / B  # sqrt(1 - h(y)^2)
        return s / (math.pi * abs((x - 1.0) * (x + 1.0)))
    return _density(params, n, x, 1.0 + x, 1.0 - x)


def kernel_intensity(basis: "BasisFamily", x: float) -> float:
    """Edelman-Kostlan intensity at x for an arbitrary smooth basis.

    Clamps rounding-level negative radicands to zero; a radicand below
    -1e-12 relative signals an inconsistent evaluator and raises
    DegenerateKernelError.
    """
    k = k10 = k11 = 0.0
    for i in range(basis.size):
        f, fp = basis.evaluator(i, x)
        k += f * f
        k10 += f * fp
        k11 += fp * fp
    if k <= 0.0:
        raise DegenerateKernelError("kernel K(x, x) is not positive")
    rad = k * k11 - k10 * k10
    scale = max(k * k11, 1.0)
    if rad < -1e-12 * scale:
        raise DegenerateKernelError(
            f"kernel radicand {rad!r} is negative beyond rounding at x = {x}")
    if rad < 0.0:
        rad = 0.0
    return math.sqrt(rad) / (math.pi * k)


@dataclass(frozen=True)
class BasisFamily:
    """Basis f_0..f_{size-1} with joint value/derivative evaluator.

    evaluator(i, x) returns (f_i(x), f_i'(x)).
    """

    evaluator: Callable[[int, float], tuple[float, float]]
    size: int
    label: str

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("basis needs at least one function")


def monomial_basis(n: int) -> BasisFamily:
    """Monomials 1, x, ..., x^n (the alpha = 0 family)."""

    def evaluator(i: int, x: float) -> tuple[float, float]:
        if i == 0:
            return 1.0, 0.0
        return x ** i, i * x ** (i - 1)

    return BasisFamily(evaluator=evaluator, size=n + 1, label="monomial")


def geronimus_basis(params: GeronimusParams, n: int) -> BasisFamily:
    """Orthonormal family phi_0..phi_n with derivatives, swept per point."""
    cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def sweep(x: float) -> tuple[np.ndarray, np.ndarray]:
        got = cache.get(x)
        if got is not None:
            return got
        vals = np.empty(n + 1)
        ders = np.empty(n + 1)
        p, ps, dp, dps = 1.0, 1.0, 0.0, 0.0
        vals[0], ders[0] = p, dp
        alpha, inv_rho = params.alpha, 1.0 / params.rho
        for i in range(1, n + 1):
            p, ps, dp, dps = (
                (x * p - alpha * ps) * inv_rho,
                (ps - alpha * x * p) * inv_rho,
                (p + x * dp - alpha * dps) * inv_rho,
                (dps - alpha * (p + x * dp)) * inv_rho,
            )
            vals[i], ders[i] = p, dp
        if len(cache) > 8:
            cache.clear()
        cache[x] = (vals, ders)
        return vals, ders

    def evaluator(i: int, x: float) -> tuple[float, float]:
        vals, ders = sweep(x)
        return float(vals[i]), float(ders[i])

    return BasisFamily(evaluator=evaluator, size=n + 1,
                       label=f"geronimus(alpha={params.alpha})")


_PROFILE_METHODS = ("closed_form", "cd_ratio", "kernel")


@dataclass(frozen=True)
class IntensityProfile:
    """Intensity and h sampled on a grid, tagged with the method used."""

    alpha: float
    n: int
    grid: tuple[float, ...]
    h_values: tuple[float, ...]
    density: tuple[float, ...]
    method: str

    def __post_init__(self):
        if self.method not in _PROFILE_METHODS:
            raise ValueError(f"method must be one of {_PROFILE_METHODS}")
        g = self.grid
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("grid must be strictly increasing")
        if len(g) != len(self.h_values) or len(g) != len(self.density):
            raise ValueError("grid and value arrays disagree in length")


def sample_profile(params: GeronimusParams, n: int, grid: Sequence[float],
                   method: str = "closed_form") -> IntensityProfile:
    """Evaluate the intensity profile on a grid by the chosen method.

    closed_form is the production path; cd_ratio re-derives h from the
    recurrence (reference, endpoint-fragile); kernel runs the plain
    Edelman-Kostlan sums over the orthonormal basis.
    """
    if method not in _PROFILE_METHODS:
        raise ValueError(f"method must be one of {_PROFILE_METHODS}")
    xs = [float(x) for x in grid]
    h_vals = [h_n(params, n, x) for x in xs]
    if method == "closed_form":
        dens = [cd_ratio_intensity(params, n, x) for x in xs]
    elif method == "cd_ratio":
        dens = []
        for x in xs:
            if abs(x) == 1.0:
                dens.append(_endpoint_intensity(params, n, int(x)))
                continue
            h = h_n_direct(params, n, x)
            dens.append(math.sqrt(max(1.0 - h * h, 0.0))
                        / (math.pi * abs((1.0 - x) * (1.0 + x))))
    else:
        basis = geronimus_basis(params, n)
        dens = [kernel_intensity(basis, x) for x in xs]
    return IntensityProfile(alpha=params.alpha, n=n, grid=tuple(xs),
                            h_values=tuple(h_vals), density=tuple(dens),
                            method=method)


# ---------------------------------------------------------------------------
# envelope check for the h error term


def _h_diff(params: GeronimusParams, n: int, x: float, um: float,
            up: float) -> float:
    """Exact difference h_{n+1}(x) - h(x), cancellation-free.

    h_{n+1} - h = (1+x) [2 alpha R E (1-E) + r (n+1)(1-x)^2 eps^n
                  4 rho^2/phi^2] / (r B).
    """
    m = n + 1
    alpha = params.alpha
    q = _pieces(params, x, um, up)
    r, R, S = q.r, q.R, q.S
    if x == 0.0:
        return 0.0 if n >= 1 else um * 4.0 * q.rho2 / (q.phi * q.phi) / (r * S)
    X = m * q.c
    eX = math.exp(-X) if X < -_EXP_FLOOR else 0.0
    neg = x < 0.0 and m % 2 == 1
    E = -eX if neg else eX
    one_mE = (1.0 + eX) if neg else (-math.expm1(-X) if X < -_EXP_FLOOR else 1.0)
    nc = n * q.c
    mag = math.exp(-nc) * 4.0 * q.rho2 / (q.phi * q.phi) if nc < -_EXP_FLOOR else 0.0
    if n == 0:
        mag = 4.0 * q.rho2 / (q.phi * q.phi)
    e_over_x = mag if (x > 0.0 or n % 2 == 0) else -mag
    B = one_mE * (S + R * E)
    num = um * (2.0 * alpha * R * E * one_mE + r * m * up * up * e_over_x)
    return num / (r * B)


def verify_h_error_envelope(params: GeronimusParams, n: int,
                            grid_size: int = 1000) -> float:
    """Sup of |h_{n+1} - h| / (|h| (1-x)^2 (n+1) exp(-sqrt(n+1)/rho)).

    The window [-1 + (n+1)^(-1/2), 1 - delta_alpha^(n+1)] is sampled on
    two logarithmic half-grids, in 1+x from the left edge to 0 and in
    1-x from the right limit to 0, so the boundary layers where the
    ratio peaks stay resolved at every n.  The numerator difference
    comes from the exact cancellation-free formula in _h_diff, never
    from subtracting two h evaluations.  A return that stays bounded as
    n doubles is the numerical content of the error-term statement.

    For alpha > 0 the right half stops at the scale where the dominant
    error mechanism switches: below
    up ~ (eps(1)^(n+1) e^(sqrt(n+1)/rho) / (n+1))^(1/4) the difference
    is governed by the geometric eps(1)^(n+1) term against a (1-x)^2
    denominator and the sqrt-exponential envelope tested here is no
    longer the governing form (the ratio grows like (1-x)^-4 there).
    The guard keeps the sup reporting on the envelope law itself.
    """
    if params.alpha == 0.0:
        raise ValueError("envelope is trivial at alpha = 0 (h vanishes)")
    if n < 1:
        raise ValueError("need n >= 1")
    if grid_size < 8:
        raise ValueError("grid_size must be at least 8")
    m = n + 1
    nu = m ** -0.5
    if params.alpha > 0.0:
        log_edge = m * math.log(params.delta_alpha)
        up_edge = math.exp(log_edge) if log_edge > _EXP_FLOOR else 0.0
    else:
        log_edge, up_edge = -math.inf, 0.0
    if nu - 1.0 >= 1.0 - up_edge:
        raise EmptyRangeError(
            f"window is empty at n = {n} for alpha = {params.alpha}")
    if params.alpha > 0.0:
        log_guard = math.log(3.0) + 0.25 * (
            math.log(32.0 * params.alpha ** 2 / (params.rho ** 2 * m))
            + m * math.log(params.eps_at_one) + math.sqrt(m) / params.rho)
        log_floor = min(max(log_edge, log_guard, math.log(1e-12)),
                        math.log(0.5))
    else:
        log_floor = math.log(1e-12)
    half = grid_size // 2
    scale = m * math.exp(-math.sqrt(m) / params.rho)
    worst = 0.0
    for lg in np.linspace(math.log(nu), 0.0, half):
        um = math.exp(lg)
        worst = max(worst, _envelope_ratio(params, n, um - 1.0, um,
                                           2.0 - um, scale))
    for lg in np.linspace(log_floor, 0.0, half):
        up = math.exp(lg)
        if up >= 1.0:
            continue
        worst = max(worst, _envelope_ratio(params, n, 1.0 - up,
                                           2.0 - up, up, scale))
    return worst


def _envelope_ratio(params: GeronimusParams, n: int, x: float, um: float,
                    up: float, scale: float) -> float:
    diff = _h_diff(params, n, x, um, up)
    q = _pieces(params, x, um, up)
    h = -params.alpha * um / q.r
    den = abs(h) * up * up * scale
    if den == 0.0:
        return 0.0
    return abs(diff) / den
