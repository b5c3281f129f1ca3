"""Szego recurrence and closed forms for the constant-coefficient family.

A single real reflection coefficient alpha in (-1, 1) generates the monic
polynomial family Phi_m through

    Phi_{m+1}(z) = z Phi_m(z) - alpha Phi*_m(z),      Phi_0 = 1,
    Phi*_{m+1}(z) = Phi*_m(z) - alpha z Phi_m(z),     Phi*_0 = 1,

where Phi*_m(z) = z^m conj(Phi_m)(1/z) is the reversed polynomial.  The
orthonormal version phi_m = Phi_m / rho^m, rho = sqrt(1 - alpha^2), is the
one used everywhere else in this package.  alpha = 0 gives the plain
monomials (the Kac case).

The closed-form evaluation rests on the square root

    r(z) = sqrt((z - 1)^2 + 4 alpha^2 z),

taken holomorphic off the circular arc Delta_alpha = {exp(i theta) :
2 arcsin|alpha| <= theta <= 2 pi - 2 arcsin|alpha|} and normalized so that
r(z)/z -> 1 at infinity, together with phi(z) = z + 1 + r(z),
psi(z) = z + 1 - r(z) and eps(z) = psi(z)/phi(z).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

__all__ = [
    "CancellationWarning",
    "GeronimusParams",
    "PolyPair",
    "ScaledPolyPair",
    "BranchValues",
    "chebyshev_u",
    "branch_values",
    "eval_pair_recurrence",
    "eval_pair_scaled",
    "eval_pair_closed_form",
]

_RESCALE_LIMIT = 1e150


class CancellationWarning(UserWarning):
    """Closed-form combination lost most of its leading digits."""


@dataclass(frozen=True)
class GeronimusParams:
    """Reflection coefficient alpha with its derived constants.

    rho is sqrt(1 - alpha^2).  delta_alpha is the endpoint shrink rate
    ((1 - alpha)/(1 + alpha))^(1/3) for alpha > 0 and 0 otherwise; the
    window [-1 + (n+1)^(-1/2), 1 - delta_alpha^(n+1)] is where the
    intensity ratio tracks its n -> infinity limit.
    """

    alpha: float
    rho: float = field(init=False)
    delta_alpha: float = field(init=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not math.isfinite(alpha) or not -1.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (-1, 1), got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        # (1-a)(1+a) keeps full precision for |alpha| near 1
        object.__setattr__(self, "rho", math.sqrt((1.0 - alpha) * (1.0 + alpha)))
        delta = ((1.0 - alpha) / (1.0 + alpha)) ** (1.0 / 3.0) if alpha > 0.0 else 0.0
        object.__setattr__(self, "delta_alpha", delta)

    @property
    def eps_at_one(self) -> float:
        """eps(1) = (1 - |alpha|)/(1 + |alpha|), the spike decay base."""
        a = abs(self.alpha)
        return (1.0 - a) / (1.0 + a)

    @property
    def arc_angle(self) -> float:
        """Half-opening 2 arcsin|alpha| of the gap in Delta_alpha."""
        return 2.0 * math.asin(abs(self.alpha))


@dataclass(frozen=True)
class PolyPair:
    """Values (phi_m(z), phi*_m(z)) of the pair at one point.

    normalized marks orthonormal scaling (division by rho^m); monic
    otherwise.  For real z the values are real floats.
    """

    phi: complex
    phi_star: complex
    degree: int
    normalized: bool


@dataclass(frozen=True)
class ScaledPolyPair:
    """Pair values held as mantissas times exp(log_scale).

    Produced by eval_pair_scaled for degrees where the raw values leave
    the double range.  Ratios of the two components are scale-free.
    """

    phi_mantissa: complex
    phi_star_mantissa: complex
    log_scale: float
    degree: int
    normalized: bool

    @property
    def phi(self) -> complex:
        return self.phi_mantissa * math.exp(self.log_scale)

    @property
    def phi_star(self) -> complex:
        return self.phi_star_mantissa * math.exp(self.log_scale)

    def log_abs_phi(self) -> float:
        return math.log(abs(self.phi_mantissa)) + self.log_scale

    def log_abs_phi_star(self) -> float:
        return math.log(abs(self.phi_star_mantissa)) + self.log_scale


@dataclass(frozen=True)
class BranchValues:
    """r, phi = z+1+r, psi = z+1-r and eps = psi/phi at one point."""

    r: complex
    phi_big: complex
    psi_big: complex
    eps: complex


def chebyshev_u(m: int, y) -> complex:
    """Second-kind Chebyshev value U_m(y), m >= -1.

    Real y with |y| <= 1 goes through the three-term recurrence.  All
    other arguments use the power form

        U_m(y) = (w^(m+1) - w^(-m-1)) / (w - 1/w),   w = y + s(y),

    with s(y) = y * psqrt(1 - 1/y^2), the branch that behaves like y at
    infinity and is cut along [-1, 1].
    """
    if m < -1:
        raise ValueError("degree must be >= -1")
    if m == -1:
        return 0.0
    is_real = not isinstance(y, complex) or y.imag == 0.0
    yr = y.real if isinstance(y, complex) else float(y)
    if is_real and abs(yr) <= 1.0:
        prev, cur = 1.0, 2.0 * yr
        if m == 0:
            return 1.0
        for _ in range(m - 1):
            prev, cur = cur, 2.0 * yr * cur - prev
        return cur
    yc = complex(y)
    s = yc * cmath.sqrt(1.0 - 1.0 / (yc * yc))
    w = yc + s
    winv = yc - s  # exact reciprocal: (y+s)(y-s) = 1
    val = (w ** (m + 1) - winv ** (m + 1)) / (2.0 * s)
    if is_real:
        return val.real
    return val


def _r_real(params: GeronimusParams, x: float) -> float:
    """r at real x, |x| <= 1, through cancellation-free radicands."""
    alpha = params.alpha
    if x <= 0.0:
        um = 1.0 + x
        return math.sqrt(4.0 * (1.0 - alpha) * (1.0 + alpha) * (1.0 - um) + um * um)
    up = 1.0 - x
    return math.sqrt(4.0 * alpha * alpha * (1.0 - up) + up * up)


def _on_arc(params: GeronimusParams, z: complex, tol: float = 1e-13) -> bool:
    if abs(abs(z) - 1.0) > tol:
        return False
    # arc is cos(theta) <= 1 - 2 alpha^2
    return z.real / abs(z) <= 1.0 - 2.0 * params.alpha ** 2 + tol


def branch_values(params: GeronimusParams, z) -> BranchValues:
    """Evaluate r, phi, psi, eps at z off the arc Delta_alpha.

    Real z in [-1, 1] returns real floats with the positive root.  psi is
    formed as 4 rho^2 z / phi, which stays accurate where z + 1 - r
    cancels.  Raises BranchCutError on (or within ~1e-13 of) the arc.
    """
    from .errors import BranchCutError

    is_real = not isinstance(z, complex) or z.imag == 0.0
    zr = z.real if isinstance(z, complex) else float(z)
    rho2 = (1.0 - params.alpha) * (1.0 + params.alpha)

    if is_real and -1.0 <= zr <= 1.0:
        if params.alpha == 0.0 and abs(zr) == 1.0:
            raise BranchCutError("z = +-1 lies on the arc when alpha = 0")
        r = _r_real(params, zr)
        phi = (1.0 + zr) + r
        psi = 4.0 * rho2 * zr / phi
        return BranchValues(r=r, phi_big=phi, psi_big=psi, eps=psi / phi)

    zc = complex(z)
    if _on_arc(params, zc):
        raise BranchCutError(f"z = {z!r} lies on the branch arc")
    if abs(zc) <= 1.0:
        r = cmath.sqrt((zc - 1.0) ** 2 + 4.0 * params.alpha ** 2 * zc)
    else:
        c0 = 1.0 - 2.0 * params.alpha ** 2
        r = zc * cmath.sqrt(1.0 - 2.0 * c0 / zc + 1.0 / (zc * zc))
    phi = zc + 1.0 + r
    psi = 4.0 * rho2 * zc / phi
    if is_real:
        return BranchValues(r=r.real, phi_big=phi.real, psi_big=psi.real,
                            eps=(psi / phi).real)
    return BranchValues(r=r, phi_big=phi, psi_big=psi, eps=psi / phi)


def eval_pair_recurrence(params: GeronimusParams, m: int, z,
                         normalized: bool = False) -> PolyPair:
    """Run the Szego recurrence up to degree m at the point z.

    With normalized=True each step divides by rho, producing the
    orthonormal pair.  Raises OverflowError once values leave the double
    range; use eval_pair_scaled for large degrees instead.
    """
    if m < 0:
        raise ValueError("degree must be >= 0")
    alpha = params.alpha
    p = 1.0 + 0.0 * z  # adopt the argument's type
    ps = p
    if normalized:
        inv_rho = 1.0 / params.rho
        for _ in range(m):
            p, ps = (z * p - alpha * ps) * inv_rho, (ps - alpha * z * p) * inv_rho
    else:
        for _ in range(m):
            p, ps = z * p - alpha * ps, ps - alpha * z * p
    if not (_isfinite(p) and _isfinite(ps)):
        raise OverflowError(
            f"pair values overflowed at degree {m}; use eval_pair_scaled")
    return PolyPair(phi=p, phi_star=ps, degree=m, normalized=normalized)


def _isfinite(v) -> bool:
    if isinstance(v, complex):
        return math.isfinite(v.real) and math.isfinite(v.imag)
    return math.isfinite(v)


def eval_pair_scaled(params: GeronimusParams, m: int, z,
                     normalized: bool = True) -> ScaledPolyPair:
    """Recurrence evaluation with joint rescaling, safe for any degree.

    The returned mantissas are the pair divided by exp(log_scale); the
    common factor cancels from phi/phi* ratios.
    """
    if m < 0:
        raise ValueError("degree must be >= 0")
    alpha = params.alpha
    inv_rho = 1.0 / params.rho if normalized else 1.0
    p = 1.0 + 0.0 * z
    ps = p
    log_scale = 0.0
    for _ in range(m):
        p, ps = (z * p - alpha * ps) * inv_rho, (ps - alpha * z * p) * inv_rho
        mag = max(abs(p), abs(ps))
        if mag > _RESCALE_LIMIT:
            p /= mag
            ps /= mag
            log_scale += math.log(mag)
    return ScaledPolyPair(phi_mantissa=p, phi_star_mantissa=ps,
                          log_scale=log_scale, degree=m, normalized=normalized)


def eval_pair_closed_form(params: GeronimusParams, m: int, z) -> PolyPair:
    """Orthonormal pair at z via the two-power closed form.

    Writing v1 = phi(z)/(2 rho) and v2 = psi(z)/(2 rho) (so v1 v2 = z),

        phi_m  = [rho (v1^(m+1) - v2^(m+1)) - (1+alpha)   (v1^m - v2^m)] / r,
        phi*_m = [rho (v1^(m+1) - v2^(m+1)) - (1+alpha) z (v1^m - v2^m)] / r,

    which is the Chebyshev-U representation with the z^(m/2) factor
    absorbed, so no spurious overflow appears for |z| < 1.  z = 0 is a
    declared domain error.  Warns (CancellationWarning) when the
    combination loses more than ~11 leading digits.
    """
    if m < 0:
        raise ValueError("degree must be >= 0")
    if z == 0:
        raise ValueError("closed form is singular at z = 0; use the recurrence")
    bv = branch_values(params, z)
    alpha, rho = params.alpha, params.rho
    two_rho = 2.0 * rho
    v1 = bv.phi_big / two_rho
    v2 = bv.psi_big / two_rho
    p1m, p2m = v1 ** m, v2 ** m
    d_hi = v1 * p1m - v2 * p2m
    d_lo = p1m - p2m
    phi = (rho * d_hi - (1.0 + alpha) * d_lo) / bv.r
    phi_star = (rho * d_hi - (1.0 + alpha) * z * d_lo) / bv.r
    if not (_isfinite(phi) and _isfinite(phi_star)):
        raise OverflowError(f"closed form overflowed at degree {m}")
    scale = max(abs(rho * d_hi), abs((1.0 + alpha) * d_lo), abs((1.0 + alpha) * z * d_lo))
    if scale > 0.0 and min(abs(phi), abs(phi_star)) * abs(bv.r) < 1e-11 * scale:
        warnings.warn("closed-form pair evaluation lost most significant digits",
                      CancellationWarning, stacklevel=2)
    return PolyPair(phi=phi, phi_star=phi_star, degree=m, normalized=True)
