"""Exact real-root counting through Sturm sequences.

Floating-point coefficients are dyadic rationals, so clearing
denominators turns any float polynomial into an integer one with no
rounding at all.  The sign-variation count V(-inf) - V(+inf) of the
Sturm chain then gives the number of distinct real roots exactly,
which makes this the reference against which the eigenvalue counter
is audited at small degree.

Remainders are taken in pseudo-division form with an even power of the
divisor's leading coefficient, so every step stays in integer
arithmetic without touching the classical sign pattern; stripping the
integer content afterward keeps coefficient growth polynomial, which
is all degree 30 with 53-bit inputs needs.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = ["integer_coefficients", "sturm_variations", "count_real_roots_exact"]


def integer_coefficients(coeffs):
    """Exact integer version of a float coefficient list (ascending).

    Multiplies by the least common denominator of the dyadic inputs and
    divides out the content.  Raises ValueError on NaN or infinity.
    """
    fracs = []
    for c in coeffs:
        try:
            f = Fraction(c)        # exact for floats
        except (ValueError, OverflowError):
            raise ValueError(f"coefficient {c!r} is not finite") from None
        fracs.append(f)
    lcd = 1
    for f in fracs:
        lcd = lcd * f.denominator // gcd(lcd, f.denominator)
    ints = [int(f * lcd) for f in fracs]
    content = 0
    for v in ints:
        content = gcd(content, abs(v))
    if content > 1:
        ints = [v // content for v in ints]
    return ints


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _prem_signed(f, g):
    """Negated remainder of f by g scaled by an even power of lc(g).

    The even premultiplier is positive, so the result carries the sign
    the classical Sturm remainder would have.  Integer content is
    stripped before returning; that rescales by a positive factor only.
    """
    dg = len(g) - 1
    lg = g[-1]
    f = list(f)
    count = 0
    while len(f) > dg:
        df = len(f) - 1
        lf = f[-1]
        f = [c * lg for c in f]
        count += 1
        shift = df - dg
        for i, c in enumerate(g):
            f[i + shift] -= lf * c
        _trim(f)
        if not f:
            return []
    if count % 2 == 1:
        f = [c * lg for c in f]
    rem = [-c for c in f]
    content = 0
    for v in rem:
        content = gcd(content, abs(v))
    if content > 1:
        rem = [v // content for v in rem]
    return rem


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def sturm_variations(ints):
    """Sign-variation drop of the Sturm chain across the real line.

    ints is an ascending integer coefficient list with nonzero leading
    and constant terms.  Returns the number of distinct real roots.
    """
    p = _trim(list(ints))
    if len(p) <= 1:
        return 0
    chain = [p, _trim([i * c for i, c in enumerate(p)][1:])]
    while True:
        rem = _prem_signed(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(rem)
    vpos = vneg = 0
    spos_prev = sneg_prev = 0
    for poly in chain:
        lead = poly[-1]
        deg = len(poly) - 1
        spos = _sign(lead)
        sneg = spos if deg % 2 == 0 else -spos
        if spos_prev and spos and spos != spos_prev:
            vpos += 1
        if sneg_prev and sneg and sneg != sneg_prev:
            vneg += 1
        if spos:
            spos_prev = spos
        if sneg:
            sneg_prev = sneg
    return vneg - vpos


def count_real_roots_exact(coeffs) -> int:
    """Number of distinct real roots of a float polynomial, exactly.

    coeffs are ascending monomial coefficients.  Exact trailing zeros
    are trimmed first.  Distinct-root counting matches counting with
    multiplicity for the almost-surely squarefree random draws this
    package feeds in; an exact root at the origin is counted once.
    """
    ints = _trim(integer_coefficients(coeffs))
    if not ints:
        raise ValueError("the zero polynomial has no well-defined count")
    if len(ints) == 1:
        return 0
    origin = 0
    while ints[0] == 0:
        ints.pop(0)
        origin = 1
    if len(ints) <= 1:
        return origin
    return sturm_variations(ints) + origin
