"""Exact and high-precision arithmetic primitives.

Rationals are :class:`fractions.Fraction` (always in lowest terms, positive
denominator).  Gauss sums are returned as :class:`mpmath.mpc` values computed
at a configurable binary precision.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import mpmath

DEFAULT_PRECISION_BITS = 128
MIN_PRECISION_BITS = 64


def jacobi(a: int, b: int) -> int:
    """Jacobi symbol (a/b) for odd b >= 1.

    Uses the binary reciprocity algorithm; (a/1) = 1 for every a.
    """
    if b <= 0 or b % 2 == 0:
        raise ValueError(f"jacobi: lower argument must be a positive odd integer, got {b}")
    a %= b
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def frac(q) -> Fraction:
    """Fractional part q - floor(q), in [0, 1)."""
    q = Fraction(q)
    return q - math.floor(q)


def _check_precision(bits: int) -> int:
    bits = int(bits)
    if bits < MIN_PRECISION_BITS:
        raise ValueError(f"precision must be at least {MIN_PRECISION_BITS} bits, got {bits}")
    return bits


def gauss_sum(a: int, b: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpc:
    r"""Generalized quadratic Gauss sum  sum_{k=0}^{b-1} exp(2 pi i a k^2 / b).

    Summed directly.  Terms are bucketed by the residue of a*k^2 mod b so each
    root of unity is evaluated once, then the real and imaginary parts are
    accumulated with ``mpmath.fsum`` (exact-rounding summation).
    """
    if b <= 0:
        raise ValueError(f"gauss_sum: modulus must be positive, got {b}")
    counts = Counter((a * k * k) % b for k in range(b))
    with mpmath.workprec(_check_precision(precision_bits)):
        re_terms = []
        im_terms = []
        for r, c in sorted(counts.items()):
            # exp(2 pi i r/b) = cospi(2r/b) + i sinpi(2r/b); exact at r = 0
            x = mpmath.mpf(2 * r) / b
            re_terms.append(c * mpmath.cospi(x))
            im_terms.append(c * mpmath.sinpi(x))
        return mpmath.mpc(mpmath.fsum(re_terms), mpmath.fsum(im_terms))


def gauss_sum_magnitude_law(a: int, b: int):
    """Classical |G(a, b)| for gcd(a, b) = 1, as an exact-ish mpf.

    b odd: sqrt(b); b = 2 mod 4: 0; b = 0 mod 4: sqrt(2b).
    Independent of the summation in :func:`gauss_sum`.
    """
    if b <= 0 or math.gcd(a, b) != 1:
        raise ValueError("magnitude law needs b >= 1 and gcd(a, b) = 1")
    if b % 2 == 1:
        return mpmath.sqrt(b)
    if b % 4 == 2:
        return mpmath.mpf(0)
    return mpmath.sqrt(2 * b)
