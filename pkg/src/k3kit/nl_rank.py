"""Rank of the Heegner-divisor span of Pic_Q(M_2l).

Two independent evaluations are provided:

* :func:`rank_via_gauss` evaluates the Gauss-sum formula term by term in
  high-precision floating point;
* :func:`rank_via_jacobi` evaluates the closed form in exact rational
  arithmetic, with the Gauss sums replaced by Jacobi symbols.

:func:`rank_report` runs both and reconciles them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import DEFAULT_PRECISION_BITS, _check_precision, frac, gauss_sum, jacobi

AGREEMENT_TOL = 1e-6


class FormulaIntegralityError(ArithmeticError):
    """The exact rank formula produced a non-integer."""


class FormulaDisagreementError(ArithmeticError):
    """The Gauss-sum and Jacobi-symbol evaluations do not agree."""


def _check_l(l) -> int:
    if int(l) != l or l < 1:
        raise ValueError(f"l must be a positive integer, got {l!r}")
    return int(l)


def d_eis(l: int) -> int:
    """#{k in [0, l] : 4l divides k^2}."""
    l = _check_l(l)
    return sum(1 for k in range(l + 1) if (k * k) % (4 * l) == 0)


def frac_sum(l: int) -> Fraction:
    """sum_{k=0}^{l} {k^2 / 4l}, exactly."""
    l = _check_l(l)
    return sum((frac(Fraction(k * k, 4 * l)) for k in range(l + 1)), Fraction(0))


def alpha(l: int) -> int:
    l = _check_l(l)
    if l % 2 == 1:
        return 0
    return jacobi(2 * l, 2 * l - 1)


def beta(l: int) -> int:
    l = _check_l(l)
    if l % 3 == 0:
        return jacobi(l, 4 * l - 1) - 1
    return jacobi(l, 4 * l - 1) + jacobi(l, 3)


def rank_jacobi_exact(l: int) -> Fraction:
    """The closed form as an exact rational, before any integrality check."""
    l = _check_l(l)
    return (Fraction(31 * l + 55, 24) - Fraction(alpha(l), 4) - Fraction(beta(l), 6)
            - frac_sum(l) - d_eis(l))


def rank_via_jacobi(l: int) -> int:
    value = rank_jacobi_exact(l)
    if value.denominator != 1:
        raise FormulaIntegralityError(f"rank formula gives non-integer {value} at l={l}")
    return int(value)


def rank_via_gauss(l: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """Gauss-sum form of the rank, unrounded."""
    l = _check_l(l)
    bits = _check_precision(precision_bits)
    fs = frac_sum(l)
    # all arithmetic on the sums must happen at the working precision
    with mpmath.workprec(bits):
        g_4l = gauss_sum(-1, 4 * l, bits) + gauss_sum(3, 4 * l, bits)
        g_2l = gauss_sum(-1, 2 * l, bits)
        rot = mpmath.expjpi(mpmath.mpf(5) / 12)
        terms = [
            mpmath.mpf(31 * l) / 24,
            mpmath.mpf(55) / 24,
            -mpmath.re(rot * g_4l) / (6 * mpmath.sqrt(6 * l)),
            -mpmath.re(g_2l) / (4 * mpmath.sqrt(2 * l)),
            -mpmath.mpf(fs.numerator) / fs.denominator,
            -mpmath.mpf(d_eis(l)),
        ]
        return mpmath.fsum(terms)


def round_gauss(value, tol: float = AGREEMENT_TOL) -> int:
    """Nearest integer to ``value``; raises if it is farther than ``tol``."""
    n = int(mpmath.nint(value))
    if abs(value - n) > tol:
        raise FormulaIntegralityError(f"Gauss-sum rank {value} is not within {tol} of an integer")
    return n


@dataclass(frozen=True)
class RankReport:
    l: int
    rank: int
    gauss_value: mpmath.mpf
    jacobi_value: Fraction
    alpha: int
    beta: int
    frac_sum: Fraction
    d_eis: int

    @property
    def agree(self) -> bool:
        return (self.jacobi_value.denominator == 1
                and abs(self.gauss_value - self.jacobi_value.numerator) < AGREEMENT_TOL)

    def as_dict(self) -> dict:
        return {
            "l": self.l,
            "rank": self.rank,
            "gauss_value": mpmath.nstr(self.gauss_value, 12, strip_zeros=False),
            "jacobi_value": _fmt_q(self.jacobi_value),
            "alpha": self.alpha,
            "beta": self.beta,
            "frac_sum": _fmt_q(self.frac_sum),
            "d_eis": self.d_eis,
            "agree": self.agree,
        }


def _fmt_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def rank_report(l: int, precision_bits: int = DEFAULT_PRECISION_BITS, strict: bool = False) -> RankReport:
    """Evaluate both formulas at ``l``.

    With ``strict=True`` a disagreement raises :class:`FormulaDisagreementError`;
    otherwise it is visible through ``report.agree``.
    """
    l = _check_l(l)
    exact = rank_jacobi_exact(l)
    g = rank_via_gauss(l, precision_bits)
    rank = exact.numerator if exact.denominator == 1 else int(mpmath.nint(g))
    rep = RankReport(l=l, rank=rank, gauss_value=g, jacobi_value=exact, alpha=alpha(l),
                     beta=beta(l), frac_sum=frac_sum(l), d_eis=d_eis(l))
    if strict and not rep.agree:
        raise FormulaDisagreementError(
            f"l={l}: jacobi={exact}, gauss={mpmath.nstr(g, 15)}")
    return rep
