"""Hilbert-Mumford weight analysis of cubic sections of the quadric threefold.

The quadric is x0x4 + x1x3 + x2^2 = 0.  Cubic sections are represented in the
30-element monomial basis B = {x^a : |a| = 3, a0*a4 = 0}, and a polynomial is
represented only by its support (a set of exponent vectors).  A normalized
1-PS of SO(Q) is diag(t^u, t^v, 1, t^-v, t^-u) with u >= v >= 0, and the
weight of x^a is (a0 - a4) u + (a1 - a3) v.

Every critical slope v/u of a monomial in B is a ratio of integers of size at
most 3, so consecutive critical slopes in [0, 1] have mediants with
denominator at most 6.  The grid 0 <= v <= u <= 12 therefore hits every wall
and every open chamber of the weight arrangement, which is what
:func:`maximal_chamber_sets` relies on.

Only the maximal torus in these fixed coordinates is searched; statements
"for a suitable choice of coordinates" are outside what these functions decide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Monomial5 = tuple  # exponent vector (a0, .., a4)

GRID_BOUND = 12


def _exps(indices: Sequence[int]) -> Monomial5:
    return tuple(indices.count(i) for i in range(5))


def _indices(m: Monomial5) -> tuple[int, ...]:
    return tuple(i for i in range(5) for _ in range(m[i]))


def basis_B() -> list[Monomial5]:
    """The 30 degree-3 monomials with a0*a4 = 0, in index order (x0^3 first)."""
    out = []
    for idx in itertools.combinations_with_replacement(range(5), 3):
        a = _exps(list(idx))
        if a[0] * a[4] == 0:
            out.append(a)
    return out


B = tuple(basis_B())
B_SET = frozenset(B)


def mono(s: str) -> Monomial5:
    """Parse ``"x0x3^2"`` (or ``"x0*x3^2"``) into an exponent vector."""
    a = [0] * 5
    s = s.replace("**", "^").replace("*", "").replace(" ", "")
    pos = 0
    while pos < len(s):
        if s[pos] != "x":
            raise ValueError(f"cannot parse monomial {s!r}")
        i = int(s[pos + 1])
        pos += 2
        e = 1
        if pos < len(s) and s[pos] == "^":
            j = pos + 1
            while j < len(s) and s[j].isdigit():
                j += 1
            e = int(s[pos + 1:j])
            pos = j
        a[i] += e
    return tuple(a)


def mono_str(m: Monomial5) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "".join(parts) or "1"


@dataclass(frozen=True, order=True)
class OnePS2:
    u: int
    v: int

    def __post_init__(self):
        if not (self.u >= self.v >= 0) or (self.u, self.v) == (0, 0):
            raise ValueError(f"1-PS ({self.u}, {self.v}) is not normalized (need u >= v >= 0, not both 0)")

    @property
    def variable_weights(self) -> tuple[int, ...]:
        return (self.u, self.v, 0, -self.v, -self.u)

    def __iter__(self):
        return iter((self.u, self.v))


def _lam(lam) -> OnePS2:
    return lam if isinstance(lam, OnePS2) else OnePS2(*lam)


def weight_cubic(m: Monomial5, lam) -> int:
    u, v = lam
    return (m[0] - m[4]) * u + (m[1] - m[3]) * v


def nonpositive_set(lam) -> frozenset:
    lam = _lam(lam)
    return frozenset(m for m in B if weight_cubic(m, lam) <= 0)


def negative_set(lam) -> frozenset:
    lam = _lam(lam)
    return frozenset(m for m in B if weight_cubic(m, lam) < 0)


def invariant_monomials(lam) -> frozenset:
    lam = _lam(lam)
    return frozenset(m for m in B if weight_cubic(m, lam) == 0)


def fixed_monomials(w: Sequence[int]) -> frozenset:
    """Monomials of B fixed by the torus element with weight vector ``w``."""
    w = tuple(int(x) for x in w)
    if len(w) != 5 or any(w[i] != -w[4 - i] for i in range(5)):
        raise ValueError(f"weight vector {w} is not antisymmetric (w_i = -w_(4-i))")
    return frozenset(m for m in B if sum(a * x for a, x in zip(m, w)) == 0)


# -- partial orders on monomials -------------------------------------------

def index_dominates(m: Monomial5, n: Monomial5) -> bool:
    """m >= n in the index-domination order (sorted indices of m componentwise <=)."""
    return all(i <= j for i, j in zip(_indices(m), _indices(n)))


def lambda_dominates(m: Monomial5, n: Monomial5, lam) -> bool:
    """n is obtained from m by moving factors to variables of strictly lower lambda-weight."""
    w = _lam(lam).variable_weights
    sm = sorted((w[i] for i in _indices(m)), reverse=True)
    sn = sorted((w[i] for i in _indices(n)), reverse=True)
    return sm != sn and all(x >= y for x, y in zip(sm, sn))


def index_maximal(support: Iterable[Monomial5]) -> frozenset:
    s = set(support)
    return frozenset(m for m in s if not any(n != m and index_dominates(n, m) for n in s))


def lambda_maximal(support: Iterable[Monomial5], lam) -> frozenset:
    s = set(support)
    return frozenset(m for m in s if not any(lambda_dominates(n, m, lam) for n in s))


def index_closure(generators: Iterable[Monomial5]) -> frozenset:
    """Elements of B dominated (in index order) by some generator."""
    gens = list(generators)
    return frozenset(m for m in B if any(index_dominates(g, m) for g in gens))


# -- chamber enumeration ----------------------------------------------------

@dataclass(frozen=True)
class ChamberClass:
    representative: OnePS2
    support: frozenset
    maximal: frozenset  # lambda-maximal elements at the representative
    lambdas: tuple = field(default=(), compare=False)


def grid(bound: int = GRID_BOUND) -> list[OnePS2]:
    return [OnePS2(u, v) for u in range(1, bound + 1) for v in range(u + 1)]


def maximal_chamber_sets(mode: str = "<=0", bound: int = GRID_BOUND) -> list[ChamberClass]:
    """Inclusion-maximal sets M_{<=0}(lambda) (or M_{<0}) over the grid of normalized 1-PS.

    Each class is represented by its smallest lambda (by u, then v) and
    presented by its maximal elements under lambda-domination at that lambda.
    """
    pick = {"<=0": nonpositive_set, "<0": negative_set}[_mode(mode)]
    groups: dict[frozenset, list[OnePS2]] = {}
    for lam in grid(bound):
        groups.setdefault(pick(lam), []).append(lam)
    sets = list(groups)
    out = []
    for s in sets:
        if any(s < t for t in sets):
            continue
        lams = sorted(groups[s])
        rep = lams[0]
        out.append(ChamberClass(rep, s, lambda_maximal(s, rep), tuple(lams)))
    out.sort(key=lambda c: (c.representative.u, c.representative.v))
    return out


def _mode(mode: str) -> str:
    m = mode.replace(" ", "").replace("≤", "<=")
    if m in ("<=0", "le", "nonpositive", "1"):
        return "<=0"
    if m in ("<0", "lt", "negative", "2"):
        return "<0"
    raise ValueError(f"unknown mode {mode!r}")


# Rows as printed: (case, lambda, listed monomials).
TABLE1 = (
    ("N1", (1, 0), tuple(m for m in B if m[0] == 0 and m[4] == 0)),
    ("N2", (1, 1), tuple(mono(s) for s in ("x0x2x3", "x1x2x3", "x1x2x4", "x2^3"))),
    ("N3", (2, 1), tuple(mono(s) for s in ("x0x3^2", "x1^2x4", "x1x2x3", "x2^3"))),
)
TABLE2 = (
    ("U1", (1, 0), (mono("x1^2x4"),)),
    ("U2", (1, 1), (mono("x0x3^2"), mono("x2^2x3"))),
)
XI = frozenset({mono("x2^3"), mono("x1x2x3")})


def printed_rows(which: int):
    return {1: TABLE1, 2: TABLE2}[which]


@dataclass
class TableCheck:
    which: int
    rows_ok: dict  # case -> bool : printed row generates the set at its lambda
    regenerated: list  # ChamberClass list from the grid search
    diffs: list  # human-readable mismatch lines

    @property
    def verified(self) -> bool:
        return all(self.rows_ok.values())

    @property
    def regenerated_matches(self) -> bool:
        return not self.diffs

    @property
    def ok(self) -> bool:
        return self.verified and self.regenerated_matches


def check_table(which: int, bound: int = GRID_BOUND) -> TableCheck:
    """Verify the printed rows of Table 1 or 2 and compare them with a fresh search.

    Verification: the index-closure of each printed row equals the set at the
    printed lambda.  Regeneration: :func:`maximal_chamber_sets` must return the
    same number of classes, the same representatives, and the printed
    monomials as lambda-maximal elements.
    """
    mode = "<=0" if which == 1 else "<0"
    pick = nonpositive_set if which == 1 else negative_set
    rows = printed_rows(which)
    rows_ok = {}
    for case, lam, listed in rows:
        target = pick(lam)
        rows_ok[case] = set(listed) <= target and index_closure(listed) == target
    regen = maximal_chamber_sets(mode, bound)
    diffs = []
    if len(regen) != len(rows):
        diffs.append(f"class count: printed {len(rows)}, search {len(regen)}")
    for (case, lam, listed), cls in zip(rows, regen):
        if tuple(cls.representative) != tuple(lam):
            diffs.append(f"{case}: printed lambda {tuple(lam)}, search representative "
                         f"{tuple(cls.representative)}")
        if frozenset(listed) != cls.maximal:
            diffs.append(f"{case}: printed {{{', '.join(map(mono_str, sorted(listed, reverse=True)))}}}, "
                         f"search gives {{{', '.join(map(mono_str, sorted(cls.maximal, reverse=True)))}}}")
        elif cls.support != pick(lam):
            diffs.append(f"{case}: support at {tuple(lam)} differs from searched class")
    return TableCheck(which, rows_ok, regen, diffs)


# -- destabilizer search ----------------------------------------------------

@dataclass(frozen=True)
class Destabilizer:
    lam: OnePS2
    strict: bool
    weights: tuple  # ((monomial, weight), ...) in support order

    def as_dict(self) -> dict:
        return {"u": self.lam.u, "v": self.lam.v, "strict": self.strict,
                "weights": {mono_str(m): w for m, w in self.weights}}


def _check_support(f) -> list[Monomial5]:
    f = [tuple(int(x) for x in m) for m in f]
    if not f:
        raise ValueError("support is empty")
    for m in f:
        if m not in B_SET:
            raise ValueError(f"{m} is not an exponent vector of the basis B")
    return sorted(set(f), key=B.index)


def _slope_interval(f, strict):
    """Feasible slopes t = v/u in [0, 1] as (lo, lo_closed, hi, hi_closed), or None.

    Each monomial gives p + q t <= 0 (or < 0) with p = a0-a4, q = a1-a3.
    """
    lo, lo_c, hi, hi_c = Fraction(0), True, Fraction(1), True
    for m in f:
        p, q = m[0] - m[4], m[1] - m[3]
        if q == 0:
            if p > 0 or (strict and p == 0):
                return None
            continue
        r = Fraction(-p, q)
        if q > 0:  # t <= r
            if r < hi or (r == hi and strict):
                hi, hi_c = r, not strict
        else:  # t >= r
            if r > lo or (r == lo and strict):
                lo, lo_c = r, not strict
    if lo > hi or (lo == hi and not (lo_c and hi_c)):
        return None
    return lo, lo_c, hi, hi_c


def _simplest_in(lo, lo_c, hi, hi_c) -> Fraction:
    b = 1
    while True:
        a = -(-lo.numerator * b // lo.denominator)  # ceil(lo * b)
        for cand in (a, a + 1):
            t = Fraction(cand, b)
            if (t > lo or (lo_c and t == lo)) and (t < hi or (hi_c and t == hi)):
                return t
        b += 1


def _certificate(f, lam, strict) -> Destabilizer:
    return Destabilizer(lam, strict, tuple((m, weight_cubic(m, lam)) for m in f))


def torus_destabilizer(f, strict: bool = False) -> Destabilizer | None:
    """A normalized lambda with every weight of ``f`` <= 0 (< 0 if strict), or None.

    Solved exactly: dehomogenize at u = 1 and intersect the half-lines
    p + q t <= 0 in t = v/u in [0, 1]; the simplest rational in the feasible
    interval gives the smallest integral lambda.
    """
    f = _check_support(f)
    iv = _slope_interval(f, strict)
    if iv is None:
        return None
    t = _simplest_in(*iv)
    return _certificate(f, OnePS2(t.denominator, t.numerator), strict)


def torus_destabilizer_vertices(f, strict: bool = False) -> Destabilizer | None:
    """Same question answered by testing the finitely many candidate rays.

    Candidates are the boundary rays, every critical slope -p/q, and the
    mediant between consecutive critical slopes; one of them is feasible
    whenever the feasible cone is non-empty.
    """
    f = _check_support(f)
    slopes = {Fraction(0), Fraction(1)}
    for m in B:
        p, q = m[0] - m[4], m[1] - m[3]
        if q and 0 <= Fraction(-p, q) <= 1:
            slopes.add(Fraction(-p, q))
    slopes = sorted(slopes)
    cands = list(slopes)
    for a, b in zip(slopes, slopes[1:]):
        cands.append(Fraction(a.numerator + b.numerator, a.denominator + b.denominator))
    for t in sorted(cands, key=lambda t: (t.denominator, t.numerator)):
        lam = OnePS2(t.denominator, t.numerator)
        ws = [weight_cubic(m, lam) for m in f]
        if all(w < 0 if strict else w <= 0 for w in ws):
            return _certificate(f, lam, strict)
    return None


def match_normal_form(f) -> list[str]:
    """Tags of the listed support families that contain ``f``.

    N1-N3: not properly stable families (Table 1 rows); U1, U2: unstable
    families (Table 2 rows); xi: the common specialization x2^3, x1x2x3.
    """
    f = frozenset(_check_support(f))
    tags = []
    for case, lam, _ in TABLE1:
        if f <= nonpositive_set(lam):
            tags.append(case)
    for case, lam, _ in TABLE2:
        if f <= negative_set(lam):
            tags.append(case)
    if f <= XI:
        tags.append("xi")
    return tags


def weight_table(f, lam) -> list[tuple[str, int]]:
    lam = _lam(lam)
    return [(mono_str(m), weight_cubic(m, lam)) for m in _check_support(f)]
