"""Weight combinatorics for nets of quadrics in P^5 under SL_6.

Quadratic monomials x_i x_j (i <= j) are pairs ``(i, j)``.  A normalized 1-PS
is an integer vector a_0 >= ... >= a_5 with zero sum, and w(x_i x_j) = a_i + a_j.
Monomials are totally ordered by weight, ties broken by the fixed order
x0^2 > x0x1 > ... > x0x5 > x1^2 > ... > x5^2.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

QUAD_MONOMIALS = tuple((i, j) for i in range(6) for j in range(i, 6))
_LEX = {m: len(QUAD_MONOMIALS) - 1 - k for k, m in enumerate(QUAD_MONOMIALS)}  # x0^2 -> 20

DEFAULT_SEARCH_BOUND = 6


def q(i: int, j: int) -> tuple[int, int]:
    if not (0 <= i <= 5 and 0 <= j <= 5):
        raise ValueError(f"x{i}x{j} is not a quadratic monomial in x0..x5")
    return (min(i, j), max(i, j))


def qstr(m) -> str:
    i, j = m
    return f"x{i}^2" if i == j else f"x{i}x{j}"


def qparse(s: str) -> tuple[int, int]:
    s = s.strip().replace("*", "").replace("^2", "^2")
    if s.endswith("^2"):
        i = int(s[1:-2])
        return q(i, i)
    parts = s.split("x")[1:]
    if len(parts) != 2:
        raise ValueError(f"cannot parse quadratic monomial {s!r}")
    return q(int(parts[0]), int(parts[1]))


@dataclass(frozen=True)
class OnePS5:
    a: tuple

    def __init__(self, a: Iterable[int]):
        a = tuple(int(x) for x in a)
        if len(a) != 6:
            raise ValueError(f"1-PS needs 6 entries, got {len(a)}")
        if any(a[i] < a[i + 1] for i in range(5)) or sum(a) != 0 or not any(a):
            raise ValueError(f"1-PS {a} is not normalized (need a0 >= ... >= a5, sum 0, a != 0)")
        object.__setattr__(self, "a", a)

    def __iter__(self):
        return iter(self.a)

    def __getitem__(self, i):
        return self.a[i]


def _ps(lam) -> OnePS5:
    return lam if isinstance(lam, OnePS5) else OnePS5(lam)


def weight_quad(m, lam) -> int:
    return lam[m[0]] + lam[m[1]]


def order_key(m, lam) -> tuple[int, int]:
    """Sort key realizing >_lambda (larger key = larger monomial)."""
    return (lam[m[0]] + lam[m[1]], _LEX[m])


def order_gt(m, n, lam) -> bool:
    return order_key(m, lam) > order_key(n, lam)


def sorted_by_order(lam) -> list:
    """All 21 monomials, largest first under >_lambda."""
    return sorted(QUAD_MONOMIALS, key=lambda m: order_key(m, lam), reverse=True)


# -- nets and echelon form --------------------------------------------------

class DependentNetError(ValueError):
    pass


@dataclass(frozen=True)
class QuadricNet:
    """Three quadrics as coefficient maps {(i, j): Fraction}."""
    quadrics: tuple
    support_only: bool = False

    def __init__(self, quadrics, support_only: bool = False):
        rows = []
        for Q in quadrics:
            row = {}
            for m, c in dict(Q).items():
                c = Fraction(c)
                if c:
                    row[q(*m)] = row.get(q(*m), 0) + c
            rows.append({m: c for m, c in row.items() if c})
        if len(rows) != 3:
            raise ValueError(f"a net has three quadrics, got {len(rows)}")
        object.__setattr__(self, "quadrics", tuple(rows))
        object.__setattr__(self, "support_only", bool(support_only))
        if _rank([[r.get(m, 0) for m in QUAD_MONOMIALS] for r in rows]) < 3:
            raise DependentNetError("the three quadrics are linearly dependent")

    @classmethod
    def from_supports(cls, supports):
        log.warning("support-only net: unit coefficients used, accidental cancellation is not modeled")
        return cls([{m: 1 for m in s} for s in supports], support_only=True)

    def matrix(self, columns=QUAD_MONOMIALS) -> list[list[Fraction]]:
        return [[Fraction(r.get(m, 0)) for m in columns] for r in self.quadrics]


def _rank(mat) -> int:
    return len(_echelon_pivots([[Fraction(x) for x in row] for row in mat]))


def _echelon_pivots(rows: list[list[Fraction]]) -> list[int]:
    """Row-reduce in place (exact); return pivot column indices in order."""
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def leading_terms(net: QuadricNet, lam) -> tuple:
    """Leading monomials m1 >_lambda m2 >_lambda m3 of the net after echelon reduction."""
    lam = _ps(lam)
    cols = sorted_by_order(lam)
    piv = _echelon_pivots(net.matrix(cols))
    if len(piv) < 3:
        raise DependentNetError("the three quadrics are linearly dependent")
    return tuple(cols[c] for c in piv)


def plucker_weight(triple, lam) -> int:
    return sum(weight_quad(m, lam) for m in triple)


@dataclass(frozen=True)
class NetCertificate:
    lam: tuple
    triple: tuple
    weights: tuple
    total: int

    @property
    def not_properly_stable(self) -> bool:
        return self.total <= 0

    def as_dict(self) -> dict:
        return {"lambda": list(self.lam), "leading": [qstr(m) for m in self.triple],
                "weights": list(self.weights), "plucker_weight": self.total,
                "not_properly_stable": self.not_properly_stable}


def not_properly_stable_wrt(net: QuadricNet, lam) -> NetCertificate:
    lam = _ps(lam)
    t = leading_terms(net, lam)
    ws = tuple(weight_quad(m, lam) for m in t)
    return NetCertificate(tuple(lam), t, ws, sum(ws))


# -- singularity conditions on leading terms --------------------------------

CONDITIONS = ("1", "2", "3", "1'", "2'", "3'")


@dataclass(frozen=True)
class ConditionReport:
    triple: tuple
    lam: tuple
    conditions: dict

    @property
    def admissible(self) -> bool:
        return all(self.conditions.values())

    def as_dict(self) -> dict:
        return {"triple": [qstr(m) for m in self.triple], "lambda": list(self.lam),
                "conditions": dict(self.conditions), "admissible": self.admissible}


def _conditions(m1, m2, m3, w, key) -> dict:
    """Conditions on an ordered triple, given weight and order-key tables."""

    def lt(m, n):
        return key[m] < key[n]

    def ge(m, *targets):
        top = max(targets, key=key.__getitem__)
        return m == top or w[m] >= w[top]

    c = {}
    c["1"] = ge(m1, (0, 4))
    c["2"] = ge(m2, (1, 5)) if m1 == (0, 0) else ge(m2, (0, 5))
    c["3"] = ge(m3, (3, 3)) if lt(m1, (0, 3)) else True
    if lt(m3, (1, 5)) or lt(m2, (1, 4)):
        c["1'"] = ge(m1, (1, 1))
    else:
        c["1'"] = ge(m1, (1, 3), (2, 2))
    if lt(m3, (2, 5)):
        c["2'"] = ge(m2, (2, 2))
    elif lt(m1, (1, 1)):
        c["2'"] = ge(m2, (1, 4), (3, 3))
    else:
        c["2'"] = ge(m2, (2, 4), (3, 3))
    c["3'"] = ge(m3, (3, 5), (4, 4))
    return c


def _tables(lam):
    w = {m: lam[m[0]] + lam[m[1]] for m in QUAD_MONOMIALS}
    key = {m: (w[m], _LEX[m]) for m in QUAD_MONOMIALS}
    return w, key


def lemma52_check(triple, lam) -> ConditionReport:
    """Evaluate conditions (1)-(3) and (1')-(3') on an ordered leading triple.

    Hypotheses "m <_lambda x" use the refined total order.  Requirements
    "m >=_lambda x" are read as w(m) >= w(x) (or m = x); with the refined order
    instead, the printed (N3') row would violate (2).  In (2') the three
    clauses are tried in the order written.
    """
    lam = _ps(lam)
    m1, m2, m3 = (q(*m) for m in triple)
    if not (order_gt(m1, m2, lam) and order_gt(m2, m3, lam)):
        raise ValueError("triple is not ordered m1 >_lambda m2 >_lambda m3")
    w, key = _tables(lam)
    return ConditionReport((m1, m2, m3), tuple(lam), _conditions(m1, m2, m3, w, key))


def order_triple(triple, lam) -> tuple:
    return tuple(sorted((q(*m) for m in triple), key=lambda m: order_key(m, lam), reverse=True))


# -- the table of maximal destabilizing classes ----------------------------

def _qs(*names):
    return tuple(qparse(s) for s in names)


# (case, lambda, (slot1, slot2, slot3)) as published
TABLE3_ROWS = (
    ("N1'", (2, 1, 0, 0, -1, -2), (_qs("x0x2", "x1^2"), _qs("x0x5", "x1x4", "x2^2"), _qs("x2x5", "x4^2"))),
    ("N2'", (3, 1, 1, -1, -1, -3), (_qs("x0x3", "x1^2"), _qs("x0x5", "x1x3"), _qs("x1x5", "x3^2"))),
    ("N3'", (4, 1, 1, -2, -2, -2), (_qs("x0x3", "x1^2"), _qs("x0x3", "x1^2"), _qs("x3^2"))),
    ("N4'", (5, 3, 1, -1, -3, -5), (_qs("x0x4", "x1x3", "x2^2"), _qs("x0x5", "x1x4", "x2x3"),
                                    _qs("x1x5", "x2x4", "x3^2"))),
)


def slot_maxima(slots, lam) -> tuple:
    """Pick the >_lambda-largest monomial of each slot, skipping ones already taken."""
    chosen = []
    for slot in slots:
        rest = [m for m in slot if m not in chosen]
        if not rest:
            raise ValueError("slots do not yield three distinct monomials")
        chosen.append(max(rest, key=lambda m: order_key(m, lam)))
    return tuple(chosen)


@dataclass(frozen=True)
class Table3RowCheck:
    case: str
    lam: tuple
    slot_weights: tuple  # common weight per slot, None if not common
    triple: tuple
    plucker: int
    conditions: ConditionReport

    @property
    def slots_ok(self) -> bool:
        return all(w is not None for w in self.slot_weights)

    @property
    def ok(self) -> bool:
        return self.slots_ok and self.plucker <= 0 and self.conditions.admissible

    def as_dict(self) -> dict:
        return {"case": self.case, "lambda": list(self.lam), "slot_weights": list(self.slot_weights),
                "triple": [qstr(m) for m in self.triple], "plucker_weight": self.plucker,
                "conditions": dict(self.conditions.conditions), "pass": self.ok}


def table3_verify() -> list[Table3RowCheck]:
    out = []
    for case, a, slots in TABLE3_ROWS:
        lam = OnePS5(a)
        sw = []
        for slot in slots:
            ws = {weight_quad(m, lam) for m in slot}
            sw.append(ws.pop() if len(ws) == 1 else None)
        t = slot_maxima(slots, lam)
        ordered = order_triple(t, lam)
        out.append(Table3RowCheck(case, a, tuple(sw), ordered, plucker_weight(ordered, lam),
                                  lemma52_check(ordered, lam)))
    return out


def normalized_grid(bound: int) -> list[tuple]:
    """All normalized integer 1-PS with a0 <= bound, in a fixed order."""
    if bound < 1:
        raise ValueError("bound must be positive")
    out = []

    def rec(prefix, s):
        k = len(prefix)
        if k == 5:
            a5 = -s
            if a5 <= prefix[-1]:
                out.append(tuple(prefix) + (a5,))
            return
        for x in range(prefix[-1], -5 * bound - 1, -1):
            # the 6-k entries from here on are all <= x and must sum to -s
            if s + (6 - k) * x < 0:
                break
            rec(prefix + [x], s + x)

    for a0 in range(1, bound + 1):
        rec([a0], a0)
    return out


_TRIPLES = tuple(itertools.combinations(QUAD_MONOMIALS, 3))


def admissible_triples(lam) -> frozenset:
    """Unordered triples with Plucker weight <= 0 whose ordered form passes the conditions."""
    lam = _ps(lam)
    w, key = _tables(lam)
    out = []
    for t in _TRIPLES:
        if w[t[0]] + w[t[1]] + w[t[2]] > 0:
            continue
        m1, m2, m3 = sorted(t, key=key.__getitem__, reverse=True)
        if all(_conditions(m1, m2, m3, w, key).values()):
            out.append(frozenset(t))
    return frozenset(out)


def _chunk_sets(lams):
    return [(lam, admissible_triples(lam)) for lam in lams]


@dataclass(frozen=True)
class NetClass:
    representative: tuple
    triples: frozenset
    lambdas: tuple = field(compare=False)

    def slots(self) -> tuple:
        """Union over triples of the first, second and third leading monomial."""
        lam = self.representative
        s = (set(), set(), set())
        for t in self.triples:
            for k, m in enumerate(order_triple(t, lam)):
                s[k].add(m)
        return tuple(sorted(x, key=lambda m: order_key(m, lam), reverse=True) for x in s)

    def as_dict(self) -> dict:
        return {"representative": list(self.representative), "n_triples": len(self.triples),
                "n_lambdas": len(self.lambdas),
                "slots": [[qstr(m) for m in s] for s in self.slots()],
                "lambdas": [list(a) for a in self.lambdas]}


def table3_search(bound: int = DEFAULT_SEARCH_BOUND, jobs: int = 1) -> list[NetClass]:
    """Inclusion-maximal distinct admissible-triple sets over normalized 1-PS with a0 <= bound.

    Completeness is only claimed for the scanned grid.  Output order and
    content do not depend on ``jobs``.
    """
    if bound < 5:
        raise ValueError("search bound must be at least 5")
    lams = normalized_grid(bound)
    if jobs > 1:
        chunks = [lams[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            pairs = [p for part in ex.map(_chunk_sets, chunks) for p in part]
    else:
        pairs = _chunk_sets(lams)
    groups: dict[frozenset, list] = {}
    for lam, s in pairs:
        if s:
            groups.setdefault(s, []).append(lam)
    sets = list(groups)
    out = []
    for s in sets:
        if any(s < t for t in sets):
            continue
        ls = sorted(groups[s], key=lambda a: (a[0], tuple(-x for x in a)))
        out.append(NetClass(ls[0], s, tuple(ls)))
    out.sort(key=lambda c: (c.representative[0], tuple(-x for x in c.representative)))
    return out
