"""The period lattice  Lambda_2l = Z w + U^2 + E8(-1)^2  and its primitive vectors.

Coordinates are always taken in the basis

    (w, u1, v1, u2, v2, e_1 .. e_8, e'_1 .. e'_8)

with <w, w> = -2l, each (u_i, v_i) a hyperbolic plane and the last sixteen
vectors two copies of the negated E8 root lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

U = ((0, 1), (1, 0))

# E8 Cartan matrix: chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
_E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]


def e8_cartan() -> tuple[tuple[int, ...], ...]:
    m = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in _E8_EDGES:
        m[i][j] = m[j][i] = -1
    return tuple(tuple(r) for r in m)


E8_NEG = tuple(tuple(-x for x in row) for row in e8_cartan())

# index of w, u1, v1 in the Lambda_2l basis
W, U1, V1, U2, V2 = 0, 1, 2, 3, 4
RANK = 21


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class EvenLattice:
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            if g[i][i] % 2:
                raise LatticeError(f"diagonal entry {i} is odd; lattice is not even")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError(f"Gram matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, x: Sequence, y: Sequence):
        return sum(x[i] * self.gram[i][j] * y[j]
                   for i in range(self.rank) for j in range(self.rank)
                   if self.gram[i][j])

    def norm(self, x: Sequence):
        return self.pair(x, x)

    def apply(self, x: Sequence) -> list:
        """gram @ x"""
        return [sum(g * xj for g, xj in zip(row, x) if g) for row in self.gram]


def block_diag(*blocks) -> tuple[tuple[int, ...], ...]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return tuple(tuple(r) for r in out)


def lambda_gram(l: int) -> EvenLattice:
    if int(l) != l or l < 1:
        raise ValueError(f"l must be a positive integer, got {l!r}")
    return EvenLattice(block_diag(((-2 * int(l),),), U, U, E8_NEG, E8_NEG))


def lattice_l(lat: EvenLattice) -> int:
    """Recover l from a Lambda_2l model (the w-entry of the Gram matrix)."""
    g = lat.gram
    if lat.rank != RANK or g[0][0] >= 0 or any(g[0][j] for j in range(1, RANK)):
        raise LatticeError("not a Lambda_2l model in the standard basis")
    return -g[0][0] // 2


def smith_invariants(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix (zeros dropped)."""
    a = [[int(x) for x in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                # pivot must divide the remaining block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remainder into the pivot slot
            cand = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
            _, i, j = min(cand)
            if j == t:
                a[t], a[i] = a[i], a[t]
            else:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def discriminant_group(lat: EvenLattice) -> list[int]:
    """Nontrivial elementary divisors of the Gram matrix (orders of the cyclic factors)."""
    inv = smith_invariants(lat.gram)
    if len(inv) < lat.rank:
        raise LatticeError("Gram matrix is degenerate")
    return [d for d in inv if d != 1]


@dataclass(frozen=True)
class PrimitiveVectorClass:
    norm: int
    level: int
    type: int


def _gcd_all(xs) -> int:
    return reduce(math.gcd, (abs(int(x)) for x in xs), 0)


def invariants_of(v: Sequence[int], lat: EvenLattice) -> PrimitiveVectorClass:
    """(norm, level, type) of a primitive vector of a Lambda_2l model."""
    l = lattice_l(lat)
    v = [int(x) for x in v]
    if len(v) != lat.rank:
        raise LatticeError(f"vector has length {len(v)}, lattice rank is {lat.rank}")
    if _gcd_all(v) != 1:
        raise LatticeError("vector is not primitive")
    k = _gcd_all(lat.apply(v))
    # v/k lies in the dual lattice; its class is d * (w / 2l)
    x = [Fraction(c, k) for c in v]
    if any(c.denominator != 1 for c in x[1:]):
        raise LatticeError("v/k has a non-integral component off w; basis is not standard")
    d = x[W] * 2 * l
    if d.denominator != 1:
        raise LatticeError("v/k is not in the dual lattice")
    return PrimitiveVectorClass(norm=lat.norm(v), level=k, type=int(d) % (2 * l))


def canonical_primitive(N: int, k: int, d: int, l: int) -> list[int]:
    """Representative (dk/2l) w + k (u1 + m v1) of the orbit with invariants (N, k, d).

    Requires k | 2l, 2l | dk, gcd(dk/2l, k) = 1 (primitivity; equivalently
    k = 2l / gcd(2l, d)) and m = N/2k^2 + d^2/4l integral.
    """
    if l < 1 or k < 1:
        raise LatticeError("need l >= 1 and k >= 1")
    d %= 2 * l
    if (2 * l) % k:
        raise LatticeError(f"level {k} does not divide 2l = {2 * l}")
    if (d * k) % (2 * l):
        raise LatticeError(f"w-coefficient dk/2l = {d * k}/{2 * l} is not integral")
    c = d * k // (2 * l)
    if math.gcd(c, k) != 1:
        raise LatticeError(f"no primitive vector of level {k} and type {d} (gcd({c}, {k}) > 1)")
    m = Fraction(N, 2 * k * k) + Fraction(d * d, 4 * l)
    if m.denominator != 1:
        raise LatticeError(f"m = N/2k^2 + d^2/4l = {m} is not an integer")
    v = [0] * RANK
    v[W] = c
    v[U1] = k
    v[V1] = k * int(m)
    return v


def admissible_classes(l: int, norm_bound: int):
    """All (N, k, d) accepted by :func:`canonical_primitive` with |N| <= norm_bound."""
    out = []
    for k in range(1, 2 * l + 1):
        if (2 * l) % k:
            continue
        for d in range(2 * l):
            if (d * k) % (2 * l) or math.gcd(d * k // (2 * l), k) != 1:
                continue
            for N in range(-norm_bound, norm_bound + 1):
                if (Fraction(N, 2 * k * k) + Fraction(d * d, 4 * l)).denominator == 1:
                    out.append((N, k, d))
    return out


@dataclass(frozen=True)
class NLLabel:
    d: int
    g: int
    l: int

    @property
    def delta(self) -> int:
        # minus the determinant of [[2l, d], [d, 2g-2]]
        return self.d * self.d - 4 * self.l * (self.g - 1)


@dataclass(frozen=True)
class HeegnerLabel:
    n: Fraction
    gamma: int


def nl_to_heegner(label: NLLabel) -> HeegnerLabel:
    if label.l < 1 or label.d < 0 or label.g < 0:
        raise ValueError("need l >= 1 and d, g >= 0")
    delta = label.delta
    if delta <= 0:
        raise ValueError(f"Delta = d^2 - 4l(g-1) = {delta} <= 0: not a Noether-Lefschetz divisor")
    return HeegnerLabel(n=Fraction(-delta, 4 * label.l), gamma=label.d % (2 * label.l))


def projection_norm_oracle(label: NLLabel) -> Fraction:
    """<v, v> for v = beta - (d/2l) L, computed in the rank-2 lattice <L, beta>."""
    L_sq, bL, b_sq = 2 * label.l, label.d, 2 * label.g - 2
    t = Fraction(label.d, 2 * label.l)
    return b_sq - 2 * t * bL + t * t * L_sq


def heegner_summary(label: NLLabel) -> dict:
    """Heegner label, level, norm and orbit representative for a Noether-Lefschetz label."""
    h = nl_to_heegner(label)
    l = label.l
    k = 2 * l // math.gcd(2 * l, label.d)
    N = 2 * h.n * k * k
    assert N.denominator == 1
    vec = canonical_primitive(int(N), k, h.gamma, l)
    return {"d": label.d, "g": label.g, "l": l, "delta": label.delta, "n": h.n,
            "gamma": h.gamma, "level": k, "norm": int(N), "vector": vec}


BASIS_NAMES = ["w", "u1", "v1", "u2", "v2"] + [f"e{i}" for i in range(1, 9)] + [f"f{i}" for i in range(1, 9)]


def format_vector(v: Sequence[int]) -> str:
    """Human-readable form, e.g. ``w + 6u1``."""
    parts = []
    for c, name in zip(v, BASIS_NAMES):
        if not c:
            continue
        mag = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, f"{mag}{name}"))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, t in parts[1:]:
        s += f" {sign} {t}"
    return s
