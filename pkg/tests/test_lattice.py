import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from k3kit.lattice import (E8_NEG, RANK, EvenLattice, LatticeError, NLLabel,
                           PrimitiveVectorClass,
                           admissible_classes, block_diag, canonical_primitive, discriminant_group,
                           e8_cartan, format_vector, heegner_summary, invariants_of, lambda_gram,
                           lattice_l, nl_to_heegner, projection_norm_oracle, smith_invariants)


def test_e8_is_unimodular_and_positive():
    m = sympy.Matrix(e8_cartan())
    assert m.det() == 1
    assert all(x > 0 for x in np.linalg.eigvalsh(np.array(e8_cartan(), dtype=float)))


@pytest.mark.parametrize("l", [1, 2, 3, 7])
def test_lambda_gram_det_and_signature(l):
    lat = lambda_gram(l)
    assert lat.rank == RANK
    assert sympy.Matrix(lat.gram).det() == -2 * l
    ev = np.linalg.eigvalsh(np.array(lat.gram, dtype=float))
    assert (sum(ev > 0), sum(ev < 0)) == (2, 19)
    assert lattice_l(lat) == l


def test_discriminant_examples():
    assert discriminant_group(lambda_gram(3)) == [6]
    assert discriminant_group(lambda_gram(1)) == [2]
    assert discriminant_group(EvenLattice(E8_NEG)) == []


def test_degenerate_lattice():
    with pytest.raises(LatticeError):
        discriminant_group(EvenLattice(((2, 2), (2, 2))))


@pytest.mark.parametrize("gram", [((1, 0), (0, 2)), ((2, 1), (0, 2)), ((2, 0, 0), (0, 2))])
def test_even_lattice_validation(gram):
    with pytest.raises(LatticeError):
        EvenLattice(gram)


small_mats = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(small_mats)
@settings(max_examples=150)
def test_smith_against_sympy(mat):
    ours = smith_invariants(mat)
    snf = smith_normal_form(sympy.Matrix(mat), domain=sympy.ZZ)
    ref = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    assert ours == ref


def test_block_diag():
    assert block_diag(((1,),), ((0, 1), (1, 0))) == ((1, 0, 0), (0, 0, 1), (0, 1, 0))


def test_canonical_examples():
    v = canonical_primitive(-6, 6, 1, 3)
    assert format_vector(v) == "w + 6u1"
    assert invariants_of(v, lambda_gram(3)) == PrimitiveVectorClass(-6, 6, 1)


@pytest.mark.parametrize("args,msg", [
    ((-6, 4, 1, 3), "does not divide"),
    ((-6, 3, 1, 3), "not integral"),
    ((0, 2, 0, 2), "gcd"),
    ((-4, 6, 1, 3), "not an integer"),
])
def test_canonical_rejects(args, msg):
    with pytest.raises(LatticeError, match=msg):
        canonical_primitive(*args)


def test_admissible_level_formula():
    # a primitive vector of type d has level 2l / gcd(2l, d)
    for l in range(1, 9):
        for N, k, d in admissible_classes(l, 10):
            assert k == 2 * l // math.gcd(2 * l, d)


@given(st.integers(1, 8), st.lists(st.integers(-4, 4), min_size=RANK, max_size=RANK))
@settings(max_examples=200)
def test_invariants_of_random_vectors_roundtrip(l, v):
    assume(any(v))
    g = math.gcd(*v)
    v = [x // g for x in v]
    lat = lambda_gram(l)
    c = invariants_of(v, lat)
    rep = canonical_primitive(c.norm, c.level, c.type, l)
    assert invariants_of(rep, lat) == c


def test_invariants_rejects():
    lat = lambda_gram(2)
    with pytest.raises(LatticeError):
        invariants_of([2] + [0] * 20, lat)
    with pytest.raises(LatticeError):
        invariants_of([1, 0], lat)


def test_heegner_examples():
    s = heegner_summary(NLLabel(1, 1, 3))
    assert (s["n"], s["gamma"], s["level"], s["norm"]) == (Fraction(-1, 12), 1, 6, -6)
    assert format_vector(s["vector"]) == "w + 6u1"
    s = heegner_summary(NLLabel(0, 0, 1))
    assert (s["n"], s["gamma"], s["level"]) == (-1, 0, 1)
    with pytest.raises(ValueError, match="Delta"):
        nl_to_heegner(NLLabel(2, 2, 1))


@given(st.integers(0, 30), st.integers(0, 12), st.integers(1, 15))
def test_heegner_projection(d, g, l):
    label = NLLabel(d, g, l)
    assume(label.delta > 0)
    h = nl_to_heegner(label)
    assert 2 * h.n == projection_norm_oracle(label)
    assert 0 <= h.gamma < 2 * l


def test_gamma_not_identified_with_minus_gamma():
    a = nl_to_heegner(NLLabel(1, 0, 3))
    b = nl_to_heegner(NLLabel(5, 2, 3))
    assert a.gamma == 1 and b.gamma == 5


def test_format_vector():
    assert format_vector([0] * RANK) == "0"
    v = [0] * RANK
    v[1], v[2], v[20] = 1, -1, 3
    assert format_vector(v) == "u1 - v1 + 3f8"
    v[0] = -2
    assert format_vector(v).startswith("-2w")
