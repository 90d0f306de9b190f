import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from k3kit import git_net as gn
from k3kit.git_net import (QUAD_MONOMIALS, DependentNetError, OnePS5, QuadricNet, leading_terms,
                           lemma52_check, normalized_grid, not_properly_stable_wrt, order_gt,
                           order_key, order_triple, plucker_weight, qparse, qstr, sorted_by_order,
                           table3_verify, weight_quad)

# brute-force counts of normalized 1-PS with a0 <= b (nested loops over all entries)
GRID_COUNTS = {1: 10, 2: 57, 3: 198, 6: 2431}

lams = st.sampled_from(normalized_grid(4))


def test_monomials():
    assert len(QUAD_MONOMIALS) == 21
    assert qparse("x0x5") == (0, 5) and qparse("x3^2") == (3, 3) and qparse("x5x2") == (2, 5)
    assert qstr((1, 1)) == "x1^2"
    with pytest.raises(ValueError):
        qparse("x6^2")


def test_one_ps_validation():
    for bad in [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, -1), (0,) * 6, (1, -1)]:
        with pytest.raises(ValueError):
            OnePS5(bad)


@pytest.mark.parametrize("b", sorted(GRID_COUNTS))
def test_normalized_grid(b):
    g = normalized_grid(b)
    assert len(g) == GRID_COUNTS[b] == len(set(g))
    for a in g:
        assert sum(a) == 0 and list(a) == sorted(a, reverse=True) and 1 <= a[0] <= b


@given(lams)
def test_order_is_total_and_refines_weight(lam):
    keys = [order_key(m, lam) for m in QUAD_MONOMIALS]
    assert len(set(keys)) == 21
    for m, n in itertools.permutations(QUAD_MONOMIALS, 2):
        assert order_gt(m, n, lam) != order_gt(n, m, lam)
        if order_gt(m, n, lam):
            assert weight_quad(m, lam) >= weight_quad(n, lam)
            # normalization: a monomial in strictly later variables cannot lead
            assert min(m) <= max(n)
    s = sorted_by_order(lam)
    assert all(order_gt(a, b, lam) for a, b in zip(s, s[1:]))


def test_max_min_statement_fails_on_tie_break_neighbours():
    # x0^2 >_lambda x0x1 for every normalized lambda, yet max{0,0} = min{0,1}
    for lam in normalized_grid(3):
        assert order_gt((0, 0), (0, 1), lam)
    assert not max((0, 0)) > min((0, 1))


def test_tie_break_is_fixed_lex():
    lam = (1, 1, 1, -1, -1, -1)
    s = sorted_by_order(lam)
    assert s[:3] == [(0, 0), (0, 1), (0, 2)]


def _rand_net(rng, size=5):
    while True:
        qs = []
        for _ in range(3):
            ms = rng.sample(QUAD_MONOMIALS, rng.randint(1, size))
            qs.append({m: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for m in ms})
        try:
            return QuadricNet(qs)
        except DependentNetError:
            continue


def _sympy_leading(net, lam):
    cols = sorted_by_order(lam)
    _, piv = sympy.Matrix(net.matrix(cols)).rref()
    return tuple(cols[c] for c in piv)


@pytest.mark.parametrize("seed", range(20))
def test_leading_terms_against_sympy(seed):
    rng = random.Random(seed)
    net = _rand_net(rng)
    lam = rng.choice(normalized_grid(4))
    assert leading_terms(net, lam) == _sympy_leading(net, lam)


def _change_basis(net, rng):
    while True:
        g = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
        if sympy.Matrix(g).det() != 0:
            break
    qs = []
    for row in g:
        Q = {}
        for c, P in zip(row, net.quadrics):
            for m, x in P.items():
                Q[m] = Q.get(m, 0) + c * x
        qs.append(Q)
    return QuadricNet(qs)


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_leading_terms_basis_invariant(seed):
    rng = random.Random(seed)
    net = _rand_net(rng)
    lam = rng.choice(normalized_grid(4))
    ref = leading_terms(net, lam)
    for _ in range(10):
        assert leading_terms(_change_basis(net, rng), lam) == ref


def test_dependent_net():
    with pytest.raises(DependentNetError):
        QuadricNet([{(0, 0): 1}, {(0, 0): 2}, {(1, 1): 1}])
    with pytest.raises(ValueError):
        QuadricNet([{(0, 0): 1}])


def test_example_net():
    net = QuadricNet([{(0, 2): 1, (4, 4): 1}, {(0, 5): 1}, {(2, 5): 1}])
    cert = not_properly_stable_wrt(net, (2, 1, 0, 0, -1, -2))
    assert cert.triple == ((0, 2), (0, 5), (2, 5))
    assert cert.weights == (2, 0, -2) and cert.total == 0
    assert cert.not_properly_stable


def test_cancellation_in_echelon():
    lam = (1, 0, 0, 0, 0, -1)
    net = QuadricNet([{(0, 0): 1, (1, 1): 1}, {(0, 0): 1, (1, 1): 2, (2, 2): 1}, {(5, 5): 1}])
    assert leading_terms(net, lam) == ((0, 0), (1, 1), (5, 5))
    # with unit coefficients x1^2 cancels as well, which is why supports only warn
    support = QuadricNet.from_supports([[(0, 0), (1, 1)], [(0, 0), (1, 1), (2, 2)], [(5, 5)]])
    assert leading_terms(support, lam) == ((0, 0), (2, 2), (5, 5))


def test_support_only_warns(caplog):
    with caplog.at_level("WARNING"):
        QuadricNet.from_supports([[(0, 0)], [(1, 1)], [(2, 2)]])
    assert "cancellation" in caplog.text


def test_table3_rows():
    checks = table3_verify()
    assert [c.case for c in checks] == ["N1'", "N2'", "N3'", "N4'"]
    assert all(c.ok for c in checks)
    assert [c.slot_weights for c in checks] == [(2, 0, -2), (2, 0, -2), (2, 2, -4), (2, 0, -2)]
    assert [[qstr(m) for m in c.triple] for c in checks] == [
        ["x0x2", "x0x5", "x2x5"], ["x0x3", "x0x5", "x1x5"],
        ["x0x3", "x1^2", "x3^2"], ["x0x4", "x0x5", "x1x5"]]
    assert all(c.plucker == 0 for c in checks)


def test_lemma_conditions_fail_on_bad_triple():
    lam = (2, 1, 0, 0, -1, -2)
    rep = lemma52_check(order_triple(((3, 3), (4, 4), (5, 5)), lam), lam)
    assert not rep.admissible
    assert rep.conditions["1"] is False


def test_lemma_requires_ordered_triple():
    with pytest.raises(ValueError):
        lemma52_check(((5, 5), (0, 0), (1, 1)), (2, 1, 0, 0, -1, -2))


@given(lams)
@settings(max_examples=25, deadline=None)
def test_admissible_triples_match_slow_path(lam):
    fast = gn.admissible_triples(lam)
    slow = set()
    for t in itertools.combinations(QUAD_MONOMIALS, 3):
        o = order_triple(t, lam)
        if plucker_weight(o, lam) <= 0 and lemma52_check(o, lam).admissible:
            slow.add(frozenset(t))
    assert fast == slow


def test_search_small_bound_jobs_independent():
    a = gn.table3_search(5, jobs=1)
    b = gn.table3_search(5, jobs=2)
    assert [(c.representative, c.triples) for c in a] == [(c.representative, c.triples) for c in b]
    assert (2, 1, 0, 0, -1, -2) in {c.representative for c in a}
