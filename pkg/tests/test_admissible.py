from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from affine_bgg.admissible import (
    CriticalLevelError,
    IntegralSystem,
    check_twist,
    enumerate_pr_plus,
    is_admissible_number,
    is_integral_root,
    is_regular_antidominant,
    is_regular_dominant,
    pr_k_y,
)
from affine_bgg.affine_weyl import AffineRoot, AffineWeylGroup
from affine_bgg.root_system import build_root_system

import oracles as o

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
B2 = build_root_system("B", 2)
G2 = build_root_system("G", 2)
HALF = Fraction(-1, 2)

# (root system, admissible level) pairs covering both the same-type and the dual case
CASES = [(A1, HALF), (A1, Fraction(1)), (A2, Fraction(-3, 2)), (B2, HALF), (B2, Fraction(-5, 3)), (G2, Fraction(1, 2)), (G2, Fraction(-2, 3))]


def test_admissible_number_examples():
    info = is_admissible_number(HALF, A1)
    assert info and (info.p, info.q, info.dual_case) == (3, 2, False)
    assert not is_admissible_number(-1, A1)
    assert not is_admissible_number(-2, A1)
    for rs in (A1, A2, B2, G2):
        for k in range(4):
            info = is_admissible_number(k, rs)
            assert info and info.q == 1


def test_admissible_number_dual_case():
    info = is_admissible_number(HALF, B2)
    assert info and info.dual_case and (info.p, info.q) == (5, 2)
    # p = 3 < h = 4 for the dual case
    assert not is_admissible_number(Fraction(-3, 2), B2)
    # gcd(q, 3) strictly between 1 and 3 is impossible for G2, but q = 3 is the dual case
    assert is_admissible_number(Fraction(-2, 3), G2).dual_case


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([A1, A2, B2, G2]), st.integers(-30, 30), st.integers(1, 7))
def test_admissible_number_matches_inequality(rs, num, den):
    k = Fraction(num, den)
    shifted = k + rs.dual_coxeter_number
    info = is_admissible_number(k, rs)
    if shifted <= 0:
        assert not info
        return
    p, q = shifted.numerator, shifted.denominator
    if q % rs.lacing == 0:
        expect = p >= rs.coxeter_number
    elif __import__("math").gcd(q, rs.lacing) == 1:
        expect = p >= rs.dual_coxeter_number
    else:
        expect = False
    assert bool(info) == expect


def test_integral_root_examples():
    W = AffineWeylGroup(A1)
    lam = W.weight(level=HALF)
    assert not is_integral_root(W, lam, AffineRoot((1,), 1))
    assert is_integral_root(W, lam, AffineRoot((1,), 2))
    assert is_integral_root(W, lam, AffineRoot((-1,), -2))
    integral = W.weight(level=3)
    for a, n in itertools.product(A1.roots, range(-4, 5)):
        assert is_integral_root(W, integral, AffineRoot(a, n))
    with pytest.raises(ValueError):
        is_integral_root(W, lam, AffineRoot((0,), 1))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([A1, A2, B2]), st.data())
def test_integrality_is_symmetric_under_negation(rs, data):
    W = AffineWeylGroup(rs)
    a = data.draw(st.sampled_from(rs.roots))
    n = data.draw(st.integers(-6, 6))
    lam = W.weight(level=Fraction(data.draw(st.integers(-5, 9)), data.draw(st.integers(1, 4))))
    neg = AffineRoot(tuple(-x for x in a), -n)
    assert is_integral_root(W, lam, AffineRoot(a, n)) == is_integral_root(W, lam, neg)


def test_integral_system_a1():
    s = IntegralSystem(A1, HALF)
    W = s.ambient
    assert set(s.pi_lambda) == {AffineRoot((1,), 0), AffineRoot((-1,), 2)}
    assert s.realize(s.abstract.s(0)) == W.coroot_translation([2]) * W.s(1)
    assert s.check_relations() == []
    with pytest.raises(ValueError):
        IntegralSystem(A1, -1)


@pytest.mark.parametrize("rs", [A1, A2, B2, G2])
def test_integral_system_at_integer_level_is_the_ambient_system(rs):
    s = IntegralSystem(rs, 1)
    W = s.ambient
    assert [s.realize(s.abstract.s(i)) for i in range(rs.rank + 1)] == [W.s(i) for i in range(rs.rank + 1)]
    assert s.pi_lambda == tuple(W.simple_root(i) for i in range(rs.rank + 1))


def test_integral_system_dual_case_b2():
    s = IntegralSystem(B2, HALF)
    assert s.dual_case
    assert s.abstract_type.label == "C2"
    W = s.ambient
    affine = s.pi_lambda[0]
    theta_s = max((a for a in B2.positive_roots if not B2.is_long(a)), key=sum)
    assert affine.classical == tuple(-x for x in theta_s)
    # the coroot of the affine simple root is -theta_s^vee + q K, so Lambda_0 pairs to q
    assert W.weight_pairing(W.weight(level=1), affine) == s.q
    assert s.check_relations() == []


@pytest.mark.parametrize("rs,k", CASES)
def test_realized_roots_are_exactly_the_integral_ones(rs, k):
    s = IntegralSystem(rs, k)
    W = s.ambient
    vac = s.vacuum
    max_delta = 6
    realized = set(s.positive_integral_roots(max_delta))
    scanned = {
        AffineRoot(a, n)
        for a in rs.roots
        for n in range(0, max_delta + 1)
        if AffineRoot(a, n).is_positive() and is_integral_root(W, vac, AffineRoot(a, n))
    }
    assert realized == scanned
    assert s.check_relations() == []


@pytest.mark.parametrize("rs,k", CASES)
def test_realization_respects_lengths(rs, k):
    s = IntegralSystem(rs, k)
    W = s.ambient
    A = s.abstract
    rng = random.Random(2)
    roots = s.positive_integral_roots(40)
    for _ in range(15):
        w = A.from_word(o.random_word(rng, A.rank, rng.randrange(6)))
        real = s.realize(w)
        # every inversion lies at delta-depth well below 40 for words this short
        count = sum(1 for b in roots if not W.inverse_act_root(real, b).is_positive())
        assert count == A.length(w)


def test_regularity_examples():
    W = AffineWeylGroup(A1)
    assert is_regular_dominant(W, W.weight(level=0))
    assert is_regular_dominant(W, W.weight(level=2))
    assert is_regular_dominant(W, W.weight(level=HALF))
    assert not is_regular_antidominant(W, W.weight(level=HALF))
    with pytest.raises(CriticalLevelError):
        is_regular_dominant(W, W.weight(level=-2))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([A1, A2, B2]), st.data())
def test_regularity_matches_scan(rs, data):
    W = AffineWeylGroup(rs)
    k = Fraction(data.draw(st.integers(-12, 12)), data.draw(st.integers(1, 4)))
    if k + rs.dual_coxeter_number == 0:
        return
    classical = tuple(Fraction(data.draw(st.integers(-6, 6)), data.draw(st.integers(1, 3))) for _ in range(rs.rank))
    lam = W.weight(classical, level=k)
    # the scan reaches far enough only when the slope is not tiny
    assert is_regular_dominant(W, lam) == o.regular_dominant_scan(W, lam, nmax=200)


def test_pr_plus_examples():
    out = enumerate_pr_plus(HALF, A1)
    assert len(out) == 2
    assert sorted(a.labels(A1) for a in out) == [(0,), (1,)]
    for rs, k in CASES:
        weights = [a.weight for a in enumerate_pr_plus(k, rs)]
        assert IntegralSystem(rs, k).vacuum in weights


@pytest.mark.parametrize("rs", [A1, A2, B2])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_pr_plus_at_integer_level_is_the_alcove(rs, k):
    assert len(enumerate_pr_plus(k, rs)) == o.alcove_count(rs, k)


@pytest.mark.parametrize("rs,k", CASES)
def test_admissible_weights_are_regular_dominant(rs, k):
    s = IntegralSystem(rs, k)
    W = s.ambient
    for a in enumerate_pr_plus(k, rs):
        assert is_regular_dominant(W, a.weight)
        for beta in s.positive_integral_roots(4):
            assert is_integral_root(W, a.weight, beta)


def test_pr_k_y_examples():
    W = AffineWeylGroup(A1)
    assert [a.weight for a in pr_k_y(HALF, A1, W.identity())] == [a.weight for a in enumerate_pr_plus(HALF, A1)]
    good = W.translation((Fraction(-1, 2),))
    out = pr_k_y(HALF, A1, good)
    assert len(out) == 2
    for a in out:
        assert a.weight == W.dot(good, a.base_weight)
    with pytest.raises(ValueError):
        pr_k_y(HALF, A1, W.translation((Fraction(1, 2),)))
    with pytest.raises(ValueError):
        pr_k_y(HALF, A1, W.s(1))


def test_twisted_integral_roots_are_conjugated():
    W = AffineWeylGroup(A1)
    y = W.translation((Fraction(-1, 2),))
    base = IntegralSystem(A1, HALF)
    assert check_twist(base, y)
    twisted = base.with_twist(y)
    for a in pr_k_y(HALF, A1, y):
        for beta in base.positive_integral_roots(4):
            image = W.act_root(y, beta)
            assert is_integral_root(W, a.weight, image)
        assert not is_integral_root(W, a.weight, W.act_root(y, AffineRoot((1,), 1)))
    assert twisted.check_relations() == []
