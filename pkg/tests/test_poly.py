"""
Tests for modules/poly.py
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.poly import (
    Family,
    Monomial,
    Polynomial,
    VarId,
    parse_polynomial,
    parse_varid,
    poly_arith,
    specialize_pi,
    substitute,
    weight,
)
from modules.simplex import MonotoneMap

POOL = [VarId(Family.T, 1, 1), VarId(Family.T, 2, 1), VarId(Family.U, 1, 2),
        VarId(Family.T, 1, 1, (MonotoneMap(2, 1, (0, 0, 1)),))]

monomials = st.builds(
    lambda pi, exps: Monomial.build(pi, dict(zip(POOL, exps))),
    st.integers(min_value=0, max_value=3),
    st.lists(st.integers(min_value=0, max_value=2), min_size=len(POOL), max_size=len(POOL)),
)
polynomials = st.dictionaries(monomials, st.integers(min_value=-5, max_value=5), max_size=4).map(Polynomial)
substitutions = st.dictionaries(st.sampled_from(POOL), polynomials, max_size=3)


def var(family, j, a):
    return Polynomial.var(VarId(family, j, a))


T1 = var(Family.T, 1, 1)
T2 = var(Family.T, 2, 1)
PI = Polynomial.pi_power(1)


class TestArithmetic:
    def test_difference_of_squares(self):
        assert poly_arith(PI + T1, PI - T1, 'mul') == PI ** 2 - T1 ** 2

    def test_additive_identity(self):
        p = 3 * PI * T1 - T2
        assert poly_arith(p, Polynomial.zero(), 'add') == p

    def test_cancellation(self):
        assert poly_arith(PI * T1, PI * T1, 'sub').is_zero()

    def test_unknown_operation(self):
        with pytest.raises(ValueError):
            poly_arith(PI, T1, 'div')

    def test_no_overflow(self):
        big = Polynomial.constant(2 ** 200)
        assert (big * big).terms == {Monomial(): 2 ** 400}

    def test_int_equality(self):
        assert Polynomial.constant(0) == 0
        assert Polynomial.constant(7) == 7

    def test_coerce_rejects_floats(self):
        with pytest.raises(TypeError):
            PI + 1.5


class TestSubstitute:
    def test_can_prototype(self):
        t21 = var(Family.T, 1, 2)
        sigma = {VarId(Family.T, 1, 1): PI * T1, VarId(Family.T, 1, 2): PI * t21}
        assert substitute(T1 * t21, sigma) == PI ** 2 * T1 * t21

    def test_empty_substitution(self):
        p = T1 * T2 + PI
        assert substitute(p, {}) == p

    def test_swap(self):
        sigma = {VarId(Family.T, 1, 1): T2, VarId(Family.T, 2, 1): T1}
        assert substitute(T1 + T2, sigma) == T1 + T2

    def test_simultaneous(self):
        sigma = {VarId(Family.T, 1, 1): T2, VarId(Family.T, 2, 1): PI}
        assert substitute(T1 * T2, sigma) == PI * T2


class TestSpecialize:
    def test_kill_pi(self):
        assert specialize_pi(PI ** 2 + T1, 0) == T1

    def test_cancellation_at_two(self):
        assert specialize_pi(PI * T1 - 2 * T1, 2).is_zero()

    def test_expansion(self):
        assert specialize_pi(T1 * (PI - T1), 0) == -(T1 ** 2)


class TestWeight:
    @pytest.mark.parametrize("monomial,t_weight,expected", [
        (Monomial.build(3), 5, 3),
        (Monomial.build(0, {VarId(Family.T, 1, 1): 1, VarId(Family.T, 2, 1): 1}), 2, 4),
        (Monomial.build(1, {VarId(Family.T, 1, 1): 1}), 3, 4),
    ])
    def test_examples(self, monomial, t_weight, expected):
        assert weight(monomial, t_weight) == expected

    def test_non_positive_t_weight(self):
        with pytest.raises(ValueError):
            weight(Monomial.build(1), 0)

    def test_homogeneity(self):
        assert (PI * T1 + T1 * T2).is_homogeneous(1) is False
        assert (PI ** 2 + T1 * T2).is_homogeneous(1) is True


class TestCanonicalText:
    def test_format(self):
        label = MonotoneMap(2, 1, (0, 0, 1))
        p = 3 * PI ** 2 * Polynomial.var(VarId(Family.T, 1, 2, (label,))) - var(Family.U, 2, 1)
        assert p.to_text() == "3*pi^2*t[1,2](a=(0,0,1)) - u[2,1]"
        assert parse_polynomial(p.to_text()) == p

    def test_zero(self):
        assert Polynomial.zero().to_text() == "0"

    def test_parse_varid(self):
        v = parse_varid("t[1,2](a=(0,0,1),b=(0,1)/2)")
        assert v.family is Family.T and v.j == 1 and v.a == 2
        assert [str(label) for label in v.labels] == ["(0,0,1):[2]->[1]", "(0,1):[1]->[2]"]

    def test_label_target_suffix(self):
        onto = VarId(Family.T, 1, 1, (MonotoneMap(1, 1, (0, 1)),))
        into = VarId(Family.T, 1, 1, (MonotoneMap(1, 3, (0, 1)),))
        assert (str(onto), str(into)) == ("t[1,1](a=(0,1))", "t[1,1](a=(0,1)/3)")
        assert parse_varid(str(into)) == into
        assert parse_varid("t[1,1](a=(0,1)/1)") == onto
        expected = PI * Polynomial.var(into) + Polynomial.var(onto)
        assert parse_polynomial("pi*t[1,1](a=(0,1)/3) + t[1,1](a=(0,1))") == expected

    @pytest.mark.parametrize("text", ["t[1", "3**pi", "pi^", "x[1,1]"])
    def test_parse_rejects_garbage(self, text):
        with pytest.raises(ValueError):
            parse_polynomial(text)


@settings(max_examples=60, deadline=None)
@given(polynomials, polynomials, polynomials)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p - p == Polynomial.zero()


@settings(max_examples=60, deadline=None)
@given(polynomials, polynomials, substitutions)
def test_substitution_is_a_ring_map(p, q, sigma):
    assert substitute(p * q, sigma) == substitute(p, sigma) * substitute(q, sigma)
    assert substitute(p + q, sigma) == substitute(p, sigma) + substitute(q, sigma)


@settings(max_examples=40, deadline=None)
@given(polynomials, substitutions, substitutions)
def test_substitution_composition(p, sigma, tau):
    composed = {v: substitute(Polynomial.var(v), sigma) for v in POOL}
    composed = {v: substitute(image, tau) for v, image in composed.items()}
    assert substitute(substitute(p, sigma), tau) == substitute(p, composed)


@settings(max_examples=80, deadline=None)
@given(polynomials)
def test_canonical_text_round_trip(p):
    assert parse_polynomial(p.to_text()) == p
    assert parse_polynomial(p.to_text()).to_text() == p.to_text()


@settings(max_examples=40, deadline=None)
@given(polynomials, st.integers(min_value=-3, max_value=3))
def test_specialization_is_a_ring_map(p, c):
    assert specialize_pi(p * p, c) == specialize_pi(p, c) * specialize_pi(p, c)
