"""
Tests for modules/simplex.py
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.simplex import (
    MonotoneMap,
    check_all_s_alpha,
    check_decompositions,
    check_enumeration,
    check_simplex_relations,
    compose,
    compose_word,
    decompose,
    delta,
    enumerate_maps,
    m_alpha,
    registered_checks,
    s_alpha,
    s_alpha_transformation_check,
    sigma,
)


@st.composite
def monotone_maps(draw, p_max=4, n_max=4):
    p = draw(st.integers(min_value=0, max_value=p_max))
    n = draw(st.integers(min_value=0, max_value=n_max))
    values = sorted(draw(st.lists(st.integers(min_value=0, max_value=n), min_size=p + 1, max_size=p + 1)))
    return MonotoneMap(p, n, tuple(values))


class TestMonotoneMap:
    def test_rejects_decreasing(self):
        with pytest.raises(ValueError):
            MonotoneMap(1, 1, (1, 0))

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            MonotoneMap(2, 1, (0, 1))

    def test_text_form(self):
        assert str(MonotoneMap(2, 1, (0, 0, 1))) == "(0,0,1):[2]->[1]"
        assert MonotoneMap.parse("(0,0,1):[2]->[1]") == MonotoneMap(2, 1, (0, 0, 1))

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            MonotoneMap.parse("(0,1)->[1]")


class TestCofacesAndCodegeneracies:
    def test_delta(self):
        assert delta(2, 1).values == (0, 2)
        assert delta(1, 0).values == (1,)

    def test_sigma(self):
        assert sigma(1, 0).values == (0, 0, 1)

    @pytest.mark.parametrize("n,i", [(0, 0), (2, 3), (2, -1)])
    def test_delta_out_of_range(self, n, i):
        with pytest.raises(ValueError):
            delta(n, i)

    def test_sigma_out_of_range(self):
        with pytest.raises(ValueError):
            sigma(1, 2)


class TestCompose:
    def test_sigma_after_delta_is_identity(self):
        assert compose(sigma(1, 0), delta(2, 0)).values == (0, 1)

    def test_identity(self):
        f = MonotoneMap(2, 3, (0, 2, 3))
        assert compose(MonotoneMap.identity(3), f) == f

    def test_two_cofaces(self):
        assert compose(delta(2, 2), delta(1, 0)).values == (1,)

    def test_endpoint_mismatch(self):
        with pytest.raises(ValueError):
            compose(delta(2, 0), delta(3, 0))


class TestEnumerate:
    def test_small(self):
        assert [m.values for m in enumerate_maps(1, 1)] == [(0, 0), (0, 1), (1, 1)]

    def test_vertices(self):
        assert len(enumerate_maps(0, 5)) == 6

    def test_count(self):
        assert len(enumerate_maps(4, 3)) == 56 == math.comb(8, 3)

    def test_check(self):
        assert check_enumeration(3, 3).passed


class TestCounting:
    ALPHA = MonotoneMap(2, 1, (0, 0, 1))

    def test_direct_counts(self):
        assert m_alpha(self.ALPHA, 0) == 2
        assert s_alpha(self.ALPHA, 1) == 3

    def test_minus_one_convention(self):
        assert s_alpha(self.ALPHA, -1) == 0
        assert m_alpha(self.ALPHA, -1) == 0

    def test_constant_map(self):
        alpha = MonotoneMap.constant(3, 4, 2)
        assert [s_alpha(alpha, i) for i in range(5)] == [0, 0, 4, 4, 4]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            s_alpha(self.ALPHA, 2)
        with pytest.raises(ValueError):
            m_alpha(self.ALPHA, -2)


class TestRelations:
    def test_all_relations(self):
        result = check_simplex_relations(3)
        assert result.passed
        assert result.params['instances'] > 0

    def test_identity_after_sigma_delta(self):
        assert compose(sigma(0, 0), delta(1, 0)) == MonotoneMap.identity(0)

    def test_coface_relation(self):
        assert compose(delta(2, 1), delta(1, 0)) == compose(delta(2, 0), delta(1, 0))


class TestTransformationLaws:
    def test_identity_sigma_case(self):
        alpha = MonotoneMap.identity(2)
        assert [s_alpha(compose(alpha, sigma(2, 1)), u) for u in range(3)] == [1, 3, 4]
        assert s_alpha_transformation_check(alpha, 1).passed

    def test_constant_map(self):
        assert s_alpha_transformation_check(MonotoneMap.constant(2, 2, 0), 1).passed

    def test_delta_case(self):
        alpha = MonotoneMap(1, 1, (0, 1))
        face = compose(alpha, delta(1, 0))
        assert [s_alpha(face, u) for u in range(2)] == [0, 1]
        assert s_alpha_transformation_check(alpha, 0).passed

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            s_alpha_transformation_check(MonotoneMap.identity(1), 2)

    def test_exhaustive_small(self):
        assert check_all_s_alpha(3, 3).passed


@settings(max_examples=100, deadline=None)
@given(monotone_maps())
def test_decomposition_round_trip(alpha):
    assert compose_word(decompose(alpha), alpha.source) == alpha


@settings(max_examples=100, deadline=None)
@given(monotone_maps(), st.data())
def test_transformation_laws_hold(alpha, data):
    i = data.draw(st.integers(min_value=0, max_value=alpha.source))
    assert s_alpha_transformation_check(alpha, i).passed


def test_decompositions_check():
    assert check_decompositions(3, 3).passed


def test_registered_checks(small_bounds):
    specs = list(registered_checks(small_bounds))
    ids = [s.id for s in specs]
    assert "simplex.relations.n_max=2" in ids
    assert len(ids) == len(set(ids))
    assert all(s.suite == 'simplex' and s.anchor for s in specs)
    assert all(s.run().passed for s in specs)
