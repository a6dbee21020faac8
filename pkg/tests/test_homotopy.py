"""
Tests for modules/homotopy.py
"""

import pytest

from modules import mutations
from modules.checks import FAIL, run_specs
from modules.homotopy import (
    HomotopyParams,
    Realization,
    admissible_params,
    h_small,
    h_tilde,
    h_tilde_simplicial_check,
    h_tilde_telescoping_check,
    h_tilde_vertex_check,
    i_map,
    k_small,
    master_diagram_check,
    master_simplicial_check,
    master_vertex_check,
    registered_checks,
    small_vertex_check,
    t_factor,
    t_factor_vertex_check,
)
from modules.models import DVector
from modules.poly import Family, Polynomial, VarId
from modules.simplex import MonotoneMap

T = Family.T

ONE_STEP = HomotopyParams(1, 0, 1, DVector(1, (0,)))
TWO_STEP = HomotopyParams(2, 0, 2, DVector(1, (1, 2)))


class TestRealization:
    def test_defaults(self):
        r = Realization()
        assert r.to_dict() == {'h_tilde_formula': 'primary', 't_factor_reading': 'codomain'}

    @pytest.mark.parametrize("kwargs", [{'h_tilde_formula': 'other'}, {'t_factor_reading': 'other'}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            Realization(**kwargs)


class TestHomotopyParams:
    def test_label(self):
        assert ONE_STEP.label == "m=0.k=1.n=1.d=[0]"

    def test_lower(self):
        assert TWO_STEP.lower().label == "m=0.k=1.n=1.d=[1]"
        with pytest.raises(ValueError):
            HomotopyParams(1, 0, 0, DVector(1, ())).lower()

    @pytest.mark.parametrize("n,m,k,d", [
        (1, 1, 1, DVector(2, (0,))),
        (2, 0, 1, DVector(2, (0,))),
        (2, 0, 2, DVector(1, (0,))),
        (2, -1, 1, DVector(0, (0,))),
    ])
    def test_invalid(self, n, m, k, d):
        with pytest.raises(ValueError):
            HomotopyParams(n, m, k, d)

    def test_admissible_params(self, small_bounds):
        params = list(admissible_params(small_bounds))
        assert len(params) == 8
        assert all(p.n >= max(p.m + p.k, 1) for p in params)


class TestHTilde:
    def test_n1_is_identity_on_generators(self, t):
        alpha = MonotoneMap.constant(1, 0, 0)
        assert h_tilde(1).formula_image(1, VarId(T, 1, 1, (alpha,))) == t(1)

    def test_n0_rejected(self):
        with pytest.raises(ValueError):
            h_tilde(0)

    def test_unknown_formula(self):
        with pytest.raises(ValueError):
            h_tilde(2, 'other')

    def test_names(self):
        assert h_tilde(3).name == "h~(2)"
        assert h_small(3).name == "h(2)"
        assert k_small(3).name == "k(2)"

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_simplicial(self, n):
        assert h_tilde_simplicial_check(n, 2).passed

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_telescoping(self, n):
        assert h_tilde_telescoping_check(n, 2).passed

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_vertices(self, n):
        assert h_tilde_vertex_check(n, 2).passed

    def test_single_vertex_and_level(self):
        assert h_tilde_vertex_check(3, 2, i=1, level=2).passed

    @pytest.mark.parametrize("variant", ['h', 'k'])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_small_vertices(self, n, variant):
        assert small_vertex_check(n, 2, variant).passed


class TestMutationsBreakHTilde:
    def test_rho_squared(self):
        with mutations.applied('rho_squared'):
            result = h_tilde_vertex_check(3, 2)
        assert result.status == FAIL
        assert h_tilde_vertex_check(3, 2).passed

    def test_drop_summand(self):
        with mutations.applied('drop_summand'):
            result = h_tilde_vertex_check(2, 2)
        assert result.status == FAIL
        assert result.counterexample is not None


class TestTFactor:
    def test_i_map(self):
        assert i_map(0, 0, DVector(1, ())) == MonotoneMap.identity(0)
        assert i_map(0, 1, DVector(1, (1,))).values == (0,)
        assert i_map(0, 1, DVector(1, (0,))).values == (1,)
        with pytest.raises(ValueError):
            i_map(2, 1, DVector(2, ()))

    def test_invalid(self):
        beta = MonotoneMap.identity(1)
        with pytest.raises(ValueError):
            t_factor(0, 0, 1, 0, beta)
        with pytest.raises(ValueError):
            t_factor(2, 0, 1, 2, beta)
        with pytest.raises(ValueError):
            t_factor(2, 0, 2, 0, beta)
        with pytest.raises(ValueError):
            t_factor(2, 0, 1, 0, beta, 'other')

    def test_vanishes_beyond_top_vertex(self):
        beta = MonotoneMap.constant(1, 1, 0)
        assert t_factor(2, 0, 1, 1, beta) == Polynomial.zero()

    @pytest.mark.parametrize("n,m,k", [(1, 0, 1), (2, 0, 1), (2, 1, 1), (2, 0, 2), (3, 1, 2)])
    def test_vertices(self, n, m, k):
        assert t_factor_vertex_check(n, m, k, 2).passed

    def test_exponent_mutation(self):
        with mutations.applied('t_factor_exponent'):
            result = t_factor_vertex_check(1, 0, 1, 2)
        assert result.status == FAIL


class TestMaster:
    @pytest.mark.parametrize("variant", ['H', 'K'])
    def test_k0(self, variant):
        params = HomotopyParams(1, 0, 0, DVector(1, ()))
        assert master_simplicial_check(params, 1, variant).passed
        assert master_vertex_check(params, 1, variant).passed

    @pytest.mark.parametrize("variant", ['H', 'K'])
    def test_one_step(self, variant):
        assert master_simplicial_check(ONE_STEP, 1, variant).passed
        assert master_vertex_check(ONE_STEP, 1, variant).passed
        assert master_diagram_check(ONE_STEP, 1, variant).passed

    def test_check_ids(self):
        assert master_vertex_check(ONE_STEP, 1, 'K').id == "masterK.vertex.m=0.k=1.n=1.d=[0]"
        assert master_diagram_check(ONE_STEP, 1, 'H').id == "masterH.diagram.m=0.k=1.n=1.d=[0]"

    def test_exponent_mutation_breaks_vertices(self):
        with mutations.applied('t_factor_exponent'):
            result = master_vertex_check(ONE_STEP, 1, 'H')
        assert result.status == FAIL


def test_registered_checks(small_bounds):
    specs = list(registered_checks(small_bounds))
    ids = [s.id for s in specs]
    assert len(ids) == len(set(ids))
    assert all(s.suite == 'homotopy' for s in specs)
    for expected in ("h_tilde.simplicial.n=2", "h_tilde.vertex.n=2.i=1.p=2", "k_small.vertex.n=1",
                     "t_factor.vertex.m=0.k=1.n=1", "masterK.diagram.m=0.k=1.n=1.d=[0]",
                     "masterH.simplicial.m=1.k=0.n=2.d=[]"):
        assert expected in ids
    assert not any(i.startswith("masterH.diagram.m=1.k=0") for i in ids)


def test_registered_checks_pass_at_low_level(small_bounds):
    bounds = small_bounds.with_overrides(p_max=1, n_max=2, mk_max=1)
    failures = [r for r in run_specs(registered_checks(bounds)) if not r.passed]
    assert failures == []
