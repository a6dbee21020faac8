"""
Tests for modules/models.py
"""

import pytest

from modules import mutations
from modules.checks import FAIL
from modules.models import (
    K_A,
    DVector,
    ModelId,
    aux_diagrams_check,
    all_model_ids,
    build,
    can_map,
    check_can,
    check_can_composition,
    check_composite_f_vs_g,
    check_f_vs_g,
    check_model,
    check_rho,
    check_skip,
    check_zeta,
    enumerate_d_vectors,
    f_aux_diagram,
    f_composite,
    factor_count,
    g_composite,
    incl_factor,
    kA,
    kA_tensor,
    registered_checks,
    rho_action,
    rho_power,
    rho_table,
    varrho_table,
)
from modules.poly import Family, Polynomial, VarId

T = Family.T
PI = Polynomial.pi_power(1)


class TestModelId:
    @pytest.mark.parametrize("text", ["kA(2)", "kA_tensor(3,1)", "K_A", "K_A_tensor_kA(3)", "BarAtA"])
    def test_text_round_trip(self, text):
        assert str(ModelId.parse(text)) == text

    def test_canonical_forms(self):
        assert kA_tensor(1, 3) == kA(3)
        assert ModelId('K_A_tensor_A', (1,)) == K_A
        assert ModelId('K_A_tensor_A_kAe', (0,)) == K_A

    @pytest.mark.parametrize("kind,params", [("nope", ()), ("kA", ()), ("kA", (0,)), ("kA_tensor", (0, 1))])
    def test_invalid(self, kind, params):
        with pytest.raises(ValueError):
            ModelId(kind, params)

    def test_parse_garbage(self):
        with pytest.raises(ValueError):
            ModelId.parse("kA(2")

    def test_all_model_ids_unique(self):
        ids = all_model_ids()
        assert len(ids) == len(set(ids))
        assert kA(4) in ids and kA_tensor(3, 4) in ids


class TestBuild:
    def test_bar_construction_level_zero(self):
        assert build(ModelId('BarAtA')).free_generators(0) == (VarId(T, 0, 1),)

    def test_kA_boundary(self):
        assert build(kA(3)).resolve(2, VarId(T, 0, 1)) == PI ** 3

    def test_factor_count(self):
        assert factor_count(build(kA_tensor(3, 2))) == 3

    @pytest.mark.parametrize("model", ["kA(2)", "kA_tensor(2,2)", "K_A", "K_A_tensor_kA(2)",
                                       "kA_quotient_of_K(2)", "kA_diagonal_of_K(2)",
                                       "K_A_tensor_A_kAe(2)", "kAe_tensor_A_K_A(1)"])
    def test_simplicial(self, model):
        assert check_model(ModelId.parse(model), 3).passed


class TestTables:
    def test_rho(self):
        assert rho_table(3) == {1: 2, 2: 3, 3: 1}
        assert rho_power(3, 2, 1) == 3
        assert rho_power(3, 3, 2) == 2

    def test_rho_invalid(self):
        with pytest.raises(ValueError):
            rho_table(0)

    def test_varrho(self):
        assert varrho_table(3) == {0: 1, 1: 2, 2: 3, 3: 1}

    def test_varrho_mutation(self):
        with mutations.applied('varrho_fixed_point'):
            assert varrho_table(3)[3] == 3
        assert varrho_table(3)[3] == 1


class TestCan:
    def test_formula(self):
        f = can_map(3, 1, 2)
        assert f.assignment(1, VarId(T, 1, 2)) == PI ** 2 * Polynomial.var(VarId(T, 1, 2))

    @pytest.mark.parametrize("m_hi,m_lo,n", [(1, 1, 1), (2, 1, 1), (4, 2, 2), (3, 1, 3)])
    def test_simplicial(self, m_hi, m_lo, n):
        assert check_can(m_hi, m_lo, n, 3).passed

    def test_invalid(self):
        with pytest.raises(ValueError):
            can_map(1, 2)

    def test_composition(self):
        assert check_can_composition(2, 3).passed

    def test_corrupted_can_fails(self):
        with mutations.applied('corrupt_can'):
            result = check_can(2, 1, 1, 3)
        assert result.status == FAIL
        assert result.counterexample.lhs != result.counterexample.rhs
        assert check_can(2, 1, 1, 3).passed


class TestActions:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_rho(self, n):
        assert check_rho(n, 3).passed

    def test_rho_on_generators(self):
        f = rho_action(3, 1, kA_tensor(3, 1))
        assert f.assignment(1, VarId(T, 1, 3)) == Polynomial.var(VarId(T, 1, 1))

    def test_rho_wrong_model(self):
        with pytest.raises(ValueError):
            rho_action(2, 1, kA_tensor(3, 1))

    def test_incl(self):
        f = incl_factor(3, 2)
        assert f.assignment(1, VarId(T, 1, 1)) == Polynomial.var(VarId(T, 1, 2))
        with pytest.raises(ValueError):
            incl_factor(3, 4)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_zeta(self, n):
        assert check_zeta(n, 2).passed


class TestSkipMaps:
    @pytest.mark.parametrize("c", [1, 2, 3])
    def test_skip(self, c):
        assert check_skip(c, 2).passed

    @pytest.mark.parametrize("c,r", [(1, 0), (1, 1), (2, 1), (3, 2)])
    def test_f_vs_g(self, c, r):
        assert check_f_vs_g(c, r, 2).passed

    def test_composite_f_vs_g(self):
        for d in enumerate_d_vectors(1, 2):
            assert check_composite_f_vs_g(1, 3, d, 2).passed

    def test_composite_identity(self):
        d = DVector(2, ())
        assert f_composite(2, 2, d).name.startswith("id[")
        assert g_composite(2, 2, d).name.startswith("id[")

    def test_composite_order(self):
        with pytest.raises(ValueError):
            f_composite(3, 2, DVector(3, ()))

    def test_varrho_mutation_breaks_skip(self):
        with mutations.applied('varrho_fixed_point'):
            result = check_skip(2, 2)
        assert result.status == FAIL

    def test_r_out_of_range(self):
        with pytest.raises(ValueError):
            check_f_vs_g(2, 3, 2)


class TestDVector:
    def test_validation(self):
        with pytest.raises(ValueError):
            DVector(1, (2,))

    def test_access(self):
        d = DVector(2, (1, 3))
        assert d[3] == 3 and d.stop == 4
        assert str(d.restrict(3, 3)) == "[3]"
        with pytest.raises(ValueError):
            d[4]

    def test_enumeration(self):
        assert len(enumerate_d_vectors(1, 3)) == 2 * 3 * 4


class TestAuxDiagrams:
    @pytest.mark.parametrize("c", [1, 2])
    def test_commute(self, c):
        assert aux_diagrams_check(c, 2).passed

    def test_witness_squares_recorded(self):
        diagram = f_aux_diagram(2)
        assert diagram.witnesses


def test_registered_checks(small_bounds):
    specs = list(registered_checks(small_bounds))
    ids = [s.id for s in specs]
    assert len(ids) == len(set(ids))
    assert "models.presentation.kA(4)" in ids
    assert "models.aux.c=2" in ids
    assert "models.composite_f_vs_g.a=1.b=2.d=[0]" in ids
    assert all(s.suite == 'models' for s in specs)
