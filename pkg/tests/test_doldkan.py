"""
Tests for modules/doldkan.py
"""

import numpy as np
import pytest

from modules import doldkan
from modules.checks import FAIL, PASS, SKIPPED, run_specs
from modules.doldkan import (
    ZERO,
    GradedComplex,
    HomologyGroup,
    Pi0Ideal,
    TruncationError,
    WeightError,
    Z,
    assemble,
    automorphism_on_homology_check,
    boundary_check,
    can_on_homology_check,
    certify_against_oracle,
    cross_check,
    homology,
    induced_map_on_homology,
    kA_oracle,
    koszul_oracle,
    model_t_weight,
    monomial_basis,
    pi0,
    pi0_check,
    pi0_vs_h0_check,
    registered_checks,
    shuffle_check,
    sympy_check,
)
from modules.models import K_A, build, kA, kA_quotient_of_K, kA_tensor, zeta_automorphism
from modules.poly import Family, Monomial, Polynomial, VarId
from modules.salg import constant_presentation, identity_morphism, quotient_map

T = Family.T
ONE = Monomial.build()


def hand_complex(d1, d2, dims=(1, 1, 1)):
    """A complex with placeholder bases and the given boundary matrices."""
    bases = [[ONE] * d for d in dims]
    return GradedComplex("hand", 1, 0, 2, bases,
                         {1: np.array(d1, dtype=object), 2: np.array(d2, dtype=object)})


class TestBasis:
    def test_counts(self):
        gens = [VarId(T, 1, 1), VarId(T, 1, 2)]
        assert len(monomial_basis(gens, 1, 2)) == 6
        assert len(monomial_basis(gens, 1, 2, with_pi=False)) == 3
        assert len(monomial_basis(gens, 2, 3)) == 3

    def test_weight_zero(self):
        assert monomial_basis([VarId(T, 1, 1)], 1, 0) == [ONE]

    def test_model_t_weight(self):
        assert model_t_weight(kA(3)) == 3
        assert model_t_weight(kA_tensor(2, 1)) == 1
        assert model_t_weight(K_A) == 1


class TestHomologyGroup:
    @pytest.mark.parametrize("group,text", [
        (ZERO, "0"), (Z, "Z"), (HomologyGroup(2, (2,)), "Z^2 + Z/2"), (HomologyGroup(0, (3,)), "Z/3"),
    ])
    def test_text(self, group, text):
        assert str(group) == text

    def test_is_zero(self):
        assert ZERO.is_zero and not Z.is_zero
        assert Z.to_dict() == {'free_rank': 1, 'torsion': []}


class TestHandComplex:
    def test_torsion(self):
        c = hand_complex([[2]], [[0]])
        assert homology(c, 0) == HomologyGroup(0, (2,))
        assert homology(c, 1) == ZERO

    def test_truncation(self):
        c = hand_complex([[2]], [[0]])
        with pytest.raises(TruncationError):
            homology(c, 2)
        with pytest.raises(ValueError):
            homology(c, -1)

    def test_boundary_squared_nonzero(self):
        result = boundary_check(hand_complex([[1]], [[1]]))
        assert result.status == FAIL
        assert result.counterexample.level == 2


class TestAssembly:
    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("w", [0, 1, 2, 3])
    def test_kA_resolves_quotient(self, m, w):
        c = assemble(kA(m), w=w, p_max=3)
        result = certify_against_oracle(c, lambda ww, q: kA_oracle(m, ww, q), f"kA.m={m}.w={w}")
        assert result.passed

    @pytest.mark.parametrize("model", [K_A, kA_tensor(2, 1)])
    @pytest.mark.parametrize("w", [0, 1, 2])
    def test_koszul(self, model, w):
        c = assemble(model, w=w, p_max=3)
        assert certify_against_oracle(c, koszul_oracle, "koszul").passed

    def test_koszul_degree_one(self):
        assert homology(assemble(K_A, w=1, p_max=2), 1) == Z

    def test_wrong_t_weight(self):
        with pytest.raises(WeightError):
            assemble(kA(2), t_weight=1, w=1, p_max=2)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            assemble(kA(1), w=-1)

    def test_cross_check(self):
        assert cross_check(assemble(kA(2), w=2, p_max=3), 1).passed

    def test_cross_check_over_limit_is_skipped(self, monkeypatch):
        monkeypatch.setattr(doldkan, 'SYMPY_CROSS_CHECK_LIMIT', 0)
        result = cross_check(assemble(kA(2), w=2, p_max=3), 1)
        assert result.status == SKIPPED
        assert result.params == {'limit': 0}
        assert "above the sympy limit" in result.detail

    def test_sympy_check(self):
        result = sympy_check(assemble(K_A, w=2, p_max=3), "homology.sympy.K_A.w=2")
        assert result.status == PASS
        assert result.params['degrees'] == 3

    def test_sympy_check_skipped_over_limit(self, monkeypatch):
        monkeypatch.setattr(doldkan, 'SYMPY_CROSS_CHECK_LIMIT', 0)
        result = sympy_check(assemble(kA(2), w=2, p_max=3), "homology.sympy.kA.m=2.w=2")
        assert result.status == SKIPPED
        assert result.id == "homology.sympy.kA.m=2.w=2"
        assert "q=1" in result.detail

    def test_sympy_check_disagreement_fails(self, monkeypatch):
        monkeypatch.setattr(doldkan, 'sympy_invariant_factors', lambda matrix: [7])
        result = sympy_check(assemble(kA(2), w=2, p_max=3), "homology.sympy.kA.m=2.w=2")
        assert result.status == FAIL
        assert result.counterexample.rhs == "[7]"

    def test_shuffle(self):
        assert shuffle_check(kA(2), 3, 3, seed=7).passed


class TestPi0:
    def test_models(self):
        assert pi0(kA(2)).generator == Polynomial.pi_power(2)
        assert pi0(K_A).generator == Polynomial.pi_power(1)
        assert pi0(constant_presentation()).generator.is_zero()

    def test_checks(self):
        assert pi0_check(kA(3), Polynomial.pi_power(3)).passed
        assert pi0_check('const', Polynomial.zero()).passed
        assert pi0_check(kA(3), Polynomial.pi_power(2)).status == FAIL

    def test_graded_piece(self):
        ideal = Pi0Ideal(Polynomial.pi_power(2))
        assert [ideal.graded_piece(w) for w in range(4)] == [Z, Z, ZERO, ZERO]
        assert Pi0Ideal(Polynomial.pi_power(1, 2)).graded_piece(1) == HomologyGroup(0, (2,))
        assert Pi0Ideal(Polynomial.zero()).graded_piece(5) == Z
        assert str(ideal) == "(pi^2)"

    @pytest.mark.parametrize("model", [kA(1), kA(3), K_A])
    def test_agrees_with_h0(self, model):
        assert pi0_vs_h0_check(model, 3, 2).passed


class TestInducedMaps:
    def test_identity_is_iso(self):
        induced = induced_map_on_homology(identity_morphism(build(K_A)), (1, 1), 1, 1, p_max=2)
        assert induced.source == Z and induced.target == Z
        assert induced.is_iso

    def test_identity_on_h0(self):
        induced = induced_map_on_homology(identity_morphism(build(kA(2))), (2, 2), 0, 0)
        assert induced.matrix.tolist() == [[1]]

    @pytest.mark.parametrize("m_hi,m_lo", [(2, 1), (3, 1), (3, 2)])
    def test_can_projects_pi0(self, m_hi, m_lo):
        result = can_on_homology_check(m_hi, m_lo, 4, 2)
        assert result.passed
        assert result.id == f"homology.induced.can.m={m_hi}.to={m_lo}"

    def test_zeta_is_a_weak_equivalence(self):
        assert automorphism_on_homology_check(zeta_automorphism(2), 1, 2, "zeta").passed

    def test_quotient_is_not(self):
        f = quotient_map(build(K_A), build(kA_quotient_of_K(1)))
        result = automorphism_on_homology_check(f, 1, 2, "quotient")
        assert result.status == FAIL
        assert result.counterexample.level == 1
        assert result.counterexample.lhs == "Z -> 0"


def test_registered_checks(small_bounds):
    specs = list(registered_checks(small_bounds, tensor_w_max=2))
    ids = [s.id for s in specs]
    assert len(ids) == len(set(ids))
    for expected in ("homology.kA.m=1.w=0", "homology.K_A.w=2", "homology.kA_tensor.n=2.m=1.w=1",
                     "homology.pi0.const", "homology.shuffle.K_A", "homology.sympy.kA.m=2.w=3",
                     "homology.sympy.K_A.w=2"):
        assert expected in ids
    assert "homology.K_A.w=3" not in ids
    assert all(r.passed for r in run_specs(specs))
