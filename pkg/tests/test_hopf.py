"""
Tests for modules/hopf.py
"""

import pytest

from modules.checks import run_specs
from modules.hopf import (
    build_hopf,
    check_hopf_axioms,
    generic_witness_check,
    hopf_axiom_results,
    pure_char_check,
    pure_char_data,
    pure_char_homology_check,
    pure_char_square_results,
    registered_checks,
)
from modules.poly import Family, Polynomial, VarId

T, U = Family.T, Family.U


class TestStructureMaps:
    def test_generators(self):
        hopf = build_hopf()
        t1 = VarId(T, 1, 1)
        assert hopf.sigma_src.assignment(1, t1) == Polynomial.var(t1)
        assert hopf.tau_tgt.assignment(1, t1) == Polynomial.var(VarId(U, 1, 1))
        assert hopf.antipode.assignment(1, VarId(U, 1, 1)) == Polynomial.var(t1)

    @pytest.mark.parametrize("name", ['sigma', 'tau', 'nabla', 'xi', 'antipode'])
    def test_simplicial(self, name):
        assert build_hopf().maps()[name].certify(2).passed

    def test_axioms(self):
        failures = [r for r in hopf_axiom_results(2) if not r.passed]
        assert failures == []
        assert check_hopf_axioms(2).passed


class TestPureCharacteristic:
    def test_squares(self):
        results = pure_char_square_results(2)
        assert [r.id for r in results] == ["hopf.purechar.simplicial", "hopf.purechar.comult",
                                           "hopf.purechar.counit", "hopf.purechar.antipode",
                                           "hopf.purechar.cocommutative"]
        assert all(r.passed for r in results)

    def test_specialized_presentations(self):
        data = pure_char_data()
        assert data.kA0.pi_value == 0
        assert data.iota.codomain is data.KA0

    @pytest.mark.parametrize("w,q", [(0, 0), (1, 0), (1, 1), (2, 1)])
    def test_iota_on_homology(self, w, q):
        assert pure_char_homology_check(w, q, 2).passed

    def test_combined_check_leaves_cache_alone(self):
        assert pure_char_check(2, 1).passed
        assert len(pure_char_square_results(2)) == 5


def test_generic_comultiplication_witness():
    result = generic_witness_check(2)
    assert result.passed
    assert 'pi' in result.params['discrepancy']


def test_registered_checks(small_bounds):
    specs = list(registered_checks(small_bounds, tensor_w_max=2))
    ids = [s.id for s in specs]
    assert len(ids) == len(set(ids))
    for expected in ("hopf.certify.nabla", "hopf.coassociativity", "hopf.purechar.comult",
                     "hopf.purechar.homology.w=2.q=1", "hopf.generic.comult_witness"):
        assert expected in ids
    assert all(r.passed for r in run_specs(specs))
