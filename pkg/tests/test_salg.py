"""
Tests for modules/salg.py
"""

import json

import pytest

from modules.checks import FAIL
from modules.models import K_A, build, can_map, kA, kA_tensor, zeta_automorphism, K_A_tensor_A
from modules.poly import Family, Polynomial, VarId
from modules.salg import (
    BAR_DEGENERACY_RULE,
    BAR_FACE_RULE,
    Chain,
    ChainPresentation,
    IndexRule,
    PresentationError,
    SAlgMorphism,
    SimplexTensor,
    UnknownVariableError,
    check_declared,
    check_label_independence,
    check_morphism,
    check_presentation,
    check_same_levels,
    compose_chain,
    compose_morphisms,
    constant_presentation,
    dump_presentation,
    eval_morphism,
    identity_morphism,
    label_morphism,
    load_presentation,
    morphisms_equal,
    presentation_from_dict,
    quotient,
    registered_checks,
    simplex_tensor,
    tensor_over_A,
    vertex_restriction,
)
from modules.simplex import MonotoneMap, delta

T, U = Family.T, Family.U
PI = Polynomial.pi_power(1)


def tv(j, a=1, *labels):
    return Polynomial.var(VarId(T, j, a, tuple(labels)))


class TestChainPresentation:
    def test_kA_levels(self):
        P = build(kA(2))
        assert P.free_generators(0) == ()
        assert P.free_generators(2) == (VarId(T, 1, 1), VarId(T, 2, 1))
        assert P.resolve(1, VarId(T, 0, 1)) == PI ** 2
        assert P.resolve(1, VarId(T, 2, 1)).is_zero()

    def test_faces(self):
        P = build(kA(2))
        assert P.face(1, 0, tv(1)) == PI ** 2
        assert P.face(1, 1, tv(1)).is_zero()
        assert P.face(2, 1, tv(2)) == tv(1)

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            build(kA(1)).resolve(1, VarId(T, 3, 1))
        with pytest.raises(UnknownVariableError):
            build(kA(1)).resolve(1, VarId(U, 1, 1))

    def test_duplicate_chain(self):
        with pytest.raises(PresentationError):
            ChainPresentation("bad", [Chain(T, 1, PI), Chain(T, 1, PI)])

    def test_cyclic_identification(self):
        with pytest.raises(PresentationError):
            ChainPresentation("bad", [Chain(T, 1, PI), Chain(U, 1, PI)], {(T, 1): (U, 1), (U, 1): (T, 1)})

    def test_face_out_of_range(self):
        with pytest.raises(ValueError):
            build(kA(1)).face_generator(0, 0, VarId(T, 1, 1))


class TestCheckPresentation:
    @pytest.mark.parametrize("P", [build(kA(2)), constant_presentation(), build(K_A_tensor_A(2))],
                             ids=["kA(2)", "const", "K_A^2"])
    def test_passes(self, P):
        assert check_presentation(P, 3).passed

    def test_broken_degeneracy_is_caught(self):
        class Broken(ChainPresentation):
            def _degeneracy(self, p, i, v):
                return super()._degeneracy(p, i, v) + 1

        result = check_presentation(Broken("broken", [Chain(T, 1, PI)]), 3)
        assert result.status == FAIL
        assert result.counterexample is not None


class TestTensor:
    def test_kA_squared(self):
        P = tensor_over_A(build(kA(2)), build(kA(2)))
        assert P.free_generators(1) == (VarId(T, 1, 1), VarId(T, 1, 2))
        assert check_same_levels(P, build(kA_tensor(2, 2)), 3, "same").passed

    def test_unit(self):
        P = build(kA(2))
        assert check_same_levels(P, tensor_over_A(P, constant_presentation()), 3, "unit").passed

    def test_K_A(self):
        k = build(kA(1))
        P = tensor_over_A(k, k, shift=0, families={T: U})
        assert P.free_generators(1) == (VarId(T, 1, 1), VarId(U, 1, 1))

    def test_collision(self):
        k = build(kA(1))
        with pytest.raises(PresentationError):
            tensor_over_A(k, k, shift=0)

    def test_quotient_conflict(self):
        P = quotient(build(K_A), {(U, 1): (T, 1)}, "diag")
        with pytest.raises(PresentationError):
            quotient(P, {(U, 1): (U, 1)}, "again")


class TestSimplexTensor:
    def test_delta_zero(self):
        P = build(kA(2))
        S = simplex_tensor(0, P)
        assert len(S.free_generators(2)) == len(P.free_generators(2))
        assert check_presentation(S, 3).passed

    def test_label_count(self):
        assert len(simplex_tensor(1, build(kA(2))).free_generators(1)) == 3

    def test_face_on_labelled_generator(self):
        S = simplex_tensor(1, build(kA(2)))
        alpha = MonotoneMap(1, 1, (0, 1))
        assert S.face(1, 0, tv(1, 1, alpha)) == PI ** 2

    def test_simplicial(self):
        assert check_presentation(simplex_tensor(2, build(kA(1))), 3).passed

    def test_negative_dimension(self):
        with pytest.raises(ValueError):
            SimplexTensor(-1, build(kA(1)))

    def test_missing_label(self):
        with pytest.raises(UnknownVariableError):
            simplex_tensor(1, build(kA(1))).resolve(1, VarId(T, 1, 1))


class TestMorphisms:
    def test_eval_can(self):
        f = can_map(2, 1)
        assert eval_morphism(f, 1, tv(1)) == PI * tv(1)

    def test_eval_alias_consistent(self):
        assert eval_morphism(can_map(2, 1), 1, Polynomial.var(VarId(T, 0, 1))) == PI ** 2

    def test_identity(self):
        P = build(kA(2))
        x = PI * tv(1) * tv(2) - 3
        assert eval_morphism(identity_morphism(P), 2, x) == x
        assert check_morphism(identity_morphism(P), 3).passed

    def test_eval_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            eval_morphism(can_map(2, 1), 1, Polynomial.var(VarId(U, 1, 1)))

    def test_certificates_are_kept(self):
        f = can_map(3, 1, 2)
        assert f.certify(3).passed
        assert set(f.certificates) == {'well_defined', 'simplicial'}

    def test_corrupted_can_fails(self):
        dom, cod = build(kA(2)), build(kA(1))
        clean = can_map(2, 1)
        f = SAlgMorphism("corrupt", dom, cod,
                         lambda p, v: clean.formula(p, v) + (1 if 1 <= v.j <= p else 0))
        result = check_morphism(f, 3)
        assert result.status == FAIL
        assert result.counterexample.level is not None

    def test_can_compose(self):
        composite = compose_morphisms(can_map(2, 1), can_map(3, 2))
        assert morphisms_equal(composite, can_map(3, 1), 4).passed

    def test_right_identity(self):
        f = can_map(2, 1)
        assert morphisms_equal(compose_morphisms(f, identity_morphism(f.domain)), f, 3).passed

    def test_zeta_two_squared(self):
        z = zeta_automorphism(2)
        assert morphisms_equal(compose_morphisms(z, z), identity_morphism(z.domain), 3).passed

    def test_endpoint_mismatch(self):
        with pytest.raises(ValueError):
            compose_morphisms(can_map(2, 1), can_map(2, 1))

    def test_compose_chain_names_fresh_object(self):
        f = can_map(2, 1)
        named = compose_chain(f, name="renamed")
        assert named.name == "renamed"
        assert f.name == "can(2,1)^1"

    def test_compose_chain_empty(self):
        with pytest.raises(ValueError):
            compose_chain()


class TestVertexRestriction:
    def test_label_independent(self):
        assert check_label_independence(build(kA(2)), 2, 3, "vertex").passed

    def test_label_morphism_is_simplicial(self):
        assert label_morphism(delta(1, 0), build(kA(2))).certify(3).passed

    def test_out_of_range(self):
        f = label_morphism(MonotoneMap.constant(1, 0, 0), build(kA(1)))
        with pytest.raises(ValueError):
            vertex_restriction(f, 2)

    def test_not_simplex_tensored(self):
        with pytest.raises(ValueError):
            vertex_restriction(can_map(2, 1), 0)


class TestDeclarative:
    def test_yaml_file(self, repo_root):
        P = load_presentation(repo_root / "config" / "presentations" / "kA2.yaml")
        assert check_same_levels(P, build(kA(2)), 3, "declarative").passed

    def test_json_file(self, repo_root):
        P = load_presentation(repo_root / "config" / "presentations" / "K_A.json")
        assert check_same_levels(P, build(K_A), 3, "declarative").passed

    def test_simplex_key(self, tmp_path):
        path = tmp_path / "delta.yaml"
        path.write_text("name: d\nsimplex: 1\nchains:\n  - {family: t, factor: 1, low: pi}\n", encoding='utf-8')
        P = load_presentation(path)
        assert isinstance(P, SimplexTensor) and P.l == 1

    def test_declared_file_is_certified(self, tmp_path, repo_root):
        assert check_declared(repo_root / "config" / "presentations" / "kA2.yaml", build(kA(2)), 3, "kA2").passed
        path = tmp_path / "flat.yaml"
        path.write_text("name: flat\nfaces: j\ndegeneracies: j\nchains:\n  - {family: t, factor: 1, low: pi}\n",
                        encoding='utf-8')
        assert check_declared(path, build(kA(1)), 2, "flat").status == FAIL

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_presentation(tmp_path / "nope.yaml")

    @pytest.mark.parametrize("data", [
        {},
        {'chains': [{'family': 'x', 'factor': 1}]},
        {'chains': [{'family': 't'}]},
        {'chains': [{'family': 't', 'factor': 1}], 'identifications': [{'from': ['t', 1]}]},
        {'chains': [{'family': 't', 'factor': 1}], 'faces': 'k + j'},
        {'chains': [{'family': 't', 'factor': 1, 'degeneracies': 'j +'}]},
    ])
    def test_malformed(self, data):
        with pytest.raises(PresentationError):
            presentation_from_dict(data)

    def test_dump_is_json_ready(self):
        dumped = dump_presentation(build(kA(1)), 2)
        assert json.loads(json.dumps(dumped)) == dumped
        assert dumped['levels'][1]['free'] == ["t[1,1]"]
        assert dumped['levels'][1]['faces']['d0'] == {"t[1,1]": "pi"}


REVERSED_FACES = "Piecewise((j, j <= p - i), (j - 1, True))"
REVERSED_DEGENERACIES = "Piecewise((j, j <= p - i), (j + 1, True))"


def ruled(faces, degeneracies, low="pi"):
    return presentation_from_dict({'name': "ruled", 'faces': faces, 'degeneracies': degeneracies,
                                   'chains': [{'family': 't', 'factor': 1, 'low': low}]})


class TestIndexRules:
    def test_bar_rules_reproduce_the_model(self):
        P = ruled(BAR_FACE_RULE, BAR_DEGENERACY_RULE, low="pi^2")
        assert check_presentation(P, 3).passed
        assert check_same_levels(P, build(kA(2)), 3, "bar").passed

    def test_evaluation(self):
        rule = IndexRule(BAR_FACE_RULE)
        assert [rule(2, 1, j) for j in range(4)] == [0, 1, 1, 2]
        assert IndexRule("p - j")(3, 0, 1) == 2
        assert IndexRule(BAR_FACE_RULE) == IndexRule(BAR_FACE_RULE)

    def test_reversed_rules_are_simplicial(self):
        P = ruled(REVERSED_FACES, REVERSED_DEGENERACIES)
        assert check_presentation(P, 3).passed
        t1 = VarId(Family.T, 1, 1)
        assert P.face_generator(1, 0, t1) == Polynomial.zero()
        assert P.face_generator(1, 1, t1) == Polynomial.pi_power(1)

    def test_constant_index_is_not_simplicial(self):
        result = check_presentation(ruled("j", "j"), 2)
        assert result.status == FAIL
        assert result.counterexample.generator.startswith("d2s0")

    def test_per_chain_rule(self):
        P = presentation_from_dict({'chains': [
            {'family': 't', 'factor': 1, 'low': "pi"},
            {'family': 'u', 'factor': 1, 'low': "pi",
             'faces': REVERSED_FACES, 'degeneracies': REVERSED_DEGENERACIES},
        ]})
        assert P.face_generator(1, 0, VarId(Family.T, 1, 1)) == Polynomial.pi_power(1)
        assert P.face_generator(1, 0, VarId(Family.U, 1, 1)) == Polynomial.zero()
        assert check_presentation(P, 2).passed

    @pytest.mark.parametrize("faces", ["j / 2", "j + 5"])
    def test_bad_values(self, faces):
        P = ruled(faces, BAR_DEGENERACY_RULE)
        with pytest.raises(PresentationError):
            P.face_generator(1, 0, VarId(Family.T, 1, 1))

    def test_unknown_symbol(self):
        with pytest.raises(PresentationError):
            IndexRule("q + j")


def test_registered_checks(small_bounds, repo_root):
    presentations = {'kA(2)': build(kA(2))}
    declarative = {'kA2': (repo_root / "config" / "presentations" / "kA2.yaml", build(kA(2)))}
    specs = list(registered_checks(small_bounds, presentations, declarative, l_max=1))
    ids = {s.id for s in specs}
    assert {"salg.presentation.const", "salg.identity.kA(2)", "salg.declarative.kA2"} <= ids
    assert all(s.run().passed for s in specs)
