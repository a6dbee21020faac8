"""
Hopf Module
The Hopf algebroid structure maps on K_A (source, target, comultiplication,
counit, antipode) realized on the levelwise models, their relations, and the
pure characteristic comparison at pi = 0
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

from modules import mutations
from modules.checks import CheckResult, CheckSpec, Counterexample, failed, first_failure, passed
from modules.doldkan import induced_map_on_homology
from modules.models import K_A, K_A_tensor_kA, build, kA, kA_tensor
from modules.poly import Family, Polynomial, VarId, parse_polynomial
from modules.salg import (
    ChainPresentation,
    SAlgMorphism,
    chain_morphism,
    check_morphism,
    compose_morphisms,
    constant_presentation,
    identity_morphism,
    morphisms_equal,
    specialize_morphism,
)

T, U = Family.T, Family.U

REALIZATION = {
    'nabla_bar': "t -> t(x)1 + 1(x)t",
    'iota': "t -> t - u",
    'iota_homology_codomain': "K_A at generic pi",
}


@dataclass
class HopfData:
    sigma_src: SAlgMorphism
    tau_tgt: SAlgMorphism
    nabla: SAlgMorphism
    xi: SAlgMorphism
    antipode: SAlgMorphism

    def maps(self) -> Dict[str, SAlgMorphism]:
        return {'sigma': self.sigma_src, 'tau': self.tau_tgt, 'nabla': self.nabla,
                'xi': self.xi, 'antipode': self.antipode}


@lru_cache(maxsize=None)
def build_hopf() -> HopfData:
    kA1, KA, KK = build(kA(1)), build(K_A), build(K_A_tensor_kA(2))
    return HopfData(
        sigma_src=chain_morphism(kA1, KA, {(T, 1): (T, 1)}, name="sigma"),
        tau_tgt=chain_morphism(kA1, KA, {(T, 1): (U, 1)}, name="tau"),
        nabla=chain_morphism(KA, KK, {(T, 1): (T, 1), (U, 1): (U, 2)}, name="nabla"),
        xi=chain_morphism(KA, kA1, {(T, 1): (T, 1), (U, 1): (T, 1)}, name="xi"),
        antipode=chain_morphism(KA, KA, {(T, 1): (U, 1), (U, 1): (T, 1)}, name="alpha"),
    )


@lru_cache(maxsize=None)
def _coherence_maps() -> Dict[str, SAlgMorphism]:
    """nabla (x) id, id (x) nabla, xi (x) id and id (x) xi on K_A (x)_{k_A} K_A."""
    KA, KK, KKK = build(K_A), build(K_A_tensor_kA(2)), build(K_A_tensor_kA(3))
    return {
        'nabla_id': chain_morphism(KK, KKK, {(T, 1): (T, 1), (U, 1): (U, 2), (T, 2): (T, 3), (U, 2): (U, 3)},
                                   name="nabla⊗id"),
        'id_nabla': chain_morphism(KK, KKK, {(T, 1): (T, 1), (U, 1): (U, 1), (T, 2): (T, 2), (U, 2): (U, 3)},
                                   name="id⊗nabla"),
        'xi_id': chain_morphism(KK, KA, {(T, 1): (T, 1), (U, 1): (T, 1), (T, 2): (T, 1), (U, 2): (U, 1)},
                                name="xi⊗id"),
        'id_xi': chain_morphism(KK, KA, {(T, 1): (T, 1), (U, 1): (U, 1), (T, 2): (U, 1), (U, 2): (U, 1)},
                                name="id⊗xi"),
        'sigma_left': chain_morphism(build(kA(1)), KK, {(T, 1): (T, 1)}, name="sigma_1"),
        'tau_right': chain_morphism(build(kA(1)), KK, {(T, 1): (U, 2)}, name="tau_2"),
    }


@lru_cache(maxsize=None)
def hopf_axiom_results(p_max: int) -> List[CheckResult]:
    hopf, extra = build_hopf(), _coherence_maps()
    KA, kA1 = build(K_A), build(kA(1))
    results = [f.certify(p_max).with_id(f"hopf.certify.{name}") for name, f in hopf.maps().items()]
    results += [f.certify(p_max).with_id(f"hopf.certify.{name}") for name, f in extra.items()]
    equalities: List[Tuple[str, SAlgMorphism, SAlgMorphism]] = [
        ("hopf.coassociativity", compose_morphisms(extra['nabla_id'], hopf.nabla),
         compose_morphisms(extra['id_nabla'], hopf.nabla)),
        ("hopf.counit.left", compose_morphisms(extra['xi_id'], hopf.nabla), identity_morphism(KA)),
        ("hopf.counit.right", compose_morphisms(extra['id_xi'], hopf.nabla), identity_morphism(KA)),
        ("hopf.source", compose_morphisms(hopf.nabla, hopf.sigma_src), extra['sigma_left']),
        ("hopf.target", compose_morphisms(hopf.nabla, hopf.tau_tgt), extra['tau_right']),
        ("hopf.antipode.involution", compose_morphisms(hopf.antipode, hopf.antipode), identity_morphism(KA)),
        ("hopf.antipode.sigma", compose_morphisms(hopf.antipode, hopf.sigma_src), hopf.tau_tgt),
        ("hopf.antipode.tau", compose_morphisms(hopf.antipode, hopf.tau_tgt), hopf.sigma_src),
        ("hopf.counit.sigma", compose_morphisms(hopf.xi, hopf.sigma_src), identity_morphism(kA1)),
        ("hopf.counit.tau", compose_morphisms(hopf.xi, hopf.tau_tgt), identity_morphism(kA1)),
    ]
    results += [morphisms_equal(lhs, rhs, p_max, check_id) for check_id, lhs, rhs in equalities]
    return results


def check_hopf_axioms(p_max: int) -> CheckResult:
    return first_failure("hopf.axioms", hopf_axiom_results(p_max), p_max=p_max)


# Pure characteristic

@dataclass
class PureCharData:
    kA0: ChainPresentation
    KA0: ChainPresentation
    KK0: ChainPresentation
    kk0: ChainPresentation
    iota: SAlgMorphism
    iota_iota: SAlgMorphism
    nabla_bar: SAlgMorphism
    xi_bar: SAlgMorphism
    unit: SAlgMorphism
    alpha_bar: SAlgMorphism
    swap: SAlgMorphism
    nabla: SAlgMorphism
    xi: SAlgMorphism
    antipode: SAlgMorphism


def _difference(P, p: int, v: VarId, plus: Tuple[Family, int], minus: Tuple[Family, int]) -> Polynomial:
    return P.resolve(p, v.with_chain(*plus)) - P.resolve(p, v.with_chain(*minus))


@lru_cache(maxsize=None)
def pure_char_data() -> PureCharData:
    kA0 = build(kA(1)).specialize_pi(0)
    KA0 = build(K_A).specialize_pi(0)
    KK0 = build(K_A_tensor_kA(2)).specialize_pi(0)
    kk0 = build(kA_tensor(2, 1)).specialize_pi(0)
    const0 = constant_presentation().specialize_pi(0)
    hopf = build_hopf()

    iota = SAlgMorphism("iota", kA0, KA0, lambda p, v: _difference(KA0, p, v, (T, 1), (U, 1)))
    iota_iota = SAlgMorphism("iota⊗iota", kk0, KK0,
                             lambda p, v: _difference(KK0, p, v, (T, v.a), (U, v.a)))
    nabla_bar = SAlgMorphism("nabla_bar", kA0, kk0,
                             lambda p, v: kk0.resolve(p, v.with_chain(T, 1)) + kk0.resolve(p, v.with_chain(T, 2)))
    xi_bar = SAlgMorphism("xi_bar", kA0, const0, lambda p, v: Polynomial.zero())
    alpha_bar = SAlgMorphism("alpha_bar", kA0, kA0, lambda p, v: -kA0.resolve(p, v))
    return PureCharData(
        kA0=kA0, KA0=KA0, KK0=KK0, kk0=kk0,
        iota=iota, iota_iota=iota_iota, nabla_bar=nabla_bar, xi_bar=xi_bar,
        unit=chain_morphism(const0, kA0, {}, name="unit"),
        alpha_bar=alpha_bar,
        swap=chain_morphism(kk0, kk0, {(T, 1): (T, 2), (T, 2): (T, 1)}, name="swap"),
        nabla=specialize_morphism(hopf.nabla, 0, KA0, KK0),
        xi=specialize_morphism(hopf.xi, 0, KA0, kA0),
        antipode=specialize_morphism(hopf.antipode, 0, KA0, KA0),
    )


@lru_cache(maxsize=None)
def pure_char_square_results(p_max: int) -> List[CheckResult]:
    data = pure_char_data()
    certified = [f.certify(p_max) for f in (data.iota, data.iota_iota, data.nabla_bar, data.xi_bar,
                                            data.alpha_bar, data.swap, data.nabla, data.xi, data.antipode)]
    return [
        first_failure("hopf.purechar.simplicial", certified, p_max=p_max),
        morphisms_equal(compose_morphisms(data.iota_iota, data.nabla_bar), compose_morphisms(data.nabla, data.iota),
                        p_max, "hopf.purechar.comult"),
        morphisms_equal(compose_morphisms(data.xi, data.iota), compose_morphisms(data.unit, data.xi_bar),
                        p_max, "hopf.purechar.counit"),
        morphisms_equal(compose_morphisms(data.antipode, data.iota), compose_morphisms(data.iota, data.alpha_bar),
                        p_max, "hopf.purechar.antipode"),
        morphisms_equal(compose_morphisms(data.swap, data.nabla_bar), data.nabla_bar,
                        p_max, "hopf.purechar.cocommutative"),
    ]


@lru_cache(maxsize=None)
def iota_into_generic() -> SAlgMorphism:
    """iota from k_A(1) at pi = 0 into K_A at generic pi, for the comparison on homology."""
    kA0, KA = pure_char_data().kA0, build(K_A)
    return SAlgMorphism("iota[generic]", kA0, KA, lambda p, v: _difference(KA, p, v, (T, 1), (U, 1)))


def pure_char_homology_check(w: int, degree: int, p_max: int) -> CheckResult:
    """iota induces an isomorphism on H_degree in weight w."""
    check_id = f"hopf.purechar.homology.w={w}.q={degree}"
    induced = induced_map_on_homology(iota_into_generic(), (1, 1), w, degree, p_max)
    if not induced.is_iso:
        return failed(check_id, Counterexample(degree, None, f"H_{degree} weight {w}",
                                               f"{induced.source} -> {induced.target}",
                                               str(induced.matrix.tolist())))
    return passed(check_id, w=w, degree=degree, group=str(induced.source))


def pure_char_check(p_max: int, w_max: int) -> CheckResult:
    results = list(pure_char_square_results(p_max))
    for w in range(w_max + 1):
        for q in range(p_max):
            results.append(pure_char_homology_check(w, q, p_max))
    return first_failure("hopf.purechar", results, p_max=p_max, w_max=w_max)


@lru_cache(maxsize=None)
def generic_comult() -> SAlgMorphism:
    """(iota (x) iota) o nabla_bar written at generic pi: kA(1) -> K_A (x)_{k_A} K_A, t -> t1 - u1 + t2 - u2."""
    kA1, KK = build(kA(1)), build(K_A_tensor_kA(2))

    def image(p: int, v: VarId) -> Polynomial:
        total = Polynomial.zero()
        for a in (1, 2):
            total = total + _difference(KK, p, v, (T, a), (U, a))
        return total

    return SAlgMorphism("(iota⊗iota)∘nabla_bar[generic]", kA1, KK, image)


def generic_witness_check(p_max: int) -> CheckResult:
    """
    At generic pi the comultiplication square is not simplicial; passes when the
    recorded discrepancy is nonzero and divisible by pi.
    """
    check_id = "hopf.generic.comult_witness"
    result = check_morphism(generic_comult(), max(p_max, 1))
    if result.passed:
        return failed(check_id, Counterexample(None, None, "comult square", "simplicial",
                                               "expected a discrepancy at generic pi"))
    ce = result.counterexample
    discrepancy = parse_polynomial(ce.lhs) - parse_polynomial(ce.rhs)
    if discrepancy.is_zero() or not discrepancy.divisible_by_pi():
        return failed(check_id, Counterexample(ce.level, ce.index, ce.generator, discrepancy.to_text(),
                                               "nonzero multiple of pi"))
    return passed(check_id, detail=f"{ce.generator} at level {ce.level}: {ce.lhs} vs {ce.rhs}",
                  discrepancy=discrepancy.to_text())


def registered_checks(bounds, tensor_w_max: int = 4) -> Iterator[CheckSpec]:
    p_max = bounds.p_max
    for name in ('sigma', 'tau', 'nabla', 'xi', 'antipode'):
        yield CheckSpec(f"hopf.certify.{name}", 'hopf', "Hopf algebroid structure maps",
                        lambda name=name: build_hopf().maps()[name].certify(p_max))
    axiom_ids = ("hopf.coassociativity", "hopf.counit.left", "hopf.counit.right", "hopf.source", "hopf.target",
                 "hopf.antipode.involution", "hopf.antipode.sigma", "hopf.antipode.tau",
                 "hopf.counit.sigma", "hopf.counit.tau")
    for check_id in axiom_ids:
        yield CheckSpec(check_id, 'hopf', "Hopf algebroid relations",
                        lambda check_id=check_id: _pick(hopf_axiom_results(p_max), check_id))
    for check_id in ("hopf.purechar.simplicial", "hopf.purechar.comult", "hopf.purechar.counit",
                     "hopf.purechar.antipode", "hopf.purechar.cocommutative"):
        yield CheckSpec(check_id, 'hopf', "pure characteristic comparison",
                        lambda check_id=check_id: _pick(pure_char_square_results(p_max), check_id))
    for w in range(min(bounds.w_max, tensor_w_max) + 1):
        for q in range(p_max):
            yield CheckSpec(f"hopf.purechar.homology.w={w}.q={q}", 'hopf', "iota is an equivalence",
                            lambda w=w, q=q: pure_char_homology_check(w, q, p_max))
    yield CheckSpec("hopf.generic.comult_witness", 'hopf', "comultiplication square at generic pi",
                    lambda: generic_witness_check(p_max))


def _pick(results: List[CheckResult], check_id: str) -> CheckResult:
    for result in results:
        if result.id == check_id:
            return result
    raise KeyError(check_id)


for _cached in (build_hopf, _coherence_maps, hopf_axiom_results, pure_char_data, pure_char_square_results,
                iota_into_generic, generic_comult):
    mutations.register_cache(_cached.cache_clear)
