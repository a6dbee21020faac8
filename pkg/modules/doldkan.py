"""
Dold-Kan Module
Weight-graded pieces of the unnormalized chain complex of a presentation,
their integer homology through Smith normal form, pi_0 of a model and the
maps induced on homology by a morphism
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from modules.checks import (
    FAIL,
    SKIPPED,
    CheckResult,
    CheckSpec,
    Counterexample,
    failed,
    first_failure,
    passed,
    skipped,
)
from modules.models import K_A, K_A_tensor_A, ModelId, build, can_map, kA, kA_tensor, rho_action, zeta_automorphism
from modules.poly import Monomial, Polynomial, weight
from modules.salg import Presentation, SAlgMorphism, constant_presentation
from modules.smith import invariant_factors, smith_normal_form, sympy_invariant_factors

# larger boundary matrices are not re-checked through sympy
SYMPY_CROSS_CHECK_LIMIT = 120


class WeightError(ValueError):
    """A face or a morphism does not preserve the weight grading."""


class TruncationError(ValueError):
    """Homology requested in a degree the truncated complex does not certify."""


def model_t_weight(model: ModelId) -> int:
    """t_weight = m for the k_A(m) family, 1 for the K_A family and the bar construction."""
    if model.kind == 'kA':
        return model.params[0]
    if model.kind == 'kA_tensor':
        return model.params[1]
    return 1


@dataclass
class GradedComplex:
    """
    The weight-w piece of the unnormalized chain complex, levels 0..p_max.

    boundaries[q] is the matrix of sum_i (-1)^i d_i from level q to level q-1
    (rows: bases[q-1], columns: bases[q]).
    """

    name: str
    t_weight: int
    w: int
    p_max: int
    bases: List[List[Monomial]]
    boundaries: Dict[int, np.ndarray] = field(default_factory=dict)
    presentation: Optional[Presentation] = None

    def dim(self, q: int) -> int:
        return len(self.bases[q])

    def boundary(self, q: int) -> np.ndarray:
        """d_q; d_0 is the zero map to the zero module."""
        if q == 0:
            return np.zeros((0, self.dim(0)), dtype=object)
        return self.boundaries[q]

    def index(self, q: int) -> Dict[Monomial, int]:
        return {mono: i for i, mono in enumerate(self.bases[q])}


def monomial_basis(gens: Sequence, t_weight: int, w: int, with_pi: bool = True) -> List[Monomial]:
    """Every monomial of weight w: each generator weighs t_weight, pi weighs 1 (when present)."""
    basis = []
    for count in range(w // t_weight + 1):
        rest = w - count * t_weight
        if rest and not with_pi:
            continue
        for combo in itertools.combinations_with_replacement(gens, count):
            exponents: Dict = {}
            for g in combo:
                exponents[g] = exponents.get(g, 0) + 1
            basis.append(Monomial.build(rest, exponents))
    return sorted(basis, key=Monomial.order_key)


def _as_vector(poly: Polynomial, index: Dict[Monomial, int], t_weight: int, w: int, where: str) -> np.ndarray:
    vector = np.zeros(len(index), dtype=object)
    for mono, coeff in poly.items():
        if weight(mono, t_weight) != w or mono not in index:
            raise WeightError(f"{where}: term {mono.to_text()} has weight {weight(mono, t_weight)}, expected {w}")
        vector[index[mono]] += coeff
    return vector


def assemble_presentation(P: Presentation, t_weight: int, w: int, p_max: int,
                          shuffle_seed: Optional[int] = None, name: Optional[str] = None) -> GradedComplex:
    """
    Assemble the weight-w complex of any presentation.

    Raises:
        WeightError: If a face sends a basis monomial outside weight w
    """
    if t_weight < 1:
        raise ValueError(f"t_weight must be positive, got {t_weight}")
    if w < 0 or p_max < 0:
        raise ValueError(f"Weight and p_max must be non-negative, got w={w}, p_max={p_max}")
    with_pi = P.pi_value is None
    bases = [monomial_basis(P.free_generators(q), t_weight, w, with_pi) for q in range(p_max + 1)]
    if shuffle_seed is not None:
        rng = np.random.default_rng(shuffle_seed)
        bases = [[basis[i] for i in rng.permutation(len(basis))] for basis in bases]
    complex_ = GradedComplex(name or P.name, t_weight, w, p_max, bases, presentation=P)
    for q in range(1, p_max + 1):
        target = complex_.index(q - 1)
        matrix = np.zeros((len(bases[q - 1]), len(bases[q])), dtype=object)
        for col, mono in enumerate(bases[q]):
            x = Polynomial({mono: 1})
            for i in range(q + 1):
                face = P.face(q, i, x)
                column = _as_vector(face, target, t_weight, w, f"{P.name}: d{i} {mono.to_text()} at level {q}")
                matrix[:, col] = matrix[:, col] + (column if i % 2 == 0 else -column)
        complex_.boundaries[q] = matrix
    return complex_


def assemble(model: Union[ModelId, Presentation], t_weight: Optional[int] = None, w: int = 0, p_max: int = 4,
             shuffle_seed: Optional[int] = None) -> GradedComplex:
    """The weight-w complex of a built-in model (t_weight defaults to the model's own)."""
    if isinstance(model, ModelId):
        P = build(model)
        t_weight = t_weight or model_t_weight(model)
    else:
        P = model
        t_weight = t_weight or 1
    return assemble_presentation(P, t_weight, w, p_max, shuffle_seed)


def boundary_check(c: GradedComplex, check_id: Optional[str] = None) -> CheckResult:
    """d_q o d_{q+1} = 0 for every q."""
    check_id = check_id or f"homology.boundary.{c.name}.w={c.w}"
    for q in range(1, c.p_max):
        product = c.boundary(q).dot(c.boundary(q + 1))
        nonzero = np.argwhere(product != 0)
        if len(nonzero):
            row, col = nonzero[0]
            return failed(check_id, Counterexample(q + 1, None, c.bases[q + 1][col].to_text(),
                                                   str(product[row, col]), "0"),
                          detail=f"d{q} d{q + 1} != 0")
    return passed(check_id, w=c.w, p_max=c.p_max)


@dataclass(frozen=True)
class HomologyGroup:
    """Z^free_rank plus the cyclic torsion summands Z/d."""

    free_rank: int
    torsion: Tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}" if self.free_rank > 1 else "Z"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"

    def to_dict(self) -> dict:
        return {'free_rank': self.free_rank, 'torsion': list(self.torsion)}


ZERO = HomologyGroup(0)
Z = HomologyGroup(1)


def _require_certified(c: GradedComplex, degree: int):
    if degree < 0:
        raise ValueError(f"Negative homology degree: {degree}")
    if degree + 1 > c.p_max:
        raise TruncationError(f"H_{degree} of {c.name} needs level {degree + 1}, complex stops at {c.p_max}")


def homology(c: GradedComplex, degree: int) -> HomologyGroup:
    """
    H_degree = ker d_degree / im d_{degree+1}.

    Raises:
        TruncationError: If degree + 1 > p_max
    """
    _require_certified(c, degree)
    rank_out = smith_normal_form(c.boundary(degree)).rank
    incoming = smith_normal_form(c.boundary(degree + 1))
    return HomologyGroup(c.dim(degree) - rank_out - incoming.rank, tuple(incoming.torsion))


def cross_check(c: GradedComplex, degree: int, check_id: Optional[str] = None) -> CheckResult:
    """Invariant factors of the incoming boundary agree with sympy's (small matrices only)."""
    _require_certified(c, degree)
    check_id = check_id or f"homology.sympy.{c.name}.w={c.w}.q={degree}"
    matrix = c.boundary(degree + 1)
    if max(matrix.shape) > SYMPY_CROSS_CHECK_LIMIT:
        return skipped(check_id, detail=f"{matrix.shape[0]}x{matrix.shape[1]} matrix above the sympy limit",
                       limit=SYMPY_CROSS_CHECK_LIMIT)
    ours, theirs = invariant_factors(matrix), sympy_invariant_factors(matrix)
    if ours != theirs:
        return failed(check_id, Counterexample(degree + 1, None, f"d{degree + 1}", str(ours), str(theirs)))
    return passed(check_id, w=c.w)


# pi_0

@dataclass(frozen=True)
class Pi0Ideal:
    """A principal ideal of Z[pi], given by its generator (0 for the zero ideal)."""

    generator: Polynomial

    def __str__(self) -> str:
        return f"({self.generator.to_text()})"

    def graded_piece(self, w: int) -> HomologyGroup:
        """The weight-w piece of Z[pi]/(generator), for a monomial generator c*pi^e."""
        if self.generator.is_zero():
            return Z
        coefficients = self.generator.pi_coefficients()
        if len(coefficients) != 1:
            raise ValueError(f"{self} is not generated by a monomial")
        (e, coeff), = coefficients.items()
        if w < e:
            return Z
        return HomologyGroup(0, (abs(coeff),)) if abs(coeff) > 1 else ZERO


_PI_SYMBOL = sympy.Symbol('pi')


def _to_sympy(poly: Polynomial):
    return sum((c * _PI_SYMBOL ** e for e, c in poly.pi_coefficients().items()), sympy.Integer(0))


def _from_sympy(expr) -> Polynomial:
    result = Polynomial.zero()
    for (e,), c in sympy.Poly(expr, _PI_SYMBOL).terms():
        result = result + Polynomial.pi_power(e, int(c))
    return result


def pi0(model: Union[ModelId, Presentation]) -> Pi0Ideal:
    """
    The ideal generated by d_0(g) - d_1(g), g running over the level-1 generators.

    Raises:
        ValueError: If a difference involves a variable (level 0 is not Z[pi])
    """
    P = build(model) if isinstance(model, ModelId) else model
    generator = sympy.Integer(0)
    for g in P.free_generators(1):
        x = Polynomial.var(g)
        difference = P.face(1, 0, x) - P.face(1, 1, x)
        if not difference.is_pi_only():
            raise ValueError(f"{P.name}: d0 - d1 of {g} is {difference.to_text()}, not a polynomial in pi")
        generator = sympy.gcd(generator, _to_sympy(difference))
    if generator == 0:
        return Pi0Ideal(Polynomial.zero())
    return Pi0Ideal(_from_sympy(generator))


# Induced maps on homology

@dataclass
class _HomologyCoordinates:
    """Kernel and homology coordinates of one degree of a complex."""

    rank_out: int
    V: np.ndarray
    V_inv: np.ndarray
    inner_rank: int
    inner_U: np.ndarray
    inner_U_inv: np.ndarray
    torsion: Tuple[int, ...]

    @property
    def kernel_dim(self) -> int:
        return self.V.shape[1] - self.rank_out

    @property
    def free_rank(self) -> int:
        return self.kernel_dim - self.inner_rank

    def free_generators(self) -> List[np.ndarray]:
        """Cycles (as chain vectors) whose classes form a basis of the free part."""
        kernel = self.V[:, self.rank_out:]
        return [kernel.dot(self.inner_U_inv[:, j]) for j in range(self.inner_rank, self.kernel_dim)]

    def free_coordinates(self, cycle: np.ndarray) -> np.ndarray:
        y = self.V_inv.dot(cycle)
        if (y[:self.rank_out] != 0).any():
            raise ValueError("Vector is not a cycle")
        return self.inner_U.dot(y[self.rank_out:])[self.inner_rank:]


def _coordinates(c: GradedComplex, degree: int) -> _HomologyCoordinates:
    _require_certified(c, degree)
    outgoing = smith_normal_form(c.boundary(degree), transforms=True)
    r = outgoing.rank
    boundaries_in_kernel = outgoing.V_inv.dot(c.boundary(degree + 1))[r:, :]
    inner = smith_normal_form(boundaries_in_kernel, transforms=True)
    return _HomologyCoordinates(r, outgoing.V, outgoing.V_inv, inner.rank, inner.U, inner.U_inv,
                                tuple(inner.torsion))


def chain_map_matrix(f: SAlgMorphism, source: GradedComplex, target: GradedComplex, q: int) -> np.ndarray:
    """
    Matrix of f at level q between the two weight pieces.

    Raises:
        WeightError: If f leaves the target weight
    """
    index = target.index(q)
    matrix = np.zeros((target.dim(q), source.dim(q)), dtype=object)
    for col, mono in enumerate(source.bases[q]):
        image = f.eval(q, Polynomial({mono: 1}))
        matrix[:, col] = _as_vector(image, index, target.t_weight, target.w, f"{f.name} on {mono.to_text()}")
    return matrix


@dataclass
class HomologyMap:
    degree: int
    w: int
    matrix: np.ndarray
    source: HomologyGroup
    target: HomologyGroup

    @property
    def is_iso(self) -> bool:
        """Square with unit invariant factors (free parts only)."""
        rows, cols = self.matrix.shape
        if rows != cols or self.source.torsion != self.target.torsion:
            return False
        return invariant_factors(self.matrix) == [1] * rows


def induced_map_on_homology(f: SAlgMorphism, t_weights: Tuple[int, int], w: int, degree: int,
                            p_max: Optional[int] = None) -> HomologyMap:
    """
    The map f induces on the free part of H_degree in weight w.

    Raises:
        WeightError: If f does not preserve the weight
        TruncationError: If p_max < degree + 1
    """
    p_max = degree + 1 if p_max is None else p_max
    source = assemble_presentation(f.domain, t_weights[0], w, p_max)
    target = assemble_presentation(f.codomain, t_weights[1], w, p_max)
    src, tgt = _coordinates(source, degree), _coordinates(target, degree)
    F = chain_map_matrix(f, source, target, degree)
    columns = [tgt.free_coordinates(F.dot(cycle)) for cycle in src.free_generators()]
    matrix = np.zeros((tgt.free_rank, src.free_rank), dtype=object)
    for j, column in enumerate(columns):
        matrix[:, j] = column
    return HomologyMap(degree, w, matrix, HomologyGroup(src.free_rank, src.torsion),
                       HomologyGroup(tgt.free_rank, tgt.torsion))


# Structural maps on homology

def automorphism_on_homology_check(f: SAlgMorphism, w_max: int, p_max: int, check_id: str) -> CheckResult:
    """A weight-1 automorphism induces an isomorphism on every certified H_q, weight by weight."""
    for w in range(w_max + 1):
        for q in range(p_max):
            induced = induced_map_on_homology(f, (1, 1), w, q, p_max)
            if not induced.is_iso:
                return failed(check_id, Counterexample(q, None, f"H_{q} weight {w}",
                                                       f"{induced.source} -> {induced.target}",
                                                       str(induced.matrix.tolist())))
    return passed(check_id, w_max=w_max, p_max=p_max)


def can_on_homology_check(m_hi: int, m_lo: int, w_max: int, p_max: int) -> CheckResult:
    """
    can(m_hi, m_lo) on H_0 is the projection Z[pi]/pi^m_hi -> Z[pi]/pi^m_lo:
    an isomorphism below weight m_lo, onto 0 from there up to m_hi.
    """
    check_id = f"homology.induced.can.m={m_hi}.to={m_lo}"
    f = can_map(m_hi, m_lo)
    for w in range(w_max + 1):
        induced = induced_map_on_homology(f, (m_hi, m_lo), w, 0, p_max)
        expected = kA_oracle(m_hi, w, 0), kA_oracle(m_lo, w, 0)
        ok = (induced.source, induced.target) == expected and (w >= m_lo or induced.is_iso)
        if not ok:
            return failed(check_id, Counterexample(0, None, f"H_0 weight {w}",
                                                   f"{induced.source} -> {induced.target}",
                                                   f"{expected[0]} -> {expected[1]}"))
    return passed(check_id, w_max=w_max)


# Oracles

def kA_oracle(m: int, w: int, degree: int) -> HomologyGroup:
    """k_A(m) with t_weight m: Z[pi]/(pi^m) in degree 0, nothing above."""
    if degree > 0:
        return ZERO
    return Z if w < m else ZERO


def koszul_oracle(w: int, degree: int) -> HomologyGroup:
    """Z[pi] --pi--> Z[pi] tensored with Z[pi]/(pi): Z at (0, 0) and (1, 1)."""
    return Z if (degree, w) in ((0, 0), (1, 1)) else ZERO


def certify_against_oracle(c: GradedComplex, oracle, check_id: str) -> CheckResult:
    """Every certified degree against the oracle, plus d^2 = 0."""
    results = [boundary_check(c)]
    for q in range(c.p_max):
        found, expected = homology(c, q), oracle(c.w, q)
        if found != expected:
            results.append(failed(check_id, Counterexample(q, None, f"H_{q} weight {c.w}", str(found),
                                                           str(expected))))
            break
    return first_failure(check_id, results, w=c.w, p_max=c.p_max)


def sympy_check(c: GradedComplex, check_id: str) -> CheckResult:
    """
    cross_check in every certified degree. Any failure fails the whole; a
    degree whose matrix is over the limit makes the whole skipped.
    """
    results = [cross_check(c, q, f"{check_id}.q={q}") for q in range(c.p_max)]
    for result in results:
        if result.status == FAIL:
            return first_failure(check_id, [result], w=c.w)
    over = [r.id.rsplit('.', 1)[-1] for r in results if r.status == SKIPPED]
    if over:
        return skipped(check_id, detail=f"no sympy cross-check in {', '.join(over)}",
                       w=c.w, limit=SYMPY_CROSS_CHECK_LIMIT)
    return passed(check_id, w=c.w, degrees=len(results))


def shuffle_check(model: ModelId, w: int, p_max: int, seed: int = 0) -> CheckResult:
    """Homology does not depend on the order of the bases."""
    check_id = f"homology.shuffle.{model}.w={w}"
    plain, shuffled = assemble(model, w=w, p_max=p_max), assemble(model, w=w, p_max=p_max, shuffle_seed=seed)
    for q in range(p_max):
        a, b = homology(plain, q), homology(shuffled, q)
        if a != b:
            return failed(check_id, Counterexample(q, None, f"H_{q}", str(a), str(b)), seed=seed)
    return passed(check_id, seed=seed)


def pi0_vs_h0_check(model: ModelId, w_max: int, p_max: int) -> CheckResult:
    """The weight-w piece of H_0 equals that of Z[pi]/pi0(model)."""
    check_id = f"homology.pi0_vs_h0.{model}"
    ideal = pi0(model)
    for w in range(w_max + 1):
        found = homology(assemble(model, w=w, p_max=max(1, min(p_max, 2))), 0)
        expected = ideal.graded_piece(w)
        if found != expected:
            return failed(check_id, Counterexample(0, None, f"H_0 weight {w}", str(found), str(expected)))
    return passed(check_id, ideal=str(ideal), w_max=w_max)


def pi0_check(model: Union[ModelId, str], expected: Polynomial) -> CheckResult:
    check_id = f"homology.pi0.{model}"
    ideal = pi0(constant_presentation() if model == 'const' else model)
    if ideal.generator != expected:
        return failed(check_id, Counterexample(1, None, "d0 - d1", str(ideal), f"({expected.to_text()})"))
    return passed(check_id, ideal=str(ideal))


def registered_checks(bounds, tensor_w_max: int = 4) -> Iterator[CheckSpec]:
    p_max, w_max = bounds.p_max, bounds.w_max
    for m in range(1, 4):
        model = kA(m)
        for w in range(w_max + 1):
            yield CheckSpec(f"homology.kA.m={m}.w={w}", 'homology', "k_A(m) resolves A/pi^m",
                            lambda m=m, model=model, w=w: certify_against_oracle(
                                assemble(model, w=w, p_max=p_max), lambda ww, q: kA_oracle(m, ww, q),
                                f"homology.kA.m={m}.w={w}"))
            yield CheckSpec(f"homology.sympy.kA.m={m}.w={w}", 'homology', "Smith form agrees with sympy",
                            lambda m=m, model=model, w=w: sympy_check(
                                assemble(model, w=w, p_max=p_max), f"homology.sympy.kA.m={m}.w={w}"))
        yield CheckSpec(f"homology.pi0.{model}", 'homology', "pi_0 of k_A(m) is A/pi^m",
                        lambda m=m, model=model: pi0_check(model, Polynomial.pi_power(m)))
        yield CheckSpec(f"homology.pi0_vs_h0.{model}", 'homology', "pi_0 agrees with H_0",
                        lambda model=model: pi0_vs_h0_check(model, w_max, p_max))
    for model, tag in ((K_A, "K_A"), (kA_tensor(2, 1), "kA_tensor.n=2.m=1")):
        for w in range(min(w_max, tensor_w_max) + 1):
            yield CheckSpec(f"homology.{tag}.w={w}", 'homology', "Koszul complex of pi",
                            lambda model=model, tag=tag, w=w: certify_against_oracle(
                                assemble(model, w=w, p_max=p_max), koszul_oracle, f"homology.{tag}.w={w}"))
            yield CheckSpec(f"homology.sympy.{tag}.w={w}", 'homology', "Smith form agrees with sympy",
                            lambda model=model, tag=tag, w=w: sympy_check(
                                assemble(model, w=w, p_max=p_max), f"homology.sympy.{tag}.w={w}"))
    yield CheckSpec("homology.pi0.K_A", 'homology', "pi_0 of K_A is A/pi",
                    lambda: pi0_check(K_A, Polynomial.pi_power(1)))
    yield CheckSpec("homology.pi0_vs_h0.K_A", 'homology', "pi_0 agrees with H_0",
                    lambda: pi0_vs_h0_check(K_A, min(w_max, tensor_w_max), p_max))
    yield CheckSpec("homology.pi0.const", 'homology', "pi_0 of the constant algebra",
                    lambda: pi0_check('const', Polynomial.zero()))
    yield CheckSpec("homology.shuffle.kA(2)", 'homology', "basis order independence",
                    lambda: shuffle_check(kA(2), min(w_max, 4), p_max))
    yield CheckSpec("homology.shuffle.K_A", 'homology', "basis order independence",
                    lambda: shuffle_check(K_A, min(w_max, tensor_w_max, 2), p_max))
    for m_hi, m_lo in ((2, 1), (3, 1), (3, 2)):
        yield CheckSpec(f"homology.induced.can.m={m_hi}.to={m_lo}", 'homology', "can is the projection on pi_0",
                        lambda m_hi=m_hi, m_lo=m_lo: can_on_homology_check(m_hi, m_lo, min(w_max, 4), p_max))
    small_w, small_p = min(w_max, tensor_w_max, 2), min(p_max, 3)
    yield CheckSpec("homology.induced.rho.n=2", 'homology', "rho is a weak equivalence",
                    lambda: automorphism_on_homology_check(rho_action(2, 1, K_A_tensor_A(2)), small_w, small_p,
                                                           "homology.induced.rho.n=2"))
    yield CheckSpec("homology.induced.zeta.n=2", 'homology', "zeta is a weak equivalence",
                    lambda: automorphism_on_homology_check(zeta_automorphism(2), small_w, small_p,
                                                           "homology.induced.zeta.n=2"))
