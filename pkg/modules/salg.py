"""
Simplicial Algebra Module
Levelwise presentations of simplicial commutative Z[pi]-algebras, morphisms
as generator substitutions, simpliciality certificates, tensor products and
the simplex tensoring Delta^l (x) R
"""

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import sympy
import yaml

from modules.checks import CheckResult, CheckSpec, Counterexample, failed, first_failure, passed
from modules.poly import Family, Polynomial, VarId, parse_polynomial
from modules.simplex import MonotoneMap, compose, delta, enumerate_maps, sigma

ChainKey = Tuple[Family, int]


class UnknownVariableError(KeyError):
    """A variable is neither free nor aliased at the requested level."""

    def __str__(self):
        return self.args[0] if self.args else "unknown variable"


class PresentationError(ValueError):
    """Malformed presentation: colliding chains, bad identifications, bad description files."""


INDEX_SYMBOLS = {name: sympy.Symbol(name, integer=True, nonnegative=True) for name in ('i', 'j', 'p')}

# The bar rules, written the way a description file would
BAR_FACE_RULE = "Piecewise((j, j <= i), (j - 1, True))"
BAR_DEGENERACY_RULE = "Piecewise((j, j <= i), (j + 1, True))"


@dataclass(frozen=True)
class IndexRule:
    """
    A face or degeneracy rule as a sympy expression in i (the face or
    degeneracy index), j (the bar index) and p (the level): the operator
    sends x^(j) at level p to x^(rule) one level down or up.
    """

    text: str
    expr: sympy.Expr = field(compare=False, hash=False, repr=False, default=None)

    def __post_init__(self):
        try:
            expr = sympy.sympify(self.text, locals=INDEX_SYMBOLS)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise PresentationError(f"Cannot parse index rule {self.text!r}: {e}")
        unknown = {str(s) for s in expr.free_symbols} - set(INDEX_SYMBOLS)
        if unknown:
            raise PresentationError(f"Index rule {self.text!r} uses unknown symbol(s): {', '.join(sorted(unknown))}")
        object.__setattr__(self, 'expr', expr)

    @lru_cache(maxsize=None)
    def __call__(self, p: int, i: int, j: int) -> int:
        value = self.expr.subs({INDEX_SYMBOLS['p']: p, INDEX_SYMBOLS['i']: i, INDEX_SYMBOLS['j']: j})
        if not value.is_Integer:
            raise PresentationError(f"Index rule {self.text!r} gives {value} at p={p}, i={i}, j={j}")
        return int(value)


def _attach(poly: Polynomial, label: MonotoneMap) -> Polynomial:
    return poly.map_variables(lambda w: Polynomial.var(w.with_label(label)))


class Presentation(ABC):
    """
    A simplicial algebra given level by level.

    Level p is the polynomial ring over Z[pi] on free_generators(p); every
    other variable a formula may mention at level p (boundary indices,
    identified chains) is an alias, normalized eagerly by resolve().
    Subclasses give the single-variable rules; this class adds caching and
    the polynomial-level operations.
    """

    def __init__(self, name: str, pi_value: Optional[int] = None):
        self.name = name
        self.pi_value = pi_value
        self._free_cache: Dict[int, Tuple[VarId, ...]] = {}
        self._free_sets: Dict[int, frozenset] = {}
        self._resolve_cache: Dict[Tuple[int, VarId], Polynomial] = {}
        self._face_cache: Dict[Tuple[int, int, VarId], Polynomial] = {}
        self._degeneracy_cache: Dict[Tuple[int, int, VarId], Polynomial] = {}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"

    # single-variable rules

    @abstractmethod
    def _free_generators(self, p: int) -> List[VarId]:
        ...

    @abstractmethod
    def alias_generators(self, p: int) -> Tuple[VarId, ...]:
        ...

    @abstractmethod
    def _resolve(self, p: int, v: VarId) -> Polynomial:
        ...

    @abstractmethod
    def _face(self, p: int, i: int, v: VarId) -> Polynomial:
        ...

    @abstractmethod
    def _degeneracy(self, p: int, i: int, v: VarId) -> Polynomial:
        ...

    # cached public API

    def free_generators(self, p: int) -> Tuple[VarId, ...]:
        if p < 0:
            raise ValueError(f"Negative level: {p}")
        if p not in self._free_cache:
            self._free_cache[p] = tuple(sorted(self._free_generators(p)))
            self._free_sets[p] = frozenset(self._free_cache[p])
        return self._free_cache[p]

    def is_free(self, p: int, v: VarId) -> bool:
        self.free_generators(p)
        return v in self._free_sets[p]

    def resolve(self, p: int, v: VarId) -> Polynomial:
        """Normal form of a single variable at level p."""
        key = (p, v)
        if key not in self._resolve_cache:
            if self.is_free(p, v):
                result = Polynomial.var(v)
            else:
                result = self._specialize(self._resolve(p, v))
            self._resolve_cache[key] = result
        return self._resolve_cache[key]

    def face_generator(self, p: int, i: int, v: VarId) -> Polynomial:
        """d_i of a single variable (free or alias) at level p, normalized at level p-1."""
        if p < 1 or not 0 <= i <= p:
            raise ValueError(f"Face d_{i} undefined at level {p}")
        key = (p, i, v)
        if key not in self._face_cache:
            self._face_cache[key] = self._specialize(self._face(p, i, v))
        return self._face_cache[key]

    def degeneracy_generator(self, p: int, i: int, v: VarId) -> Polynomial:
        """s_i of a single variable at level p, normalized at level p+1."""
        if p < 0 or not 0 <= i <= p:
            raise ValueError(f"Degeneracy s_{i} undefined at level {p}")
        key = (p, i, v)
        if key not in self._degeneracy_cache:
            self._degeneracy_cache[key] = self._specialize(self._degeneracy(p, i, v))
        return self._degeneracy_cache[key]

    def _specialize(self, poly: Polynomial) -> Polynomial:
        return poly if self.pi_value is None else poly.specialize_pi(self.pi_value)

    def normalize(self, p: int, x: Polynomial) -> Polynomial:
        return self._specialize(x.map_variables(lambda v: self.resolve(p, v)))

    def face(self, p: int, i: int, x: Polynomial) -> Polynomial:
        x = self.normalize(p, x)
        return self._specialize(x.map_variables(lambda v: self.face_generator(p, i, v)))

    def degeneracy(self, p: int, i: int, x: Polynomial) -> Polynomial:
        x = self.normalize(p, x)
        return self._specialize(x.map_variables(lambda v: self.degeneracy_generator(p, i, v)))


@dataclass(frozen=True)
class Chain:
    """One bar chain x^(0), x^(1), ... of a family and tensor factor; low is the value of x^(0) (None: free)."""

    family: Family
    a: int
    low: Optional[Polynomial] = None
    faces: Optional[IndexRule] = None
    degeneracies: Optional[IndexRule] = None

    @property
    def key(self) -> ChainKey:
        return (self.family, self.a)


class ChainPresentation(Presentation):
    """
    Tensor products of bar chains over Z[pi], modulo whole-chain identifications.

    At level p a chain contributes x^(1..p) (and x^(0) when its low value is
    free); x^(0) is the low value and x^(p+1) is 0. Faces and degeneracies
    shift the bar index: d_i x^(j) = x^(j) for j <= i, x^(j-1) otherwise;
    s_i x^(j) = x^(j) for j <= i, x^(j+1) otherwise. A chain carrying its own
    IndexRule uses that instead.
    """

    def __init__(self, name: str, chains: Iterable[Chain],
                 identifications: Optional[Mapping[ChainKey, ChainKey]] = None,
                 pi_value: Optional[int] = None):
        super().__init__(name, pi_value)
        self.chains: Dict[ChainKey, Chain] = {}
        for chain in chains:
            if chain.key in self.chains:
                raise PresentationError(f"{name}: chain {_chain_text(chain.key)} declared twice")
            self.chains[chain.key] = chain
        self.identifications: Dict[ChainKey, ChainKey] = dict(identifications or {})
        self._roots = {key: self._find_root(key) for key in self.chains}

    def _find_root(self, key: ChainKey) -> ChainKey:
        seen = [key]
        while key in self.identifications:
            key = self.identifications[key]
            if key not in self.chains:
                raise PresentationError(f"{self.name}: identification targets unknown chain {_chain_text(key)}")
            if key in seen:
                raise PresentationError(f"{self.name}: cyclic identification through {_chain_text(key)}")
            seen.append(key)
        return key

    def root(self, key: ChainKey) -> ChainKey:
        if key not in self._roots:
            raise UnknownVariableError(f"{self.name}: no chain {_chain_text(key)}")
        return self._roots[key]

    @property
    def free_chains(self) -> List[Chain]:
        return [c for key, c in sorted(self.chains.items(), key=lambda kv: (kv[0][0].rank, kv[0][1]))
                if self._roots[key] == key]

    def _free_generators(self, p: int) -> List[VarId]:
        generators = []
        for chain in self.free_chains:
            start = 0 if chain.low is None else 1
            generators.extend(VarId(chain.family, j, chain.a) for j in range(start, p + 1))
        return generators

    def alias_generators(self, p: int) -> Tuple[VarId, ...]:
        aliases = []
        for key, chain in self.chains.items():
            identified = self._roots[key] != key
            for j in range(0, p + 2):
                v = VarId(chain.family, j, chain.a)
                if identified or j == p + 1 or (j == 0 and chain.low is not None):
                    aliases.append(v)
        return tuple(sorted(aliases))

    def _check_index(self, p: int, v: VarId):
        if v.labels or v.j > p + 1:
            raise UnknownVariableError(f"{self.name}: {v} does not exist at level {p}")

    def _resolve(self, p: int, v: VarId) -> Polynomial:
        self._check_index(p, v)
        family, a = self.root(v.chain)
        if v.j == p + 1:
            return Polynomial.zero()
        chain = self.chains[(family, a)]
        if v.j == 0 and chain.low is not None:
            return chain.low
        return Polynomial.var(VarId(family, v.j, a))

    def _ruled_index(self, rule: IndexRule, p: int, i: int, v: VarId, level: int) -> int:
        j = rule(p, i, v.j)
        if not 0 <= j <= level + 1:
            raise PresentationError(f"{self.name}: rule {rule.text!r} sends {v} at level {p} to index {j}, "
                                    f"outside 0..{level + 1}")
        return j

    def _face(self, p: int, i: int, v: VarId) -> Polynomial:
        self._check_index(p, v)
        rule = self.chains[self.root(v.chain)].faces
        if rule is None:
            return self.resolve(p - 1, v.with_j(v.j if v.j <= i else v.j - 1))
        return self.resolve(p - 1, v.with_j(self._ruled_index(rule, p, i, v, p - 1)))

    def _degeneracy(self, p: int, i: int, v: VarId) -> Polynomial:
        self._check_index(p, v)
        rule = self.chains[self.root(v.chain)].degeneracies
        if rule is None:
            return self.resolve(p + 1, v.with_j(v.j if v.j <= i else v.j + 1))
        return self.resolve(p + 1, v.with_j(self._ruled_index(rule, p, i, v, p + 1)))

    def specialize_pi(self, c: int) -> "ChainPresentation":
        """The same chains with pi set to the integer c everywhere."""
        chains = [Chain(ch.family, ch.a, None if ch.low is None else ch.low.specialize_pi(c),
                        ch.faces, ch.degeneracies)
                  for ch in self.chains.values()]
        return ChainPresentation(f"{self.name}|pi={c}", chains, self.identifications, pi_value=c)


def _chain_text(key: ChainKey) -> str:
    return f"{key[0].value}_{key[1]}"


class SimplexTensor(Presentation):
    """Delta^l (x) P: level p is the coproduct of copies of P_p indexed by Delta^l_p."""

    def __init__(self, l: int, inner: Presentation, name: Optional[str] = None):
        if l < 0:
            raise ValueError(f"Simplex dimension must be non-negative, got {l}")
        super().__init__(name or f"Delta^{l}⊗({inner.name})", inner.pi_value)
        self.l = l
        self.inner = inner

    def _split(self, p: int, v: VarId) -> Tuple[VarId, MonotoneMap]:
        if not v.labels:
            raise UnknownVariableError(f"{self.name}: {v} carries no simplex label")
        base, label = v.split_label()
        if label.source != p or label.target != self.l:
            raise UnknownVariableError(f"{self.name}: label of {v} is not in Delta^{self.l}_{p}")
        return base, label

    def _free_generators(self, p: int) -> List[VarId]:
        labels = enumerate_maps(p, self.l)
        return [g.with_label(alpha) for g in self.inner.free_generators(p) for alpha in labels]

    def alias_generators(self, p: int) -> Tuple[VarId, ...]:
        labels = enumerate_maps(p, self.l)
        return tuple(sorted(v.with_label(alpha) for v in self.inner.alias_generators(p) for alpha in labels))

    def _resolve(self, p: int, v: VarId) -> Polynomial:
        base, label = self._split(p, v)
        return _attach(self.inner.resolve(p, base), label)

    def _face(self, p: int, i: int, v: VarId) -> Polynomial:
        base, label = self._split(p, v)
        return _attach(self.inner.face_generator(p, i, base), compose(label, delta(p, i)))

    def _degeneracy(self, p: int, i: int, v: VarId) -> Polynomial:
        base, label = self._split(p, v)
        return _attach(self.inner.degeneracy_generator(p, i, base), compose(label, sigma(p, i)))


def constant_presentation() -> ChainPresentation:
    """Z[pi] in every level, all structure maps the identity."""
    return ChainPresentation("const", [])


def simplex_tensor(l: int, P: Presentation) -> SimplexTensor:
    return SimplexTensor(l, P)


def tensor_over_A(P: ChainPresentation, Q: ChainPresentation, shift: Optional[int] = None,
                  families: Optional[Mapping[Family, Family]] = None,
                  name: Optional[str] = None) -> ChainPresentation:
    """
    P (x)_A Q: the chains of both factors, Q's factor subscripts shifted by
    `shift` (default: the largest subscript of P) and its families renamed by
    `families`.

    Raises:
        PresentationError: If a chain of Q collides with a chain of P after re-indexing
    """
    if shift is None:
        shift = max((a for _, a in P.chains), default=0)
    families = dict(families or {})

    def move(key: ChainKey) -> ChainKey:
        return (families.get(key[0], key[0]), key[1] + shift)

    chains = list(P.chains.values())
    taken = set(P.chains)
    for chain in Q.chains.values():
        key = move(chain.key)
        if key in taken:
            raise PresentationError(f"Tensor {P.name} ⊗ {Q.name}: chain {_chain_text(key)} collides")
        taken.add(key)
        chains.append(Chain(key[0], key[1], chain.low, chain.faces, chain.degeneracies))
    identifications = dict(P.identifications)
    identifications.update({move(src): move(dst) for src, dst in Q.identifications.items()})
    pi_value = P.pi_value if P.pi_value is not None else Q.pi_value
    return ChainPresentation(name or f"{P.name}⊗{Q.name}", chains, identifications, pi_value)


def quotient(P: ChainPresentation, identifications: Mapping[ChainKey, ChainKey],
             name: str) -> ChainPresentation:
    """P modulo further whole-chain identifications src == dst."""
    merged = dict(P.identifications)
    for src, dst in identifications.items():
        if src in merged and merged[src] != dst:
            raise PresentationError(f"{name}: {_chain_text(src)} already identified")
        merged[src] = dst
    return ChainPresentation(name, P.chains.values(), merged, P.pi_value)


# Morphisms

Formula = Callable[[int, VarId], Polynomial]


class SAlgMorphism:
    """
    A morphism given by a generator formula.

    `formula(p, v)` must accept every domain variable meaningful at level p,
    free or alias; the assignment on free generators is the normalized
    formula. Certificates are computed on demand by certify() and kept in
    `certificates`.
    """

    def __init__(self, name: str, domain: Presentation, codomain: Presentation, formula: Formula):
        self.name = name
        self.domain = domain
        self.codomain = codomain
        self.formula = formula
        self.certificates: Dict[str, CheckResult] = {}
        self._assignment: Dict[Tuple[int, VarId], Polynomial] = {}

    def __repr__(self) -> str:
        return f"<SAlgMorphism {self.name}: {self.domain.name} -> {self.codomain.name}>"

    def formula_image(self, p: int, v: VarId) -> Polynomial:
        return self.codomain.normalize(p, self.formula(p, v))

    def assignment(self, p: int, v: VarId) -> Polynomial:
        key = (p, v)
        if key not in self._assignment:
            if not self.domain.is_free(p, v):
                raise UnknownVariableError(f"{v} is not a free generator of {self.domain.name} at level {p}")
            self._assignment[key] = self.formula_image(p, v)
        return self._assignment[key]

    def eval(self, p: int, x: Polynomial) -> Polynomial:
        """Ring-homomorphic extension of the assignment to a level-p element."""
        x = self.domain.normalize(p, x)
        return self.codomain.normalize(p, x.map_variables(lambda v: self.assignment(p, v)))

    def certify(self, p_max: int) -> CheckResult:
        """Run well-definedness and simpliciality up to p_max; results are stored on the morphism."""
        self.certificates['well_defined'] = check_well_defined(self, p_max)
        self.certificates['simplicial'] = check_morphism(self, p_max)
        return first_failure(f"morphism.{self.name}", self.certificates.values(), p_max=p_max)


def eval_morphism(f: SAlgMorphism, p: int, x: Polynomial) -> Polynomial:
    return f.eval(p, x)


def identity_morphism(P: Presentation) -> SAlgMorphism:
    return SAlgMorphism(f"id[{P.name}]", P, P, lambda p, v: P.resolve(p, v))


def _require_same(a: Presentation, b: Presentation, what: str):
    if a is not b and a.name != b.name:
        raise ValueError(f"Endpoint mismatch in {what}: {a.name} vs {b.name}")


def compose_morphisms(g: SAlgMorphism, f: SAlgMorphism, name: Optional[str] = None) -> SAlgMorphism:
    """
    g o f.

    Raises:
        ValueError: If f's codomain is not g's domain
    """
    _require_same(f.codomain, g.domain, f"{g.name} ∘ {f.name}")
    return SAlgMorphism(name or f"{g.name}∘{f.name}", f.domain, g.codomain,
                        lambda p, v: g.eval(p, f.formula_image(p, v)))


def compose_chain(*morphisms: SAlgMorphism, name: Optional[str] = None) -> SAlgMorphism:
    """Compose right to left: compose_chain(h, g, f) = h o g o f."""
    if not morphisms:
        raise ValueError("Nothing to compose")
    result = morphisms[-1]
    for g in reversed(morphisms[:-1]):
        result = compose_morphisms(g, result)
    if name:
        # fresh object: the factors may be cached and shared
        result = SAlgMorphism(name, result.domain, result.codomain, result.formula)
    return result


def morphisms_equal(f: SAlgMorphism, g: SAlgMorphism, p_max: int,
                    check_id: Optional[str] = None,
                    levels: Optional[Iterable[int]] = None) -> CheckResult:
    """
    Generator-by-generator equality of f and g at every level <= p_max.

    Raises:
        ValueError: If the endpoints differ
    """
    _require_same(f.domain, g.domain, f"{f.name} = {g.name}")
    _require_same(f.codomain, g.codomain, f"{f.name} = {g.name}")
    check_id = check_id or f"equal.{f.name}.{g.name}"
    for p in (levels if levels is not None else range(p_max + 1)):
        for v in f.domain.free_generators(p):
            lhs, rhs = f.assignment(p, v), g.assignment(p, v)
            if lhs != rhs:
                return failed(check_id, Counterexample(p, None, str(v), lhs.to_text(), rhs.to_text()),
                              p_max=p_max)
    return passed(check_id, p_max=p_max)


def check_presentation(P: Presentation, p_max: int, check_id: Optional[str] = None) -> CheckResult:
    """
    The five simplicial identities on every free generator, with every level
    involved <= p_max, plus compatibility of faces and degeneracies with the
    alias normal forms.
    """
    check_id = check_id or f"presentation.{P.name}"

    def fail(p, i, label, lhs, rhs):
        return failed(check_id, Counterexample(p, i, label, lhs.to_text(), rhs.to_text()), p_max=p_max)

    for p in range(p_max + 1):
        for g in P.free_generators(p):
            x = Polynomial.var(g)
            if p >= 2:
                for j in range(p + 1):
                    dj = P.face_generator(p, j, g)
                    for i in range(j):
                        lhs = P.face(p - 1, i, dj)
                        rhs = P.face(p - 1, j - 1, P.face_generator(p, i, g))
                        if lhs != rhs:
                            return fail(p, i, f"d{i}d{j} {g}", lhs, rhs)
            if p + 1 <= p_max:
                for j in range(p + 1):
                    sj = P.degeneracy_generator(p, j, g)
                    for i in range(p + 2):
                        lhs = P.face(p + 1, i, sj)
                        if i < j:
                            rhs = P.degeneracy(p - 1, j - 1, P.face_generator(p, i, g))
                        elif i in (j, j + 1):
                            rhs = x
                        else:
                            rhs = P.degeneracy(p - 1, j, P.face_generator(p, i - 1, g))
                        if lhs != rhs:
                            return fail(p, i, f"d{i}s{j} {g}", lhs, rhs)
            if p + 2 <= p_max:
                for j in range(p + 1):
                    for i in range(j + 1):
                        lhs = P.degeneracy(p + 1, i, P.degeneracy_generator(p, j, g))
                        rhs = P.degeneracy(p + 1, j + 1, P.degeneracy_generator(p, i, g))
                        if lhs != rhs:
                            return fail(p, i, f"s{i}s{j} {g}", lhs, rhs)
        for v in P.alias_generators(p):
            value = P.resolve(p, v)
            if p >= 1:
                for i in range(p + 1):
                    lhs, rhs = P.face_generator(p, i, v), P.face(p, i, value)
                    if lhs != rhs:
                        return fail(p, i, f"alias d{i} {v}", lhs, rhs)
            if p + 1 <= p_max:
                for i in range(p + 1):
                    lhs, rhs = P.degeneracy_generator(p, i, v), P.degeneracy(p, i, value)
                    if lhs != rhs:
                        return fail(p, i, f"alias s{i} {v}", lhs, rhs)
    return passed(check_id, p_max=p_max)


def check_well_defined(f: SAlgMorphism, p_max: int, check_id: Optional[str] = None) -> CheckResult:
    """The formula on every domain alias equals the image of the alias's normal form."""
    check_id = check_id or f"well_defined.{f.name}"
    for p in range(p_max + 1):
        for v in f.domain.alias_generators(p):
            lhs = f.formula_image(p, v)
            rhs = f.eval(p, f.domain.resolve(p, v))
            if lhs != rhs:
                return failed(check_id, Counterexample(p, None, str(v), lhs.to_text(), rhs.to_text()),
                              p_max=p_max)
    return passed(check_id, p_max=p_max)


def check_morphism(f: SAlgMorphism, p_max: int, check_id: Optional[str] = None) -> CheckResult:
    """
    f(d_i g) = d_i f(g) and f(s_i g) = s_i f(g) for every free generator g
    with both levels <= p_max.

    Returns:
        CheckResult with the first failing (level, index, generator) and both sides
    """
    check_id = check_id or f"simplicial.{f.name}"
    dom, cod = f.domain, f.codomain
    for p in range(p_max + 1):
        for g in dom.free_generators(p):
            image = f.assignment(p, g)
            if p >= 1:
                for i in range(p + 1):
                    lhs = f.eval(p - 1, dom.face_generator(p, i, g))
                    rhs = cod.face(p, i, image)
                    if lhs != rhs:
                        return failed(check_id, Counterexample(p, i, f"d{i} {g}", lhs.to_text(), rhs.to_text()),
                                      p_max=p_max)
            if p + 1 <= p_max:
                for i in range(p + 1):
                    lhs = f.eval(p + 1, dom.degeneracy_generator(p, i, g))
                    rhs = cod.degeneracy(p, i, image)
                    if lhs != rhs:
                        return failed(check_id, Counterexample(p, i, f"s{i} {g}", lhs.to_text(), rhs.to_text()),
                                      p_max=p_max)
    return passed(check_id, p_max=p_max)


def chain_morphism(domain: ChainPresentation, codomain: ChainPresentation,
                   chain_map: Optional[Mapping[ChainKey, ChainKey]] = None,
                   scale: int = 0, name: Optional[str] = None) -> SAlgMorphism:
    """
    The morphism x^(j)_a -> pi^scale * y^(j)_b relabelling whole chains.

    A chain missing from chain_map goes where its identified root goes, and
    otherwise to the chain of the same name in the codomain.
    """
    chain_map = dict(chain_map or {})
    if scale < 0:
        raise ValueError(f"Negative pi scale: {scale}")
    factor = Polynomial.pi_power(scale)

    def target(key: ChainKey) -> ChainKey:
        if key in chain_map:
            return chain_map[key]
        root = domain.root(key)
        return chain_map.get(root, root)

    def formula(p: int, v: VarId) -> Polynomial:
        family, a = target(v.chain)
        image = codomain.resolve(p, v.with_chain(family, a))
        return image * factor if scale else image

    return SAlgMorphism(name or f"relabel[{domain.name}->{codomain.name}]", domain, codomain, formula)


def quotient_map(P: ChainPresentation, Q: ChainPresentation, name: Optional[str] = None) -> SAlgMorphism:
    """The canonical projection onto a quotient on the same chains."""
    return chain_morphism(P, Q, {}, name=name or f"quot[{P.name}->{Q.name}]")


def invert_chain_morphism(f: SAlgMorphism, chain_map: Mapping[ChainKey, ChainKey],
                          name: Optional[str] = None) -> SAlgMorphism:
    """
    Two-sided inverse of an unscaled chain relabelling, built from the inverse
    chain table on the codomain's free chains.

    Raises:
        PresentationError: If the relabelling is not a bijection of free chains
    """
    dom, cod = f.domain, f.codomain
    inverse: Dict[ChainKey, ChainKey] = {}
    for chain in dom.free_chains:
        key = chain.key
        image = cod.root(chain_map.get(key, key))
        if image in inverse:
            raise PresentationError(f"{f.name} is not injective on chains ({_chain_text(image)})")
        inverse[image] = key
    missing = [c.key for c in cod.free_chains if c.key not in inverse]
    if missing:
        raise PresentationError(f"{f.name} misses chains {', '.join(_chain_text(k) for k in missing)}")
    return chain_morphism(cod, dom, inverse, name=name or f"({f.name})^-1")


def simplex_tensor_morphism(l: int, f: SAlgMorphism, domain: Optional[SimplexTensor] = None,
                            codomain: Optional[SimplexTensor] = None) -> SAlgMorphism:
    """id_{Delta^l} (x) f."""
    dom = domain or SimplexTensor(l, f.domain)
    cod = codomain or SimplexTensor(l, f.codomain)

    def formula(p: int, v: VarId) -> Polynomial:
        base, label = dom._split(p, v)
        return _attach(f.formula_image(p, base), label)

    return SAlgMorphism(f"id_Delta^{l}⊗{f.name}", dom, cod, formula)


def label_morphism(phi: MonotoneMap, P: Presentation, domain: Optional[SimplexTensor] = None,
                   codomain: Optional[SimplexTensor] = None, name: Optional[str] = None) -> SAlgMorphism:
    """Delta^l (x) P -> Delta^l' (x) P induced by phi: [l] -> [l'] on the outer label."""
    dom = domain or SimplexTensor(phi.source, P)
    cod = codomain or SimplexTensor(phi.target, P)
    if dom.l != phi.source or cod.l != phi.target:
        raise ValueError(f"Label map {phi} does not match Delta^{dom.l} -> Delta^{cod.l}")

    def formula(p: int, v: VarId) -> Polynomial:
        base, label = dom._split(p, v)
        return _attach(P.resolve(p, base), compose(phi, label))

    return SAlgMorphism(name or f"label[{phi}]⊗{P.name}", dom, cod, formula)


def vertex_restriction(f: SAlgMorphism, v: int, name: Optional[str] = None) -> SAlgMorphism:
    """
    The restriction of f: Delta^l (x) P -> R to the vertex v of Delta^l.

    Raises:
        ValueError: If the domain is not simplex-tensored or v is outside [l]
    """
    dom = f.domain
    if not isinstance(dom, SimplexTensor):
        raise ValueError(f"{f.name} does not start at a simplex tensor")
    if not 0 <= v <= dom.l:
        raise ValueError(f"Vertex {v} outside [{dom.l}]")
    inner = dom.inner

    def formula(p: int, g: VarId) -> Polynomial:
        label = MonotoneMap.constant(p, dom.l, v)
        resolved = inner.resolve(p, g)
        return f.eval(p, _attach(resolved, label))

    return SAlgMorphism(name or f"{f.name}|vertex={v}", inner, f.codomain, formula)


def induced_morphism(cover: SAlgMorphism, domain: Presentation, codomain: Presentation,
                     name: Optional[str] = None) -> SAlgMorphism:
    """
    The map between quotients induced by `cover`: lift a quotient generator to
    the covering presentation (same name), apply `cover`, project into the
    codomain quotient. Whether it is well defined is what check_well_defined
    decides.
    """

    def formula(p: int, v: VarId) -> Polynomial:
        return codomain.normalize(p, cover.formula_image(p, v))

    return SAlgMorphism(name or f"induced[{cover.name}]", domain, codomain, formula)


def specialize_morphism(f: SAlgMorphism, c: int, domain: Presentation,
                        codomain: Presentation) -> SAlgMorphism:
    """f with pi set to c, between the matching specialized presentations."""
    if domain.pi_value != c or codomain.pi_value != c:
        raise ValueError(f"Specialize {f.name}: endpoints are not specialized at pi={c}")
    return SAlgMorphism(f"{f.name}|pi={c}", domain, codomain,
                        lambda p, v: f.formula(p, v).specialize_pi(c))


# Declarative presentations

def _family(text: str) -> Family:
    try:
        return Family(str(text).lower())
    except ValueError:
        raise PresentationError(f"Unknown generator family: {text}")


def _rule(text) -> Optional[IndexRule]:
    return None if text is None else IndexRule(str(text))


def presentation_from_dict(data: Mapping) -> ChainPresentation:
    """
    Build a chain presentation from a description:

        name: kA(2)⊗kA(2)
        chains:
          - {family: t, factor: 1, low: "pi^2"}
          - {family: t, factor: 2, low: "pi^2"}
        identifications:
          - {from: [u, 1], to: [t, 2]}
        faces: "Piecewise((j, j <= i), (j - 1, True))"         # optional, default for every chain
        degeneracies: "Piecewise((j, j <= i), (j + 1, True))"  # optional, default for every chain
        simplex: 1        # optional Delta^l tensoring

    A chain entry may carry its own faces / degeneracies; without any, the
    bar rule applies.

    Raises:
        PresentationError: If the description is malformed
    """
    if 'chains' not in data:
        raise PresentationError("Presentation description needs a 'chains' list")
    default_faces, default_degeneracies = _rule(data.get('faces')), _rule(data.get('degeneracies'))
    chains = []
    for entry in data['chains']:
        try:
            low = entry.get('low')
            chains.append(Chain(_family(entry['family']), int(entry['factor']),
                                None if low is None else parse_polynomial(str(low)),
                                _rule(entry.get('faces')) or default_faces,
                                _rule(entry.get('degeneracies')) or default_degeneracies))
        except (KeyError, TypeError, ValueError) as e:
            raise PresentationError(f"Bad chain entry {entry}: {e}")
    identifications = {}
    for entry in data.get('identifications') or []:
        try:
            src, dst = entry['from'], entry['to']
            identifications[(_family(src[0]), int(src[1]))] = (_family(dst[0]), int(dst[1]))
        except (KeyError, TypeError, IndexError, ValueError) as e:
            raise PresentationError(f"Bad identification {entry}: {e}")
    return ChainPresentation(str(data.get('name', 'declared')), chains, identifications)


def load_presentation(path: Union[str, Path]) -> Presentation:
    """
    Load a declarative presentation file (YAML, or JSON as a YAML subset).

    Raises:
        FileNotFoundError: If the file does not exist
        PresentationError: If its contents are malformed
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Presentation file not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise PresentationError(f"{path}: {e}")
    if not isinstance(data, dict):
        raise PresentationError(f"{path}: expected a mapping at top level")
    presentation: Presentation = presentation_from_dict(data)
    if data.get('simplex') is not None:
        presentation = SimplexTensor(int(data['simplex']), presentation)
    return presentation


def dump_presentation(P: Presentation, p_max: int) -> Dict:
    """Expanded levels 0..p_max as a JSON-ready dict."""
    levels = []
    for p in range(p_max + 1):
        free = P.free_generators(p)
        level = {
            'level': p,
            'free': [str(g) for g in free],
            'aliases': {str(v): P.resolve(p, v).to_text() for v in P.alias_generators(p)},
            'faces': {},
            'degeneracies': {},
        }
        if p >= 1:
            for i in range(p + 1):
                level['faces'][f"d{i}"] = {str(g): P.face_generator(p, i, g).to_text() for g in free}
        if p + 1 <= p_max:
            for i in range(p + 1):
                level['degeneracies'][f"s{i}"] = {str(g): P.degeneracy_generator(p, i, g).to_text()
                                                  for g in free}
        levels.append(level)
    return {'name': P.name, 'p_max': p_max, 'levels': levels}


def dump_presentation_json(P: Presentation, p_max: int) -> str:
    return json.dumps(dump_presentation(P, p_max), indent=2, ensure_ascii=False, sort_keys=True)


# Registry

def check_same_levels(P: Presentation, Q: Presentation, p_max: int, check_id: str) -> CheckResult:
    """P and Q expand to the same levels (free generators, aliases, faces, degeneracies)."""
    lhs, rhs = dump_presentation(P, p_max)['levels'], dump_presentation(Q, p_max)['levels']
    for left, right in zip(lhs, rhs):
        if left != right:
            return failed(check_id, Counterexample(left['level'], None, "levels",
                                                   json.dumps(left, sort_keys=True, ensure_ascii=False),
                                                   json.dumps(right, sort_keys=True, ensure_ascii=False)))
    return passed(check_id, p_max=p_max)


def check_declared(path: Path, reference: Presentation, p_max: int, check_id: str) -> CheckResult:
    """A description file is simplicial and expands to the same levels as the reference."""
    P = load_presentation(path)
    return first_failure(check_id, [check_presentation(P, p_max, check_id),
                                    check_same_levels(P, reference, p_max, check_id)], p_max=p_max)


def check_label_independence(P: Presentation, l: int, p_max: int, check_id: str) -> CheckResult:
    """Restricting the collapse Delta^l (x) P -> Delta^0 (x) P to any vertex gives the same map."""
    collapse = label_morphism(MonotoneMap.constant(l, 0, 0), P)
    reference = vertex_restriction(collapse, 0)
    return first_failure(check_id, [morphisms_equal(vertex_restriction(collapse, v), reference, p_max, check_id)
                                    for v in range(l + 1)], l=l)


def registered_checks(bounds, presentations: Mapping[str, Presentation],
                      declarative: Optional[Mapping[str, Tuple[Path, Presentation]]] = None,
                      l_max: int = 2) -> Iterator[CheckSpec]:
    """
    Presentation-level checks on the supplied presentations.

    Args:
        bounds: Provides p_max
        presentations: Named presentations to certify
        declarative: name -> (description file, presentation it must reproduce)
        l_max: Largest simplex tensored onto each presentation
    """
    p_max = bounds.p_max
    const = constant_presentation()
    yield CheckSpec("salg.presentation.const", 'salg', "constant simplicial algebra",
                    lambda: check_presentation(const, p_max, "salg.presentation.const"))
    for name, P in presentations.items():
        yield CheckSpec(f"salg.presentation.{name}", 'salg', "simplicial identities",
                        lambda P=P, name=name: check_presentation(P, p_max, f"salg.presentation.{name}"))
        yield CheckSpec(f"salg.identity.{name}", 'salg', "identity morphism",
                        lambda P=P, name=name: check_morphism(identity_morphism(P), p_max,
                                                              f"salg.identity.{name}"))
        for l in range(l_max + 1):
            check_id = f"salg.simplex_tensor.l={l}.{name}"
            yield CheckSpec(check_id, 'salg', "Delta^l (x) R is simplicial",
                            lambda P=P, l=l, check_id=check_id:
                            check_presentation(SimplexTensor(l, P), p_max, check_id))
        yield CheckSpec(f"salg.label.{name}", 'salg', "label maps Delta^0 -> Delta^1",
                        lambda P=P, name=name: label_morphism(delta(1, 0), P).certify(p_max)
                        .with_id(f"salg.label.{name}"))
        yield CheckSpec(f"salg.vertex.{name}", 'salg', "vertex restriction of label-independent maps",
                        lambda P=P, name=name: check_label_independence(P, l_max, p_max, f"salg.vertex.{name}"))
        if isinstance(P, ChainPresentation):
            yield CheckSpec(f"salg.tensor_unit.{name}", 'salg', "constant algebra is the tensor unit",
                            lambda P=P, name=name: check_same_levels(
                                P, tensor_over_A(P, const), p_max, f"salg.tensor_unit.{name}"))
    for name, (path, reference) in (declarative or {}).items():
        yield CheckSpec(f"salg.declarative.{name}", 'salg', "declarative presentation file",
                        lambda path=path, reference=reference, name=name: check_declared(
                            path, reference, p_max, f"salg.declarative.{name}"))
