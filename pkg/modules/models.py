"""
Models Module
The named simplicial algebras (bar construction, k_A(m), K_A and their
tensor products and quotients) and the structural morphisms between them:
can maps, the cyclic actions, the slot permutation zeta, the skip
morphisms f/g, their composites and the auxiliary diagrams
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

from modules import mutations
from modules.checks import CheckResult, CheckSpec, Counterexample, failed, first_failure, passed
from modules.poly import Family, Polynomial, VarId
from modules.salg import (
    Chain,
    ChainKey,
    ChainPresentation,
    SAlgMorphism,
    chain_morphism,
    check_presentation,
    compose_chain,
    compose_morphisms,
    identity_morphism,
    induced_morphism,
    invert_chain_morphism,
    morphisms_equal,
    quotient,
    quotient_map,
    tensor_over_A,
)

T, U = Family.T, Family.U

_ARITY = {
    'BarAtA': 0,
    'kA': 1,
    'kA_tensor': 2,
    'K_A': 0,
    'K_A_tensor_A': 1,
    'K_A_tensor_kA': 1,
    'K_A_tensor_A_kAe': 1,
    'kA_quotient_of_K': 1,
    'kA_diagonal_of_K': 1,
    'kAe_tensor_A_K_A': 1,
}

KINDS = tuple(_ARITY)


@dataclass(frozen=True)
class ModelId:
    """
    Name of a built-in model, e.g. ModelId('kA', (2,)) for k_A(2).

    Ids that present the same chains are canonicalized: kA_tensor(1,m) is
    kA(m); a single K_A factor in any tensor kind is K_A.
    """

    kind: str
    params: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ValueError(f"Unknown model kind: {self.kind}")
        params = tuple(int(x) for x in self.params)
        if len(params) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} parameter(s), got {len(params)}")
        if self.kind in ('kA_tensor', 'K_A_tensor_A', 'K_A_tensor_kA', 'kA_quotient_of_K', 'kA_diagonal_of_K'):
            if params[0] < 1:
                raise ValueError(f"{self.kind}: factor count must be >= 1, got {params[0]}")
        if self.kind == 'kA' and params[0] < 1:
            raise ValueError(f"kA: m must be >= 1, got {params[0]}")
        if self.kind == 'kA_tensor' and params[1] < 1:
            raise ValueError(f"kA_tensor: m must be >= 1, got {params[1]}")
        if self.kind in ('K_A_tensor_A_kAe', 'kAe_tensor_A_K_A') and params[0] < 0:
            raise ValueError(f"{self.kind}: e must be >= 0, got {params[0]}")

        kind = self.kind
        if kind == 'kA_tensor' and params[0] == 1:
            kind, params = 'kA', (params[1],)
        elif kind in ('K_A_tensor_A', 'K_A_tensor_kA') and params[0] == 1:
            kind, params = 'K_A', ()
        elif kind in ('K_A_tensor_A_kAe', 'kAe_tensor_A_K_A') and params[0] == 0:
            kind, params = 'K_A', ()
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'params', params)

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return f"{self.kind}({','.join(str(x) for x in self.params)})"

    @classmethod
    def parse(cls, text: str) -> "ModelId":
        """
        Parse `kA(2)`, `kA_tensor(3,1)`, `K_A`, ...

        Raises:
            ValueError: If the text names no model
        """
        match = re.fullmatch(r"\s*([A-Za-z_]+)\s*(?:\(([\d,\s]*)\))?\s*", text)
        if not match:
            raise ValueError(f"Invalid model id: {text}")
        params = tuple(int(x) for x in (match.group(2) or "").split(",") if x.strip())
        return cls(match.group(1), params)


def kA(m: int) -> ModelId:
    return ModelId('kA', (m,))


def kA_tensor(n: int, m: int = 1) -> ModelId:
    return ModelId('kA_tensor', (n, m))


K_A = ModelId('K_A')


def K_A_tensor_A(n: int) -> ModelId:
    return ModelId('K_A_tensor_A', (n,))


def K_A_tensor_kA(c: int) -> ModelId:
    return ModelId('K_A_tensor_kA', (c,))


def K_A_tensor_A_kAe(e: int) -> ModelId:
    return ModelId('K_A_tensor_A_kAe', (e,))


def kA_quotient_of_K(c: int) -> ModelId:
    return ModelId('kA_quotient_of_K', (c,))


def kA_diagonal_of_K(c: int) -> ModelId:
    return ModelId('kA_diagonal_of_K', (c,))


def kAe_tensor_A_K_A(e: int) -> ModelId:
    return ModelId('kAe_tensor_A_K_A', (e,))


def _tensor_power(factor: ChainPresentation, n: int, name: str) -> ChainPresentation:
    result = factor
    for _ in range(n - 1):
        result = tensor_over_A(result, factor)
    result.name = name
    return result


@lru_cache(maxsize=None)
def build(model: ModelId) -> ChainPresentation:
    """
    The presentation of a built-in model; level 0 is Z[pi] for every kind
    except the bar construction, whose level 0 is A[t^(0)].
    """
    name = str(model)
    kind, params = model.kind, model.params
    if kind == 'BarAtA':
        return ChainPresentation(name, [Chain(T, 1, None)])
    if kind == 'kA':
        return ChainPresentation(name, [Chain(T, 1, Polynomial.pi_power(params[0]))])
    if kind == 'kA_tensor':
        return _tensor_power(build(kA(params[1])), params[0], name)
    if kind == 'K_A':
        k = build(kA(1))
        return tensor_over_A(k, k, shift=0, families={T: U}, name=name)
    if kind == 'K_A_tensor_A':
        return _tensor_power(build(K_A), params[0], name)
    if kind == 'K_A_tensor_kA':
        c = params[0]
        return quotient(build(K_A_tensor_A(c)), {(U, a): (T, a + 1) for a in range(1, c)}, name)
    if kind == 'kA_quotient_of_K':
        c = params[0]
        return quotient(build(K_A_tensor_kA(c)), {(U, c): (T, 1)}, name)
    if kind == 'kA_diagonal_of_K':
        c = params[0]
        return quotient(build(K_A_tensor_A(c)), {(U, a): (T, a) for a in range(1, c + 1)}, name)
    if kind == 'K_A_tensor_A_kAe':
        e = params[0]
        return quotient(build(K_A_tensor_A(e + 1)), {(U, a): (T, a) for a in range(2, e + 2)}, name)
    if kind == 'kAe_tensor_A_K_A':
        e = params[0]
        return quotient(build(K_A_tensor_A(e + 1)), {(U, a): (T, a) for a in range(1, e + 1)}, name)
    raise ValueError(f"Unknown model kind: {kind}")


def factor_count(P: ChainPresentation) -> int:
    return max((a for _, a in P.chains), default=0)


def all_model_ids(m_max: int = 4, n_max: int = 3, c_max: int = 4, e_max: int = 3) -> List[ModelId]:
    """The built-in models certified by `models check --all`, without duplicates."""
    ids = [ModelId('BarAtA'), K_A]
    ids += [kA(m) for m in range(1, m_max + 1)]
    ids += [kA_tensor(n, m) for n in range(2, n_max + 1) for m in range(1, m_max + 1)]
    ids += [K_A_tensor_A(n) for n in range(2, n_max + 1)]
    ids += [K_A_tensor_kA(c) for c in range(2, c_max + 1)]
    ids += [kA_quotient_of_K(c) for c in range(1, c_max + 1)]
    ids += [kA_diagonal_of_K(c) for c in range(1, c_max + 1)]
    ids += [K_A_tensor_A_kAe(e) for e in range(1, e_max + 1)]
    ids += [kAe_tensor_A_K_A(e) for e in range(1, e_max + 1)]
    return ids


# Permutation tables

def rho_table(n: int) -> Dict[int, int]:
    """rho_n = (1 -> 2 -> ... -> n -> 1)."""
    if n < 1:
        raise ValueError(f"rho_n needs n >= 1, got {n}")
    return {a: a % n + 1 for a in range(1, n + 1)}


def rho_power(n: int, b: int, a: int) -> int:
    """rho_n^b(a), read off the table; negative b rotates backwards."""
    table = rho_table(n)
    for _ in range(b % n):
        a = table[a]
    return a


def varrho_table(c: int) -> Dict[int, int]:
    """varrho_c: [c] -> {1..c}, i -> i+1 for i < c and c -> 1."""
    if c < 1:
        raise ValueError(f"varrho_c needs c >= 1, got {c}")
    table = {i: i + 1 for i in range(c)}
    table[c] = c if mutations.is_active('varrho_fixed_point') else 1
    return table


# Structural morphisms

@lru_cache(maxsize=None)
def can_map(m_hi: int, m_lo: int, n: int = 1) -> SAlgMorphism:
    """
    can(m_hi, m_lo)^{(x)n}: t^(j)_a -> pi^(m_hi - m_lo) t^(j)_a.

    Raises:
        ValueError: If m_hi < m_lo or m_lo < 1
    """
    if m_lo < 1 or m_hi < m_lo:
        raise ValueError(f"can({m_hi},{m_lo}) needs m_hi >= m_lo >= 1")
    dom, cod = build(kA_tensor(n, m_hi)), build(kA_tensor(n, m_lo))
    name = f"can({m_hi},{m_lo})^{n}"
    f = chain_morphism(dom, cod, {}, scale=m_hi - m_lo, name=name)
    if not mutations.is_active('corrupt_can'):
        return f
    clean = f.formula

    def corrupted(p: int, v: VarId) -> Polynomial:
        image = clean(p, v)
        return image + 1 if 1 <= v.j <= p else image

    return SAlgMorphism(name, dom, cod, corrupted)


def _rotation(model: ModelId, n: int, index: Dict[int, int], name: str,
              target: Optional[ModelId] = None) -> SAlgMorphism:
    P = build(model)
    Q = build(target or model)
    chain_map = {key: (key[0], index[key[1]]) for key in P.chains}
    return chain_morphism(P, Q, chain_map, name=name)


@lru_cache(maxsize=None)
def rho_action(n: int, b: int, target: ModelId) -> SAlgMorphism:
    """
    The automorphism t^(j)_a -> t^(j)_{rho_n^b(a)} of a tensor model with n factors.

    Raises:
        ValueError: If the model does not have n factors or b is outside [n-1]
    """
    P = build(target)
    if factor_count(P) != n:
        raise ValueError(f"{target} has {factor_count(P)} tensor factors, not {n}")
    if not 0 <= b <= n - 1:
        raise ValueError(f"rho power {b} outside [{n - 1}]")
    return _rotation(target, n, {a: rho_power(n, b, a) for a in range(1, n + 1)}, f"rho_{n}^{b}[{target}]")


@lru_cache(maxsize=None)
def incl_factor(n: int, b: int, m: int = 1) -> SAlgMorphism:
    """k_A(m) -> k_A^{(x)n}(m), t -> t_b."""
    if not 1 <= b <= n:
        raise ValueError(f"Factor {b} outside 1..{n}")
    return chain_morphism(build(kA(m)), build(kA_tensor(n, m)), {(T, 1): (T, b)}, name=f"incl_{b}^{n}({m})")


def incl_first(n: int) -> SAlgMorphism:
    return incl_factor(n, 1, n)


# zeta and the two presentations of k_A^{(x)c}

@lru_cache(maxsize=None)
def zeta_automorphism(n: int) -> SAlgMorphism:
    """The even-slot rotation on K_A^{(x)n}: u_a -> u_{a+1}, u_n -> u_1, t fixed."""
    P = build(K_A_tensor_A(n))
    chain_map = {(U, a): (U, rho_power(n, 1, a)) for a in range(1, n + 1)}
    return chain_morphism(P, P, chain_map, name=f"zeta_{n}")


@lru_cache(maxsize=None)
def zeta_lift(n: int) -> SAlgMorphism:
    """zeta_n on K_A^{(x)_kA n} -> K_A (x)_A k_A^{(x)(n-1)}."""
    return induced_morphism(zeta_automorphism(n), build(K_A_tensor_kA(n)), build(K_A_tensor_A_kAe(n - 1)),
                            name=f"zeta_{n}[lift]")


@lru_cache(maxsize=None)
def zeta(n: int) -> SAlgMorphism:
    """zeta_n descended to the quotients: kA_quotient_of_K(n) -> kA_diagonal_of_K(n)."""
    return induced_morphism(zeta_automorphism(n), build(kA_quotient_of_K(n)), build(kA_diagonal_of_K(n)),
                            name=f"zeta_{n}[quot]")


@lru_cache(maxsize=None)
def direct_to_quotient(c: int) -> SAlgMorphism:
    return chain_morphism(build(kA_tensor(c, 1)), build(kA_quotient_of_K(c)), {}, name=f"iso_{c}[direct->quot]")


@lru_cache(maxsize=None)
def quotient_to_direct(c: int) -> SAlgMorphism:
    return chain_morphism(build(kA_quotient_of_K(c)), build(kA_tensor(c, 1)), {}, name=f"iso_{c}[quot->direct]")


@lru_cache(maxsize=None)
def direct_to_diagonal(c: int) -> SAlgMorphism:
    return chain_morphism(build(kA_tensor(c, 1)), build(kA_diagonal_of_K(c)), {}, name=f"iso_{c}[direct->diag]")


@lru_cache(maxsize=None)
def diagonal_to_direct(c: int) -> SAlgMorphism:
    return chain_morphism(build(kA_diagonal_of_K(c)), build(kA_tensor(c, 1)), {}, name=f"iso_{c}[diag->direct]")


@lru_cache(maxsize=None)
def zeta_transport(n: int) -> SAlgMorphism:
    """zeta_n as an endomorphism of the direct presentation k_A^{(x)n}."""
    return compose_chain(diagonal_to_direct(n), zeta(n), direct_to_quotient(n), name=f"zeta_{n}")


def check_zeta(n: int, p_max: int) -> CheckResult:
    """Descent and lift squares of zeta_n, and its order n on K_A^{(x)n}."""
    check_id = f"models.zeta.n={n}"
    descent = morphisms_equal(
        compose_morphisms(quotient_map(build(K_A_tensor_A_kAe(n - 1)), build(kA_diagonal_of_K(n))), zeta_lift(n)),
        compose_morphisms(zeta(n), quotient_map(build(K_A_tensor_kA(n)), build(kA_quotient_of_K(n)))),
        p_max, f"{check_id}.descent")
    lift = morphisms_equal(
        compose_morphisms(zeta_lift(n), quotient_map(build(K_A_tensor_A(n)), build(K_A_tensor_kA(n)))),
        compose_morphisms(quotient_map(build(K_A_tensor_A(n)), build(K_A_tensor_A_kAe(n - 1))),
                          zeta_automorphism(n)),
        p_max, f"{check_id}.lift")
    results = [zeta_automorphism(n).certify(p_max), zeta_lift(n).certify(p_max), zeta(n).certify(p_max),
               descent, lift, check_order(zeta_automorphism(n), n, p_max, f"{check_id}.order")]
    return first_failure(check_id, results, n=n, p_max=p_max)


def check_order(f: SAlgMorphism, order: int, p_max: int, check_id: str) -> CheckResult:
    """f^order = id, and no smaller positive power is the identity."""
    identity = identity_morphism(f.domain)
    power = f
    for k in range(1, order):
        if morphisms_equal(power, identity, p_max).passed:
            return failed(check_id, Counterexample(None, k, f.name, f"{f.name}^{k}", "id"),
                          detail=f"order divides {k}")
        power = compose_morphisms(f, power)
    return morphisms_equal(power, identity, p_max, check_id).with_id(check_id)


# Skip morphisms

def _check_r(c: int, r: int):
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if not 0 <= r <= c:
        raise ValueError(f"r = {r} outside [{c}]")


@lru_cache(maxsize=None)
def f_tilde(c: int, r: int) -> SAlgMorphism:
    """K_A^{(x)_kA c} -> K_A^{(x)_kA c+1}: skips the generators t_{R+1} = u_R, R = varrho_c(r)."""
    _check_r(c, r)
    R = varrho_table(c)[r]
    chain_map: Dict[ChainKey, ChainKey] = {}
    for a in range(1, c + 1):
        chain_map[(T, a)] = (T, a if a <= R else a + 1)
        chain_map[(U, a)] = (U, a if a <= R - 1 else a + 1)
    return chain_morphism(build(K_A_tensor_kA(c)), build(K_A_tensor_kA(c + 1)), chain_map,
                          name=f"f~({c},{r})")


@lru_cache(maxsize=None)
def f_skip_quotient(c: int, r: int) -> SAlgMorphism:
    return induced_morphism(f_tilde(c, r), build(kA_quotient_of_K(c)), build(kA_quotient_of_K(c + 1)),
                            name=f"f({c},{r})[quot]")


@lru_cache(maxsize=None)
def f_skip(c: int, r: int) -> SAlgMorphism:
    """f^(c)_r: k_A^{(x)c} -> k_A^{(x)c+1} on the direct presentations."""
    return compose_chain(quotient_to_direct(c + 1), f_skip_quotient(c, r), direct_to_quotient(c),
                         name=f"f({c},{r})")


@lru_cache(maxsize=None)
def g_tilde(c: int, r: int) -> SAlgMorphism:
    """K_A (x)_A k_A^{(x)c-1} -> K_A (x)_A k_A^{(x)c}: t_a and u_a re-indexed by the same rule."""
    _check_r(c, r)
    R = varrho_table(c)[r]
    chain_map: Dict[ChainKey, ChainKey] = {}
    for a in range(1, c + 1):
        target = a if a <= R else a + 1
        chain_map[(T, a)] = (T, target)
        chain_map[(U, a)] = (U, target)
    return chain_morphism(build(K_A_tensor_A_kAe(c - 1)), build(K_A_tensor_A_kAe(c)), chain_map,
                          name=f"g~({c},{r})")


@lru_cache(maxsize=None)
def g_skip_diagonal(c: int, r: int) -> SAlgMorphism:
    return induced_morphism(g_tilde(c, r), build(kA_diagonal_of_K(c)), build(kA_diagonal_of_K(c + 1)),
                            name=f"g({c},{r})[diag]")


@lru_cache(maxsize=None)
def g_skip(c: int, r: int) -> SAlgMorphism:
    """g^(c)_r: k_A^{(x)c} -> k_A^{(x)c+1} on the direct presentations."""
    return compose_chain(diagonal_to_direct(c + 1), g_skip_diagonal(c, r), direct_to_diagonal(c),
                         name=f"g({c},{r})")


@dataclass(frozen=True)
class DVector:
    """A vector (d_start, d_start+1, ...) with d_s in [s]."""

    start: int
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(self.values))
        for offset, value in enumerate(self.values):
            s = self.start + offset
            if not 0 <= value <= s:
                raise ValueError(f"d_{s} = {value} outside [{s}]")

    @property
    def stop(self) -> int:
        """One past the last index."""
        return self.start + len(self.values)

    def __getitem__(self, s: int) -> int:
        if not self.start <= s < self.stop:
            raise ValueError(f"d_{s} not supplied (have d_{self.start}..d_{self.stop - 1})")
        return self.values[s - self.start]

    def restrict(self, lo: int, hi: int) -> "DVector":
        """The entries d_lo .. d_hi (inclusive)."""
        return DVector(lo, tuple(self[s] for s in range(lo, hi + 1)))

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.values) + "]"


def enumerate_d_vectors(lo: int, hi: int) -> List[DVector]:
    """Every d = (d_lo, ..., d_hi) with d_s in [s]."""
    vectors = [()]
    for s in range(lo, hi + 1):
        vectors = [v + (x,) for v in vectors for x in range(s + 1)]
    return [DVector(lo, v) for v in vectors]


def _composite(kind: str, a: int, b: int, d: DVector, step, endpoint) -> SAlgMorphism:
    if a > b:
        raise ValueError(f"Composite [{a},{b}] needs a <= b")
    if a == b:
        return identity_morphism(endpoint(a))
    maps = [step(s, d[s]) for s in range(a, b)]
    return compose_chain(*reversed(maps), name=f"{kind}[{a},{b}]_{d.restrict(a, b - 1)}")


@lru_cache(maxsize=None)
def f_composite(a: int, b: int, d: DVector, form: str = 'direct') -> SAlgMorphism:
    """f^{[a,b]}_d = f^(b-1)_{d_{b-1}} o ... o f^(a)_{d_a}; form 'direct' or 'quotient'."""
    if form == 'direct':
        return _composite('f', a, b, d, f_skip, lambda c: build(kA_tensor(c, 1)))
    if form == 'quotient':
        return _composite('f~q', a, b, d, f_skip_quotient, lambda c: build(kA_quotient_of_K(c)))
    raise ValueError(f"Unknown presentation form: {form}")


@lru_cache(maxsize=None)
def g_composite(a: int, b: int, d: DVector, form: str = 'direct') -> SAlgMorphism:
    """g^{[a,b]}_d; form 'direct' or 'diagonal'."""
    if form == 'direct':
        return _composite('g', a, b, d, g_skip, lambda c: build(kA_tensor(c, 1)))
    if form == 'diagonal':
        return _composite('g~d', a, b, d, g_skip_diagonal, lambda c: build(kA_diagonal_of_K(c)))
    raise ValueError(f"Unknown presentation form: {form}")


def check_skip(c: int, p_max: int) -> CheckResult:
    """Every f/g skip map for this c is certified, and r = 0 agrees with r = c."""
    check_id = f"models.skip.c={c}"
    results = []
    for r in range(c + 1):
        for f in (f_tilde(c, r), f_skip_quotient(c, r), f_skip(c, r),
                  g_tilde(c, r), g_skip_diagonal(c, r), g_skip(c, r)):
            results.append(f.certify(p_max))
    results.append(morphisms_equal(f_skip(c, 0), f_skip(c, c), p_max, f"{check_id}.f0=fc"))
    results.append(morphisms_equal(g_skip(c, 0), g_skip(c, c), p_max, f"{check_id}.g0=gc"))
    return first_failure(check_id, results, c=c, p_max=p_max)


def check_f_vs_g(c: int, r: int, p_max: int) -> CheckResult:
    """zeta_{c+1} o f^(c)_r = g^(c)_r o zeta_c on the quotient presentations."""
    return morphisms_equal(compose_morphisms(zeta(c + 1), f_skip_quotient(c, r)),
                           compose_morphisms(g_skip_diagonal(c, r), zeta(c)),
                           p_max, f"models.f_vs_g.c={c}.r={r}")


def check_composite_f_vs_g(a: int, b: int, d: DVector, p_max: int) -> CheckResult:
    """zeta_b o f^{[a,b]}_d = g^{[a,b]}_d o zeta_a."""
    return morphisms_equal(compose_morphisms(zeta(b), f_composite(a, b, d, 'quotient')),
                           compose_morphisms(g_composite(a, b, d, 'diagonal'), zeta(a)),
                           p_max, f"models.composite_f_vs_g.a={a}.b={b}.d={d}")


def check_rho(n: int, p_max: int, m: int = 1) -> CheckResult:
    """rho_n acting on k_A^{(x)n}(m) is simplicial and has order n."""
    check_id = f"models.rho.n={n}"
    target = kA_tensor(n, m)
    results = [rho_action(n, b, target).certify(p_max) for b in range(n)]
    results.append(check_order(rho_action(n, 1 % n, target),
                               n, p_max, f"{check_id}.order"))
    return first_failure(check_id, results, n=n, p_max=p_max)


# Auxiliary diagrams

def _relabel(dom: ChainPresentation, cod: ChainPresentation, rule, name: str) -> Tuple[SAlgMorphism, dict]:
    chain_map = {key: rule(*key) for key in dom.chains}
    return chain_morphism(dom, cod, chain_map, name=name), chain_map


def _witness(result: CheckResult, check_id: str) -> CheckResult:
    """A square that is expected NOT to commute strictly: pass iff a discrepancy is found."""
    if result.passed:
        return failed(check_id, Counterexample(None, None, "square", "commutes", "expected a discrepancy"))
    ce = result.counterexample
    return passed(check_id, detail=f"discrepancy at {ce.generator}: {ce.lhs} vs {ce.rhs}")


@dataclass
class AuxDiagram:
    maps: Dict[str, SAlgMorphism]
    squares: Dict[str, Tuple[SAlgMorphism, SAlgMorphism]]
    isomorphisms: Dict[str, Tuple[SAlgMorphism, SAlgMorphism]]
    witnesses: Dict[str, Tuple[SAlgMorphism, SAlgMorphism]]


@lru_cache(maxsize=None)
def f_aux_diagram(c: int) -> AuxDiagram:
    """The theta/phi/psi diagram exhibiting f^(c)_c."""
    KA_c1 = build(K_A_tensor_A(c + 1))
    Q1 = quotient(KA_c1, {(U, c + 1): (T, 1)}, f"K_A^⊗{c + 1}/(u{c + 1}=t1)")
    Q2 = quotient(Q1, {(U, a): (T, a) for a in range(2, c + 1)}, f"K_A^⊗{c + 1}/(u{c + 1}=t1,u_a=t_a)")
    KkA_c, KkA_c1 = build(K_A_tensor_kA(c)), build(K_A_tensor_kA(c + 1))

    def shift_rule(family, a):
        return (U, a) if family is T else (T, a + 1)

    theta, _ = _relabel(build(K_A_tensor_A(c)), Q1, shift_rule, f"theta({c})")
    psi, _ = _relabel(KkA_c, Q2, shift_rule, f"psi({c})")

    def phi_rule(family, a):
        if family is T:
            return (U, a)
        if a == 1:
            return (T, 1)
        return (T, a + 1) if a <= c else (T, 2)

    phi, phi_map = _relabel(Q2, KkA_c1, phi_rule, f"phi({c})")
    phi_inv = invert_chain_morphism(phi, phi_map, name=f"phi({c})^-1")

    q = quotient_map
    squares = {
        'upper_right': (compose_morphisms(q(Q1, Q2), theta),
                        compose_morphisms(psi, q(build(K_A_tensor_A(c)), KkA_c))),
        'middle_right': (compose_morphisms(phi, psi), f_tilde(c, c)),
        'lower_right': (compose_morphisms(q(KkA_c1, build(kA_quotient_of_K(c + 1))), f_tilde(c, c)),
                        compose_morphisms(f_skip_quotient(c, c), q(KkA_c, build(kA_quotient_of_K(c))))),
        'middle_left': (compose_morphisms(phi, phi_inv), identity_morphism(KkA_c1)),
        'outer': (compose_chain(phi, q(Q1, Q2), theta),
                  compose_morphisms(f_tilde(c, c), q(build(K_A_tensor_A(c)), KkA_c))),
    }
    isomorphisms = {'phi': (phi, phi_inv)}
    witnesses = {
        'upper_left': (compose_morphisms(q(Q1, Q2), q(KA_c1, Q1)),
                       compose_morphisms(phi_inv, q(KA_c1, KkA_c1))),
    }
    maps = {'theta': theta, 'psi': psi, 'phi': phi, 'phi_inv': phi_inv}
    return AuxDiagram(maps, squares, isomorphisms, witnesses)


@lru_cache(maxsize=None)
def g_aux_diagram(c: int) -> AuxDiagram:
    """The omega/gamma/upsilon/tau diagram exhibiting g^(c)_c."""
    n = c + 1
    KA_c1 = build(K_A_tensor_A(n))
    Q1 = quotient(KA_c1, {(U, n): (T, n)}, f"K_A^⊗{n}/(u{n}=t{n})")
    Q2 = quotient(Q1, {(U, a): (T, a) for a in range(1, c)}, f"K_A^⊗{n}/(u{n}=t{n},u_a=t_a)")
    kK_c, kK_cm1 = build(kAe_tensor_A_K_A(c)), build(kAe_tensor_A_K_A(c - 1))
    Kk_c, Kk_cm1 = build(K_A_tensor_A_kAe(c)), build(K_A_tensor_A_kAe(c - 1))

    omega, _ = _relabel(build(K_A_tensor_A(c)), Q1, lambda f, a: (f, a), f"omega({c})")
    gamma, _ = _relabel(kK_cm1, Q2, lambda f, a: (f, a), f"gamma({c})")
    upsilon, upsilon_map = _relabel(Q2, Kk_c, lambda f, a: (f, rho_power(n, 2, a)), f"upsilon({c})")
    upsilon_inv = invert_chain_morphism(upsilon, upsilon_map, name=f"upsilon({c})^-1")
    tau, _ = _relabel(kK_c, Q2, lambda f, a: (f, rho_power(n, -1, a)), f"tau({c})")
    rho_c1, _ = _relabel(kK_c, Kk_c, lambda f, a: (f, rho_power(n, 1, a)), f"rho_{n}")
    rho_c, _ = _relabel(kK_cm1, Kk_cm1, lambda f, a: (f, rho_power(c, 1, a)), f"rho_{c}")

    q = quotient_map
    squares = {
        'upper_right': (compose_morphisms(q(Q1, Q2), omega),
                        compose_morphisms(gamma, q(build(K_A_tensor_A(c)), kK_cm1))),
        'middle_right': (compose_morphisms(upsilon, gamma), compose_morphisms(g_tilde(c, c), rho_c)),
        'middle_left': (compose_morphisms(upsilon, tau), rho_c1),
        'lower_right': (compose_morphisms(q(Kk_c, build(kA_diagonal_of_K(n))), g_tilde(c, c)),
                        compose_morphisms(g_skip_diagonal(c, c), q(Kk_cm1, build(kA_diagonal_of_K(c))))),
        'outer': (compose_chain(upsilon, q(Q1, Q2), omega),
                  compose_chain(g_tilde(c, c), rho_c, q(build(K_A_tensor_A(c)), kK_cm1))),
    }
    isomorphisms = {'upsilon': (upsilon, upsilon_inv)}
    witnesses = {
        'upper_left': (compose_morphisms(q(Q1, Q2), q(KA_c1, Q1)),
                       compose_morphisms(tau, q(KA_c1, kK_c))),
    }
    maps = {'omega': omega, 'gamma': gamma, 'upsilon': upsilon, 'upsilon_inv': upsilon_inv,
            'tau': tau, f'rho_{n}': rho_c1, f'rho_{c}': rho_c}
    return AuxDiagram(maps, squares, isomorphisms, witnesses)


def check_aux_diagram(family: str, c: int, p_max: int) -> List[CheckResult]:
    """Certify every map, isomorphism, commuting square and witness square of one diagram."""
    diagram = f_aux_diagram(c) if family == 'f' else g_aux_diagram(c)
    prefix = f"models.aux.{family}.c={c}"
    results = [first_failure(f"{prefix}.maps", [f.certify(p_max) for f in diagram.maps.values()])]
    for name, (f, f_inv) in diagram.isomorphisms.items():
        results.append(first_failure(f"{prefix}.iso.{name}", [
            morphisms_equal(compose_morphisms(f, f_inv), identity_morphism(f.codomain), p_max),
            morphisms_equal(compose_morphisms(f_inv, f), identity_morphism(f.domain), p_max),
        ]))
    for name, (lhs, rhs) in diagram.squares.items():
        results.append(morphisms_equal(lhs, rhs, p_max, f"{prefix}.square.{name}"))
    for name, (lhs, rhs) in diagram.witnesses.items():
        results.append(_witness(morphisms_equal(lhs, rhs, p_max), f"{prefix}.witness.{name}"))
    return results


def aux_diagrams_check(c: int, p_max: int) -> CheckResult:
    return first_failure(f"models.aux.c={c}",
                         check_aux_diagram('f', c, p_max) + check_aux_diagram('g', c, p_max),
                         c=c, p_max=p_max)


def check_can(m_hi: int, m_lo: int, n: int, p_max: int) -> CheckResult:
    return can_map(m_hi, m_lo, n).certify(p_max).with_id(f"models.can.m'={m_hi}.m={m_lo}.n={n}")


def check_model(model: ModelId, p_max: int) -> CheckResult:
    return check_presentation(build(model), p_max, f"models.presentation.{model}")


for _cached in (build, can_map, rho_action, incl_factor, zeta_automorphism, zeta_lift, zeta,
                direct_to_quotient, quotient_to_direct, direct_to_diagonal, diagonal_to_direct, zeta_transport,
                f_tilde, f_skip_quotient, f_skip, g_tilde, g_skip_diagonal, g_skip, f_composite, g_composite,
                f_aux_diagram, g_aux_diagram):
    mutations.register_cache(_cached.cache_clear)


def check_can_composition(n: int, p_max: int) -> CheckResult:
    """can(2,1) o can(3,2) = can(3,1)."""
    return morphisms_equal(compose_morphisms(can_map(2, 1, n), can_map(3, 2, n)), can_map(3, 1, n),
                           p_max, f"models.can.compose.n={n}")


# Registry

STRUCTURE_P_MAX = 3
AUX_C_MAX = 3


def registered_checks(bounds) -> Iterator[CheckSpec]:
    """
    Model presentations, can maps, cyclic actions, zeta, skip maps and their
    composites, the f-vs-g squares and the auxiliary diagrams.

    The skip/composite/auxiliary families run at min(p_max, STRUCTURE_P_MAX).
    """
    p_max = bounds.p_max
    p_struct = min(p_max, STRUCTURE_P_MAX)
    c_max = bounds.n_max
    for model in all_model_ids(m_max=4, n_max=min(bounds.n_max, 3), c_max=c_max, e_max=3):
        yield CheckSpec(f"models.presentation.{model}", 'models', "cofibrant model is simplicial",
                        lambda model=model: check_model(model, p_max))
    for n in range(1, 4):
        for m_hi in range(1, 5):
            for m_lo in range(1, m_hi + 1):
                yield CheckSpec(f"models.can.m'={m_hi}.m={m_lo}.n={n}", 'models', "can(m',m)^n is simplicial",
                                lambda m_hi=m_hi, m_lo=m_lo, n=n: check_can(m_hi, m_lo, n, p_max))
        yield CheckSpec(f"models.can.compose.n={n}", 'models', "can maps compose",
                        lambda n=n: check_can_composition(n, p_max))
    for n in range(1, c_max + 1):
        yield CheckSpec(f"models.rho.n={n}", 'models', "cyclic action rho_n",
                        lambda n=n: check_rho(n, p_max))
    for n in range(1, c_max + 2):
        yield CheckSpec(f"models.zeta.n={n}", 'models', "slot permutation zeta_n",
                        lambda n=n: check_zeta(n, p_struct))
    for c in range(1, c_max + 1):
        yield CheckSpec(f"models.skip.c={c}", 'models', "skip maps f^(c)_r, g^(c)_r",
                        lambda c=c: check_skip(c, p_struct))
        for r in range(c + 1):
            yield CheckSpec(f"models.f_vs_g.c={c}.r={r}", 'models', "zeta o f = g o zeta",
                            lambda c=c, r=r: check_f_vs_g(c, r, p_struct))
    for a in range(1, c_max + 1):
        for b in range(a + 1, c_max + 1):
            for d in bounds.d_vectors(a, b - 1):
                yield CheckSpec(f"models.composite_f_vs_g.a={a}.b={b}.d={d}", 'models',
                                "zeta o f-composite = g-composite o zeta",
                                lambda a=a, b=b, d=d: check_composite_f_vs_g(a, b, d, p_struct))
    for c in range(1, min(c_max, AUX_C_MAX) + 1):
        yield CheckSpec(f"models.aux.c={c}", 'models', "auxiliary diagrams commute",
                        lambda c=c: aux_diagrams_check(c, p_struct))
