"""
Homotopy Module
The explicit coherent homotopies: h~ on Delta^{n-1} (x) k_A^{(x)n}(n), its
single-factor versions h and k, the t-factor and the master homotopies H
and K, together with their vertex and compatibility certificates
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional

from modules import mutations
from modules.checks import CheckResult, CheckSpec, Counterexample, failed, first_failure, passed, run_specs
from modules.models import (
    DVector,
    build,
    can_map,
    f_composite,
    f_skip,
    g_composite,
    g_skip,
    incl_factor,
    incl_first,
    kA,
    kA_tensor,
    rho_action,
    rho_power,
    zeta_transport,
)
from modules.poly import PI, Family, Polynomial, VarId
from modules.salg import (
    SAlgMorphism,
    SimplexTensor,
    compose_chain,
    compose_morphisms,
    label_morphism,
    morphisms_equal,
    simplex_tensor_morphism,
    vertex_restriction,
)
from modules.simplex import MonotoneMap, compose, delta, enumerate_maps, s_alpha

T = Family.T

H_TILDE_FORMULAS = ('primary', 'alternate')
T_FACTOR_READINGS = ('codomain', 'domain')


@dataclass(frozen=True)
class Realization:
    """
    Which reading of the ambiguous displays is in force.

    h_tilde_formula: 'primary' closes the sum with t_{rho^{n-1}(a)} times the
    full product; 'alternate' uses t_{rho^n(a)} and the product over rho^{i-1}(a).
    t_factor_reading: 'codomain' reads t^(0) in the t-factor as pi (the
    k_A^{(x)} alias), 'domain' as pi^{n+2}.
    """

    h_tilde_formula: str = 'primary'
    t_factor_reading: str = 'codomain'

    def __post_init__(self):
        if self.h_tilde_formula not in H_TILDE_FORMULAS:
            raise ValueError(f"Unknown h~ formula: {self.h_tilde_formula}")
        if self.t_factor_reading not in T_FACTOR_READINGS:
            raise ValueError(f"Unknown t-factor reading: {self.t_factor_reading}")

    def to_dict(self) -> dict:
        return {'h_tilde_formula': self.h_tilde_formula, 't_factor_reading': self.t_factor_reading}


DEFAULT_REALIZATION = Realization()


@dataclass(frozen=True)
class HomotopyParams:
    """n, m, k and d = (d_{m+1}, ..., d_{m+k}) of a master homotopy; n >= m + k."""

    n: int
    m: int
    k: int
    d: DVector

    def __post_init__(self):
        if self.m < 0 or self.k < 0:
            raise ValueError(f"m and k must be non-negative, got m={self.m}, k={self.k}")
        if self.n < self.m + self.k:
            raise ValueError(f"n = {self.n} < m + k = {self.m + self.k}")
        if self.d.start != self.m + 1 or len(self.d.values) != self.k:
            raise ValueError(f"d must be (d_{self.m + 1}, ..., d_{self.m + self.k}), got start {self.d.start} "
                             f"with {len(self.d.values)} entries")

    @property
    def label(self) -> str:
        return f"m={self.m}.k={self.k}.n={self.n}.d={self.d}"

    def lower(self) -> "HomotopyParams":
        """The (n-1, m, k-1) instance on the upper row of the compatibility diagram."""
        if self.k < 1:
            raise ValueError("k = 0 has no lower instance")
        return HomotopyParams(self.n - 1, self.m, self.k - 1, self.d.restrict(self.m + 1, self.m + self.k - 1))


# h~ and its single-factor versions

def _codomain_variable(P, p: int, s: int, b: int) -> Polynomial:
    return P.resolve(p, VarId(T, s, b))


@lru_cache(maxsize=None)
def h_tilde(n: int, formula: str = 'primary') -> SAlgMorphism:
    """
    h~^(n-1): Delta^{n-1} (x) k_A^{(x)n}(n) -> k_A^{(x)n}.

    t^(j)_a(alpha) maps to
        sum_{r=1}^{n-1} t^(j)_{rho^{r-1}a} P_{r-1} (pi - t^(S(r-1))_{rho^{r-1}a}) pi^{n-r-1}
        + t^(j)_{rho^{n-1}a} P_{n-1},
    with S = S_alpha and P_r = prod_{i<r} t^(S(i))_{rho^i a}.
    """
    if n < 1:
        raise ValueError(f"h~ needs n >= 1, got {n}")
    if formula not in H_TILDE_FORMULAS:
        raise ValueError(f"Unknown h~ formula: {formula}")
    domain = SimplexTensor(n - 1, build(kA_tensor(n, n)))
    codomain = build(kA_tensor(n, 1))
    step = 2 if mutations.is_active('rho_squared') else 1
    drop_last = mutations.is_active('drop_summand')

    def image(p: int, v: VarId) -> Polynomial:
        base, alpha = v.split_label()
        S = [s_alpha(alpha, i) for i in range(n)]
        a, j = base.a, base.j

        def t(s: int, power: int) -> Polynomial:
            return _codomain_variable(codomain, p, s, rho_power(n, step * power, a))

        total = Polynomial.zero()
        prefix = Polynomial.constant(1)
        for r in range(1, n):
            total = total + t(j, r - 1) * prefix * (PI - t(S[r - 1], r - 1)) * Polynomial.pi_power(n - r - 1)
            prefix = prefix * t(S[r - 1], r - 1)
        if drop_last:
            return total
        if formula == 'primary':
            return total + t(j, n - 1) * prefix
        closing = t(j, n)
        for i in range(n - 1):
            closing = closing * t(S[i], i - 1)
        return total + closing

    return SAlgMorphism(f"h~({n - 1})" + ("" if formula == 'primary' else "[alt]"), domain, codomain, image)


@lru_cache(maxsize=None)
def h_small(n: int, formula: str = 'primary') -> SAlgMorphism:
    """h^(n-1) = h~^(n-1) o (id (x) incl_1): Delta^{n-1} (x) k_A(n) -> k_A^{(x)n}."""
    h = h_tilde(n, formula)
    inclusion = simplex_tensor_morphism(n - 1, incl_first(n), codomain=h.domain)
    return compose_morphisms(h, inclusion, name=f"h({n - 1})")


@lru_cache(maxsize=None)
def k_small(n: int, formula: str = 'primary') -> SAlgMorphism:
    """k^(n-1) = zeta_n o h^(n-1)."""
    return compose_morphisms(zeta_transport(n), h_small(n, formula), name=f"k({n - 1})")


def h_tilde_vertex(n: int, i: int) -> SAlgMorphism:
    """The expected vertex i of h~: rho_n^i o can(n,1)^{(x)n}."""
    return compose_morphisms(rho_action(n, i, kA_tensor(n, 1)), can_map(n, 1, n))


def h_small_vertex(n: int, i: int) -> SAlgMorphism:
    """The expected vertex i of h: can(n,1) followed by the inclusion of factor i+1."""
    return compose_morphisms(incl_factor(n, i + 1, 1), can_map(n, 1, 1))


def h_tilde_vertex_check(n: int, p_max: int, formula: str = 'primary',
                         i: Optional[int] = None, level: Optional[int] = None) -> CheckResult:
    """
    vertex_restriction(h~, i) = rho_n^i o can(n,1)^{(x)n}, for one vertex or all,
    at one level or every level <= p_max.
    """
    vertices = range(n) if i is None else [i]
    levels = range(p_max + 1) if level is None else [level]
    check_id = f"h_tilde.vertex.n={n}"
    results = [morphisms_equal(vertex_restriction(h_tilde(n, formula), v), h_tilde_vertex(n, v), p_max,
                               f"{check_id}.i={v}", levels=levels)
               for v in vertices]
    return first_failure(check_id, results, n=n, p_max=p_max)


def h_tilde_telescoping_check(n: int, p_max: int, formula: str = 'primary') -> CheckResult:
    """The formula on t^(0) sums to pi^n and on t^(p+1) to 0, for every label and factor."""
    check_id = f"h_tilde.telescoping.n={n}"
    h = h_tilde(n, formula)
    for p in range(p_max + 1):
        for alpha in enumerate_maps(p, n - 1):
            for a in range(1, n + 1):
                for j, expected in ((0, Polynomial.pi_power(n)), (p + 1, Polynomial.zero())):
                    v = VarId(T, j, a, (alpha,))
                    value = h.formula_image(p, v)
                    if value != expected:
                        return failed(check_id, Counterexample(p, j, str(v), value.to_text(), expected.to_text()),
                                      n=n, p_max=p_max)
    return passed(check_id, n=n, p_max=p_max)


def h_tilde_simplicial_check(n: int, p_max: int, formula: str = 'primary') -> CheckResult:
    return h_tilde(n, formula).certify(p_max).with_id(f"h_tilde.simplicial.n={n}")


def small_vertex_check(n: int, p_max: int, variant: str = 'h', formula: str = 'primary') -> CheckResult:
    """Every vertex of h^(n-1) (or k^(n-1)) is can(n,1) into a single factor."""
    f = h_small(n, formula) if variant == 'h' else k_small(n, formula)
    check_id = f"{variant}_small.vertex.n={n}"
    results = [f.certify(p_max)]
    for i in range(n):
        expected = h_small_vertex(n, i)
        if variant == 'k':
            expected = compose_morphisms(zeta_transport(n), expected)
        results.append(morphisms_equal(vertex_restriction(f, i), expected, p_max, f"{check_id}.i={i}"))
    return first_failure(check_id, results, n=n, p_max=p_max)


# The t-factor and the master homotopies

def i_map(a: int, b: int, d: DVector) -> MonotoneMap:
    """delta(b, d_b) o ... o delta(a+1, d_{a+1}): [a] -> [b]; the identity when a = b."""
    if a > b:
        raise ValueError(f"i[{a},{b}] needs a <= b")
    result = MonotoneMap.identity(a)
    for s in range(a + 1, b + 1):
        result = compose(delta(s, d[s]), result)
    return result


def t_factor(n: int, m: int, k: int, r: int, beta: MonotoneMap, reading: str = 'codomain') -> Polynomial:
    """
    t1^(S(r-1)) prod_{i=r}^{k-1} (pi - t1^(S(i))) pi^{n-m-k}, S = S_beta, with
    t^(0) read as pi ('codomain') or pi^{n+2} ('domain') and t^(p+1) = 0.

    Raises:
        ValueError: If n < m + k, r is outside [k] or beta does not land in [k]
    """
    if n < m + k:
        raise ValueError(f"t-factor needs n >= m + k, got n={n}, m={m}, k={k}")
    if not 0 <= r <= k:
        raise ValueError(f"r = {r} outside [{k}]")
    if beta.target != k:
        raise ValueError(f"beta {beta} does not land in [{k}]")
    if reading not in T_FACTOR_READINGS:
        raise ValueError(f"Unknown t-factor reading: {reading}")
    p = beta.source
    low = PI if reading == 'codomain' else Polynomial.pi_power(n + 2)

    def t1(s: int) -> Polynomial:
        if s == 0:
            return low
        if s == p + 1:
            return Polynomial.zero()
        return Polynomial.var(VarId(T, s, 1))

    exponent = n - m - k + (1 if mutations.is_active('t_factor_exponent') else 0)
    value = t1(s_alpha(beta, r - 1)) * Polynomial.pi_power(exponent)
    for i in range(r, k):
        if not value:
            break
        value = value * (PI - t1(s_alpha(beta, i)))
    return value


def master_domain(n: int, m: int, k: int) -> SimplexTensor:
    return SimplexTensor(k, SimplexTensor(m, build(kA(n + 2))))


@lru_cache(maxsize=None)
def master_H(params: HomotopyParams, realization: Realization = DEFAULT_REALIZATION) -> SAlgMorphism:
    """
    H^(k)_m: Delta^k (x) (Delta^m (x) k_A(n+2)) -> k_A^{(x)(m+k+1)},

        t^(j)(alpha, beta) -> sum_{r=0}^{k} f^{[m+r+1, m+k+1]}_d h^(m+r)(t^(j)(i^{[m,m+r]}_d alpha)) t(n,m,k,r,beta)
    """
    n, m, k, d = params.n, params.m, params.k, params.d
    domain = master_domain(n, m, k)
    codomain = build(kA_tensor(m + k + 1, 1))

    def image(p: int, v: VarId) -> Polynomial:
        inner, beta = v.split_label()
        base, alpha = inner.split_label()
        total = Polynomial.zero()
        for r in range(k + 1):
            factor = t_factor(n, m, k, r, beta, realization.t_factor_reading)
            if not factor:
                continue
            label = compose(i_map(m, m + r, d), alpha)
            h_value = h_small(m + r + 1, realization.h_tilde_formula).formula_image(p, VarId(T, base.j, 1, (label,)))
            total = total + f_composite(m + r + 1, m + k + 1, d).eval(p, h_value) * factor
        return total

    return SAlgMorphism(f"H^({k})_{m}[n={n},d={d}]", domain, codomain, image)


@lru_cache(maxsize=None)
def master_K(params: HomotopyParams, realization: Realization = DEFAULT_REALIZATION) -> SAlgMorphism:
    """K^(k)_m = zeta_{m+k+1} o H^(k)_m."""
    m, k = params.m, params.k
    return compose_morphisms(zeta_transport(m + k + 1), master_H(params, realization),
                             name=f"K^({k})_{m}[n={params.n},d={params.d}]")


def master_vertex(params: HomotopyParams, l: int, variant: str = 'H',
                  realization: Realization = DEFAULT_REALIZATION) -> SAlgMorphism:
    """
    The expected restriction to vertex l of Delta^k, assembled from independently
    built pieces: composite o h^(m+l) (or k^(m+l)) o (id (x) can(n+2, m+l+1)) o i^{[m,m+l]}_d.
    """
    n, m, k, d = params.n, params.m, params.k, params.d
    c = m + l + 1
    if variant == 'H':
        tail, small = f_composite(c, m + k + 1, d), h_small(c, realization.h_tilde_formula)
    else:
        tail, small = g_composite(c, m + k + 1, d), k_small(c, realization.h_tilde_formula)
    relabel = label_morphism(i_map(m, m + l, d), build(kA(n + 2)))
    scale = simplex_tensor_morphism(m + l, can_map(n + 2, c, 1), codomain=small.domain)
    return compose_chain(tail, small, scale, relabel)


def _master(params: HomotopyParams, variant: str, realization: Realization) -> SAlgMorphism:
    return master_H(params, realization) if variant == 'H' else master_K(params, realization)


def master_simplicial_check(params: HomotopyParams, p_max: int, variant: str = 'H',
                            realization: Realization = DEFAULT_REALIZATION) -> CheckResult:
    return _master(params, variant, realization).certify(p_max).with_id(f"master{variant}.simplicial.{params.label}")


def master_vertex_check(params: HomotopyParams, p_max: int, variant: str = 'H',
                        realization: Realization = DEFAULT_REALIZATION) -> CheckResult:
    check_id = f"master{variant}.vertex.{params.label}"
    f = _master(params, variant, realization)
    results = [morphisms_equal(vertex_restriction(f, l), master_vertex(params, l, variant, realization), p_max,
                               f"{check_id}.l={l}")
               for l in range(params.k + 1)]
    return first_failure(check_id, results, p_max=p_max)


def master_diagram_check(params: HomotopyParams, p_max: int, variant: str = 'H',
                         realization: Realization = DEFAULT_REALIZATION) -> CheckResult:
    """
    skip^(m+k)_{d_{m+k}} o M^(k-1)_m[n-1] o (id (x) id (x) can(n+2, n+1)) = M^(k)_m o (delta(k,k) (x) id),
    with skip = f for H and g for K.
    """
    n, m, k, d = params.n, params.m, params.k, params.d
    check_id = f"master{variant}.diagram.{params.label}"
    lower = _master(params.lower(), variant, realization)
    skip = f_skip(m + k, d[m + k]) if variant == 'H' else g_skip(m + k, d[m + k])
    scale = simplex_tensor_morphism(k - 1, simplex_tensor_morphism(m, can_map(n + 2, n + 1, 1)),
                                    codomain=lower.domain)
    top = compose_chain(skip, lower, scale)
    inner = SimplexTensor(m, build(kA(n + 2)))
    bottom = compose_morphisms(_master(params, variant, realization), label_morphism(delta(k, k), inner))
    return morphisms_equal(top, bottom, p_max, check_id)


def t_factor_vertex_check(n: int, m: int, k: int, p_max: int, reading: str = 'codomain') -> CheckResult:
    """On a constant beta = l the t-factor is pi^{n-m-l+1} for r = l and 0 otherwise."""
    check_id = f"t_factor.vertex.m={m}.k={k}.n={n}"
    for p in range(p_max + 1):
        for l in range(k + 1):
            beta = MonotoneMap.constant(p, k, l)
            for r in range(k + 1):
                value = t_factor(n, m, k, r, beta, reading)
                expected = Polynomial.pi_power(n - m - l + 1) if r == l else Polynomial.zero()
                if value != expected:
                    return failed(check_id, Counterexample(p, r, f"beta={beta}", value.to_text(), expected.to_text()),
                                  n=n, m=m, k=k)
    return passed(check_id, n=n, m=m, k=k, p_max=p_max)


# Registry

def admissible_params(bounds) -> Iterator[HomotopyParams]:
    """Every (n, m, k, d) with m + k <= mk_max, max(m+k, 1) <= n <= n_max, d per the bounds' policy."""
    for total in range(bounds.mk_max + 1):
        for k in range(total + 1):
            m = total - k
            for n in range(max(total, 1), bounds.n_max + 1):
                for d in bounds.d_vectors(m + 1, m + k):
                    yield HomotopyParams(n, m, k, d)


def registered_checks(bounds, realization: Realization = DEFAULT_REALIZATION) -> Iterator[CheckSpec]:
    formula = realization.h_tilde_formula
    p_max = bounds.p_max
    for n in range(1, bounds.n_max + 1):
        yield CheckSpec(f"h_tilde.simplicial.n={n}", 'homotopy', "h~: simplicial morphism",
                        lambda n=n: h_tilde_simplicial_check(n, p_max, formula))
        yield CheckSpec(f"h_tilde.telescoping.n={n}", 'homotopy', "h~: boundary telescoping",
                        lambda n=n: h_tilde_telescoping_check(n, p_max, formula))
        for i in range(n):
            for p in range(p_max + 1):
                check_id = f"h_tilde.vertex.n={n}.i={i}.p={p}"
                yield CheckSpec(check_id, 'homotopy', "h~: vertices are rho^i o can",
                                lambda n=n, i=i, p=p, check_id=check_id:
                                h_tilde_vertex_check(n, p_max, formula, i, p).with_id(check_id))
        yield CheckSpec(f"h_small.vertex.n={n}", 'homotopy', "h: vertices are single-factor inclusions",
                        lambda n=n: small_vertex_check(n, p_max, 'h', formula))
        yield CheckSpec(f"k_small.vertex.n={n}", 'homotopy', "k = zeta o h: vertices",
                        lambda n=n: small_vertex_check(n, p_max, 'k', formula))
    for total in range(bounds.mk_max + 1):
        for k in range(total + 1):
            m = total - k
            for n in range(max(total, 1), bounds.n_max + 1):
                yield CheckSpec(f"t_factor.vertex.m={m}.k={k}.n={n}", 'homotopy', "t-factor on vertices",
                                lambda n=n, m=m, k=k: t_factor_vertex_check(n, m, k, p_max,
                                                                            realization.t_factor_reading))
    for params in admissible_params(bounds):
        for variant in ('H', 'K'):
            yield CheckSpec(f"master{variant}.simplicial.{params.label}", 'homotopy',
                            f"master homotopy {variant}: simplicial morphism",
                            lambda params=params, variant=variant:
                            master_simplicial_check(params, p_max, variant, realization))
            yield CheckSpec(f"master{variant}.vertex.{params.label}", 'homotopy',
                            f"master homotopy {variant}: vertex restrictions",
                            lambda params=params, variant=variant:
                            master_vertex_check(params, p_max, variant, realization))
            if params.k >= 1:
                yield CheckSpec(f"master{variant}.diagram.{params.label}", 'homotopy',
                                f"master homotopy {variant}: (k-1) vs k compatibility",
                                lambda params=params, variant=variant:
                                master_diagram_check(params, p_max, variant, realization))


def run_homotopy_suite(bounds, realization: Realization = DEFAULT_REALIZATION,
                       verbose: bool = False) -> List[CheckResult]:
    return run_specs(registered_checks(bounds, realization), verbose)


for _cached in (h_tilde, h_small, k_small, master_H, master_K):
    mutations.register_cache(_cached.cache_clear)
