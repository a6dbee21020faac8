"""
Simplex Category Module
Monotone maps [p] -> [n], cofaces/codegeneracies, their relations and the
counting functions m_alpha / S_alpha
"""

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from modules.checks import CheckResult, CheckSpec, Counterexample, failed, passed


@dataclass(frozen=True)
class MonotoneMap:
    """An order-preserving map [source] -> [target], stored as its value vector."""

    source: int
    target: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if self.source < 0 or self.target < 0:
            raise ValueError(f"Negative endpoint in monotone map: [{self.source}]->[{self.target}]")
        if len(self.values) != self.source + 1:
            raise ValueError(
                f"Monotone map [{self.source}]->[{self.target}] needs {self.source + 1} values, "
                f"got {len(self.values)}"
            )
        previous = 0
        for v in self.values:
            if v < previous or v > self.target:
                raise ValueError(f"Values {self.values} are not weakly increasing in [{self.target}]")
            previous = v

    def __call__(self, i: int) -> int:
        return self.values[i]

    @property
    def key(self) -> Tuple:
        return (self.source, self.target, self.values)

    def __lt__(self, other: "MonotoneMap") -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        inner = ",".join(str(v) for v in self.values)
        return f"({inner}):[{self.source}]->[{self.target}]"

    @classmethod
    def identity(cls, n: int) -> "MonotoneMap":
        return cls(n, n, tuple(range(n + 1)))

    @classmethod
    def constant(cls, p: int, n: int, v: int) -> "MonotoneMap":
        if not 0 <= v <= n:
            raise ValueError(f"Vertex {v} out of range [{n}]")
        return cls(p, n, (v,) * (p + 1))

    @classmethod
    def parse(cls, text: str) -> "MonotoneMap":
        """
        Parse the textual form `(v0,...,vp):[p]->[n]`.

        Raises:
            ValueError: If the text is malformed
        """
        match = re.fullmatch(r"\s*\(([\d,\s]*)\)\s*:\s*\[(\d+)\]\s*->\s*\[(\d+)\]\s*", text)
        if not match:
            raise ValueError(f"Invalid monotone map: {text}")
        values = tuple(int(v) for v in match.group(1).split(",") if v.strip())
        return cls(int(match.group(2)), int(match.group(3)), values)


def delta(n: int, i: int) -> MonotoneMap:
    """
    Coface delta^n_i: [n-1] -> [n], the injection whose image misses i.

    Raises:
        ValueError: If n < 1 or i is outside [n]
    """
    if n < 1 or not 0 <= i <= n:
        raise ValueError(f"delta({n},{i}): index out of range")
    return MonotoneMap(n - 1, n, tuple(k if k < i else k + 1 for k in range(n)))


def sigma(n: int, i: int) -> MonotoneMap:
    """
    Codegeneracy sigma^n_i: [n+1] -> [n], the surjection hitting i twice.

    Raises:
        ValueError: If n < 0 or i is outside [n]
    """
    if n < 0 or not 0 <= i <= n:
        raise ValueError(f"sigma({n},{i}): index out of range")
    return MonotoneMap(n + 1, n, tuple(k if k <= i else k - 1 for k in range(n + 2)))


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """
    Composite g o f.

    Raises:
        ValueError: If f.target != g.source
    """
    if f.target != g.source:
        raise ValueError(f"Cannot compose {g} after {f}: endpoints differ")
    return MonotoneMap(f.source, g.target, tuple(g.values[v] for v in f.values))


def enumerate_maps(p: int, n: int) -> List[MonotoneMap]:
    """All monotone maps [p] -> [n] in lexicographic order of their value vectors."""
    return [
        MonotoneMap(p, n, values)
        for values in itertools.combinations_with_replacement(range(n + 1), p + 1)
    ]


def m_alpha(alpha: MonotoneMap, k: int) -> int:
    """Fiber size #alpha^{-1}(k); m_alpha(-1) = 0 by convention."""
    if k == -1:
        return 0
    if not 0 <= k <= alpha.target:
        raise ValueError(f"m_alpha: {k} outside [{alpha.target}]")
    return sum(1 for v in alpha.values if v == k)


def s_alpha(alpha: MonotoneMap, k: int) -> int:
    """Cumulative count #{j in [p] : alpha(j) <= k}; S_alpha(-1) = 0."""
    if not -1 <= k <= alpha.target:
        raise ValueError(f"s_alpha: {k} outside [-1, {alpha.target}]")
    return sum(1 for v in alpha.values if v <= k)


def _locate(alpha: MonotoneMap, i: int) -> int:
    # the unique k with S(k-1) <= i <= S(k)-1
    for k in range(alpha.target + 1):
        if s_alpha(alpha, k - 1) <= i <= s_alpha(alpha, k) - 1:
            return k
    raise ValueError(f"No window of {alpha} contains {i}")


def _relation_instances(n_max: int):
    """Yield (name, indices, lhs, rhs) for the five coface/codegeneracy relations."""
    for n in range(1, n_max + 1):
        # delta^{n+1}_j delta^n_i = delta^{n+1}_i delta^n_{j-1}, i < j
        for j in range(n + 2):
            for i in range(j):
                yield ("dd", (n, i, j),
                       compose(delta(n + 1, j), delta(n, i)),
                       compose(delta(n + 1, i), delta(n, j - 1)))
        # sigma^{n-1}_j delta^n_i, the three mixed cases
        for j in range(n):
            for i in range(n + 1):
                lhs = compose(sigma(n - 1, j), delta(n, i))
                if i < j:
                    yield ("sd_lt", (n, i, j), lhs, compose(delta(n - 1, i), sigma(n - 2, j - 1)))
                elif i in (j, j + 1):
                    yield ("sd_id", (n, i, j), lhs, MonotoneMap.identity(n - 1))
                else:
                    yield ("sd_gt", (n, i, j), lhs, compose(delta(n - 1, i - 1), sigma(n - 2, j)))
    for n in range(0, n_max + 1):
        # sigma^{n}_j sigma^{n+1}_i = sigma^{n}_i sigma^{n+1}_{j+1}, i <= j
        for j in range(n + 1):
            for i in range(j + 1):
                yield ("ss", (n, i, j),
                       compose(sigma(n, j), sigma(n + 1, i)),
                       compose(sigma(n, i), sigma(n + 1, j + 1)))


def check_simplex_relations(n_max: int, check_id: Optional[str] = None) -> CheckResult:
    """
    Verify the coface/codegeneracy relations for every admissible index with n <= n_max.

    Returns:
        CheckResult, carrying the first counterexample if any relation fails
    """
    check_id = check_id or f"simplex.relations.n_max={n_max}"
    count = 0
    for name, indices, lhs, rhs in _relation_instances(n_max):
        count += 1
        if lhs != rhs:
            return failed(check_id, Counterexample(
                level=indices[0], index=indices[1], generator=f"{name}{indices}",
                lhs=str(lhs), rhs=str(rhs)), n_max=n_max)
    return passed(check_id, n_max=n_max, instances=count)


def s_alpha_transformation_check(alpha: MonotoneMap, i: int,
                                 check_id: Optional[str] = None) -> CheckResult:
    """
    Check the case formulas for S_{alpha o sigma_i} and S_{alpha o delta_i}
    (and the matching fiber-size formulas) against direct composition.

    Args:
        alpha: Map [p] -> [n]
        i: Element of [p]

    Returns:
        CheckResult
    """
    p, n = alpha.source, alpha.target
    check_id = check_id or f"simplex.s_alpha.alpha={alpha}.i={i}"
    if not 0 <= i <= p:
        raise ValueError(f"Index {i} outside [{p}]")
    k = _locate(alpha, i)

    degenerate = compose(alpha, sigma(p, i))
    for u in range(n + 1):
        expected = s_alpha(alpha, u) + (1 if u >= k else 0)
        if s_alpha(degenerate, u) != expected:
            return failed(check_id, Counterexample(level=p, index=i, generator=f"sigma u={u}",
                                                   lhs=str(s_alpha(degenerate, u)), rhs=str(expected)))
        expected_m = m_alpha(alpha, u) + (1 if u == k else 0)
        if m_alpha(degenerate, u) != expected_m:
            return failed(check_id, Counterexample(level=p, index=i, generator=f"m sigma u={u}",
                                                   lhs=str(m_alpha(degenerate, u)), rhs=str(expected_m)))

    if p >= 1:
        face = compose(alpha, delta(p, i))
        for u in range(n + 1):
            expected = s_alpha(alpha, u) - (1 if u >= k else 0)
            if s_alpha(face, u) != expected:
                return failed(check_id, Counterexample(level=p, index=i, generator=f"delta u={u}",
                                                       lhs=str(s_alpha(face, u)), rhs=str(expected)))
            expected_m = m_alpha(alpha, u) - (1 if u == k else 0)
            if m_alpha(face, u) != expected_m:
                return failed(check_id, Counterexample(level=p, index=i, generator=f"m delta u={u}",
                                                       lhs=str(m_alpha(face, u)), rhs=str(expected_m)))
    return passed(check_id, alpha=str(alpha), i=i, k=k)


def check_all_s_alpha(p: int, n: int, check_id: Optional[str] = None) -> CheckResult:
    """Run s_alpha_transformation_check over every alpha in Delta^n_p and every i."""
    check_id = check_id or f"simplex.s_alpha.p={p}.n={n}"
    for alpha in enumerate_maps(p, n):
        for i in range(p + 1):
            result = s_alpha_transformation_check(alpha, i, check_id)
            if not result.passed:
                return result
    return passed(check_id, p=p, n=n)


# Words are lists of ("d", n, i) / ("s", n, i) applied right-to-left, i.e.
# the map is word[0] o word[1] o ... o word[-1].

def decompose(alpha: MonotoneMap) -> List[Tuple[str, int, int]]:
    """
    Factor alpha as (cofaces) o (codegeneracies).

    Returns:
        A word of ("d", n, i) / ("s", n, i) letters; compose_word rebuilds alpha
    """
    p, n = alpha.source, alpha.target
    image = sorted(set(alpha.values))
    # epi part: [p] -> [len(image)-1], collapse each repeated value
    degeneracies = []
    current = list(alpha.values)
    level = p
    j = 0
    while j < len(current) - 1:
        if current[j] == current[j + 1]:
            degeneracies.append(("s", level - 1, j))
            del current[j + 1]
            level -= 1
        else:
            j += 1
    # mono part: [len(image)-1] -> [n], insert the missed vertices
    faces = []
    missing = [v for v in range(n + 1) if v not in image]
    size = len(image) - 1
    for v in missing:
        size += 1
        faces.append(("d", size, v))
    # faces were inserted smallest-first, so apply them in that order
    return list(reversed(faces)) + list(reversed(degeneracies))


def compose_word(word: List[Tuple[str, int, int]], source: int) -> MonotoneMap:
    """Rebuild a map from a decompose() word; `source` is the source of the rightmost letter."""
    result = MonotoneMap.identity(source)
    for kind, n, i in reversed(word):
        letter = delta(n, i) if kind == "d" else sigma(n, i)
        result = compose(letter, result)
    return result


def check_enumeration(p_max: int, n_max: int) -> CheckResult:
    """|Delta^n_p| is the multiset count C(n+p+1, p+1), and brute force agrees."""
    check_id = f"simplex.enumerate.p_max={p_max}.n_max={n_max}"
    for p in range(p_max + 1):
        for n in range(n_max + 1):
            maps = enumerate_maps(p, n)
            brute = sorted({values for values in itertools.product(range(n + 1), repeat=p + 1)
                            if all(a <= b for a, b in zip(values, values[1:]))})
            if [m.values for m in maps] != brute or len(maps) != math.comb(n + p + 1, p + 1):
                return failed(check_id, Counterexample(level=p, index=n, generator="enumerate_maps",
                                                       lhs=str(len(maps)),
                                                       rhs=str(math.comb(n + p + 1, p + 1))))
    return passed(check_id, p_max=p_max, n_max=n_max)


def check_decompositions(p_max: int, n_max: int) -> CheckResult:
    """Every map with p, n within bounds is rebuilt by compose_word(decompose(alpha))."""
    check_id = f"simplex.decompose.p_max={p_max}.n_max={n_max}"
    for p in range(p_max + 1):
        for n in range(n_max + 1):
            for alpha in enumerate_maps(p, n):
                rebuilt = compose_word(decompose(alpha), p)
                if rebuilt != alpha:
                    return failed(check_id, Counterexample(level=p, index=n, generator=str(decompose(alpha)),
                                                           lhs=str(rebuilt), rhs=str(alpha)))
    return passed(check_id, p_max=p_max, n_max=n_max)


def registered_checks(bounds) -> Iterator[CheckSpec]:
    p_max, n_max = bounds.p_max, bounds.n_max
    yield CheckSpec(f"simplex.relations.n_max={n_max}", 'simplex', "delta/sigma relations",
                    lambda: check_simplex_relations(n_max))
    yield CheckSpec(f"simplex.enumerate.p_max={p_max}.n_max={n_max}", 'simplex', "enumeration of Delta^n_p",
                    lambda: check_enumeration(p_max, n_max))
    yield CheckSpec(f"simplex.decompose.p_max={p_max}.n_max={n_max}", 'simplex', "epi-mono factorization",
                    lambda: check_decompositions(p_max, n_max))
    for p in range(p_max + 1):
        for n in range(n_max + 1):
            yield CheckSpec(f"simplex.s_alpha.p={p}.n={n}", 'simplex', "S_alpha under sigma_i and delta_i",
                            lambda p=p, n=n: check_all_s_alpha(p, n))
