"""
Polynomial Module
Exact sparse multivariate polynomials over the integers, with pi as a
distinguished variable and structured generator names (VarId)
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

from modules.simplex import MonotoneMap


class Family(Enum):
    T = "t"
    U = "u"
    EPS = "eps"

    @property
    def rank(self) -> int:
        return _FAMILY_RANK[self]


_FAMILY_RANK = {Family.T: 0, Family.U: 1, Family.EPS: 2}


@dataclass(frozen=True)
class VarId:
    """
    Name of a generator: family (t/u/eps), bar index j, tensor factor a and
    the simplex labels carried by simplex-tensored presentations.
    """

    family: Family
    j: int
    a: int
    labels: Tuple[MonotoneMap, ...] = ()

    def __post_init__(self):
        if self.j < 0:
            raise ValueError(f"Negative bar index: {self.j}")
        if self.a < 1:
            raise ValueError(f"Tensor factor must be positive: {self.a}")

    @property
    def key(self) -> Tuple:
        return (self.family.rank, self.a, self.j, tuple(label.key for label in self.labels))

    @property
    def chain(self) -> Tuple[Family, int]:
        return (self.family, self.a)

    def __lt__(self, other: "VarId") -> bool:
        return self.key < other.key

    def with_j(self, j: int) -> "VarId":
        return VarId(self.family, j, self.a, self.labels)

    def with_chain(self, family: Family, a: int) -> "VarId":
        return VarId(family, self.j, a, self.labels)

    def with_label(self, label: MonotoneMap) -> "VarId":
        return VarId(self.family, self.j, self.a, self.labels + (label,))

    def with_labels(self, labels: Tuple[MonotoneMap, ...]) -> "VarId":
        return VarId(self.family, self.j, self.a, labels)

    def split_label(self) -> Tuple["VarId", MonotoneMap]:
        """Separate the outermost label (the last one appended)."""
        if not self.labels:
            raise ValueError(f"{self} carries no simplex label")
        return VarId(self.family, self.j, self.a, self.labels[:-1]), self.labels[-1]

    def __str__(self) -> str:
        text = f"{self.family.value}[{self.j},{self.a}]"
        if self.labels:
            parts = []
            for position, label in enumerate(self.labels):
                values = ",".join(str(v) for v in label.values)
                suffix = "" if label.target == label.values[-1] else f"/{label.target}"
                parts.append(f"{_LABEL_NAMES[position]}=({values}){suffix}")
            text += "(" + ",".join(parts) + ")"
        return text


_LABEL_NAMES = "abcdefgh"


@dataclass(frozen=True)
class Monomial:
    """pi^pi * prod v^e, with var_exponents a sparse map (no zero exponents)."""

    pi: int = 0
    powers: frozenset = frozenset()

    @classmethod
    def build(cls, pi: int = 0, exponents: Optional[Mapping[VarId, int]] = None) -> "Monomial":
        if pi < 0:
            raise ValueError(f"Negative pi exponent: {pi}")
        items = frozenset((v, e) for v, e in (exponents or {}).items() if e != 0)
        if any(e < 0 for _, e in items):
            raise ValueError("Negative exponents are not allowed")
        return cls(pi, items)

    @property
    def var_exponents(self) -> Dict[VarId, int]:
        return dict(self.powers)

    @property
    def degree(self) -> int:
        """Total exponent of the non-pi variables."""
        return sum(e for _, e in self.powers)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other.powers:
            return Monomial(self.pi + other.pi, self.powers)
        exponents = dict(self.powers)
        for v, e in other.powers:
            exponents[v] = exponents.get(v, 0) + e
        return Monomial(self.pi + other.pi, frozenset(exponents.items()))

    def sorted_powers(self):
        return sorted(self.powers, key=lambda item: item[0].key)

    def order_key(self) -> Tuple:
        # graded, then lexicographic in the VarId order
        lex = tuple((v.key, -e) for v, e in self.sorted_powers())
        return (-(self.degree + self.pi), lex, -self.pi)

    def to_text(self) -> str:
        factors = []
        if self.pi:
            factors.append("pi" if self.pi == 1 else f"pi^{self.pi}")
        for v, e in self.sorted_powers():
            factors.append(str(v) if e == 1 else f"{v}^{e}")
        return "*".join(factors)


ONE = Monomial()

Scalar = Union[int, "Polynomial"]


class Polynomial:
    """
    Immutable sparse polynomial: a map Monomial -> nonzero int.

    Equality is term-map equality; canonical form is unique because zero
    coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, int]] = None):
        self._terms: Dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c != 0}
        self._hash = None

    # construction

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def pi_power(cls, e: int, coeff: int = 1) -> "Polynomial":
        return cls({Monomial(e, frozenset()): coeff})

    @classmethod
    def var(cls, v: VarId, e: int = 1) -> "Polynomial":
        return cls({Monomial(0, frozenset({(v, e)})): 1}) if e else cls.constant(1)

    @classmethod
    def coerce(cls, value: Scalar) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, int):
            return cls.constant(value)
        raise TypeError(f"Cannot use {type(value).__name__} as a polynomial")

    # inspection

    @property
    def terms(self) -> Dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m.powers}

    def is_pi_only(self) -> bool:
        return all(not m.powers for m in self._terms)

    def pi_coefficients(self) -> Dict[int, int]:
        """For a pi-only polynomial: {pi exponent: coefficient}."""
        if not self.is_pi_only():
            raise ValueError(f"{self} involves non-pi variables")
        return {m.pi: c for m, c in self._terms.items()}

    def divisible_by_pi(self) -> bool:
        return all(m.pi >= 1 for m in self._terms)

    def weights(self, t_weight: int) -> set:
        return {weight(m, t_weight) for m in self._terms}

    def is_homogeneous(self, t_weight: int) -> bool:
        return len(self.weights(t_weight)) <= 1

    # arithmetic

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __add__(self, other: Scalar) -> "Polynomial":
        other = Polynomial.coerce(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0) + c
        return Polynomial(terms)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "Polynomial":
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return Polynomial.coerce(other) - self

    def __mul__(self, other: Scalar) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial({m: c * other for m, c in self._terms.items()})
        other = Polynomial.coerce(other)
        terms: Dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial(terms)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("Negative powers are not polynomials")
        result = Polynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # substitution

    def map_variables(self, image: Callable[[VarId], Optional["Polynomial"]]) -> "Polynomial":
        """
        Ring-homomorphic substitution: every variable v is replaced by image(v)
        (None keeps v). pi is fixed.
        """
        cache: Dict[VarId, Polynomial] = {}
        terms: Dict[Monomial, int] = {}
        for m, c in self._terms.items():
            acc = Polynomial({Monomial(m.pi, frozenset()): c})
            for v, e in m.powers:
                if v not in cache:
                    target = image(v)
                    cache[v] = Polynomial.var(v) if target is None else target
                acc = acc * (cache[v] ** e if e > 1 else cache[v])
                if not acc:
                    break
            for mm, cc in acc._terms.items():
                terms[mm] = terms.get(mm, 0) + cc
        return Polynomial(terms)

    def substitute(self, mapping: Mapping[VarId, "Polynomial"]) -> "Polynomial":
        return self.map_variables(mapping.get)

    def specialize_pi(self, c: int) -> "Polynomial":
        terms: Dict[Monomial, int] = {}
        for m, coeff in self._terms.items():
            if m.pi and c == 0:
                continue
            key = Monomial(0, m.powers)
            terms[key] = terms.get(key, 0) + coeff * (c ** m.pi)
        return Polynomial(terms)

    # text

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for m, c in sorted(self._terms.items(), key=lambda item: item[0].order_key()):
            body = m.to_text()
            magnitude = abs(c)
            if not body:
                term = str(magnitude)
            elif magnitude == 1:
                term = body
            else:
                term = f"{magnitude}*{body}"
            if not pieces:
                pieces.append(term if c > 0 else f"-{term}")
            else:
                pieces.append(f" + {term}" if c > 0 else f" - {term}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"


PI = Polynomial.pi_power(1)


def as_poly(value: Union[Scalar, VarId]) -> Polynomial:
    if isinstance(value, VarId):
        return Polynomial.var(value)
    return Polynomial.coerce(value)


def poly_arith(lhs: Polynomial, rhs: Polynomial, op: str) -> Polynomial:
    """
    Exact ring operation on two polynomials.

    Args:
        op: One of 'add', 'sub', 'mul'

    Raises:
        ValueError: If op is unknown
    """
    if op == 'add':
        return lhs + rhs
    if op == 'sub':
        return lhs - rhs
    if op == 'mul':
        return lhs * rhs
    raise ValueError(f"Unknown polynomial operation: {op}")


def substitute(p: Polynomial, sigma: Mapping[VarId, Polynomial]) -> Polynomial:
    """Simultaneous substitution; unmapped variables are fixed."""
    return p.substitute(sigma)


def specialize_pi(p: Polynomial, c: int) -> Polynomial:
    return p.specialize_pi(c)


def weight(m: Monomial, t_weight: int) -> int:
    """t_weight * (total non-pi exponent) + pi exponent."""
    if t_weight < 1:
        raise ValueError(f"t_weight must be positive, got {t_weight}")
    return t_weight * m.degree + m.pi


# parsing of the canonical text form

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<pi>pi)|"
                    r"(?P<var>(?:eps|t|u)\[\d+,\d+\](?:\((?:[a-h]=\([\d,]*\)(?:/\d+)?,?)+\))?)"
                    r"|(?P<op>[-+*^]))")

_VAR = re.compile(r"(?P<fam>eps|t|u)\[(?P<j>\d+),(?P<a>\d+)\](?:\((?P<labels>.*)\))?$")
_LABEL = re.compile(r"[a-h]=\((?P<values>[\d,]*)\)(?:/(?P<target>\d+))?")


def parse_varid(text: str) -> VarId:
    """
    Parse `t[j,a]` or `t[j,a](a=(0,0,1),b=(0,1)/2)`. A label is its value
    tuple, of length source + 1; `/target` follows only when the target is
    larger than the last value.

    Raises:
        ValueError: If the text is not a variable
    """
    match = _VAR.match(text.strip())
    if not match:
        raise ValueError(f"Invalid variable: {text}")
    labels = []
    if match.group('labels'):
        for label in _LABEL.finditer(match.group('labels')):
            values = tuple(int(v) for v in label.group('values').split(",") if v)
            target = label.group('target')
            labels.append(MonotoneMap(len(values) - 1, values[-1] if target is None else int(target), values))
    return VarId(Family(match.group('fam')), int(match.group('j')), int(match.group('a')), tuple(labels))


def _tokenize(text: str):
    position = 0
    tokens = []
    text = text.strip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if not match or match.end() == position:
            raise ValueError(f"Cannot parse polynomial near: {text[position:position + 20]!r}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        position = match.end()
    return tokens


def parse_polynomial(text: str) -> Polynomial:
    """
    Parse the canonical textual form produced by Polynomial.to_text().

    Raises:
        ValueError: If the text is malformed
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("Empty polynomial text")
    result = Polynomial.zero()
    position = 0

    def factor(pos):
        kind, value = tokens[pos]
        if kind == 'num':
            base = Polynomial.constant(int(value))
        elif kind == 'pi':
            base = PI
        elif kind == 'var':
            base = Polynomial.var(parse_varid(value))
        else:
            raise ValueError(f"Unexpected token {value!r}")
        pos += 1
        if pos < len(tokens) and tokens[pos] == ('op', '^'):
            if pos + 1 >= len(tokens) or tokens[pos + 1][0] != 'num':
                raise ValueError("Exponent must be an integer")
            base = base ** int(tokens[pos + 1][1])
            pos += 2
        return base, pos

    while position < len(tokens):
        sign = 1
        if tokens[position][0] == 'op' and tokens[position][1] in '+-':
            sign = -1 if tokens[position][1] == '-' else 1
            position += 1
        term, position = factor(position)
        while position < len(tokens) and tokens[position] == ('op', '*'):
            nxt, position = factor(position + 1)
            term = term * nxt
        result = result + term * sign
        if position < len(tokens) and not (tokens[position][0] == 'op' and tokens[position][1] in '+-'):
            raise ValueError(f"Unexpected token {tokens[position][1]!r}")
    return result


def sum_polys(items: Iterable[Polynomial]) -> Polynomial:
    terms: Dict[Monomial, int] = {}
    for p in items:
        for m, c in p.items():
            terms[m] = terms.get(m, 0) + c
    return Polynomial(terms)
