"""Exact sparse multivariate polynomials with a grading used for truncation.

Variables come from a small fixed set of classes (matrix entries ``A(i,j)``,
``B``, ``U``, ``V``, the vector entries ``theta``/``phi`` and their primed
versions, and the scalars ``beta``, ``alpha``, ``z``).  Each class has a
grading weight; the grade of a monomial is the weighted sum of its exponents.
Under these weights a multiset of size N contributes terms of grade exactly N
to every enumeration sum, which turns the infinite identities into finite
comparisons after truncation.

A monomial is stored as a tuple of ``(variable_id, exponent)`` pairs sorted by
id, where ids come from a process-wide registry.  Coefficients are
``fractions.Fraction``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Tuple, Union

CLASSES = ("A", "B", "U", "V", "theta", "phi", "thetaP", "phiP", "beta", "alpha", "z")

ARITY = {
    "A": 2, "B": 2, "U": 2, "V": 2,
    "theta": 1, "phi": 1, "thetaP": 1, "phiP": 1,
    "beta": 0, "alpha": 0, "z": 0,
}

WEIGHT = {
    "A": 1, "U": 1, "theta": 1, "z": 1,
    "B": 0, "V": 0, "phi": 0, "thetaP": 0, "phiP": 0,
    "beta": 0, "alpha": 0,
}

_CLASS_RANK = {name: k for k, name in enumerate(CLASSES)}


class Variable(NamedTuple):
    kind: str
    indices: Tuple[int, ...] = ()

    @property
    def weight(self) -> int:
        return WEIGHT[self.kind]

    def sort_key(self):
        return (_CLASS_RANK[self.kind], self.indices)

    def __str__(self) -> str:
        if not self.indices:
            return self.kind
        return f"{self.kind}({','.join(map(str, self.indices))})"


def make_variable(kind: str, *indices: int) -> Variable:
    if kind not in ARITY:
        raise ValueError(f"unknown variable class {kind!r}")
    if len(indices) != ARITY[kind]:
        raise ValueError(f"{kind} takes {ARITY[kind]} indices, got {len(indices)}")
    if any(i < 0 for i in indices):
        raise ValueError("variable indices must be non-negative")
    return Variable(kind, tuple(int(i) for i in indices))


# Global registry: Variable <-> integer id.  Ids are only an internal handle;
# every printed form sorts by Variable.sort_key().
_VAR_IDS: Dict[Variable, int] = {}
_VARS: list = []
_WEIGHTS: list = []


def var_id(v: Variable) -> int:
    try:
        return _VAR_IDS[v]
    except KeyError:
        k = len(_VARS)
        _VAR_IDS[v] = k
        _VARS.append(v)
        _WEIGHTS.append(WEIGHT[v.kind])
        return k


def variable_of(k: int) -> Variable:
    return _VARS[k]


Monomial = Tuple[Tuple[int, int], ...]
ONE: Monomial = ()

Scalar = Union[int, Fraction]


@lru_cache(maxsize=None)
def monomial_grade(m: Monomial) -> int:
    return sum(e * _WEIGHTS[k] for k, e in m)


@lru_cache(maxsize=1 << 20)
def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        d[k] = d.get(k, 0) + e
    return tuple(sorted(d.items()))


def monomial_variables(m: Monomial) -> Iterator[Tuple[Variable, int]]:
    for k, e in m:
        yield _VARS[k], e


def monomial_key(m: Monomial):
    """Canonical ordering key: variables by (class, indices), then exponents."""
    return tuple(sorted((_VARS[k].sort_key(), e) for k, e in m))


def monomial_str(m: Monomial) -> str:
    parts = []
    for v, e in sorted(monomial_variables(m), key=lambda ve: ve[0].sort_key()):
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return " * ".join(parts) if parts else "1"


def fraction_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Immutable sparse polynomial ``{Monomial: Fraction}`` with no zero terms."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self.terms: Dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls({ONE: c}) if c else cls()

    @classmethod
    def var(cls, v: Variable, exponent: int = 1) -> "Polynomial":
        if exponent == 0:
            return cls.const(1)
        return cls._raw({((var_id(v), exponent),): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, Variable):
            return cls.var(x)
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Polynomial")

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def grade(self) -> float:
        if not self.terms:
            return float("-inf")
        return max(monomial_grade(m) for m in self.terms)

    @property
    def min_grade(self) -> float:
        if not self.terms:
            return float("inf")
        return min(monomial_grade(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def variables(self) -> set:
        return {_VARS[k] for m in self.terms for k, _ in m}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: monomial_key(mc[0]))

    def homogeneous(self, g: int) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self.terms.items() if monomial_grade(m) == g})

    def truncate(self, order: int) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self.terms.items() if monomial_grade(m) <= order})

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = Polynomial.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                del out[m]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return Polynomial.coerce(other) - self

    def scale(self, c: Scalar) -> "Polynomial":
        if not c:
            return Polynomial()
        c = Fraction(c)
        return Polynomial._raw({m: v * c for m, v in self.terms.items()})

    def mul(self, other, order: int | None = None) -> "Polynomial":
        """Product, dropping every term of grade above ``order`` if given."""
        other = Polynomial.coerce(other)
        if not self.terms or not other.terms:
            return Polynomial()
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Monomial, Fraction] = {}
        if order is None:
            for mb, cb in b.items():
                for ma, ca in a.items():
                    m = monomial_mul(ma, mb)
                    out[m] = out.get(m, 0) + ca * cb
        else:
            bs = sorted(((monomial_grade(m), m, c) for m, c in b.items()), key=lambda t: t[0])
            for ma, ca in a.items():
                room = order - monomial_grade(ma)
                if room < 0:
                    continue
                for gb, mb, cb in bs:
                    if gb > room:
                        break
                    m = monomial_mul(ma, mb)
                    out[m] = out.get(m, 0) + ca * cb
        return Polynomial._raw({m: c for m, c in out.items() if c})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.mul(other)

    def __rmul__(self, other) -> "Polynomial":
        return self.__mul__(other)

    def __truediv__(self, c: Scalar) -> "Polynomial":
        return self.scale(Fraction(1) / Fraction(c))

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def power(self, k: int, order: int | None = None) -> "Polynomial":
        out = Polynomial.const(1)
        for _ in range(k):
            out = out.mul(self, order)
        return out

    # -- substitution and evaluation ---------------------------------------

    def subs(self, mapping: Mapping[Variable, object]) -> "Polynomial":
        """Replace variables by polynomials (or scalars); others are kept."""
        repl = {var_id(v): Polynomial.coerce(p) for v, p in mapping.items()}
        out = Polynomial()
        cache: Dict[Tuple[int, int], Polynomial] = {}
        for m, c in self.terms.items():
            kept = []
            factor = Polynomial.const(c)
            for k, e in m:
                if k in repl:
                    key = (k, e)
                    if key not in cache:
                        cache[key] = repl[k] ** e
                    factor = factor * cache[key]
                else:
                    kept.append((k, e))
            if kept:
                factor = factor * Polynomial._raw({tuple(kept): Fraction(1)})
            out = out + factor
        return out

    def evaluate_mod(self, values: Mapping[Variable, int], p: int) -> int:
        vals = {var_id(v): x % p for v, x in values.items()}
        total = 0
        for m, c in self.terms.items():
            t = c.numerator % p * pow(c.denominator, -1, p) % p
            for k, e in m:
                t = t * pow(vals[k], e, p) % p
            total += t
        return total % p

    # -- comparison and printing ------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Variable)):
            other = Polynomial.coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            cs = fraction_str(c)
            parts.append(cs if m == ONE else f"{cs} * {monomial_str(m)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def var(kind: str, *indices: int) -> Polynomial:
    return Polynomial.var(make_variable(kind, *indices))


def const(c: Scalar) -> Polynomial:
    return Polynomial.const(c)


ZERO = Polynomial()


# -- parsing ---------------------------------------------------------------

_FACTOR_RE = re.compile(
    r"^\s*(?:(?P<num>-?\d+(?:/\d+)?)|(?P<kind>[A-Za-z]+)(?:\((?P<idx>[\d,\s]*)\))?)\s*(?:\^\s*(?P<exp>\d+))?\s*$"
)


def parse_factor(text: str) -> Polynomial:
    mt = _FACTOR_RE.match(text)
    if not mt:
        raise ValueError(f"cannot parse factor {text!r}")
    exp = int(mt.group("exp") or 1)
    if mt.group("num") is not None:
        return Polynomial.const(Fraction(mt.group("num")) ** exp)
    idx = mt.group("idx")
    indices = tuple(int(x) for x in idx.split(",") if x.strip()) if idx else ()
    return Polynomial.var(make_variable(mt.group("kind"), *indices), exp)


def parse_polynomial(text: str) -> Polynomial:
    """Inverse of ``str(Polynomial)``: terms joined by ``+``, factors by ``*``."""
    text = text.strip()
    if text in ("", "0"):
        return Polynomial()
    out = Polynomial()
    for term in re.split(r"\s\+\s", text):
        prod = Polynomial.const(1)
        for factor in term.split("*"):
            prod = prod * parse_factor(factor)
        out = out + prod
    return out


# -- graded series ---------------------------------------------------------

def truncate(p: Polynomial, order: int) -> "GradedSeries":
    if order < 0:
        raise ValueError("truncation order must be non-negative")
    return GradedSeries(p.truncate(order), order)


@dataclass(frozen=True)
class GradedSeries:
    """A polynomial known only up to (and including) grade ``order``."""

    body: Polynomial
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("truncation order must be non-negative")
        if self.body.grade > self.order:
            object.__setattr__(self, "body", self.body.truncate(self.order))

    @classmethod
    def of(cls, x, order: int) -> "GradedSeries":
        return cls(Polynomial.coerce(x), order)

    def _order_with(self, other) -> Tuple[Polynomial, int]:
        if isinstance(other, GradedSeries):
            return other.body, min(self.order, other.order)
        return Polynomial.coerce(other), self.order

    def __add__(self, other) -> "GradedSeries":
        body, order = self._order_with(other)
        return GradedSeries(self.body.truncate(order) + body.truncate(order), order)

    __radd__ = __add__

    def __neg__(self) -> "GradedSeries":
        return GradedSeries(-self.body, self.order)

    def __sub__(self, other) -> "GradedSeries":
        return self + (-other)

    def __mul__(self, other) -> "GradedSeries":
        if isinstance(other, (int, Fraction)):
            return GradedSeries(self.body.scale(other), self.order)
        body, order = self._order_with(other)
        return GradedSeries(self.body.mul(body, order), order)

    __rmul__ = __mul__

    def homogeneous(self, g: int) -> Polynomial:
        return self.body.homogeneous(g)

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedSeries):
            return self.order == other.order and self.body == other.body
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.body, self.order))

    def __str__(self) -> str:
        return f"{self.body} + O({self.order + 1})"


def _graded_parts(p: Polynomial, order: int) -> list:
    parts = [dict() for _ in range(order + 1)]
    for m, c in p.terms.items():
        g = monomial_grade(m)
        if g <= order:
            parts[g][m] = c
    return [Polynomial._raw(d) for d in parts]


def series_exp(s: GradedSeries) -> GradedSeries:
    """exp(s) for s with no grade-0 terms, via the homogeneous recurrence
    m E_m = sum_k k s_k E_{m-k}."""
    order = s.order
    parts = _graded_parts(s.body, order)
    if parts[0]:
        raise ValueError("series_exp needs every term of grade >= 1")
    e = [Polynomial.const(1)]
    for m in range(1, order + 1):
        acc = Polynomial()
        for k in range(1, m + 1):
            if parts[k] and e[m - k]:
                acc = acc + (parts[k] * e[m - k]).scale(k)
        e.append(acc.scale(Fraction(1, m)))
    total = Polynomial()
    for part in e:
        total = total + part
    return GradedSeries(total, order)


def series_log(s: GradedSeries) -> GradedSeries:
    """log(s) for s whose grade-0 part is exactly 1."""
    order = s.order
    f = _graded_parts(s.body, order)
    if f[0] != Polynomial.const(1):
        raise ValueError("series_log needs grade-0 part equal to 1")
    logs = [Polynomial()]
    for m in range(1, order + 1):
        acc = Polynomial()
        for k in range(1, m):
            if logs[k] and f[m - k]:
                acc = acc + (logs[k] * f[m - k]).scale(k)
        logs.append(f[m] - acc.scale(Fraction(1, m)))
    total = Polynomial()
    for part in logs:
        total = total + part
    return GradedSeries(total, order)


def poly_sum(items: Iterable[Polynomial]) -> Polynomial:
    out: Dict[Monomial, Fraction] = {}
    for p in items:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return Polynomial._raw({m: c for m, c in out.items() if c})
