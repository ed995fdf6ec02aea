"""Bigraded polynomial rings ``Q[x1..xm, t1..td]`` and their polynomials.

Monomials are exponent tuples of length ``m + d``: the first ``m`` entries
are x-exponents, the last ``d`` are t-exponents.  The bidegree of a monomial
is ``(x-total-degree, t-total-degree)``; ``x`` is the auxiliary base grading,
``t`` the fiber grading.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from operator import add, le, sub
from typing import Dict, Iterator, List, Tuple

from .linalg import ONE, QQ, ZERO, to_qq

Monomial = Tuple[int, ...]


class RingMismatchError(ValueError):
    """Raised when two objects over different ring signatures are combined."""


class NotBihomogeneousError(ValueError):
    """Raised when a polynomial that must be bihomogeneous is not."""


@dataclass(frozen=True, order=True)
class BiDegree:
    x: int
    t: int

    def __add__(self, other: "BiDegree") -> "BiDegree":
        return BiDegree(self.x + other.x, self.t + other.t)

    def __sub__(self, other: "BiDegree") -> "BiDegree":
        return BiDegree(self.x - other.x, self.t - other.t)

    def __neg__(self) -> "BiDegree":
        return BiDegree(-self.x, -self.t)

    def __iter__(self):
        yield self.x
        yield self.t

    def __repr__(self) -> str:
        return f"({self.x},{self.t})"


def compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    """All tuples of ``parts`` non-negative ints summing to ``total``, lex descending."""
    return list(_compositions(total, parts))


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> Tuple[Tuple[int, ...], ...]:
    if total < 0:
        return ()
    if parts == 0:
        return ((),) if total == 0 else ()
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class Ring:
    """Signature ``(m, d)`` of ``S = A[t1..td]`` with ``A = Q[x1..xm]``."""

    m: int
    d: int

    def __post_init__(self):
        if self.m < 0 or self.d < 0:
            raise ValueError("ring signature must be non-negative")

    @property
    def nvars(self) -> int:
        return self.m + self.d

    @property
    def names(self) -> List[str]:
        return [f"x{i + 1}" for i in range(self.m)] + [f"t{i + 1}" for i in range(self.d)]

    @property
    def one(self) -> Monomial:
        return (0,) * self.nvars

    def base(self) -> "Ring":
        """The coefficient ring ``A`` (no fiber variables)."""
        return Ring(self.m, 0)

    def bidegree(self, mono: Monomial) -> BiDegree:
        m = self.m
        return BiDegree(sum(mono[:m]), sum(mono[m:]))

    def monomials(self, deg: BiDegree) -> Tuple[Monomial, ...]:
        """All monomials of the given bidegree (empty when none exist)."""
        return _monomials(self.m, self.d, deg.x, deg.t)

    def t_monomials(self, k: int) -> Tuple[Monomial, ...]:
        """Pure t-monomials of t-degree ``k``, as full-length exponent tuples."""
        return _monomials(self.m, self.d, 0, k)

    def variable(self, name: str) -> Monomial:
        idx = self.names.index(name)
        return tuple(1 if i == idx else 0 for i in range(self.nvars))

    def t_var(self, i: int) -> Monomial:
        """Exponent tuple of ``t_{i+1}`` (0-based ``i``)."""
        e = [0] * self.nvars
        e[self.m + i] = 1
        return tuple(e)


@lru_cache(maxsize=None)
def _monomials(m: int, d: int, a: int, b: int) -> Tuple[Monomial, ...]:
    if a < 0 or b < 0 or (m == 0 and a != 0) or (d == 0 and b != 0):
        return ()
    xs = _compositions(a, m)
    ts = _compositions(b, d)
    return tuple(x + t for t in ts for x in xs)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(add, a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(sub, a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(map(le, a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def subsets(d: int, size: int) -> List[Tuple[int, ...]]:
    """Index sets of ``range(d)`` of the given size, lexicographically ordered."""
    return list(combinations(range(d), size))


class Polynomial:
    """Sparse polynomial: map from monomials to nonzero rationals.  Immutable."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Dict[Monomial, object] | None = None):
        self.ring = ring
        clean: Dict[Monomial, QQ] = {}
        for mono, c in (terms or {}).items():
            if len(mono) != ring.nvars:
                raise RingMismatchError(f"monomial {mono} does not fit ring {ring}")
            c = to_qq(c)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, ring: Ring) -> "Polynomial":
        return cls(ring)

    @classmethod
    def constant(cls, ring: Ring, c=1) -> "Polynomial":
        return cls(ring, {ring.one: c})

    @classmethod
    def var(cls, ring: Ring, name: str) -> "Polynomial":
        return cls(ring, {ring.variable(name): 1})

    @classmethod
    def parse(cls, ring: Ring, text: str) -> "Polynomial":
        from .polyio import parse_polynomial

        return parse_polynomial(ring, text)

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError(f"ring {self.ring} vs {other.ring}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.ring, other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            nc = out.get(mono, ZERO) + c
            if nc:
                out[mono] = nc
            else:
                out.pop(mono, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {mono: -c for mono, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out: Dict[Monomial, QQ] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                out[mono] = out.get(mono, ZERO) + c1 * c2
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = to_qq(c)
        return Polynomial(self.ring, {mono: a * c for mono, a in self.terms.items()})

    # inspection -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def bidegrees(self) -> set:
        return {self.ring.bidegree(mono) for mono in self.terms}

    def is_bihomogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def bidegree(self) -> BiDegree | None:
        """Common bidegree of all terms; None for zero; raises if mixed."""
        degs = self.bidegrees()
        if not degs:
            return None
        if len(degs) > 1:
            monos = sorted(self.terms)
            a, b = monos[0], next(mm for mm in monos if self.ring.bidegree(mm) != self.ring.bidegree(monos[0]))
            raise NotBihomogeneousError(
                f"{self} is not bihomogeneous: {format_monomial(self.ring, a)} has bidegree "
                f"{self.ring.bidegree(a)} but {format_monomial(self.ring, b)} has {self.ring.bidegree(b)}"
            )
        return degs.pop()

    def reverse(self) -> "Polynomial":
        """Substitute ``t_i -> -t_i``."""
        m = self.ring.m
        return Polynomial(
            self.ring, {mono: (-c if sum(mono[m:]) % 2 else c) for mono, c in self.terms.items()}
        )

    def __iter__(self) -> Iterator[Tuple[Monomial, QQ]]:
        return iter(sorted(self.terms.items(), key=lambda kv: _display_key(self.ring, kv[0]), reverse=True))

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def _display_key(ring: Ring, mono: Monomial):
    deg = ring.bidegree(mono)
    return (deg.t + deg.x, deg.t, mono[ring.m:], mono[: ring.m])


def format_monomial(ring: Ring, mono: Monomial) -> str:
    parts = []
    for name, e in zip(ring.names, mono):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def _format_coeff(c) -> str:
    if c.denominator == 1:
        return str(int(c.numerator))
    return f"{int(c.numerator)}/{int(c.denominator)}"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for i, (mono, c) in enumerate(p):
        neg = c < 0
        a = -c if neg else c
        mono_s = format_monomial(p.ring, mono)
        if mono_s == "1":
            body = _format_coeff(a)
        elif a == ONE:
            body = mono_s
        else:
            body = f"{_format_coeff(a)}*{mono_s}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def poly_arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    """Exact ``p + q`` or ``p * q``; the rings must agree."""
    if p.ring != q.ring:
        raise RingMismatchError(f"ring {p.ring} vs {q.ring}")
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")

