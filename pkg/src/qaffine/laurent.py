"""Exact arithmetic in Z[q, q^-1] and quantum combinatorics.

Coefficients are Python ints whenever possible.  Other rationals are
accepted because some intermediate quantities (exponential series
coefficients, Heisenberg normalisations) carry integer denominators; they
are stored as gmpy2 rationals when gmpy2 is present.  ``is_integral`` tells
the two apart.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from numbers import Rational
from typing import Iterable, Mapping


try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover
    _rational = Fraction


def _norm(c):
    """Integral values as int, other rationals in the fast rational type."""
    if type(c) is int:
        return c
    if c.denominator == 1:
        return int(c.numerator)
    return c if type(c) is _rational else _rational(int(c.numerator), int(c.denominator))


class LaurentPoly:
    """Finitely supported map ``exponent -> coefficient`` in the variable q."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    c[int(e)] = _norm(v)
        self._c = c
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def _raw(cls, c: dict) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls._raw({0: _norm(c)} if c else {})

    @classmethod
    def monomial(cls, e: int, c=1) -> "LaurentPoly":
        return cls._raw({int(e): _norm(c)} if c else {})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, Rational):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # inspection ---------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Rational]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, e: int):
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self._c.values())

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self._c.values())

    def is_unit(self) -> bool:
        """True for +-q^k, the units of Z[q, q^-1]."""
        return len(self._c) == 1 and next(iter(self._c.values())) in (1, -1)

    def min_degree(self) -> int:
        return min(self._c) if self._c else 0

    def max_degree(self) -> int:
        return max(self._c) if self._c else 0

    def as_const(self):
        """Return the scalar if this is a constant, else raise ValueError."""
        if not self._c:
            return 0
        if set(self._c) == {0}:
            return self._c[0]
        raise ValueError(f"{self} is not constant")

    def __call__(self, x):
        return sum(v * x**e for e, v in self._c.items())

    # ring operations ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, Rational):
                other = LaurentPoly.const(other)
            else:
                return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = _norm(s)
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, (LaurentPoly, Rational)):
            return NotImplemented
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return ZERO
            return LaurentPoly._raw({e: _norm(v * other) for e, v in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return ZERO
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            (e1, v1), = a.items()
            if v1 == 1:
                return LaurentPoly._raw({e1 + e2: v2 for e2, v2 in b.items()})
            return LaurentPoly._raw({e1 + e2: _norm(v1 * v2) for e2, v2 in b.items()})
        c: dict[int, Rational] = {}
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial():
                (e, v), = self._c.items()
                return LaurentPoly.monomial(e * n, Fraction(1, 1) / Fraction(v) ** (-n))
            raise ValueError("negative power of a non-monomial")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q^k."""
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Polynomial long division after clearing powers of q from both operands.

        ``self == quo * other + rem`` with rem of lower span than ``other``.
        """
        other = LaurentPoly.coerce(other)
        if not other._c:
            raise ZeroDivisionError("division by zero LaurentPoly")
        if not self._c:
            return ZERO, ZERO
        lo_a, lo_b = self.min_degree(), other.min_degree()
        top = other.max_degree() - lo_b
        lead = Fraction(other._c[top + lo_b])
        b = {e - lo_b: v for e, v in other._c.items()}
        rem = {e - lo_a: v for e, v in self._c.items()}
        quo: dict[int, Rational] = {}
        while rem and max(rem) >= top:
            d = max(rem)
            f = _norm(Fraction(rem[d]) / lead)
            k = d - top
            quo[k] = f
            for e, v in b.items():
                s = rem.get(e + k, 0) - f * v
                if s:
                    rem[e + k] = _norm(s)
                else:
                    rem.pop(e + k, None)
        shift = lo_a - lo_b
        return (LaurentPoly({e + shift: v for e, v in quo.items()}),
                LaurentPoly({e + lo_a: v for e, v in rem.items()}))

    def exact_div(self, other) -> "LaurentPoly":
        """Divide exactly; raise ArithmeticError if ``other`` does not divide ``self``."""
        if isinstance(other, Rational):
            return self * (Fraction(1) / Fraction(other))
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, LaurentPoly):
            return self.exact_div(other)
        return NotImplemented

    # involutions --------------------------------------------------------
    def bar(self) -> "LaurentPoly":
        """q -> q^-1."""
        return LaurentPoly._raw({-e: v for e, v in self._c.items()})

    def neg_q(self) -> "LaurentPoly":
        """q -> -q."""
        return LaurentPoly._raw({e: (-v if e % 2 else v) for e, v in self._c.items()})

    def subs_power(self, k: int) -> "LaurentPoly":
        """q -> q^k (k != 0)."""
        return LaurentPoly({e * k: v for e, v in self._c.items()})

    # comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, Rational):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return render(self)


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
Q = LaurentPoly.monomial(1)


def render(p: LaurentPoly) -> str:
    """Canonical text: terms ``c*q^e`` sorted by decreasing exponent, joined by ' + '."""
    if not p._c:
        return "0"
    parts = []
    for e in sorted(p._c, reverse=True):
        v = p._c[e]
        parts.append(f"{v}*q^{e}")
    return " + ".join(parts)


def parse(text: str) -> LaurentPoly:
    """Inverse of :func:`render`."""
    text = text.strip()
    if text == "0":
        return ZERO
    c = {}
    for term in text.split(" + "):
        coef, _, exp = term.partition("*q^")
        c[int(exp)] = c.get(int(exp), 0) + Fraction(coef)
    return LaurentPoly(c)


def sign(k: int) -> int:
    """(-1)^k as an int, for any integer k."""
    return -1 if k % 2 else 1


def qpow(e: int, sign: int = 1) -> LaurentPoly:
    return LaurentPoly.monomial(e, sign)


@lru_cache(maxsize=None)
def qint(n: int) -> LaurentPoly:
    """Quantum integer [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}; [-n] = -[n]."""
    if n == 0:
        return ZERO
    if n < 0:
        return -qint(-n)
    return LaurentPoly._raw({n - 1 - 2 * k: 1 for k in range(n)})


@lru_cache(maxsize=None)
def qfactorial(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("qfactorial of a negative integer")
    out = ONE
    for m in range(1, n + 1):
        out = out * qint(m)
    return out


@lru_cache(maxsize=None)
def qbinom(n: int, k: int) -> LaurentPoly:
    if n < 0 or not 0 <= k <= n:
        raise ValueError(f"qbinom({n}, {k}) outside 0 <= k <= n")
    return qfactorial(n).exact_div(qfactorial(k) * qfactorial(n - k))


# graded dimensions -------------------------------------------------------

def degrees(f: LaurentPoly) -> list[int]:
    """Multiset of degrees of a graded dimension; coefficient m gives m copies."""
    if not f.is_integral() or not f.is_nonnegative():
        raise ValueError(f"{f} is not a graded dimension (needs coefficients in N)")
    out = []
    for e in sorted(f._c):
        out.extend([e] * f._c[e])
    return out


def ext_power(f: LaurentPoly, n: int) -> LaurentPoly:
    """Graded dimension of the n-th exterior power."""
    if n < 0:
        raise ValueError("negative exterior power")
    ds = degrees(f)
    acc: dict[int, int] = {}
    for sub in combinations(ds, n):
        e = sum(sub)
        acc[e] = acc.get(e, 0) + 1
    return LaurentPoly(acc)


def sym_power(f: LaurentPoly, n: int) -> LaurentPoly:
    """Graded dimension of the n-th symmetric power."""
    if n < 0:
        raise ValueError("negative symmetric power")
    ds = degrees(f)
    if not ds:
        return ONE if n == 0 else ZERO
    acc: dict[int, int] = {}
    for sub in combinations_with_replacement(ds, n):
        e = sum(sub)
        acc[e] = acc.get(e, 0) + 1
    return LaurentPoly(acc)


def lsum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    out = ZERO
    for x in items:
        out = out + x
    return out
