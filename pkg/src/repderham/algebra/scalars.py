"""Exact coefficient fields.

Two fields are supported: the rationals (backed by ``gmpy2.mpq``) and the
field of univariate rational functions over the rationals in one named
variable.  Rational functions are kept in lowest terms with a monic
denominator, so equality is structural.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from gmpy2 import mpq

_ZERO = mpq(0)
_ONE = mpq(1)


def to_mpq(x) -> mpq:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to ``mpq``."""
    if type(x) is type(_ZERO):
        return x
    if isinstance(x, (int, Rational)):
        if isinstance(x, Fraction):
            return mpq(x.numerator, x.denominator)
        return mpq(x)
    if isinstance(x, str):
        s = x.strip()
        try:
            return mpq(s)
        except ValueError as exc:
            raise ValueError(f"not an exact rational: {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q) -> str:
    q = to_mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class UPoly:
    """Dense univariate polynomial over Q, coefficients stored low to high."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_mpq(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c: list) -> "UPoly":
        while c and not c[-1]:
            c.pop()
        p = object.__new__(cls)
        p.c = tuple(c)
        return p

    @classmethod
    def constant(cls, a) -> "UPoly":
        return cls._raw([to_mpq(a)])

    @classmethod
    def x(cls) -> "UPoly":
        return cls._raw([_ZERO, _ONE])

    @classmethod
    def from_roots(cls, roots: Sequence) -> "UPoly":
        p = cls.constant(1)
        for r in roots:
            p = p * cls._raw([-to_mpq(r), _ONE])
        return p

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    @property
    def lc(self) -> mpq:
        return self.c[-1] if self.c else _ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.c == other.c
        try:
            o = to_mpq(other)
        except TypeError:
            return NotImplemented
        return self.c == ((o,) if o else ())

    def __hash__(self) -> int:
        return hash(("UPoly", self.c))

    def __add__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            other = UPoly.constant(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return UPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly._raw([-v for v in self.c])

    def __sub__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            other = UPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "UPoly":
        return (-self) + other

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            s = to_mpq(other)
            return UPoly._raw([v * s for v in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return UPoly._raw([])
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if not u:
                continue
            for j, v in enumerate(b):
                out[i + j] += u * v
        return UPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UPoly":
        if n < 0:
            raise ValueError("negative power")
        out, base = UPoly.constant(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "UPoly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        d = other.c
        dl = len(d) - 1
        inv = 1 / d[-1]
        if len(r) <= dl:
            return UPoly._raw([]), UPoly._raw(r)
        q = [_ZERO] * (len(r) - dl)
        for k in range(len(r) - 1, dl - 1, -1):
            coef = r[k] * inv
            if not coef:
                continue
            q[k - dl] = coef
            for j in range(dl + 1):
                r[k - dl + j] -= coef * d[j]
        return UPoly._raw(q), UPoly._raw(r[:dl])

    def __floordiv__(self, other: "UPoly") -> "UPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UPoly") -> "UPoly":
        return divmod(self, other)[1]

    def monic(self) -> "UPoly":
        if not self.c:
            return self
        inv = 1 / self.c[-1]
        return UPoly._raw([v * inv for v in self.c])

    def gcd(self, other: "UPoly") -> "UPoly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "UPoly":
        return UPoly._raw([v * i for i, v in enumerate(self.c)][1:])

    def __call__(self, x):
        acc = 0 * x
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def squarefree_part(self) -> "UPoly":
        if self.degree <= 0:
            return UPoly.constant(1) if self else self
        return (self // self.gcd(self.derivative())).monic()

    def shift(self, a) -> "UPoly":
        """Return p(s + a) as a polynomial in s."""
        a = to_mpq(a)
        out = UPoly._raw([])
        lin = UPoly._raw([a, _ONE])
        for v in reversed(self.c):
            out = out * lin + v
        return out

    def content_primitive(self) -> "UPoly":
        """Scale to integer coefficients with content 1 and positive leading coefficient."""
        if not self.c:
            return self
        from math import gcd, lcm

        den = 1
        for v in self.c:
            den = lcm(den, int(v.denominator))
        ints = [int(v * den) for v in self.c]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return UPoly._raw([mpq(v, g) for v in ints])

    def to_str(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            v = self.c[i]
            if not v:
                continue
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            parts.append((v, mon))
        return _join_terms(parts)

    def __repr__(self) -> str:
        return f"UPoly({self.to_str()})"


def _join_terms(parts) -> str:
    """Join (coefficient, monomial-string) pairs in canonical text form."""
    out = []
    for k, (v, mon) in enumerate(parts):
        neg = v < 0
        a = -v if neg else v
        if mon:
            body = mon if a == 1 else f"{format_rational(a)}*{mon}"
        else:
            body = format_rational(a)
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) if out else "0"


class RationalFunction:
    """Element of Q(var): numerator/denominator in lowest terms, monic denominator."""

    __slots__ = ("num", "den", "var")

    def __init__(self, num, den=None, var: str = "t"):
        if not isinstance(num, UPoly):
            num = UPoly.constant(num)
        if den is None:
            den = UPoly.constant(1)
        elif not isinstance(den, UPoly):
            den = UPoly.constant(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        self.var = var
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, num: UPoly, den: UPoly, var: str) -> "RationalFunction":
        r = object.__new__(cls)
        r.num, r.den, r.var = num, den, var
        return r

    @classmethod
    def variable(cls, var: str) -> "RationalFunction":
        return cls._raw(UPoly.x(), UPoly.constant(1), var)

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.var != self.var:
                raise ValueError(f"mixing Q({self.var}) and Q({other.var})")
            return other
        if isinstance(other, UPoly):
            return RationalFunction._raw(other, UPoly.constant(1), self.var)
        return RationalFunction._raw(UPoly.constant(other), UPoly.constant(1), self.var)

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.lc if self.num else _ZERO

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    def __add__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if self.den.is_constant() and o.den.is_constant():
            return RationalFunction._raw(self.num + o.num, self.den, self.var)
        if self.den == o.den:
            num, den = _normalize(self.num + o.num, self.den)
        else:
            num, den = _normalize(self.num * o.den + o.num * self.den, self.den * o.den)
        return RationalFunction._raw(num, den, self.var)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._raw(-self.num, self.den, self.var)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if self.den.is_constant() and o.den.is_constant():
            return RationalFunction._raw(self.num * o.num, self.den, self.var)
        num, den = _normalize(self.num * o.num, self.den * o.den)
        return RationalFunction._raw(num, den, self.var)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        num, den = _normalize(self.den, self.num)
        return RationalFunction._raw(num, den, self.var)

    def __truediv__(self, other) -> "RationalFunction":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction._raw(self.num ** n, self.den ** n, self.var)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def rename(self, var: str) -> "RationalFunction":
        return RationalFunction._raw(self.num, self.den, var)

    def __str__(self) -> str:
        n = self.num.to_str(self.var)
        if self.den == 1:
            return n
        if self.den.degree == 0:
            # unreachable for monic denominators, kept for safety
            return f"({n})/{format_rational(self.den.lc)}"
        return f"({n})/({self.den.to_str(self.var)})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _normalize(num: UPoly, den: UPoly):
    if not num:
        return num, UPoly.constant(1)
    if den.degree > 0:
        g = num.gcd(den)
        if g.degree > 0:
            num = num // g
            den = den // g
    lc = den.lc
    if lc != 1:
        inv = 1 / lc
        num = num * inv
        den = den * inv
    return num, den


class RationalField:
    """The field Q."""

    name = "QQ"

    def __call__(self, x) -> mpq:
        if isinstance(x, RationalFunction):
            return x.constant_value()
        return to_mpq(x)

    convert = __call__

    @property
    def zero(self) -> mpq:
        return _ZERO

    @property
    def one(self) -> mpq:
        return _ONE

    def format(self, c) -> str:
        return format_rational(c)

    def is_rational(self, c) -> bool:
        return True

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


class RationalFunctionField:
    """The field Q(var) of univariate rational functions."""

    def __init__(self, var: str):
        self.var = var
        self.name = f"QQ({var})"

    def __call__(self, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            if x.var != self.var:
                raise ValueError(f"element of Q({x.var}) is not in {self.name}")
            return x
        if isinstance(x, UPoly):
            return RationalFunction._raw(x, UPoly.constant(1), self.var)
        return RationalFunction._raw(UPoly.constant(x), UPoly.constant(1), self.var)

    convert = __call__

    @property
    def zero(self) -> RationalFunction:
        return self(0)

    @property
    def one(self) -> RationalFunction:
        return self(1)

    @property
    def gen(self) -> RationalFunction:
        return RationalFunction.variable(self.var)

    def format(self, c: RationalFunction) -> str:
        return str(c)

    def is_rational(self, c: RationalFunction) -> bool:
        return c.is_constant()

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalFunctionField) and other.var == self.var

    def __hash__(self) -> int:
        return hash(("QQ(.)", self.var))

    def __repr__(self) -> str:
        return self.name


QQ = RationalField()
