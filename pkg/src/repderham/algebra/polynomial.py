"""Sparse multivariate polynomials over an exact field."""
from __future__ import annotations

import re
from math import gcd, lcm
from typing import Iterable, Mapping

from gmpy2 import mpq

from .scalars import QQ, RationalField, RationalFunction, RationalFunctionField, format_rational, to_mpq


class PolynomialError(ValueError):
    pass


class UnknownVariableError(PolynomialError):
    pass


class RingMismatchError(PolynomialError):
    pass


class ParseError(PolynomialError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class PolynomialRing:
    """Polynomial ring over ``field`` in an ordered tuple of named variables."""

    def __init__(self, variables: Iterable[str], field=QQ):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise PolynomialError(f"duplicate variable names in {variables}")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise PolynomialError(f"invalid variable name {v!r}")
        if isinstance(field, RationalFunctionField) and field.var in variables:
            raise PolynomialError(f"coefficient variable {field.var!r} is also a ring variable")
        self.variables = variables
        self.field = field
        self._index = {v: i for i, v in enumerate(variables)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r} in ring {self.variables}") from None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolynomialRing)
            and self.variables == other.variables
            and self.field == other.field
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.field))

    def __repr__(self) -> str:
        return f"PolynomialRing({', '.join(self.variables)}; {self.field!r})"

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(v) for v in self.variables)

    def monomial(self, exp, coeff=1) -> "Polynomial":
        exp = tuple(exp)
        if len(exp) != self.nvars:
            raise PolynomialError("exponent vector length does not match ring")
        c = self.field(coeff)
        return Polynomial(self, {exp: c} if c else {})

    def from_dict(self, terms: Mapping) -> "Polynomial":
        out = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != self.nvars or any(k < 0 for k in e):
                raise PolynomialError(f"bad exponent vector {e}")
            c = self.field(c)
            if c:
                out[e] = c
        return Polynomial(self, out)

    def parse(self, text: str) -> "Polynomial":
        return poly_parse(text, self)

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x.to_ring(self)
        if isinstance(x, str):
            return self.parse(x)
        return self.constant(x)

    def with_field(self, field) -> "PolynomialRing":
        return PolynomialRing(self.variables, field)


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero scalars."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic predicates
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), self.ring.field.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.ring.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def support_variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.variables[i])
        return used

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    # arithmetic
    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        return self.ring.constant(other)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.constant(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._lift(other) - self

    def scale(self, s) -> "Polynomial":
        s = self.ring.field(s)
        if not s:
            return self.ring.zero()
        return Polynomial(self.ring, {e: c * s for e, c in self.terms.items()})

    def mul_term(self, exp, coeff) -> "Polynomial":
        if not coeff:
            return self.ring.zero()
        return Polynomial(self.ring, {_add_exp(e, exp): c * coeff for e, c in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._lift(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial(self.ring, {e: c for e, c in out.items() if c})

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise PolynomialError("exponent must be a non-negative integer")
        out, base = self.ring.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            other = self._lift(other)
            if not other.is_constant():
                raise PolynomialError("division by a non-constant polynomial")
            other = other.constant_coeff()
        s = self.ring.field(other)
        if not s:
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(1 / s)

    # calculus and evaluation
    def derivative(self, var: str) -> "Polynomial":
        i = self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Polynomial(self.ring, out)

    def evaluate(self, point: Mapping):
        """Evaluate at a full assignment ``{variable: scalar}``."""
        missing = [v for v in self.ring.variables if v not in point]
        if missing:
            raise PolynomialError(f"missing assignment for {missing}")
        field = self.ring.field
        vals = [field(point[v]) for v in self.ring.variables]
        total = field.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def substitute(self, mapping: Mapping, ring: PolynomialRing | None = None) -> "Polynomial":
        """Substitute variables by polynomials of ``ring`` (or scalars).

        Variables not in ``mapping`` are carried over by name into ``ring``.
        """
        ring = ring or self.ring
        images = []
        for v in self.ring.variables:
            if v in mapping:
                img = mapping[v]
                images.append(img if isinstance(img, Polynomial) else ring.constant(img))
            else:
                images.append(ring.gen(v))
        for img in images:
            if img.ring != ring:
                raise RingMismatchError("substitution image lives in a different ring")
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        total = ring.zero()
        for e, c in self.terms.items():
            term = ring.constant(ring.field(c))
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def to_ring(self, ring: PolynomialRing) -> "Polynomial":
        """Re-express in another ring by matching variable names."""
        if ring == self.ring:
            return self
        pos = []
        for i, v in enumerate(self.ring.variables):
            pos.append(ring._index.get(v))
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise UnknownVariableError(
                            f"variable {self.ring.variables[i]!r} does not exist in {ring}"
                        )
                    ne[pos[i]] = k
            out[tuple(ne)] = ring.field(c)
        return Polynomial(ring, out)

    def map_coefficients(self, fn, ring: PolynomialRing | None = None) -> "Polynomial":
        ring = ring or self.ring
        out = {}
        for e, c in self.terms.items():
            v = ring.field(fn(c))
            if v:
                out[e] = v
        return Polynomial(ring, out)

    # ordering helpers
    def leading_term(self, order):
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        e = order.leading(self.terms)
        return e, self.terms[e]

    def leading_monomial(self, order):
        return self.leading_term(order)[0]

    def leading_coefficient(self, order):
        return self.leading_term(order)[1]

    def monic(self, order) -> "Polynomial":
        if not self.terms:
            return self
        return self / self.leading_coefficient(order)

    def primitive(self, order=None) -> "Polynomial":
        """Integer coefficients with content 1 and positive leading coefficient (QQ only)."""
        if not isinstance(self.ring.field, RationalField):
            raise PolynomialError("primitive part is only defined over QQ")
        if not self.terms:
            return self
        from .orders import MonomialOrder

        order = order or MonomialOrder.deglex(self.ring)
        den = 1
        for c in self.terms.values():
            den = lcm(den, int(c.denominator))
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        lead = order.leading(self.terms)
        if ints[lead] < 0:
            g = -g
        return Polynomial(self.ring, {e: mpq(v, g) for e, v in ints.items()})

    def sorted_terms(self, order=None):
        from .orders import MonomialOrder

        order = order or MonomialOrder.deglex(self.ring)
        return sorted(self.terms.items(), key=lambda ec: order.key(ec[0]), reverse=True)

    # printing
    def format(self, order=None) -> str:
        return poly_print(self, order)

    def __str__(self) -> str:
        return poly_print(self)

    def __repr__(self) -> str:
        return f"Polynomial({poly_print(self)!r})"


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def _monomial_str(ring: PolynomialRing, exp) -> str:
    parts = []
    for v, k in zip(ring.variables, exp):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def poly_print(p: Polynomial, order=None) -> str:
    """Canonical text: terms descending under ``order`` (deglex by default)."""
    if not p.terms:
        return "0"
    field = p.ring.field
    out = []
    for k, (e, c) in enumerate(p.sorted_terms(order)):
        mon = _monomial_str(p.ring, e)
        if field.is_rational(c):
            q = field.convert(c) if isinstance(field, RationalField) else c.constant_value()
            neg = q < 0
            a = -q if neg else q
            if mon:
                body = mon if a == 1 else f"{format_rational(a)}*{mon}"
            else:
                body = format_rational(a)
        else:
            neg = False
            body = f"({field.format(c)})"
            if mon:
                body = f"{body}*{mon}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _Parser:
    """Recursive-descent parser for +, -, *, /, ^ and parentheses.

    ``make_var`` and ``make_num`` map atoms to values supporting ring
    operations; division is delegated to the value type.
    """

    def __init__(self, text: str, make_var, make_num):
        self.text = text
        self.make_var = make_var
        self.make_num = make_num
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            start = m.start(m.lastindex)
            if m.group(1) is not None:
                self.tokens.append(("num", m.group(1), start))
            elif m.group(2) is not None:
                self.tokens.append(("var", m.group(2), start))
            else:
                ch = m.group(3)
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", text, start)
                self.tokens.append(("op", ch, start))
            pos = m.end()
            if text[pos:].strip() == "":
                break
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", self.text, 0)
        val = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return val

    def expr(self):
        kind, tok, _ = self.peek()
        neg = False
        if kind == "op" and tok in "+-":
            self.take()
            neg = tok == "-"
        val = self.term()
        if neg:
            val = -val
        while True:
            kind, tok, _ = self.peek()
            if kind == "op" and tok in "+-":
                self.take()
                rhs = self.term()
                val = val + rhs if tok == "+" else val - rhs
            else:
                return val

    def term(self):
        val = self.power()
        while True:
            kind, tok, pos = self.peek()
            if kind == "op" and tok == "*":
                self.take()
                val = val * self.power()
            elif kind == "op" and tok == "/":
                self.take()
                rhs = self.power()
                try:
                    val = val / rhs
                except ZeroDivisionError:
                    raise ParseError("division by zero", self.text, pos) from None
                except PolynomialError as exc:
                    raise ParseError(str(exc), self.text, pos) from None
            else:
                return val

    def power(self):
        base = self.atom()
        kind, tok, _ = self.peek()
        if kind == "op" and tok == "^":
            self.take()
            kind, tok, _ = self.peek()
            if kind != "num":
                self.error("expected a non-negative integer exponent")
            self.take()
            return base ** int(tok)
        return base

    def atom(self):
        kind, tok, pos = self.take()
        if kind == "num":
            return self.make_num(int(tok))
        if kind == "var":
            try:
                return self.make_var(tok)
            except UnknownVariableError as exc:
                raise UnknownVariableError(f"{exc} (position {pos})") from None
        if kind == "op" and tok == "(":
            val = self.expr()
            if self.take()[1] != ")":
                self.i -= 1
                self.error("expected ')'")
            return val
        if kind == "op" and tok == "-":
            return -self.power()
        self.i -= 1
        self.error("expected a number, variable or '('")


def poly_parse(text: str, ring: PolynomialRing) -> Polynomial:
    """Parse ``text`` into a polynomial of ``ring``.

    Over ``Q(b)`` the coefficient variable ``b`` may appear; it is folded into
    the coefficients, and division by polynomials in ``b`` is allowed.
    """
    field = ring.field

    def make_var(name):
        if isinstance(field, RationalFunctionField) and name == field.var:
            return ring.constant(field.gen)
        return ring.gen(name)

    return _Parser(text, make_var, ring.constant).parse()


def parse_rational_function(text: str, var: str = "t") -> RationalFunction:
    """Parse a univariate rational function such as ``(t+10)/((t-2)*(t+2))``."""

    def make_var(name):
        if name != var:
            raise UnknownVariableError(f"unknown variable {name!r}; expected {var!r}")
        return RationalFunction.variable(var)

    return _Parser(text, make_var, lambda n: RationalFunction(to_mpq(n), var=var)).parse()
