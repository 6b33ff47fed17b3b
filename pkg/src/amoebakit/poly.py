"""Exact multivariate Laurent polynomials over the rationals.

Coefficients are stored as ``int`` when integral and as
:class:`fractions.Fraction` otherwise; both are exact rationals and compare
and hash consistently.  Exponent vectors are tuples of signed integers whose
length is the arity of the polynomial.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

__all__ = [
    "ComplexApprox",
    "LaurentPoly",
    "ParseError",
    "default_names",
    "parse",
    "to_rational",
]

_EPS = 2.0 ** -53


def to_rational(x) -> int | Fraction:
    """Coerce ``x`` to the canonical exact scalar (int when integral)."""
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return to_rational(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return to_rational(Fraction(x.strip()))
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


def default_names(n: int, prefix: str = "z") -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


@dataclass(frozen=True)
class ComplexApprox:
    """A floating point complex value with an attached error certificate."""

    real: float
    imag: float
    residual_bound: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.residual_bound) or self.residual_bound < 0:
            raise ValueError("residual_bound must be finite and nonnegative")

    @property
    def value(self) -> complex:
        return complex(self.real, self.imag)

    def __complex__(self):
        return self.value

    def __abs__(self):
        return abs(self.value)

    @classmethod
    def of(cls, z, residual_bound: float = 0.0) -> "ComplexApprox":
        if isinstance(z, ComplexApprox):
            return z
        z = complex(z)
        return cls(z.real, z.imag, residual_bound)


class LaurentPoly:
    """Immutable sparse Laurent polynomial in ``nvars`` variables."""

    __slots__ = ("_terms", "_nvars", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, nvars: int | None = None):
        terms = terms or {}
        if nvars is None:
            if not terms:
                raise ValueError("nvars is required for the zero polynomial")
            nvars = len(next(iter(terms)))
        if nvars < 0:
            raise ValueError("arity must be nonnegative")
        clean = {}
        for exp, c in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
            c = to_rational(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "LaurentPoly":
        # trusted constructor: keys are int tuples, values are nonzero canonical rationals
        obj = object.__new__(cls)
        obj._terms = terms
        obj._nvars = nvars
        obj._hash = None
        return obj

    # ----- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "LaurentPoly":
        c = to_rational(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "LaurentPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for arity {nvars}")
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): 1}, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "LaurentPoly":
        return cls({tuple(exp): c}, len(exp))

    # ----- basic accessors ----------------------------------------------
    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[tuple]:
        return list(self._terms)

    def coeff(self, exp: Sequence[int]) -> Fraction:
        return Fraction(self._terms.get(tuple(exp), 0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.coeff((0,) * self._nvars)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def variables_used(self) -> list[int]:
        used = set()
        for e in self._terms:
            used.update(i for i, v in enumerate(e) if v)
        return sorted(used)

    def degree(self, i: int) -> int:
        """Largest exponent of variable ``i`` (``-inf`` style: -1 for zero)."""
        self._check_index(i)
        if not self._terms:
            return -1
        return max(e[i] for e in self._terms)

    def min_degree(self, i: int) -> int:
        self._check_index(i)
        if not self._terms:
            return 0
        return min(e[i] for e in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def min_exponents(self) -> tuple:
        if not self._terms:
            return (0,) * self._nvars
        return tuple(min(e[i] for e in self._terms) for i in range(self._nvars))

    def _check_index(self, i: int):
        if not 0 <= i < self._nvars:
            raise IndexError(f"variable index {i} out of range for arity {self._nvars}")

    # ----- equality / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._nvars == other._nvars and self._terms == other._terms
        try:
            c = to_rational(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({(0,) * self._nvars: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    # ----- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other._nvars != self._nvars:
                raise ValueError(f"arity mismatch: {self._nvars} vs {other._nvars}")
            return other
        return LaurentPoly.constant(other, self._nvars)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out, self._nvars)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self._nvars)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                c = to_rational(other)
            except TypeError:
                return NotImplemented
            if not c:
                return LaurentPoly.zero(self._nvars)
            return LaurentPoly._raw({e: _canon(v * c) for e, v in self._terms.items()}, self._nvars)
        if other._nvars != self._nvars:
            raise ValueError(f"arity mismatch: {self._nvars} vs {other._nvars}")
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: _canon(c) for e, c in out.items() if c}, self._nvars)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            if other.is_monomial():
                (e, c), = other._terms.items()
                return self.shift(tuple(-x for x in e)) * Fraction(1) / c
            return NotImplemented
        c = to_rational(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        inv = Fraction(1) / c
        return self * inv

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative powers are only defined for monomials")
            (e, c), = self._terms.items()
            return LaurentPoly._raw({tuple(x * k for x in e): _canon(Fraction(c) ** k)}, self._nvars)
        result = LaurentPoly.one(self._nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exp: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``z**exp``."""
        exp = tuple(exp)
        if len(exp) != self._nvars:
            raise ValueError("shift vector has wrong length")
        return LaurentPoly._raw(
            {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()}, self._nvars
        )

    def clear_monomial(self) -> tuple["LaurentPoly", tuple]:
        """Return ``(p * z**-m, m)`` where ``m`` is the componentwise minimum exponent.

        In the torus this only multiplies by a unit; the result is an ordinary
        polynomial not divisible by any variable.
        """
        m = self.min_exponents()
        if not any(m):
            return self, m
        return self.shift(tuple(-x for x in m)), m

    # ----- calculus -------------------------------------------------------
    def derivative(self, i: int) -> "LaurentPoly":
        self._check_index(i)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return LaurentPoly._raw(out, self._nvars)

    def euler_derivative(self, i: int) -> "LaurentPoly":
        """``z_i * d/dz_i`` applied termwise: ``c z^a -> (c a_i) z^a``."""
        self._check_index(i)
        return LaurentPoly._raw({e: c * e[i] for e, c in self._terms.items() if e[i]}, self._nvars)

    # ----- structure ------------------------------------------------------
    def coefficients_in(self, i: int) -> dict[int, "LaurentPoly"]:
        """Split by powers of variable ``i``; coefficients keep the full arity."""
        self._check_index(i)
        buckets: dict[int, dict] = {}
        for e, c in self._terms.items():
            ne = list(e)
            ne[i] = 0
            buckets.setdefault(e[i], {})[tuple(ne)] = c
        return {k: LaurentPoly._raw(v, self._nvars) for k, v in buckets.items()}

    def leading_coefficient_in(self, i: int) -> "LaurentPoly":
        if not self._terms:
            return self
        return self.coefficients_in(i)[self.degree(i)]

    def drop_variable(self, i: int) -> "LaurentPoly":
        """Remove variable ``i`` which must not occur."""
        self._check_index(i)
        if any(e[i] for e in self._terms):
            raise ValueError(f"variable {i} occurs in the polynomial")
        return LaurentPoly._raw({e[:i] + e[i + 1:]: c for e, c in self._terms.items()}, self._nvars - 1)

    def insert_variable(self, i: int) -> "LaurentPoly":
        """Add a new (unused) variable at position ``i``."""
        if not 0 <= i <= self._nvars:
            raise IndexError("insert position out of range")
        return LaurentPoly._raw({e[:i] + (0,) + e[i:]: c for e, c in self._terms.items()}, self._nvars + 1)

    def permute(self, order: Sequence[int]) -> "LaurentPoly":
        """New variable ``k`` is old variable ``order[k]``."""
        if sorted(order) != list(range(self._nvars)):
            raise ValueError("not a permutation")
        return LaurentPoly._raw({tuple(e[j] for j in order): c for e, c in self._terms.items()}, self._nvars)

    def embed(self, nvars: int, positions: Sequence[int]) -> "LaurentPoly":
        """Map variable ``k`` to variable ``positions[k]`` of a larger ring."""
        if len(positions) != self._nvars:
            raise ValueError("positions must list one target per variable")
        out = {}
        for e, c in self._terms.items():
            ne = [0] * nvars
            for k, p in enumerate(positions):
                ne[p] += e[k]
            out[tuple(ne)] = c
        return LaurentPoly._raw(out, nvars)

    # ----- substitution / evaluation -------------------------------------
    def substitute(self, i: int, value) -> "LaurentPoly":
        """Exact substitution ``z_i := value``.

        A rational value removes variable ``i``; a polynomial value (same
        arity) keeps the variable list.
        """
        self._check_index(i)
        if isinstance(value, LaurentPoly):
            if value._nvars != self._nvars:
                raise ValueError("substituted polynomial must have the same arity")
            if any(e[i] < 0 for e in self._terms):
                raise ValueError(f"negative exponent of variable {i} cannot take a polynomial value")
            parts = self.coefficients_in(i)
            result = LaurentPoly.zero(self._nvars)
            powers = {0: LaurentPoly.one(self._nvars)}
            for k in sorted(parts):
                if k not in powers:
                    powers[k] = value ** k
                result = result + parts[k] * powers[k]
            return result
        v = to_rational(value)
        if v == 0 and any(e[i] < 0 for e in self._terms):
            raise ZeroDivisionError(f"negative exponent of variable {i} with value 0")
        out: dict = {}
        cache: dict = {}
        for e, c in self._terms.items():
            k = e[i]
            if k not in cache:
                cache[k] = Fraction(v) ** k if k < 0 else v ** k
            ne = e[:i] + e[i + 1:]
            out[ne] = out.get(ne, 0) + c * cache[k]
        return LaurentPoly._raw({e: _canon(c) for e, c in out.items() if c}, self._nvars - 1)

    def substitute_many(self, values: Mapping[int, object]) -> "LaurentPoly":
        """Substitute rational values for several variables at once."""
        p = self
        for i in sorted(values, reverse=True):
            p = p.substitute(i, values[i])
        return p

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self._nvars:
            raise ValueError("point has wrong dimension")
        pt = [Fraction(to_rational(x)) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = Fraction(c)
            for x, k in zip(pt, e):
                if k:
                    if x == 0 and k < 0:
                        raise ZeroDivisionError("negative exponent at a zero coordinate")
                    t *= x ** k
            total += t
        return total

    def eval_complex(self, point: Sequence) -> ComplexApprox:
        """Floating point value with a first-order rounding bound.

        Evaluation is Horner-like in the last variable after grouping; the
        bound is ``gamma * sum |c| |z^a|`` with ``gamma`` proportional to the
        number of roundings along the longest chain.
        """
        if len(point) != self._nvars:
            raise ValueError("point has wrong dimension")
        zs = [complex(ComplexApprox.of(z).value) if isinstance(z, ComplexApprox) else complex(z) for z in point]
        value = 0j
        absum = 0.0
        depth = 0
        for e, c in self._terms.items():
            t = complex(float(c))
            for z, k in zip(zs, e):
                if k:
                    if z == 0 and k < 0:
                        raise ZeroDivisionError("negative exponent at a zero coordinate")
                    t *= z ** k
            value += t
            absum += abs(t)
            depth = max(depth, sum(abs(k) for k in e))
        gamma = (depth + len(self._terms) + 2) * _EPS
        return ComplexApprox(value.real, value.imag, gamma * absum)

    def eval_float(self, point: Sequence) -> complex:
        """Plain complex value (no certificate)."""
        return self.eval_complex(point).value

    def abs_coefficient_sum(self) -> float:
        return float(sum(abs(Fraction(c)) for c in self._terms.values()))

    # ----- integer normalisation -----------------------------------------
    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` integral and primitive."""
        if not self._terms:
            return Fraction(0)
        nums = [Fraction(c).numerator for c in self._terms.values()]
        dens = [Fraction(c).denominator for c in self._terms.values()]
        g = 0
        for x in nums:
            g = math.gcd(g, x)
        lcm = 1
        for d in dens:
            lcm = lcm * d // math.gcd(lcm, d)
        return Fraction(g, lcm)

    def primitive(self) -> "LaurentPoly":
        """Integer coefficients with content 1 and positive leading coefficient (grlex)."""
        if not self._terms:
            return self
        c = self.content()
        if self._terms[self.leading_exponent()] < 0:
            c = -c
        return self * (Fraction(1) / c)

    def monic(self) -> "LaurentPoly":
        if not self._terms:
            return self
        return self * (Fraction(1) / Fraction(self._terms[self.leading_exponent()]))

    def leading_exponent(self) -> tuple:
        """Largest exponent in graded lexicographic order."""
        return max(self._terms, key=_grlex_key)

    def leading_term(self) -> tuple[tuple, Fraction]:
        e = self.leading_exponent()
        return e, Fraction(self._terms[e])

    def homogenize(self, i: int) -> "LaurentPoly":
        """Homogenize with respect to variable ``i`` (which must not occur)."""
        if any(e[i] for e in self._terms):
            raise ValueError("homogenizing variable already occurs")
        if not self._terms:
            return self
        d = self.total_degree()
        out = {}
        for e, c in self._terms.items():
            ne = list(e)
            ne[i] = d - sum(e)
            out[tuple(ne)] = c
        return LaurentPoly._raw(out, self._nvars)

    # ----- printing -------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        """Terms in descending graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = tuple(names) if names is not None else default_names(self._nvars)
        if len(names) != self._nvars:
            raise ValueError("wrong number of variable names")
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append(f"{name}^{k}")
            cstr = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if factors and a == 1:
                body = "*".join(factors)
            else:
                body = "*".join([cstr] + factors)
            pieces.append((sign, body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"LaurentPoly({self.to_str()!r}, nvars={self._nvars})"


def _canon(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _grlex_key(e: tuple):
    return (sum(e), e)


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.message = message
        self.pos = pos
        self.text = text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.names = {name: i for i, name in enumerate(names)}
        if len(self.names) != len(names):
            raise ValueError("duplicate variable names")
        self.n = len(names)
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2], self.text)

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> LaurentPoly:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected token")
        return p

    def expr(self) -> LaurentPoly:
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        p = self.term() * sign
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if t[1] == "+" else p - q
            else:
                return p

    def term(self) -> LaurentPoly:
        p = self.power()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                p = p * self.power()
            elif t[0] == "op" and t[1] == "/":
                self.take()
                d = self.power()
                if d.is_zero:
                    self.error("zero denominator", t)
                if not d.is_monomial():
                    self.error("division by a non-monomial", t)
                p = p / d
            else:
                return p

    def power(self) -> LaurentPoly:
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            sign = 1
            t2 = self.peek()
            paren = False
            if t2[0] == "op" and t2[1] == "(":
                self.take()
                paren = True
                t2 = self.peek()
            if t2[0] == "op" and t2[1] in "+-":
                self.take()
                sign = -1 if t2[1] == "-" else 1
            num = self.take()
            if num[0] != "num":
                self.error("expected an integer exponent", num)
            if paren:
                self.expect(")")
            k = sign * num[1]
            if k < 0 and not base.is_monomial():
                self.error("negative power of a non-monomial", num)
            if k < 0 and base.is_monomial() and base.support() == [(0,) * self.n] and base.constant_value() == 0:
                self.error("zero denominator", num)
            return base ** k
        return base

    def atom(self) -> LaurentPoly:
        t = self.take()
        if t[0] == "num":
            return LaurentPoly.constant(t[1], self.n)
        if t[0] == "name":
            if t[1] not in self.names:
                raise ParseError(f"unknown variable {t[1]!r}", t[2], self.text)
            return LaurentPoly.variable(self.names[t[1]], self.n)
        if t[0] == "op" and t[1] == "(":
            p = self.expr()
            self.expect(")")
            return p
        if t[0] == "op" and t[1] == "-":
            return -self.power()
        if t[0] == "end":
            raise ParseError("unexpected end of input", t[2], self.text)
        raise ParseError(f"unexpected token {t[1]!r}", t[2], self.text)


def parse(text: str, variables: Sequence[str] | None = None) -> LaurentPoly:
    """Parse a polynomial such as ``"z1^2*z2 - 3/100*z1^-1 + 2"``.

    ``variables`` fixes the ring; if omitted it is inferred as the sorted set
    of identifiers appearing in ``text``.
    """
    if variables is None:
        names = sorted({m for m in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text)}, key=_natural_key)
        variables = names
    return _Parser(text, list(variables)).parse()


def _natural_key(s: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s)]


def from_terms(pairs: Iterable[tuple[Sequence[int], object]], nvars: int) -> LaurentPoly:
    return LaurentPoly({tuple(e): c for e, c in pairs}, nvars)
