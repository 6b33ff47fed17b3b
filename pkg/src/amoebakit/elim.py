"""Exact elimination: resultants, discriminants, gcds, squarefree parts, roots.

All routines take and return :class:`LaurentPoly` values of a fixed ambient
arity; eliminated variables simply stop occurring.  Negative exponents are
cleared by monomial units before anything needing ordinary polynomials.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from . import upoly
from .aberth import ConvergenceError, aberth, newton_polish
from .poly import ComplexApprox, LaurentPoly

__all__ = [
    "EliminationError",
    "InexactDivision",
    "RootSet",
    "UnivariateView",
    "content_in",
    "discriminant",
    "divexact",
    "gcd",
    "gcd_many",
    "primitive_part_in",
    "resultant",
    "squarefree_decomposition",
    "squarefree_part",
    "sturm_real_root_count",
    "to_dense",
    "univariate_roots",
]


class EliminationError(ValueError):
    """Raised when elimination input is degenerate (e.g. both degrees zero)."""


class InexactDivision(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# univariate views

@dataclass(frozen=True)
class UnivariateView:
    """``base`` written as ``sum_k coeffs[k] * z_var**k`` after clearing ``z_var**shift``."""

    base: LaurentPoly
    var: int
    coeffs: tuple
    shift: int

    @classmethod
    def of(cls, p: LaurentPoly, i: int) -> "UnivariateView":
        shift = p.min_degree(i) if p else 0
        q = p
        if shift < 0:
            e = [0] * p.nvars
            e[i] = -shift
            q = p.shift(e)
        else:
            shift = 0
        parts = q.coefficients_in(i)
        d = q.degree(i)
        coeffs = tuple(parts.get(k, LaurentPoly.zero(p.nvars)) for k in range(d + 1))
        return cls(p, i, coeffs, shift)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def reassemble_shifted(self) -> LaurentPoly:
        """The cleared polynomial ``base * z_var**-shift``."""
        n = self.base.nvars
        out = {}
        for k, c in enumerate(self.coeffs):
            for e, v in c.items():
                ne = list(e)
                ne[self.var] = k
                out[tuple(ne)] = v
        return LaurentPoly._raw(out, n)

    def reassemble(self) -> LaurentPoly:
        n = self.base.nvars
        out = LaurentPoly.zero(n)
        for k, c in enumerate(self.coeffs):
            e = [0] * n
            e[self.var] = k + self.shift
            out = out + c.shift(e)
        return out


def to_dense(p: LaurentPoly, i: int | None = None) -> list:
    """Coefficient list in the single variable ``i`` (negative exponents cleared)."""
    used = p.variables_used()
    if i is None:
        if len(used) > 1:
            raise ValueError(f"polynomial is not univariate (uses {used})")
        i = used[0] if used else 0
    elif any(j != i for j in used):
        raise ValueError("polynomial involves other variables")
    if p.is_zero:
        return []
    if p.nvars == 0:
        return [p.constant_value()]
    lo = min(0, p.min_degree(i))
    out = [0] * (p.degree(i) - lo + 1)
    for e, c in p.items():
        out[e[i] - lo] = c
    return upoly.strip(out)


def from_dense(coeffs: Sequence, i: int, nvars: int) -> LaurentPoly:
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * nvars
            e[i] = k
            terms[tuple(e)] = c
    return LaurentPoly(terms, nvars)


# ---------------------------------------------------------------------------
# exact division

def divexact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``a / b``; raises :class:`InexactDivision` otherwise."""
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    n = a.nvars
    if a.is_zero:
        return LaurentPoly.zero(n)
    if b.is_monomial():
        return a / b
    A, ma = a.clear_monomial()
    B, mb = b.clear_monomial()
    shift = tuple(x - y for x, y in zip(ma, mb))
    r = dict(A.items())
    bt = list(B.items())
    lb = max(B.support())
    lbc = Fraction(B.terms[lb])
    heap = [tuple(-x for x in e) for e in r]
    heapq.heapify(heap)
    q = {}
    while r:
        while True:
            e = tuple(-x for x in heapq.heappop(heap))
            if e in r:
                break
        te = tuple(x - y for x, y in zip(e, lb))
        if any(x < 0 for x in te):
            raise InexactDivision("polynomial division is not exact")
        tc = r[e] / lbc
        tc = tc.numerator if tc.denominator == 1 else tc
        q[te] = tc
        for be, bc in bt:
            ke = tuple(x + y for x, y in zip(te, be))
            v = r.get(ke, 0) - tc * bc
            if v:
                if ke not in r:
                    heapq.heappush(heap, tuple(-x for x in ke))
                if isinstance(v, Fraction) and v.denominator == 1:
                    v = v.numerator
                r[ke] = v
            else:
                r.pop(ke, None)
        if len(q) > len(A) * 4 + 10000:
            raise InexactDivision("polynomial division does not terminate")
    return LaurentPoly._raw(q, n).shift(shift)


def _integer_form(p: LaurentPoly) -> tuple[Fraction, LaurentPoly]:
    """``p = c * P`` with ``P`` having coprime integer coefficients."""
    c = p.content()
    if c == 0:
        return Fraction(0), p
    return c, p * (Fraction(1) / c)


# ---------------------------------------------------------------------------
# determinants

def _bareiss(M: list[list]) -> int | Fraction:
    n = len(M)
    if n == 0:
        return 1
    M = [list(row) for row in M]
    sign = 1
    prev = 1
    integral = all(isinstance(x, int) for row in M for x in row)
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            mik = rowi[k]
            if integral:
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] * pk - mik * rowk[j]) // prev
            else:
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] * pk - mik * rowk[j]) / prev
            rowi[k] = 0
        prev = pk
    return sign * M[n - 1][n - 1]


def _laplace_det(M: list[list]):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        if _is_zero(M[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _laplace_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else 0


def _is_zero(x) -> bool:
    return x.is_zero if isinstance(x, LaurentPoly) else x == 0


def sylvester_matrix(a: Sequence, b: Sequence) -> list[list]:
    """Sylvester matrix of coefficient lists given lowest degree first."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    zero = 0
    rows = []
    ah = list(reversed(a))
    bh = list(reversed(b))
    for r in range(n):
        rows.append([zero] * r + ah + [zero] * (size - r - m - 1))
    for r in range(m):
        rows.append([zero] * r + bh + [zero] * (size - r - n - 1))
    return rows


# ---------------------------------------------------------------------------
# resultants

def resultant(p: LaurentPoly, q: LaurentPoly, i: int) -> LaurentPoly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``z_i``.

    Sign convention: ``Res(p, q) = det Syl(p, q)`` with the ``deg q`` rows of
    ``p`` on top, which equals ``lc(p)**deg(q) * prod q(roots of p)``; for
    example ``Res(z - u, z - v) = u - v``.  Negative exponents of ``z_i`` are
    cleared by a power of ``z_i`` first.
    """
    if p.nvars != q.nvars:
        raise ValueError("arity mismatch")
    n = p.nvars
    if p.is_zero or q.is_zero:
        return LaurentPoly.zero(n)
    vp, vq = UnivariateView.of(p, i), UnivariateView.of(q, i)
    dp, dq = vp.degree, vq.degree
    if dp == 0 and dq == 0:
        raise EliminationError(f"both polynomials have degree 0 in variable {i}")
    if dp == 0:
        return vp.coeffs[0] ** dq
    if dq == 0:
        return vq.coeffs[0] ** dp
    # clear negative exponents in the other variables: Res(x^a P, Q) = x^(a*dq) Res(P, Q)
    P, Q = vp.reassemble_shifted(), vq.reassemble_shifted()
    mp = [min(0, v) for v in P.min_exponents()]
    mq = [min(0, v) for v in Q.min_exponents()]
    mp[i] = mq[i] = 0
    if any(mp):
        P = P.shift([-x for x in mp])
    if any(mq):
        Q = Q.shift([-x for x in mq])
    unit = [dq * a + dp * b for a, b in zip(mp, mq)]
    cp, P = _integer_form(P)
    cq, Q = _integer_form(Q)
    scale = cp ** dq * cq ** dp
    others = sorted((set(P.variables_used()) | set(Q.variables_used())) - {i})
    if not others:
        a = to_dense(P, i)
        b = to_dense(Q, i)
        det = _bareiss(sylvester_matrix(a, b))
        res = LaurentPoly.constant(det, n)
    elif dp + dq <= 3:
        a = [c for c in UnivariateView.of(P, i).coeffs]
        b = [c for c in UnivariateView.of(Q, i).coeffs]
        res = _laplace_det(sylvester_matrix(a, b))
        if not isinstance(res, LaurentPoly):
            res = LaurentPoly.constant(res, n)
    else:
        res = _resultant_interpolate(P, Q, i, others)
    res = res * scale
    if any(unit):
        res = res.shift(unit)
    return res




def _resultant_interpolate(P: LaurentPoly, Q: LaurentPoly, i: int, others: list[int]) -> LaurentPoly:
    """Resultant of integer polynomials by evaluation at integer nodes and interpolation."""
    n = P.nvars
    dp, dq = P.degree(i), Q.degree(i)
    bounds = [dq * P.degree(v) + dp * Q.degree(v) for v in others]
    nodes = [_nodes(b) for b in bounds]
    ca = [_split_other(c, others) for c in UnivariateView.of(P, i).coeffs]
    cb = [_split_other(c, others) for c in UnivariateView.of(Q, i).coeffs]
    maxe = [max(P.degree(v), Q.degree(v)) for v in others]
    powtab = [{x: [x ** e for e in range(maxe[k] + 1)] for x in nodes[k]} for k in range(len(others))]
    shape = tuple(len(nd) for nd in nodes)
    values = np.empty(shape, dtype=object)
    for idx in product(*[range(s) for s in shape]):
        pt = [nodes[k][idx[k]] for k in range(len(others))]
        pw = [powtab[k][pt[k]] for k in range(len(others))]
        a = [_eval_split(c, pw) for c in ca]
        b = [_eval_split(c, pw) for c in cb]
        values[idx] = _bareiss(sylvester_matrix(a, b))
    coeffs = _interpolate_tensor(values, nodes)
    terms = {}
    for idx in product(*[range(s) for s in shape]):
        c = coeffs[idx]
        if c:
            e = [0] * n
            for k, v in enumerate(others):
                e[v] = idx[k]
            terms[tuple(e)] = c
    return LaurentPoly(terms, n)


def _nodes(bound: int) -> list[int]:
    # symmetric integer nodes keep evaluated magnitudes small
    half = bound // 2
    return [k - half for k in range(bound + 1)]


def _split_other(c: LaurentPoly, others):
    return [(tuple(e[v] for v in others), coef) for e, coef in c.items()]


def _eval_split(terms, pw):
    total = 0
    for e, c in terms:
        t = c
        for k, x in enumerate(e):
            if x:
                t = t * pw[k][x]
        total += t
    return total


def _interp_line(xs: Sequence[int], ys: Sequence) -> list:
    """Monomial coefficients of the interpolant through ``(xs, ys)``."""
    m = len(xs)
    dd = [Fraction(y) for y in ys]
    for j in range(1, m):
        for k in range(m - 1, j - 1, -1):
            dd[k] = (dd[k] - dd[k - 1]) / (xs[k] - xs[k - j])
    coeffs = [dd[m - 1]]
    for k in range(m - 2, -1, -1):
        # coeffs <- coeffs * (x - xs[k]) + dd[k]
        new = [Fraction(0)] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            new[j + 1] += c
            new[j] -= c * xs[k]
        new[0] += dd[k]
        coeffs = new
    return [c.numerator if c.denominator == 1 else c for c in coeffs]


def _interpolate_tensor(values: np.ndarray, nodes: list[list[int]]) -> np.ndarray:
    arr = values
    for axis, xs in enumerate(nodes):
        moved = np.moveaxis(arr, axis, -1)
        flat = moved.reshape(-1, moved.shape[-1])
        out = np.empty_like(flat)
        for r in range(flat.shape[0]):
            row = list(flat[r])
            if all(v == 0 for v in row):
                out[r] = [0] * len(row)
            else:
                out[r] = _interp_line(xs, row)
        arr = np.moveaxis(out.reshape(moved.shape), -1, axis)
    return arr


def discriminant(p: LaurentPoly, i: int) -> LaurentPoly:
    """``resultant(p, dp/dz_i, z_i)`` with no leading-coefficient division."""
    view = UnivariateView.of(p, i)
    if view.degree < 1:
        raise EliminationError(f"degree in variable {i} must be at least 1")
    P = view.reassemble_shifted()
    return resultant(P, P.derivative(i), i)


# ---------------------------------------------------------------------------
# gcd and squarefree decomposition

def _as_univariate(p: LaurentPoly, x: int) -> dict[int, LaurentPoly]:
    return p.coefficients_in(x)


def _from_univariate(parts: dict[int, LaurentPoly], x: int, n: int) -> LaurentPoly:
    out = {}
    for k, c in parts.items():
        for e, v in c.items():
            ne = list(e)
            ne[x] = k
            out[tuple(ne)] = v
    return LaurentPoly._raw(out, n)


def content_in(p: LaurentPoly, i: int) -> LaurentPoly:
    """gcd of the coefficients of ``p`` viewed as a polynomial in ``z_i``."""
    parts = list(p.coefficients_in(i).values())
    if not parts:
        return p
    parts.sort(key=len)
    g = parts[0].primitive()
    for c in parts[1:]:
        if g.is_constant():
            return LaurentPoly.one(p.nvars)
        g = gcd(g, c)
    return g


def primitive_part_in(p: LaurentPoly, i: int) -> LaurentPoly:
    c = content_in(p, i)
    return divexact(p, c).primitive() if not p.is_zero else p


def _prem(A: dict, B: dict) -> dict:
    dA, dB = max(A), max(B)
    lcB = B[dB]
    R = dict(A)
    e = dA - dB + 1
    while R and max(R) >= dB:
        dR = max(R)
        lcR = R[dR]
        s = dR - dB
        newR = {k: c * lcB for k, c in R.items()}
        for k, c in B.items():
            v = newR.get(k + s)
            t = lcR * c
            newR[k + s] = -t if v is None else v - t
        R = {k: c for k, c in newR.items() if not c.is_zero}
        e -= 1
    if e:
        f = lcB ** e
        R = {k: c * f for k, c in R.items()}
    return R


def _subresultant_last(A: dict, B: dict, n: int) -> dict:
    """Last nonzero element of the subresultant PRS of ``A``, ``B`` (deg A >= deg B)."""
    one = LaurentPoly.one(n)
    g = one
    h = one
    while True:
        d = max(A) - max(B)
        R = _prem(A, B)
        if not R:
            return B
        if max(R) == 0:
            return R
        div = g * h ** d
        R = {k: divexact(c, div) for k, c in R.items()}
        A, B = B, R
        g = A[max(A)]
        if d == 0:
            pass
        elif d == 1:
            h = g
        else:
            h = divexact(g ** d, h ** (d - 1))


def gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Primitive multivariate gcd (integer content 1, positive leading coefficient).

    Monomial factors are handled separately: ``gcd(z^a P, z^b Q) =
    z^min(a,b) gcd(P, Q)``.
    """
    if p.nvars != q.nvars:
        raise ValueError("arity mismatch")
    if p.is_zero:
        return q.primitive()
    if q.is_zero:
        return p.primitive()
    P, mp = p.clear_monomial()
    Q, mq = q.clear_monomial()
    mono = tuple(min(a, b) for a, b in zip(mp, mq))
    g = _gcd_poly(P.primitive(), Q.primitive())
    return g.shift(mono) if any(mono) else g


def _gcd_poly(P: LaurentPoly, Q: LaurentPoly) -> LaurentPoly:
    n = P.nvars
    if P.is_constant() or Q.is_constant():
        return LaurentPoly.one(n)
    if P == Q:
        return P.primitive()
    vp, vq = set(P.variables_used()), set(Q.variables_used())
    only = (vp ^ vq)
    if only:
        x = min(only)
        if x in vp:
            return _gcd_poly(content_in(P, x), Q)
        return _gcd_poly(P, content_in(Q, x))
    if len(vp) == 1:
        x = next(iter(vp))
        g = upoly.gcd(to_dense(P, x), to_dense(Q, x))
        return from_dense(g, x, n).primitive()
    x = min(vp, key=lambda v: (max(P.degree(v), Q.degree(v)), v))
    cP, cQ = content_in(P, x), content_in(Q, x)
    ppP = divexact(P, cP)
    ppQ = divexact(Q, cQ)
    cg = gcd(cP, cQ)
    A, B = _as_univariate(ppP, x), _as_univariate(ppQ, x)
    if max(A) < max(B):
        A, B = B, A
    last = _subresultant_last(A, B, n)
    if max(last) == 0:
        prim = LaurentPoly.one(n)
    else:
        prim = primitive_part_in(_from_univariate(last, x, n), x)
    return (cg * prim).primitive()


def gcd_many(polys: Sequence[LaurentPoly]) -> LaurentPoly:
    polys = [p for p in polys if not p.is_zero]
    if not polys:
        raise ValueError("gcd of no nonzero polynomials")
    g = polys[0].primitive()
    for p in polys[1:]:
        g = gcd(g, p)
    return g


def squarefree_decomposition(p: LaurentPoly, i: int | None = None) -> list[tuple[LaurentPoly, int]]:
    """Squarefree factors with multiplicities; their product is ``p`` up to a unit.

    Yun's algorithm runs with respect to ``z_i`` on the primitive part; the
    content is decomposed recursively in the remaining variables.  Positive
    monomial factors are reported as variables; negative exponents are units.
    """
    if p.is_zero:
        raise ValueError("squarefree decomposition of zero")
    n = p.nvars
    P, mono = p.clear_monomial()
    acc: dict[int, LaurentPoly] = {}

    def put(f: LaurentPoly, k: int):
        if f.is_constant():
            return
        acc[k] = (acc[k] * f) if k in acc else f

    for j, e in enumerate(mono):
        if e > 0:
            put(LaurentPoly.variable(j, n), e)
    _sqf_rec(P.primitive(), i, put)
    return [(acc[k].primitive(), k) for k in sorted(acc)]


def _sqf_rec(P: LaurentPoly, i, put):
    used = P.variables_used()
    if not used:
        return
    x = i if (i is not None and i in used) else used[0]
    cont = content_in(P, x)
    prim = divexact(P, cont)
    if not cont.is_constant():
        rest = [v for v in cont.variables_used()]
        _sqf_rec(cont.primitive(), rest[0] if rest else None, put)
    for f, k in _yun(prim, x):
        put(f, k)


def _yun(P: LaurentPoly, x: int) -> list[tuple[LaurentPoly, int]]:
    out = []
    dP = P.derivative(x)
    a0 = gcd(P, dP)
    b = divexact(P, a0)
    c = divexact(dP, a0)
    d = c - b.derivative(x)
    k = 1
    while b.degree(x) > 0:
        a = gcd(b, d) if not d.is_zero else b.primitive()
        if not a.is_constant():
            out.append((a, k))
        b = divexact(b, a)
        c = divexact(d, a)
        d = c - b.derivative(x)
        k += 1
    return out


def squarefree_part(p: LaurentPoly) -> LaurentPoly:
    """Product of the distinct squarefree factors (primitive)."""
    out = LaurentPoly.one(p.nvars)
    for f, _ in squarefree_decomposition(p):
        out = out * f
    return out.primitive()


# ---------------------------------------------------------------------------
# univariate roots

@dataclass
class RootSet:
    """Roots of a univariate polynomial with multiplicities."""

    rational: list = field(default_factory=list)  # (Fraction, multiplicity)
    numeric: list = field(default_factory=list)  # (ComplexApprox, multiplicity)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.rational) + sum(m for _, m in self.numeric)

    def real_roots(self, tol: float = 1e-9) -> list:
        out = [(float(r), m) for r, m in self.rational]
        out += [(z.real, m) for z, m in self.numeric if abs(z.imag) <= tol * max(1.0, abs(z.real))]
        return sorted(out)

    def all_complex(self) -> list[tuple[complex, int]]:
        return [(complex(float(r)), m) for r, m in self.rational] + [(z.value, m) for z, m in self.numeric]


def univariate_roots(p: LaurentPoly, i: int | None = None) -> RootSet:
    """Exact rational roots plus certified numeric roots of the rest.

    Multiplicities come from the exact squarefree decomposition.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    coeffs = to_dense(p, i)
    out = RootSet()
    if upoly.deg(coeffs) < 1:
        return out
    for factor, mult in upoly.squarefree_decomposition(coeffs):
        f = upoly.primitive(factor)
        rats = upoly.rational_roots(f)
        for r in rats:
            out.rational.append((r, mult))
            f = upoly.primitive(upoly.exact_div(f, [-r.numerator, r.denominator]))
        if upoly.deg(f) >= 1:
            for z, res in _numeric_roots(f):
                out.numeric.append((ComplexApprox(z.real, z.imag, res), mult))
    out.rational.sort()
    out.numeric.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


def _numeric_roots(f: Sequence[int]) -> list[tuple[complex, float]]:
    big = max(abs(x) for x in f)
    c = np.array([float(Fraction(x, big)) for x in f], dtype=complex)
    try:
        z = aberth(c)
    except ConvergenceError:
        z = newton_polish(c, np.roots(c[::-1]), steps=5)
    absc = np.abs(c)
    out = []
    for r in z:
        # residual of the scaled polynomial (max coefficient 1)
        val = np.polyval(c[::-1], r)
        res = float(abs(val)) + 4 * np.finfo(float).eps * float(np.polyval(absc[::-1], abs(r)))
        if abs(r.imag) < 1e-15 * max(1.0, abs(r.real)):
            r = complex(r.real, 0.0)
        out.append((complex(r), res))
    return out


def sturm_real_root_count(p: LaurentPoly, i: int | None = None) -> int:
    """Exact number of distinct real roots (Sturm sequence)."""
    return upoly.count_real_roots(to_dense(p, i))
