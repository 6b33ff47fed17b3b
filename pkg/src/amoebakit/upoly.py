"""Dense univariate polynomials over Q as coefficient lists (index = degree).

Internal helpers for the elimination module: exact Euclid, Yun's squarefree
decomposition, Sturm sequences and real-root isolation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Coeffs = list  # list[int | Fraction], lowest degree first


def strip(a: Sequence) -> Coeffs:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Sequence) -> int:
    return len(a) - 1


def add(a, b) -> Coeffs:
    n = max(len(a), len(b))
    return strip([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b) -> Coeffs:
    n = max(len(a), len(b))
    return strip([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def scale(a, c) -> Coeffs:
    return strip([x * c for x in a])


def mul(a, b) -> Coeffs:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return strip(out)


def derivative(a) -> Coeffs:
    return strip([i * a[i] for i in range(1, len(a))])


def evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def divmod_(a, b) -> tuple[Coeffs, Coeffs]:
    a = [Fraction(x) for x in strip(a)]
    b = strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lb = Fraction(b[-1])
    if len(a) < len(b):
        return [], strip(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lb
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return strip([_canon(x) for x in q]), strip([_canon(x) for x in a[: len(b) - 1]])


def exact_div(a, b) -> Coeffs:
    q, r = divmod_(a, b)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def monic(a) -> Coeffs:
    a = strip(a)
    if not a:
        return a
    lc = Fraction(a[-1])
    return [_canon(Fraction(x) / lc) for x in a]


def primitive(a) -> list[int]:
    """Integer coefficients, content 1, positive leading coefficient."""
    a = strip(a)
    if not a:
        return []
    fr = [Fraction(x) for x in a]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if ints[-1] < 0:
        g = -g
    return [x // g for x in ints]


def gcd(a, b) -> Coeffs:
    """Monic gcd over Q (primitive remainder sequence to limit growth)."""
    a, b = strip(a), strip(b)
    if not a:
        return monic(b)
    if not b:
        return monic(a)
    a, b = primitive(a), primitive(b)
    while b:
        _, r = divmod_(a, b)
        a, b = b, (primitive(r) if r else [])
    return monic(a)


def squarefree_decomposition(a) -> list[tuple[Coeffs, int]]:
    """Yun's algorithm; returns monic factors of positive degree with multiplicities."""
    a = monic(a)
    if deg(a) < 1:
        return []
    out = []
    da = derivative(a)
    g = gcd(a, da)
    b = exact_div(a, g)
    c = exact_div(da, g)
    d = sub(c, derivative(b))
    i = 1
    while deg(b) > 0:
        g = gcd(b, d)
        if deg(g) > 0:
            out.append((g, i))
        b = exact_div(b, g)
        c = exact_div(d, g)
        d = sub(c, derivative(b))
        i += 1
    return out


def squarefree_part(a) -> Coeffs:
    a = strip(a)
    if deg(a) < 1:
        return monic(a)
    return monic(exact_div(a, gcd(a, derivative(a))))


# ----- Sturm sequences -------------------------------------------------------

def sturm_sequence(a) -> list[Coeffs]:
    a = primitive(a)
    seq = [a, primitive(derivative(a))] if deg(a) > 0 else [a]
    while len(seq) > 1 and deg(seq[-1]) > 0:
        _, r = divmod_(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_neg_primitive(r))
    return seq


def _neg_primitive(r):
    # -r scaled by a positive constant keeps Sturm sign structure
    p = primitive(r)
    lc = Fraction(strip(r)[-1])
    return [-x for x in p] if lc > 0 else p


def _sign_changes(vals) -> int:
    s = [v for v in vals if v != 0]
    return sum(1 for u, v in zip(s, s[1:]) if (u > 0) != (v > 0))


def sign_at(a, x) -> int:
    """Sign of an integer polynomial at a rational point, in integer arithmetic."""
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    acc = 0
    qpow = 1
    # sum a_i p^i q^(d-i), Horner in p with powers of q
    for c in reversed(a):
        acc = acc * p + c * qpow
        qpow *= q
    return (acc > 0) - (acc < 0)


def sturm_count(seq, lo=None, hi=None) -> int:
    """Number of distinct real roots in (lo, hi]; ``None`` means infinity.

    The sequence must consist of integer polynomials (as built by
    :func:`sturm_sequence`).
    """

    def at(x, sign_inf):
        if x is None:
            return [(p[-1] if sign_inf > 0 or deg(p) % 2 == 0 else -p[-1]) for p in seq]
        return [sign_at(p, x) for p in seq]

    return _sign_changes(at(lo, -1)) - _sign_changes(at(hi, +1))


def count_real_roots(a) -> int:
    a = strip(a)
    if deg(a) < 1:
        return 0
    return sturm_count(sturm_sequence(squarefree_part(a)))


def root_bound(a) -> Fraction:
    """Cauchy bound: every complex root has modulus < 1 + max |a_i / a_n|."""
    a = strip(a)
    lc = abs(Fraction(a[-1]))
    return 1 + max((abs(Fraction(x)) / lc for x in a[:-1]), default=Fraction(0))


def isolate_real_roots(a) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi] each containing exactly one real root of the squarefree part."""
    sf = squarefree_part(a)
    if deg(sf) < 1:
        return []
    seq = sturm_sequence(sf)
    B = root_bound(sf)
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        k = sturm_count(seq, lo, hi)
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


def rational_roots(a) -> list[Fraction]:
    """All rational roots (distinct), found by isolation and verified exactly."""
    sf = primitive(squarefree_part(a))
    if deg(sf) < 1:
        return []
    roots = []
    if sf[0] == 0:
        roots.append(Fraction(0))
        k = 0
        while sf[k] == 0:
            k += 1
        sf = sf[k:]
    if deg(sf) >= 1:
        lc = abs(sf[-1])
        # distinct rationals with denominators <= lc differ by >= 1/lc^2
        width = Fraction(1, 4 * lc * lc)
        seq = sturm_sequence(sf)
        for lo, hi in isolate_real_roots(sf):
            if sign_at(sf, hi) == 0:
                roots.append(Fraction(hi))
                continue
            s_lo = sign_at(sf, lo)
            step = 0
            while hi - lo > width:
                mid = (lo + hi) / 2
                s_mid = sign_at(sf, mid)
                if s_mid == 0:
                    lo = hi = mid
                    break
                # the root is simple, so a sign change locates it once sf(lo) != 0
                if (s_lo != 0 and s_lo != s_mid) or (s_lo == 0 and sturm_count(seq, lo, mid)):
                    hi = mid
                else:
                    lo, s_lo = mid, s_mid
                step += 1
                if step % 16 == 0:
                    cand = mid.limit_denominator(lc)
                    if lo <= cand <= hi and sign_at(sf, cand) == 0:
                        lo = hi = cand
                        break
            cand = Fraction((lo + hi) / 2).limit_denominator(lc)
            if lo - width <= cand <= hi + width and sign_at(sf, cand) == 0:
                roots.append(cand)
    return sorted(set(roots))


def _canon(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x
