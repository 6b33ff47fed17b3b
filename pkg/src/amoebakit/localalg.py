"""Dimension of local algebras ``O_p / (g_1, ..., g_m)`` via truncated jets.

At order ``k`` we compute ``dim R / (I + m^(k+1))`` where ``R`` is the
polynomial ring localized at ``p``; it equals the number of monomials of
degree ``<= k`` minus the rank of the truncated multiples ``x^b g_j``.  Once
two consecutive orders give the same value the sequence has stabilized
(Nakayama), and that value is the local multiplicity.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .poly import LaurentPoly

__all__ = ["NotIsolated", "local_dimension", "local_dimension_numeric", "translate"]

MAX_ORDER = 40


class NotIsolated(ArithmeticError):
    pass


def translate(p: LaurentPoly, point: Sequence, variables: Sequence[int]) -> LaurentPoly:
    """``p(x + point)`` in the listed variables, as an ordinary polynomial.

    Negative exponents are cleared first with a monomial, a unit at ``point``.
    """
    m = p.min_exponents()
    shift = tuple(-min(0, x) for x in m)
    if any(shift):
        p = p.shift(shift)
    n = p.nvars
    for v, c in zip(variables, point):
        c = Fraction(c)
        if c:
            p = p.substitute(v, LaurentPoly.variable(v, n) + LaurentPoly.constant(c, n))
    return p


def _monomials(nv: int, k: int) -> list[tuple]:
    out = []
    for d in range(k + 1):
        for combo in combinations_with_replacement(range(nv), d):
            e = [0] * nv
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _restrict(p: LaurentPoly, variables) -> dict:
    """Terms as ``{exponent restricted to variables: coeff}``."""
    out = {}
    for e, c in p.items():
        key = tuple(e[v] for v in variables)
        out[key] = out.get(key, 0) + c
    return {e: c for e, c in out.items() if c}


def _rows(gens: list[dict], nv: int, k: int):
    for g in gens:
        low = min(sum(e) for e in g)
        for b in _monomials(nv, k - low):
            row = {}
            for e, c in g.items():
                ee = tuple(x + y for x, y in zip(e, b))
                if sum(ee) <= k:
                    row[ee] = c
            if row:
                yield row


def _rank_exact(rows, order: dict) -> int:
    pivots: dict = {}
    for row in rows:
        r = {order[e]: Fraction(c) for e, c in row.items()}
        while r:
            lead = min(r)
            if lead not in pivots:
                inv = 1 / r[lead]
                pivots[lead] = {j: v * inv for j, v in r.items()}
                break
            pv = pivots[lead]
            t = r[lead]
            for j, v in pv.items():
                nv = r.get(j, 0) - t * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    return len(pivots)


def _gens(polys, point, variables):
    gens = []
    for p in polys:
        q = translate(p, point, variables)
        g = _restrict(q, variables)
        if not g:
            continue
        if (0,) * len(variables) in g:
            return None  # some generator is a unit: p is not a common zero
        gens.append(g)
    return gens


def local_dimension(polys: Sequence[LaurentPoly], point: Sequence, variables: Sequence[int] | None = None,
                    *, max_order: int = MAX_ORDER) -> int:
    """Exact local multiplicity of the ideal ``(polys)`` at a rational point.

    Returns 0 when ``point`` is not a common zero.  Raises
    :class:`NotIsolated` if the dimension has not stabilized by ``max_order``.
    """
    variables = list(variables) if variables is not None else list(range(polys[0].nvars))
    gens = _gens(polys, point, variables)
    if gens is None:
        return 0
    nv = len(variables)
    prev = None
    for k in range(max_order + 1):
        mons = _monomials(nv, k)
        order = {e: i for i, e in enumerate(mons)}
        dim = len(mons) - _rank_exact(_rows(gens, nv, k), order)
        if dim == prev:
            return dim
        prev = dim
    raise NotIsolated(f"local algebra did not stabilize by order {max_order}")


def local_dimension_numeric(polys: Sequence[LaurentPoly], point: Sequence[complex],
                            variables: Sequence[int] | None = None, *, tol: float = 1e-7,
                            max_order: int = 12) -> int:
    """Floating-point version with SVD ranks; ``point`` may be complex."""
    variables = list(variables) if variables is not None else list(range(polys[0].nvars))
    nv = len(variables)
    gens = []
    for p in polys:
        g = _taylor_numeric(p, point, variables, max_order)
        if g:
            gens.append(g)
    prev = None
    for k in range(max_order + 1):
        mons = _monomials(nv, k)
        order = {e: i for i, e in enumerate(mons)}
        rows = []
        for g in gens:
            gk = {e: c for e, c in g.items() if sum(e) <= k}
            big = max((abs(c) for c in g.values()), default=1.0)
            gk = {e: c for e, c in gk.items() if abs(c) > tol * big or sum(e) > 0}
            if (0,) * nv in gk and abs(gk[(0,) * nv]) > tol * big:
                return 0
            gk.pop((0,) * nv, None)
            low = min((sum(e) for e in gk), default=k + 1)
            for b in _monomials(nv, k - low) if low <= k else []:
                row = np.zeros(len(mons), dtype=complex)
                for e, c in gk.items():
                    ee = tuple(x + y for x, y in zip(e, b))
                    if sum(ee) <= k:
                        row[order[ee]] += c
                rows.append(row / max(np.max(np.abs(row)), 1e-300))
        if rows:
            s = np.linalg.svd(np.array(rows), compute_uv=False)
            rank = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
        else:
            rank = 0
        dim = len(mons) - rank
        if dim == prev:
            return dim
        prev = dim
    raise NotIsolated(f"numeric local algebra did not stabilize by order {max_order}")


def _taylor_numeric(p: LaurentPoly, point, variables, order: int) -> dict:
    """Taylor coefficients of ``p`` at a complex point up to total degree ``order``."""
    out: dict = {}
    pt = [complex(z) for z in point]
    for e, c in p.items():
        sub = [e[v] for v in variables]
        # product over variables of sum_j binom(a, j) p^(a-j) x^j (generalized binomial for a < 0)
        factors = []
        for a, z in zip(sub, pt):
            terms = []
            for j in range(order + 1):
                b = _gbinom(a, j)
                if b == 0:
                    break
                terms.append((j, b * z ** (a - j)))
            factors.append(terms)
        acc = {(): complex(float(c))}
        for terms in factors:
            new = {}
            for key, val in acc.items():
                deg = sum(key)
                for j, t in terms:
                    if deg + j > order:
                        break
                    nk = key + (j,)
                    new[nk] = new.get(nk, 0) + val * t
            acc = new
        for key, val in acc.items():
            out[key] = out.get(key, 0) + val
    return out


def _gbinom(a: int, j: int):
    r = 1.0
    for i in range(j):
        r = r * (a - i) / (i + 1)
    return r
