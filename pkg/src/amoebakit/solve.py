"""Zero-dimensional polynomial systems in the torus.

Elimination is by resultants, one variable at a time; partial solutions are
lifted back by substituting into the eliminated equations.  Rational
coordinates stay exact as long as possible, everything else is carried as
complex floats and filtered by residuals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .aberth import ConvergenceError, aberth
from .elim import gcd_many, resultant, univariate_roots
from .poly import LaurentPoly

__all__ = [
    "PositiveDimensional",
    "SolveResult",
    "TorusSolution",
    "newton_refine",
    "random_newton_search",
    "solve_torus",
]

log = logging.getLogger(__name__)

FILTER_TOL = 1e-7
DEDUP_TOL = 1e-8


class PositiveDimensional(ArithmeticError):
    """Raised when the system does not cut out finitely many torus points."""


@dataclass
class TorusSolution:
    values: tuple  # Fraction or complex per unknown
    exact: bool

    def as_complex(self) -> np.ndarray:
        return np.array([complex(v) if not isinstance(v, Fraction) else complex(float(v)) for v in self.values])


@dataclass
class SolveResult:
    points: list = field(default_factory=list)
    # False when some candidate was accepted or rejected by a floating-point test
    exact: bool = True

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, k):
        return self.points[k]

    def __bool__(self):
        return bool(self.points)


def _numeric_coeffs(p: LaurentPoly, point: dict, x: int) -> np.ndarray:
    """Dense complex coefficients in ``z_x`` (lowest first) after plugging in ``point``."""
    lo = p.min_degree(x)
    hi = p.degree(x)
    out = np.zeros(hi - lo + 1, dtype=complex)
    for e, c in p.items():
        t = complex(float(c))
        for j, v in point.items():
            if e[j]:
                t *= complex(v) ** e[j]
        out[e[x] - lo] += t
    return out


def _abs_coeffs(p: LaurentPoly, point: dict, x: int) -> np.ndarray:
    lo = p.min_degree(x)
    out = np.zeros(p.degree(x) - lo + 1)
    for e, c in p.items():
        t = abs(float(c))
        for j, v in point.items():
            if e[j]:
                t *= abs(complex(v)) ** e[j]
        out[e[x] - lo] += t
    return out


def _rel_residual(p: LaurentPoly, pt: dict, x: int, r: complex) -> float:
    c = _numeric_coeffs(p, pt, x)
    a = _abs_coeffs(p, pt, x)
    lo = p.min_degree(x)
    val = np.polyval(c[::-1], r) * (r ** lo if lo else 1)
    scale = np.polyval(a[::-1], abs(r)) * (abs(r) ** lo if lo else 1)
    return float(abs(val) / max(scale, 1e-300))


def solve_torus(polys: Sequence[LaurentPoly], unknowns: Sequence[int], *, tol: float = FILTER_TOL) -> SolveResult:
    """All common zeros in the torus of ``polys`` in the variables ``unknowns``.

    Variables not listed must not occur.  Raises :class:`PositiveDimensional`
    when the zero set is not finite.
    """
    res = SolveResult()
    sols = _solve(list(polys), list(unknowns), tol, res)
    out = []
    for pt in sols:
        vals = tuple(pt[v] for v in unknowns)
        ex = all(isinstance(v, (int, Fraction)) for v in vals)
        vals = tuple(Fraction(v) if isinstance(v, int) else v for v in vals)
        out.append(TorusSolution(vals, ex))
    res.points = _dedup(out)
    return res


def _dedup(points: list) -> list:
    kept: list = []
    for p in points:
        if p.exact:
            if not any(q.exact and q.values == p.values for q in kept):
                kept.append(p)
            continue
        a = p.as_complex()
        if not any(np.max(np.abs(q.as_complex() - a)) <= DEDUP_TOL * max(1.0, np.max(np.abs(a))) for q in kept):
            kept.append(p)
    return kept


def _prepare(polys):
    out = []
    for p in polys:
        if p.is_zero:
            continue
        q, _ = p.clear_monomial()
        out.append(q.primitive())
    # drop duplicates
    uniq = []
    for q in out:
        if q not in uniq:
            uniq.append(q)
    return uniq


def _solve(polys, unknowns, tol, res: SolveResult) -> list[dict]:
    polys = _prepare(polys)
    if any(p.is_constant() for p in polys):
        return []
    if not unknowns:
        return [{}]
    if not polys:
        raise PositiveDimensional("no equations left for the remaining unknowns")
    x = unknowns[-1]
    rest = unknowns[:-1]
    with_x = sorted([p for p in polys if p.degree(x) > 0], key=lambda p: (p.degree(x), len(p)))
    without = [p for p in polys if p.degree(x) == 0]
    if not with_x:
        if not _solve(without, rest, tol, SolveResult()):
            return []
        raise PositiveDimensional(f"variable {x} is unconstrained")
    if not rest:
        return [{x: r} for r in _univariate_common_roots(with_x, x)]
    elim = list(without)
    base = with_x[0]
    for q in with_x[1:]:
        r = resultant(base, q, x)
        if not r.is_zero:
            elim.append(r)
    if len(with_x) >= 3:
        r = resultant(with_x[1], with_x[2], x)
        if not r.is_zero:
            elim.append(r)
    partial = _solve(elim, rest, tol, res)
    out = []
    for pt in partial:
        if all(isinstance(v, (int, Fraction)) for v in pt.values()):
            spec = [p.substitute_many(pt) for p in with_x]
            # substitute_many drops variables below x, find the new index of x
            nx = x - sum(1 for j in pt if j < x)
            spec = [s for s in spec if not s.is_zero]
            if not spec:
                raise PositiveDimensional("fiber over a partial solution is not finite")
            for r in _univariate_common_roots(spec, nx):
                out.append({**pt, x: r})
        else:
            res.exact = False
            out.extend({**pt, x: r} for r in _numeric_lift(with_x, pt, x, tol))
    return out


def _univariate_common_roots(polys, x) -> list:
    """Nonzero common roots of exact univariate polynomials in ``z_x``."""
    g = gcd_many(polys)
    g, _ = g.clear_monomial()
    if g.is_constant():
        return []
    rs = univariate_roots(g, x)
    roots = [r for r, _ in rs.rational]
    # the gcd is exact, so numeric roots of g are genuine common roots
    roots += [z.value for z, _ in rs.numeric]
    return roots


def _numeric_lift(with_x, pt, x, tol) -> list[complex]:
    cands = []
    for p in with_x:
        c = _numeric_coeffs(p, pt, x)
        a = _abs_coeffs(p, pt, x)
        nz = np.nonzero(np.abs(c) > 1e-11 * max(a.max(), 1e-300))[0]
        if len(nz) == 0:
            continue
        c = c[: nz[-1] + 1]
        c = c[nz[0]:]
        if len(c) <= 1:
            return []  # nonzero monomial: no torus roots
        cands.append(c)
    if not cands:
        raise PositiveDimensional("all lifted equations vanish at a numeric partial solution")
    cands.sort(key=len)
    try:
        roots = aberth(cands[0])
    except ConvergenceError:
        roots = np.roots(cands[0][::-1])
    out = []
    for r in roots:
        if abs(r) < 1e-12:
            continue
        if all(_rel_residual(p, pt, x, r) <= tol for p in with_x):
            out.append(complex(r))
    return out


# ---------------------------------------------------------------------------
# numeric refinement

def _jacobian_eval(polys, unknowns, z: np.ndarray, ambient: int):
    full = [0j] * ambient
    for k, v in enumerate(unknowns):
        full[v] = z[k]
    F = np.array([p.eval_float(full) for p in polys], dtype=complex)
    J = np.array([[p.derivative(v).eval_float(full) for v in unknowns] for p in polys], dtype=complex)
    return F, J


def newton_refine(polys, unknowns, z, steps: int = 8, ambient: int | None = None) -> np.ndarray:
    """Gauss-Newton polishing of a numeric solution (least squares if overdetermined)."""
    ambient = ambient if ambient is not None else polys[0].nvars
    z = np.array(z, dtype=complex)
    for _ in range(steps):
        F, J = _jacobian_eval(polys, unknowns, z, ambient)
        if not np.all(np.isfinite(F)) or not np.all(np.isfinite(J)):
            break
        dz, *_ = np.linalg.lstsq(J, -F, rcond=None)
        if not np.all(np.isfinite(dz)):
            break
        z = z + dz
        if np.max(np.abs(dz)) <= 1e-15 * max(1.0, np.max(np.abs(z))):
            break
    return z


def random_newton_search(polys, k: int, *, starts: int = 200, seed: int = 0, tol: float = 1e-10) -> SolveResult:
    """Randomized search for torus zeros when elimination collapses.

    Returned points have certified small residuals (relative to the
    coefficient scale); an empty result is only evidence, not proof.
    """
    rng = np.random.default_rng(seed)
    unknowns = list(range(k))
    out = SolveResult(exact=False)
    for _ in range(starts):
        z0 = np.exp(rng.normal(scale=1.0, size=k) + 1j * rng.uniform(-np.pi, np.pi, size=k))
        z = newton_refine(polys, unknowns, z0, steps=40, ambient=k)
        if not np.all(np.isfinite(z)) or np.min(np.abs(z)) < 1e-8 or np.max(np.abs(z)) > 1e8:
            continue
        F, _ = _jacobian_eval(polys, unknowns, z, k)
        if all(abs(F[j]) <= tol * _abs_value(p, z) for j, p in enumerate(polys)):
            out.points.append(TorusSolution(tuple(complex(v) for v in z), False))
            break
    return out


def _abs_value(p: LaurentPoly, z) -> float:
    """``sum |c| |z^a|``, the natural scale for a residual at ``z``."""
    az = np.abs(np.asarray(z, dtype=complex))
    return float(sum(abs(float(c)) * float(np.prod(az ** np.array(e))) for e, c in p.items()))
