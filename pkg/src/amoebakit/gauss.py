"""The logarithmic Gauss map ``z -> (z_1 f_1 : ... : z_n f_n)`` on ``V*(f)``.

Symbolic computations use the ring ``(z_1..z_n, y_1..y_n, p_1..p_k)`` where
the ``p_j`` are optional parameters (extra coefficients treated as
variables).  Elimination works in the chart ``y_n = 1``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import upoly
from .elim import (
    to_dense,
    EliminationError,
    content_in,
    discriminant,
    divexact,
    gcd,
    gcd_many,
    resultant,
    squarefree_decomposition,
    univariate_roots,
)
from .localalg import local_dimension, local_dimension_numeric
from .newton import newton_polytope, normalized_volume
from .poly import ComplexApprox, LaurentPoly, to_rational
from .solve import PositiveDimensional, _numeric_lift, solve_torus

__all__ = [
    "DiscriminantResult",
    "FactorReport",
    "FiberError",
    "FiberPoint",
    "FiberResult",
    "FiberSystem",
    "ProjectiveDirection",
    "ProjectionWarning",
    "factor_candidates",
    "fiber",
    "fiber_numeric",
    "fiber_system",
    "gauss_degree",
    "gauss_discriminant",
    "projection_polynomial",
]

log = logging.getLogger(__name__)

SAMPLE_ATTEMPTS = 50
NUMERIC_RESIDUAL = 1e-10
ACTIVE_SIGMA = 1e-5


class FiberError(ArithmeticError):
    pass


class ProjectionWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# directions

@dataclass(frozen=True)
class ProjectiveDirection:
    """A rational point of ``P^{n-1}`` in normalized integer coordinates."""

    coords: tuple

    def __init__(self, coords):
        vals = [Fraction(to_rational(c)) for c in coords]
        if not vals or all(v == 0 for v in vals):
            raise ValueError("the zero vector is not a projective point")
        den = math.lcm(*[v.denominator for v in vals])
        ints = [int(v * den) for v in vals]
        g = math.gcd(*ints)
        ints = [x // g for x in ints]
        last = next(x for x in reversed(ints) if x)
        if last < 0:
            ints = [-x for x in ints]
        object.__setattr__(self, "coords", tuple(ints))

    @classmethod
    def parse(cls, text: str) -> "ProjectiveDirection":
        sep = ":" if ":" in text else ","
        try:
            return cls([Fraction(t.strip()) for t in text.split(sep)])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse direction {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def chart(self) -> int:
        """Index of the last nonzero coordinate."""
        return max(i for i, c in enumerate(self.coords) if c)

    def affine(self) -> tuple:
        """Coordinates divided by the chart coordinate."""
        c = self.coords[self.chart]
        return tuple(Fraction(x, c) for x in self.coords)

    def __str__(self):
        return ":".join(str(c) for c in self.coords)


# ---------------------------------------------------------------------------
# fiber systems

@dataclass(frozen=True)
class FiberSystem:
    f: LaurentPoly
    equations: tuple
    chart: int
    symbolic: bool
    nparams: int = 0

    @property
    def all_equations(self) -> list:
        return [self.f, *self.equations]


def _ring_size(n: int, nparams: int) -> int:
    return 2 * n + nparams


def _embed_f(f: LaurentPoly, n: int, nparams: int) -> LaurentPoly:
    N = _ring_size(n, nparams)
    return f.embed(N, list(range(n)) + [2 * n + j for j in range(nparams)])


def fiber_system(f: LaurentPoly, y: ProjectiveDirection | Sequence | None = None, *, nparams: int = 0,
                 chart: int | None = None) -> FiberSystem:
    """Equations ``f, h_j = y_c z_j f_j - y_j z_c f_c`` (``j != c``).

    With ``y=None`` the equations live in the ring with symbolic ``y``
    (and parameters); otherwise ``y`` is substituted and the ring is that
    of ``f``.
    """
    n = f.nvars - nparams
    if n < 1:
        raise ValueError("need at least one torus variable")
    if y is None:
        c = n - 1 if chart is None else chart
        N = _ring_size(n, nparams)
        F = _embed_f(f, n, nparams)
        E = [F.euler_derivative(j) for j in range(n)]
        Y = [LaurentPoly.variable(n + j, N) for j in range(n)]
        eqs = tuple(Y[c] * E[j] - Y[j] * E[c] for j in range(n) if j != c)
        return FiberSystem(F, eqs, c, True, nparams)
    if not isinstance(y, ProjectiveDirection):
        y = ProjectiveDirection(y)
    if y.n != n:
        raise ValueError(f"direction has {y.n} coordinates, expected {n}")
    c = y.chart if chart is None else chart
    if y.coords[c] == 0:
        raise ValueError("chart coordinate of the direction is zero")
    E = [f.euler_derivative(j) for j in range(f.nvars)]
    eqs = tuple(y.coords[c] * E[j] - y.coords[j] * E[c] for j in range(n) if j != c)
    return FiberSystem(f, eqs, c, False, nparams)


def gauss_degree(f: LaurentPoly) -> int:
    """Degree of the Gauss map, ``n! Vol(N_f)``."""
    return normalized_volume(newton_polytope(f))


# ---------------------------------------------------------------------------
# projection polynomials

def _cleared(p: LaurentPoly) -> LaurentPoly:
    return p.clear_monomial()[0] if not p.is_zero else p


def _positive_content_free(p: LaurentPoly) -> LaurentPoly:
    """Divide by the positive rational content, keeping the sign."""
    return p / p.content()


@dataclass
class _Chain:
    """Resultant cascade eliminating everything but ``z_i`` in chart ``y_n = 1``."""

    keep: int
    order: list  # eliminated variables, innermost first
    levels: list  # per eliminated variable: polynomials used to lift it
    projection: LaurentPoly  # cleared, in the ring of size 2n + k, y_n absent


@lru_cache(maxsize=64)
def _chain(f: LaurentPoly, i: int, nparams: int, chart: int) -> _Chain:
    n = f.nvars - nparams
    N = _ring_size(n, nparams)
    sysm = fiber_system(f, None, nparams=nparams, chart=chart)
    one = LaurentPoly.one(N)
    polys = [_cleared(p.substitute(n + chart, one)) for p in sysm.all_equations]
    others = [j for j in range(n) if j != i]
    levels = []
    current = polys
    for x in reversed(others):
        levels.append((x, current))
        nxt = []
        for a in range(len(current)):
            for b in range(a + 1, len(current)):
                r = resultant(current[a], current[b], x)
                if not r.is_zero:
                    nxt.append(_cleared(r))
        if not nxt:
            raise EliminationError(f"elimination of z{x + 1} collapsed to zero")
        current = nxt
    if len(current) == 1:
        proj = current[0]
    else:
        proj = gcd_many(current)
    proj = _cleared(proj)
    if proj.is_constant() or proj.degree(i) == 0:
        raise EliminationError("projection polynomial does not involve the kept variable")
    # strip factors free of z_i (pure y / parameter content)
    cont = content_in(proj, i)
    if not cont.is_constant():
        proj = divexact(proj, cont)
    # strip factors free of the y's and parameters (pure z_i)
    yvars = list(range(n, N))
    groups: dict = {}
    for e, c in proj.items():
        groups.setdefault(tuple(e[v] for v in yvars), {})[e] = c
    if len(groups) > 1:
        zc = gcd_many([LaurentPoly(g, N) for g in groups.values()])
        if not zc.is_constant():
            proj = divexact(proj, zc)
    if len(current) == 1:
        proj = _positive_content_free(proj)
    else:
        proj = proj.primitive()
    return _Chain(i, list(reversed(others)), levels, proj)


def _homogenize_y(p: LaurentPoly, n: int, chart: int) -> LaurentPoly:
    """Homogenize the ``y`` part of ``p`` using ``y_chart``."""
    ys = range(n, 2 * n)
    d = max(sum(e[v] for v in ys) for e in p.support())
    out = {}
    for e, c in p.items():
        ne = list(e)
        ne[n + chart] = d - sum(e[v] for v in ys)
        out[tuple(ne)] = c
    return LaurentPoly(out, p.nvars)


def projection_polynomial(f: LaurentPoly, i: int = 0, *, nparams: int = 0, homogeneous: bool = True,
                          chart: int | None = None) -> LaurentPoly:
    """``h_i(y, z_i)``: the image of ``V*`` in ``(y, z_i)`` space.

    The result lives in the ring ``(z_1..z_n, y_1..y_n, params)``.  Only
    ``z_i`` (and ``y``, parameters) occur.  A :class:`ProjectionWarning` is
    issued when the degree in ``z_i`` is below ``n! Vol``.
    """
    n = f.nvars - nparams
    if n > 3:
        raise ValueError("projection polynomials are supported for n <= 3")
    c = n - 1 if chart is None else chart
    ch = _chain(f, i, nparams, c)
    h = ch.projection
    vol = gauss_degree(f) if nparams == 0 else gauss_degree(_torus_part(f, n))
    if h.degree(i) < vol:
        warnings.warn(
            f"degree {h.degree(i)} of h_{i + 1} in z{i + 1} is below n!Vol = {vol}; bad projection direction",
            ProjectionWarning,
            stacklevel=2,
        )
    return _homogenize_y(h, n, c) if homogeneous else h


def _torus_part(f: LaurentPoly, n: int) -> LaurentPoly:
    """Support of ``f`` projected to the torus exponents (parameters dropped)."""
    out = {}
    for e, _ in f.items():
        out[e[:n]] = 1
    return LaurentPoly(out, n)


# ---------------------------------------------------------------------------
# fibers

@dataclass
class FiberPoint:
    coords: tuple  # Fraction or ComplexApprox
    multiplicity: int
    is_real: bool
    exact: tuple  # per-coordinate exactness
    residual: float = 0.0

    @property
    def is_exact(self) -> bool:
        return all(self.exact)

    def as_complex(self) -> np.ndarray:
        return np.array([complex(float(c)) if isinstance(c, Fraction) else c.value for c in self.coords])

    def log_image(self) -> np.ndarray:
        return np.log(np.abs(self.as_complex()))

    def to_dict(self) -> dict:
        coords = []
        for c in self.coords:
            if isinstance(c, Fraction):
                coords.append(str(c))
            else:
                coords.append([_clean(c.real), _clean(c.imag)])
        return {
            "coords": coords,
            "multiplicity": self.multiplicity,
            "is_real": self.is_real,
            "exact": list(self.exact),
            "residual": _clean(self.residual),
        }


def _clean(x: float) -> float:
    """Round to 12 significant digits so reports are stable across platforms."""
    x = float(x)
    if x == 0 or not math.isfinite(x):
        return 0.0 if x == 0 else x
    return float(f"{x:.12g}")


@dataclass
class FiberResult:
    direction: ProjectiveDirection
    points: list
    degree: int

    @property
    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.points)

    @property
    def deficit(self) -> int:
        """Solutions of the compactified fiber that are not in the torus."""
        return self.degree - self.total_multiplicity

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, k):
        return self.points[k]

    def to_dict(self) -> dict:
        return {
            "direction": list(self.direction.coords),
            "degree": self.degree,
            "total_multiplicity": self.total_multiplicity,
            "deficit": self.deficit,
            "points": [p.to_dict() for p in self.points],
        }


def _residual_scale(p: LaurentPoly, z: np.ndarray) -> float:
    az = np.abs(z)
    return float(sum(abs(float(c)) * float(np.prod(az ** np.array(e))) for e, c in p.items()))


def _polish(eqs, z: np.ndarray, steps: int = 10) -> np.ndarray:
    n = len(z)
    J_polys = [[p.derivative(j) for j in range(n)] for p in eqs]
    for _ in range(steps):
        F = np.array([p.eval_float(list(z)) for p in eqs])
        J = np.array([[d.eval_float(list(z)) for d in row] for row in J_polys])
        try:
            dz = np.linalg.lstsq(J, -F, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(dz)) or np.max(np.abs(dz)) > 1e-2 * max(1.0, np.max(np.abs(z))):
            break
        z = z + dz
        if np.max(np.abs(dz)) <= 1e-16 * max(1.0, np.max(np.abs(z))):
            break
    return z


def _relative_residual(eqs, z) -> float:
    vals = []
    for p in eqs:
        s = _residual_scale(p, z)
        vals.append(abs(p.eval_float(list(z))) / max(s, 1e-300))
    return max(vals)


def fiber(f: LaurentPoly, y: ProjectiveDirection | Sequence) -> FiberResult:
    """Torus points of ``gamma_f^{-1}(y)`` with multiplicities."""
    if not isinstance(y, ProjectiveDirection):
        y = ProjectiveDirection(y)
    n = f.nvars
    if n > 3:
        raise ValueError("fibers are supported for n <= 3")
    if y.n != n:
        raise ValueError(f"direction has {y.n} coordinates, expected {n}")
    sysm = fiber_system(f, y)
    eqs = sysm.all_equations
    deg = gauss_degree(f)
    sols = None
    last_exc = None
    orders = [list(range(n))] + [list(range(k, n)) + list(range(k)) for k in range(1, n)]
    for order in orders:
        try:
            sols = solve_torus(eqs, order)
            order_used = order
            break
        except PositiveDimensional as exc:
            last_exc = exc
    if sols is None:
        raise FiberError(f"fiber over ({y}) is not finite: {last_exc}")
    points = []
    for s in sols:
        vals = [None] * n
        for v, val in zip(order_used, s.values):
            vals[v] = val
        points.append(vals)
    return FiberResult(y, _finish_points(f, eqs, points, n), deg)


def _finish_points(f, eqs, raw, n) -> list:
    exact_pts = []
    out = []
    for vals in raw:
        ex = tuple(isinstance(v, Fraction) for v in vals)
        if all(ex):
            for p in eqs:
                if p.evaluate(vals) != 0:
                    raise FiberError("exact fiber point failed verification")
            coords = tuple(vals)
            exact_pts.append(coords)
            out.append(FiberPoint(coords, 0, True, ex, 0.0))
            continue
        z = np.array([complex(float(v)) if isinstance(v, Fraction) else complex(v) for v in vals])
        z = _polish(eqs, z)
        res = _relative_residual(eqs, z)
        if np.min(np.abs(z)) < 1e-12:
            continue
        coords = tuple(
            v if e else ComplexApprox(float(zz.real), float(zz.imag), res)
            for v, e, zz in zip(vals, ex, z)
        )
        is_real = bool(np.all(np.abs(z.imag) <= 1e-9 * np.maximum(1.0, np.abs(z.real))))
        out.append(FiberPoint(coords, 0, is_real, ex, res))
    _assign_multiplicities(f, eqs, out, n)
    out.sort(key=_point_key)
    return out


def _point_key(p: FiberPoint):
    z = p.as_complex()
    return (not p.is_exact, -p.multiplicity, tuple((round(c.real, 9), round(c.imag, 9)) for c in z))


def _assign_multiplicities(f, eqs, pts, n):
    if n == 2:
        for axis in (0, 1):
            if _resultant_multiplicities(eqs, pts, axis):
                return
    for p in pts:
        if p.is_exact:
            p.multiplicity = local_dimension(eqs, p.coords)
        else:
            z = p.as_complex()
            J = np.array([[q.derivative(j).eval_float(list(z)) for j in range(n)] for q in eqs])
            s = np.linalg.svd(J, compute_uv=False)
            if s[-1] > 1e-6 * s[0]:
                p.multiplicity = 1
            else:
                p.multiplicity = local_dimension_numeric(eqs, z)


def _resultant_multiplicities(eqs, pts, axis) -> bool:
    """Multiplicity of each point's ``z_axis`` root in the eliminant.

    Returns False when two fiber points share the projected coordinate.
    """
    other = 1 - axis
    R = _cleared(resultant(_cleared(eqs[0]), _cleared(eqs[1]), other))
    if R.is_zero:
        return False
    proj = [p.as_complex()[axis] for p in pts]
    for a in range(len(proj)):
        for b in range(a + 1, len(proj)):
            if abs(proj[a] - proj[b]) <= 1e-7 * max(1.0, abs(proj[a])):
                return False
    rs = univariate_roots(R, axis)
    for p in pts:
        c = p.coords[axis]
        if isinstance(c, Fraction):
            m = next((m for r, m in rs.rational if r == c), None)
        else:
            cands = [(abs(z.value - c.value), m) for z, m in rs.numeric]
            m = min(cands)[1] if cands else None
        if m is None:
            return False
        p.multiplicity = m
    return True


# ---------------------------------------------------------------------------
# numeric fibers over complex directions

def fiber_numeric(f: LaurentPoly, y: Sequence[complex]) -> list[tuple[np.ndarray, float]]:
    """Torus points over a complex direction, via the cached symbolic chain.

    Returns ``(z, sigma)`` pairs where ``sigma`` is the relative smallest
    singular value of the Jacobian of the fiber system at ``z``.
    """
    n = f.nvars
    y = [complex(c) for c in y]
    c = max(j for j in range(n) if abs(y[j]) > 0)
    yn = [v / y[c] for v in y]
    ch = _chain(f, 0, 0, c)
    N = 2 * n
    sysm = fiber_system(f, None, chart=c)
    one = LaurentPoly.one(N)
    full_eqs = [_cleared(p.substitute(n + c, one)) for p in sysm.all_equations]
    base = {n + j: yn[j] for j in range(n) if j != c}
    pts = [{**base, 0: r} for r in _roots_numeric(ch.projection, base, 0)]
    for x, polys in reversed(ch.levels):
        nxt = []
        for pt in pts:
            try:
                nxt.extend({**pt, x: r} for r in _numeric_lift(polys, pt, x, 1e-6))
            except PositiveDimensional:
                continue
        pts = nxt
    out = []
    for pt in pts:
        z = np.array([pt[j] for j in range(n)])
        amb = [0j] * N
        for j in range(N):
            amb[j] = pt.get(j, 1.0 if j == n + c else 0j)
        z = _polish_ambient(full_eqs, z, amb, n)
        for j in range(n):
            amb[j] = z[j]
        J = np.array([[q.derivative(j).eval_float(amb) for j in range(n)] for q in full_eqs])
        s = np.linalg.svd(J, compute_uv=False)
        sigma = float(s[-1] / s[0]) if s[0] > 0 else 0.0
        if not any(np.max(np.abs(z - w)) < 1e-9 * max(1, np.max(np.abs(z))) for w, _ in out):
            out.append((z, sigma))
    return out


def _roots_numeric(p: LaurentPoly, base: dict, x: int) -> list[complex]:
    from .solve import _numeric_coeffs

    c = _numeric_coeffs(p, base, x)
    nz = np.nonzero(np.abs(c) > 0)[0]
    c = c[nz[0]: nz[-1] + 1]
    if len(c) <= 1:
        return []
    from .aberth import aberth

    return [complex(r) for r in aberth(c) if abs(r) > 1e-14]


def _polish_ambient(eqs, z, amb, n, steps: int = 10):
    amb = list(amb)
    for _ in range(steps):
        for j in range(n):
            amb[j] = z[j]
        F = np.array([p.eval_float(amb) for p in eqs])
        J = np.array([[p.derivative(j).eval_float(amb) for j in range(n)] for p in eqs])
        dz = np.linalg.lstsq(J, -F, rcond=None)[0]
        if not np.all(np.isfinite(dz)) or np.max(np.abs(dz)) > 1e-3 * max(1.0, np.max(np.abs(z))):
            break
        z = z + dz
        if np.max(np.abs(dz)) <= 1e-16 * max(1.0, np.max(np.abs(z))):
            break
    return z


# ---------------------------------------------------------------------------
# discriminant of the Gauss map

def _drop_z(p: LaurentPoly, n: int) -> LaurentPoly:
    """From the ring (z, y) to the ring (y); the z's must not occur."""
    return LaurentPoly({e[n:2 * n]: c for e, c in p.items()}, n)


def _coprime_basis(polys: list) -> list:
    """Pairwise coprime nonconstant primitive polynomials whose products give each input."""
    basis: list = []
    for p in polys:
        todo = [p.primitive()]
        while todo:
            q = todo.pop()
            if q.is_constant():
                continue
            for k, b in enumerate(basis):
                g = gcd(q, b)
                if g.is_constant():
                    continue
                basis.pop(k)
                for piece in (g, divexact(b, g).primitive(), divexact(q, g).primitive()):
                    if not piece.is_constant():
                        todo.append(piece)
                break
            else:
                basis.append(q)
    return sorted(basis, key=lambda b: (b.total_degree(), len(b), b.to_str()))


def _rational_grid(count: int) -> list[Fraction]:
    """Small rationals ordered by height: 0, 1, -1, 2, -2, 1/2, -1/2, ..."""
    out = [Fraction(0)]
    h = 1
    while len(out) < count:
        new = set()
        for q in range(1, h + 1):
            for p in range(0, h + 1):
                if max(p, q) == h and math.gcd(p, q) == 1:
                    new.add(Fraction(p, q))
        for v in sorted(new, key=lambda v: (v.denominator, v)):
            if v not in out:
                out.append(v)
            if -v not in out:
                out.append(-v)
        h += 1
    return out[:count]


def _linear_factors(p: LaurentPoly) -> list:
    """Rational linear factors ``a*y_1 + b*y_2 + c`` of a polynomial in one or two variables.

    Candidates are lines through rational roots of the restrictions to
    ``y_2 = 0`` and ``y_2 = 1``; each is confirmed by trial division.
    """
    n = p.nvars
    used = p.variables_used()
    if len(used) == 1:
        u = used[0]
        U = LaurentPoly.variable(u, n)
        return [(r.denominator * U - r.numerator).primitive() for r, _ in univariate_roots(p, u).rational]
    if len(used) != 2:
        return []
    u, v = used
    if p.degree(u) < 1:
        return []
    roots = []
    for t in (0, 1):
        q = p.substitute(v, LaurentPoly.constant(t, n))
        if q.is_zero or q.degree(u) < 1:
            return []
        roots.append([r for r, _ in univariate_roots(q, u).rational])
    found = []
    U = LaurentPoly.variable(u, n)
    V = LaurentPoly.variable(v, n)
    for r0 in roots[0]:
        for r1 in roots[1]:
            cand = (U - LaurentPoly.constant(r0, n) - (r1 - r0) * V).primitive()
            try:
                divexact(p, cand)
            except ArithmeticError:
                continue
            if cand not in found:
                found.append(cand)
    return found


def factor_candidates(p: LaurentPoly) -> list:
    """Squarefree factors of ``p``, further split by contents and linear factors."""
    pieces = []
    for fac, _ in squarefree_decomposition(p):
        pieces.append(fac)
        for x in fac.variables_used():
            c = content_in(fac, x)
            if not c.is_constant():
                pieces.append(c)
        pieces.extend(_linear_factors(fac))
    return _coprime_basis(pieces)


def _multiplicity_in(factor: LaurentPoly, p: LaurentPoly) -> int:
    if factor.is_monomial():
        # a variable y_j: its power in the monomial part of p
        j = factor.variables_used()[0]
        return p.min_degree(j)
    m = 0
    while True:
        try:
            p = divexact(p, factor)
        except ArithmeticError:
            return m
        m += 1


@dataclass
class FactorReport:
    factor: LaurentPoly  # homogeneous in y
    multiplicities: list  # in each d_i
    common: bool
    active: bool | None
    sample: list | None = None
    method: str = ""
    reason: str = ""

    @property
    def kept(self) -> bool:
        return bool(self.common and self.active)

    def to_dict(self, names) -> dict:
        return {
            "factor": self.factor.to_str(names),
            "degree": self.factor.total_degree(),
            "terms": len(self.factor),
            "multiplicities": self.multiplicities,
            "common": self.common,
            "active": self.active,
            "kept": self.kept,
            "sample": self.sample,
            "method": self.method,
            "reason": self.reason,
        }


@dataclass
class DiscriminantResult:
    raw: list  # d_i homogenized in y
    d0: LaurentPoly
    factors: list  # FactorReport

    @property
    def rejected(self) -> list:
        return [r for r in self.factors if not r.kept]

    @property
    def active_factors(self) -> list:
        return [r.factor for r in self.factors if r.kept]

    def to_dict(self, names=None) -> dict:
        n = self.d0.nvars
        names = names or tuple(f"y{j + 1}" for j in range(n))
        return {
            "d0": self.d0.to_str(names),
            "d0_degree": self.d0.total_degree(),
            "d0_terms": len(self.d0),
            "raw": [{"terms": len(d), "degree": d.total_degree()} for d in self.raw],
            "factors": [r.to_dict(names) for r in self.factors],
        }


def _rational_roots(p: LaurentPoly, i: int) -> list:
    return upoly.rational_roots(to_dense(p, i))


def _sample_points(F: LaurentPoly, others: list, n: int):
    """Rational points ``y`` (full projective coordinates) on ``F = 0`` off ``others``."""
    grid = _rational_grid(SAMPLE_ATTEMPTS)
    used = F.variables_used()
    seen = set()
    for t in grid:
        if n == 2:
            cands = [(r, Fraction(1)) for r in _rational_roots(F, 0)] if used else []
        else:
            cands = []
            for solve_var, fix_var in ((0, 1), (1, 0)):
                if solve_var not in used:
                    continue
                q = F.substitute(fix_var, LaurentPoly.constant(t, n))
                if q.is_zero or q.degree(solve_var) < 1:
                    continue
                for r in _rational_roots(q, solve_var):
                    pt = [Fraction(0)] * n
                    pt[solve_var] = r
                    pt[fix_var] = Fraction(t)
                    pt[n - 1] = Fraction(1)
                    cands.append(tuple(pt))
        for pt in cands:
            if pt in seen:
                continue
            seen.add(pt)
            if any(o.evaluate(pt) == 0 for o in others):
                continue
            yield pt
        if n == 2:
            return


def _numeric_samples(F: LaurentPoly, others: list, n: int):
    """Complex points on ``F = 0`` (chart ``y_n = 1``) away from the other factors."""
    grid = _rational_grid(8)[1:]
    for t in grid if n == 3 else [None]:
        if n == 2:
            q, var = F, 0
        else:
            var = 0 if 0 in F.variables_used() else 1
            q = F.substitute(1 - var, LaurentPoly.constant(t, n))
            if q.is_zero or q.degree(var) < 1:
                continue
        for z, _ in univariate_roots(q, var).numeric:
            pt = [1.0 + 0j] * n
            pt[var] = z.value
            if n == 3:
                pt[1 - var] = complex(float(t))
            if all(abs(o.eval_float(pt)) > 1e-6 * max(o.abs_coefficient_sum(), 1.0) for o in others):
                yield pt


def _test_active(f: LaurentPoly, F: LaurentPoly, others: list, n: int):
    """Decide whether the factor ``F`` (chart ``y_n = 1``) is part of the discriminant."""
    tries = 0
    for pt in _sample_points(F, others, n):
        tries += 1
        if tries > SAMPLE_ATTEMPTS:
            break
        try:
            fb = fiber(f, pt)
        except (FiberError, EliminationError, PositiveDimensional):
            continue
        mults = [p.multiplicity for p in fb]
        active = any(m >= 2 for m in mults)
        reason = "" if active else f"fiber over ({ProjectiveDirection(pt)}) has only simple torus points"
        return active, [str(x) for x in ProjectiveDirection(pt).coords], "exact", reason
    for pt in _numeric_samples(F, others, n):
        try:
            pts = fiber_numeric(f, pt)
        except (EliminationError, PositiveDimensional, np.linalg.LinAlgError):
            continue
        if not pts:
            continue
        sig = min(s for _, s in pts)
        active = sig < ACTIVE_SIGMA
        sample = [[_clean(c.real), _clean(c.imag)] for c in pt]
        reason = "" if active else "numeric fiber has only simple torus points"
        return active, sample, "numeric", reason
    raise FiberError("could not sample a point on the factor")


def gauss_discriminant(f: LaurentPoly) -> DiscriminantResult:
    """Discriminant of the logarithmic Gauss map, filtered by fiber checks."""
    n = f.nvars
    if not 2 <= n <= 3:
        raise ValueError("the discriminant is supported for n = 2, 3")
    if any(isinstance(c, Fraction) is False and not isinstance(c, int) for _, c in f.items()):
        raise ValueError("coefficients must be rational")
    raw = []
    for i in range(n):
        h = projection_polynomial(f, i, homogeneous=False)
        raw.append(_drop_z(discriminant(h, i), n))
    common = gcd_many(raw)
    cands = _coprime_basis([c for d in raw for c in factor_candidates(d)])
    chart_var = LaurentPoly.variable(n - 1, n)
    reports = []
    d0 = LaurentPoly.one(n)
    for F in cands:
        others = [G for G in cands if G is not F]
        mults = [_multiplicity_in(F, d) for d in raw]
        is_common = _multiplicity_in(F, common) > 0
        try:
            active, sample, method, reason = _test_active(f, F, others, n)
        except FiberError as exc:
            active, sample, method, reason = None, None, "failed", str(exc)
        if not is_common:
            reason = "; ".join(s for s in ["not a factor of every projection discriminant", reason] if s)
        rep = FactorReport(F.homogenize(n - 1).primitive(), mults, is_common, active, sample, method, reason)
        reports.append(rep)
        if rep.kept:
            d0 = d0 * F
    # the line at infinity of the chart is invisible there; test it directly
    inf_report = _infinity_report(f, n)
    if inf_report is not None:
        reports.append(inf_report)
        if inf_report.kept:
            d0 = d0 * chart_var
    if d0.is_constant():
        failed = [r for r in reports if r.active is None]
        if failed:
            raise FiberError("sampling failed for: " + ", ".join(r.factor.to_str() for r in failed))
        raise EliminationError("all discriminant factors were rejected")
    d0 = d0.homogenize(n - 1) if not any(e[n - 1] for e in d0.support()) else _homog_all(d0)
    hom_raw = [d.homogenize(n - 1) for d in raw]
    return DiscriminantResult(hom_raw, d0.primitive(), reports)


def _homog_all(p: LaurentPoly) -> LaurentPoly:
    n = p.nvars
    d = p.total_degree()
    out = {}
    for e, c in p.items():
        ne = list(e)
        ne[n - 1] += d - sum(e)
        out[tuple(ne)] = c
    return LaurentPoly(out, n)


def _infinity_report(f: LaurentPoly, n: int) -> FactorReport | None:
    """Fiber check on the hyperplane ``y_n = 0``."""
    grid = _rational_grid(12)
    for t in grid:
        pt = [Fraction(1)] + ([t] if n == 3 else []) + [Fraction(0)]
        if n == 3 and t == 0:
            continue
        try:
            fb = fiber(f, pt)
        except (FiberError, EliminationError, PositiveDimensional, ValueError):
            continue
        active = any(p.multiplicity >= 2 for p in fb)
        Y = LaurentPoly.variable(n - 1, n)
        reason = "" if active else f"fiber over ({ProjectiveDirection(pt)}) has only simple torus points"
        rep = FactorReport(Y, [0] * n, active, active, [str(x) for x in ProjectiveDirection(pt).coords],
                           "exact", reason)
        return rep if active else None
    return None
