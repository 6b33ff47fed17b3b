"""Critical points of the phase function and singular points of plane curves.

The phase function is ``phi_y(z) = <y, log z>`` restricted to ``V*(f)``; in
local coordinates ``z'`` (all but one dependent coordinate ``z_k = g(z')``)
its critical points over ``y`` are exactly the fiber ``gamma_f^{-1}(y)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import upoly
from .elim import gcd, resultant, to_dense
from .gauss import FiberPoint, ProjectiveDirection, fiber, gauss_discriminant
from .localalg import NotIsolated, local_dimension, translate
from .poly import LaurentPoly

__all__ = [
    "GermReport",
    "HessianResult",
    "IdentityReport",
    "MultiplicityBudget",
    "PhaseCritReport",
    "check_multiplicity_budget",
    "classify_phase_point",
    "dehomogenize",
    "gauss_jacobian",
    "jacobian_hessian_identity_check",
    "jet_milnor_number",
    "milnor_number",
    "phase_critical_points",
    "phase_hessian",
    "rational_singular_points",
]

SEPARATION_ATTEMPTS = 10


class DataError(ValueError):
    """Input contradicts a standing assumption (e.g. nondegeneracy)."""


# ---------------------------------------------------------------------------
# Milnor numbers of plane curve germs

@dataclass
class GermReport:
    point: tuple
    milnor_number: int
    multiplicity: int  # order of the curve at the point
    label: str
    oracle: int | None = None
    shear: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "point": [str(c) for c in self.point],
            "milnor_number": self.milnor_number,
            "multiplicity": self.multiplicity,
            "label": self.label,
            "oracle": self.oracle,
            "shear": list(self.shear) if self.shear else None,
        }


def dehomogenize(d: LaurentPoly, chart: int | None = None) -> LaurentPoly:
    """Set ``y_chart = 1`` (default: last variable)."""
    c = d.nvars - 1 if chart is None else chart
    return d.substitute(c, 1)


def jet_milnor_number(d: LaurentPoly, p: Sequence) -> int:
    """Dimension of the local algebra of the partials at ``p`` (jet-space oracle)."""
    return local_dimension([d.derivative(j) for j in range(d.nvars)], p)


def _order_at_origin(p: LaurentPoly) -> int:
    return min(sum(e) for e in p.support()) if not p.is_zero else 0


def _curve_label(mu: int, order: int) -> str:
    if mu == 0:
        return "smooth"
    if order == 2:
        return f"A{mu}"
    if order == 3 and mu == 4:
        return "D4"
    return f"unclassified({mu}, {order})"


def milnor_number(d: LaurentPoly, p: Sequence, *, seed: int = 0, check_oracle: bool = True) -> GermReport:
    """Milnor number of the plane curve ``d = 0`` at the rational point ``p``.

    After translating ``p`` to the origin and a random unimodular change of
    coordinates ``x = U u``, the Milnor number is the order at ``u_1 = 0`` of
    ``Res_{u_2}(d_1, d_2)``, provided no other common zero of the partials
    lies on the line ``u_1 = 0`` and no root escapes to infinity there.
    """
    if d.nvars != 2:
        raise ValueError("milnor_number expects a polynomial in two variables")
    p = tuple(Fraction(c) for c in p)
    D = translate(d, p, [0, 1])
    if D.evaluate((0, 0)) != 0:
        raise ValueError(f"{p} is not on the curve")
    P = [D.derivative(0), D.derivative(1)]
    if any(q.evaluate((0, 0)) != 0 for q in P):
        raise ValueError(f"{p} is not a singular point of the curve")
    rng = random.Random(seed)
    mu = None
    used = None
    for _ in range(SEPARATION_ATTEMPTS):
        a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        U = ((1 + a * b, a), (b, 1))
        Q = [_linear_change(q, U) for q in P]
        R = resultant(Q[0], Q[1], 1)
        if R.is_zero:
            raise NotIsolated(f"singularity at {p} is not isolated")
        if not _separated(Q):
            continue
        mu = R.min_degree(0)
        used = (a, b)
        break
    if mu is None:
        raise ArithmeticError(f"no separating projection found after {SEPARATION_ATTEMPTS} attempts")
    oracle = None
    if check_oracle:
        oracle = local_dimension(P, (0, 0))
        if oracle != mu:
            raise ArithmeticError(f"Milnor number mismatch at {p}: resultant {mu}, jet oracle {oracle}")
    order = _order_at_origin(D)
    return GermReport(p, mu, order, _curve_label(mu, order), oracle, used)


def rational_singular_points(d: LaurentPoly) -> list[tuple]:
    """All rational points of the affine plane curve ``d = 0`` where both partials vanish.

    Candidate abscissas are the rational roots of ``Res_{x2}(d, d_2)``; over
    each, the ordinates are the rational roots of the gcd of ``d, d_1, d_2``.
    """
    if d.nvars != 2:
        raise ValueError("expected a polynomial in two variables")
    d = d.clear_monomial()[0] if any(x < 0 for x in d.min_exponents()) else d
    d1, d2 = d.derivative(0), d.derivative(1)
    if d.degree(1) == 0:
        raise ValueError("the curve is a union of vertical lines; swap the variables")
    R = resultant(d, d2, 1)
    if R.is_zero:
        raise NotIsolated("the curve has a multiple component")
    xs = upoly.rational_roots(to_dense(R, 0)) if R.degree(0) > 0 else []
    out = []
    for x in xs:
        polys = [q.substitute(0, x) for q in (d, d1, d2)]
        polys = [q for q in polys if not q.is_zero]
        if not polys:
            raise NotIsolated(f"the line x1 = {x} lies in the singular locus")
        g = polys[0]
        for q in polys[1:]:
            g = gcd(g, q)
        if g.degree(0) < 1:
            continue
        for y in upoly.rational_roots(to_dense(g, 0)):
            out.append((x, y))
    return sorted(out)


def _linear_change(q: LaurentPoly, U) -> LaurentPoly:
    """``q(U u)`` for a 2x2 integer matrix ``U``."""
    ring = q.embed(4, [0, 1])
    u1, u2 = LaurentPoly.variable(2, 4), LaurentPoly.variable(3, 4)
    x1 = U[0][0] * u1 + U[0][1] * u2
    x2 = U[1][0] * u1 + U[1][1] * u2
    out = ring.substitute(0, x1).substitute(1, x2)
    return LaurentPoly({(e[2], e[3]): c for e, c in out.items()}, 2)


def _separated(Q) -> bool:
    # leading coefficients in u2 must not vanish at u1 = 0
    for q in Q:
        lc = q.leading_coefficient_in(1)
        if lc.substitute(0, 0).is_zero:
            return False
    a = Q[0].substitute(0, 0)
    b = Q[1].substitute(0, 0)
    g = gcd(a, b)
    # the only common root on u1 = 0 may be u2 = 0
    return g.is_monomial()


# ---------------------------------------------------------------------------
# phase function Hessian and the Gauss map Jacobian

@dataclass
class HessianResult:
    matrix: list  # (n-1) x (n-1), Fraction or complex entries
    dependent: int  # index k of the coordinate solved as z_k = g(z')
    local: list  # indices of the local coordinates z'
    exact: bool

    @property
    def corank(self) -> int:
        return len(self.local) - _rank(self.matrix, self.exact)

    @property
    def determinant(self):
        return _det(self.matrix)


def _rank(M, exact: bool) -> int:
    if not M:
        return 0
    if exact:
        rows = [list(r) for r in M]
        rank = 0
        for c in range(len(rows[0])):
            piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i][c] != 0:
                    t = rows[i][c] / rows[rank][c]
                    rows[i] = [x - t * y for x, y in zip(rows[i], rows[rank])]
            rank += 1
        return rank
    A = np.array(M, dtype=complex)
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > 1e-8 * max(s[0], 1e-300)))


def _det(M):
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return sum((-1) ** j * M[0][j] * _det([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(n))


def _point_values(z0):
    if isinstance(z0, FiberPoint):
        if z0.is_exact:
            return [Fraction(c) for c in z0.coords], True
        return list(z0.as_complex()), False
    vals = list(z0)
    if all(isinstance(v, (int, Fraction)) for v in vals):
        return [Fraction(v) for v in vals], True
    return [complex(v) for v in vals], False


def _evaluator(exact: bool, z):
    if exact:
        return lambda p: p.evaluate(z)
    return lambda p: p.eval_float(z)


def _implicit_log_derivatives(f: LaurentPoly, z, exact: bool, dependent: int | None):
    """First and second derivatives of ``log g`` where ``z_k = g(z')`` on ``f = 0``."""
    n = f.nvars
    ev = _evaluator(exact, z)
    fi = [ev(f.derivative(i)) for i in range(n)]
    if dependent is None:
        order = [n - 1] + list(range(n - 2, -1, -1))
        dependent = next((k for k in order if fi[k] != 0 and abs(fi[k]) > 0), None)
        if dependent is None:
            raise DataError("all partial derivatives of f vanish at the point")
    k = dependent
    if fi[k] == 0:
        raise DataError(f"f_z{k + 1} vanishes at the point")
    idx = [i for i in range(n) if i != k]
    fij = {(i, j): ev(f.derivative(i).derivative(j)) for i in range(n) for j in range(n)}
    g = z[k]
    gi = {i: -fi[i] / fi[k] for i in idx}
    gij = {}
    for i in idx:
        for j in idx:
            gij[i, j] = -(fij[i, j] + fij[i, k] * gi[j] + fij[k, j] * gi[i] + fij[k, k] * gi[i] * gi[j]) / fi[k]
    L1 = {i: gi[i] / g for i in idx}
    L2 = {(i, j): gij[i, j] / g - gi[i] * gi[j] / (g * g) for i in idx for j in idx}
    return k, idx, L1, L2


def phase_hessian(f: LaurentPoly, y, z0, *, dependent: int | None = None) -> HessianResult:
    """Hessian of ``phi_y`` in the local coordinates ``z'`` at ``z0``.

    ``d^2 phi / dz_i dz_j = y_k d^2 log g / dz_i dz_j - delta_ij y_i / z_i^2``
    with second derivatives of ``g`` from implicit differentiation of ``f``.
    """
    if not isinstance(y, ProjectiveDirection):
        y = ProjectiveDirection(y)
    z, exact = _point_values(z0)
    k, idx, _, L2 = _implicit_log_derivatives(f, z, exact, dependent)
    yv = [Fraction(c) for c in y.coords] if exact else [complex(c) for c in y.coords]
    H = [[yv[k] * L2[i, j] - (yv[i] / (z[i] * z[i]) if i == j else 0) for j in idx] for i in idx]
    return HessianResult(H, k, idx, exact)


def gauss_jacobian(f: LaurentPoly, z0, *, dependent: int | None = None) -> HessianResult:
    """Jacobian of the affine Gauss map ``z' -> (-z_i d log g / dz_i)_i`` at ``z0``."""
    z, exact = _point_values(z0)
    k, idx, L1, L2 = _implicit_log_derivatives(f, z, exact, dependent)
    J = [[-(z[i] * L2[i, j] + (L1[i] if i == j else 0)) for j in idx] for i in idx]
    return HessianResult(J, k, idx, exact)


@dataclass
class IdentityReport:
    holds: bool
    hessian: list
    jacobian: list
    diagonal: list
    det_hessian: object
    det_jacobian: object
    # det Hess = (-1)^(n-1) y_k^(n-1) / prod z_i * det Jac
    det_relation_holds: bool

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "det_hessian": _fmt(self.det_hessian),
            "det_jacobian": _fmt(self.det_jacobian),
            "det_relation_holds": self.det_relation_holds,
        }


def _fmt(x):
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return [float(np.real(x)), float(np.imag(x))]


def jacobian_hessian_identity_check(f: LaurentPoly, y, z0) -> IdentityReport:
    """Verify ``Hess(phi_y)(z0) = D Jac(gamma)(z0)`` with ``D = diag(-y_k / z_i)``.

    Exact for rational ``z0``; for numeric points equality is tested to a
    relative tolerance of 1e-8.
    """
    if not isinstance(y, ProjectiveDirection):
        y = ProjectiveDirection(y)
    H = phase_hessian(f, y, z0)
    J = gauss_jacobian(f, z0, dependent=H.dependent)
    z, exact = _point_values(z0)
    k = H.dependent
    yk = Fraction(y.coords[k]) if exact else complex(y.coords[k])
    D = [-yk / z[i] for i in H.local]
    DJ = [[D[a] * J.matrix[a][b] for b in range(len(D))] for a in range(len(D))]
    if exact:
        holds = DJ == H.matrix
    else:
        A, B = np.array(DJ, dtype=complex), np.array(H.matrix, dtype=complex)
        holds = bool(np.allclose(A, B, rtol=1e-8, atol=1e-10 * max(1.0, np.max(np.abs(B)))))
    dh, dj = H.determinant, J.determinant
    m = len(D)
    prod = 1
    for i in H.local:
        prod = prod * z[i]
    rhs = (-1) ** m * yk ** m / prod * dj
    rel = (dh == rhs) if exact else bool(abs(dh - rhs) <= 1e-8 * max(abs(dh), abs(rhs), 1e-300))
    return IdentityReport(holds, H.matrix, J.matrix, D, dh, dj, rel)


# ---------------------------------------------------------------------------
# classification

def classify_phase_point(mu: int, corank: int, n: int, cubic: Sequence | None = None) -> tuple[str, bool | None]:
    """ADE label and quasihomogeneity flag of a phase critical point.

    ``cubic`` optionally gives the binary cubic ``(a, b, c, d)`` of the
    restriction to the kernel when the corank is 2.  A corank-2 germ has
    ``mu >= 4``, with equality exactly when that cubic is nondegenerate, so
    ``mu = 4`` alone already certifies D4.
    """
    if mu < 1 or not 0 <= corank <= max(n - 1, 0):
        raise ValueError("need mu >= 1 and 0 <= corank <= n-1")
    if corank == 0:
        return ("A1", True) if mu == 1 else (f"unclassified({mu}, {corank})", None)
    if corank == 1:
        return f"A{mu}", True
    if corank == 2 and mu == 4:
        if cubic is not None:
            a, b, c, d = cubic
            disc = b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d
            if disc == 0:
                return f"unclassified({mu}, {corank})", None
        return "D4", True
    return f"unclassified({mu}, {corank})", None


@dataclass
class PhaseCritReport:
    point: FiberPoint
    direction: ProjectiveDirection
    mu: int
    corank: int
    label: str
    quasihomogeneous: bool | None
    det_hessian: object = None
    identity: IdentityReport | None = None

    def to_dict(self) -> dict:
        return {
            "point": self.point.to_dict(),
            "mu": self.mu,
            "corank": self.corank,
            "label": self.label,
            "quasihomogeneous": self.quasihomogeneous,
            "det_hessian": _fmt(self.det_hessian) if self.det_hessian is not None else None,
            "identity": self.identity.to_dict() if self.identity else None,
        }


def phase_critical_points(f: LaurentPoly, y) -> list[PhaseCritReport]:
    """Classify every torus critical point of ``phi_y`` (the fiber over ``y``)."""
    if not isinstance(y, ProjectiveDirection):
        y = ProjectiveDirection(y)
    n = f.nvars
    out = []
    for pt in fiber(f, y):
        H = phase_hessian(f, y, pt)
        corank = H.corank
        label, qh = classify_phase_point(pt.multiplicity, corank, n)
        ident = jacobian_hessian_identity_check(f, y, pt) if pt.is_exact else None
        out.append(PhaseCritReport(pt, y, pt.multiplicity, corank, label, qh, H.determinant, ident))
    return out


# ---------------------------------------------------------------------------
# discriminant multiplicity budget

@dataclass
class MultiplicityBudget:
    direction: ProjectiveDirection
    m: int
    fiber_multiplicities: list
    excess: int  # sum of (mult - 1)

    @property
    def slack(self) -> int:
        return self.m - self.excess

    @property
    def equality(self) -> bool:
        return self.slack == 0

    def to_dict(self) -> dict:
        return {
            "direction": list(self.direction.coords),
            "m": self.m,
            "fiber_multiplicities": self.fiber_multiplicities,
            "excess": self.excess,
            "slack": self.slack,
            "equality": self.equality,
        }


def _order_along_line(d0: LaurentPoly, y: Sequence[int], v: Sequence[int]) -> int:
    n = d0.nvars
    ring = d0.embed(n + 1, list(range(n)))
    t = LaurentPoly.variable(n, n + 1)
    for j in range(n):
        ring = ring.substitute(j, LaurentPoly.constant(y[j], n + 1) + v[j] * t)
    if ring.is_zero:
        raise ValueError("the line lies on the discriminant")
    return ring.min_degree(n)


def check_multiplicity_budget(f: LaurentPoly, y, d0: LaurentPoly | None = None, *, seed: int = 0,
                              require_on_discriminant: bool = False) -> MultiplicityBudget:
    """Compare ``mult_y(d0)`` with ``sum (mult(z_i) - 1)`` over the fiber.

    ``d0`` is the homogeneous discriminant; computed when not given.
    """
    if not isinstance(y, ProjectiveDirection):
        y = ProjectiveDirection(y)
    if d0 is None:
        d0 = gauss_discriminant(f).d0
    if d0.evaluate(y.coords) != 0:
        if require_on_discriminant:
            raise ValueError(f"({y}) is not on the discriminant")
        m = 0
    else:
        rng = random.Random(seed)
        m = None
        for _ in range(2):
            v = [rng.randint(-7, 7) for _ in y.coords]
            try:
                o = _order_along_line(d0, y.coords, v)
            except ValueError:
                continue
            m = o if m is None else min(m, o)
        if m is None:
            raise ArithmeticError("could not find a transversal line")
    mults = [p.multiplicity for p in fiber(f, y)]
    return MultiplicityBudget(y, m, mults, sum(k - 1 for k in mults))
