"""Newton polytopes of Laurent polynomials in up to three variables.

Hulls are computed exactly from integer exponent vectors by brute-force
support tests, which is plenty for the small supports this package meets.
Facet inequalities are written ``<normal, x> >= offset`` with primitive
inward integer normals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .poly import LaurentPoly

__all__ = [
    "FaceDescriptor",
    "NewtonPolytope",
    "NondegeneracyReport",
    "faces",
    "is_nondegenerate",
    "lattice_points",
    "newton_polytope",
    "normal_cone",
    "normalized_volume",
    "triangulate",
    "truncation",
]

MAX_ARITY = 3


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _primitive_vec(v):
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return tuple(x // g for x in v) if g else tuple(v)


def _rank(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                t = rows[r][c] / rows[rank][c]
                rows[r] = [a - t * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def affine_dimension(points) -> int:
    pts = list(points)
    if len(pts) <= 1:
        return 0
    return _rank([_sub(p, pts[0]) for p in pts[1:]])


def _integer_kernel(vectors, n) -> list[tuple]:
    """Integer basis of the orthogonal complement of ``vectors`` in Q^n (n <= 3)."""
    vs = [v for v in vectors if any(v)]
    r = _rank(vs) if vs else 0
    if r == 0:
        return [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    if r == n:
        return []
    # row-reduce over Q and read off the nullspace
    rows = [[Fraction(x) for x in v] for v in vs]
    pivots = []
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        rows[rank] = [x / rows[rank][c] for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                t = rows[i][c]
                rows[i] = [a - t * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        basis.append(_primitive_vec(tuple(int(x * den) for x in v)))
    return basis


@dataclass(frozen=True)
class NewtonPolytope:
    """Convex hull of a finite set of integer points."""

    arity: int
    dim: int
    points: tuple
    vertices: tuple
    facets: tuple  # ((inward normal), offset)
    equations: tuple = ()  # ((normal), value) cutting out the affine hull when dim < arity

    def contains(self, x) -> bool:
        return all(_dot(w, x) == c for w, c in self.equations) and all(_dot(w, x) >= c for w, c in self.facets)

    def tight_facets(self, x) -> tuple:
        return tuple(k for k, (w, c) in enumerate(self.facets) if _dot(w, x) == c)

    def to_dict(self) -> dict:
        return {
            "arity": self.arity,
            "dimension": self.dim,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(w), "offset": c} for w, c in self.facets],
            "equations": [{"normal": list(w), "value": c} for w, c in self.equations],
            "lattice_points": [list(p) for p in lattice_points(self)],
            "normalized_volume": normalized_volume(self),
        }


@dataclass(frozen=True)
class FaceDescriptor:
    """A face: its dimension, the facets defining it and the points on it."""

    dimension: int
    normals: tuple  # indices into NewtonPolytope.facets
    support: tuple  # support points of f lying on the face
    lattice_points: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "facets": list(self.normals),
            "support": [list(p) for p in self.support],
        }


def newton_polytope(f: LaurentPoly | Sequence[Sequence[int]]) -> NewtonPolytope:
    if isinstance(f, LaurentPoly):
        if f.is_zero:
            raise ValueError("the zero polynomial has no Newton polytope")
        pts = f.support()
        n = f.nvars
    else:
        pts = [tuple(p) for p in f]
        if not pts:
            raise ValueError("empty point set")
        n = len(pts[0])
    if n > MAX_ARITY:
        raise ValueError(f"arity {n} > {MAX_ARITY} is not supported")
    pts = tuple(sorted(set(tuple(int(x) for x in p) for p in pts)))
    d = affine_dimension(pts)
    p0 = pts[0]
    diffs = [_sub(p, p0) for p in pts[1:]]
    equations = tuple((w, _dot(w, p0)) for w in _integer_kernel(diffs, n)) if d < n else ()
    facets = _facets(pts, n, d, equations)
    if d == 0:
        verts = pts
    else:
        verts = []
        for p in pts:
            tight = [k for k, (w, c) in enumerate(facets) if _dot(w, p) == c]
            on_all = [q for q in pts if all(_dot(facets[k][0], q) == facets[k][1] for k in tight)]
            if on_all == [p]:
                verts.append(p)
        verts = tuple(verts)
    return NewtonPolytope(n, d, pts, tuple(sorted(verts)), facets, equations)


def _candidate_normals(pts, n, d, equations):
    if d == 0:
        return []
    if d == 1:
        u = next(_sub(p, pts[0]) for p in pts[1:] if any(_sub(p, pts[0])))
        u = _primitive_vec(u)
        return [u, tuple(-x for x in u)]
    if d == 2:
        if n == 2:
            plane = None
        else:
            plane = equations[0][0]
        out = []
        for a, b in combinations(pts, 2):
            e = _sub(b, a)
            w = (-e[1], e[0]) if plane is None else _cross(plane, e)
            if any(w):
                w = _primitive_vec(w)
                out += [w, tuple(-x for x in w)]
        return out
    out = []
    for a, b, c in combinations(pts, 3):
        w = _cross(_sub(b, a), _sub(c, a))
        if any(w):
            w = _primitive_vec(w)
            out += [w, tuple(-x for x in w)]
    return out


def _facets(pts, n, d, equations) -> tuple:
    seen = {}
    for w in _candidate_normals(pts, n, d, equations):
        if w in seen:
            continue
        vals = [_dot(w, p) for p in pts]
        c = min(vals)
        tight = [p for p, v in zip(pts, vals) if v == c]
        if affine_dimension(tight) == d - 1 and len(set(vals)) > 1:
            seen[w] = c
    return tuple(sorted(seen.items()))


def faces(P: NewtonPolytope) -> list[FaceDescriptor]:
    """All nonempty faces, the polytope itself included, by decreasing dimension."""
    full = frozenset(P.points)
    found: dict[frozenset, tuple] = {full: ()}
    facet_sets = []
    for k, (w, c) in enumerate(P.facets):
        s = frozenset(p for p in P.points if _dot(w, p) == c)
        facet_sets.append(s)
        found.setdefault(s, ())
    frontier = list(set(facet_sets))
    while frontier:
        new = []
        for s in frontier:
            for t in facet_sets:
                u = s & t
                if u and u not in found:
                    found[u] = ()
                    new.append(u)
        frontier = new
    lat = lattice_points(P)
    out = []
    for s in found:
        normals = tuple(k for k, fs in enumerate(facet_sets) if s <= fs) if s != full else ()
        dim = affine_dimension(sorted(s))
        if normals:
            lp = tuple(x for x in lat if all(_dot(P.facets[k][0], x) == P.facets[k][1] for k in normals))
        else:
            lp = tuple(lat)
        out.append(FaceDescriptor(dim, normals, tuple(sorted(s)), lp))
    out.sort(key=lambda F: (-F.dimension, F.support))
    return out


def lattice_points(P: NewtonPolytope) -> list[tuple]:
    """All integer points of the polytope, sorted."""
    lo = [min(p[i] for p in P.points) for i in range(P.arity)]
    hi = [max(p[i] for p in P.points) for i in range(P.arity)]
    return [x for x in product(*[range(a, b + 1) for a, b in zip(lo, hi)]) if P.contains(x)]


def _ordered_polygon(points, normal=None) -> list[tuple]:
    """Vertices of a planar convex polygon in cyclic order (exact monotone chain)."""
    pts = sorted(set(points))
    if normal is None:
        proj = {p: p for p in pts}
    else:
        drop = max(range(3), key=lambda i: abs(normal[i]))
        keep = [i for i in range(3) if i != drop]
        proj = {p: (p[keep[0]], p[keep[1]]) for p in pts}

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    srt = sorted(pts, key=lambda p: proj[p])
    lower, upper = [], []
    for p in srt:
        while len(lower) >= 2 and cross(proj[lower[-2]], proj[lower[-1]], proj[p]) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(srt):
        while len(upper) >= 2 and cross(proj[upper[-2]], proj[upper[-1]], proj[p]) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def normalized_volume(P: NewtonPolytope) -> int:
    """``n! * Vol(P)``; zero for polytopes that are not full dimensional.

    In three dimensions this uses the divergence form (signed tetrahedra
    against the origin over outward oriented facets), independent of
    :func:`triangulate`.
    """
    n = P.arity
    if P.dim < n:
        return 0
    if n == 1:
        return max(p[0] for p in P.points) - min(p[0] for p in P.points)
    if n == 2:
        poly = _ordered_polygon(P.vertices)
        s = 0
        for a, b in zip(poly, poly[1:] + poly[:1]):
            s += a[0] * b[1] - a[1] * b[0]
        return abs(s)
    total = 0
    for w, c in P.facets:
        fv = [v for v in P.vertices if _dot(w, v) == c]
        poly = _ordered_polygon(fv, w)
        outward = tuple(-x for x in w)
        o = _cross(_sub(poly[1], poly[0]), _sub(poly[2], poly[0]))
        if _dot(o, outward) < 0:
            poly = poly[::-1]
        for k in range(1, len(poly) - 1):
            total += _det3(poly[0], poly[k], poly[k + 1])
    return abs(total)


def _det3(a, b, c):
    return _dot(a, _cross(b, c))


def triangulate(P: NewtonPolytope) -> list[tuple]:
    """Pulling triangulation from the first vertex into full-dimensional simplices."""
    n = P.arity
    if P.dim < n:
        return []
    if n == 1:
        return [(P.vertices[0], P.vertices[-1])]
    if n == 2:
        poly = _ordered_polygon(P.vertices)
        return [(poly[0], poly[k], poly[k + 1]) for k in range(1, len(poly) - 1)]
    v0 = P.vertices[0]
    out = []
    for w, c in P.facets:
        if _dot(w, v0) == c:
            continue
        fv = [v for v in P.vertices if _dot(w, v) == c]
        poly = _ordered_polygon(fv, w)
        for k in range(1, len(poly) - 1):
            out.append((v0, poly[0], poly[k], poly[k + 1]))
    return out


def simplex_volume(simplex) -> int:
    base = simplex[0]
    rows = [_sub(v, base) for v in simplex[1:]]
    n = len(rows)
    if n == 1:
        return abs(rows[0][0])
    if n == 2:
        return abs(rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0])
    return abs(_det3(*rows))


def normal_cone(P: NewtonPolytope, x) -> list[tuple]:
    """Outward facet normals generating the normal cone at the point ``x`` of ``P``.

    An empty list means the cone is trivial (interior point).
    """
    if not P.contains(x):
        raise ValueError(f"{x} is not in the polytope")
    return [tuple(-a for a in P.facets[k][0]) for k in P.tight_facets(x)]


def truncation(f: LaurentPoly, face: FaceDescriptor) -> LaurentPoly:
    """Terms of ``f`` supported on ``face``."""
    P = newton_polytope(f)
    if face.normals:
        if any(k >= len(P.facets) for k in face.normals):
            raise ValueError("face does not belong to the Newton polytope of f")
        on = [p for p in P.points if all(_dot(P.facets[k][0], p) == P.facets[k][1] for k in face.normals)]
    else:
        on = list(P.points)
    if tuple(sorted(on)) != tuple(sorted(face.support)):
        raise ValueError("face does not belong to the Newton polytope of f")
    keep = set(on)
    return LaurentPoly({e: c for e, c in f.items() if e in keep}, f.nvars)


# ---------------------------------------------------------------------------
# nondegeneracy

@dataclass
class NondegeneracyReport:
    nondegenerate: bool
    certified: bool
    face: FaceDescriptor | None = None
    witness: tuple | None = None
    checked_faces: int = 0

    @property
    def verdict(self) -> str:
        if not self.nondegenerate:
            return "degenerate"
        return "nondegenerate" if self.certified else "probably nondegenerate"

    def __bool__(self):
        return self.nondegenerate

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "nondegenerate": self.nondegenerate,
            "certified": self.certified,
            "face": self.face.to_dict() if self.face else None,
            "witness": [[z.real, z.imag] for z in self.witness] if self.witness else None,
            "checked_faces": self.checked_faces,
        }


def _lattice_basis(vectors, n) -> list[tuple]:
    """Integer basis of the lattice spanned by ``vectors`` (Hermite-style reduction)."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col] != 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for j in range(n):
                    r[j] -= q * piv[j]
            nz = [r for r in nz if r[col] != 0]
        piv = nz[0]
        basis.append(tuple(piv))
        rows = [r for r in rows if r is not piv and any(r)]
        col += 1
    return basis


def _face_reduction(g: LaurentPoly, support):
    """Write ``g = z^v0 * G(z^b_1, ..., z^b_k)``; returns ``(G, B)``."""
    v0 = support[0]
    diffs = [_sub(p, v0) for p in support]
    B = _lattice_basis(diffs, g.nvars)
    k = len(B)
    if k == 0:
        return LaurentPoly.constant(g.coeff(v0), 0), B
    Bm = np.array(B, dtype=float)
    # coordinates of each difference in the basis (exact via least squares + rounding check)
    terms = {}
    for p in support:
        d = np.array(_sub(p, v0), dtype=float)
        coef, *_ = np.linalg.lstsq(Bm.T, d, rcond=None)
        ic = tuple(int(round(x)) for x in coef)
        if tuple(sum(ic[j] * B[j][i] for j in range(k)) for i in range(g.nvars)) != _sub(p, v0):
            raise ArithmeticError("lattice coordinates failed")
        terms[ic] = g.coeff(p)
    return LaurentPoly(terms, k), B


def is_nondegenerate(f: LaurentPoly) -> NondegeneracyReport:
    """Check every face truncation for a singular point in the torus."""
    from .solve import PositiveDimensional, solve_torus, random_newton_search

    if f.nvars > MAX_ARITY:
        raise ValueError(f"arity {f.nvars} > {MAX_ARITY} is not supported")
    P = newton_polytope(f)
    certified = True
    count = 0
    for F in faces(P):
        count += 1
        g = LaurentPoly({e: c for e, c in f.items() if e in set(F.support)}, f.nvars)
        G, B = _face_reduction(g, F.support)
        k = G.nvars
        if k == 0:
            continue
        system = [G] + [G.euler_derivative(j) for j in range(k)]
        system = [s for s in system if not s.is_zero]
        try:
            sols = solve_torus(system, list(range(k)))
        except PositiveDimensional:
            sols = random_newton_search(system, k)
        if sols:
            u = sols[0].values
            return NondegeneracyReport(False, sols.exact, F, _lift_witness(u, B, f.nvars), count)
        if not sols.exact:
            certified = False
    return NondegeneracyReport(True, certified, None, None, count)


def _lift_witness(u, B, n) -> tuple:
    """Some torus point ``z`` with ``z^b_j = u_j``."""
    Bm = np.array(B, dtype=float)
    X = Bm.T @ np.linalg.inv(Bm @ Bm.T)  # n x k with B X = I
    logs = np.array([np.log(complex(x)) for x in u])
    return tuple(complex(np.exp(X[i] @ logs)) for i in range(n))
