"""Laurent expansions of ``h/f`` on complement components and their diagonals.

For a vertex ``nu`` of the Newton polytope the expansion attached to the
component ``E_nu`` is the geometric series

    h/f = h / (a_nu z^nu) * sum_k r^k,   r = 1 - f / (a_nu z^nu).

Every exponent of ``r`` has positive value under an integer grading ``l``,
so ``S = sum r^k`` satisfies ``S = 1 + r S`` and can be filled in degree by
degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .gauss import FiberError, ProjectiveDirection, fiber
from .poly import LaurentPoly

__all__ = [
    "BudgetExceeded",
    "CoefficientTable",
    "ExpansionSpec",
    "NotGraded",
    "PrefactorReport",
    "RateReport",
    "diagonal",
    "expand",
    "expansion_spec",
    "morse_prefactor_check",
    "order_map",
    "rate_check",
]

FIT_WINDOW = 10
OSCILLATION = 0.10


class NotGraded(ValueError):
    """The geometric series at ``nu`` admits no positive grading."""


class BudgetExceeded(ValueError):
    pass


def _scalar(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class ExpansionSpec:
    f: LaurentPoly
    nu: tuple
    pivot: object  # a_nu
    ratio: tuple  # ((exponent, coefficient), ...) of r
    rays: tuple  # generators of the cone K_nu
    grading: tuple
    h: LaurentPoly

    def level(self, e) -> int:
        return sum(a * b for a, b in zip(self.grading, e))

    def to_dict(self) -> dict:
        return {
            "nu": list(self.nu),
            "pivot": str(self.pivot),
            "rays": [list(r) for r in self.rays],
            "grading": list(self.grading),
        }


def _find_grading(vectors: list, n: int, limit: int = 12) -> tuple | None:
    """Integer ``l`` with ``l . v >= 1`` for all ``v``, smallest ``sum |l_i|`` first."""
    if not vectors:
        return (1,) * n
    for m in range(1, limit + 1):
        best = None
        for l in product(range(-m, m + 1), repeat=n):
            if max(abs(x) for x in l) != m and m > 1:
                continue
            if all(sum(a * b for a, b in zip(l, v)) >= 1 for v in vectors):
                key = (sum(abs(x) for x in l), tuple(-x for x in l))
                if best is None or key < best[0]:
                    best = (key, l)
        if best is not None:
            return tuple(best[1])
    return None


def _extreme_rays(vectors: list) -> list:
    """Generators of the cone spanned by ``vectors`` (exact for n <= 2, all primitive vectors otherwise)."""
    prim = []
    for v in vectors:
        g = math.gcd(*v)
        w = tuple(x // g for x in v)
        if w not in prim:
            prim.append(w)
    if len(prim) <= 2 or len(prim[0]) != 2:
        return sorted(prim)
    ang = sorted(prim, key=lambda v: math.atan2(v[1], v[0]))
    # pointed cone: the two rays bounding the largest angular gap complement
    best = None
    for i in range(len(ang)):
        a, b = ang[i], ang[(i + 1) % len(ang)]
        gap = (math.atan2(b[1], b[0]) - math.atan2(a[1], a[0])) % (2 * math.pi)
        if best is None or gap > best[0]:
            best = (gap, b, a)
    return sorted([best[1], best[2]])


def expansion_spec(f: LaurentPoly, nu: Sequence[int], h: LaurentPoly | None = None,
                   grading: Sequence[int] | None = None) -> ExpansionSpec:
    """Set up the geometric series of ``h/f`` pivoted at the term ``a_nu z^nu``.

    Raises :class:`NotGraded` when the exponents of the ratio do not lie in
    a pointed cone, which happens for lattice points inside the polytope.
    """
    nu = tuple(int(x) for x in nu)
    n = f.nvars
    if len(nu) != n:
        raise ValueError(f"nu has {len(nu)} entries, expected {n}")
    a = f.coeff(nu)
    if a == 0:
        raise ValueError(f"{nu} is not in the support of f")
    ratio = []
    for e, c in f.items():
        if tuple(e) == nu:
            continue
        ratio.append((tuple(x - y for x, y in zip(e, nu)), _scalar(Fraction(-c) / Fraction(a))))
    ratio.sort()
    vecs = [e for e, _ in ratio]
    if grading is None:
        grading = _find_grading(vecs, n)
        if grading is None:
            raise NotGraded(f"the series at {nu} has no positive grading (nu is not a vertex)")
    grading = tuple(int(x) for x in grading)
    if any(sum(a * b for a, b in zip(grading, v)) < 1 for v in vecs):
        raise NotGraded(f"grading {grading} is not positive on the ratio exponents")
    h = h if h is not None else LaurentPoly.one(n)
    return ExpansionSpec(f, nu, _scalar(Fraction(a)), tuple(ratio), tuple(_extreme_rays(vecs)), grading, h)


@dataclass
class CoefficientTable:
    spec: ExpansionSpec
    budget: int
    coeffs: dict  # exponent -> int | Fraction, exact for level(alpha + nu) <= limit
    limit: int

    def __getitem__(self, alpha) -> object:
        alpha = tuple(alpha)
        if self.spec.level(tuple(a + b for a, b in zip(alpha, self.spec.nu))) > self.limit:
            raise BudgetExceeded(f"{alpha} is beyond the computed range")
        return self.coeffs.get(alpha, 0)

    def __len__(self):
        return len(self.coeffs)

    def as_poly(self) -> LaurentPoly:
        return LaurentPoly(dict(self.coeffs), self.spec.f.nvars)


def _geometric(spec: ExpansionSpec, budget: int, target: tuple | None) -> dict:
    """``S = sum r^k`` on all exponents of level <= budget (pruned towards ``target``)."""
    n = spec.f.nvars
    zero = (0,) * n
    prune = None
    if target is not None and all(min(e) >= 0 for e, _ in spec.ratio):
        prune = target
    levels: dict = {0: {zero: 1}}
    S = {zero: 1}
    steps = [(spec.level(e), e, c) for e, c in spec.ratio]
    for lev in range(1, budget + 1):
        cur: dict = {}
        for dl, e, c in steps:
            src = levels.get(lev - dl)
            if not src:
                continue
            for b, v in src.items():
                nb = tuple(x + y for x, y in zip(b, e))
                if prune is not None and any(x > t for x, t in zip(nb, prune)):
                    continue
                cur[nb] = cur.get(nb, 0) + c * v
        cur = {b: _scalar(v) if isinstance(v, Fraction) else v for b, v in cur.items() if v != 0}
        if cur:
            levels[lev] = cur
            S.update(cur)
    return S


def expand(spec: ExpansionSpec, budget: int, *, target: Sequence[int] | None = None) -> CoefficientTable:
    """Exact coefficients of ``h/f`` in ``E_nu`` up to grading level ``budget``.

    ``target`` restricts the work to exponents that can contribute to the
    coefficient at ``target`` (only used when the ratio has nonnegative
    exponents); the table is then complete only below ``target``.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    n = spec.f.nvars
    tgt = None
    if target is not None:
        tgt = tuple(int(t) + v for t, v in zip(target, spec.nu))
        hmin = [min(e[j] for e in spec.h.support()) for j in range(n)]
        tgt = tuple(t - m for t, m in zip(tgt, hmin))
    S = _geometric(spec, budget, tgt)
    pivot = Fraction(spec.pivot)
    hl = [spec.level(e) for e in spec.h.support()]
    limit = budget + min(hl)
    out: dict = {}
    for g, hc in spec.h.items():
        scale = Fraction(hc) / pivot
        for b, v in S.items():
            alpha = tuple(x + y - z for x, y, z in zip(b, g, spec.nu))
            out[alpha] = out.get(alpha, 0) + scale * v
    out = {a: _scalar(v) for a, v in out.items() if v != 0 and spec.level(tuple(x + y for x, y in zip(a, spec.nu))) <= limit}
    return CoefficientTable(spec, budget, out, limit)


def diagonal(table: CoefficientTable, q: Sequence[int], kmax: int) -> list:
    """Exact ``c_{kq}`` for ``k = 0..kmax``."""
    q = tuple(int(x) for x in q)
    return [table[tuple(k * x for x in q)] for k in range(kmax + 1)]


def _diagonal_table(f: LaurentPoly, nu, q, kmax, grading=None) -> tuple[ExpansionSpec, list]:
    spec = expansion_spec(f, nu, grading=grading)
    top = tuple(kmax * x for x in q)
    budget = spec.level(tuple(a + b for a, b in zip(top, spec.nu)))
    if budget < 0:
        raise BudgetExceeded(f"direction {tuple(q)} has negative level; it is not in the cone of {tuple(nu)}")
    table = expand(spec, budget, target=top)
    return spec, diagonal(table, q, kmax)


# ---------------------------------------------------------------------------
# order map

def order_map(f: LaurentPoly, x: Sequence[float], *, samples: int = 8) -> tuple | None:
    """Order of the complement component containing ``x`` (``None`` on the amoeba).

    ``nu_j`` is the number of roots in ``z_j`` inside the circle of radius
    ``e^{x_j}``, other coordinates fixed on their circles, plus the lowest
    exponent of ``z_j``; it does not depend on the fixed angles off the amoeba.
    """
    from .aberth import aberth

    n = f.nvars
    rng = np.random.default_rng(0)
    out = []
    for j in range(n):
        counts = set()
        lo = f.min_degree(j)
        hi = f.degree(j)
        for _ in range(samples):
            ang = rng.uniform(0, 2 * np.pi, size=n)
            z = np.exp(np.asarray(x, dtype=float) + 1j * ang)
            c = np.zeros(hi - lo + 1, dtype=complex)
            for e, a in f.items():
                t = float(a)
                for i in range(n):
                    if i != j and e[i]:
                        t *= z[i] ** e[i]
                c[e[j] - lo] += t
            nz = np.nonzero(np.abs(c) > 1e-14 * np.max(np.abs(c)))[0]
            if len(nz) == 0:
                return None
            shift = nz[0]
            c = c[nz[0]: nz[-1] + 1]
            roots = aberth(c) if len(c) > 1 else np.zeros(0)
            rad = math.exp(x[j])
            if np.any(np.abs(np.abs(roots) - rad) <= 1e-9 * rad):
                return None
            counts.add(int(np.sum(np.abs(roots) < rad)) + shift + lo)
        if len(counts) != 1:
            return None
        out.append(counts.pop())
    return tuple(out)


# ---------------------------------------------------------------------------
# rates

@dataclass
class Candidate:
    coords: list
    rate: float
    multiplicity: int
    is_real: bool
    relevant: bool

    def to_dict(self) -> dict:
        return {
            "coords": self.coords,
            "rate": _clean(self.rate),
            "multiplicity": self.multiplicity,
            "is_real": self.is_real,
            "relevant": self.relevant,
        }


@dataclass
class RateReport:
    nu: tuple
    q: tuple
    kmax: int
    empirical: float  # extrapolated
    raw: float  # |c_kmax|^(1/kmax)
    predicted: float | None
    relative_error: float | None
    oscillating: bool
    selected: int | None
    selection: str
    candidates: list = field(default_factory=list)
    spread: float = 0.0

    def to_dict(self) -> dict:
        return {
            "nu": list(self.nu),
            "q": list(self.q),
            "kmax": self.kmax,
            "empirical_rate": _clean(self.empirical),
            "raw_rate": _clean(self.raw),
            "predicted_rate": _clean(self.predicted) if self.predicted is not None else None,
            "relative_error": _clean(self.relative_error) if self.relative_error is not None else None,
            "oscillating": self.oscillating,
            "extrapolant_spread": _clean(self.spread),
            "selected": self.selected,
            "selection": self.selection,
            "candidates": [c.to_dict() for c in self.candidates],
        }


def _clean(x: float) -> float:
    x = float(x)
    return x if x == 0 or not math.isfinite(x) else float(f"{x:.12g}")


def _log_abs(c) -> float:
    """``log|c|`` for big exact rationals without overflow."""
    c = Fraction(c)
    if c == 0:
        return -math.inf
    num, den = abs(c.numerator), c.denominator
    return _log_int(num) - _log_int(den)


def _log_int(m: int) -> float:
    b = m.bit_length()
    if b < 1000:
        return math.log(m)
    s = b - 900
    return math.log(m >> s) + s * math.log(2)


def _fit_rate(logs: list, ks: list, n: int) -> float:
    """Least-squares fit ``log|c_k| = k log rho + beta log k + gamma``."""
    A = np.array([[k, math.log(k), 1.0] for k in ks])
    sol, *_ = np.linalg.lstsq(A, np.array(logs), rcond=None)
    return math.exp(sol[0])


def _empirical(seq: list, n: int) -> tuple[float, float, float, bool]:
    kmax = len(seq) - 1
    logs = [_log_abs(c) for c in seq]
    raw = math.exp(logs[kmax] / kmax) if kmax > 0 and math.isfinite(logs[kmax]) else 0.0
    ks = [k for k in range(max(1, kmax - FIT_WINDOW + 1), kmax + 1) if math.isfinite(logs[k])]
    if len(ks) < 4:
        return raw, raw, 0.0, True
    est = _fit_rate([logs[k] for k in ks], ks, n)
    # extrapolants over earlier windows, for the oscillation flag
    prev = []
    for shift in (FIT_WINDOW, 2 * FIT_WINDOW):
        ks2 = [k for k in range(max(1, kmax - shift - FIT_WINDOW + 1), kmax - shift + 1) if math.isfinite(logs[k])]
        if len(ks2) >= 4:
            prev.append(_fit_rate([logs[k] for k in ks2], ks2, n))
    allv = [est] + prev
    spread = (max(allv) - min(allv)) / est if est else math.inf
    zeros = sum(1 for k in range(max(1, kmax - FIT_WINDOW + 1), kmax + 1) if not math.isfinite(logs[k]))
    oscillating = spread > OSCILLATION or zeros > 0
    return est, raw, spread, oscillating


def _candidates(f: LaurentPoly, nu, q) -> list[Candidate]:
    qq = [int(x) for x in q]
    fb = fiber(f, ProjectiveDirection(qq))
    out = []
    for p in fb:
        x = p.log_image()
        rate = math.exp(-float(np.dot(qq, x)))
        step = np.asarray(qq, dtype=float) / np.linalg.norm(qq)
        relevant = any(order_map(f, x - d * step) == tuple(nu) for d in (1e-2, 1e-3, 1e-4))
        out.append(Candidate([c if isinstance(c, str) else c for c in p.to_dict()["coords"]], rate,
                             p.multiplicity, p.is_real, relevant))
    return out


def _select(cands: list[Candidate]) -> tuple[int | None, str]:
    """Relevant candidates first (smallest rate, i.e. the support point); else the dominant saddle."""
    rel = [i for i, c in enumerate(cands) if c.relevant]
    if rel:
        return min(rel, key=lambda i: cands[i].rate), "relevant"
    real = [i for i, c in enumerate(cands) if c.is_real] or list(range(len(cands)))
    if not real:
        return None, "none"
    return max(real, key=lambda i: cands[i].rate), "dominant"


def rate_check(f: LaurentPoly, nu: Sequence[int], q: Sequence[int], kmax: int) -> RateReport:
    """Compare the growth of ``c_{kq}`` with ``exp(-<q, Log w>)`` for a fiber point ``w``.

    ``w`` is chosen among the fiber points over ``q`` whose Log image lies
    on the boundary of ``E_nu`` (checked with the order map just inside);
    without such a point the largest candidate rate is used.  All
    candidates are listed.
    """
    nu = tuple(int(x) for x in nu)
    q = tuple(int(x) for x in q)
    n = f.nvars
    if kmax < 2:
        raise ValueError("kmax must be at least 2")
    _, seq = _diagonal_table(f, nu, q, kmax)
    emp, raw, spread, osc = _empirical(seq, n)
    if n == 1:
        # the only candidates are the roots of f; q > 0 picks the smallest modulus
        cands = []
        from .elim import univariate_roots

        rs = univariate_roots(f, 0)
        for r, m in rs.rational:
            cands.append(Candidate([str(r)], abs(float(r)) ** (-q[0]), m, True, True))
        for z, m in rs.numeric:
            cands.append(Candidate([[z.real, z.imag]], abs(z.value) ** (-q[0]), m, abs(z.imag) < 1e-12, True))
        idx = max(range(len(cands)), key=lambda i: cands[i].rate) if cands else None
        how = "dominant"
    else:
        try:
            cands = _candidates(f, nu, q)
        except FiberError:
            cands = []
        idx, how = _select(cands)
    pred = cands[idx].rate if idx is not None else None
    err = abs(emp - pred) / pred if pred else None
    return RateReport(nu, q, kmax, emp, raw, pred, err, osc, idx, how, cands, spread)


@dataclass
class PrefactorReport:
    nu: tuple
    q: tuple
    kmax: int
    rate: float
    exponent: float
    plateau: float
    spread: float  # relative spread over the last third
    values: list

    @property
    def stable(self) -> bool:
        return self.spread < 0.05 and self.plateau > 0 and math.isfinite(self.plateau)

    def to_dict(self) -> dict:
        return {
            "nu": list(self.nu),
            "q": list(self.q),
            "kmax": self.kmax,
            "rate": _clean(self.rate),
            "power": _clean(self.exponent),
            "plateau": _clean(self.plateau),
            "relative_spread": _clean(self.spread),
            "stable": self.stable,
        }


def morse_prefactor_check(f: LaurentPoly, nu: Sequence[int], q: Sequence[int], kmax: int) -> PrefactorReport:
    """Plateau of ``|c_{kq}| rho^{-k} k^{(n-1)/2}`` over the last third of the sequence."""
    rep = rate_check(f, nu, q, kmax)
    n = f.nvars
    if n > 1:
        if any(c.multiplicity > 1 for c in rep.candidates):
            raise FiberError("the fiber has a degenerate critical point; the Morse power law does not apply")
    if rep.predicted is None:
        raise FiberError("no fiber point could be selected")
    _, seq = _diagonal_table(f, nu, q, kmax)
    rho = rep.predicted
    power = (n - 1) / 2
    start = max(1, kmax - kmax // 3)
    vals = []
    for k in range(start, kmax + 1):
        lv = _log_abs(seq[k]) - k * math.log(rho) + power * math.log(k)
        vals.append(math.exp(lv))
    plateau = vals[-1]
    spread = (max(vals) - min(vals)) / plateau if plateau else math.inf
    return PrefactorReport(tuple(nu), tuple(q), kmax, rho, power, plateau, spread, vals)
