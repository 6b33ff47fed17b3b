"""Amoebas, contours and their complements.

The amoeba ``Log(V*)`` of a plane curve is drawn by forward sampling: for
``z1`` on a log-polar grid we solve ``f(z1, .) = 0`` and keep the Log images
of the torus roots.  The contour is the Log image of the Gauss map fibers
over real directions.  Complement components are counted on a raster.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import ndimage

from .elim import EliminationError
from .gauss import FiberError, ProjectiveDirection, fiber
from .poly import LaurentPoly
from .solve import PositiveDimensional

__all__ = [
    "ComponentCount",
    "ContourResult",
    "LogPoint",
    "Raster",
    "amoeba_samples",
    "complement_components",
    "contour_directions",
    "contour_points",
    "default_box",
    "emit",
    "plot_curve",
    "rasterize",
    "sphere_directions",
]

log = logging.getLogger(__name__)

CONTOUR_STEPS = 720
MAX_DENOMINATOR = 1000
DILATION_RADIUS = 1.5
DEFAULT_RESOLUTION = 400
BOX_PAD = 2.0
BOX_LIMIT = 15.0
SVG_PIXELS = 800


@dataclass
class LogPoint:
    coords: tuple  # natural logs of the moduli
    source: str  # "contour" or "amoeba"
    direction: ProjectiveDirection | None = None
    multiplicity: int = 1
    is_real: bool = False

    @property
    def pleat(self) -> bool:
        return self.multiplicity >= 2

    @property
    def tag(self) -> str:
        if self.source == "contour" and self.pleat:
            return "pleat"
        return self.source


@dataclass
class ContourResult:
    points: list
    failures: list = field(default_factory=list)  # (direction, message)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    @property
    def pleats(self) -> list:
        return [p for p in self.points if p.pleat]

    def array(self) -> np.ndarray:
        if not self.points:
            return np.zeros((0, 2))
        return np.array([p.coords for p in self.points], dtype=float)


# ---------------------------------------------------------------------------
# directions

def _rationalize(x: float, max_den: int) -> Fraction:
    return Fraction(x).limit_denominator(max_den)


def contour_directions(steps: int = CONTOUR_STEPS, *, max_den: int = MAX_DENOMINATOR) -> list[ProjectiveDirection]:
    """Rational points of ``P^1_R`` near ``(cos t : sin t)``, ``t`` in ``[0, pi)``.

    The larger of the two coordinates is set to 1 and the other one is a
    continued-fraction approximation of the ratio.
    """
    out = []
    seen = set()
    for k in range(steps):
        t = math.pi * k / steps
        c, s = math.cos(t), math.sin(t)
        if abs(c) >= abs(s):
            d = ProjectiveDirection([1, _rationalize(s / c, max_den)])
        else:
            d = ProjectiveDirection([_rationalize(c / s, max_den), 1])
        if d.coords not in seen:
            seen.add(d.coords)
            out.append(d)
    return out


def sphere_directions(count: int, *, max_den: int = 100) -> list[ProjectiveDirection]:
    """Roughly uniform rational points of ``P^2_R`` (Fibonacci lattice on a hemisphere)."""
    out = []
    seen = set()
    golden = math.pi * (3 - math.sqrt(5))
    for k in range(count):
        zc = 1 - (k + 0.5) / count  # in (0, 1]
        r = math.sqrt(max(0.0, 1 - zc * zc))
        t = golden * k
        v = [r * math.cos(t), r * math.sin(t), zc]
        big = max(range(3), key=lambda j: abs(v[j]))
        coords = [_rationalize(v[j] / v[big], max_den) for j in range(3)]
        try:
            d = ProjectiveDirection(coords)
        except ValueError:
            continue
        if d.coords not in seen:
            seen.add(d.coords)
            out.append(d)
    return out


def _angle(d: ProjectiveDirection) -> float:
    """Angle in ``[0, pi)`` of a point of ``P^1_R``."""
    a = math.atan2(d.coords[1], d.coords[0]) if d.n == 2 else 0.0
    return a % math.pi


# ---------------------------------------------------------------------------
# contour

def contour_points(f: LaurentPoly, directions: Sequence | None = None) -> ContourResult:
    """Log images of the fibers of the Gauss map over real rational directions.

    Fiber points of multiplicity at least 2 are marked as pleat candidates.
    Directions whose fiber cannot be computed are recorded, not raised.
    """
    n = f.nvars
    if n not in (2, 3):
        raise ValueError("contours are drawn for n = 2 or 3")
    if directions is None:
        directions = contour_directions() if n == 2 else sphere_directions(400)
    res = ContourResult([])
    for d in directions:
        if not isinstance(d, ProjectiveDirection):
            d = ProjectiveDirection(d)
        try:
            fb = fiber(f, d)
        except (FiberError, EliminationError, PositiveDimensional, ArithmeticError, ValueError) as exc:
            res.failures.append((d, str(exc)))
            continue
        for p in fb:
            x = p.log_image()
            if not np.all(np.isfinite(x)):
                continue
            res.points.append(LogPoint(tuple(float(v) for v in x), "contour", d, p.multiplicity, p.is_real))
    return res


# ---------------------------------------------------------------------------
# amoeba sampling

def _coefficient_rows(f: LaurentPoly, var: int, z: np.ndarray) -> tuple[np.ndarray, int]:
    """Coefficients of ``f`` as a polynomial in ``z_var`` (lowest first) at many values of the other variable."""
    other = 1 - var
    lo = f.min_degree(var)
    hi = f.degree(var)
    rows = np.zeros((len(z), hi - lo + 1), dtype=complex)
    for e, c in f.items():
        rows[:, e[var] - lo] += float(c) * z ** e[other]
    return rows, lo


def _solve_rows(rows: np.ndarray) -> np.ndarray:
    """Roots of each row; rows with a vanishing end coefficient are dropped."""
    from .aberth import aberth_batch

    scale = np.max(np.abs(rows), axis=1)
    ok = (np.abs(rows[:, -1]) > 1e-12 * scale) & (np.abs(rows[:, 0]) > 1e-12 * scale)
    rows = rows[ok]
    if rows.shape[1] < 2 or len(rows) == 0:
        return np.zeros((0, max(rows.shape[1] - 1, 0)), dtype=complex)
    if rows.shape[1] == 2:
        return -rows[:, :1] / rows[:, 1:]
    out = []
    for start in range(0, len(rows), 4096):
        chunk = rows[start:start + 4096]
        roots, _ = aberth_batch(chunk)
        out.append(roots)
    return np.concatenate(out)


def amoeba_samples(f: LaurentPoly, box: Sequence[float] | None = None, *, radial: int = 1600,
                   angular: int = 720, both_axes: bool = True) -> np.ndarray:
    """Points of ``Log(V*)`` as an ``(N, 2)`` array.

    ``z1 = exp(r + i t)`` runs over ``radial`` log-radii spanning the box and
    ``angular`` angles; for each the roots ``z2`` are Log-mapped.  With
    ``both_axes`` the roles of the variables are also swapped, which fills
    in tentacles that are nearly parallel to the ``x2`` axis.
    """
    if f.nvars != 2:
        raise ValueError("amoeba sampling needs a curve (n = 2)")
    box = tuple(float(b) for b in (box if box is not None else (-6, 6, -6, 6)))
    x0, x1, y0, y1 = box
    t = 2 * np.pi * (np.arange(angular) + 0.5) / angular
    pts = []
    for var, (a, b) in ((1, (x0, x1)), (0, (y0, y1))):
        if var == 0 and not both_axes:
            break
        other = 1 - var
        if f.degree(var) == f.min_degree(var):
            continue
        r = np.linspace(a - 0.5, b + 0.5, radial)
        z = (np.exp(r)[:, None] * np.exp(1j * t)[None, :]).ravel()
        rows, _ = _coefficient_rows(f, var, z)
        # drop the monomial factor in the solved variable
        nz = np.nonzero(np.any(rows != 0, axis=0))[0]
        rows = rows[:, nz[0]:nz[-1] + 1]
        keep = np.ones(len(z), dtype=bool)
        scale = np.max(np.abs(rows), axis=1)
        keep &= (np.abs(rows[:, -1]) > 1e-12 * scale) & (np.abs(rows[:, 0]) > 1e-12 * scale)
        roots = _solve_rows(rows)
        zs = np.repeat(z[keep], roots.shape[1])
        rs = roots.ravel()
        good = np.isfinite(rs) & (rs != 0)
        xo = np.log(np.abs(zs[good]))
        xv = np.log(np.abs(rs[good]))
        pair = np.empty((len(xo), 2))
        pair[:, other] = xo
        pair[:, var] = xv
        pts.append(pair)
    if not pts:
        return np.zeros((0, 2))
    out = np.concatenate(pts)
    return out[np.all(np.isfinite(out), axis=1)]


# ---------------------------------------------------------------------------
# rasters and components

@dataclass
class Raster:
    box: tuple  # (x0, x1, y0, y1)
    resolution: int
    occupancy: np.ndarray  # bool, indexed [row = x2, col = x1]
    labels: np.ndarray | None = None

    @property
    def cell(self) -> tuple:
        x0, x1, y0, y1 = self.box
        return ((x1 - x0) / self.resolution, (y1 - y0) / self.resolution)

    def cell_of(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Column, row and inside-mask for points ``(N, 2)``."""
        x0, x1, y0, y1 = self.box
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        col = np.floor((pts[:, 0] - x0) / (x1 - x0) * self.resolution).astype(int)
        row = np.floor((pts[:, 1] - y0) / (y1 - y0) * self.resolution).astype(int)
        inside = (col >= 0) & (col < self.resolution) & (row >= 0) & (row < self.resolution)
        return col, row, inside

    def contains(self, pts: np.ndarray, slack: int = 1) -> np.ndarray:
        """Whether each point lies in an occupied cell or within ``slack`` cells of one."""
        occ = self.occupancy
        if slack:
            occ = ndimage.binary_dilation(occ, iterations=slack)
        col, row, inside = self.cell_of(pts)
        out = np.zeros(len(col), dtype=bool)
        out[inside] = occ[row[inside], col[inside]]
        return out


def _disk(radius: float) -> np.ndarray:
    k = int(math.floor(radius))
    ii, jj = np.mgrid[-k:k + 1, -k:k + 1]
    return ii * ii + jj * jj <= radius * radius + 1e-9


def rasterize(samples: np.ndarray, box: Sequence[float], resolution: int = DEFAULT_RESOLUTION, *,
              dilation: float = DILATION_RADIUS) -> Raster:
    box = tuple(float(b) for b in box)
    r = Raster(box, int(resolution), np.zeros((resolution, resolution), dtype=bool))
    if len(samples):
        col, row, inside = r.cell_of(samples)
        r.occupancy[row[inside], col[inside]] = True
    if dilation > 0:
        r.occupancy = ndimage.binary_dilation(r.occupancy, structure=_disk(dilation))
    return r


@dataclass
class ComponentCount:
    total: int
    bounded: int
    resolution: int
    stable: bool | None = None
    check: tuple | None = None  # (total, bounded) at twice the resolution
    raster: Raster | None = None

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "bounded": self.bounded,
            "resolution": self.resolution,
            "stable": self.stable,
            "check_at_double_resolution": list(self.check) if self.check else None,
        }


def _count(r: Raster) -> tuple[int, int]:
    free = ~r.occupancy
    labels, k = ndimage.label(free)
    r.labels = labels
    edge = set(np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]]))) - {0}
    return k, k - len(edge)


def default_box(contour: np.ndarray | None, *, pad: float = BOX_PAD, fallback: float = 4.0) -> tuple:
    """Square box around the contour points, padded; ``[-fallback, fallback]^2`` without any."""
    if contour is None or len(contour) == 0:
        return (-fallback, fallback, -fallback, fallback)
    pts = np.clip(np.asarray(contour, dtype=float), -BOX_LIMIT, BOX_LIMIT)
    lo = pts.min(axis=0) - pad
    hi = pts.max(axis=0) + pad
    c = (lo + hi) / 2
    h = max(float(np.max(hi - lo)) / 2, 1.0)
    return (float(c[0] - h), float(c[0] + h), float(c[1] - h), float(c[1] + h))


def complement_components(samples: np.ndarray, box: Sequence[float], resolution: int = DEFAULT_RESOLUTION, *,
                          check: bool = True, dilation: float = DILATION_RADIUS) -> ComponentCount:
    """Components of the complement of the rasterized samples inside ``box``.

    A component is bounded iff it touches no edge of the box.  With
    ``check`` the count is repeated at twice the resolution and the result
    is flagged unstable when the two disagree.
    """
    r = rasterize(samples, box, resolution, dilation=dilation)
    total, bounded = _count(r)
    out = ComponentCount(total, bounded, int(resolution), raster=r)
    if check:
        r2 = rasterize(samples, box, 2 * resolution, dilation=dilation)
        out.check = _count(r2)
        out.stable = out.check == (total, bounded)
        if not out.stable:
            log.warning("component count changed from %s to %s when doubling the resolution",
                        (total, bounded), out.check)
    return out


# ---------------------------------------------------------------------------
# output

def _dir_str(d: ProjectiveDirection | None) -> str:
    return "" if d is None else str(d)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def csv_text(contour: Sequence[LogPoint] = (), samples: np.ndarray | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    dim = len(contour[0].coords) if len(contour) else (samples.shape[1] if samples is not None and len(samples) else 2)
    w.writerow([f"x{j + 1}" for j in range(dim)] + ["tag", "direction"])
    for p in contour:
        w.writerow([_fmt(v) for v in p.coords] + [p.tag, _dir_str(p.direction)])
    if samples is not None:
        for row in samples:
            w.writerow([_fmt(v) for v in row] + ["amoeba", ""])
    return buf.getvalue()


def _figure(title: str | None):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "amoebakit"
    fig = plt.figure(figsize=(8, 8), dpi=SVG_PIXELS / 8)
    ax = fig.add_axes((0.1, 0.1, 0.85, 0.85))
    if title:
        ax.set_title(title)
    return plt, fig, ax


def _save(plt, fig, path: Path, timestamp: bool):
    meta = {} if timestamp else {"Date": None}
    fig.savefig(path, format="svg", metadata=meta)
    plt.close(fig)


def emit(path: str | Path, *, contour: Sequence[LogPoint] = (), raster: Raster | None = None,
         samples: np.ndarray | None = None, fmt: str | None = None, title: str | None = None,
         timestamp: bool = False) -> Path:
    """Write an SVG figure or a CSV point table.

    SVG layers: the amoeba raster in grey, contour points colored by the
    angle of their direction (hsv), pleat points in black.  The SVG date
    field is only written when ``timestamp`` is set, so output is
    reproducible by default.
    """
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "svg").lower()
    contour = list(contour)
    if fmt == "csv":
        path.write_text(csv_text(contour, samples))
        return path
    if fmt != "svg":
        raise ValueError(f"unknown format {fmt!r}")
    plt, fig, ax = _figure(title)
    if raster is not None:
        x0, x1, y0, y1 = raster.box
        ax.imshow(raster.occupancy, origin="lower", extent=(x0, x1, y0, y1), cmap="Greys",
                  vmin=0, vmax=2.5, interpolation="nearest")
        ax.set_xlim(x0, x1)
        ax.set_ylim(y0, y1)
    plain = [p for p in contour if not p.pleat and len(p.coords) == 2]
    if plain:
        xy = np.array([p.coords for p in plain])
        hue = np.array([_angle(p.direction) / math.pi if p.direction is not None else 0.0 for p in plain])
        ax.scatter(xy[:, 0], xy[:, 1], c=hue, cmap="hsv", vmin=0, vmax=1, s=2, linewidths=0)
    pleats = [p for p in contour if p.pleat and len(p.coords) == 2]
    if pleats:
        xy = np.array([p.coords for p in pleats])
        ax.scatter(xy[:, 0], xy[:, 1], c="black", s=30, zorder=3)
    ax.set_xlabel("log|z1|")
    ax.set_ylabel("log|z2|")
    _save(plt, fig, path, timestamp)
    return path


def plot_curve(path: str | Path, d: LaurentPoly, *, box: Sequence[float] = (-1, 10, -1, 10),
               marks: Sequence[Sequence] = (), resolution: int = 600, title: str | None = None,
               timestamp: bool = False) -> Path:
    """Real zero set of a polynomial in two affine variables, with marked points in red.

    ``d`` may have a third variable, which is set to 1 (the chart ``y3 = 1``).
    """
    path = Path(path)
    n = d.nvars
    if n not in (2, 3):
        raise ValueError("plot_curve needs two or three variables")
    x0, x1, y0, y1 = (float(b) for b in box)
    X, Y = np.meshgrid(np.linspace(x0, x1, resolution), np.linspace(y0, y1, resolution))
    V = np.zeros_like(X)
    deg = d.total_degree()
    for e, c in d.items():
        V += float(c) * X ** e[0] * Y ** e[1]
    # tame the dynamic range without moving the zero set
    V = V / (1 + X * X + Y * Y) ** (deg / 2)
    plt, fig, ax = _figure(title)
    ax.contour(X, Y, V, levels=[0.0], colors="tab:blue", linewidths=1.0)
    if len(marks):
        m = np.array([[float(a) for a in p[:2]] for p in marks])
        ax.scatter(m[:, 0], m[:, 1], c="red", s=30, zorder=3)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_xlabel("y1 / y3")
    ax.set_ylabel("y2 / y3")
    _save(plt, fig, path, timestamp)
    return path
