"""Command line front end.

Every subcommand prints a JSON report (or writes ``report.json`` into
``--out``); figures and point tables go next to it.  Failures print an
error object and exit with a code per failure class.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import upoly
from .amoeba import (
    ContourResult,
    amoeba_samples,
    complement_components,
    contour_directions,
    contour_points,
    default_box,
    emit,
    plot_curve,
    sphere_directions,
)
from .elim import EliminationError, discriminant, to_dense
from .gauss import (
    FiberError,
    ProjectiveDirection,
    fiber,
    gauss_degree,
    gauss_discriminant,
    projection_polynomial,
)
from .localalg import NotIsolated
from .newton import faces, is_nondegenerate, lattice_points, newton_polytope
from .poly import LaurentPoly, ParseError, _natural_key, default_names, parse
from .series import BudgetExceeded, NotGraded, diagonal, expand, expansion_spec, morse_prefactor_check, rate_check
from .singularity import (
    DataError,
    check_multiplicity_budget,
    dehomogenize,
    milnor_number,
    phase_critical_points,
    rational_singular_points,
)
from .solve import PositiveDimensional

log = logging.getLogger(__name__)

SCHEMA = "amoebakit.report/1"
EXAMPLE1 = "z1^2*z2 + z1*z2^2 - z1*z2 + a"
EXAMPLE2 = "1 + z1 + z2 + z3 + 3*z1*z2 + 3*z1*z3 + 3*z2*z3 + 11*z1*z2*z3"
EXIT_CODES = {"parse": 2, "degeneracy": 3, "elimination": 4, "instability": 5}


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class Unstable(ArithmeticError):
    pass


def _classify(exc: BaseException) -> str:
    if isinstance(exc, CliError):
        return exc.kind
    if isinstance(exc, (ParseError, json.JSONDecodeError)):
        return "parse"
    if isinstance(exc, (DataError, NotGraded)):
        return "degeneracy"
    if isinstance(exc, FiberError) and "degenerate" in str(exc):
        return "degeneracy"
    if isinstance(exc, (EliminationError, PositiveDimensional, NotIsolated, FiberError)):
        return "elimination"
    if isinstance(exc, (Unstable, BudgetExceeded)):
        return "instability"
    if isinstance(exc, (ValueError, ZeroDivisionError)):
        return "parse"
    return "elimination"


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    command: str
    poly: str | None = None
    vars: str | None = None
    y: str | None = None
    a: str | None = None
    box: str | None = None
    res: int = 400
    steps: int = 720
    kmax: int = 200
    nu: str | None = None
    q: str | None = None
    seed: int = 0
    out: str | None = None
    format: str = "svg,csv"
    budget: bool = False
    timestamp: bool = False

    @property
    def formats(self) -> list[str]:
        return [f.strip().lower() for f in self.format.split(",") if f.strip()]


def _fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise CliError("parse", f"cannot read {what} {text!r} as a rational number") from None


def _ints(text: str, what: str) -> tuple:
    try:
        return tuple(int(t) for t in text.replace(":", ",").split(","))
    except ValueError:
        raise CliError("parse", f"cannot read {what} {text!r} as integers") from None


def _box(text: str | None):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 4:
        raise CliError("parse", "--box needs x0,x1,y0,y1")
    vals = [float(_fraction(p, "box corner")) for p in parts]
    if vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise CliError("parse", "--box corners must satisfy x0 < x1 and y0 < y1")
    return tuple(vals)


def load_poly(cfg: RunConfig) -> tuple[LaurentPoly, tuple]:
    """The polynomial of the run, with the parameter ``a`` substituted if given."""
    if not cfg.poly:
        raise CliError("parse", "--poly is required")
    text = cfg.poly
    if cfg.vars:
        names = [v.strip() for v in cfg.vars.split(",") if v.strip()]
    else:
        names = [v for v in _names_of(text) if v != "a"]
    uses_a = "a" in _names_of(text) and "a" not in names
    if uses_a:
        if cfg.a is None:
            raise CliError("parse", "the polynomial uses the parameter a; pass --a")
        p = parse(text, names + ["a"]).substitute(len(names), _fraction(cfg.a, "--a"))
    else:
        p = parse(text, names)
    if p.is_zero:
        raise CliError("parse", "the polynomial is zero")
    return p, tuple(names)


def _names_of(text: str) -> list:
    return sorted(set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text)), key=_natural_key)


def _ynames(n: int) -> tuple:
    return default_names(n, "y")


def _clean(x: float) -> float:
    x = float(x)
    return x if x == 0 or not math.isfinite(x) else float(f"{x:.12g}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_polytope(cfg: RunConfig) -> dict:
    f, names = load_poly(cfg)
    P = newton_polytope(f)
    fs = faces(P)
    report = {
        "polynomial": f.to_str(names),
        "polytope": P.to_dict(),
        "faces": [fc.to_dict() for fc in fs],
    }
    if 1 <= f.nvars <= 3:
        report["nondegeneracy"] = is_nondegenerate(f).to_dict()
    return report


def cmd_degree(cfg: RunConfig) -> dict:
    f, names = load_poly(cfg)
    return {"polynomial": f.to_str(names), "degree": gauss_degree(f)}


def _binary_report(d0: LaurentPoly) -> dict:
    """``D(lambda) = d0(lambda, 1)`` with its rational roots and real root count."""
    D = dehomogenize(d0)
    dense = to_dense(D, 0)
    roots = upoly.rational_roots(dense)
    return {
        "D_lambda": D.to_str(("lambda",)),
        "rational_roots": [str(r) for r in roots],
        "real_root_count": upoly.count_real_roots(dense),
    }


def _singular_report(d0: LaurentPoly, seed: int) -> list:
    d = dehomogenize(d0)
    out = []
    for p in rational_singular_points(d):
        g = milnor_number(d, p, seed=seed)
        out.append(g.to_dict())
    return out


def cmd_discriminant(cfg: RunConfig) -> dict:
    f, names = load_poly(cfg)
    res = gauss_discriminant(f)
    n = f.nvars
    report = {"polynomial": f.to_str(names), "discriminant": res.to_dict(_ynames(n))}
    if n == 2:
        report["binary_form"] = _binary_report(res.d0)
    else:
        report["chart"] = f"y{n} = 1"
        report["singular_points"] = _singular_report(res.d0, cfg.seed)
    return report


def _direction(cfg: RunConfig, n: int) -> ProjectiveDirection:
    if not cfg.y:
        raise CliError("parse", "--y is required, e.g. --y 1:3")
    try:
        y = ProjectiveDirection.parse(cfg.y)
    except ValueError as exc:
        raise CliError("parse", str(exc)) from None
    if y.n != n:
        raise CliError("parse", f"--y has {y.n} coordinates, the polynomial has {n} variables")
    return y


def _fiber_report(f: LaurentPoly, y: ProjectiveDirection) -> dict:
    fb = fiber(f, y)
    crit = phase_critical_points(f, y)
    return {
        "direction": str(y),
        "fiber": fb.to_dict(),
        "critical_points": [c.to_dict() for c in crit],
    }


def cmd_fiber(cfg: RunConfig) -> dict:
    f, names = load_poly(cfg)
    y = _direction(cfg, f.nvars)
    report = {"polynomial": f.to_str(names), **_fiber_report(f, y)}
    if cfg.budget:
        report["budget"] = check_multiplicity_budget(f, y, seed=cfg.seed).to_dict()
    return report


def _contour(f: LaurentPoly, cfg: RunConfig, extra=()) -> ContourResult:
    dirs = contour_directions(cfg.steps) if f.nvars == 2 else sphere_directions(cfg.steps)
    seen = {d.coords for d in dirs}
    dirs += [d for d in extra if d.coords not in seen]
    return contour_points(f, dirs)


def _contour_summary(c: ContourResult) -> dict:
    return {
        "points": len(c.points),
        "pleats": [
            {"direction": str(p.direction), "log": [_clean(v) for v in p.coords], "multiplicity": p.multiplicity}
            for p in c.pleats
        ],
        "failures": [{"direction": str(d), "message": m} for d, m in c.failures],
    }


def _pleat_directions(f: LaurentPoly) -> list:
    """Rational real points of the discriminant (curves only), to mark pleats."""
    if f.nvars != 2:
        return []
    try:
        d0 = gauss_discriminant(f).d0
    except (EliminationError, FiberError, PositiveDimensional):
        return []
    return [ProjectiveDirection([r, 1]) for r in upoly.rational_roots(to_dense(dehomogenize(d0), 0))]


def cmd_contour(cfg: RunConfig) -> dict:
    f, names = load_poly(cfg)
    c = _contour(f, cfg, _pleat_directions(f))
    report = {"polynomial": f.to_str(names), "directions": cfg.steps, "contour": _contour_summary(c)}
    if cfg.out:
        files = []
        if "csv" in cfg.formats:
            files.append(emit(Path(cfg.out) / "contour.csv", contour=c.points, fmt="csv").name)
        if "svg" in cfg.formats and f.nvars == 2:
            files.append(emit(Path(cfg.out) / "contour.svg", contour=c.points, fmt="svg",
                              timestamp=cfg.timestamp).name)
        report["files"] = files
    return report


def _amoeba(f: LaurentPoly, cfg: RunConfig, c: ContourResult | None):
    box = _box(cfg.box) or default_box(c.array() if c is not None else None)
    samples = amoeba_samples(f, box)
    comp = complement_components(samples, box, cfg.res)
    inside = None
    if c is not None and len(c):
        A = c.array()
        r = comp.raster
        _, _, ins = r.cell_of(A)
        inside = bool(r.contains(A[ins]).all())
    return box, samples, comp, inside


def _components_report(f: LaurentPoly, comp) -> dict:
    """Observed counts next to the lattice point bounds (all / interior points of the polytope)."""
    P = newton_polytope(f)
    pts = lattice_points(P)
    interior = [p for p in pts if not P.tight_facets(p)] if P.dim == f.nvars else []
    return {**comp.to_dict(), "lattice_point_bound": len(pts), "bounded_bound": len(interior)}


def _thin(samples, limit: int = 20000):
    step = max(1, len(samples) // limit)
    return samples[::step]


def cmd_amoeba(cfg: RunConfig) -> dict:
    f, names = load_poly(cfg)
    if f.nvars != 2:
        raise CliError("parse", "amoeba rendering needs a polynomial in two variables")
    c = _contour(f, cfg, _pleat_directions(f)) if gauss_degree(f) > 0 else ContourResult([])
    box, samples, comp, inside = _amoeba(f, cfg, c)
    report = {
        "polynomial": f.to_str(names),
        "box": [_clean(b) for b in box],
        "samples": int(len(samples)),
        "components": _components_report(f, comp),
        "contour": _contour_summary(c),
        "contour_inside_raster": inside,
    }
    if cfg.out:
        files = []
        if "svg" in cfg.formats:
            files.append(emit(Path(cfg.out) / "amoeba.svg", contour=c.points, raster=comp.raster, fmt="svg",
                              timestamp=cfg.timestamp).name)
        if "csv" in cfg.formats:
            files.append(emit(Path(cfg.out) / "amoeba.csv", contour=c.points, samples=_thin(samples),
                              fmt="csv").name)
        report["files"] = files
    if comp.stable is False:
        raise Unstable(f"component count changed between resolution {cfg.res} and {2 * cfg.res}")
    return report


def cmd_series(cfg: RunConfig) -> dict:
    f, names = load_poly(cfg)
    n = f.nvars
    nu = _ints(cfg.nu, "--nu") if cfg.nu else (0,) * n
    q = _ints(cfg.q, "--q") if cfg.q else (1,) * n
    if len(nu) != n or len(q) != n:
        raise CliError("parse", f"--nu and --q need {n} entries")
    spec = expansion_spec(f, nu)
    top = tuple(cfg.kmax * x for x in q)
    budget = spec.level(tuple(a + b for a, b in zip(top, nu)))
    if budget < 0:
        raise BudgetExceeded(f"q = {q} is not in the cone of the expansion at {nu}")
    seq = diagonal(expand(spec, budget, target=top), q, cfg.kmax)
    rate = rate_check(f, nu, q, cfg.kmax)
    report = {
        "polynomial": f.to_str(names),
        "expansion": spec.to_dict(),
        "diagonal_head": [str(c) for c in seq[:8]],
        "rate": rate.to_dict(),
    }
    try:
        report["prefactor"] = morse_prefactor_check(f, nu, q, cfg.kmax).to_dict()
    except FiberError as exc:
        report["prefactor"] = {"error": str(exc)}
    if cfg.out and "csv" in cfg.formats:
        path = Path(cfg.out) / "diagonal.csv"
        lines = ["k,c_kq,value"] + [f"{k},{c},{_float_str(c)}" for k, c in enumerate(seq)]
        path.write_text("\n".join(lines) + "\n")
        report["files"] = [path.name]
    return report


def _float_str(c) -> str:
    c = Fraction(c)
    try:
        return f"{float(c):.12g}"
    except OverflowError:
        return "inf" if c > 0 else "-inf"


# ---------------------------------------------------------------------------
# scripted examples

def _example1_symbolic() -> dict:
    fs = parse(EXAMPLE1, ["z1", "z2", "a"])
    P = projection_polynomial(fs, 0, nparams=1)
    D = discriminant(P, 0)
    ring = ("z1", "z2", "y1", "y2", "a")
    return {"resultant": P.to_str(ring), "discriminant": D.to_str(ring)}


def cmd_example1(cfg: RunConfig) -> dict:
    a = cfg.a if cfg.a is not None else "3/100"
    sub = RunConfig(**{**cfg.__dict__, "poly": EXAMPLE1, "vars": "z1,z2", "a": a})
    f, names = load_poly(sub)
    report = {
        "example": 1,
        "a": str(_fraction(a, "--a")),
        "polynomial": f.to_str(names),
        "degree": gauss_degree(f),
        "nondegeneracy": is_nondegenerate(f).to_dict(),
        "symbolic": _example1_symbolic(),
    }
    disc = gauss_discriminant(f)
    report["discriminant"] = disc.to_dict(_ynames(2))
    binary = _binary_report(disc.d0)
    report["binary_form"] = binary
    ramification = []
    for r in binary["rational_roots"]:
        y = ProjectiveDirection([Fraction(r), 1])
        entry = _fiber_report(f, y)
        entry["budget"] = check_multiplicity_budget(f, y, disc.d0, seed=cfg.seed).to_dict()
        ramification.append(entry)
    report["ramification_fibers"] = ramification
    y = ProjectiveDirection([1, 3]) if cfg.y is None else _direction(cfg, 2)
    report["sample_fiber"] = _fiber_report(f, y)
    c = _contour(f, sub, [ProjectiveDirection([Fraction(r), 1]) for r in binary["rational_roots"]])
    box, samples, comp, inside = _amoeba(f, sub, c)
    report["amoeba"] = {
        "box": [_clean(b) for b in box],
        "components": _components_report(f, comp),
        "contour": _contour_summary(c),
        "contour_inside_raster": inside,
    }
    if cfg.out:
        files = []
        if "svg" in cfg.formats:
            files.append(emit(Path(cfg.out) / "example1_amoeba.svg", contour=c.points, raster=comp.raster,
                              fmt="svg", title=f"a = {report['a']}", timestamp=cfg.timestamp).name)
        if "csv" in cfg.formats:
            files.append(emit(Path(cfg.out) / "example1_contour.csv", contour=c.points, fmt="csv").name)
        report["files"] = files
    return report


def cmd_example2(cfg: RunConfig) -> dict:
    f = parse(EXAMPLE2, ["z1", "z2", "z3"])
    names = ("z1", "z2", "z3")
    report = {
        "example": 2,
        "polynomial": f.to_str(names),
        "degree": gauss_degree(f),
        "nondegeneracy": is_nondegenerate(f).to_dict(),
    }
    disc = gauss_discriminant(f)
    d0 = disc.d0
    report["discriminant"] = disc.to_dict(_ynames(3))
    report["d0_vertices"] = [list(v) for v in newton_polytope(d0).vertices]
    report["singular_points"] = _singular_report(d0, cfg.seed)
    y = ProjectiveDirection([1, 3, 1]) if cfg.y is None else _direction(cfg, 3)
    report["sample_fiber"] = _fiber_report(f, y)
    if cfg.out and "svg" in cfg.formats:
        marks = [tuple(Fraction(c) for c in p["point"]) for p in report["singular_points"]]
        plot_curve(Path(cfg.out) / "example2_discriminant.svg", d0, box=(-1, 10, -1, 10), marks=marks,
                   title="d(l1, l2, 1) = 0", timestamp=cfg.timestamp)
        report["files"] = ["example2_discriminant.svg"]
    return report


COMMANDS = {
    "polytope": (cmd_polytope, "Newton polytope, faces, lattice points and nondegeneracy"),
    "degree": (cmd_degree, "degree of the logarithmic Gauss map"),
    "discriminant": (cmd_discriminant, "discriminant of the Gauss map with singular points"),
    "fiber": (cmd_fiber, "fiber over a direction, with critical point classification"),
    "contour": (cmd_contour, "contour points (CSV/SVG)"),
    "amoeba": (cmd_amoeba, "amoeba raster, complement components (CSV/SVG)"),
    "series": (cmd_series, "diagonal coefficients and growth rate"),
    "example1": (cmd_example1, "scripted pipeline for z1^2 z2 + z1 z2^2 - z1 z2 + a"),
    "example2": (cmd_example2, "scripted pipeline for the cube example in three variables"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("parse", message)


VALUE_OPTIONS = ("--a", "--y", "--box", "--nu", "--q")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """``--a -9/10`` would be read as two options; rewrite it as ``--a=-9/10``."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_OPTIONS and i + 1 < len(argv) and re.match(r"-[\d.]", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="amoebakit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file with default values for the options below")
        p.add_argument("--poly", help="polynomial text, e.g. 'z1^2*z2 + z1*z2^2 - z1*z2 + a'")
        p.add_argument("--vars", help="comma separated variable names (default: inferred)")
        p.add_argument("--y", help="direction, e.g. 1:3 or 1:3:1")
        p.add_argument("--a", help="value of the parameter a (rational)")
        p.add_argument("--box", help="raster box x0,x1,y0,y1")
        p.add_argument("--res", type=int, help="raster cells per axis (default 400)")
        p.add_argument("--steps", type=int, help="number of contour directions (default 720)")
        p.add_argument("--kmax", type=int, help="length of the diagonal sequence (default 200)")
        p.add_argument("--nu", help="lattice point of the expansion, e.g. 0,0")
        p.add_argument("--q", help="diagonal direction, e.g. 1,1")
        p.add_argument("--seed", type=int, help="seed for randomized coordinate changes (default 0)")
        p.add_argument("--out", help="output directory for report.json and figures")
        p.add_argument("--format", help="comma separated file formats: svg,csv (default both)")
        p.add_argument("--budget", action="store_true", default=None,
                       help="fiber: also compare with the discriminant multiplicity")
        p.add_argument("--timestamp", action="store_true", default=None,
                       help="write the creation date into SVG files")
    return ap


def make_config(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if ns.config:
        try:
            values = json.loads(Path(ns.config).read_text())
        except OSError as exc:
            raise CliError("parse", f"cannot read config: {exc}") from None
        if not isinstance(values, dict):
            raise CliError("parse", "the config file must contain a JSON object")
        unknown = set(values) - set(RunConfig.__dataclass_fields__) - {"command"}
        if unknown:
            raise CliError("parse", f"unknown config keys: {sorted(unknown)}")
        values = {k: (str(v) if k in ("a", "y", "nu", "q") and v is not None else v) for k, v in values.items()}
    for k in RunConfig.__dataclass_fields__:
        v = getattr(ns, k, None)
        if v is not None and k != "command":
            values[k] = v
    values["command"] = ns.command
    cfg = RunConfig(**values)
    for k in ("res", "steps", "kmax"):
        if getattr(cfg, k) < 1:
            raise CliError("parse", f"--{k} must be positive")
    return cfg


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    cfg = None
    command = argv[0] if argv and argv[0] in COMMANDS else None
    try:
        ns = build_parser().parse_args(argv)
        command = ns.command
        cfg = make_config(ns)
        if cfg.out:
            Path(cfg.out).mkdir(parents=True, exist_ok=True)
        fn = COMMANDS[cfg.command][0]
        report = {"schema": SCHEMA, "command": cfg.command, **fn(cfg)}
    except Exception as exc:  # every failure becomes a classified error report
        kind = _classify(exc)
        err = {"schema": SCHEMA, "command": command,
               "error": {"class": kind, "type": type(exc).__name__, "message": str(exc)}}
        text = _dump(err)
        if cfg is not None and cfg.out:
            (Path(cfg.out) / "error.json").write_text(text)
        stdout.write(text)
        log.debug("command failed", exc_info=True)
        return EXIT_CODES[kind]
    text = _dump(report)
    if cfg.out:
        (Path(cfg.out) / "report.json").write_text(text)
    stdout.write(text)
    return 0


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
