import math

import numpy as np
import pytest

from amoebakit.amoeba import (
    amoeba_samples,
    complement_components,
    contour_directions,
    contour_points,
    csv_text,
    default_box,
    emit,
    rasterize,
    sphere_directions,
)
from amoebakit.poly import parse

from conftest import example1


def test_contour_directions_are_rational_and_cover_circle():
    dirs = contour_directions(72, max_den=100)
    assert len(dirs) == 72
    assert all(all(isinstance(c, int) for c in d.coords) for d in dirs)
    assert len({d.coords for d in dirs}) == 72


def test_sphere_directions_in_3d():
    dirs = sphere_directions(20)
    assert len(dirs) == 20 and all(d.n == 3 for d in dirs)


def test_contour_of_line_is_the_whole_amoeba_boundary():
    # 1 + z1 + z2: every fiber has one real point
    f = parse("1 + z1 + z2", ["z1", "z2"])
    c = contour_points(f, contour_directions(36, max_den=50))
    assert not c.failures
    # the fibers over the three edge normals are empty in the torus
    assert len(c) == 33
    for p in c:
        x, y = p.coords
        # real points satisfy |1 +- e^x +- e^y| = 0 for some sign choice
        assert min(abs(1 + s * math.exp(x) + t * math.exp(y)) for s in (1, -1) for t in (1, -1)) < 1e-9


def test_amoeba_samples_lie_on_curve():
    f = example1("3/100")
    pts = amoeba_samples(f, (-4, 4, -4, 4), radial=50, angular=40)
    assert pts.shape[1] == 2 and len(pts) > 1000
    assert np.all(np.isfinite(pts))


def test_line_complement_has_three_components():
    f = parse("1 + z1 + z2", ["z1", "z2"])
    box = (-5, 5, -5, 5)
    cc = complement_components(amoeba_samples(f, box, radial=400, angular=360), box, 200)
    assert (cc.total, cc.bounded) == (3, 0) and cc.stable


def test_contour_inside_raster_example1():
    f = example1("3/100")
    c = contour_points(f, contour_directions(90, max_den=200))
    box = default_box(c.array())
    r = rasterize(amoeba_samples(f, box, radial=400, angular=360), box, 200)
    assert r.contains(c.array()).all()


def test_default_box_fallback_and_padding():
    assert default_box(None) == (-4, 4, -4, 4)
    b = default_box(np.array([[0.0, 0.0], [2.0, 1.0]]))
    assert b[0] <= -2 and b[1] >= 4 and b[1] - b[0] == pytest.approx(b[3] - b[2])


def test_csv_and_svg_output(tmp_path):
    f = example1("3/100")
    c = contour_points(f, contour_directions(24, max_den=50))
    text = csv_text(c.points)
    lines = text.strip().splitlines()
    assert lines[0] == "x1,x2,tag,direction"
    assert len(lines) == len(c) + 1
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    emit(p1, contour=c.points, fmt="svg", title="t")
    emit(p2, contour=c.points, fmt="svg", title="t")
    assert p1.read_bytes() == p2.read_bytes()  # deterministic without a timestamp
    assert p1.read_text().lstrip().startswith("<?xml")
