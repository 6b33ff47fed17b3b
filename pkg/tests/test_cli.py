import io
import json
import math
from pathlib import Path

import pytest

from amoebakit.cli import EXIT_CODES, SCHEMA, run

GOLDEN = Path(__file__).parent / "golden"


def call(args, tmp_path):
    buf = io.StringIO()
    code = run([*args, "--out", str(tmp_path)], stdout=buf)
    return code, json.loads(buf.getvalue())


def assert_close(got, want, where="$"):
    """Exact equality except floats, which may differ by 1e-9."""
    if isinstance(want, float) or isinstance(got, float):
        assert isinstance(got, (int, float)) and not isinstance(got, bool), where
        assert math.isclose(got, want, rel_tol=0, abs_tol=1e-9), f"{where}: {got} != {want}"
    elif isinstance(want, dict):
        assert isinstance(got, dict) and sorted(got) == sorted(want), where
        for k in want:
            assert_close(got[k], want[k], f"{where}.{k}")
    elif isinstance(want, list):
        assert isinstance(got, list) and len(got) == len(want), f"{where}: length"
        for i, (g, w) in enumerate(zip(got, want)):
            assert_close(g, w, f"{where}[{i}]")
    else:
        assert got == want, f"{where}: {got!r} != {want!r}"


def test_degree(tmp_path):
    code, rep = call(["degree", "--poly", "z1^2*z2 + z1*z2^2 - z1*z2 + 3/100"], tmp_path)
    assert code == 0 and rep["schema"] == SCHEMA and rep["degree"] == 3
    assert json.loads((tmp_path / "report.json").read_text()) == rep


def test_polytope_reports_volume(tmp_path):
    code, rep = call(["polytope", "--poly", "z1^2*z2 + z1*z2^2 - z1*z2 + a", "--a", "-9/10"], tmp_path)
    assert code == 0
    assert json.dumps(rep).count('"normalized_volume": 3') == 1


def test_fiber_with_budget(tmp_path):
    code, rep = call(["fiber", "--poly", "z1^2*z2 + z1*z2^2 - z1*z2 + a", "--a", "-9/100",
                      "--y", "3:1", "--budget"], tmp_path)
    assert code == 0
    assert rep["budget"]["slack"] == 0


def test_series(tmp_path):
    code, rep = call(["series", "--poly", "1 - z1 - z2", "--nu", "0,0", "--q", "1,1", "--kmax", "60"], tmp_path)
    assert code == 0
    assert (tmp_path / "diagonal.csv").exists()


def test_parse_error_exit_code(tmp_path):
    code, rep = call(["degree", "--poly", "z1 +* z2"], tmp_path)
    assert code == EXIT_CODES["parse"] == 2
    assert rep["error"]["class"] == "parse"
    assert (tmp_path / "error.json").exists()


def test_unknown_option_is_a_parse_error(tmp_path):
    code, rep = call(["degree", "--bogus"], tmp_path)
    assert code == 2 and rep["error"]["class"] == "parse"


def test_degenerate_input_exit_code(tmp_path):
    # an interior lattice point has no convergent geometric expansion
    code, rep = call(["series", "--poly", "z1^2*z2 + z1*z2^2 - z1*z2 + 1", "--nu", "1,1", "--q", "1,1"], tmp_path)
    assert code == EXIT_CODES["degeneracy"] == 3
    assert rep["error"]["type"] == "NotGraded"


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"poly": "1 + z1 + z2 + z3", "seed": 3}))
    code, rep = call(["degree", "--config", str(cfg)], tmp_path)
    assert code == 0 and rep["degree"] == 1


GOLDEN_RUNS = {
    "example1_a-9_10": ["example1", "--a", "-9/10", "--res", "200"],
    "example1_a-9_100": ["example1", "--a", "-9/100", "--res", "200"],
    "example2": ["example2"],
}


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden(name, tmp_path, update_golden):
    code, rep = call(GOLDEN_RUNS[name], tmp_path)
    assert code == 0
    path = GOLDEN / f"{name}.json"
    if update_golden or not path.exists():
        path.write_text(json.dumps(rep, indent=2, ensure_ascii=False) + "\n")
    assert_close(rep, json.loads(path.read_text()))
    for fname in rep["files"]:
        assert (tmp_path / fname).stat().st_size > 0
