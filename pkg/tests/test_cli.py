import csv
import io
import json
import math
import os
from pathlib import Path

import pytest

from deltashell.cli import OutputRecord, main

GOLDEN = Path(__file__).parent / "golden"
REGENERATE = os.environ.get("DELTASHELL_REGEN_GOLDEN") == "1"

CASES = {
    "bound_3d": ["bound", "--dimension", "3", "--lambda", "2", "--radius", "1"],
    "scatter_3d": ["scatter", "--dimension", "3", "--lambda", "2", "--radius", "1",
                   "--k-min", "0.5", "--k-max", "3", "--k-steps", "6"],
    "wavefunction_1d": ["wavefunction", "--dimension", "1", "--lambda", "2",
                        "--r-min", "-2", "--r-max", "2", "--r-steps", "9"],
    "oracle_1d": ["oracle", "--dimension", "1", "--lambda", "2"],
}


@pytest.fixture(autouse=True)
def fixed_clock(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _close(a, b):
    if isinstance(a, float) or isinstance(b, float):
        return isinstance(a, (int, float)) and isinstance(b, (int, float)) and math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-14)
    return a == b


def _cell(text):
    try:
        return float(text)
    except ValueError:
        return text


def _same_json(got, want):
    got, want = json.loads(got), json.loads(want)
    for doc in (got, want):
        doc["metadata"]["versions"].pop("python")
    assert got["command"] == want["command"] and got["spec"] == want["spec"]
    assert got["metadata"] == want["metadata"]
    assert len(got["rows"]) == len(want["rows"])
    for g, w in zip(got["rows"], want["rows"]):
        assert list(g) == list(w)
        assert all(_close(g[c], w[c]) for c in w), (g, w)


def _same_csv(got, want):
    got, want = list(csv.reader(io.StringIO(got))), list(csv.reader(io.StringIO(want)))
    assert got[0] == want[0] and len(got) == len(want)
    for g, w in zip(got[1:], want[1:]):
        assert all(_close(_cell(a), _cell(b)) for a, b in zip(g, w)), (g, w)


@pytest.mark.parametrize("fmt", ["json", "csv"])
@pytest.mark.parametrize("case", sorted(CASES))
def test_golden(case, fmt):
    code, out, err = run(CASES[case] + ["--format", fmt])
    assert code == 0, err
    path = GOLDEN / f"{case}.{fmt}"
    if REGENERATE:
        path.write_text(out)
    want = path.read_text()
    (_same_json if fmt == "json" else _same_csv)(out, want)


def test_golden_contents_are_physical():
    bound = json.loads((GOLDEN / "bound_3d.json").read_text())
    assert [r["method"] for r in bound["rows"]] == ["lambert_w", "root_find"]
    assert all(abs(r["residual"]) <= 1e-12 for r in bound["rows"])
    wave = json.loads((GOLDEN / "wavefunction_1d.json").read_text())
    peak = max(wave["rows"], key=lambda r: r["psi"])
    assert peak["r"] == 0.0 and peak["psi"] == 1.0 and peak["region"] == "inside"
    from tests.test_scattering import mp_delta_3d

    scatter = json.loads((GOLDEN / "scatter_3d.json").read_text())
    for row in scatter["rows"]:
        assert abs(math.remainder(row["delta"] - mp_delta_3d(2, 1, row["k"]), math.pi)) <= 1e-13
    oracle = json.loads((GOLDEN / "oracle_1d.json").read_text())
    assert all(r["passed"] for r in oracle["rows"])


def test_json_round_trip():
    _, out, _ = run(CASES["scatter_3d"])
    rec = OutputRecord.from_json(out)
    assert OutputRecord.from_json(rec.to_json()) == rec
    assert json.loads(rec.to_json()) == json.loads(out)


def test_csv_matches_json_exactly():
    _, js, _ = run(CASES["scatter_3d"])
    _, cs, _ = run(CASES["scatter_3d"] + ["--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(cs)))
    for j, c in zip(json.loads(js)["rows"], rows):
        assert {k: float(c[k]) for k in j} == j


def test_output_file(tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run(CASES["bound_3d"] + ["--output", str(target)])
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "bound"


class TestExamples:
    def test_bound_1d(self):
        _, out, _ = run(["bound", "--dimension", "1", "--lambda", "2"])
        assert json.loads(out)["rows"][0]["energy"] == -1.0

    def test_bound_2d(self):
        _, out, _ = run(["bound", "--dimension", "2", "--lambda", "2", "--radius", "1"])
        row = json.loads(out)["rows"][0]
        # root of I0 K0 = 1/2 from mpmath.findroot at 30 digits
        assert abs(row["nu"] - 1.0667181568809435) <= 1e-12 and abs(row["residual"]) <= 1e-12

    def test_scatter_1d(self):
        _, out, _ = run(["scatter", "--dimension", "1", "--lambda", "2", "--k", "1"])
        row = json.loads(out)["rows"][0]
        assert row["transmission"] == 0.5 and row["reflection"] == 0.5

    def test_scatter_sweep(self):
        _, out, _ = run(["scatter", "--dimension", "3", "--lambda", "2", "--radius", "1",
                         "--k-min", "0.1", "--k-max", "5", "--k-steps", "50"])
        rows = json.loads(out)["rows"]
        assert len(rows) == 50
        assert max(r["route_difference"] for r in rows) <= 1e-10

    def test_scatter_circle_node(self):
        _, out, _ = run(["scatter", "--dimension", "2", "--lambda", "2", "--radius", "1",
                         "--k", "2.404825557695773"])
        row = json.loads(out)["rows"][0]
        assert row["re_f"] == row["im_f"] == 0.0

    def test_wavefunction_sphere_continuity(self):
        _, out, _ = run(["wavefunction", "--dimension", "3", "--lambda", "2", "--radius", "1",
                         "--r-min", "0.01", "--r-max", "5", "--r-steps", "100"])
        rows = json.loads(out)["rows"]
        assert len(rows) == 100
        from deltashell.bound_states import bound_nu_3d, wavefunction_3d

        nu = bound_nu_3d(2, 1).nu
        inside = wavefunction_3d(2, 1, nu, 1.0).value
        outside = wavefunction_3d(2, 1, nu, math.nextafter(1.0, 2.0)).value
        assert abs(inside - outside) <= 1e-12

    def test_wavefunction_plane_wave(self):
        k = math.pi
        _, out, _ = run(["wavefunction", "--dimension", "3", "--lambda", "2", "--radius", "1",
                         "--state", "scattering", "--k", repr(k), "--cos-theta", "0.5",
                         "--r-min", "1.5", "--r-max", "4", "--r-steps", "6"])
        for row in json.loads(out)["rows"]:
            phase = 0.5 * k * row["r"]
            assert row["re_psi"] == math.cos(phase) and row["im_psi"] == math.sin(phase)


class TestExitCodes:
    def test_oracle_success(self):
        for argv in (["--dimension", "3", "--lambda", "2", "--radius", "1"],
                     ["--dimension", "3", "--lambda", "0.5", "--radius", "1"]):
            code, out, _ = run(["oracle", *argv])
            assert code == 0
            assert all(r["passed"] for r in json.loads(out)["rows"])
        code, out, _ = run(["oracle", "--dimension", "3", "--lambda", "0.5", "--radius", "1"])
        assert not any("bound" in r["name"] for r in json.loads(out)["rows"])

    def test_oracle_circle(self):
        code, _, _ = run(["oracle", "--dimension", "2", "--lambda", "2", "--radius", "1"])
        assert code == 0

    def test_oracle_failure(self, monkeypatch):
        from deltashell import oracles

        real = oracles.run_all
        broken = oracles.OracleReport.compare("planted", 1.0, 1.5, 1e-3)
        monkeypatch.setattr(oracles, "run_all", lambda spec, profile=None: real(spec) + [broken])
        code, out, _ = run(["oracle", "--dimension", "1", "--lambda", "2"])
        assert code == 1
        rows = json.loads(out)["rows"]
        assert [r["name"] for r in rows if not r["passed"]] == ["planted"]

    @pytest.mark.parametrize("argv", [
        ["bound", "--dimension", "4", "--lambda", "2"],
        ["bound", "--dimension", "3", "--lambda", "-1", "--radius", "1"],
        ["bound", "--dimension", "2", "--lambda", "2"],
        ["scatter", "--dimension", "3", "--lambda", "2", "--radius", "1"],
        ["scatter", "--dimension", "3", "--lambda", "2", "--radius", "1", "--k", "-1"],
        ["frobnicate"],
    ])
    def test_usage(self, argv):
        code, out, err = run(argv)
        assert code == 2 and out == ""
        assert "reason" in json.loads(err.strip().splitlines()[-1])

    def test_no_bound_state(self):
        code, out, err = run(["bound", "--dimension", "3", "--lambda", "0.5", "--radius", "1"])
        assert code == 3 and out == ""
        assert json.loads(err)["reason"] == "no_bound_state"
        code, _, err = run(["wavefunction", "--dimension", "3", "--lambda", "1", "--radius", "1",
                            "--r-min", "0.1", "--r-max", "2"])
        assert code == 3 and json.loads(err)["reason"] == "no_bound_state"

    def test_underflow(self):
        code, _, err = run(["bound", "--dimension", "2", "--lambda", "0.001", "--radius", "1"])
        assert code == 3 and json.loads(err)["reason"] == "bound_state_underflow"


def test_config_defaults_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sphere\ndimension=3\nlambda=2\nradius=1\n")
    code, out, _ = run(["bound", "--config", str(cfg)])
    assert code == 0 and json.loads(out)["spec"]["lambda"] == 2.0
    code, out, _ = run(["bound", "--config", str(cfg), "--lambda", "4"])
    assert code == 0 and json.loads(out)["spec"]["lambda"] == 4.0
