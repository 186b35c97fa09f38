import json
import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qhoeffding import formats
from qhoeffding.channels import random_channel
from qhoeffding.cli import main, parse_float_grid, parse_int_grid
from qhoeffding.ensembles import bernoulli_pair
from qhoeffding.errors import ValidationError
from qhoeffding.functionals import StatePair

DATA = Path(__file__).parent / "data"
REF_STATES = str(DATA / "reference_states.json")
BERN_STATES = str(DATA / "bernoulli_states.json")


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    meta, columns, rows = formats.read_csv(text)
    return meta, columns, rows


def column(columns, rows, name):
    i = columns.index(name)
    return np.array([float(r[i]) for r in rows])


@pytest.fixture
def same_states(tmp_path):
    path = tmp_path / "same.json"
    pair = StatePair(np.eye(2) / 2, np.eye(2) / 2)
    path.write_text(json.dumps(formats.state_pair_to_json(pair)))
    return str(path)


def test_bounds_bernoulli_endpoints(capsys):
    code, out, _ = run(["bounds", "--states", BERN_STATES, "--r-points", "5"], capsys)
    assert code == 0
    meta, cols, rows = table(out)
    r, b = column(cols, rows, "r"), column(cols, rows, "b")
    d_rs, d_sr = column(cols, rows, "D_rho_sigma")[0], column(cols, rows, "D_sigma_rho")[0]
    pair = bernoulli_pair()
    assert_allclose((d_rs, d_sr), (pair.d_rho_sigma, pair.d_sigma_rho), rtol=1e-9)
    assert r[0] == 0 and r[-1] == pytest.approx(d_rs)
    # b(0+) = D(sigma||rho), b(D(rho||sigma)) = 0
    assert_allclose(b[0], d_sr, atol=1e-8)
    assert_allclose(b[-1], 0.0, atol=1e-8)
    assert meta["units"] == "nats" and meta["tool"] == "qhoeffding"


def test_bounds_reference_matches_golden(capsys):
    code, out, _ = run(["bounds", "--states", REF_STATES], capsys)
    assert code == 0
    _, cols, rows = table(out)
    _, gcols, grows = table((DATA / "bounds_reference.csv").read_text())
    assert cols == gcols and len(rows) == len(grows)
    for name in cols:
        assert_allclose(column(cols, rows, name), column(gcols, grows, name), rtol=1e-8, atol=1e-12)


def test_bounds_identical_states_exit_code(same_states, capsys):
    code, _, err = run(["bounds", "--states", same_states], capsys)
    assert code == 2
    assert "D(rho||sigma)" in err and "zero" in err


def test_base2_converts_log_columns(capsys):
    _, nats, _ = run(["bounds", "--states", BERN_STATES, "--r-points", "3"], capsys)
    _, bits, _ = run(["bounds", "--states", BERN_STATES, "--r-points", "3", "--base2"], capsys)
    _, cols, rows_n = table(nats)
    meta, _, rows_b = table(bits)
    assert meta["units"] == "bits"
    assert_allclose(column(cols, rows_b, "b"), column(cols, rows_n, "b") / math.log(2), rtol=1e-9)


def test_sweep_phi_flags(capsys):
    code, out, _ = run(["sweep-phi", "--states", REF_STATES, "--s", "0:1:11"], capsys)
    assert code == 0
    _, cols, rows = table(out)
    assert cols == ["quantity", "parameter", "value", "method", "tolerance_flag"]
    flags = {r[4] for r in rows if r[4]}
    assert flags == {"ok"}
    assert sum(r[0] == "phi" for r in rows) == 11


def test_ns_outputs_reference_pair(capsys, tmp_path):
    out_path = tmp_path / "ns.json"
    code, _, err = run(["ns", "--states", REF_STATES, "--out", str(out_path)], capsys)
    assert code == 0
    assert "residual" in err
    report = json.loads(out_path.read_text())
    assert_allclose(report["classical_pair"]["p"], [0.375, 0.375, 0.125, 0.125], atol=1e-15)
    assert_allclose(report["classical_pair"]["q"], [0.3, 0.2, 0.3, 0.2], atol=1e-15)
    assert report["residual"] < 1e-12


def test_simulate_identical_states_risk_is_one(same_states, capsys):
    code, out, _ = run(["simulate", "--states", same_states, "--n", "1-3", "--delta", "1"], capsys)
    assert code == 0
    _, cols, rows = table(out)
    assert_allclose(column(cols, rows, "risk"), 1.0)


def test_simulate_random_tests(capsys):
    code, out, _ = run(
        ["simulate", "--states", REF_STATES, "--n", "1,2", "--random-tests", "10", "--seed", "3"], capsys
    )
    assert code == 0
    _, cols, rows = table(out)
    assert np.all(column(cols, rows, "risk") <= column(cols, rows, "random_min_risk") + 1e-12)
    assert np.all(column(cols, rows, "slack") >= -1e-10)


def test_probe_matches_tails_on_commuting_pair(capsys):
    _, probe_out, _ = run(["probe", "--states", BERN_STATES, "--a", "0", "--n-max", "8"], capsys)
    _, tails_out, _ = run(["tails", "--states", BERN_STATES, "--b", "0", "--n", "1-8"], capsys)
    _, pcols, prow = table(probe_out)
    _, tcols, trow = table(tails_out)
    proj_p = [(r[pcols.index("n")], r[pcols.index("gapF")], r[pcols.index("gapG")]) for r in prow]
    proj_t = [(r[tcols.index("n")], r[tcols.index("gap_f")], r[tcols.index("gap_g")]) for r in trow]
    assert proj_p == proj_t


def test_probe_golden_bytes(tmp_path, capsys):
    out = tmp_path / "probe.csv"
    args = ["probe", "--states", REF_STATES, "--a", "0", "--n-max", "10", "--seed", "0", "--out", str(out)]
    assert main(args) == 0
    assert out.read_bytes() == (DATA / "probe_reference.csv").read_bytes()


def test_tails_classical_input(tmp_path, capsys):
    path = tmp_path / "cp.json"
    path.write_text(json.dumps({"support": [[0, 0], [1, 1]], "p": [0.5, 0.5], "q": [0.25, 0.75]}))
    code, out, _ = run(["tails", "--classical", str(path), "--n", "2"], capsys)
    assert code == 0
    _, cols, rows = table(out)
    assert_allclose(column(cols, rows, "f_n"), [0.25])
    assert_allclose(column(cols, rows, "g_n"), [0.4375])


def test_tails_cap_exit_code(capsys):
    code, _, err = run(["tails", "--states", REF_STATES, "--n", "200", "--cap", "1000"], capsys)
    assert code == 3
    assert "cap" in err


def test_probe_cap_exit_code(capsys):
    code, _, _ = run(["probe", "--states", REF_STATES, "--n-max", "6", "--cap", "32"], capsys)
    assert code == 3


def test_channel_check_random_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["channel-check", "--states", REF_STATES, "--random", "200", "--seed", "7"]
    code, _, err = run(base + ["--out", str(a)], capsys)
    assert code == 0
    assert "violations: 0/200" in err
    assert run(base + ["--out", str(b), "--workers", "4"], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    _, cols, rows = table(a.read_text())
    assert len(rows) == 200 and {r[cols.index("renyi_flag")] for r in rows} == {"ok"}


def test_channel_check_from_file(tmp_path, capsys):
    path = tmp_path / "ch.json"
    chans = [random_channel(2, 2, 2, seed=s).to_json() for s in range(3)]
    path.write_text(json.dumps({"channels": chans}))
    code, out, _ = run(["channel-check", "--states", REF_STATES, "--channels", str(path)], capsys)
    assert code == 0
    assert len(table(out)[2]) == 3


def test_json_mirror(tmp_path, capsys):
    mirror = tmp_path / "m.json"
    code, out, _ = run(["bounds", "--states", REF_STATES, "--r-points", "3", "--json", str(mirror)], capsys)
    assert code == 0
    data = json.loads(mirror.read_text())
    _, cols, rows = table(out)
    assert data["columns"] == cols
    assert_allclose(np.array(data["rows"], dtype=float), np.array(rows, dtype=float), rtol=1e-9)


@pytest.mark.parametrize(
    "argv",
    [
        ["nonsense"],
        ["bounds", "--r-points", "many"],
        [],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--states", "/nonexistent/states.json"],
        ["bounds"],
        ["bounds", "--states", REF_STATES, "--tol", "-1"],
        ["sweep-phi", "--states", REF_STATES, "--s", "1,0.5"],
        ["channel-check", "--states", REF_STATES],
    ],
)
def test_validation_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_malformed_states_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"rho": {"dim": 2, "re": [[1, 0], [0, 1]]}, "sigma": {"dim": 2, "re": [[1, 0], [0, 0]]}}')
    code, _, err = run(["bounds", "--states", str(path)], capsys)
    assert code == 2 and "trace" in err


def test_no_partial_output_on_error(tmp_path, same_states, capsys):
    out = tmp_path / "out.csv"
    assert main(["bounds", "--states", same_states, "--out", str(out)]) == 2
    assert not out.exists()
    assert os.listdir(tmp_path) == ["same.json"]


def test_grid_parsers():
    assert_allclose(parse_float_grid("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
    assert_allclose(parse_float_grid("0.1,0.2"), [0.1, 0.2])
    assert parse_int_grid("2-4") == [2, 3, 4]
    with pytest.raises(ValidationError):
        parse_int_grid("a,b")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qhoeffding", "ns", "--pair", "reference"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["residual"] < 1e-12
    proc = subprocess.run([sys.executable, "-m", "qhoeffding", "bogus"], capture_output=True, check=False)
    assert proc.returncode == 1
