"""CLI contract: JSON/CSV schemas, exit codes, determinism, env overrides."""

import json
import math
import time
from pathlib import Path

import pytest

import bidisc.cli as cli
from bidisc.errors import NoConvergence

GOLDEN_SWEEP = Path(__file__).parent / "data" / "sweep_u_2x2.csv"

U_ARGS = ("--p", "0.5,0,0.1,0", "--q", "-0.5,0,0.05,0")
# pinned E1 pair (second coordinates near the rim, first coordinates inside)
E1_ARGS = (
    "--p", "-0.22938912027749195,0.7324745155441587,0.8181999425340435,-0.45081286548172633",
    "--q", "0.013003573392007403,-0.7574327084431901,0.3129682088385097,-0.605786357709826",
)
GOLDEN_SWEEP_ARGS = (
    "sweep",
    "--vary", "p1_re=0.3:0.5:2",
    "--vary", "q1_re=-0.5:-0.3:2",
    "--fixed", "p2_re=0.1",
    "--fixed", "q2_re=0.05",
)


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


# ---------------------------------------------------------------------------
# solve


def test_solve_u_example_payload(capsys):
    code, out = run(capsys, "solve", *U_ARGS)
    assert code == 0
    doc = json.loads(out)
    # one JSON object per line, keys sorted: the machine-readable contract
    assert out == json.dumps(doc, sort_keys=True) + "\n"
    assert doc["schema_version"] == 1
    assert doc["region"] == "U"
    assert doc["value_log"] == math.log(0.25)
    assert doc["value_modulus"] == pytest.approx(0.25, abs=1e-15)
    assert doc["inputs"]["z"] == [[0.0, 0.0], [0.0, 0.0]]
    assert doc["inputs"]["p"] == [[0.5, 0.0], [0.1, 0.0]]
    assert doc["inputs"]["q"] == [[-0.5, 0.0], [0.05, 0.0]]
    assert doc["certificate"]["status"] == "VALID"
    assert "sandwich" not in doc


def test_solve_negative_first_component(capsys):
    # `--q -0.5,...` as two tokens: argparse would read the value as a flag,
    # so the CLI fuses point flags before parsing
    code, out = run(capsys, "solve", "--p", "0.5,0,0.1,0", "--q", "-0.5,0,0.05,0")
    assert code == 0
    assert json.loads(out)["inputs"]["q"] == [[-0.5, 0.0], [0.05, 0.0]]


def test_solve_diagonal_poles_exits_1(capsys):
    code, out = run(capsys, "solve", "--p", "0.3,0.4,0.2,0", "--q", "0.3,0.4,0.2,0")
    assert code == 1
    doc = json.loads(out)
    assert doc["error"] == "DIAGONAL_POLES"
    assert doc["schema_version"] == 1
    assert doc["message"]


def test_solve_pole_outside_disc_exits_1(capsys):
    code, out = run(capsys, "solve", "--p", "1.5,0,0.1,0", "--q", "-0.5,0,0.05,0")
    assert code == 1
    assert json.loads(out)["error"] == "INVALID_POINT"


def test_solve_budget_exhaustion_exits_3(capsys, monkeypatch):
    def starved(problem, config):
        raise NoConvergence("multistart budget exhausted")

    monkeypatch.setattr(cli, "solve", starved)
    code, out = run(capsys, "solve", *U_ARGS)
    assert code == 3
    assert json.loads(out)["error"] == "NO_CONVERGENCE"


def test_solve_thin_pair_exits_2(capsys):
    code, out = run(capsys, "solve", "--p", "0.5,0,0.1,0", "--q", "0.5,0,0.2,0")
    assert code == 2
    doc = json.loads(out)
    assert doc["region"] == "THIN_A"
    assert doc["certificate"]["status"] == "FALLBACK"
    assert doc["certificate"]["fallback"] is not None


def test_solve_oracle_attaches_sandwich(capsys):
    code, out = run(capsys, "solve", *E1_ARGS, "--oracle")
    assert code == 0
    doc = json.loads(out)
    assert doc["region"] == "E1"
    sandwich = doc["sandwich"]
    assert sandwich["width"] < 1e-6
    assert sandwich["contains_value"] is True
    assert sandwich["c_lower"] - 1e-8 <= doc["value_log"] <= sandwich["l_upper"] + 1e-8
    assert {"lower_witness", "upper_witness", "escalations"} <= set(sandwich)


def test_solve_seed_echo_and_env_override(capsys, monkeypatch):
    code, out = run(capsys, "solve", *U_ARGS, "--seed", "7")
    assert code == 0
    assert json.loads(out)["inputs"]["seed"] == 7

    monkeypatch.setenv("BIDISC_SEED", "0x10")
    code, out = run(capsys, "solve", *U_ARGS)
    assert json.loads(out)["inputs"]["seed"] == 16

    # explicit flag beats the environment
    code, out = run(capsys, "solve", *U_ARGS, "--seed", "9")
    assert json.loads(out)["inputs"]["seed"] == 9


def test_solve_rejects_malformed_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("BIDISC_SEED", "banana")
    code, out = run(capsys, "solve", *U_ARGS)
    assert code == 1
    assert json.loads(out)["error"] == "INVALID_POINT"


# ---------------------------------------------------------------------------
# classify


def test_classify_u_example(capsys):
    code, out = run(capsys, "classify", *U_ARGS)
    assert code == 0
    doc = json.loads(out)
    assert doc == {"region": "U", "margin": doc["margin"], "schema_version": 1}
    assert doc["margin"] > 0.1


def test_classify_diagonal_is_a_label_not_an_error(capsys):
    code, out = run(capsys, "classify", "--p", "0.3,0.4,0.2,0", "--q", "0.3,0.4,0.2,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["region"] == "DIAGONAL"
    assert doc["margin"] == 0.0


def test_classify_malformed_point_exits_1(capsys):
    code, out = run(capsys, "classify", "--p", "0.5,0", "--q", "-0.5,0,0.05,0")
    assert code == 1
    assert json.loads(out)["error"] == "INVALID_POINT"


# ---------------------------------------------------------------------------
# sweep


def test_sweep_matches_golden_bytes(capsys, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, out = run(capsys, *GOLDEN_SWEEP_ARGS, "--out", str(out_path))
    assert code == 0
    assert out == ""
    assert out_path.read_bytes() == GOLDEN_SWEEP.read_bytes()


def test_sweep_stdout_identical_to_file(capsys):
    code, out = run(capsys, *GOLDEN_SWEEP_ARGS)
    assert code == 0
    assert out.encode() == GOLDEN_SWEEP.read_bytes()


def test_sweep_rows_in_row_major_order(capsys):
    _, out = run(capsys, *GOLDEN_SWEEP_ARGS)
    rows = [line.split(",")[:2] for line in out.splitlines()[1:]]
    assert rows == [["0", "0"], ["0", "1"], ["1", "0"], ["1", "1"]]


def test_sweep_parallel_matches_serial(capsys, tmp_path):
    out_path = tmp_path / "sweep_mt.csv"
    code, _ = run(capsys, *GOLDEN_SWEEP_ARGS, "--threads", "2", "--out", str(out_path))
    assert code == 0
    assert out_path.read_bytes() == GOLDEN_SWEEP.read_bytes()


def test_sweep_threads_env_default(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BIDISC_THREADS", "2")
    out_path = tmp_path / "sweep_env.csv"
    code, _ = run(capsys, *GOLDEN_SWEEP_ARGS, "--out", str(out_path))
    assert code == 0
    assert out_path.read_bytes() == GOLDEN_SWEEP.read_bytes()

    monkeypatch.setenv("BIDISC_THREADS", "banana")
    code, out = run(capsys, *GOLDEN_SWEEP_ARGS)
    assert code == 1
    assert json.loads(out)["error"] == "INVALID_POINT"


def test_sweep_thin_band_is_contiguous(capsys):
    # slice crossing p1 = q1 at the middle row: that row lands in the thin
    # set and is solved by perturbation, its neighbours are generic
    code, out = run(
        capsys, "sweep",
        "--vary", "p1_re=0.4:0.6:3",
        "--vary", "q2_im=-0.1:0.1:2",
        "--fixed", "q1_re=0.5", "--fixed", "p2_re=0.1", "--fixed", "q2_re=0.2",
    )
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert len(rows) == 6
    by_cell = {(row[0], row[1]): row for row in rows}
    for j in ("0", "1"):
        assert by_cell[("1", j)][10] == "THIN_A"
        assert math.isfinite(float(by_cell[("1", j)][11]))
        assert by_cell[("0", j)][10] != "THIN_A"
        assert by_cell[("2", j)][10] != "THIN_A"


def test_sweep_degenerate_cells_keep_schema(capsys):
    # the (0.2, 0.3) cell collides with the fixed q exactly: the row stays,
    # the region column carries the error tag, numeric columns go nan
    code, out = run(
        capsys, "sweep",
        "--vary", "p1_re=0.1:0.2:2",
        "--vary", "p2_re=0.25:0.3:2",
        "--fixed", "q1_re=0.2", "--fixed", "q2_re=0.3",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "i,j," + ",".join(cli._AXES) + ",region,value_log,residual_max,sandwich_width"
    rows = {tuple(line.split(",")[:2]): line.split(",") for line in lines[1:]}
    assert rows[("1", "1")][10] == "DIAGONAL_POLES"
    assert rows[("1", "1")][11] == "nan"
    assert rows[("1", "1")][12] == "nan"
    assert rows[("0", "1")][10] == "THIN_A"
    assert rows[("1", "0")][10] == "THIN_A"
    assert rows[("0", "0")][10] not in ("THIN_A", "DIAGONAL_POLES")
    assert math.isfinite(float(rows[("0", "0")][11]))


@pytest.mark.parametrize(
    "argv",
    [
        # same axis twice
        ("sweep", "--vary", "p1_re=0:0.5:2", "--vary", "p1_re=0:0.5:2"),
        # only one varying axis
        ("sweep", "--vary", "p1_re=0:0.5:2"),
        # varied and fixed at once
        ("sweep", "--vary", "p1_re=0:0.5:2", "--vary", "q1_re=0:0.5:2", "--fixed", "p1_re=0.3"),
        # unknown axis
        ("sweep", "--vary", "p3_re=0:0.5:2", "--vary", "q1_re=0:0.5:2"),
        # below minimum resolution
        ("sweep", "--vary", "p1_re=0:0.5:1", "--vary", "q1_re=0:0.5:2"),
        # fixed coordinate outside the disc
        ("sweep", "--vary", "p1_re=0:0.5:2", "--vary", "q1_re=0:0.5:2", "--fixed", "p2_re=1.25"),
    ],
)
def test_sweep_rejects_malformed_specs(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 1
    assert json.loads(out)["error"] == "INVALID_POINT"


# ---------------------------------------------------------------------------
# selftest


def test_selftest_quick_passes_fast(capsys):
    started = time.perf_counter()
    code, out = run(capsys, "selftest", "--quick")
    elapsed = time.perf_counter() - started
    assert code == 0
    assert elapsed < 10.0
    lines = out.strip().splitlines()
    assert lines[-1] == "selftest: PASS"
    assert all(line.startswith("PASS ") for line in lines[:-1])
