import json
import math
import subprocess
import sys

import pytest

from hypercolour import Colouring, Hypergraph, init_chain, read_colouring, read_hypergraph
from hypercolour.cli import main
from hypercolour.io import write_colouring, write_hypergraph
from hypercolour.rng import substream_seed


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def edge_file(tmp_path, single_edge):
    p = tmp_path / "edge.hg"
    write_hypergraph(single_edge, p)
    return p


@pytest.fixture
def blocked_dir(tmp_path, capsys):
    d = tmp_path / "blocked"
    run_json(capsys, "gen-blocked", "--m", 7, "--q", 3, "--k", 3, "--seed", 1, "--out", f"{d}/")
    return d


class TestGenerate:
    def test_gen_blocked(self, tmp_path, capsys):
        d = tmp_path / "blocked"
        doc = run_json(capsys, "gen-blocked", "--m", 7, "--q", 3, "--k", 3, "--seed", 1, "--out", f"{d}/")
        assert doc["blocked"] is True and doc["simple"] and doc["proper"]
        assert doc["n"] == 21 and doc["m"] == 42
        H = read_hypergraph(d / "hypergraph.hg")
        X = read_colouring(d / "colouring.col", n=H.n)
        assert X.q == 3 and H.m == 42

    def test_gen_random(self, tmp_path, capsys):
        doc = run_json(
            capsys, "gen-random", "--n", 200, "--k", 3, "--edges", 1600, "--max-deg", 24,
            "--seed", 1, "--out", tmp_path / "desk.hg",
        )
        assert doc["simple"] is True and doc["m"] == 1600 and doc["max_degree"] <= 24
        assert doc["inputs"]["seed"] == 1
        assert read_hypergraph(tmp_path / "desk.hg").m == 1600

    def test_gen_random_infeasible(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "gen-random", "--n", 4, "--k", 3, "--edges", 4, "--max-deg", 3, "--out", tmp_path / "x.hg"
        )
        assert code == 2 and "error" in err

    def test_gen_random_bad_config(self, tmp_path, capsys):
        code, _, _ = run_cli(capsys, "gen-random", "--n", 2, "--k", 3, "--edges", 1, "--max-deg", 1)
        assert code == 1

    def test_gen_blocked_precondition(self, tmp_path, capsys):
        code, _, _ = run_cli(capsys, "gen-blocked", "--m", 4, "--q", 3, "--k", 3, "--out", tmp_path)
        assert code == 2


class TestSample:
    def test_steps_zero_is_start(self, tmp_path, capsys, edge_file):
        start = tmp_path / "start.col"
        write_colouring(Colouring([1, 1, 2], 2), start)
        doc = run_json(
            capsys, "sample", "--hypergraph", edge_file, "--q", 2, "--steps", 0, "--replicas", 3,
            "--start", start, "--emit-colourings",
        )
        assert [r["colouring"] for r in doc["replicas"]] == [[1, 1, 2]] * 3
        assert len({r["hash"] for r in doc["replicas"]}) == 1
        assert doc["proper_rate"] == 1.0

    def test_steps_zero_random_start(self, capsys, edge_file, single_edge):
        doc = run_json(
            capsys, "sample", "--hypergraph", edge_file, "--q", 2, "--steps", 0, "--replicas", 4,
            "--seed", 9, "--emit-colourings",
        )
        for r, rep in enumerate(doc["replicas"]):
            assert rep["colouring"] == init_chain(single_edge, 2, seed=substream_seed(9, r)).colours

    def test_deterministic_bytes(self, capsys, edge_file):
        argv = ["sample", "--hypergraph", edge_file, "--q", 2, "--steps", 50, "--replicas", 5,
                "--seed", 3, "--no-timestamp"]
        _, a, _ = run_cli(capsys, *argv)
        _, b, _ = run_cli(capsys, *argv)
        assert a == b and "timestamp" not in json.loads(a)

    def test_timestamp_present_by_default(self, capsys, edge_file):
        doc = run_json(capsys, "sample", "--hypergraph", edge_file, "--q", 2, "--steps", 1)
        assert "timestamp" in doc

    def test_threads_match_serial(self, capsys, edge_file):
        argv = ["sample", "--hypergraph", edge_file, "--q", 2, "--steps", 20, "--replicas", 4,
                "--seed", 5, "--no-timestamp"]
        _, serial, _ = run_cli(capsys, *argv)
        _, parallel, _ = run_cli(capsys, *argv, "--threads", 2)
        assert json.loads(serial)["replicas"] == json.loads(parallel)["replicas"]

    def test_csv(self, capsys, edge_file):
        code, out, _ = run_cli(
            capsys, "sample", "--hypergraph", edge_file, "--q", 2, "--steps", 10, "--replicas", 2,
            "--format", "csv",
        )
        lines = out.splitlines()
        assert code == 0 and lines[0].startswith("replica,proper") and len(lines) == 3

    def test_missing_file(self, tmp_path, capsys):
        code, _, _ = run_cli(capsys, "sample", "--hypergraph", tmp_path / "nope.hg", "--q", 2, "--steps", 1)
        assert code == 2

    def test_malformed_file(self, tmp_path, capsys):
        p = tmp_path / "bad.hg"
        p.write_text("hg 1\nn 3 k 3\ne 0 1\n")
        code, _, err = run_cli(capsys, "sample", "--hypergraph", p, "--q", 2, "--steps", 1)
        assert code == 2 and "line 3" in err

    def test_start_q_mismatch(self, tmp_path, capsys, edge_file):
        start = tmp_path / "start.col"
        write_colouring(Colouring([1, 1, 2], 3), start)
        code, _, _ = run_cli(capsys, "sample", "--hypergraph", edge_file, "--q", 2, "--steps", 1, "--start", start)
        assert code == 1

    def test_bad_q(self, capsys, edge_file):
        code, _, _ = run_cli(capsys, "sample", "--hypergraph", edge_file, "--q", 1, "--steps", 1)
        assert code == 1

    def test_unknown_flag(self, capsys, edge_file):
        with pytest.raises(SystemExit) as info:
            main(["sample", "--hypergraph", str(edge_file), "--bogus"])
        assert info.value.code == 1

    def test_output_file(self, tmp_path, capsys, edge_file):
        out = tmp_path / "res.json"
        code, stdout, _ = run_cli(capsys, "sample", "--hypergraph", edge_file, "--q", 2, "--steps", 3, "--out", out)
        assert code == 0 and stdout == ""
        assert json.loads(out.read_text())["command"] == "sample"


class TestCouple:
    def test_single_edge(self, capsys, edge_file):
        doc = run_json(
            capsys, "couple", "--hypergraph", edge_file, "--q", 2, "--steps", 2000, "--replicas", 10,
            "--record-every", 1,
        )
        assert doc["t_delta"] == math.ceil(6 * math.log(120))
        assert len(doc["times"]) == 10
        assert doc["coalesced_fraction"] >= 0.9
        for pair in doc["pairs"]:
            if pair["coalesced"]:
                assert pair["hamming"][-1] == 0

    def test_bad_delta(self, capsys, edge_file):
        code, _, _ = run_cli(capsys, "couple", "--hypergraph", edge_file, "--q", 2, "--steps", 5, "--delta", 1.5)
        assert code == 1

    def test_csv(self, capsys, edge_file):
        code, out, _ = run_cli(
            capsys, "couple", "--hypergraph", edge_file, "--q", 2, "--steps", 1000, "--replicas", 3,
            "--format", "csv",
        )
        assert code == 0 and out.splitlines()[0] == "replica,coalesced,time"


class TestTrace:
    def test_blocked_constant(self, capsys, blocked_dir):
        doc = run_json(
            capsys, "trace", "--hypergraph", blocked_dir / "hypergraph.hg", "--q", 3, "--steps", 1000,
            "--checkpoints", 100, "--start", blocked_dir / "colouring.col",
        )
        zs = [c["z_increase"] for c in doc["checkpoints"]]
        assert len(zs) == 11 and all(z == [0] for z in zs)
        assert not doc["breached"]

    def test_k2_rejected(self, tmp_path, capsys):
        p = tmp_path / "g.hg"
        write_hypergraph(Hypergraph(3, 2, [(0, 1)]), p)
        code, _, _ = run_cli(capsys, "trace", "--hypergraph", p, "--q", 2, "--steps", 5)
        assert code == 1


class TestExactCommands:
    def test_mix_exact_csv(self, capsys, edge_file):
        code, out, _ = run_cli(capsys, "mix-exact", "--hypergraph", edge_file, "--q", 2, "--steps", 3, "--format", "csv")
        rows = [line.split(",") for line in out.splitlines()[1:]]
        assert code == 0
        assert float(rows[0][1]) == pytest.approx(0.25)
        assert [abs(float(tv)) < 1e-15 for _, tv in rows[1:]] == [True, True, True]

    def test_components(self, capsys, edge_file):
        doc = run_json(capsys, "components", "--hypergraph", edge_file, "--q", 2)
        assert doc["sizes"] == [6]

    def test_budget(self, capsys, blocked_dir):
        code, _, err = run_cli(capsys, "components", "--hypergraph", blocked_dir / "hypergraph.hg", "--q", 3)
        assert code == 3 and "budget" in err
        code, _, _ = run_cli(
            capsys, "mix-exact", "--hypergraph", blocked_dir / "hypergraph.hg", "--q", 3, "--steps", 1
        )
        assert code == 3

    def test_budget_flag(self, capsys, edge_file):
        code, _, _ = run_cli(capsys, "components", "--hypergraph", edge_file, "--q", 2, "--budget", 4)
        assert code == 3

    def test_check_conditions(self, capsys):
        doc = run_json(
            capsys, "check-conditions", "--n", 30, "--k", 3, "--q", 8, "--max-deg", 4, "--K", 4, "--delta", 0.05
        )
        assert all(c["passed"] for c in doc["checks"].values())
        assert doc["t_delta"] == 426
        assert doc["inputs"]["K"] == "4"

    def test_check_conditions_defer(self, capsys):
        doc = run_json(capsys, "check-conditions", "--n", 30, "--k", 3, "--q", 10, "--max-deg", 4, "--K", 4)
        assert doc["verdict"] == "defer to Jerrum regime"

    def test_check_conditions_bad_K(self, capsys):
        code, _, _ = run_cli(capsys, "check-conditions", "--n", 30, "--k", 3, "--q", 8, "--max-deg", 4, "--K", "abc")
        assert code == 1


class TestDiagnose:
    def test_blocked(self, capsys, blocked_dir):
        doc = run_json(
            capsys, "diagnose", "--hypergraph", blocked_dir / "hypergraph.hg",
            "--colouring", blocked_dir / "colouring.col",
        )
        assert doc["proper"] is True
        assert doc["verdict"] == "bad" and doc["b_max"] == 2

    def test_length_mismatch(self, tmp_path, capsys, edge_file):
        p = tmp_path / "x.col"
        write_colouring(Colouring([1, 2], 2), p)
        code, _, _ = run_cli(capsys, "diagnose", "--hypergraph", edge_file, "--colouring", p)
        assert code == 2


def test_module_entry_point(edge_file):
    proc = subprocess.run(
        [sys.executable, "-m", "hypercolour", "components", "--hypergraph", str(edge_file), "--q", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["sizes"] == [6]
