import json
import subprocess
import sys

import pytest

from coarse_menger.cli import instance_seeds, main
from coarse_menger.core import Graph, dumps, graph_to_doc
from coarse_menger.fixtures import comb, path_gtd


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def p3_file(tmp_path):
    return write(tmp_path / "p3.json", {"n": 3, "edges": [[0, 1], [1, 2]], "S": [0], "T": [2]})


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGen:
    def test_walloid_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["gen", "--walloid", "9,5,2,1", "--out", str(a)]) == 0
        assert main(["gen", "--walloid", "9,5,2,1", "--out", str(b)]) == 0
        fa, fb = (a / "walloid_9_5_2_1.json").read_bytes(), (b / "walloid_9_5_2_1.json").read_bytes()
        assert fa == fb
        doc = json.loads(fa)
        assert len(doc["labels"]["base_cycles"]) == 9
        assert not list(a.glob("*.tmp"))

    @pytest.mark.parametrize("argv", [
        ["gen", "--grid", "3,3"],
        ["gen", "--surface", "5,4,1,1,1,0"],
        ["gen", "--random", "12,0.6", "--seed", "4"],
        ["gen", "--connector", "1,1"],
        ["gen", "--walloid", "4,4,2,0", "--plant", "S:pocket(1):1", "--plant", "T:pocket(2):1"],
    ])
    def test_variants(self, argv, capsys):
        code, out, _ = run(argv, capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["n"] > 0

    def test_dot(self, capsys):
        code, out, _ = run(["gen", "--walloid", "4,4,1,0", "--format", "dot"], capsys)
        assert code == 0 and out.startswith("graph walloid_4_4_1_0 {")

    @pytest.mark.parametrize("argv", [
        ["gen"],
        ["gen", "--grid", "3"],
        ["gen", "--walloid", "3,4,0,0"],
        ["gen", "--grid", "2,2", "--walloid", "4,4,0,0"],
        ["gen", "--walloid", "4,4,1,0", "--plant", "S-pocket"],
        ["gen", "--grid", "2,2", "--format", "csv"],
        ["frobnicate"],
    ])
    def test_input_errors(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == 2


class TestSolvers:
    def test_duality_p3(self, p3_file, capsys):
        code, out, _ = run(["duality", "--graph", p3_file, "--d", "1", "--k", "2"], capsys)
        assert code == 0
        (row,) = json.loads(out)["rows"]
        assert (row["nu"], row["tau"]) == (1, 1)
        assert "wall_s" not in row

    def test_timing_column(self, p3_file, capsys):
        code, out, _ = run(["pack", "--graph", p3_file, "--timing"], capsys)
        assert code == 0 and "wall_s" in json.loads(out)["rows"][0]

    def test_csv_sweep(self, p3_file, capsys):
        code, out, _ = run(["cover", "--graph", p3_file, "--d", "0,1,2", "--format", "csv"], capsys)
        lines = out.strip().splitlines()
        assert code == 0 and lines[0].startswith("instance,n,m,d,k,nu,tau")
        assert len(lines) == 4

    def test_random_sweep_is_deterministic(self, tmp_path):
        argv = ["duality", "--random", "14,0.6,3", "--d", "1,2", "--k", "2", "--seed", "9"]
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        names = sorted(p.name for p in a.iterdir())
        assert names == sorted(p.name for p in b.iterdir())
        assert len(names) == 1 + 3 * 2 * 2
        for name in names:
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_overrides_terminals(self, p3_file, capsys):
        code, out, _ = run(["pack", "--graph", p3_file, "--S", "1", "--T", "1", "--d", "0"], capsys)
        assert code == 0 and json.loads(out)["rows"][0]["nu"] == 1

    @pytest.mark.parametrize("extra", [
        [], ["--random", "x"], ["--random", "10,2.0"], ["--graph", "missing.json"], ["--random", "5,0.5", "--d", "-1"],
    ])
    def test_input_errors(self, extra, capsys):
        assert run(["pack"] + extra, capsys)[0] == 2

    def test_malformed_graph_file(self, tmp_path, capsys):
        bad = write(tmp_path / "bad.json", {"n": 2, "edges": [[0, 5]]})
        assert run(["cover", "--graph", bad], capsys)[0] == 2
        (tmp_path / "junk.json").write_text("{not json")
        assert run(["cover", "--graph", str(tmp_path / "junk.json")], capsys)[0] == 2


class TestVerify:
    def test_good_and_corrupted(self, p3_file, tmp_path, capsys):
        good = write(tmp_path / "good.json", {"kind": "pack", "d": 1, "paths": [[0, 1, 2]], "exact": True})
        code, out, _ = run(["verify", "--graph", p3_file, "--cert", good], capsys)
        assert code == 0 and out.strip() == "ok"
        bad = write(tmp_path / "bad.json", {"kind": "pack", "d": 1, "paths": [[0, 2]], "exact": True})
        code, out, _ = run(["verify", "--graph", p3_file, "--cert", bad], capsys)
        assert code == 1 and out.startswith("rejected")
        cov = write(tmp_path / "cov.json", {"kind": "cover", "d": 0, "centers": [], "exact": True})
        assert run(["verify", "--graph", p3_file, "--cert", cov], capsys)[0] == 1

    def test_missing_graph(self, tmp_path, capsys):
        cert = write(tmp_path / "c.json", {"kind": "pack", "d": 1, "paths": []})
        assert run(["verify", "--cert", cert], capsys)[0] == 2


class TestHarvestCommand:
    def test_comb(self, tmp_path, capsys):
        fix = comb(9, s_at=(2, 5, 8))
        gfile = write(tmp_path / "g.json", graph_to_doc(fix.graph, fix.s, fix.t))
        dfile = write(tmp_path / "d.json", fix.decomp.to_doc())
        code, out, _ = run(["harvest", "--graph", gfile, "--decomp", dfile, "--d", "0", "--k", "3"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["harvest"]["flags"] == {"S": "pack", "T": "cover"}
        assert doc["invading"]["outcome"] == "aux_core"

    def test_bad_decomposition(self, tmp_path, capsys):
        fix = comb(4)
        gfile = write(tmp_path / "g.json", graph_to_doc(fix.graph))
        # edge 1-2 lies in no bag
        dfile = write(tmp_path / "d.json", {"bags": [[0, 1], [2, 3]], "periphery": [0, 2]})
        assert run(["harvest", "--graph", gfile, "--decomp", dfile, "--d", "0", "--k", "1"], capsys)[0] == 2


class TestTreepack:
    def test_path(self, tmp_path, capsys):
        g, gtd = path_gtd(7)
        gfile = write(tmp_path / "g.json", graph_to_doc(g, {0}, {6}))
        tfile = write(tmp_path / "t.json", gtd.to_doc())
        code, out, _ = run(["treepack", "--graph", gfile, "--gtd", tfile, "--d", "1", "--k", "2"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "cover" and doc["cover"] == [0, 1]
        ffile = write(tmp_path / "f.json", {"members": [[0], [3], [6]]})
        code, out, _ = run(["treepack", "--graph", gfile, "--gtd", tfile, "--family", ffile,
                            "--d", "1", "--k", "3"], capsys)
        assert code == 0 and json.loads(out)["kind"] == "pack"

    def test_bad_family(self, tmp_path, capsys):
        g, gtd = path_gtd(3)
        gfile = write(tmp_path / "g.json", graph_to_doc(g, {0}, {2}))
        tfile = write(tmp_path / "t.json", gtd.to_doc())
        ffile = write(tmp_path / "f.json", {"sets": []})
        assert run(["treepack", "--graph", gfile, "--gtd", tfile, "--family", ffile, "--d", "1", "--k", "1"],
                   capsys)[0] == 2


class TestConnectorCommand:
    def test_writes_certificate_that_verifies(self, tmp_path, capsys):
        out = tmp_path / "c"
        assert main(["connector", "--d", "1", "--k", "2", "--out", str(out)]) == 0
        assert {p.name for p in out.iterdir()} == {"graph.json", "connector.json", "pack.json"}
        code, text, _ = run(["verify", "--graph", str(out / "graph.json"), "--cert", str(out / "pack.json")], capsys)
        assert code == 0 and text.strip() == "ok"

    def test_stdout(self, capsys):
        code, out, _ = run(["connector", "--d", "0", "--k", "1"], capsys)
        assert code == 0 and len(json.loads(out)["pack"]["paths"]) == 1

    def test_bad_args(self, capsys):
        assert run(["connector", "--d", "x"], capsys)[0] == 2
        assert run(["connector", "--d", "0", "--k", "0"], capsys)[0] == 2


def test_instance_seeds():
    assert instance_seeds(3, 4) == instance_seeds(3, 4)
    assert instance_seeds(3, 4)[:2] == instance_seeds(3, 2)
    assert instance_seeds(3, 2) != instance_seeds(4, 2)


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "coarse_menger", "gen", "--grid", "2,2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout) == json.loads(dumps(graph_to_doc(Graph(4, frozenset({(0, 1), (2, 3), (0, 2), (1, 3)})))))
