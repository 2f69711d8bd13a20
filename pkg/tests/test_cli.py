import csv
import io
import json
import subprocess
import sys

import pytest

from xdiscord.cli import FamilySpec, UsageError, compile_k_expr, main

LU_ARGS = ["--a", "0.6717", "--b", "0.125", "--c", "0.125", "--d", "0.0783", "--u", "0", "--v", "0.1"]
BELL_ARGS = ["--a", "0.5", "--b", "0", "--c", "0", "--d", "0.5", "--u", "0.5", "--v", "0"]
FAMILY = ["--a", "0.6717", "--b", "0.125", "--c", "0.125", "--d", "0.0783"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestDiscord:
    def test_bell(self, capsys):
        code, out, _ = run(capsys, "discord", *BELL_ARGS)
        assert code == 0
        assert "Q = 1\n" in out or "Q = 1.00000000000\n" in out
        assert "kind = Horizontal" in out

    def test_lu_json(self, capsys):
        code, out, _ = run(capsys, "discord", *LU_ARGS, "--json")
        rep = json.loads(out)
        assert code == 0
        assert rep["kind"] == "TriangleUpper"
        assert len(rep["povm"]) == 3
        assert rep["z_star"] == pytest.approx(0.368553218483, abs=1e-10)

    def test_json_round_trip_through_state_file(self, capsys, tmp_path):
        _, out, _ = run(capsys, "discord", *LU_ARGS, "--json")
        path = tmp_path / "report.json"
        path.write_text(out)
        code, again, _ = run(capsys, "discord", "--state-file", str(path), "--json")
        assert code == 0
        assert json.loads(again) == json.loads(out)

    def test_trace_violation(self, capsys):
        code, _, err = run(capsys, "discord", "--a", "0.3", "--b", "0.3", "--c", "0.3", "--d", "0.3",
                           "--u", "0", "--v", "0")
        assert code == 2
        assert "TraceNotOne" in err

    def test_missing_parameters(self, capsys):
        code, _, err = run(capsys, "discord", "--a", "0.5")
        assert code == 2 and err.startswith("error:")

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "discord", "--state-file", str(tmp_path / "nope.json"))
        assert code == 2

    def test_family_shortcut(self, capsys):
        code, out, _ = run(capsys, "discord", *FAMILY, "--k", "0.2822", "--json")
        assert code == 0 and json.loads(out)["kind"] == "TriangleUpper"

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "r.txt"
        code, out, _ = run(capsys, "discord", *BELL_ARGS, "--out", str(path))
        assert code == 0 and out == ""
        assert "kind = Horizontal" in path.read_text()


class TestClassify:
    def test_triangle(self, capsys):
        code, out, _ = run(capsys, "classify", *FAMILY, "--k", "0.2822", "--json")
        rep = json.loads(out)
        assert code == 0
        assert rep["convexity"] == "SingleInflection"
        assert rep["ellipse_class"] == "TriangleType"
        assert rep["z_c"] == pytest.approx(0.4807, abs=5e-4)

    def test_text(self, capsys):
        code, out, _ = run(capsys, "classify", *FAMILY, "--k", "0.2839")
        assert code == 0 and "convexity = Convex" in out


class TestCurve:
    @pytest.mark.parametrize("k, sign_changes, sign", [(0.2839, 0, 1), (0.2805, 0, -1), (0.2822, 1, None)])
    def test_d2_column(self, capsys, k, sign_changes, sign):
        code, out, _ = run(capsys, "curve", *FAMILY, "--k", str(k), "--points", "101")
        assert code == 0
        rows = read_csv(out)
        assert list(rows[0]) == ["z", "s_horizontal", "s_vertical", "delta", "d2"]
        d2 = [float(r["d2"]) for r in rows[1:-1]]
        flips = sum(1 for x, y in zip(d2, d2[1:]) if (x > 0) != (y > 0))
        assert flips == sign_changes
        if sign is not None:
            assert all(x * sign > 0 for x in d2)
        assert float(rows[0]["delta"]) == pytest.approx(0.0, abs=1e-12)

    def test_flat_is_input_error(self, capsys):
        code, _, _ = run(capsys, "curve", "--a", "0.25", "--b", "0.25", "--c", "0.25", "--d", "0.25",
                         "--u", "0.1", "--v", "0")
        assert code == 2


class TestSweep:
    def test_bell_diagonal(self, capsys):
        code, out, _ = run(capsys, "sweep", "--a", "0.4", "--b", "0.1", "--c", "0.1", "--d", "0.4",
                           "--kmin", "0", "--kmax", "1", "--kstep", "0.01")
        assert code == 0
        rows = read_csv(out)
        kinds = [r["kind"] for r in rows]
        assert set(kinds) == {"Vertical", "Horizontal"}
        assert sum(int(r["transition"]) for r in rows) == 1

    def test_deterministic_and_parallel(self, capsys):
        argv = ["sweep", *FAMILY, "--kmin", "0.28", "--kmax", "0.285", "--kstep", "0.0005"]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        _, par, _ = run(capsys, *argv, "--jobs", "2")
        assert first == second == par
        kinds = {r["kind"] for r in read_csv(first)}
        assert "TriangleUpper" in kinds

    def test_family_file(self, capsys, tmp_path):
        path = tmp_path / "fam.json"
        path.write_text(json.dumps(dict(a=0.6717, b=0.125, c=0.125, d=0.0783, k1="0", k2="k",
                                        kmin=0.8, kmax=0.8, kstep=0.1)))
        code, out, _ = run(capsys, "sweep", "--family-file", str(path))
        rows = read_csv(out)
        assert code == 0 and len(rows) == 1
        assert float(rows[0]["v"]) == pytest.approx(0.1)
        assert rows[0]["kind"] == "TriangleUpper"

    def test_invalid_family(self, capsys):
        code, _, err = run(capsys, "sweep", *FAMILY, "--kmin", "0", "--kmax", "2", "--kstep", "0.5")
        assert code == 2 and "PositivityViolated" in err

    def test_bad_expression(self, capsys):
        code, _, _ = run(capsys, "sweep", *FAMILY, "--k1", "__import__('os')")
        assert code == 2


class TestAudit:
    def test_small_run_passes(self, capsys):
        code, out, _ = run(capsys, "audit", "--states", "20", "--seed", "1", "--json")
        rep = json.loads(out)
        assert code == 0 and rep["passed"]
        assert rep["lemma_violations"] == 0

    def test_empty(self, capsys):
        code, out, _ = run(capsys, "audit", "--states", "0", "--json")
        rep = json.loads(out)
        assert code == 0 and rep["states"] == 0 and rep["passed"]

    def test_zero_tolerance_fails(self, capsys):
        code, out, _ = run(capsys, "audit", "--states", "10", "--tolerance", "0", "--vn-tolerance", "0")
        assert code == 1
        assert "FAIL" in out


class TestHelpers:
    def test_k_expressions(self):
        assert compile_k_expr("0.8*k")(0.5) == pytest.approx(0.4)
        assert compile_k_expr("0")(0.3) == 0.0
        with pytest.raises(UsageError):
            compile_k_expr("k.real")
        with pytest.raises(UsageError):
            compile_k_expr("1 +")

    def test_family_grid(self):
        fam = FamilySpec(0.6717, 0.125, 0.125, 0.0783, kmin=0.27, kmax=0.30, kstep=1e-4)
        ks = fam.ks()
        assert len(ks) == 301 and ks[0] == 0.27 and ks[-1] == 0.30


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "xdiscord", "discord", *BELL_ARGS, "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["discord"] == pytest.approx(1.0, abs=1e-12)
    proc = subprocess.run([sys.executable, "-m", "xdiscord", "discord", "--a", "2", "--b", "0", "--c", "0",
                           "--d", "0", "--u", "0", "--v", "0"], capture_output=True, text=True)
    assert proc.returncode == 2
