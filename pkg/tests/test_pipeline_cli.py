import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from gapclique.cli import main
from gapclique.errors import GapCliqueError, ParameterError
from gapclique.graph import PartitionedGraph, load_graph, parse_graph
from gapclique.pipeline import run_pipeline
from gapclique.selftest import run_selftest
from gapclique.vcsp import parse_vcsp

GRAPHS = Path(__file__).parent / "fixtures" / "graphs"
TRIANGLE = GRAPHS / "03_triangle.graph"
MINUS = GRAPHS / "04_triangle_minus_edge.graph"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- pipeline -------------------------------------------------------------------

def test_pipeline_triangle():
    rep = run_pipeline(load_graph(TRIANGLE), tiny=True)
    assert rep.ok
    assert rep.get("vcsp.satisfiable") == "True"
    assert rep.get("fglss.max_clique") == rep.get("fglss.K") == "64"
    assert rep.get("fglss.canonical_clique") == "True"
    assert "1/δ < k'" in rep.get("waived")


def test_pipeline_unsat_reports_threshold():
    rep = run_pipeline(load_graph(MINUS), tiny=True)
    assert rep.get("vcsp.satisfiable") == "False"
    assert int(rep.get("fglss.max_clique")) < int(rep.get("fglss.threshold")) == 62
    assert rep.ok and rep.get("status") == "ok"


def test_pipeline_deterministic_and_amplified():
    G = load_graph(TRIANGLE)
    amp = dict(m=3, l=2, r=2, eps=Fraction(15, 16))
    a = run_pipeline(G, tiny=True, seed=4, amplify=amp).text()
    b = run_pipeline(G, tiny=True, seed=4, amplify=amp).text()
    assert a == b
    assert "amplify.max_clique: 3" in a


def test_pipeline_errors_name_stage():
    with pytest.raises(ParameterError):
        run_pipeline(load_graph(TRIANGLE), code="derivative")
    with pytest.raises(GapCliqueError) as info:
        run_pipeline(load_graph(TRIANGLE), tiny=True, amplify=dict(m=3, l=99, r=2, eps=Fraction(1, 4)))
    assert "[disperser]" in str(info.value)


def test_pipeline_strict_refuses_tiny_hadamard():
    with pytest.raises(GapCliqueError) as info:
        run_pipeline(PartitionedGraph([[0], [1]], [(0, 1)]))
    assert "[fglss]" in str(info.value) or "[hash]" in str(info.value)


def test_selftest_passes():
    lines = []
    assert run_selftest(lines.append)
    assert len(lines) == 5 and all(ln.startswith("PASS") for ln in lines)


# -- cli --------------------------------------------------------------------------

def test_cli_encode_hadamard(capsys):
    code, out, _ = run(["encode", "--code", "hadamard", "-k", "2", "--message", "1,0"], capsys)
    assert code == 0
    assert out.splitlines() == ["(0, 0) (0,)", "(0, 1) (0,)", "(1, 0) (1,)", "(1, 1) (1,)"]


def test_cli_test_and_corrupt(capsys):
    code, out, _ = run(["test", "--message", "1,0"], capsys)
    assert code == 0 and "rejected: 0/16" in out
    code, out, _ = run(["test", "--message", "1,0;0,1", "--corrupt", "1/4", "--seed", "2"], capsys)
    assert code == 0 and "rejected: 0/16" not in out


def test_cli_decode(capsys):
    code, out, _ = run(["decode", "--code", "derivative", "--field", "7", "--message", "0,1,2,3",
                        "--target", "psi:1,3"], capsys)
    assert code == 0 and "success: 1470/1470" in out and "expected: 2" in out
    code, out, _ = run(["decode", "--code", "derivative", "--field", "7", "--message", "0,1,2,3",
                        "--target", "psi:1,3", "--delta", "1/7", "--seed", "3"], capsys)
    assert code == 0
    rate = float(out.split("rate: ")[1])
    assert rate >= 1 - 2 / 7


def test_cli_line_code_needs_tiny(capsys):
    code, _, err = run(["test", "--code", "line", "--field", "7", "--message", "0,1,2,3",
                        "--mode", "sampled", "--samples", "20"], capsys)
    assert code == 1 and "9216" in err
    code, out, err = run(["test", "--code", "line", "--field", "7", "--message", "0,1,2,3",
                          "--mode", "sampled", "--samples", "20", "--tiny"], capsys)
    assert code == 0 and "warning" in err and "rejected: 0/20" in out


def test_cli_reductions_chain(tmp_path, capsys):
    vc = tmp_path / "tri.vcsp"
    code, _, _ = run(["reduce-vcsp", TRIANGLE, "--field", "2", "--dim", "1", "-o", vc], capsys)
    assert code == 0
    csp = parse_vcsp(vc.read_text())
    assert csp.k == 3 and csp.dim == 1
    small = tmp_path / "two.vcsp"
    small.write_text("vcsp 2 2 1\nS 0 0\nS 1 0 1\nB 0 1 1\n")
    out_graph = tmp_path / "fg.graph"
    code, _, err = run(["reduce-fglss", small, "--tiny", "-o", out_graph], capsys)
    assert code == 0 and "warning" in err
    G = load_graph(out_graph)
    assert G.k == 16 and G.meta()["waived"] == "1/δ < k'"
    code, out, _ = run(["solve-clique", out_graph], capsys)
    assert code == 0 and "max_clique: 16" in out
    code, _, err = run(["reduce-fglss", small], capsys)
    assert code == 1 and "1/δ < k'" in err


def test_cli_amplify(tmp_path, capsys):
    out_graph = tmp_path / "amp.graph"
    code, _, _ = run(["amplify", TRIANGLE, "--m", "3", "--l", "2", "--r", "2", "--eps", "1/3",
                      "-o", out_graph], capsys)
    assert code == 0
    A = load_graph(out_graph)
    assert A.k == 3
    code, out, _ = run(["solve-clique", out_graph], capsys)
    assert "max_clique: 3" in out


def test_cli_pipeline_and_budget(capsys):
    code, out, _ = run(["pipeline", TRIANGLE, "--tiny"], capsys)
    assert code == 0 and "status: ok" in out
    code, _, err = run(["solve-clique", GRAPHS / "16_random_dense.graph", "--budget", "1"], capsys)
    assert code == 3 and "budget exceeded" in err


def test_cli_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.graph"
    bad.write_text("p kclique 1 1 0\nv 0 0\nv 0 0\n")
    code, _, err = run(["solve-clique", bad], capsys)
    assert code == 1 and "line 3" in err
    code, _, err = run(["solve-clique", tmp_path / "missing.graph"], capsys)
    assert code == 1
    with pytest.raises(SystemExit):
        main(["decode", "--message", "1,0", "--target", "phi:1"])


def test_cli_selftest_subprocess():
    res = subprocess.run([sys.executable, "-m", "gapclique", "selftest"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.count("PASS") == 5
