import io
import json
import subprocess
import sys

import pytest

from simsim.cli import main
from simsim.exactnum import parse_scalar


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def write(path, doc):
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def files(tmp_path):
    return {
        "a": write(tmp_path / "a.json", {"n": 2, "m": 1, "matrices": [[["0", "1"], ["0", "0"]]]}),
        "b": write(tmp_path / "b.json", {"n": 2, "m": 1, "matrices": [[["-1", "1"], ["-1", "1"]]]}),
        "s": write(tmp_path / "s.json", {"S": [["-1", "2"], ["-1", "1"]]}),
        "bad": write(tmp_path / "bad.json",
                     {"matrices": [[["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]]}),
        "vb": write(tmp_path / "vb.json", {"vectors": [["-1", "-1"], ["2", "1"]]}),
        "one": write(tmp_path / "one.json", {"matrices": [[["1"]]]}),
        "zero": write(tmp_path / "zero.json", {"matrices": [[["0"]]]}),
        "dir": tmp_path,
    }


def test_similar_on_nilpotent_example(files):
    code, out, _ = run("decide", files["a"], files["b"], "--seed", 7)
    assert code == 0
    assert "SIMILAR" in out and "S =" in out


def test_condition_c_prints_witness(files):
    code, out, _ = run("condition-c", files["a"], files["b"])
    assert code == 1
    assert "witness: (1, -z)" in out
    assert "dA = 2, dB = 2, dC = 4" in out


def test_commute_names_failing_pair(files):
    code, out, _ = run("commute", files["bad"])
    assert code == 1 and "(0, 1)" in out
    assert run("commute", files["a"])[0] == 0


def test_verify(files):
    assert run("verify", files["a"], files["b"], "--certificate", files["s"])[0] == 0
    ident = write(files["dir"] / "i.json", {"matrix": [["1", "0"], ["0", "1"]]})
    assert run("verify", files["a"], files["b"], "--certificate", ident)[0] == 1


def test_decide_certificate_reconfirmed_by_verify(files):
    code, out, _ = run("decide", files["a"], files["b"], "--json", "--seed", 3)
    assert code == 0
    cert = write(files["dir"] / "cert.json", json.loads(out))
    assert run("verify", files["a"], files["b"], "--certificate", cert)[0] == 0


def test_decide_not_similar_exact(files):
    code, out, _ = run("decide", files["zero"], files["one"], "--json")
    doc = json.loads(out)
    assert code == 1 and doc["result"] == "NOT_SIMILAR_EXACT" and doc["exit_code"] == 1


def test_decide_sampled_exit_code(tmp_path):
    n = 5
    def jordan(blocks):
        M = [["0"] * n for _ in range(n)]
        start = 0
        for size in blocks:
            for i in range(start, start + size - 1):
                M[i + 1][i] = "1"
            start += size
        return M
    a = write(tmp_path / "j5.json", {"matrices": [jordan([5])]})
    b = write(tmp_path / "j32.json", {"matrices": [jordan([3, 2])]})
    code, out, _ = run("decide", a, b, "--trials", 3, "--grid", 100, "--json")
    doc = json.loads(out)
    assert code == 3 and doc["result"] == "NOT_SIMILAR_SAMPLED"
    assert doc["failure_probability_bound"] == pytest.approx((5 / 100) ** 3)


def test_synthesize_and_constant(files):
    code, out, _ = run("synthesize", files["a"], files["b"], "--vectors-b", files["vb"], "--json")
    doc = json.loads(out)
    assert code == 0 and doc["S"] == [["-1", "2"], ["-1", "1"]] and doc["verified"]
    code, out, _ = run("synthesize", files["a"], files["b"])
    assert code == 1 and "(1, -z)" in out
    code, out, _ = run("constant", files["a"], files["b"], "--vectors-b", files["vb"],
                       "--samples", 200, "--json")
    doc = json.loads(out)
    assert code == 0 and doc["inequality"]["passed"]
    assert doc["c"] == pytest.approx(2.6180339887, rel=1e-9)


def test_cyclic_and_annihilator(files, tmp_path):
    code, out, _ = run("cyclic", files["a"], "--json")
    doc = json.loads(out)
    # greedy: e1 is killed by A, so e2 is appended
    assert code == 0 and doc["k"] == 2 and doc["vectors"] == [["1", "0"], ["0", "1"]]
    v = write(tmp_path / "v.json", {"vectors": [["1", "0"]]})
    assert run("cyclic", files["a"], "--vectors", v)[0] == 1
    code, out, _ = run("cyclic", files["a"], "--random", "--trials", 3, "--seed", 2)
    assert code == 0 and "k = 1" in out
    code, out, _ = run("annihilator", files["a"], "--vectors", v, "--max-degree", 2, "--json")
    doc = json.loads(out)
    assert code == 0 and [b["text"] for b in doc["basis"]] == ["(z)", "(z^2)"]


def test_hardy_demo_cli():
    code, out, _ = run("hardy-demo", "--n-max", 5, "--json")
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["c_n"] for r in rows] == pytest.approx([2.0, 4.0, 8.0, 16.0])


@pytest.mark.parametrize("argv", [
    ["decide"],
    ["frobnicate"],
    ["commute", "missing.json"],
    ["decide", "A", "B", "--no-such-flag"],
    ["hardy-demo", "--n-max", "1"],
])
def test_usage_errors(argv, files):
    code, out, err = run(*argv)
    assert code == 2 and out == ""
    assert err.count("\n") == 1 and err.startswith("simsim: error:")


@pytest.mark.parametrize("doc", [
    "not json",
    {"matrices": [[["0.5"]]]},
    {"matrices": [[[0.5]]]},
    {"matrices": [[["1", "2"]]]},
    {"n": 3, "matrices": [[["1", "0"], ["0", "1"]]]},
    {"m": 2, "matrices": [[["1"]]]},
    {"matrices": [[["1/0"]]]},
])
def test_malformed_input(tmp_path, doc):
    p = tmp_path / "x.json"
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    code, _, err = run("commute", p)
    assert code == 2 and err.count("\n") == 1


def test_noncommuting_input_is_an_error_elsewhere(files):
    code, _, err = run("cyclic", files["bad"])
    assert code == 2 and "do not commute" in err


def test_complex_scalars_round_trip(tmp_path):
    a = write(tmp_path / "c.json", {"matrices": [[["1/2+i", "0"], ["0", "-3/4i"]]]})
    code, out, _ = run("decide", a, a, "--json")
    doc = json.loads(out)
    assert code == 0
    for row in doc["certificate"]["S"]:
        for lit in row:
            parse_scalar(lit)
    cert = write(tmp_path / "cert.json", doc)
    assert run("verify", a, a, "--certificate", cert)[0] == 0


def test_deterministic_output(files):
    first = run("decide", files["a"], files["b"], "--seed", 11, "--json")
    assert first == run("decide", files["a"], files["b"], "--seed", 11, "--json")
    assert run("constant", files["a"], files["b"], "--vectors-b", files["vb"]) == \
        run("constant", files["a"], files["b"], "--vectors-b", files["vb"])


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "simsim", "condition-c",
                           str(files["a"]), str(files["b"])], capture_output=True, text=True)
    assert proc.returncode == 1 and "(1, -z)" in proc.stdout
