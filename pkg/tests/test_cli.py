import io
import json

import pytest

from tsl.cli import main

G3 = "group G3 { gens: a1, a2, t; rels: t^3, t^-1*a1*t*a2^-1, t^-1*a2*t*a2*a1, [a2,a1]; }\n"
S3 = "group S3 { gens: a, b; rels: a^2, b^3, (a*b)^2; }\n"


def run(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(text, name="g.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_describe_s3(write):
    code, out = run(["describe", write(S3), "--format", "json"])
    info = json.loads(out)
    assert code == 0 and info["order"] == 6 and info["abelianization"] == "C2"


def test_describe_g3_budget(write):
    code, out = run(["describe", write(G3), "--max-cosets", "5000"])
    assert code == 0
    assert "abelianization: C3 x C3" in out and "INFINITE-OR-BUDGET" in out


def test_describe_malformed(write, capsys):
    code, _ = run(["describe", write("group G { gens: a; rels: a^; }")])
    assert code == 2
    assert "line 1" in capsys.readouterr().err


def test_missing_file():
    assert run(["describe", "/nonexistent/file"])[0] == 2


def test_tensor_c2(write):
    code, out = run(["tensor", write("group C2 { gens: a; rels: a^2; }"), "--format", "json"])
    assert code == 0 and json.loads(out)["tensor_order"] == 2


def test_tensor_both_agree(write):
    code, out = run(["tensor", write(S3), "--method", "both"])
    assert code == 0 and "methods agree: yes" in out


def test_tensor_infinite_exit_3(write, capsys):
    code, _ = run(["tensor", write(G3), "--max-cosets", "5000"])
    assert code == 3 and "--mod" in capsys.readouterr().err


def test_family_pipe_into_tensor(monkeypatch):
    code, dsl = run(["family", "gn", "--n", "3", "--mod", "2"])
    assert code == 0
    code, out = run(["tensor", "-", "--format", "json"], stdin=dsl, monkeypatch=monkeypatch)
    report = json.loads(out)
    assert code == 0 and report["tensor_order"] == 24 and report["ok"]


def test_family_ks_e_vector():
    code, out = run(["family", "ks", "--p", "3", "--s", "2", "--format", "json"])
    spec = json.loads(out)["spec"]
    assert code == 0 and spec["e_vector"] == [1, 0, 0, 1, 0, 0]
    assert "a1" in json.loads(out)["presentation"]


def test_family_b1():
    code, out = run(["family", "b1", "--n", "2"])
    assert code == 0 and out.startswith("group B1_2 { gens: a, x, y; rels: a^2*y^-1")


def test_family_bad_params():
    assert run(["family", "ks", "--p", "4"])[0] == 2
    assert run(["family", "gn", "--n", "1"])[0] == 2


def test_family_tensor_flag():
    code, out = run(["family", "gn", "--n", "2", "--mod", "3", "--tensor", "--format", "json"])
    assert code == 0 and json.loads(out)["tensor_order"] == 6


def test_claims_only():
    code, out = run(["claims", "run", "--only", "C01"])
    assert code == 0 and out.splitlines()[0].startswith("C01 CONSISTENT")
    code, out = run(["claims", "run", "--only", "C13"])
    assert code == 0 and "MISMATCH expected={3: 4" in out and "computed={3: 2" in out


def test_claims_strict_allows_known_discrepancies():
    code, _ = run(["claims", "run", "--mode", "symbolic", "--strict-consistent"])
    assert code == 0


def test_claims_unknown_id():
    assert run(["claims", "run", "--only", "C77"])[0] == 2


def test_claims_json_is_sorted_array():
    code, out = run(["claims", "run", "--mode", "symbolic", "--format", "json"])
    data = json.loads(out)
    assert code == 0 and isinstance(data, list)
    assert [d["claim_id"] for d in data] == sorted(d["claim_id"] for d in data)
    assert out == json.dumps(data, sort_keys=True, indent=2) + "\n"
