import json

import pytest

from coexist import fixtures
from coexist.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def fixture_path(name):
    return str(fixtures.resources.files(fixtures.__name__).joinpath(name))


def test_verify_pass(capsys):
    code, out = run(capsys, "verify", fixture_path("c2xc3_meet.json"))
    assert code == 0 and out["verification"]["passed"]
    assert out["structural"]["results"]["antitone"] == "pass"
    assert out["tolerances"]["psd_tol"] == 1e-9


def test_verify_penta_bad_pair(capsys):
    code, out = run(capsys, "verify", fixture_path("penta_bad_pair.json"))
    assert code == 1
    [v] = out["verification"]["violations"]
    assert (v["axiom"], v["X"], v["A"]) == ("A3", [], [0, 1])
    assert out["implied"] == [[], [0], [1]]


def test_verify_truncated(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(fixtures.fixture_text("c2xc3_meet")[:40])
    code, out = run(capsys, "verify", str(p))
    assert code == 2 and "malformed" in out["error"]


def test_verify_schema_error(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"algebra": "CHAIN4", "ground": [[5]], "beta": []}))
    code, _ = run(capsys, "verify", str(p))
    assert code == 2


def test_certify(capsys):
    code, out = run(capsys, "certify", fixture_path("chain4_pair.json"))
    assert code == 0 and out["coexistent"]
    assert out["projective_checks"]["passed"]
    assert {tuple(r["A"]) for r in out["range_witnesses"]} == {(0,), (1,)}
    code, out = run(capsys, "certify", fixture_path("penta_bad_pair.json"))
    assert code == 1 and out["coexistent"] is False


def test_certify_qubit(capsys, tmp_path):
    code, beta_doc = run(capsys, "product", fixture_path("qubit_commuting.json"))
    assert code == 0
    p = tmp_path / "beta.json"
    p.write_text(json.dumps(beta_doc["beta"]))
    code, out = run(capsys, "certify", str(p))
    assert code == 0 and out["coexistent"]


def test_oracle(capsys):
    for name in ("CHAIN4", "BOOL2", "PENTA"):
        code, out = run(capsys, "oracle", name, "--max-ground", "2")
        assert code == 0 and out["all_agree"]
    code, out = run(capsys, "oracle", "C2xC3", "--max-ground", "1")
    assert code == 0 and all(r["coexistent"] and r["witness_exists"] for r in out["results"])
    code, out = run(capsys, "oracle", "QUBIT")
    assert code == 2 and "UnsupportedCarrier" in out["error"]
    code, out = run(capsys, "oracle", "C2xC3", "--time-budget", "0.000001")
    assert code == 3 and out["complete"] is False


def test_pair(capsys):
    code, out = run(capsys, "pair", "CHAIN4", "1", "2")
    assert code == 0 and out["witnesses"] == [[0], [1]]
    code, out = run(capsys, "pair", "PENTA", "[1,0]", "[1,1]")
    assert code == 1 and out["exhaustive"] and out["witnesses"] == []
    code, out = run(capsys, "pair", "CHAIN4", "2", "2")
    assert [2] in out["witnesses"]


def test_product_noncommuting(capsys, tmp_path):
    p = tmp_path / "pq.json"
    p.write_text(json.dumps({"algebra": "QUBIT", "ground": [
        [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
        [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]]}))
    code, out = run(capsys, "product", str(p))
    assert code == 1 and out["pair"] == [0, 1] and abs(out["residual"] - 0.5) <= 1e-12


def test_meet_round_trip(capsys, tmp_path):
    code, doc = run(capsys, "meet", "C2xC3", "--ground", "[[1,1],[0,2],[1,0]]")
    assert code == 0
    p = tmp_path / "meet.json"
    p.write_text(json.dumps(doc, sort_keys=True, indent=2))
    code1, rep1 = run(capsys, "verify", str(p))
    code2, rep2 = run(capsys, "verify", str(p))
    assert code1 == code2 == 0 and rep1 == rep2
    assert p.read_text().strip() == fixtures.fixture_text("c2xc3_meet").strip()
    code, out = run(capsys, "meet", "PENTA", "--ground", "[[1,0],[1,1]]")
    assert code == 1 and "MV" in out["error"]


def test_fixtures_listing(capsys):
    code, out = run(capsys, "fixtures")
    assert code == 0
    sizes = {f["name"]: f.get("size") for f in out["fixtures"]}
    assert sizes == {"CHAIN4": 4, "BOOL2": 4, "C2xC3": 6, "PENTA": 5, "QUBIT": None}


def test_env_cap(capsys, monkeypatch):
    monkeypatch.setenv("COEX_MAX_GROUND", "2")
    code, out = run(capsys, "verify", fixture_path("c2xc3_meet.json"))
    assert code == 3


def test_tolerance_flags_echoed(capsys):
    code, out = run(capsys, "product", fixture_path("qubit_commuting.json"),
                    "--psd-tol", "1e-8", "--commute-tol", "1e-11")
    assert code == 0
    assert out["tolerances"] == {"psd_tol": 1e-8, "eq_tol": 1e-8, "commute_tol": 1e-11}
    assert out["verification"]["psd_tolerance"] == 1e-8
