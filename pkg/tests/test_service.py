import pytest
from fastapi.testclient import TestClient

from hyperseq import templates as T
from hyperseq.proofs import proof_to_obj
from hyperseq.service import app
from hyperseq.syntax import Atom

client = TestClient(app)
p, q = Atom("p"), Atom("q")


def test_check_endpoint():
    proof = proof_to_obj(T.axiom_template("4", p))
    r = client.post("/check", json={"system": "K4", "proof": proof})
    assert r.status_code == 200
    body = r.json()
    assert body["ok"] and body["node_count"] == 5
    assert body["rules_used"]["4r"] == 1

    r = client.post("/check", json={"system": "K", "proof": proof})
    assert r.status_code == 200
    assert not r.json()["ok"]


def test_check_rejects_bad_input():
    r = client.post("/check", json={"system": "XK", "proof": {}})
    assert r.status_code == 422
    r = client.post("/check", json={"system": "K", "proof": {"goal": "p ->", "rule": "nope", "premises": []}})
    assert r.status_code == 422


def test_image_endpoint():
    r = client.post("/image", json={"text": "p, box q => r"})
    assert r.status_code == 200
    assert r.json()["formula"] == "box (p & box q > r)"


def test_prove_endpoint():
    r = client.post("/prove", json={"system": "K4", "goal": "box p -> box box p", "depth": 12})
    assert r.status_code == 200
    body = r.json()
    assert body["outcome"] == "found" and body["proof"] is not None

    r = client.post("/prove", json={"system": "K", "goal": "box p -> box box p", "depth": 10})
    assert r.json()["outcome"] == "exhausted"


def test_validate_endpoint():
    r = client.post("/validate", json={"system": "T", "formula": "box p > p"})
    assert r.json()["valid"] is True
    r = client.post("/validate", json={"system": "K", "formula": "box p > p"})
    body = r.json()
    assert body["valid"] is False
    assert body["countermodel"]["worlds"] >= 1


def test_transform_endpoint():
    proof = proof_to_obj(T.axiom_template("4", p))
    r = client.post("/transform", json={"kind": "regularize", "system": "K4", "proof": proof})
    assert r.status_code == 200
    out = r.json()["proof"]
    check = client.post("/check", json={"system": "K4", "proof": out}).json()
    assert check["ok"] and check["rules_used"].get("4r", 0) == 0

    r = client.post("/transform", json={"kind": "cut-elim", "system": "KB", "proof": proof})
    assert r.status_code == 409  # group gamma refused

    r = client.post("/transform", json={"kind": "to-std", "system": "K4", "proof": out})
    assert r.status_code == 200
    assert r.json()["standard_proof"] is not None


def test_bridge_endpoint():
    steps = [
        {"step": "taut", "formula": "p > p"},
        {"step": "nec", "i": 0},
    ]
    r = client.post("/bridge", json={"system": "K", "steps": steps})
    assert r.status_code == 200
    assert r.json()["conclusion"] == "-> box (p > p)"


def test_systems_endpoint():
    r = client.get("/systems")
    body = r.json()
    assert len(body) == 15
    by_name = {row["name"]: row for row in body}
    assert by_name["S5"]["group"] == "beta"
    assert "52" in by_name["KB5"]["rules"] and "b2" not in by_name["KB5"]["rules"]
    assert by_name["S4"]["frame_conditions"] == ["reflexive", "transitive"]


def test_corpus_endpoint():
    r = client.post("/corpus/run")
    rows = r.json()
    assert len(rows) >= 15
    assert all(row["ok"] for row in rows)


def test_expand_endpoint():
    r = client.post("/expand", json={"name": "4", "a": "p & q"})
    assert r.status_code == 200
    assert r.json()["conclusion"] == "box (p & q) -> box box (p & q)"
    r = client.post("/expand", json={"name": "K", "a": "p"})
    assert r.status_code == 422  # K needs two formulas
