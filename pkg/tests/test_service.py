import math

import pytest
from fastapi.testclient import TestClient

from weylscan.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_roots_info(client):
    r = client.get("/roots/info", params={"family": "a", "rank": 2})
    assert r.status_code == 200
    doc = r.json()
    assert doc["family"] == "A" and doc["rank"] == 2
    assert doc["cartan"] == [[2, -1], [-1, 2]]
    assert len(doc["positive_roots"]) == 3


def test_roots_info_invalid(client):
    r = client.get("/roots/info", params={"family": "B", "rank": 1})
    assert r.status_code == 400
    assert r.json()["detail"]["code"] == "validation"


def test_weyl_order(client):
    r = client.get("/weyl/order", params={"family": "F", "rank": 4})
    assert r.status_code == 200
    assert r.json() == {"system": "F4", "order": 1152}


def test_weyl_order_cap_exceeded(client):
    r = client.get("/weyl/order", params={"family": "E", "rank": 8})
    assert r.status_code == 409
    assert r.json()["detail"]["code"] == "cap_exceeded"


def test_subroots_table(client):
    r = client.get("/subroots/table", params={"max_rank": 4})
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert {"family": "G2", "rank": 2, "subsystem": "A1", "m": 1,
            "psi_size": 2, "ratio": "1/2"} in rows
    r = client.get("/subroots/table", params={"max_rank": 1})
    assert r.status_code == 400


def test_threshold(client):
    r = client.get("/threshold", params={"system": "G2"})
    assert r.json() == {"system": "G2", "k_star": "7/6",
                        "reducible": False, "factors": ["G2"]}
    r = client.get("/threshold", params={"system": "B3xA1"})
    body = r.json()
    assert body["k_star"] == "3/2"
    assert body["reducible"] is True
    assert body["factors"] == ["B3", "A1"]
    assert client.get("/threshold", params={"system": "Z9"}).status_code == 400


def test_epsilon0(client):
    r = client.get("/epsilon0", params={"system": "A2"})
    assert r.json() == {"system": "A2", "epsilon0": "1/12"}
    assert client.get("/epsilon0", params={"system": "A1xA1"}).status_code == 400


def test_eval(client):
    body = {"system": "A1", "point": [math.pi / 2], "k": "3/2"}
    r = client.post("/eval", json=body)
    assert r.status_code == 200
    out = r.json()
    assert out["k"] == "3/2"
    assert abs(out["A_re"]) < 1e-12
    assert math.isclose(out["A_im"], 2.0, rel_tol=1e-12)
    expected = 8.0 / (math.pi / 2 * math.sqrt(2))
    assert math.isclose(out["integrand"], expected, rel_tol=1e-12)


def test_eval_validation(client):
    r = client.post("/eval", json={"system": "A2", "point": [1.0], "k": "3/2"})
    assert r.status_code == 400
    r = client.post("/eval", json={"system": "A2", "point": [1.0, 1.0], "k": "1/2"})
    assert r.status_code == 400
    r = client.post("/eval", json={"system": "A2", "point": [1.0, 1.0], "k": "zap"})
    assert r.status_code == 400
    # non-regular custom h0
    r = client.post("/eval", json={"system": "A2", "point": [1.0, 1.0],
                                   "k": "2", "h0": [1.0, 0.0]})
    assert r.status_code == 400
    assert "regular" in r.json()["detail"]["message"]


def test_scan_decisive(client):
    body = {"system": "A2", "k": "2", "shells": 6, "samples": 5000, "seed": 1}
    r = client.post("/scan", json=body)
    assert r.status_code == 200
    out = r.json()
    assert out["verdict"] == "converges"
    assert out["k_star"] == "4/3"
    assert out["system"] == "A2"
    assert len(out["shells"]) == 6


def test_scan_validation(client):
    r = client.post("/scan", json={"system": "A2", "k": "2", "shells": 3,
                                   "samples": 5000, "seed": 1})
    assert r.status_code == 400
    r = client.post("/scan", json={"system": "A2", "k": "2", "samples": 10, "seed": 1})
    assert r.status_code == 422  # pydantic bound
    r = client.post("/scan", json={"system": "A1xA1", "k": "2", "samples": 5000,
                                   "seed": 1})
    assert r.status_code == 400


def test_lemma_constants(client):
    r = client.post("/lemma-constants", json={"system": "A2", "grid": 1e-3})
    assert r.status_code == 200
    out = r.json()
    assert out["certified"] is True
    assert out["psi1"] == "A1"
    assert 0 < out["a"] < 1
    assert math.isclose(out["b"], 1 / out["a"] + 1, rel_tol=1e-12)
    assert out["C"] > 0


def test_lemma_constants_coarse_grid_conflict(client):
    r = client.post("/lemma-constants", json={"system": "B3", "grid": 0.5})
    assert r.status_code == 409
    assert r.json()["detail"]["code"] == "certification_failed"


def test_lemma_constants_bad_drop(client):
    r = client.post("/lemma-constants", json={"system": "A2", "drop_index": 5})
    assert r.status_code == 400


def test_verify_lemma1(client):
    r = client.post("/verify/lemma1",
                    json={"system": "B2", "samples": 2000, "seed": 4})
    assert r.status_code == 200
    out = r.json()
    assert out["holds"] is True
    assert out["projection_rank_on_span"] == 1
    assert out["violations_a"] == 0 and out["violations_b"] == 0
    assert out["violations_cone"] == 0


def test_verify_lemma2(client):
    r = client.post("/verify/lemma2",
                    json={"system": "A3", "samples": 2000, "seed": 4})
    out = r.json()
    assert out["holds"] is True
    assert out["violations_C"] == 0
    assert out["pair_checks"] >= 2000


def test_verify_lemma3(client):
    r = client.post("/verify/lemma3", json={"system": "G2"})
    out = r.json()
    assert out["holds"] is True and out["ratio"] == "1/6"
    r = client.post("/verify/lemma3", json={"system": "B3xA1xA1xA1"})
    out = r.json()
    assert out["holds"] is False
    assert any(v["subsystem"] == "B3" for v in out["violations"])


def test_verify_appendix_a(client):
    r = client.post("/verify/appendix-a", json={"max_rank": 4})
    out = r.json()
    assert out["all_ok"] is True
    assert out["instances"] > 10
    assert client.post("/verify/appendix-a", json={"max_rank": 1}).status_code == 400


def test_corollaries(client):
    r = client.get("/corollaries", params={"system": "A2"})
    out = r.json()
    assert out["k_star"] == "4/3"
    assert out["corollary2_exponent"] == "4/1"
    assert client.get("/corollaries", params={"system": "A1xA1"}).status_code == 400


def test_probe_almost_period(client):
    r = client.post("/probe/almost-period",
                    json={"system": "A1", "k": "3/2", "samples": 1000, "seed": 2})
    assert r.status_code == 200
    out = r.json()
    assert out["missed_windows"] == []
    assert out["system"] == "A1"
