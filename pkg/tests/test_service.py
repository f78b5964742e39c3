from fastapi.testclient import TestClient

from probilp.service import app
from probilp.synth import SceneConfig, synth_generate

client = TestClient(app)

SCENE = dict(
    bias_body_preds=[["has_object", 2], ["vehicle", 1], ["bridge", 1], ["is_on", 2]],
    tp_confidence=[1.0, 0.0],
    false_detection_rate=0.0,
    miss_rate=0.0,
    label_flip_rate=0.0,
    seed=17,
)

SETTINGS = dict(tester="binary", constrainer="combo", cost="mdl", budget_seconds=60)


def synth_payload(n_pos=4, n_neg=4):
    return {"config": SCENE, "n_pos": n_pos, "n_neg": n_neg}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_synth_learn_eval_flow():
    bundle = client.post("/synth", json=synth_payload()).json()["bundle"]
    assert set(bundle) == {"bias", "examples", "facts"}
    assert len(bundle["facts"]) == 8

    learn_resp = client.post("/learn", json={"bundle": bundle, "settings": SETTINGS})
    assert learn_resp.status_code == 200
    body = learn_resp.json()
    assert body["found"] is True
    assert body["program"].startswith("f(A) :-")
    assert body["metrics"]["fp"] == 0 and body["metrics"]["fn"] == 0

    eval_resp = client.post(
        "/eval",
        json={"program": body["program"], "bundle": bundle, "settings": SETTINGS},
    )
    assert eval_resp.status_code == 200
    assert eval_resp.json()["metrics"]["f1"] == 1.0


def test_synth_matches_library_call():
    resp = client.post("/synth", json=synth_payload(2, 2))
    bundle = resp.json()["bundle"]
    direct = synth_generate(
        SceneConfig(
            bias_body_preds=(("has_object", 2), ("vehicle", 1), ("bridge", 1), ("is_on", 2)),
            tp_confidence=(1.0, 0.0),
            false_detection_rate=0.0,
            miss_rate=0.0,
            label_flip_rate=0.0,
            seed=17,
        ),
        2,
        2,
    )
    assert bundle["bias"] == direct.bias_text
    assert bundle["examples"] == direct.examples_text
    assert bundle["facts"] == direct.facts


def test_learn_with_malformed_bias_is_400():
    bundle = client.post("/synth", json=synth_payload(1, 1)).json()["bundle"]
    bundle["bias"] = "head_pred(f,1)"  # missing dot
    resp = client.post("/learn", json={"bundle": bundle, "settings": SETTINGS})
    assert resp.status_code == 400
    assert "expected" in resp.json()["detail"]


def test_eval_with_bad_program_is_400():
    bundle = client.post("/synth", json=synth_payload(1, 1)).json()["bundle"]
    resp = client.post("/eval", json={"program": "f(A) :- .", "bundle": bundle})
    assert resp.status_code == 400


def test_unknown_tier_is_400():
    payload = {"config": {"tier": "brutal"}, "n_pos": 1, "n_neg": 1}
    assert client.post("/synth", json=payload).status_code == 400


def test_settings_validation_is_422():
    bundle = client.post("/synth", json=synth_payload(1, 1)).json()["bundle"]
    resp = client.post(
        "/learn", json={"bundle": bundle, "settings": {"constrainer": "bogus"}}
    )
    assert resp.status_code == 422


def test_sweep_endpoint_single_cell():
    payload = {
        "tiers": ["easy"],
        "train_sizes": [2],
        "models": ["binary-combo-mdl"],
        "repetitions": 1,
        "n_test": 3,
        "seed": 4,
        "scene": SCENE,
        "settings": SETTINGS,
        "max_workers": 1,
    }
    resp = client.post("/sweep", json=payload)
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["report"]["cells"]) == 1
    assert "mean f1" in body["table"]
