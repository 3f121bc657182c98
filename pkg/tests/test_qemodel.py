import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import central_differences
from simpleqe.corpus import ComplexityExample
from simpleqe.encoders import StubEncoder
from simpleqe.errors import BudgetError, NumericError, ValidationError
from simpleqe.features import FeatureVector
from simpleqe.qemodel import (
    Batch, Featurizer, HeadConfig, S1Ensemble, TrainConfig, build_model, checkpoint_bytes, forward,
    load_checkpoint, loss_and_grad, param_shapes,
    save_checkpoint, train,
)


def shapes(model):
    return {k: v.shape for k, v in model.params.items()}


def test_m3_dual_shapes(stub):
    model = build_model(HeadConfig("M3", dual_encoder=True), stub, seed=0)
    heads = {k: s for k, s in shapes(model).items() if k.endswith("weight")}
    assert heads == {f"head.{q}.weight": (128,) for q in ("fluency", "adequacy", "complexity")}


def test_m1_single_shapes(stub):
    model = build_model(HeadConfig("M1", dual_encoder=False), stub, seed=0)
    assert shapes(model) == {"head.weight": (3, 64), "head.bias": (3,)}


def test_feature_input_dim(stub):
    cfg = HeadConfig("M3", dual_encoder=True, use_features=True, feature_dim=32)
    assert cfg.input_dim(64) == 192
    model = build_model(cfg, stub, seed=0)
    assert model.params["proj.weight"].shape == (32, 5)
    assert model.params["head.fluency.weight"].shape == (192,)


def test_s1_needs_single_quality(stub):
    with pytest.raises(ValidationError):
        build_model(HeadConfig("S1"), stub)
    assert set(S1Ensemble.build(HeadConfig("S1"), stub).models) == {"fluency", "adequacy", "complexity"}


def test_bad_mode():
    with pytest.raises(ValidationError):
        HeadConfig("M2")


def test_init_deterministic(stub):
    a = build_model(HeadConfig("M1"), stub, seed=4)
    b = build_model(HeadConfig("M1"), stub, seed=4)
    assert all(np.array_equal(a.params[k], b.params[k]) for k in a.params)


def test_zero_weights_give_biases(stub, table):
    cfg = HeadConfig("M3", dual_encoder=True, use_features=True)
    model = build_model(cfg, stub, featurizer=Featurizer(table))
    for k, v in model.params.items():
        v[...] = 0.0
    for j, q in enumerate(cfg.qualities):
        model.params[f"head.{q}.bias"][0] = [1.5, -2.0, 3.25][j]
    pred = forward(model, "The original sentence.", "A simpler one.")
    assert pred == {"fluency": 1.5, "adequacy": -2.0, "complexity": 3.25}
    pred2 = forward(model, "Something else entirely here.", "Other.")
    assert pred2 == pred


def test_forward_keys_and_determinism(stub):
    model = build_model(HeadConfig("M3"), stub, seed=1)
    a = forward(model, "orig text", "out text")
    assert list(a) == ["fluency", "adequacy", "complexity"]
    assert forward(model, "orig text", "out text") == a


def test_forward_input_contract(stub, table):
    dual = build_model(HeadConfig("M3"), stub)
    with pytest.raises(ValidationError):
        forward(dual, None, "out")
    single = build_model(HeadConfig("M1", dual_encoder=False), stub)
    with pytest.raises(ValidationError):
        forward(single, "orig", "out")
    with pytest.raises(ValidationError):
        forward(single, None, "out", features_out=FeatureVector.zeros())
    feats = build_model(HeadConfig("M1", dual_encoder=False, use_features=True), stub)
    with pytest.raises(ValidationError):
        forward(feats, None, "out")
    assert set(forward(feats, None, "out", features_out=FeatureVector(3, 1, 2, 4, 0))) == set(HeadConfig().qualities)
    with pytest.raises(BudgetError):
        forward(single, None, "word " * 600)


def test_m3_heads_independent(stub):
    model = build_model(HeadConfig("M3"), stub, seed=2)
    before = forward(model, "the original", "the output")
    model.params["head.adequacy.weight"] += 0.5
    after = forward(model, "the original", "the output")
    assert after["fluency"] == before["fluency"] and after["complexity"] == before["complexity"]
    assert after["adequacy"] != before["adequacy"]


# --- gradients ---------------------------------------------------------------

def random_batch(rng, model, n=5):
    d = model.encoder.spec.dimension
    dual = model.config.dual_encoder
    feats = model.config.use_features
    return Batch(
        emb_out=rng.normal(size=(n, d)),
        emb_orig=rng.normal(size=(n, d)) if dual else None,
        feat_out=rng.normal(3, 2, size=(n, 5)) if feats else None,
        feat_orig=rng.normal(3, 2, size=(n, 5)) if feats and dual else None,
        targets=rng.uniform(1, 5, size=(n, model.config.k)),
    )


def gradient_error(model, batch):
    _, grads = loss_and_grad(model, batch)
    fd = central_differences(lambda: loss_and_grad(model, batch)[0], model.params)
    worst = 0.0
    for name in grads:
        num = np.linalg.norm(grads[name] - fd[name])
        den = max(np.linalg.norm(grads[name]), np.linalg.norm(fd[name]), 1e-12)
        worst = max(worst, num / den)
    return worst


@pytest.mark.parametrize("mode", ["M1", "M3", "S1"])
@pytest.mark.parametrize("dual", [True, False])
@pytest.mark.parametrize("use_features", [True, False])
def test_gradient_matches_finite_differences(mode, dual, use_features):
    rng = np.random.default_rng(hash((mode, dual, use_features)) % 2**32)
    quals = ("complexity",) if mode == "S1" else ("fluency", "adequacy", "complexity")
    cfg = HeadConfig(mode, quals, dual, use_features, feature_dim=4)
    model = build_model(cfg, StubEncoder(dimension=6), seed=int(rng.integers(1000)))
    for name in model.params:
        model.params[name] = rng.normal(size=model.params[name].shape)
    model.feature_mean = rng.normal(size=5)
    model.feature_scale = rng.uniform(0.5, 2, size=5)
    assert gradient_error(model, random_batch(rng, model)) <= 1e-5


# --- training ----------------------------------------------------------------

def affine_targets(stub, texts, seed=0):
    rng = np.random.default_rng(seed)
    w = rng.normal(size=stub.spec.dimension)
    return [float(3 + 2 * stub.encode(t).pooled @ w) for t in texts]


def test_training_reduces_loss(stub, synthetic):
    texts = [synthetic.sentence(int(n)) for n in np.random.default_rng(0).integers(3, 15, 60)]
    labels = affine_targets(stub, texts)
    data = [ComplexityExample(f"u{i}", t, y) for i, (t, y) in enumerate(zip(texts, labels))]
    model = build_model(HeadConfig("S1", ("complexity",), dual_encoder=False), stub, seed=0)
    model, hist = train(model, data, TrainConfig(epochs=15, batch_size=8, lr=0.05, seed=1))
    assert len(hist) == 15
    assert hist[-1] < hist[0]


def test_zero_epochs_is_identity(stub, synthetic):
    data = synthetic.judgments(3)
    model = build_model(HeadConfig("M3"), stub, seed=5)
    before = {k: v.copy() for k, v in model.params.items()}
    model, hist = train(model, data, TrainConfig(epochs=0))
    assert hist == []
    assert all(np.array_equal(before[k], model.params[k]) for k in before)


def test_training_deterministic(stub, synthetic):
    data = synthetic.judgments(6)

    def run():
        model = build_model(HeadConfig("M1", use_features=True), stub, seed=3,
                            featurizer=Featurizer(synthetic.table))
        return train(model, data, TrainConfig(epochs=4, batch_size=5, seed=11))

    (m1, h1), (m2, h2) = run(), run()
    assert h1 == h2
    assert all(np.array_equal(m1.params[k], m2.params[k]) for k in m1.params)


def test_nan_loss_aborts(stub, synthetic):
    model = build_model(HeadConfig("M3"), stub)
    with pytest.raises(NumericError):
        with np.errstate(all="ignore"):
            train(model, synthetic.judgments(4), TrainConfig(epochs=3, lr=1e300))


def test_missing_labels(stub):
    model = build_model(HeadConfig("M3", dual_encoder=False), stub)
    with pytest.raises(ValidationError, match="no label"):
        train(model, [ComplexityExample("u", "text", 1.0)], TrainConfig(epochs=1))


def test_train_config_validation():
    with pytest.raises(ValidationError):
        TrainConfig(batch_size=0)
    with pytest.raises(ValidationError):
        TrainConfig(lr=0)


# --- checkpoints -------------------------------------------------------------

@pytest.mark.parametrize("cfg", [HeadConfig("M3", use_features=True), HeadConfig("M1", dual_encoder=False)])
def test_checkpoint_round_trip(tmp_path, stub, synthetic, cfg):
    fz = Featurizer(synthetic.table)
    model = build_model(cfg, stub, seed=2, featurizer=fz)
    train(model, synthetic.judgments(4), TrainConfig(epochs=2))
    path = tmp_path / "ck.zip"
    save_checkpoint(path, model, encoder_seed=3, meta={"seed": 2})
    loaded = load_checkpoint(path, featurizer=fz)
    assert loaded.config == model.config
    assert all(np.array_equal(loaded.params[k], model.params[k]) for k in model.params)
    assert np.array_equal(loaded.feature_scale, model.feature_scale)
    original = "The old sentence is long." if cfg.dual_encoder else None
    assert forward(loaded, original, "Short one.") == forward(model, original, "Short one.")
    assert checkpoint_bytes(loaded, 3, {"seed": 2}) == checkpoint_bytes(model, 3, {"seed": 2})


def test_checkpoint_binary_layout(tmp_path, stub):
    import json
    import zipfile

    model = build_model(HeadConfig("M1", dual_encoder=False), stub, seed=1)
    path = tmp_path / "ck.zip"
    save_checkpoint(path, model)
    with zipfile.ZipFile(path) as zf:
        manifest = json.loads(zf.read("manifest.json"))
        raw = zf.read("weights.bin")
    (entry,) = manifest["members"]
    spec = {a["name"]: a for a in entry["arrays"]}
    w = spec["param.head.weight"]
    flat = np.frombuffer(raw, dtype="<f8")
    got = flat[w["offset"]:w["offset"] + 3 * 64].reshape(w["shape"])
    assert np.array_equal(got, model.params["head.weight"])


def test_s1_ensemble_checkpoint(tmp_path, stub, synthetic):
    ens = S1Ensemble.build(HeadConfig("S1"), stub, seed=0)
    ens.train(synthetic.judgments(4), TrainConfig(epochs=1))
    path = tmp_path / "s1.zip"
    save_checkpoint(path, ens)
    loaded = load_checkpoint(path)
    assert isinstance(loaded, S1Ensemble) and loaded.qualities == ens.qualities


def test_bad_checkpoint(tmp_path):
    p = tmp_path / "x.zip"
    p.write_bytes(b"nope")
    with pytest.raises(ValidationError):
        load_checkpoint(p)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["S1", "M1", "M3"]), st.booleans(), st.booleans(), st.integers(1, 40))
def test_param_shapes_consistent(mode, dual, feats, d_f):
    quals = ("adequacy",) if mode == "S1" else ("fluency", "adequacy", "complexity")
    cfg = HeadConfig(mode, quals, dual, feats, d_f)
    dim = cfg.input_dim(64)
    assert dim == 64 * (2 if dual else 1) + (d_f * (2 if dual else 1) if feats else 0)
    weights = [s for n, s in param_shapes(cfg, 64).items() if n.startswith("head") and n.endswith("weight")]
    assert all(s[-1] == dim for s in weights)
