"""Regression heads over pooled encoder embeddings.

Input layout for one example is the concatenation

    [pooled(original), pooled(output), proj(features(original)), proj(features(output))]

where the original-side blocks exist only for dual-encoder models and the
feature blocks only when ``use_features`` is set. One projector (5 -> d_f) is
shared by both sides; features are standardized by a fixed scaler before
projection. The encoder itself is frozen.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..corpus import QUALITIES, ComplexityExample, JudgmentRecord
from ..encoders import Encoder, EncoderSpec
from ..errors import ValidationError
from ..features.extract import FEATURE_NAMES, FeatureVector, document_features, text_features
from ..features.frequency import FrequencyTable
from ..features.tokenize import Tagger

MODES = ("S1", "M1", "M3")
N_FEATURES = len(FEATURE_NAMES)
DEFAULT_FEATURE_DIM = 32
INIT_STD = 0.02


@dataclass(frozen=True)
class HeadConfig:
    """Head layout. An S1 config over k qualities describes k independently
    trained single-quality models (see ``S1Ensemble``)."""

    mode: str = "M3"
    qualities: tuple[str, ...] = QUALITIES
    dual_encoder: bool = True
    use_features: bool = False
    feature_dim: int = DEFAULT_FEATURE_DIM

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"unknown head mode {self.mode!r}; expected one of {MODES}")
        object.__setattr__(self, "qualities", tuple(self.qualities))
        if not self.qualities:
            raise ValidationError("at least one quality is required")
        if len(set(self.qualities)) != len(self.qualities):
            raise ValidationError(f"duplicate qualities in {self.qualities}")
        if self.feature_dim < 1:
            raise ValidationError("feature_dim must be >= 1")

    @property
    def k(self) -> int:
        return len(self.qualities)

    def for_quality(self, quality: str) -> "HeadConfig":
        return HeadConfig("S1", (quality,), self.dual_encoder, self.use_features, self.feature_dim)

    def input_dim(self, encoder_dim: int) -> int:
        sides = 2 if self.dual_encoder else 1
        return encoder_dim * sides + (self.feature_dim * sides if self.use_features else 0)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "qualities": list(self.qualities),
            "dual_encoder": self.dual_encoder,
            "use_features": self.use_features,
            "feature_dim": self.feature_dim,
        }


class Featurizer:
    """Maps text to a FeatureVector using a frequency table and optional parses."""

    def __init__(self, table: FrequencyTable, tagger: Tagger | None = None, parses=None):
        self.table = table
        self.tagger = tagger
        self.parses = parses or {}
        self._memo: dict[str, FeatureVector] = {}

    def __call__(self, text: str) -> FeatureVector:
        fv = self._memo.get(text)
        if fv is None:
            fv = text_features(text, self.table, self.parses.get(" ".join(text.split())), self.tagger)
            self._memo[text] = fv
        return fv

    def document(self, sentences: Sequence[str]) -> FeatureVector:
        return document_features([self(s) for s in sentences])


@dataclass
class QEModel:
    config: HeadConfig
    encoder: Encoder
    params: dict[str, np.ndarray]
    feature_mean: np.ndarray = field(default_factory=lambda: np.zeros(N_FEATURES))
    feature_scale: np.ndarray = field(default_factory=lambda: np.ones(N_FEATURES))
    featurizer: Featurizer | None = None
    seed: int = 0

    @property
    def qualities(self) -> tuple[str, ...]:
        return self.config.qualities

    @property
    def input_dim(self) -> int:
        return self.config.input_dim(self.encoder.spec.dimension)

    def head_names(self) -> list[str]:
        if self.config.mode == "M1":
            return ["head"]
        return [f"head.{q}" for q in self.qualities]


def param_shapes(config: HeadConfig, encoder_dim: int) -> dict[str, tuple[int, ...]]:
    dim = config.input_dim(encoder_dim)
    shapes: dict[str, tuple[int, ...]] = {}
    if config.use_features:
        shapes["proj.weight"] = (config.feature_dim, N_FEATURES)
        shapes["proj.bias"] = (config.feature_dim,)
    if config.mode == "M1":
        shapes["head.weight"] = (config.k, dim)
        shapes["head.bias"] = (config.k,)
    else:
        for q in config.qualities:
            shapes[f"head.{q}.weight"] = (dim,)
            shapes[f"head.{q}.bias"] = (1,)
    return shapes


def build_model(config: HeadConfig, encoder: Encoder, seed: int = 0,
                featurizer: Featurizer | None = None) -> QEModel:
    spec: EncoderSpec = encoder.spec
    if config.mode == "S1" and config.k != 1:
        raise ValidationError(f"an S1 model predicts one quality, got {config.k}; use S1Ensemble")
    if spec.dimension < 1:
        raise ValidationError("encoder dimension must be positive")
    rng = np.random.default_rng(seed)
    params = {}
    for name, shape in param_shapes(config, spec.dimension).items():
        if name.endswith(".bias"):
            params[name] = np.zeros(shape)
        else:
            params[name] = rng.normal(0.0, INIT_STD, size=shape)
    return QEModel(config, encoder, params, featurizer=featurizer, seed=seed)


# --- batches -----------------------------------------------------------------

@dataclass
class Batch:
    """Encoded inputs for n examples; feature arrays are raw (unstandardized)."""

    emb_out: np.ndarray
    emb_orig: np.ndarray | None = None
    feat_out: np.ndarray | None = None
    feat_orig: np.ndarray | None = None
    targets: np.ndarray | None = None  # (n, k)

    def __len__(self):
        return self.emb_out.shape[0]

    def take(self, idx) -> "Batch":
        pick = lambda a: None if a is None else a[idx]  # noqa: E731
        return Batch(pick(self.emb_out), pick(self.emb_orig), pick(self.feat_out),
                     pick(self.feat_orig), pick(self.targets))


def example_inputs(item) -> tuple[str | None, str, dict[str, float], tuple[str, ...]]:
    """(original, output, scores, output sentences) for a record or complexity example."""
    if isinstance(item, JudgmentRecord):
        scores = {q: item.score(q) for q in QUALITIES}
        return item.original, item.output, scores, (item.output,)
    if isinstance(item, ComplexityExample):
        return None, item.text, {"complexity": item.label}, item.sentences
    raise TypeError(f"unsupported example type {type(item).__name__}")


def _features_for(model, sentences):
    if model.featurizer is None:
        raise ValidationError("model uses features but has no featurizer and none were supplied")
    if len(sentences) == 1:
        return model.featurizer(sentences[0])
    return model.featurizer.document(sentences)


def encode_examples(model: QEModel, items: Sequence, with_targets: bool = True) -> Batch:
    cfg = model.config
    emb_out, emb_orig, f_out, f_orig, targets = [], [], [], [], []
    for item in items:
        original, output, scores, sentences = example_inputs(item)
        emb_out.append(model.encoder.encode(output).pooled)
        if cfg.dual_encoder:
            if original is None:
                raise ValidationError("dual-encoder model needs the original text")
            emb_orig.append(model.encoder.encode(original).pooled)
        if cfg.use_features:
            f_out.append(_features_for(model, sentences).as_array())
            if cfg.dual_encoder:
                f_orig.append(model.featurizer(original).as_array())
        if with_targets:
            missing = [q for q in cfg.qualities if q not in scores]
            if missing:
                raise ValidationError(f"no label for {missing} on {type(item).__name__}")
            targets.append([scores[q] for q in cfg.qualities])
    arr = lambda xs: np.array(xs, dtype=np.float64) if xs else None  # noqa: E731
    d = model.encoder.spec.dimension
    return Batch(
        emb_out=np.array(emb_out).reshape(len(items), d),
        emb_orig=arr(emb_orig),
        feat_out=arr(f_out),
        feat_orig=arr(f_orig),
        targets=arr(targets) if with_targets else None,
    )


# --- forward / backward ------------------------------------------------------

def _standardize(model, feats):
    return (feats - model.feature_mean) / model.feature_scale


def _assemble(model: QEModel, batch: Batch):
    """Return the head input matrix and the standardized feature blocks."""
    cfg = model.config
    blocks = []
    if cfg.dual_encoder:
        if batch.emb_orig is None:
            raise ValidationError("dual-encoder model needs the original text")
        blocks.append(batch.emb_orig)
    blocks.append(batch.emb_out)
    std = []
    if cfg.use_features:
        sides = [batch.feat_orig, batch.feat_out] if cfg.dual_encoder else [batch.feat_out]
        if any(s is None for s in sides):
            raise ValidationError("model uses features but feature vectors are missing")
        W, b = model.params["proj.weight"], model.params["proj.bias"]
        for s in sides:
            z = _standardize(model, s)
            std.append(z)
            blocks.append(z @ W.T + b)
    return np.concatenate(blocks, axis=1), std


def _heads(model: QEModel, X: np.ndarray) -> np.ndarray:
    p = model.params
    if model.config.mode == "M1":
        return X @ p["head.weight"].T + p["head.bias"]
    return np.stack([X @ p[f"head.{q}.weight"] + p[f"head.{q}.bias"][0]
                     for q in model.qualities], axis=1)


def predict_batch(model: QEModel, batch: Batch) -> np.ndarray:
    """(n, k) predictions in ``model.qualities`` order."""
    X, _ = _assemble(model, batch)
    return _heads(model, X)


def loss_and_grad(model: QEModel, batch: Batch) -> tuple[float, dict[str, np.ndarray]]:
    """Squared error averaged over examples and summed over qualities, with its gradient."""
    X, std = _assemble(model, batch)
    P = _heads(model, X)
    R = P - batch.targets
    n = len(batch)
    loss = float(np.sum(R * R) / n)
    dP = 2.0 * R / n
    p = model.params
    grads = {}
    if model.config.mode == "M1":
        grads["head.weight"] = dP.T @ X
        grads["head.bias"] = dP.sum(axis=0)
        dX = dP @ p["head.weight"]
    else:
        dX = np.zeros_like(X)
        for j, q in enumerate(model.qualities):
            grads[f"head.{q}.weight"] = dP[:, j] @ X
            grads[f"head.{q}.bias"] = np.array([dP[:, j].sum()])
            dX += np.outer(dP[:, j], p[f"head.{q}.weight"])
    if model.config.use_features:
        d = model.encoder.spec.dimension
        offset = d * (2 if model.config.dual_encoder else 1)
        df = model.config.feature_dim
        gW = np.zeros_like(p["proj.weight"])
        gb = np.zeros_like(p["proj.bias"])
        for i, z in enumerate(std):
            dZ = dX[:, offset + i * df: offset + (i + 1) * df]
            gW += dZ.T @ z
            gb += dZ.sum(axis=0)
        grads["proj.weight"] = gW
        grads["proj.bias"] = gb
    return loss, grads


def forward(model: QEModel, original: str | None, output: str,
            features_orig: FeatureVector | None = None,
            features_out: FeatureVector | None = None) -> dict[str, float]:
    """Score one (original, output) pair; returns ``{quality: score}``."""
    cfg = model.config
    if cfg.dual_encoder and original is None:
        raise ValidationError("dual-encoder model needs the original text")
    if not cfg.dual_encoder and original is not None:
        raise ValidationError("single-encoder model takes no original text")
    batch = Batch(emb_out=model.encoder.encode(output).pooled[None, :])
    if cfg.dual_encoder:
        batch.emb_orig = model.encoder.encode(original).pooled[None, :]
    if cfg.use_features:
        if features_out is None:
            features_out = _features_for(model, (output,))
        batch.feat_out = features_out.as_array()[None, :]
        if cfg.dual_encoder:
            if features_orig is None:
                features_orig = _features_for(model, (original,))
            batch.feat_orig = features_orig.as_array()[None, :]
    elif features_orig is not None or features_out is not None:
        raise ValidationError("model was built without the feature channel")
    row = predict_batch(model, batch)[0]
    return {q: float(v) for q, v in zip(model.qualities, row)}
