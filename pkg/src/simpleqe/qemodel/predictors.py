"""Uniform fit/predict wrappers used by the evaluation harness.

Every predictor exposes ``qualities``, ``fit(items, cfg)`` and
``predict(items) -> {quality: array}``. Document-granularity complexity
examples are trained on as chunks carrying the document label and predicted
with the length-weighted chunk average.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..corpus import DOCUMENT, ComplexityExample, JudgmentRecord
from ..encoders import Encoder
from ..errors import ValidationError
from ..features.extract import FEATURE_NAMES
from .chunking import chunk_document, predict_document
from .ensemble import S1Ensemble
from .heads import Featurizer, HeadConfig, QEModel, build_model, encode_examples, example_inputs, predict_batch
from .linreg import linreg_fit, linreg_predict
from .training import TrainConfig, train_batch


def _is_document(item) -> bool:
    return isinstance(item, ComplexityExample) and item.granularity == DOCUMENT


def expand_documents(items: Sequence, encoder: Encoder) -> list:
    """Replace each document example by its chunks, each labeled like the document."""
    out = []
    for item in items:
        if not _is_document(item):
            out.append(item)
            continue
        for c in chunk_document(item.sentences, encoder.spec.max_units, encoder):
            if c.subword_length == 0:
                continue
            sents = (c.text,) if c.truncated else item.sentences[c.start:c.end]
            out.append(ComplexityExample(f"{item.unit_id}#{c.start}", c.text, item.label,
                                         DOCUMENT, item.group, sents))
    return out


def gold(items: Sequence, quality: str) -> np.ndarray:
    return np.array([example_inputs(it)[2][quality] for it in items], dtype=np.float64)


class QEPredictor:
    """Builds a fresh head model (or S1 ensemble) and trains it on ``fit``."""

    def __init__(self, config: HeadConfig, encoder: Encoder, seed: int = 0,
                 featurizer: Featurizer | None = None, model=None):
        self.config = config
        self.encoder = encoder
        self.seed = seed
        self.featurizer = featurizer
        if model is None:
            if config.mode == "S1":
                model = S1Ensemble.build(config, encoder, seed, featurizer)
            else:
                model = build_model(config, encoder, seed, featurizer)
        self.model = model
        self.history: dict[str, list[float]] = {}

    @classmethod
    def from_model(cls, model) -> "QEPredictor":
        first = next(iter(model.models.values())) if isinstance(model, S1Ensemble) else model
        cfg = first.config
        if isinstance(model, S1Ensemble):
            cfg = HeadConfig("S1", model.qualities, cfg.dual_encoder, cfg.use_features, cfg.feature_dim)
        return cls(cfg, first.encoder, first.seed, first.featurizer, model)

    @property
    def qualities(self) -> tuple[str, ...]:
        return self.config.qualities

    def _members(self) -> list[QEModel]:
        if isinstance(self.model, S1Ensemble):
            return list(self.model.models.values())
        return [self.model]

    def fit(self, items: Sequence, cfg: TrainConfig):
        train_items = expand_documents(items, self.encoder)
        if isinstance(self.model, S1Ensemble):
            self.history = self.model.train(train_items, cfg)
        else:
            hist = []
            if cfg.epochs:
                _, hist = train_batch(self.model, encode_examples(self.model, train_items), cfg)
            self.history = {"all": hist}
        return self.history

    def predict(self, items: Sequence) -> dict[str, np.ndarray]:
        out = {q: np.empty(len(items)) for q in self.qualities}
        docs = [i for i, it in enumerate(items) if _is_document(it)]
        plain = [i for i, it in enumerate(items) if not _is_document(it)]
        for model in self._members():
            if plain:
                preds = predict_batch(model, encode_examples(model, [items[i] for i in plain], False))
                for j, q in enumerate(model.qualities):
                    out[q][plain] = preds[:, j]
            for i in docs:
                for q in model.qualities:
                    out[q][i] = predict_document(model, items[i].sentences, q)
        return out


class LinRegPredictor:
    """Least-squares combination of the five features, one fit per quality."""

    def __init__(self, featurizer: Featurizer, qualities: Sequence[str] = ("complexity",)):
        self.featurizer = featurizer
        self.qualities = tuple(qualities)
        self.weights = {}

    def features(self, items: Sequence) -> np.ndarray:
        rows = []
        for it in items:
            _, output, _, sentences = example_inputs(it)
            fv = self.featurizer.document(sentences) if len(sentences) > 1 else self.featurizer(output)
            rows.append(fv.as_array())
        return np.array(rows).reshape(len(items), len(FEATURE_NAMES))

    def fit(self, items: Sequence, cfg: TrainConfig | None = None):
        X = self.features(items)
        self.weights = {q: linreg_fit(X, gold(items, q)) for q in self.qualities}
        return {}

    def predict(self, items: Sequence) -> dict[str, np.ndarray]:
        if not self.weights:
            raise ValidationError("LinRegPredictor.predict called before fit")
        X = self.features(items)
        return {q: np.asarray(linreg_predict(w, X), dtype=np.float64).reshape(len(items))
                for q, w in self.weights.items()}


class FeaturePredictor(LinRegPredictor):
    """Uses one raw feature value as the score (no fitting)."""

    def __init__(self, featurizer: Featurizer, feature: str, qualities: Sequence[str] = ("complexity",)):
        super().__init__(featurizer, qualities)
        if feature not in FEATURE_NAMES:
            raise ValidationError(f"unknown feature {feature!r}")
        self.column = FEATURE_NAMES.index(feature)

    def fit(self, items, cfg=None):
        return {}

    def predict(self, items):
        col = self.features(items)[:, self.column]
        return {q: col.copy() for q in self.qualities}


class OraclePredictor:
    """Returns the gold labels; a sanity check for the harness."""

    def __init__(self, qualities: Sequence[str]):
        self.qualities = tuple(qualities)

    def fit(self, items, cfg=None):
        return {}

    def predict(self, items):
        return {q: gold(items, q) for q in self.qualities}


def qualities_of(items: Sequence) -> tuple[str, ...]:
    if items and isinstance(items[0], JudgmentRecord):
        return ("fluency", "adequacy", "complexity")
    return ("complexity",)
