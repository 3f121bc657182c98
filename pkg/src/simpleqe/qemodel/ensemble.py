"""Single-task (S1) setups: one independently trained model per quality."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..encoders import Encoder
from .heads import Featurizer, HeadConfig, QEModel, build_model, encode_examples, predict_batch
from .training import TrainConfig, train_batch


class S1Ensemble:
    def __init__(self, models: dict[str, QEModel]):
        self.models = dict(models)

    @property
    def qualities(self) -> tuple[str, ...]:
        return tuple(self.models)

    @classmethod
    def build(cls, config: HeadConfig, encoder: Encoder, seed: int = 0,
              featurizer: Featurizer | None = None) -> "S1Ensemble":
        return cls({
            q: build_model(config.for_quality(q), encoder, seed + j, featurizer)
            for j, q in enumerate(config.qualities)
        })

    def train(self, data: Sequence, cfg: TrainConfig) -> dict[str, list[float]]:
        histories = {}
        for j, (q, model) in enumerate(self.models.items()):
            member_cfg = TrainConfig(cfg.epochs, cfg.batch_size, cfg.lr, cfg.seed + j, cfg.loss)
            if cfg.epochs == 0:
                histories[q] = []
                continue
            _, histories[q] = train_batch(model, encode_examples(model, data), member_cfg)
        return histories

    def predict_items(self, items: Sequence) -> np.ndarray:
        cols = [predict_batch(m, encode_examples(m, items, with_targets=False))[:, 0]
                for m in self.models.values()]
        return np.stack(cols, axis=1)

