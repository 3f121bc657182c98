"""Mini-batch training of the regression heads (Adam on squared error)."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import NumericError, ValidationError
from .heads import Batch, QEModel, encode_examples, loss_and_grad

log = logging.getLogger(__name__)

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 30
    batch_size: int = 32
    lr: float = 1e-2
    seed: int = 0
    loss: str = "squared_error"

    def __post_init__(self):
        if self.epochs < 0:
            raise ValidationError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be >= 1")
        if not self.lr > 0:
            raise ValidationError("lr must be positive")
        if self.loss != "squared_error":
            raise ValidationError(f"unsupported loss {self.loss!r}")

    def to_dict(self) -> dict:
        return {"epochs": self.epochs, "batch_size": self.batch_size, "lr": self.lr,
                "seed": self.seed, "loss": self.loss}


def fit_scaler(model: QEModel, batch: Batch) -> None:
    """Set the feature standardizer from the training batch (both sides pooled)."""
    if not model.config.use_features:
        return
    feats = [f for f in (batch.feat_orig, batch.feat_out) if f is not None]
    stacked = np.concatenate(feats, axis=0)
    mean = stacked.mean(axis=0)
    scale = stacked.std(axis=0)
    scale[scale < 1e-12] = 1.0
    model.feature_mean = mean
    model.feature_scale = scale


def train(model: QEModel, data: Sequence, cfg: TrainConfig) -> tuple[QEModel, list[float]]:
    if not data:
        raise ValidationError("training data is empty")
    if cfg.epochs == 0:
        return model, []
    return train_batch(model, encode_examples(model, data), cfg)


def train_batch(model: QEModel, batch: Batch, cfg: TrainConfig) -> tuple[QEModel, list[float]]:
    """Train on pre-encoded examples. Mutates and returns ``model``.

    Head biases start at the per-quality target mean. The history holds the
    full-data loss after each epoch.
    """
    if len(batch) == 0:
        raise ValidationError("training data is empty")
    if cfg.epochs == 0:
        return model, []
    fit_scaler(model, batch)
    means = batch.targets.mean(axis=0)
    if model.config.mode == "M1":
        model.params["head.bias"] = means.copy()
    else:
        for j, q in enumerate(model.qualities):
            model.params[f"head.{q}.bias"] = np.array([means[j]])

    rng = np.random.default_rng(cfg.seed)
    b1, b2 = ADAM_BETAS
    m = {k: np.zeros_like(v) for k, v in model.params.items()}
    v = {k: np.zeros_like(v) for k, v in model.params.items()}
    step = 0
    history = []
    n = len(batch)
    # divergence shows up as a non-finite loss below, so overflow warnings are noise
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(cfg.epochs):
            order = rng.permutation(n)
            for start in range(0, n, cfg.batch_size):
                loss, grads = loss_and_grad(model, batch.take(order[start:start + cfg.batch_size]))
                if not math.isfinite(loss):
                    raise NumericError(f"non-finite loss at epoch {epoch + 1}, step {step + 1}")
                step += 1
                for name, g in grads.items():
                    m[name] = b1 * m[name] + (1 - b1) * g
                    v[name] = b2 * v[name] + (1 - b2) * g * g
                    m_hat = m[name] / (1 - b1 ** step)
                    v_hat = v[name] / (1 - b2 ** step)
                    model.params[name] = model.params[name] - cfg.lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
            epoch_loss, _ = loss_and_grad(model, batch)
            if not math.isfinite(epoch_loss):
                raise NumericError(f"non-finite loss after epoch {epoch + 1}")
            history.append(epoch_loss)
            log.debug("epoch %d loss %.6f", epoch + 1, epoch_loss)
    return model, history
