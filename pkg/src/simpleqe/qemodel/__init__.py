from .checkpoint import checkpoint_bytes, load_checkpoint, read_manifest, save_checkpoint
from .chunking import DocumentChunk, chunk_document, predict_chunks, predict_document, weighted_average
from .ensemble import S1Ensemble
from .heads import (
    Batch, Featurizer, HeadConfig, QEModel, build_model, encode_examples, forward, loss_and_grad,
    param_shapes, predict_batch,
)
from .linreg import LinRegWeights, linreg_fit, linreg_predict
from .predictors import FeaturePredictor, LinRegPredictor, OraclePredictor, QEPredictor
from .training import TrainConfig, train, train_batch

__all__ = [
    "Batch", "DocumentChunk", "FeaturePredictor", "Featurizer", "HeadConfig", "LinRegPredictor",
    "LinRegWeights", "OraclePredictor", "QEModel", "QEPredictor", "S1Ensemble", "TrainConfig",
    "build_model", "checkpoint_bytes", "chunk_document", "encode_examples", "forward",
    "linreg_fit", "linreg_predict", "load_checkpoint", "loss_and_grad", "param_shapes",
    "predict_batch", "predict_chunks", "predict_document", "read_manifest", "save_checkpoint",
    "train", "train_batch", "weighted_average",
]
