"""Splitting long documents into encoder-sized chunks and pooling chunk predictions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..encoders import DEFAULT_MAX_UNITS, Encoder, StubEncoder
from ..corpus import DOCUMENT, ComplexityExample
from ..errors import ValidationError
from .heads import QEModel, encode_examples, predict_batch


@dataclass(frozen=True)
class DocumentChunk:
    text: str
    subword_length: int
    start: int
    end: int
    truncated: bool = False

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


_DEFAULT_TOKENIZER = StubEncoder()


def chunk_document(sentences: Sequence[str], budget: int = DEFAULT_MAX_UNITS,
                   encoder: Encoder | None = None) -> list[DocumentChunk]:
    """Greedy in-order packing of whole sentences into chunks of at most ``budget`` units.

    A sentence longer than the budget becomes its own chunk, truncated to the
    budget and flagged.
    """
    if budget < 1:
        raise ValidationError("budget must be >= 1")
    enc = encoder or _DEFAULT_TOKENIZER
    chunks: list[DocumentChunk] = []
    start, used, texts = 0, 0, []

    def close(end):
        if texts:
            chunks.append(DocumentChunk(" ".join(texts), used, start, end))

    for i, sent in enumerate(sentences):
        n = enc.subword_tokenize(sent).length
        if n > budget:
            close(i)
            cut = enc.truncate(sent, budget)
            chunks.append(DocumentChunk(cut, enc.subword_tokenize(cut).length, i, i + 1, True))
            start, used, texts = i + 1, 0, []
            continue
        if texts and used + n > budget:
            close(i)
            start, used, texts = i, 0, []
        texts.append(sent)
        used += n
    close(len(sentences))
    return chunks


def weighted_average(lengths: Sequence[float], predictions: Sequence[float]) -> float:
    """Length-weighted mean of chunk predictions."""
    w = np.asarray(lengths, dtype=np.float64)
    p = np.asarray(predictions, dtype=np.float64)
    if w.size == 0 or w.shape != p.shape:
        raise ValidationError("need one length per prediction and at least one chunk")
    if w.sum() <= 0:
        raise ValidationError("chunk lengths sum to zero")
    # clip guards the [min, max] bound against rounding
    return float(np.clip(np.dot(w, p) / w.sum(), p.min(), p.max()))


def predict_chunks(model: QEModel, sentences: Sequence[str],
                   quality: str | None = None) -> tuple[list[DocumentChunk], np.ndarray]:
    """Chunk a document and score every chunk with a single-encoder model."""
    if model.config.dual_encoder:
        raise ValidationError("document prediction needs a single-encoder model")
    if not sentences or not any(s.strip() for s in sentences):
        raise ValidationError("cannot predict an empty document")
    quality = quality or ("complexity" if "complexity" in model.qualities else model.qualities[0])
    j = model.qualities.index(quality)
    chunks = [c for c in chunk_document(sentences, model.encoder.spec.max_units, model.encoder)
              if c.subword_length > 0]
    items = []
    for c in chunks:
        sents = (c.text,) if c.truncated else tuple(sentences[c.start:c.end])
        items.append(ComplexityExample(f"chunk{c.start}", c.text, 0.0, DOCUMENT, sentences=sents))
    preds = predict_batch(model, encode_examples(model, items, with_targets=False))[:, j]
    return chunks, preds


def predict_document(model: QEModel, sentences: Sequence[str], quality: str | None = None) -> float:
    chunks, preds = predict_chunks(model, sentences, quality)
    return weighted_average([c.subword_length for c in chunks], preds)
