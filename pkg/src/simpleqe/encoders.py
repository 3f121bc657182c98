"""Text-encoder contract, the deterministic stub encoder, and the two
encoder-based baselines (pseudo-log-likelihood and embedding cosine).

Any backend works if it provides ``spec``, ``subword_tokenize``, ``encode``,
``truncate`` and ``mlm_log_prob`` with the semantics of :class:`StubEncoder`.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .errors import BudgetError, ValidationError
from .features.frequency import FrequencyTable
from .features.tokenize import split_words

DEFAULT_MAX_UNITS = 512
STUB_DIMENSION = 64
STUB_PIECE_CHARS = 4


@dataclass(frozen=True)
class EncoderSpec:
    name: str = "stub"
    dimension: int = STUB_DIMENSION
    max_units: int = DEFAULT_MAX_UNITS
    endpoint: str | None = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValidationError("encoder dimension must be >= 1")
        if self.max_units < 1:
            raise ValidationError("max_units must be >= 1")


@dataclass(frozen=True)
class SubwordSequence:
    units: tuple[int, ...]
    pieces: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.units)

    def __len__(self):
        return len(self.units)


@dataclass(frozen=True)
class EncoderOutput:
    token_vectors: np.ndarray  # (length, d)
    pooled: np.ndarray  # (d,)


class Encoder(Protocol):
    spec: EncoderSpec

    def subword_tokenize(self, text: str) -> SubwordSequence: ...

    def encode(self, text: str) -> EncoderOutput: ...

    def truncate(self, text: str, budget: int) -> str: ...

    def mlm_log_prob(self, tokens: Sequence[str], position: int) -> float: ...


def _stable_int(*parts: str) -> int:
    digest = hashlib.blake2b("\x1f".join(parts).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def stub_pieces(text: str) -> list[str]:
    """Words and punctuation, each cut into pieces of at most four characters."""
    pieces = []
    for word in split_words(text):
        pieces.extend(word[i:i + STUB_PIECE_CHARS] for i in range(0, len(word), STUB_PIECE_CHARS))
    return pieces


class StubEncoder:
    """Hash embeddings: every subword piece maps to a seeded unit vector.

    Context-free and frozen. The masked-LM backend returns unigram log
    probabilities from ``table``, ignoring the context.
    """

    def __init__(self, seed: int = 0, dimension: int = STUB_DIMENSION,
                 max_units: int = DEFAULT_MAX_UNITS, table: FrequencyTable | None = None):
        self.spec = EncoderSpec("stub", dimension, max_units)
        self.seed = seed
        self.table = table
        self._cache: dict[str, np.ndarray] = {}

    def subword_tokenize(self, text: str) -> SubwordSequence:
        pieces = stub_pieces(text)
        return SubwordSequence(tuple(_stable_int("piece", p) for p in pieces), tuple(pieces))

    def piece_vector(self, piece: str) -> np.ndarray:
        vec = self._cache.get(piece)
        if vec is None:
            rng = np.random.default_rng(_stable_int(str(self.seed), piece))
            vec = rng.standard_normal(self.spec.dimension)
            vec /= np.linalg.norm(vec)
            vec.flags.writeable = False
            self._cache[piece] = vec
        return vec

    def encode(self, text: str) -> EncoderOutput:
        pieces = stub_pieces(text)
        if len(pieces) > self.spec.max_units:
            raise BudgetError(len(pieces), self.spec.max_units)
        if not pieces:
            d = self.spec.dimension
            return EncoderOutput(np.zeros((0, d)), np.zeros(d))
        vectors = np.stack([self.piece_vector(p) for p in pieces])
        return EncoderOutput(vectors, vectors.mean(axis=0))

    def truncate(self, text: str, budget: int) -> str:
        """Longest prefix (in words, then characters) with at most ``budget`` pieces."""
        words, used = [], 0
        for word in split_words(text):
            n = math.ceil(len(word) / STUB_PIECE_CHARS)
            if used + n <= budget:
                words.append(word)
                used += n
                continue
            room = budget - used
            if room > 0:
                words.append(word[:room * STUB_PIECE_CHARS])
            break
        return " ".join(words)

    def mlm_log_prob(self, tokens: Sequence[str], position: int) -> float:
        if not 0 <= position < len(tokens):
            raise IndexError(f"position {position} outside [0, {len(tokens)})")
        if self.table is None:
            raise ValidationError("the stub masked-LM backend needs a frequency table")
        return self.table.log_prob(tokens[position])


def pseudo_log_likelihood(encoder: Encoder, tokens: Sequence[str]) -> float:
    """Mean masked-token log probability over all positions."""
    if not tokens:
        raise ValidationError("pseudo_log_likelihood needs at least one token")
    return sum(encoder.mlm_log_prob(tokens, i) for i in range(len(tokens))) / len(tokens)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValidationError("cosine of a zero vector is undefined")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def embedding_similarity(encoder: Encoder, a: str, b: str) -> float:
    return cosine(encoder.encode(a).pooled, encoder.encode(b).pooled)


def make_encoder(spec: EncoderSpec, seed: int = 0, table: FrequencyTable | None = None) -> Encoder:
    if spec.name != "stub":
        raise ValidationError(
            f"no encoder adapter registered for {spec.name!r}; only the stub ships with the toolkit"
        )
    return StubEncoder(seed=seed, dimension=spec.dimension, max_units=spec.max_units, table=table)
