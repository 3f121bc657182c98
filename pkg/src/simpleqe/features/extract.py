"""Per-sentence and per-document linguistic feature vectors."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .frequency import FrequencyTable, log_unigram_frequency
from .syllables import count_syllables
from .tokenize import Tagger, Token, tokenize
from .trees import ParseTree, parse_height

FEATURE_NAMES = ("word_length", "syllables", "frequency", "sentence_length", "parse_height")
FEATURE_TITLES = {
    "word_length": "Word Length",
    "syllables": "Syllables",
    "frequency": "Frequency",
    "sentence_length": "Sentence Length",
    "parse_height": "Parse Height",
}


@dataclass(frozen=True)
class FeatureVector:
    word_length: float
    syllables: float
    frequency: float
    sentence_length: float
    parse_height: float
    no_content_words: bool = False
    no_parse: bool = False

    def __post_init__(self):
        for name in FEATURE_NAMES:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.sentence_length < 0:
            raise ValidationError("sentence_length must be non-negative")

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in FEATURE_NAMES], dtype=np.float64)

    def to_dict(self) -> dict:
        d = {n: getattr(self, n) for n in FEATURE_NAMES}
        d["no_content_words"] = self.no_content_words
        d["no_parse"] = self.no_parse
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureVector":
        return cls(**{k: d[k] for k in (*FEATURE_NAMES, "no_content_words", "no_parse") if k in d})

    @classmethod
    def zeros(cls) -> "FeatureVector":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0)


def _syllables_or_none(word):
    letters = "".join(ch for ch in word if ch.isalpha())
    return count_syllables(letters) if letters else None


def extract_features(
    tokens: list[Token],
    tree: ParseTree | None,
    table: FrequencyTable,
) -> FeatureVector:
    """Content-word averages plus token count and parse height.

    Content words are nouns, verbs, adjectives and adverbs. With no content
    words the three averages are 0 and ``no_content_words`` is set; with no
    tree the height is 0 and ``no_parse`` is set.
    """
    if tree is not None:
        leaves = tree.leaves()
        surfaces = [t.surface for t in tokens]
        if leaves != surfaces:
            raise ValidationError(f"tree leaves {leaves} do not match tokens {surfaces}")

    lengths, syllables, freqs = [], [], []
    for tok in tokens:
        if not tok.is_content:
            continue
        n_syl = _syllables_or_none(tok.surface)
        if n_syl is None:
            continue
        lengths.append(len(tok.surface))
        syllables.append(n_syl)
        freqs.append(log_unigram_frequency(tok.surface, table))

    no_content = not lengths
    return FeatureVector(
        word_length=0.0 if no_content else sum(lengths) / len(lengths),
        syllables=0.0 if no_content else sum(syllables) / len(syllables),
        frequency=0.0 if no_content else sum(freqs) / len(freqs),
        sentence_length=float(len(tokens)),
        parse_height=0.0 if tree is None else float(parse_height(tree)),
        no_content_words=no_content,
        no_parse=tree is None,
    )


def text_features(text: str, table: FrequencyTable, tree: ParseTree | None = None,
                  tagger: Tagger | None = None) -> FeatureVector:
    return extract_features(tokenize(text, tagger), tree, table)


def document_features(sentence_features: list[FeatureVector]) -> FeatureVector:
    """Component-wise mean over sentences (sentence_length becomes tokens per sentence)."""
    if not sentence_features:
        raise ValidationError("document_features needs at least one sentence")
    mean = np.mean([fv.as_array() for fv in sentence_features], axis=0)
    return FeatureVector(
        *(float(v) for v in mean),
        no_content_words=all(fv.no_content_words for fv in sentence_features),
        no_parse=any(fv.no_parse for fv in sentence_features),
    )
