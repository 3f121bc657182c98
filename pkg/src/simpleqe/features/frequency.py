"""Unigram count tables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from ..errors import ParseError, ValidationError


@dataclass(frozen=True)
class FrequencyTable:
    counts: Mapping[str, int]
    total: int

    def __post_init__(self):
        if self.total < 1:
            raise ValidationError("total must be positive")
        for word, c in self.counts.items():
            if c < 1:
                raise ValidationError(f"count for {word!r} must be >= 1, got {c}")
            if c > self.total:
                raise ValidationError(f"count for {word!r} exceeds total {self.total}")

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "FrequencyTable":
        merged: dict[str, int] = {}
        for word, c in counts.items():
            key = word.lower()
            merged[key] = merged.get(key, 0) + c
        return cls(merged, max(sum(merged.values()), 1))

    def count(self, word: str) -> int:
        """Raw count; out-of-vocabulary words count once."""
        return self.counts.get(word.lower(), 1)

    def log_prob(self, word: str) -> float:
        return math.log(self.count(word)) - math.log(self.total)

    def __len__(self):
        return len(self.counts)


def log_unigram_frequency(word: str, table: FrequencyTable) -> float:
    """Natural log of the word's count (0.0 for unseen words)."""
    return math.log(table.count(word))


def load_frequency_table(path) -> FrequencyTable:
    """Read ``word<TAB>count`` lines. Words are lowercased; duplicates are an error."""
    counts: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected word<TAB>count", lineno)
            word, raw = parts[0].strip().lower(), parts[1].strip()
            try:
                c = int(raw)
            except ValueError:
                raise ParseError(f"count {raw!r} is not an integer", lineno) from None
            if c < 1:
                raise ParseError(f"count must be positive, got {c}", lineno)
            if word in counts:
                raise ParseError(f"duplicate word {word!r}", lineno)
            counts[word] = c
    if not counts:
        raise ValidationError(f"frequency table {path} is empty")
    return FrequencyTable(counts, sum(counts.values()))
