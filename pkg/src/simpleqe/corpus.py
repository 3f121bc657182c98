"""Records, file ingestion, complexity labels and fold assignment."""
from __future__ import annotations

import hashlib
import json
import math
import os
import re
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, ValidationError

QUALITIES = ("fluency", "adequacy", "complexity")
MIN_LEVEL, MAX_LEVEL = 0, 4
SENTENCE, DOCUMENT = "sentence", "document"


@dataclass(frozen=True)
class JudgmentRecord:
    """One (original, system output) pair with three Likert judgments."""

    record_id: str
    source_id: str
    system_id: str
    original: str
    output: str
    fluency: float
    adequacy: float
    complexity: float

    def __post_init__(self):
        for name in ("record_id", "source_id", "system_id", "original", "output"):
            value = getattr(self, name)
            if not isinstance(value, str):
                raise ValidationError(f"{name} must be a string, got {type(value).__name__}")
        if not self.original.strip():
            raise ValidationError("original must be nonempty")
        if not self.output.strip():
            raise ValidationError("output must be nonempty")
        for name in QUALITIES:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{name} must be a number, got {value!r}")
            if not 1.0 <= value <= 5.0:
                raise ValidationError(f"{name} = {value} outside [1, 5]")
            object.__setattr__(self, name, float(value))

    def score(self, quality: str) -> float:
        return getattr(self, quality)

    @property
    def group(self) -> str:
        # all system outputs of one source sentence share a fold
        return self.source_id


@dataclass(frozen=True)
class LeveledDocument:
    article_id: str
    level: int
    sentences: tuple[str, ...]

    def __post_init__(self):
        if isinstance(self.level, bool) or not isinstance(self.level, int):
            raise ValidationError(f"level must be an integer, got {self.level!r}")
        if not MIN_LEVEL <= self.level <= MAX_LEVEL:
            raise ValidationError(f"level {self.level} outside [{MIN_LEVEL}, {MAX_LEVEL}]")
        if not self.sentences:
            raise ValidationError(f"document {self.article_id}.{self.level} has no sentences")
        object.__setattr__(self, "sentences", tuple(self.sentences))


@dataclass(frozen=True)
class ComplexityExample:
    """A text unit with a numeric complexity label.

    ``group`` is the fold key (the article id for corpus-derived units).
    Document units keep their sentence list so they can be chunked.
    """

    unit_id: str
    text: str
    label: float
    granularity: str = SENTENCE
    group: str = ""
    sentences: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError(f"unit {self.unit_id}: text must be nonempty")
        if not math.isfinite(self.label):
            raise ValidationError(f"unit {self.unit_id}: label must be finite")
        if self.granularity not in (SENTENCE, DOCUMENT):
            raise ValidationError(f"unknown granularity {self.granularity!r}")
        object.__setattr__(self, "label", float(self.label))
        if not self.group:
            object.__setattr__(self, "group", self.unit_id)
        if not self.sentences:
            object.__setattr__(self, "sentences", (self.text,))
        else:
            object.__setattr__(self, "sentences", tuple(self.sentences))

    def score(self, quality: str = "complexity") -> float:
        return self.label


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    groups: dict[str, int]

    def __post_init__(self):
        if self.k < 2:
            raise ValidationError("k must be at least 2")
        bad = {g: f for g, f in self.groups.items() if not 0 <= f < self.k}
        if bad:
            raise ValidationError(f"fold indices outside [0, {self.k}): {bad}")

    def fold_of(self, group: str) -> int:
        return self.groups[group]

    def members(self, fold: int) -> list[str]:
        return sorted(g for g, f in self.groups.items() if f == fold)

    def sizes(self) -> list[int]:
        counts = [0] * self.k
        for f in self.groups.values():
            counts[f] += 1
        return counts


# --- judgments ---------------------------------------------------------------

_JUDGMENT_FIELDS = tuple(f.name for f in fields(JudgmentRecord))


def parse_judgment(obj: dict, lineno: int | None = None) -> JudgmentRecord:
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", lineno)
    missing = [name for name in _JUDGMENT_FIELDS if name not in obj]
    if missing:
        raise ValidationError(_at(lineno, f"missing field(s): {', '.join(missing)}"))
    extra = sorted(set(obj) - set(_JUDGMENT_FIELDS))
    if extra:
        raise ValidationError(_at(lineno, f"unexpected field(s): {', '.join(extra)}"))
    try:
        return JudgmentRecord(**obj)
    except ValidationError as exc:
        raise ValidationError(_at(lineno, str(exc))) from None


def _at(lineno, message):
    return message if lineno is None else f"line {lineno}: {message}"


def load_judgments(path: str | os.PathLike) -> list[JudgmentRecord]:
    records = []
    seen = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
            rec = parse_judgment(obj, lineno)
            key = (rec.source_id, rec.system_id)
            if key in seen:
                raise ValidationError(
                    _at(lineno, f"duplicate (source_id, system_id) {key}, first on line {seen[key]}")
                )
            seen[key] = lineno
            records.append(rec)
    return records


def dump_judgments(records: Iterable[JudgmentRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(asdict(rec), ensure_ascii=False) + "\n")


# --- leveled corpus ----------------------------------------------------------

_LEVELED_NAME = re.compile(r"^(?P<article>.+)\.(?P<level>\d+)\.txt$")


def load_leveled_corpus(directory: str | os.PathLike) -> list[LeveledDocument]:
    """Read ``<article_id>.<level>.txt`` files, one sentence per line."""
    docs = []
    for path in sorted(Path(directory).iterdir()):
        m = _LEVELED_NAME.match(path.name)
        if m is None:
            continue
        sentences = [s.strip() for s in path.read_text(encoding="utf-8").splitlines()]
        sentences = [s for s in sentences if s]
        docs.append(LeveledDocument(m["article"], int(m["level"]), tuple(sentences)))
    return docs


def normalize_sentence(text: str) -> str:
    return " ".join(text.split())


def sentence_id(normalized: str) -> str:
    return "s" + hashlib.sha1(normalized.encode("utf-8")).hexdigest()[:16]


def label_sentences(docs: Sequence[LeveledDocument]) -> list[ComplexityExample]:
    """Label each distinct sentence with the simplest (largest) level it occurs at.

    Output is sorted by sentence text so it does not depend on input order.
    The group of a sentence is the article of its first occurrence in that
    sorted-by-article order, which keeps repeated sentences in one fold.
    """
    best: dict[str, int] = {}
    article: dict[str, str] = {}
    for doc in sorted(docs, key=lambda d: (d.article_id, d.level)):
        for sent in doc.sentences:
            norm = normalize_sentence(sent)
            if not norm:
                continue
            if norm not in best or doc.level > best[norm]:
                best[norm] = doc.level
            article.setdefault(norm, doc.article_id)
    return [
        ComplexityExample(sentence_id(norm), norm, float(level), SENTENCE, group=article[norm])
        for norm, level in sorted(best.items())
    ]


def label_documents(docs: Sequence[LeveledDocument]) -> list[ComplexityExample]:
    return [
        ComplexityExample(
            unit_id=f"{doc.article_id}.{doc.level}",
            text=" ".join(doc.sentences),
            label=float(doc.level),
            granularity=DOCUMENT,
            group=doc.article_id,
            sentences=doc.sentences,
        )
        for doc in docs
    ]


# --- wiki pairs --------------------------------------------------------------

def load_wiki_jsonl(path: str | os.PathLike) -> list[tuple[str, str]]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
            if not isinstance(obj, dict) or "article_id" not in obj or "text" not in obj:
                raise ValidationError(_at(lineno, "expected {article_id, text}"))
            pairs.append((str(obj["article_id"]), obj["text"]))
    return pairs


def split_sentences(text: str) -> tuple[str, ...]:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) > 1:
        return tuple(lines)
    parts = re.split(r"(?<=[.!?])\s+(?=[A-Z0-9\"'(])", text.strip())
    return tuple(p for p in parts if p)


def align_wiki_pairs(
    simple_docs: Sequence[tuple[str, str]],
    standard_docs: Sequence[tuple[str, str]],
) -> list[tuple[ComplexityExample, ComplexityExample]]:
    """Pair Simple (label 0) and standard (label 1) articles sharing an id."""
    simple = _unique_ids(simple_docs, "simple")
    standard = _unique_ids(standard_docs, "standard")
    pairs = []
    for article_id, simple_text in simple.items():
        if article_id not in standard:
            continue
        std_text = standard[article_id]
        pairs.append((
            ComplexityExample(f"{article_id}.simple", simple_text, 0.0, DOCUMENT,
                              group=article_id, sentences=split_sentences(simple_text)),
            ComplexityExample(f"{article_id}.standard", std_text, 1.0, DOCUMENT,
                              group=article_id, sentences=split_sentences(std_text)),
        ))
    return pairs


def _unique_ids(docs, side):
    out = {}
    for article_id, text in docs:
        if article_id in out:
            raise ValidationError(f"duplicate article_id {article_id!r} on the {side} side")
        out[article_id] = text
    return out


# --- folds -------------------------------------------------------------------

def make_folds(group_ids: Iterable[str], k: int, seed: int) -> FoldAssignment:
    """Shuffle the distinct groups with ``seed`` and deal them round-robin into k folds."""
    if k < 2:
        raise ValidationError("k must be at least 2")
    distinct = sorted(set(group_ids))
    if len(distinct) < k:
        raise ValidationError(f"{len(distinct)} distinct groups, cannot make {k} folds")
    order = np.random.default_rng(seed).permutation(len(distinct))
    return FoldAssignment(k, {distinct[j]: i % k for i, j in enumerate(order)})
