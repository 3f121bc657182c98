"""Synthetic corpora for exercising the harness without licensed data."""
from __future__ import annotations

import json
import math

import numpy as np

from .corpus import DOCUMENT, SENTENCE, ComplexityExample, JudgmentRecord
from .features.frequency import FrequencyTable

_ONSETS = ("b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "st", "pr", "tr")
_NUCLEI = ("a", "e", "i", "o", "u", "ea", "ou")
_CODAS = ("", "n", "r", "s", "t", "l", "nd", "st")
_SUFFIXES = ("", "", "", "ing", "ed", "tion", "ness", "ly", "ous", "able")
_FUNCTION = ("the", "a", "of", "to", "and", "in", "is", "that", "for", "with", "on", "as")


def make_vocabulary(size: int, rng: np.random.Generator) -> list[str]:
    words: list[str] = []
    seen = set(_FUNCTION)
    while len(words) < size:
        n_syl = int(rng.integers(1, 4))
        word = "".join(rng.choice(_ONSETS) + rng.choice(_NUCLEI) + rng.choice(_CODAS) for _ in range(n_syl))
        word += rng.choice(_SUFFIXES)
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def zipf_table(words, exponent: float = 1.0, top: int = 1_000_000) -> FrequencyTable:
    counts = {w: max(1, int(top / (rank + 1) ** exponent)) for rank, w in enumerate(words)}
    return FrequencyTable.from_counts(counts)


class SyntheticCorpus:
    """Random sentences over a Zipf-distributed vocabulary.

    ``sentence_length_corpus`` labels each sentence with a decreasing function
    of its length plus bounded uniform noise, so longer sentences sit at lower
    (more complex) levels.
    """

    def __init__(self, seed: int = 0, vocab_size: int = 400):
        self.rng = np.random.default_rng(seed)
        self.words = make_vocabulary(vocab_size, self.rng)
        self.table = zipf_table(list(_FUNCTION) + self.words)
        ranks = np.arange(1, len(self.words) + 1, dtype=np.float64)
        self._p = (1.0 / ranks) / np.sum(1.0 / ranks)

    def sentence(self, n_words: int) -> str:
        out = []
        for _ in range(n_words):
            if self.rng.random() < 0.3:
                out.append(str(self.rng.choice(_FUNCTION)))
            else:
                out.append(self.words[int(self.rng.choice(len(self.words), p=self._p))])
        out[0] = out[0].capitalize()
        return " ".join(out) + "."

    def sentence_length_corpus(self, n: int, min_words: int = 4, max_words: int = 40,
                               noise: float = 0.2, per_group: int = 10) -> list[ComplexityExample]:
        examples = []
        for i in range(n):
            n_words = int(self.rng.integers(min_words, max_words + 1))
            frac = (n_words - min_words) / (max_words - min_words)
            label = 4.0 - 4.0 * frac ** 0.75 + float(self.rng.uniform(-noise, noise))
            examples.append(ComplexityExample(f"syn{i}", self.sentence(n_words), label, SENTENCE,
                                              group=f"art{i // per_group}"))
        return examples

    def document_corpus(self, n_docs: int, min_sentences: int = 3, max_sentences: int = 60,
                        noise: float = 0.2) -> list[ComplexityExample]:
        """Documents whose label decreases with mean sentence length."""
        docs = []
        for i in range(n_docs):
            mean_len = float(self.rng.uniform(5, 35))
            n_sent = int(self.rng.integers(min_sentences, max_sentences + 1))
            sents = tuple(self.sentence(max(2, int(self.rng.normal(mean_len, 3)))) for _ in range(n_sent))
            label = 4.0 - 4.0 * (mean_len - 5) / 30 + float(self.rng.uniform(-noise, noise))
            docs.append(ComplexityExample(f"doc{i}", " ".join(sents), label, DOCUMENT,
                                          group=f"doc{i}", sentences=sents))
        return docs

    def judgments(self, n_sources: int, systems: int = 6) -> list[JudgmentRecord]:
        """Judgment records whose scores depend on output length and overlap with the original."""
        records = []
        for s in range(n_sources):
            original = self.sentence(int(self.rng.integers(12, 30)))
            orig_words = original[:-1].split()
            for k in range(systems):
                keep = float(self.rng.uniform(0.3, 1.0))
                kept = [w for w in orig_words if self.rng.random() < keep] or orig_words[:1]
                output = " ".join(kept) + "."
                ratio = len(kept) / len(orig_words)
                clip = lambda v: float(min(5.0, max(1.0, v)))  # noqa: E731
                records.append(JudgmentRecord(
                    record_id=f"r{s}-{k}", source_id=f"s{s}", system_id=f"sys{k}",
                    original=original, output=output,
                    fluency=clip(round(2 + 3 * keep + self.rng.uniform(-0.5, 0.5))),
                    adequacy=clip(round(1 + 4 * ratio + self.rng.uniform(-0.5, 0.5))),
                    complexity=clip(round(5 - 4 * math.sqrt(ratio) + self.rng.uniform(-0.5, 0.5))),
                ))
        return records

    def leveled_articles(self, n_articles: int, sentences_per_article: int = 8) -> dict[str, list[list[str]]]:
        """Five versions (levels 0-4) of each article; higher levels keep shorter prefixes.

        Short sentences survive unchanged into simpler levels, so the labeling
        rule has repeated sentences to resolve.
        """
        articles = {}
        for a in range(n_articles):
            base = [self.sentence(int(self.rng.integers(6, 36)))[:-1].split() for _ in range(sentences_per_article)]
            levels = []
            for level in range(5):
                keep = 1.0 - 0.18 * level
                levels.append([" ".join(words[:max(3, math.ceil(len(words) * keep))]) + "." for words in base])
            articles[f"art{a:03d}"] = levels
        return articles


def write_workspace(root, seed: int = 0, n_sources: int = 24, n_articles: int = 12) -> dict[str, str]:
    """Write a small synthetic input set plus ``run.toml`` under ``root``; returns the file map."""
    from pathlib import Path

    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    sc = SyntheticCorpus(seed)
    files: dict[str, str] = {}

    def put(name, text):
        path = root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        files[name] = str(path)

    put("frequency.tsv", "".join(f"{w}\t{c}\n" for w, c in sorted(sc.table.counts.items())))

    records = sc.judgments(n_sources)
    put("judgments.jsonl", "".join(
        json.dumps({k: getattr(r, k) for k in r.__dataclass_fields__}) + "\n" for r in records))
    refs = []
    for sid in sorted({r.source_id for r in records}, key=lambda s: int(s[1:])):
        original = next(r.original for r in records if r.source_id == sid)
        words = original[:-1].split()
        refs.append({"source_id": sid, "references": [" ".join(words[: len(words) * 2 // 3]) + ".",
                                                       " ".join(words[::2]) + "."]})
    put("references.jsonl", "".join(json.dumps(r) + "\n" for r in refs))

    for article, levels in sc.leveled_articles(n_articles).items():
        for level, sentences in enumerate(levels):
            put(f"leveled/{article}.{level}.txt", "\n".join(sentences) + "\n")

    simple, standard = [], []
    for i in range(n_articles):
        long = [sc.sentence(int(sc.rng.integers(18, 34))) for _ in range(6)]
        short = [" ".join(s[:-1].split()[:8]) + "." for s in long[:4]]
        standard.append({"article_id": f"w{i}", "text": " ".join(long)})
        simple.append({"article_id": f"w{i}", "text": " ".join(short)})
    put("wiki_simple.jsonl", "".join(json.dumps(r) + "\n" for r in simple))
    put("wiki_standard.jsonl", "".join(json.dumps(r) + "\n" for r in standard))

    sentences = [r.output for r in records[:12]]
    put("sentences.txt", "\n".join(sentences) + "\n")
    put("source.txt", "\n".join(r.original for r in records[:12]) + "\n")
    put("candidate.txt", "\n".join(sentences) + "\n")
    by_source = {r["source_id"]: r["references"] for r in refs}
    put("ref0.txt", "\n".join(by_source[r.source_id][0] for r in records[:12]) + "\n")
    put("ref1.txt", "\n".join(by_source[r.source_id][1] for r in records[:12]) + "\n")

    put("run.toml", f"""seed = {seed}

[data]
judgments = "judgments.jsonl"
references = "references.jsonl"
frequency_table = "frequency.tsv"
corpus_dir = "leveled"
sentences = "sentences.txt"
wiki_simple = "wiki_simple.jsonl"
wiki_standard = "wiki_standard.jsonl"

[head]
mode = "M3"
dual_encoder = true
use_features = true

[train]
epochs = 5
batch_size = 16
lr = 0.01

[eval]
mode = "qe"
k = 4
checkpoint = "out/checkpoint.zip"

[metrics]
source = "source.txt"
candidate = "candidate.txt"
references = ["ref0.txt", "ref1.txt"]
""")
    return files
