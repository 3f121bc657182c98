"""Reference-based baselines: sentence-level BLEU and SARI.

Inputs are token lists and are lowercased before n-gram extraction.

BLEU: geometric mean of clipped n-gram precisions, n = 1..4, times the brevity
penalty against the closest reference length (ties go to the shorter one).
A zero precision for n >= 2 is add-one smoothed, (0 + 1) / (total + 1); a zero
unigram precision makes the score 0.

SARI: per n, keep F1, delete precision and add F1 as in the original
released implementation (source and candidate counts replicated once per
reference, references pooled, so kept/deleted n-grams earn partial credit by
the fraction of references that agree). The three are averaged over n and
then with each other. Convention: when both the system's operation set and the
references' operation set are empty for some n, that component scores 1.
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

MAX_ORDER = 4


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _lower(tokens):
    return [t.lower() for t in tokens]


def sentence_bleu(candidate: Sequence[str], references: Sequence[Sequence[str]]) -> float:
    if not candidate:
        return 0.0
    if not references or any(len(r) == 0 for r in references):
        raise ValueError("sentence_bleu needs nonempty references")
    cand = _lower(candidate)
    refs = [_lower(r) for r in references]

    log_sum = 0.0
    for n in range(1, MAX_ORDER + 1):
        cand_counts = ngrams(cand, n)
        max_ref: Counter = Counter()
        for ref in refs:
            max_ref |= ngrams(ref, n)
        matches = sum(min(c, max_ref[g]) for g, c in cand_counts.items())
        total = sum(cand_counts.values())
        if matches == 0:
            if n == 1:
                return 0.0
            log_sum += math.log(1.0 / (total + 1))
        else:
            log_sum += math.log(matches / total)

    c = len(cand)
    r = min((abs(len(ref) - c), len(ref)) for ref in refs)[1]
    bp = 1.0 if c > r else math.exp(1.0 - r / c)
    return bp * math.exp(log_sum / MAX_ORDER)


def _f1(p, r):
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def sari_ngram(source: Counter, cand: Counter, refs: Counter, num_refs: int) -> tuple[float, float, float]:
    """(keep F1, delete precision, add F1) for one n-gram order."""
    src_rep = Counter({g: c * num_refs for g, c in source.items()})
    cand_rep = Counter({g: c * num_refs for g, c in cand.items()})

    keep_sys = src_rep & cand_rep
    keep_good = keep_sys & refs
    keep_ref = src_rep & refs
    if not keep_sys and not keep_ref:
        keep = 1.0
    else:
        p = sum(keep_good[g] / keep_sys[g] for g in keep_good) / len(keep_sys) if keep_sys else 0.0
        r = sum(keep_good[g] / keep_ref[g] for g in keep_good) / len(keep_ref) if keep_ref else 0.0
        keep = _f1(p, r)

    del_sys = src_rep - cand_rep
    del_good = del_sys - refs
    del_ref = src_rep - refs
    if not del_sys and not del_ref:
        delete = 1.0
    elif not del_sys:
        delete = 0.0
    else:
        delete = sum(del_good[g] / del_sys[g] for g in del_good) / len(del_sys)

    add_sys = set(cand) - set(source)
    add_ref = set(refs) - set(source)
    if not add_sys and not add_ref:
        add = 1.0
    else:
        good = len(add_sys & add_ref)
        p = good / len(add_sys) if add_sys else 0.0
        r = good / len(add_ref) if add_ref else 0.0
        add = _f1(p, r)
    return keep, delete, add


def sari_components(source, candidate, references) -> list[tuple[float, float, float]]:
    if not source or not candidate or not references or any(len(r) == 0 for r in references):
        raise ValueError("sari needs nonempty source, candidate and references")
    src = _lower(source)
    cand = _lower(candidate)
    refs = [_lower(r) for r in references]
    out = []
    for n in range(1, MAX_ORDER + 1):
        pooled: Counter = Counter()
        for ref in refs:
            pooled += ngrams(ref, n)
        out.append(sari_ngram(ngrams(src, n), ngrams(cand, n), pooled, len(refs)))
    return out


def sari(source: Sequence[str], candidate: Sequence[str], references: Sequence[Sequence[str]]) -> float:
    comps = sari_components(source, candidate, references)
    keep = sum(c[0] for c in comps) / MAX_ORDER
    delete = sum(c[1] for c in comps) / MAX_ORDER
    add = sum(c[2] for c in comps) / MAX_ORDER
    return (keep + delete + add) / 3
