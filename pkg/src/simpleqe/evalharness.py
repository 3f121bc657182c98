"""Correlation statistics, pooled cross-validation, transfer evaluation and reports.

A correlation over constant input is undefined and is returned as NaN; reports
render it as ``n/a`` (text) and ``null`` (JSON).
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .corpus import FoldAssignment
from .errors import ValidationError

UNDEFINED = float("nan")
STAT_KEYS = ("rho", "tau", "r")
STAT_SYMBOLS = {"rho": "ρ", "tau": "τ", "r": "r"}
QUALITY_TITLES = {"fluency": "Fluency", "adequacy": "Adequacy", "complexity": "Complexity"}


def _pair(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValidationError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValidationError("correlation needs at least two points")
    return x, y


def is_undefined(value: float) -> bool:
    return value is None or math.isnan(value)


def pearson(x, y) -> float:
    x, y = _pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return UNDEFINED
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def spearman(x, y) -> float:
    """Pearson correlation of mean-tie ranks."""
    x, y = _pair(x, y)
    return pearson(stats.rankdata(x), stats.rankdata(y))


def _tied_pairs(sorted_values: np.ndarray) -> int:
    """Number of tied pairs in an already-sorted array."""
    if sorted_values.size == 0:
        return 0
    boundaries = np.flatnonzero(np.diff(sorted_values)) + 1
    runs = np.diff(np.concatenate(([0], boundaries, [sorted_values.size])))
    return int(np.sum(runs * (runs - 1) // 2))


def _count_inversions(values: np.ndarray) -> int:
    """Pairs i < j with values[i] > values[j]; bottom-up merge, one vectorized pass per level."""
    a = np.asarray(values)
    n = a.size
    inversions = 0
    pos = np.arange(n)
    width = 1
    while width < n:
        pair = pos // (2 * width)
        is_right = (pos // width) % 2
        # stable: within a pair, ascending value, left before right on ties
        order = np.lexsort((is_right, a, pair))
        left_seen = np.cumsum(1 - is_right[order])
        pair_sorted = pair[order]
        first = np.searchsorted(pair_sorted, pair_sorted, side="left")
        left_before = left_seen - np.where(first > 0, left_seen[first - 1], 0)
        left_size = np.minimum(width, n - pair_sorted * 2 * width)
        rights = is_right[order] == 1
        # right element r: left elements greater than r = |L| - (left elements <= r)
        inversions += int(np.sum(left_size[rights] - left_before[rights]))
        a = a[order]
        width *= 2
    return inversions


def kendall(x, y) -> float:
    """Kendall tau-b from exact integer pair counts."""
    x, y = _pair(x, y)
    n = x.size
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    n0 = n * (n - 1) // 2
    n1 = _tied_pairs(xs)
    n3 = _tied_pairs_joint(xs, ys)
    n2 = _tied_pairs(np.sort(ys))
    if n1 == n0 or n2 == n0:
        return UNDEFINED
    discordant = _count_inversions(ys)
    numerator = n0 - n1 - n2 + n3 - 2 * discordant
    tau = numerator / math.sqrt((n0 - n1) * (n0 - n2))
    return max(-1.0, min(1.0, tau))


def _tied_pairs_joint(xs: np.ndarray, ys: np.ndarray) -> int:
    if xs.size == 0:
        return 0
    change = (np.diff(xs) != 0) | (np.diff(ys) != 0)
    boundaries = np.flatnonzero(change) + 1
    runs = np.diff(np.concatenate(([0], boundaries, [xs.size])))
    return int(np.sum(runs * (runs - 1) // 2))


@dataclass(frozen=True)
class Correlations:
    rho: float
    tau: float
    r: float

    def to_dict(self) -> dict:
        return {k: (None if is_undefined(getattr(self, k)) else getattr(self, k)) for k in STAT_KEYS}


def correlations(pred, gold) -> Correlations:
    return Correlations(spearman(pred, gold), kendall(pred, gold), pearson(pred, gold))


# --- cross-validation --------------------------------------------------------

@dataclass
class PooledPredictions:
    """Out-of-fold predictions in input order, one array per quality."""

    predictions: dict[str, np.ndarray]
    gold: dict[str, np.ndarray]
    folds: np.ndarray  # fold index of each record

    def correlations(self) -> dict[str, Correlations]:
        return {q: correlations(self.predictions[q], self.gold[q]) for q in self.predictions}

    def __len__(self):
        return len(self.folds)


def _group(item) -> str:
    return item.group


def cross_validate(
    model_factory: Callable[[int], object],
    data: Sequence,
    folds: FoldAssignment,
    cfg=None,
    jobs: int = 1,
    group_of: Callable = _group,
    gold_of: Callable | None = None,
) -> PooledPredictions:
    """Train on k-1 folds, predict the held-out one, pool over all folds.

    ``model_factory(fold_index)`` returns a fresh predictor with ``fit`` and
    ``predict``; each fold owns its predictor, results are merged by fold index.
    """
    if not data:
        raise ValidationError("cross_validate needs data")
    groups = [group_of(item) for item in data]
    missing = sorted({g for g in groups if g not in folds.groups})
    if missing:
        raise ValidationError(f"groups without a fold: {missing[:5]}")
    fold_idx = np.array([folds.fold_of(g) for g in groups])

    def run(f):
        test = np.flatnonzero(fold_idx == f)
        train = np.flatnonzero(fold_idx != f)
        if test.size == 0:
            return f, test, None
        if train.size == 0:
            raise ValidationError(f"fold {f}: empty training split")
        model = model_factory(f)
        model.fit([data[i] for i in train], cfg)
        return f, test, model.predict([data[i] for i in test])

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, range(folds.k)))
    else:
        results = [run(f) for f in range(folds.k)]

    predictions: dict[str, np.ndarray] = {}
    for f, test, preds in sorted(results, key=lambda r: r[0]):
        if preds is None:
            continue
        for q, values in preds.items():
            predictions.setdefault(q, np.full(len(data), np.nan))[test] = values
    if gold_of is None:
        from .qemodel.predictors import gold as gold_of_items
        gold = {q: gold_of_items(data, q) for q in predictions}
    else:
        gold = {q: np.array([gold_of(item, q) for item in data], dtype=np.float64) for q in predictions}
    return PooledPredictions(predictions, gold, fold_idx)


def transfer_evaluate(model, data_b: Sequence, quality: str = "complexity") -> Correlations:
    """Correlate a trained model's predictions with labels on another corpus (no retraining)."""
    if len(data_b) < 2:
        raise ValidationError("transfer evaluation needs at least two examples")
    from .qemodel.predictors import QEPredictor, gold

    predictor = model if hasattr(model, "predict") else QEPredictor.from_model(model)
    preds = predictor.predict(list(data_b))[quality]
    return correlations(preds, gold(data_b, quality))


# --- reports -----------------------------------------------------------------

@dataclass
class CorrelationReport:
    rows: dict[str, dict[str, Correlations]]

    def add(self, model: str, per_quality: dict[str, Correlations]) -> None:
        self.rows[model] = dict(per_quality)

    def to_dict(self) -> dict:
        return {m: {q: c.to_dict() for q, c in qs.items()} for m, qs in self.rows.items()}

    def to_json(self, **extra) -> str:
        payload = dict(extra)
        payload["report"] = self.to_dict()
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def format_stat(value: float) -> str:
    if is_undefined(value):
        return "n/a"
    return str(Decimal(repr(float(value))).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN))


def render_report(report: CorrelationReport, layout: str = "three_stat") -> str:
    """Plain-text table, one row per model; columns per quality are (ρ, τ, r) or r only."""
    if layout not in ("three_stat", "pearson_only"):
        raise ValidationError(f"unknown layout {layout!r}")
    if not report.rows:
        raise ValidationError("report has no rows")
    qualities: list[str] = []
    for model, per_q in report.rows.items():
        if not per_q:
            raise ValidationError(f"model {model!r} has no qualities")
        for q in per_q:
            if q not in qualities:
                qualities.append(q)
    stat_keys = STAT_KEYS if layout == "three_stat" else ("r",)

    header1 = ["Model"]
    header2 = [""]
    for q in qualities:
        title = QUALITY_TITLES.get(q, q)
        for i, key in enumerate(stat_keys):
            header1.append(title if i == 0 else "")
            header2.append(STAT_SYMBOLS[key])
    body = []
    for model, per_q in report.rows.items():
        row = [model]
        for q in qualities:
            c = per_q.get(q)
            row.extend("-" if c is None else format_stat(getattr(c, k)) for k in stat_keys)
        body.append(row)

    table = [header1, header2, *body] if layout == "three_stat" else [header1, *body]
    widths = [max(len(r[i]) for r in table) for i in range(len(header1))]
    lines = []
    for n, row in enumerate(table):
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
        if n == len(table) - len(body) - 1:
            lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
    return "\n".join(lines) + "\n"
