"""Command-line entry point.

    simpleqe <features|metrics|baselines|train|evaluate|chunk> --config run.toml --out DIR

Exit codes: 0 success, 2 usage/config/input error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config
from .corpus import (
    QUALITIES, JudgmentRecord, align_wiki_pairs, label_documents, label_sentences,
    load_judgments, load_leveled_corpus, load_wiki_jsonl, make_folds, split_sentences,
)
from .encoders import embedding_similarity, make_encoder, pseudo_log_likelihood
from .errors import BudgetError, NumericError, ParseError, ValidationError
from .evalharness import CorrelationReport, correlations, cross_validate, render_report, transfer_evaluate
from .features import FEATURE_NAMES, FEATURE_TITLES, load_frequency_table, read_tree_file, text_features
from .features.tokenize import split_words
from .qemodel import (
    FeaturePredictor, Featurizer, LinRegPredictor, OraclePredictor, QEPredictor, S1Ensemble,
    chunk_document, load_checkpoint, save_checkpoint,
)
from .refmetrics import sari, sentence_bleu

log = logging.getLogger("simpleqe")

COMMANDS = ("features", "metrics", "baselines", "train", "evaluate", "chunk")


# --- helpers -----------------------------------------------------------------

def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def _write_jsonl(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def _read_lines(path) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _table(cfg: RunConfig, required: bool = False):
    path = cfg.data.get("frequency_table")
    if path is None:
        if required:
            raise ValidationError("[data] frequency_table is required")
        return None
    return load_frequency_table(path)


def _featurizer(cfg: RunConfig, table) -> Featurizer | None:
    return Featurizer(table) if table is not None else None


def _complexity_data(cfg: RunConfig):
    docs = load_leveled_corpus(cfg.require("data", "corpus_dir"))
    granularity = cfg.data.get("granularity", "sentence")
    if granularity == "sentence":
        return label_sentences(docs)
    if granularity == "document":
        return label_documents(docs)
    raise ValidationError("[data] granularity must be 'sentence' or 'document'")


def _transfer_data(cfg: RunConfig):
    pairs = align_wiki_pairs(load_wiki_jsonl(cfg.require("data", "wiki_simple")),
                             load_wiki_jsonl(cfg.require("data", "wiki_standard")))
    return [ex for pair in pairs for ex in pair]


def _model_name(head) -> str:
    name = f"{'Simple-QE' if head.dual_encoder else 'Sum-QE'} {head.mode[0]}-{head.mode[1]}"
    return name + (" +features" if head.use_features else "")


def _folds(cfg: RunConfig, items):
    k = cfg.eval.get("k", 10)
    return make_folds([it.group for it in items], k, cfg.eval.get("fold_seed", cfg.seed))


def _write_report(cfg: RunConfig, out: Path, stem: str, report: CorrelationReport, **extra) -> None:
    layout = cfg.eval.get("layout", "three_stat")
    header = f"# config {cfg.config_hash[:16]}  seed {cfg.seed}\n"
    (out / f"{stem}.txt").write_text(header + render_report(report, layout), encoding="utf-8")
    (out / f"{stem}.json").write_text(report.to_json(**cfg.stamp(), **extra), encoding="utf-8")


# --- subcommands -------------------------------------------------------------

def cmd_features(cfg: RunConfig, out: Path) -> None:
    sentences = _read_lines(cfg.require("data", "sentences"))
    table = _table(cfg, required=True)
    trees = [None] * len(sentences)
    if cfg.data.get("parses") is not None:
        trees = read_tree_file(cfg.data["parses"])
        if len(trees) != len(sentences):
            raise ValidationError(
                f"sentences file has {len(sentences)} lines but parses file has {len(trees)}")
    rows = []
    for lineno, (text, tree) in enumerate(zip(sentences, trees), start=1):
        try:
            fv = text_features(text, table, tree)
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
        rows.append({"line": lineno, **fv.to_dict(), **cfg.stamp()})
    _write_jsonl(out / "features.jsonl", rows)
    log.info("wrote %d feature vectors", len(rows))


def cmd_metrics(cfg: RunConfig, out: Path) -> None:
    source = _read_lines(cfg.require("metrics", "source"))
    candidate = _read_lines(cfg.require("metrics", "candidate"))
    ref_paths = cfg.require("metrics", "references")
    refs = [_read_lines(p) for p in (ref_paths if isinstance(ref_paths, list) else [ref_paths])]
    if any(len(x) != len(source) for x in [candidate, *refs]):
        raise ValidationError("source, candidate and reference files must have equal line counts")
    rows = []
    for i, src in enumerate(source):
        s, c = split_words(src), split_words(candidate[i])
        r = [split_words(ref[i]) for ref in refs]
        if not s or not c or not all(r):
            raise ValidationError(f"line {i + 1}: empty source, candidate or reference")
        rows.append({"line": i + 1, "bleu": sentence_bleu(c, r), "sari": sari(s, c, r), **cfg.stamp()})
    _write_jsonl(out / "metrics.jsonl", rows)
    _write_json(out / "metrics.json", {
        "n": len(rows),
        "mean_bleu": float(np.mean([r["bleu"] for r in rows])) if rows else None,
        "mean_sari": float(np.mean([r["sari"] for r in rows])) if rows else None,
        **cfg.stamp(),
    })


def _load_references(path) -> dict[str, list[list[str]]]:
    refs = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
            refs[str(obj["source_id"])] = [split_words(r) for r in obj["references"]]
    return refs


def _qe_baselines(cfg: RunConfig, records: list[JudgmentRecord], table) -> CorrelationReport:
    encoder = make_encoder(cfg.encoder, cfg.seed, table)
    budget = cfg.encoder.max_units
    fit = lambda text: encoder.truncate(text, budget)  # noqa: E731
    scores: dict[str, list[float]] = {"BERT LM": [], "BERT Sim": []}
    refs = _load_references(cfg.data["references"]) if cfg.data.get("references") else None
    if refs is not None:
        scores = {"BLEU": [], "SARI": [], **scores}
    feats = {name: [] for name in FEATURE_NAMES}
    for rec in records:
        out_tokens = split_words(rec.output)
        if refs is not None:
            if rec.source_id not in refs:
                raise ValidationError(f"no references for source_id {rec.source_id!r}")
            scores["BLEU"].append(sentence_bleu(out_tokens, refs[rec.source_id]))
            scores["SARI"].append(sari(split_words(rec.original), out_tokens, refs[rec.source_id]))
        scores["BERT LM"].append(pseudo_log_likelihood(encoder, out_tokens) if out_tokens else 0.0)
        scores["BERT Sim"].append(embedding_similarity(encoder, fit(rec.original), fit(rec.output)))
        fv = text_features(rec.output, table)
        for name in FEATURE_NAMES:
            feats[name].append(getattr(fv, name))
    report = CorrelationReport({})
    golds = {q: [rec.score(q) for rec in records] for q in QUALITIES}
    for name, values in {**scores, **{FEATURE_TITLES[n]: v for n, v in feats.items()}}.items():
        report.add(name, {q: correlations(values, golds[q]) for q in QUALITIES})
    return report


def _complexity_rows(cfg: RunConfig, items, featurizer, report: CorrelationReport) -> None:
    for name in FEATURE_NAMES:
        pred = FeaturePredictor(featurizer, name).predict(items)["complexity"]
        report.add(FEATURE_TITLES[name], {"complexity": correlations(pred, [it.label for it in items])})
    pooled = cross_validate(lambda f: LinRegPredictor(featurizer), items, _folds(cfg, items),
                            None, jobs=cfg.jobs)
    report.add("LinReg", pooled.correlations())


def cmd_baselines(cfg: RunConfig, out: Path) -> None:
    table = _table(cfg, required=True)
    if cfg.data.get("judgments") is not None:
        report = _qe_baselines(cfg, load_judgments(cfg.data["judgments"]), table)
    else:
        items = _complexity_data(cfg)
        report = CorrelationReport({})
        _complexity_rows(cfg, items, Featurizer(table), report)
    _write_report(cfg, out, "baselines", report)


def _training_data(cfg: RunConfig):
    if cfg.data.get("judgments") is not None:
        return load_judgments(cfg.data["judgments"])
    if set(cfg.head.qualities) != {"complexity"}:
        raise ValidationError("complexity corpora only label 'complexity'; set [head] qualities")
    return _complexity_data(cfg)


def cmd_train(cfg: RunConfig, out: Path) -> None:
    data = _training_data(cfg)
    table = _table(cfg, required=cfg.head.use_features)
    encoder = make_encoder(cfg.encoder, cfg.seed, table)
    predictor = QEPredictor(cfg.head, encoder, cfg.seed, _featurizer(cfg, table))
    history = predictor.fit(data, cfg.train)
    meta = {**cfg.stamp(), "train": cfg.train.to_dict(), "examples": len(data)}
    save_checkpoint(out / "checkpoint.zip", predictor.model, encoder_seed=cfg.seed, meta=meta)
    with open(out / "loss.log", "w", encoding="utf-8") as fh:
        fh.write(f"# config {cfg.config_hash}  seed {cfg.seed}\n")
        for member, losses in history.items():
            for epoch, loss in enumerate(losses, start=1):
                fh.write(f"{member}\t{epoch}\t{loss:.12g}\n")
    log.info("trained on %d examples", len(data))


def _load_model(cfg: RunConfig, table):
    path = cfg.require("eval", "checkpoint")
    if not Path(path).exists():
        raise ValidationError(f"checkpoint {path} does not exist")
    return load_checkpoint(path, _featurizer(cfg, table), table)


def _check_complexity_model(model) -> None:
    first = next(iter(model.models.values())) if isinstance(model, S1Ensemble) else model
    if first.config.dual_encoder:
        raise ValidationError("checkpoint is dual-encoder; complexity and transfer need a single-encoder model")
    if "complexity" not in model.qualities:
        raise ValidationError("checkpoint does not predict complexity")


def cmd_evaluate(cfg: RunConfig, out: Path) -> None:
    mode = cfg.eval.get("mode", "qe")
    use_oracle = cfg.eval.get("predictor", "checkpoint") == "oracle"
    table = _table(cfg)
    model = None if use_oracle else _load_model(cfg, table)
    if model is not None:
        first = next(iter(model.models.values())) if isinstance(model, S1Ensemble) else model
        if first.config.use_features and table is None:
            raise ValidationError("checkpoint uses features; [data] frequency_table is required")
        head = QEPredictor.from_model(model).config
        name = cfg.eval.get("name", _model_name(head))
    else:
        name = cfg.eval.get("name", "Oracle")
    report = CorrelationReport({})

    if mode == "qe":
        records = load_judgments(cfg.require("data", "judgments"))
        folds = make_folds([r.source_id for r in records], cfg.eval.get("k", 10),
                           cfg.eval.get("fold_seed", cfg.seed))
        if use_oracle:
            factory = lambda f: OraclePredictor(QUALITIES)  # noqa: E731
        else:
            encoder = first.encoder
            factory = lambda f: QEPredictor(head, encoder, cfg.seed + f, first.featurizer)  # noqa: E731
        pooled = cross_validate(factory, records, folds, cfg.train, jobs=cfg.jobs)
        report.add(name, pooled.correlations())
    elif mode == "complexity":
        items = _complexity_data(cfg)
        if table is not None:
            _complexity_rows(cfg, items, Featurizer(table), report)
        if use_oracle:
            factory = lambda f: OraclePredictor(("complexity",))  # noqa: E731
        else:
            _check_complexity_model(model)
            cx_head = head.for_quality("complexity") if head.mode == "S1" else head
            encoder = first.encoder
            factory = lambda f: QEPredictor(cx_head, encoder, cfg.seed + f, first.featurizer)  # noqa: E731
        pooled = cross_validate(factory, items, _folds(cfg, items), cfg.train, jobs=cfg.jobs)
        report.add(name, {"complexity": pooled.correlations()["complexity"]})
    else:
        items = _transfer_data(cfg)
        if use_oracle:
            predictor = OraclePredictor(("complexity",))
        else:
            _check_complexity_model(model)
            predictor = QEPredictor.from_model(model)
        report.add(name, {"complexity": transfer_evaluate(predictor, items)})
    _write_report(cfg, out, "report", report, mode=mode)


def cmd_chunk(cfg: RunConfig, out: Path) -> None:
    budget = cfg.chunk.get("budget", cfg.encoder.max_units)
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 1:
        raise ValidationError("[chunk] budget must be a positive integer")
    encoder = make_encoder(cfg.encoder, cfg.seed)
    if cfg.data.get("documents") is not None:
        docs = [(aid, split_sentences(text)) for aid, text in load_wiki_jsonl(cfg.data["documents"])]
    else:
        docs = [(f"{d.article_id}.{d.level}", d.sentences)
                for d in load_leveled_corpus(cfg.require("data", "corpus_dir"))]
    rows = []
    for doc_id, sentences in docs:
        for i, c in enumerate(chunk_document(sentences, budget, encoder)):
            rows.append({"document": doc_id, "chunk": i, "start": c.start, "end": c.end,
                         "subword_length": c.subword_length, "truncated": c.truncated,
                         "text": c.text, **cfg.stamp()})
    _write_jsonl(out / "chunks.jsonl", rows)


HANDLERS = {
    "features": cmd_features,
    "metrics": cmd_metrics,
    "baselines": cmd_baselines,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "chunk": cmd_chunk,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simpleqe", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--out", default="out", help="output directory (default: out)")
    parser.add_argument("--jobs", type=int, default=None, help="parallel CV folds (overrides config)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.jobs is not None:
            if args.jobs < 1:
                raise ValidationError("--jobs must be >= 1")
            cfg.jobs = args.jobs
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        HANDLERS[args.command](cfg, out)
    except NumericError as exc:
        log.error("numeric failure: %s", exc)
        return 3
    except (ValidationError, ParseError, BudgetError, FileNotFoundError, KeyError) as exc:
        log.error("%s", exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
