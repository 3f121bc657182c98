"""Complexity prediction on synthetic leveled text, sentence or document granularity.

Rows: each single feature (raw correlation), LinReg over the five features and
the single-encoder S-1 model with and without the feature side channel, all
under pooled 10-fold cross-validation.

    python scripts/synthetic_complexity.py --granularity sentence --n 2000
    python scripts/synthetic_complexity.py --granularity document --n 300
"""
import argparse
import time

from simpleqe.corpus import make_folds
from simpleqe.encoders import StubEncoder
from simpleqe.evalharness import CorrelationReport, correlations, cross_validate, render_report
from simpleqe.features import FEATURE_NAMES, FEATURE_TITLES
from simpleqe.qemodel import FeaturePredictor, Featurizer, HeadConfig, LinRegPredictor, QEPredictor, TrainConfig
from simpleqe.synthetic import SyntheticCorpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--granularity", choices=("sentence", "document"), default="sentence")
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--epochs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    sc = SyntheticCorpus(args.seed)
    if args.granularity == "sentence":
        data = sc.sentence_length_corpus(args.n)
    else:
        data = sc.document_corpus(args.n)
    featurizer = Featurizer(sc.table)
    folds = make_folds([d.group for d in data], args.k, args.seed)
    gold = [d.label for d in data]

    report = CorrelationReport({})
    for name in FEATURE_NAMES:
        pred = FeaturePredictor(featurizer, name).predict(data)["complexity"]
        report.add(FEATURE_TITLES[name], {"complexity": correlations(pred, gold)})
    report.add("LinReg", cross_validate(lambda f: LinRegPredictor(featurizer), data, folds,
                                        jobs=args.jobs).correlations())
    enc = StubEncoder(seed=args.seed)
    train_cfg = TrainConfig(epochs=args.epochs, seed=args.seed)
    for use_features in (False, True):
        cfg = HeadConfig("S1", ("complexity",), dual_encoder=False, use_features=use_features)
        pooled = cross_validate(lambda f: QEPredictor(cfg, enc, args.seed + f, featurizer),
                                data, folds, train_cfg, jobs=args.jobs)
        report.add("S-1" + (" +features" if use_features else ""), pooled.correlations())

    print(f"{args.granularity} level, n = {len(data)}, {args.k}-fold pooled CV")
    print(render_report(report), end="")
    print(f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
