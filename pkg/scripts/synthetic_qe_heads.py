"""Compare head configurations on synthetic simplification judgments.

Every combination of head mode (S-1, M-1, M-3), encoder layout (single or
dual) and feature side channel is trained under pooled k-fold CV with folds
grouped by source sentence.

    python scripts/synthetic_qe_heads.py --sources 120 --epochs 15
"""
import argparse
import itertools
import time

from simpleqe.corpus import QUALITIES, make_folds
from simpleqe.encoders import StubEncoder
from simpleqe.evalharness import CorrelationReport, cross_validate, render_report
from simpleqe.qemodel import Featurizer, HeadConfig, QEPredictor, TrainConfig
from simpleqe.synthetic import SyntheticCorpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sources", type=int, default=120)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--epochs", type=int, default=15)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--layout", choices=("three_stat", "pearson_only"), default="pearson_only")
    args = ap.parse_args()

    t0 = time.perf_counter()
    sc = SyntheticCorpus(args.seed)
    records = sc.judgments(args.sources)
    folds = make_folds([r.source_id for r in records], args.k, args.seed)
    featurizer = Featurizer(sc.table)
    enc = StubEncoder(seed=args.seed)
    train_cfg = TrainConfig(epochs=args.epochs, seed=args.seed)

    report = CorrelationReport({})
    for dual, mode, feats in itertools.product((False, True), ("S1", "M1", "M3"), (False, True)):
        cfg = HeadConfig(mode, QUALITIES, dual_encoder=dual, use_features=feats)
        pooled = cross_validate(lambda f: QEPredictor(cfg, enc, args.seed + f, featurizer),
                                records, folds, train_cfg, jobs=args.jobs)
        name = f"{'Simple-QE' if dual else 'Sum-QE'} {mode[0]}-{mode[1]}" + (" +features" if feats else "")
        report.add(name, pooled.correlations())

    print(f"{len(records)} judgments over {args.sources} sources, {args.k}-fold pooled CV")
    print(render_report(report, args.layout), end="")
    print(f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
