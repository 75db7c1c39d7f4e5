"""Command-line entry points.

Subcommands mirror the pipeline stages so each product file can be built,
inspected or replaced in isolation:

  prepare      raw XML/JSON (+ CoNLL-U parses) -> canonical dataset JSONL
  seed-extract dataset JSONL -> per-aspect seeds JSON
  embed-train  dataset JSONL -> text vector file
  auxgen       dataset + seeds + vectors -> sentence-pair JSONL
  surrogate    train the bag-of-words classifier and/or emit predictions
  score        predictions + gold pairs -> report.json / report.txt / figures
  pipeline     run everything from a key-value config file
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import auxgen, conllu, corpus, embeddings, figures, llda, metrics, pipeline, surrogate
from .errors import AspectAuxError
from .textutils import default_stopwords, load_stopwords

log = logging.getLogger(__name__)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (AspectAuxError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aspectaux",
                                     description="auxiliary-sentence toolkit for implicit-aspect "
                                                 "sentiment analysis")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(required=True, metavar="command")

    p = sub.add_parser("prepare", help="convert raw data to canonical dataset JSONL")
    p.add_argument("--format", required=True, choices=["semeval", "sentihood"])
    p.add_argument("--input", required=True)
    p.add_argument("--parses", default=None, help="CoNLL-U file aligned with the input")
    p.add_argument("--split", default="train")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("seed-extract", help="fit the labeled topic model and rank seeds")
    p.add_argument("--input", required=True, help="dataset JSONL")
    p.add_argument("--task", default="absa", choices=["absa", "tabsa"])
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--alpha", type=float, default=0.0, help="0 means 50/K")
    p.add_argument("--eta", type=float, default=llda.DEFAULT_ETA)
    p.add_argument("--iters", type=int, default=llda.DEFAULT_ITERATIONS)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--min-doc-freq", type=int, default=3)
    p.add_argument("--stopwords", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_seed_extract)

    p = sub.add_parser("embed-train", help="train skip-gram embeddings on a dataset")
    p.add_argument("--input", required=True, help="dataset JSONL")
    p.add_argument("--task", default="absa", choices=["absa", "tabsa"])
    p.add_argument("--dim", type=int, default=200)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--neg", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed_train)

    p = sub.add_parser("auxgen", help="construct auxiliary sentences and emit pairs")
    p.add_argument("--dataset", required=True, help="dataset JSONL")
    p.add_argument("--task", default="absa", choices=["absa", "tabsa"])
    p.add_argument("--seeds", required=True, help="seeds JSON")
    p.add_argument("--vectors", required=True, help="text vector file")
    p.add_argument("--threshold", type=float, default=0.3)
    p.add_argument("--no-modifiers", action="store_true")
    p.add_argument("--fallback-only", action="store_true",
                   help="ablation: auxiliary text is just the aspect name")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_auxgen)

    p = sub.add_parser("surrogate", help="train the surrogate classifier and predict")
    p.add_argument("--train-pairs", required=True)
    p.add_argument("--predict-pairs", required=True)
    p.add_argument("--task", default="absa", choices=["absa", "tabsa"])
    p.add_argument("--lr", type=float, default=2.0)
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="predictions JSONL")
    p.set_defaults(func=cmd_surrogate)

    p = sub.add_parser("score", help="compute metrics and write the report files")
    p.add_argument("--preds", required=True, help="predictions JSONL")
    p.add_argument("--gold", required=True, help="pairs JSONL carrying gold labels")
    p.add_argument("--task", required=True, choices=["absa", "tabsa"])
    p.add_argument("--out-dir", default=".", help="where report.json/report.txt/figures go")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("pipeline", help="run all stages from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_pipeline)
    return parser


def cmd_prepare(args) -> None:
    if args.format == "semeval":
        ds = corpus.load_semeval(args.input, split=args.split)
    else:
        ds = corpus.load_sentihood(args.input, split=args.split)
    if args.parses:
        ds = conllu.attach_parses(ds, args.parses)
    n = corpus.save_dataset(ds, args.out)
    print(f"wrote {n} reviews to {args.out}")


def cmd_seed_extract(args) -> None:
    ds = corpus.load_dataset(args.input, task=args.task)
    cfg = pipeline.PipelineConfig(task=args.task, seeds_per_aspect=args.k,
                                  llda_alpha=args.alpha, llda_eta=args.eta,
                                  llda_iterations=args.iters, rng_seed=args.seed,
                                  min_doc_freq=args.min_doc_freq,
                                  stopwords_file=args.stopwords or "")
    seed_lists = pipeline.extract_seeds(ds, cfg)
    llda.save_seeds(seed_lists.values(), args.out)
    print(f"wrote seeds for {len(seed_lists)} aspects to {args.out}")


def cmd_embed_train(args) -> None:
    ds = corpus.load_dataset(args.input, task=args.task)
    cfg = embeddings.SgnsConfig(dim=args.dim, window=args.window, negatives=args.neg,
                                epochs=args.epochs, min_count=args.min_count,
                                rng_seed=args.seed)
    matrix = embeddings.train_sgns(pipeline._embedding_sentences(ds), cfg)
    embeddings.save_vectors(matrix, args.out)
    print(f"wrote {len(matrix.vocab)} x {matrix.dim} vectors to {args.out}")


def cmd_auxgen(args) -> None:
    ds = corpus.load_dataset(args.dataset, task=args.task)
    seed_lists = llda.load_seeds(args.seeds)
    matrix = embeddings.load_vectors(args.vectors)
    cfg = auxgen.AuxGenConfig(threshold=args.threshold,
                              include_modifiers=not args.no_modifiers,
                              fallback_only=args.fallback_only)
    units = corpus.enumerate_units(ds)
    built = auxgen.build_all(ds, units, seed_lists, matrix, cfg)
    n = auxgen.emit_pairs(ds, units, built, args.out)
    print(f"wrote {n} sentence pairs to {args.out}")


def cmd_surrogate(args) -> None:
    train_pairs = auxgen.read_pairs(args.train_pairs)
    predict_pairs = auxgen.read_pairs(args.predict_pairs)
    cfg = surrogate.SurrogateConfig(task=args.task, learning_rate=args.lr,
                                    iterations=args.iters, l2=args.l2, rng_seed=args.seed)
    model = surrogate.train_surrogate(train_pairs, cfg)
    preds = surrogate.predict_surrogate(model, predict_pairs)
    n = metrics.save_predictions(preds, args.out)
    print(f"wrote {n} predictions to {args.out}")


def cmd_score(args) -> None:
    preds = metrics.load_predictions(args.preds)
    gold_units = metrics.units_from_pairs(auxgen.read_pairs(args.gold))
    report = metrics.compute_report(preds, gold_units, task=args.task)
    outdir = Path(args.out_dir)
    pipeline.write_report(report, outdir, write_figures=not args.no_figures)
    print(pipeline.format_report_table(report), end="")
    print(f"report files written under {outdir}")


def cmd_pipeline(args) -> None:
    cfg = pipeline.load_config(args.config)
    report = pipeline.run_pipeline(cfg)
    print(pipeline.format_report_table(report), end="")
    print(f"report files written under {cfg.workdir}")


if __name__ == "__main__":
    sys.exit(main())
