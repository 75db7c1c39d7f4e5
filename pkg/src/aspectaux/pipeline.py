"""End-to-end orchestration: prepare -> seeds -> embeddings -> pairs ->
surrogate (or imported predictions) -> metrics report.

Every stage writes its product to the working directory and the next stage
reads it back, so any stage can be re-run or replaced from the CLI.  All
stages are deterministic for a fixed config; re-running a pipeline
reproduces every output file byte for byte.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, fields
from pathlib import Path

from . import auxgen, conllu, corpus, embeddings, figures, llda, metrics, surrogate
from .errors import ConfigError, PipelineStageError
from .textutils import default_stopwords, load_stopwords

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    task: str = "absa"                    # absa | tabsa
    data_format: str = ""                 # semeval | sentihood | jsonl (defaults per task)
    train_data: str = ""
    test_data: str = ""
    train_parses: str = ""
    test_parses: str = ""
    workdir: str = "out"
    threshold: float = 0.3
    seeds_per_aspect: int = 10
    include_modifiers: bool = True
    fallback_only: bool = False
    stopwords_file: str = ""
    min_doc_freq: int = 3
    llda_alpha: float = 0.0               # 0 means 50/K
    llda_eta: float = llda.DEFAULT_ETA
    llda_iterations: int = llda.DEFAULT_ITERATIONS
    embed_dim: int = 200
    embed_window: int = 10
    embed_negatives: int = 5
    embed_epochs: int = 5
    embed_min_count: int = 2
    surrogate_lr: float = 2.0
    surrogate_iterations: int = 300
    surrogate_l2: float = 1e-4
    rng_seed: int = 13
    predictions_file: str = ""            # skip the surrogate, import these instead
    write_figures: bool = True

    def __post_init__(self):
        if self.task not in ("absa", "tabsa"):
            raise ConfigError(f"task must be 'absa' or 'tabsa', got {self.task!r}")
        if not self.data_format:
            self.data_format = "semeval" if self.task == "absa" else "sentihood"


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def load_config(path) -> PipelineConfig:
    """Parse the plain key-value config format: 'key = value', '#' comments."""
    known = {f.name: f.type for f in fields(PipelineConfig)}
    values: dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}: line {line_no}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in known:
                raise ConfigError(f"{path}: line {line_no}: unknown key {key!r}")
            values[key] = _coerce(key, value, known[key], path, line_no)
    return PipelineConfig(**values)


def _coerce(key, value, annot, path, line_no):
    annot = str(annot)
    try:
        if annot == "bool":
            return _BOOL[value.lower()]
        if annot == "int":
            return int(value)
        if annot == "float":
            return float(value)
        return value
    except (KeyError, ValueError):
        raise ConfigError(f"{path}: line {line_no}: bad value {value!r} for {key!r}") from None


def _llda_documents(dataset: corpus.Dataset):
    """Label-restricted documents for seed fitting: one per annotated review,
    lowercased non-punctuation tokens, labels = its annotated categories."""
    docs, labels = [], []
    for review in dataset.reviews:
        cats = sorted({a.category for a in review.annotations})
        if not cats:
            continue
        toks = [t for t in review.token_forms(lower=True) if any(c.isalnum() for c in t)]
        if review.tokens:
            toks = [t.form.lower() for t in review.tokens
                    if t.upos != "PUNCT" and any(c.isalnum() for c in t.form)]
        if not toks:
            continue
        docs.append(toks)
        labels.append(cats)
    return docs, labels


def _embedding_sentences(dataset: corpus.Dataset, stopwords=None):
    """Lowercased content tokens per sentence; stopwords and punctuation are
    dropped so the embedding space is not dominated by function-word hubs."""
    stop = default_stopwords() if stopwords is None else stopwords
    out = []
    for review in dataset.reviews:
        toks = [t for t in review.token_forms(lower=True)
                if any(c.isalnum() for c in t) and t not in stop]
        if toks:
            out.append(toks)
    return out


def extract_seeds(dataset: corpus.Dataset, cfg: PipelineConfig) -> dict[str, llda.SeedList]:
    docs, labels = _llda_documents(dataset)
    alpha = cfg.llda_alpha if cfg.llda_alpha > 0 else None
    model = llda.fit(docs, labels, topics=dataset.categories, alpha=alpha, eta=cfg.llda_eta,
                     iterations=cfg.llda_iterations, rng_seed=cfg.rng_seed)
    stop = load_stopwords(cfg.stopwords_file) if cfg.stopwords_file else default_stopwords()
    stop = frozenset(stop) | set(dataset.categories)
    return {cat: llda.top_seeds(model, cat, cfg.seeds_per_aspect, stopwords=stop,
                                min_doc_freq=cfg.min_doc_freq)
            for cat in dataset.categories}


def run_pipeline(cfg: PipelineConfig) -> metrics.MetricsReport:
    """Run every stage and return (and write) the metrics report."""
    workdir = Path(cfg.workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    def stage(name, fn):
        try:
            result = fn()
        except Exception as e:  # noqa: BLE001 - rewrapped with the stage name
            raise PipelineStageError(name, e) from e
        log.info("stage %s done", name)
        return result

    def _prepare():
        sets = {}
        for split, data_path, parse_path in (("train", cfg.train_data, cfg.train_parses),
                                             ("test", cfg.test_data, cfg.test_parses)):
            if not data_path:
                raise ConfigError(f"missing {split}_data path")
            if cfg.data_format == "semeval":
                ds = corpus.load_semeval(data_path, split=split)
            elif cfg.data_format == "sentihood":
                ds = corpus.load_sentihood(data_path, split=split)
            elif cfg.data_format == "jsonl":
                ds = corpus.load_dataset(data_path, task=cfg.task)
            else:
                raise ConfigError(f"unknown data_format {cfg.data_format!r}")
            if parse_path:
                ds = conllu.attach_parses(ds, parse_path)
            corpus.save_dataset(ds, workdir / f"dataset_{split}.jsonl")
            sets[split] = ds
        return sets

    datasets = stage("prepare", _prepare)
    train_ds, test_ds = datasets["train"], datasets["test"]

    def _seeds():
        seed_lists = extract_seeds(train_ds, cfg)
        llda.save_seeds(seed_lists.values(), workdir / "seeds.json")
        if cfg.write_figures:
            figdir = workdir / "figures"
            figdir.mkdir(exist_ok=True)
            figures.render_seed_figure(seed_lists, figdir / "seeds.png")
        return seed_lists

    seed_lists = stage("seed-extract", _seeds)

    def _embed():
        sgns_cfg = embeddings.SgnsConfig(dim=cfg.embed_dim, window=cfg.embed_window,
                                         negatives=cfg.embed_negatives, epochs=cfg.embed_epochs,
                                         min_count=cfg.embed_min_count, rng_seed=cfg.rng_seed)
        matrix = embeddings.train_sgns(_embedding_sentences(train_ds), sgns_cfg)
        embeddings.save_vectors(matrix, workdir / "vectors.txt")
        return matrix

    matrix = stage("embed-train", _embed)

    def _pairs():
        aux_cfg = auxgen.AuxGenConfig(threshold=cfg.threshold,
                                      seeds_per_aspect=cfg.seeds_per_aspect,
                                      include_modifiers=cfg.include_modifiers,
                                      fallback_only=cfg.fallback_only)
        out = {}
        for split, ds in (("train", train_ds), ("test", test_ds)):
            units = corpus.enumerate_units(ds)
            built = auxgen.build_all(ds, units, seed_lists, matrix, aux_cfg)
            auxgen.emit_pairs(ds, units, built, workdir / f"pairs_{split}.jsonl")
            out[split] = (units, auxgen.read_pairs(workdir / f"pairs_{split}.jsonl"))
        return out

    pair_sets = stage("auxgen", _pairs)
    test_units = pair_sets["test"][0]

    if cfg.predictions_file:
        preds = stage("import-predictions", lambda: metrics.load_predictions(cfg.predictions_file))
    else:
        def _surrogate():
            sur_cfg = surrogate.SurrogateConfig(task=cfg.task, learning_rate=cfg.surrogate_lr,
                                                iterations=cfg.surrogate_iterations,
                                                l2=cfg.surrogate_l2, rng_seed=cfg.rng_seed)
            model = surrogate.train_surrogate(pair_sets["train"][1], sur_cfg)
            predictions = surrogate.predict_surrogate(model, pair_sets["test"][1])
            metrics.save_predictions(predictions, workdir / "predictions.jsonl")
            return predictions

        preds = stage("surrogate", _surrogate)

    def _score():
        report = metrics.compute_report(preds, test_units, task=cfg.task)
        write_report(report, workdir, write_figures=cfg.write_figures)
        return report

    return stage("score", _score)


# ---------------------------------------------------------------------------
# Report files


def write_report(report: metrics.MetricsReport, outdir, write_figures: bool = True) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    payload = {"task": report.task, "metrics": report.values}
    with open(outdir / "report.json", "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    with open(outdir / "report.txt", "w", encoding="utf-8") as f:
        f.write(format_report_table(report))
    if write_figures:
        figdir = outdir / "figures"
        figdir.mkdir(exist_ok=True)
        figures.render_metrics_figure(report, figdir / "metrics.png")


_SECTIONS = {
    "absa": (
        ("categorization", (("precision", "Precision"), ("recall", "Recall"), ("f1", "F1"))),
        ("sentiment", (("acc_binary", "Binary"), ("acc_3class", "3-Class"),
                       ("acc_4class", "4-Class"))),
    ),
    "tabsa": (
        ("categorization", (("strict_acc", "StrictAcc"), ("macro_f1", "Macro-F1"),
                            ("aspect_auc", "AUC"))),
        ("sentiment", (("sentiment_acc", "Acc"), ("sentiment_auc", "AUC"))),
    ),
}


def format_report_table(report: metrics.MetricsReport) -> str:
    """Two-section table (categorization | sentiment), tab-delimited rows."""
    lines = [f"task: {report.task}"]
    for section, cols in _SECTIONS[report.task]:
        present = [(title, report.values[key]) for key, title in cols if key in report.values]
        lines.append(section + "\t" + "\t".join(t for t, _ in present))
        lines.append("\t" + "\t".join(f"{v:.4f}" for _, v in present))
    return "\n".join(lines) + "\n"
