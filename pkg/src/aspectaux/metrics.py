"""Task metrics over (prediction, gold-unit) streams.

All ops are pure functions over aligned unit keys (review_id, target,
category).  Aspect detection is always the none-vs-rest decision; sentiment
metrics restrict to units whose gold label is not 'none'.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .corpus import ClassificationUnit, LABEL_ORDER, SENTIMENT_LABELS
from .errors import DataFormatError, MetricUndefinedError, ValidationError

log = logging.getLogger(__name__)


@dataclass
class Prediction:
    review_id: str
    target: str | None
    category: str
    scores: dict[str, float]     # probability per admissible label, sums to 1
    predicted: str

    def key(self) -> tuple[str, str, str]:
        return (self.review_id, self.target or "", self.category)


def argmax_label(scores: dict[str, float], allowed=None) -> str:
    """Highest-scoring label, ties broken by canonical label order."""
    items = [(lab, p) for lab, p in scores.items() if allowed is None or lab in allowed]
    if not items:
        raise MetricUndefinedError("no admissible labels to choose from")
    items.sort(key=lambda lp: (-lp[1], LABEL_ORDER[lp[0]]))
    return items[0][0]


def make_prediction(review_id, target, category, scores: dict[str, float]) -> Prediction:
    total = sum(scores.values())
    if not np.isclose(total, 1.0, atol=1e-6):
        raise ValidationError(f"scores for ({review_id}, {target}, {category}) sum to {total}, not 1")
    return Prediction(review_id=review_id, target=target, category=category,
                      scores=scores, predicted=argmax_label(scores))


def align(preds, golds) -> list[tuple[Prediction, ClassificationUnit]]:
    """Pair predictions with gold units by key; error on any mismatch."""
    by_key = {p.key(): p for p in preds}
    missing = [u.key() for u in golds if u.key() not in by_key]
    if missing:
        raise ValidationError(f"{len(missing)} gold units without predictions, first: {missing[:5]}")
    extra = {p.key() for p in preds} - {u.key() for u in golds}
    if extra:
        raise ValidationError(f"{len(extra)} predictions without gold units, first: {sorted(extra)[:5]}")
    return [(by_key[u.key()], u) for u in golds]


# ---------------------------------------------------------------------------
# ABSA metrics


def semeval_categorization_prf(preds, golds) -> tuple[float, float, float]:
    """Micro-averaged aspect-detection precision/recall/F1 over unit decisions."""
    tp = fp = fn = 0
    for p, g in align(preds, golds):
        pred_pos = p.predicted != "none"
        gold_pos = g.gold != "none"
        if pred_pos and gold_pos:
            tp += 1
        elif pred_pos:
            fp += 1
        elif gold_pos:
            fn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


SENTIMENT_CLASS_SETS = {
    "binary": ("negative", "positive"),
    "three": ("negative", "neutral", "positive"),
    "four": ("negative", "neutral", "positive", "conflict"),
}


def semeval_sentiment_accuracy(preds, golds, classes: str) -> float:
    """Accuracy over gold-positive units inside the class set; the
    prediction is re-decided as argmax over that class set only."""
    if classes not in SENTIMENT_CLASS_SETS:
        raise ValidationError(f"classes must be one of {sorted(SENTIMENT_CLASS_SETS)}")
    class_set = SENTIMENT_CLASS_SETS[classes]
    correct = total = 0
    for p, g in align(preds, golds):
        if g.gold == "none" or g.gold not in class_set:
            continue
        total += 1
        if argmax_label(p.scores, allowed=class_set) == g.gold:
            correct += 1
    if total == 0:
        raise MetricUndefinedError(f"no gold units inside the {classes} class set")
    return correct / total


# ---------------------------------------------------------------------------
# TABSA metrics


def _groups(preds, golds, expected_categories: int = 4):
    """Group aligned units by (review_id, target), preserving first-seen order."""
    grouped: dict[tuple[str, str], list[tuple[Prediction, ClassificationUnit]]] = {}
    for p, g in align(preds, golds):
        grouped.setdefault((g.review_id, g.target or ""), []).append((p, g))
    for key, members in grouped.items():
        if len(members) != expected_categories:
            raise ValidationError(
                f"group {key} has {len(members)} category units, expected {expected_categories}"
            )
    return grouped


def sentihood_strict_accuracy(preds, golds, include_polarity: bool = True,
                              expected_categories: int = 4) -> float:
    """Fraction of (review, target) groups with every category decision right.

    A group scores 1 only if each category's none-vs-not decision matches
    gold and, when include_polarity is set, every detected category also
    carries the gold polarity.
    """
    grouped = _groups(preds, golds, expected_categories)
    correct = 0
    for members in grouped.values():
        ok = True
        for p, g in members:
            if (p.predicted == "none") != (g.gold == "none"):
                ok = False
                break
            if include_polarity and g.gold != "none" and p.predicted != g.gold:
                ok = False
                break
        correct += ok
    if not grouped:
        raise MetricUndefinedError("no groups to score")
    return correct / len(grouped)


def sentihood_macro_f1(preds, golds, expected_categories: int = 4) -> float:
    """Harmonic mean of macro-precision and macro-recall of aspect detection,
    averaged over (review, target) groups.

    A group with no gold-positive categories contributes recall 1 (logged);
    a group with no predicted-positive categories contributes precision 1.
    """
    grouped = _groups(preds, golds, expected_categories)
    if not grouped:
        raise MetricUndefinedError("no groups to score")
    p_sum = r_sum = 0.0
    for key, members in grouped.items():
        pred_pos = {g.category for p, g in members if p.predicted != "none"}
        gold_pos = {g.category for p, g in members if g.gold != "none"}
        hit = len(pred_pos & gold_pos)
        p_sum += hit / len(pred_pos) if pred_pos else 1.0
        if gold_pos:
            r_sum += hit / len(gold_pos)
        else:
            log.info("group %s has no gold-positive categories; recall counted as 1", key)
            r_sum += 1.0
    macro_p = p_sum / len(grouped)
    macro_r = r_sum / len(grouped)
    if macro_p + macro_r == 0.0:
        return 0.0
    return 2 * macro_p * macro_r / (macro_p + macro_r)


# ---------------------------------------------------------------------------
# AUC


def auc(preds, golds, mode: str) -> float:
    """Area under the ROC curve via the rank-statistic formulation, ties averaged.

    mode 'aspect_detection': score = 1 - P(none), label = gold != none.
    mode 'sentiment': restricted to gold != none; score = P(positive),
    label = gold == positive.
    """
    scores: list[float] = []
    labels: list[bool] = []
    for p, g in align(preds, golds):
        if mode == "aspect_detection":
            scores.append(1.0 - p.scores.get("none", 0.0))
            labels.append(g.gold != "none")
        elif mode == "sentiment":
            if g.gold == "none":
                continue
            scores.append(p.scores.get("positive", 0.0))
            labels.append(g.gold == "positive")
        else:
            raise ValidationError("mode must be 'aspect_detection' or 'sentiment'")
    n_pos = sum(labels)
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricUndefinedError(f"AUC undefined: {n_pos} positives, {n_neg} negatives")
    ranks = rankdata(scores, method="average")
    pos_rank_sum = float(sum(r for r, lab in zip(ranks, labels) if lab))
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


# ---------------------------------------------------------------------------
# Report container and prediction I/O


@dataclass
class MetricsReport:
    task: str
    values: dict[str, float] = field(default_factory=dict)

    def validate(self):
        for name, score in self.values.items():
            if not 0.0 <= score <= 1.0:
                raise ValidationError(f"metric {name} = {score} outside [0, 1]")
        return self


def compute_report(preds, golds, task: str) -> MetricsReport:
    """Every metric the task defines, from one aligned pass."""
    if task == "absa":
        precision, recall, f1 = semeval_categorization_prf(preds, golds)
        values = {"precision": precision, "recall": recall, "f1": f1}
        for classes, key in (("binary", "acc_binary"), ("three", "acc_3class"), ("four", "acc_4class")):
            try:
                values[key] = semeval_sentiment_accuracy(preds, golds, classes)
            except MetricUndefinedError as e:
                log.warning("%s skipped: %s", key, e)
    elif task == "tabsa":
        values = {
            "strict_acc": sentihood_strict_accuracy(preds, golds),
            "macro_f1": sentihood_macro_f1(preds, golds),
        }
        for mode, key in (("aspect_detection", "aspect_auc"), ("sentiment", "sentiment_auc")):
            try:
                values[key] = auc(preds, golds, mode)
            except MetricUndefinedError as e:
                log.warning("%s skipped: %s", key, e)
        try:
            values["sentiment_acc"] = _tabsa_sentiment_accuracy(preds, golds)
        except MetricUndefinedError as e:
            log.warning("sentiment_acc skipped: %s", e)
    else:
        raise ValidationError("task must be 'absa' or 'tabsa'")
    return MetricsReport(task=task, values=values).validate()


def _tabsa_sentiment_accuracy(preds, golds) -> float:
    correct = total = 0
    for p, g in align(preds, golds):
        if g.gold == "none":
            continue
        total += 1
        if argmax_label(p.scores, allowed=("negative", "positive")) == g.gold:
            correct += 1
    if total == 0:
        raise MetricUndefinedError("no gold-positive units")
    return correct / total


def save_predictions(preds, path) -> int:
    records = sorted(preds, key=lambda p: p.key())
    with open(path, "w", encoding="utf-8") as f:
        for p in records:
            f.write(json.dumps({
                "review_id": p.review_id, "target": p.target, "category": p.category,
                "scores": p.scores, "predicted": p.predicted,
            }, ensure_ascii=False) + "\n")
    return len(records)


def load_predictions(path) -> list[Prediction]:
    preds = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataFormatError(f"{path}: line {line_no}: {e}") from e
            for fieldname in ("review_id", "category", "scores", "predicted"):
                if fieldname not in rec:
                    raise DataFormatError(f"{path}: line {line_no}: missing field {fieldname!r}")
            unknown = set(rec["scores"]) - set(SENTIMENT_LABELS)
            if unknown:
                raise DataFormatError(f"{path}: line {line_no}: unknown labels {sorted(unknown)}")
            preds.append(Prediction(
                review_id=rec["review_id"], target=rec.get("target"),
                category=rec["category"],
                scores={k: float(v) for k, v in rec["scores"].items()},
                predicted=rec["predicted"],
            ))
    return preds


def units_from_pairs(pairs) -> list[ClassificationUnit]:
    """Gold units as carried by a sentence-pair file."""
    return [ClassificationUnit(review_id=rec["review_id"], target=rec.get("target"),
                               category=rec["category"], gold=rec["gold_label"])
            for rec in pairs]
