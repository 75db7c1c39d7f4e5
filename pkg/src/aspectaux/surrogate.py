"""Desk-scale surrogate classifier over emitted sentence pairs.

Multinomial logistic regression on a binary bag of words with two feature
namespaces (auxiliary text vs review text), trained full-batch by gradient
descent with L2 weight decay.  Because the namespaces are separate,
swapping the auxiliary text is a pure data change: nothing else about the
model moves, which is exactly what the ablation needs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .corpus import ABSA_LABELS, TABSA_LABELS
from .errors import ValidationError
from .metrics import Prediction, argmax_label
from .textutils import simple_tokenize

log = logging.getLogger(__name__)


@dataclass
class SurrogateConfig:
    task: str = "absa"
    learning_rate: float = 2.0
    iterations: int = 300
    l2: float = 1e-4
    rng_seed: int = 0  # kept for interface stability; full-batch training needs no draws

    @property
    def labels(self) -> tuple[str, ...]:
        return ABSA_LABELS if self.task == "absa" else TABSA_LABELS


@dataclass
class SurrogateModel:
    config: SurrogateConfig
    feature_ids: dict[str, int]
    weights: np.ndarray        # n_labels x n_features
    bias: np.ndarray           # n_labels
    loss_curve: list[float] = field(default_factory=list)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.config.labels


def _features(pair: dict) -> list[str]:
    feats = [f"a={t}" for t in simple_tokenize(pair["auxiliary_text"])]
    feats += [f"s={t}" for t in simple_tokenize(pair["sentence_text"])]
    return feats


def _vectorize(pairs, feature_ids: dict[str, int], grow: bool) -> sparse.csr_matrix:
    rows, cols = [], []
    for i, pair in enumerate(pairs):
        seen = set()
        for feat in _features(pair):
            idx = feature_ids.get(feat)
            if idx is None:
                if not grow:
                    continue
                idx = len(feature_ids)
                feature_ids[feat] = idx
            if idx not in seen:
                seen.add(idx)
                rows.append(i)
                cols.append(idx)
    data = np.ones(len(rows))
    return sparse.csr_matrix((data, (rows, cols)), shape=(len(pairs), len(feature_ids)))


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def train_surrogate(pairs, config: SurrogateConfig) -> SurrogateModel:
    """Fit the classifier on labeled pairs; deterministic for a fixed config.

    Biases start at smoothed log class priors, so a label absent from the
    training data keeps prior-only scores (warned).  Weights start at zero
    and only they are L2-regularized.
    """
    labels = config.labels
    label_ids = {lab: i for i, lab in enumerate(labels)}
    y = np.empty(len(pairs), dtype=np.int64)
    for i, pair in enumerate(pairs):
        gold = pair["gold_label"]
        if gold not in label_ids:
            raise ValidationError(f"pair {i}: label {gold!r} outside the {config.task} label set")
        y[i] = label_ids[gold]
    if len(pairs) == 0:
        raise ValidationError("no training pairs")

    counts = np.bincount(y, minlength=len(labels)).astype(np.float64)
    for lab, c in zip(labels, counts):
        if c == 0:
            log.warning("label %r absent from training data; it will keep prior-only scores", lab)
    priors = (counts + 1.0) / (counts.sum() + len(labels))

    feature_ids: dict[str, int] = {}
    x = _vectorize(pairs, feature_ids, grow=True)
    n, d = x.shape
    k = len(labels)
    w = np.zeros((k, d))
    b = np.log(priors)

    onehot = np.zeros((n, k))
    onehot[np.arange(n), y] = 1.0
    lr = config.learning_rate
    loss_curve: list[float] = []
    for _ in range(config.iterations):
        probs = _softmax(x @ w.T + b)
        err = (probs - onehot) / n
        grad_w = err.T @ x + config.l2 * w
        grad_b = err.sum(axis=0)
        w -= lr * np.asarray(grad_w)
        b -= lr * grad_b
        nll = -float(np.log(np.maximum(probs[np.arange(n), y], 1e-300)).mean())
        loss_curve.append(nll + 0.5 * config.l2 * float((w * w).sum()))

    return SurrogateModel(config=config, feature_ids=feature_ids, weights=w, bias=b,
                          loss_curve=loss_curve)


def predict_surrogate(model: SurrogateModel, pairs) -> list[Prediction]:
    """Probability distributions over the task label set for each pair."""
    x = _vectorize(pairs, dict(model.feature_ids), grow=False)
    probs = _softmax(x @ model.weights.T + model.bias)
    labels = model.labels
    out = []
    for pair, row in zip(pairs, probs):
        scores = {lab: float(p) for lab, p in zip(labels, row)}
        out.append(Prediction(review_id=pair["review_id"], target=pair.get("target"),
                              category=pair["category"], scores=scores,
                              predicted=argmax_label(scores)))
    return out


def training_accuracy(model: SurrogateModel, pairs) -> float:
    preds = predict_surrogate(model, pairs)
    hits = sum(p.predicted == pair["gold_label"] for p, pair in zip(preds, pairs))
    return hits / len(pairs)
