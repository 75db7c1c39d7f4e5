"""Skip-gram word embeddings with negative sampling, trained from scratch.

The trainer is single-threaded and fully deterministic for a fixed config:
one RNG drives subsampling, window shrinking and negative draws in corpus
order.  Similarity queries use the input vectors only; output vectors are
training-internal state.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataFormatError

log = logging.getLogger(__name__)


@dataclass
class SgnsConfig:
    dim: int = 200
    window: int = 10
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_count: int = 2
    subsample: float = 1e-3
    rng_seed: int = 1

    def __post_init__(self):
        if self.dim < 1 or self.window < 1 or self.negatives < 1:
            raise ConfigError("dim, window and negatives must all be >= 1")


@dataclass
class Vocabulary:
    token_to_id: dict[str, int]
    id_to_token: list[str]
    counts: np.ndarray

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id


@dataclass
class EmbeddingMatrix:
    vocab: Vocabulary
    input_vectors: np.ndarray              # V x dim
    output_vectors: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.input_vectors.shape[1]

    def vector(self, token: str) -> np.ndarray | None:
        idx = self.vocab.token_to_id.get(token)
        return None if idx is None else self.input_vectors[idx]


def build_vocabulary(sentences, min_count: int) -> Vocabulary:
    freq: dict[str, int] = {}
    for sent in sentences:
        for tok in sent:
            freq[tok] = freq.get(tok, 0) + 1
    kept = sorted((t for t, c in freq.items() if c >= min_count),
                  key=lambda t: (-freq[t], t))
    token_to_id = {t: i for i, t in enumerate(kept)}
    counts = np.array([freq[t] for t in kept], dtype=np.int64)
    return Vocabulary(token_to_id=token_to_id, id_to_token=kept, counts=counts)


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def pair_loss(v_center: np.ndarray, u_context: np.ndarray, u_negatives: np.ndarray) -> float:
    """Negative log-likelihood of one (center, context, negatives) triple:
    -log s(u_ctx.v) - sum log s(-u_neg.v)."""
    loss = -math.log(max(_sigmoid(float(u_context @ v_center)), 1e-300))
    for u_neg in u_negatives:
        loss -= math.log(max(_sigmoid(-float(u_neg @ v_center)), 1e-300))
    return loss


def pair_gradients(v_center, u_context, u_negatives):
    """Analytic gradients of pair_loss wrt (v_center, u_context, u_negatives)."""
    g_ctx_scale = _sigmoid(float(u_context @ v_center)) - 1.0
    g_center = g_ctx_scale * u_context
    g_context = g_ctx_scale * v_center
    g_negs = np.empty_like(u_negatives)
    for j, u_neg in enumerate(u_negatives):
        scale = _sigmoid(float(u_neg @ v_center))
        g_center = g_center + scale * u_neg
        g_negs[j] = scale * v_center
    return g_center, g_context, g_negs


def train_sgns(sentences, config: SgnsConfig) -> EmbeddingMatrix:
    """Optimize the skip-gram objective by SGD over (center, context) pairs.

    Window width is resampled per center position in 1..window as in the
    reference word2vec implementation; negatives are drawn from the unigram
    distribution raised to 0.75.  Learning rate decays linearly with
    progress down to 1e-4 of its initial value.
    """
    sentences = [list(s) for s in sentences]
    vocab = build_vocabulary(sentences, config.min_count)
    if len(vocab) == 0:
        raise ConfigError("no tokens survive min_count filtering; corpus too small")

    rng = np.random.default_rng(config.rng_seed)
    V, dim = len(vocab), config.dim
    w_in = (rng.random((V, dim)) - 0.5) / dim
    w_out = np.zeros((V, dim))

    noise = vocab.counts.astype(np.float64) ** 0.75
    noise_cum = np.cumsum(noise / noise.sum())

    total_count = int(vocab.counts.sum())
    keep_prob = np.ones(V)
    if config.subsample > 0:
        f = vocab.counts / total_count
        keep_prob = np.minimum(1.0, np.sqrt(config.subsample / f) + config.subsample / f)

    sent_ids = [[vocab.token_to_id[t] for t in s if t in vocab] for s in sentences]
    planned = config.epochs * sum(len(s) for s in sent_ids)
    processed = 0
    lr0, lr_min = config.learning_rate, config.learning_rate * 1e-4

    for _epoch in range(config.epochs):
        for ids in sent_ids:
            if not ids:
                continue
            kept = [w for w in ids if keep_prob[w] >= 1.0 or rng.random() < keep_prob[w]]
            processed += len(ids)
            n = len(kept)
            if n < 2:
                continue
            lr = max(lr_min, lr0 * (1.0 - processed / max(planned, 1)))
            for pos, center in enumerate(kept):
                b = int(rng.integers(1, config.window + 1))
                lo, hi = max(0, pos - b), min(n, pos + b + 1)
                v = w_in[center]
                for cpos in range(lo, hi):
                    if cpos == pos:
                        continue
                    ctx = kept[cpos]
                    negs = _draw_negatives(rng, noise_cum, config.negatives, ctx)
                    g_center, g_ctx, g_negs = pair_gradients(v, w_out[ctx], w_out[negs])
                    w_out[ctx] -= lr * g_ctx
                    for j, nid in enumerate(negs):  # sequential: negs may repeat
                        w_out[nid] -= lr * g_negs[j]
                    v -= lr * g_center  # in-place view update of w_in[center]

    if not np.all(np.isfinite(w_in)) or not np.all(np.isfinite(w_out)):
        raise ConfigError("training diverged to non-finite values; lower the learning rate")
    return EmbeddingMatrix(vocab=vocab, input_vectors=w_in, output_vectors=w_out)


def _draw_negatives(rng, noise_cum, k: int, exclude: int) -> np.ndarray:
    negs = np.searchsorted(noise_cum, rng.random(k), side="right")
    for j in range(k):
        while negs[j] == exclude:
            negs[j] = np.searchsorted(noise_cum, rng.random(), side="right")
    return negs


# ---------------------------------------------------------------------------
# Similarity queries


def similarity(matrix: EmbeddingMatrix, w1: str, w2: str) -> float | None:
    """Cosine of the two input vectors, or None when either token is OOV."""
    v1, v2 = matrix.vector(w1), matrix.vector(w2)
    if v1 is None or v2 is None:
        return None
    n1, n2 = float(np.linalg.norm(v1)), float(np.linalg.norm(v2))
    if n1 == 0.0 or n2 == 0.0:
        return 0.0
    return float(np.clip(v1 @ v2 / (n1 * n2), -1.0, 1.0))


def max_seed_similarity(matrix: EmbeddingMatrix, token: str, seed_tokens) -> float | None:
    """Maximum cosine between token and any in-vocabulary seed; None if the
    token or every seed is OOV."""
    best: float | None = None
    for seed in seed_tokens:
        sim = similarity(matrix, token, seed)
        if sim is not None and (best is None or sim > best):
            best = sim
    return best


# ---------------------------------------------------------------------------
# Text vector format: header "V dim", then one token and dim floats per line


def save_vectors(matrix: EmbeddingMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        V, dim = matrix.input_vectors.shape
        f.write(f"{V} {dim}\n")
        for i, token in enumerate(matrix.vocab.id_to_token):
            vec = " ".join("%.9g" % x for x in matrix.input_vectors[i])
            f.write(f"{token} {vec}\n")


def load_vectors(path) -> EmbeddingMatrix:
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 2:
            raise DataFormatError(f"{path}: line 1: expected header 'V dim'")
        try:
            V, dim = int(header[0]), int(header[1])
        except ValueError as e:
            raise DataFormatError(f"{path}: line 1: non-integer header: {e}") from e
        tokens: list[str] = []
        vectors = np.empty((V, dim))
        for line_no, line in enumerate(f, 2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise DataFormatError(
                    f"{path}: line {line_no}: expected {dim} floats after the token, got {len(parts) - 1}"
                )
            if len(tokens) >= V:
                raise DataFormatError(f"{path}: line {line_no}: more rows than the header declared")
            tokens.append(parts[0])
            vectors[len(tokens) - 1] = [float(x) for x in parts[1:]]
    if len(tokens) != V:
        raise DataFormatError(f"{path}: header declared {V} rows, found {len(tokens)}")
    counts = np.ones(V, dtype=np.int64)
    vocab = Vocabulary(token_to_id={t: i for i, t in enumerate(tokens)},
                       id_to_token=tokens, counts=counts)
    return EmbeddingMatrix(vocab=vocab, input_vectors=vectors, output_vectors=None)
