"""Labeled LDA by collapsed Gibbs sampling, with per-aspect seed ranking.

One topic per aspect category.  Each document's admissible topics are
restricted to its observed label set, so the sampler only ever proposes
labels the document actually carries.  Documents with a single label are
point-mass and never need resampling, which makes fitting on mostly
single-label corpora cheap.

Per-document RNG streams are derived from (rng_seed, doc_key) so that a fit
is reproducible and, up to sampling noise, insensitive to document order.
"""

from __future__ import annotations

import json
import logging
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

log = logging.getLogger(__name__)

DEFAULT_ETA = 0.01
DEFAULT_ITERATIONS = 500


def default_alpha(num_topics: int) -> float:
    """Symmetric document-topic prior; the usual 50/K heuristic."""
    return 50.0 / num_topics


@dataclass
class LldaModel:
    topics: tuple[str, ...]                  # aspect names, one topic each
    alpha: float
    eta: float
    vocabulary: dict[str, int]               # token -> id
    tokens: list[str]                        # id -> token
    topic_word_counts: np.ndarray            # K x V ints
    doc_topic_counts: np.ndarray             # D x K ints
    assignments: list[np.ndarray]            # per-document topic ids
    doc_labels: list[tuple[int, ...]]        # per-document admissible topic ids
    doc_freq: np.ndarray                     # V ints, documents containing each token
    iterations: int
    rng_seed: int
    topic_totals: np.ndarray = field(init=False)

    def __post_init__(self):
        self.topic_totals = self.topic_word_counts.sum(axis=1)

    @property
    def num_topics(self) -> int:
        return len(self.topics)

    @property
    def vocab_size(self) -> int:
        return len(self.tokens)

    def topic_word_probs(self, topic: int) -> np.ndarray:
        """Smoothed word distribution for one topic; sums to 1."""
        counts = self.topic_word_counts[topic]
        return (counts + self.eta) / (self.topic_totals[topic] + self.vocab_size * self.eta)


@dataclass
class SeedList:
    aspect: str
    seeds: list[tuple[str, float]]

    def tokens(self) -> list[str]:
        return [t for t, _ in self.seeds]


def fit(documents, labels, topics, alpha: float | None = None, eta: float = DEFAULT_ETA,
        iterations: int = DEFAULT_ITERATIONS, rng_seed: int = 0,
        doc_keys=None, on_sweep=None) -> LldaModel:
    """Run collapsed Gibbs sampling over a labeled corpus.

    documents: list of token lists (already lowercased/filtered by the caller).
    labels:    parallel list of label collections; every label must be in topics.
    topics:    the full aspect list; fixes topic ids and K.
    on_sweep:  optional callback(sweep_index, model) invoked after every sweep,
               used by invariant checks in the tests.

    Tokens are resampled proportionally to
    (doc_topic_count + alpha) * (topic_word_count + eta) / (topic_total + V*eta)
    with the proposal restricted to the document's label set.  Deterministic
    for a fixed rng_seed and doc_keys.
    """
    topics = tuple(topics)
    topic_id = {t: i for i, t in enumerate(topics)}
    if len(documents) != len(labels):
        raise ValidationError("documents and labels must be parallel lists")
    if not documents:
        raise ValidationError("empty corpus")
    if alpha is None:
        alpha = default_alpha(len(topics))

    doc_label_ids: list[tuple[int, ...]] = []
    for d, labs in enumerate(labels):
        ids = sorted({topic_id[l] for l in labs})  # KeyError on unknown label is deliberate
        if not ids:
            raise ValidationError(f"document {d} has an empty label set")
        if not documents[d]:
            raise ValidationError(f"document {d} has no tokens")
        doc_label_ids.append(tuple(ids))

    vocabulary: dict[str, int] = {}
    tokens: list[str] = []
    docs_ids: list[list[int]] = []
    for doc in documents:
        ids = []
        for w in doc:
            if w not in vocabulary:
                vocabulary[w] = len(tokens)
                tokens.append(w)
            ids.append(vocabulary[w])
        docs_ids.append(ids)

    K, V, D = len(topics), len(tokens), len(documents)
    doc_freq = np.zeros(V, dtype=np.int64)
    for ids in docs_ids:
        for w in set(ids):
            doc_freq[w] += 1

    if doc_keys is None:
        doc_keys = list(range(D))
    rngs = [np.random.default_rng(np.random.SeedSequence(entropy=rng_seed, spawn_key=(int(k),)))
            for k in doc_keys]

    topic_word = np.zeros((K, V), dtype=np.int64)
    doc_topic = np.zeros((D, K), dtype=np.int64)
    topic_total = np.zeros(K, dtype=np.int64)
    assignments: list[np.ndarray] = []

    for d, ids in enumerate(docs_ids):
        labs = doc_label_ids[d]
        if len(labs) == 1:
            z = np.full(len(ids), labs[0], dtype=np.int64)
        else:
            z = np.asarray(rngs[d].choice(labs, size=len(ids)), dtype=np.int64)
        assignments.append(z)
        for w, k in zip(ids, z):
            topic_word[k, w] += 1
            doc_topic[d, k] += 1
            topic_total[k] += 1

    if iterations == 0:
        log.warning("iterations=0: returning initialization-only assignments")

    veta = V * eta
    # plain-list views for the hot loop; numpy scalar indexing is too slow here
    tw = topic_word.tolist()
    tt = topic_total.tolist()

    for sweep in range(iterations):
        for d, ids in enumerate(docs_ids):
            labs = doc_label_ids[d]
            if len(labs) == 1:
                continue  # point-mass conditional, resampling is a no-op
            z = assignments[d]
            zl = z.tolist()
            dt = doc_topic[d].tolist()
            u = rngs[d].random(len(ids)).tolist()
            for i, w in enumerate(ids):
                old = zl[i]
                dt[old] -= 1
                tw[old][w] -= 1
                tt[old] -= 1
                cum = []
                total = 0.0
                for k in labs:
                    total += (dt[k] + alpha) * (tw[k][w] + eta) / (tt[k] + veta)
                    cum.append(total)
                new = labs[bisect_right(cum, u[i] * total)]
                zl[i] = new
                dt[new] += 1
                tw[new][w] += 1
                tt[new] += 1
            z[:] = zl
            doc_topic[d] = dt
        if on_sweep is not None:
            topic_word = np.asarray(tw, dtype=np.int64)
            model = LldaModel(topics=topics, alpha=alpha, eta=eta, vocabulary=vocabulary,
                              tokens=tokens, topic_word_counts=topic_word,
                              doc_topic_counts=doc_topic, assignments=assignments,
                              doc_labels=doc_label_ids, doc_freq=doc_freq,
                              iterations=sweep + 1, rng_seed=rng_seed)
            on_sweep(sweep, model)

    topic_word = np.asarray(tw, dtype=np.int64)
    return LldaModel(topics=topics, alpha=alpha, eta=eta, vocabulary=vocabulary,
                     tokens=tokens, topic_word_counts=topic_word, doc_topic_counts=doc_topic,
                     assignments=assignments, doc_labels=doc_label_ids, doc_freq=doc_freq,
                     iterations=iterations, rng_seed=rng_seed)


def top_seeds(model: LldaModel, aspect: str, k: int, stopwords=frozenset(),
              min_doc_freq: int = 3) -> SeedList:
    """Rank tokens for one aspect by smoothed topic-word probability.

    Stopwords and tokens seen in fewer than min_doc_freq documents are
    excluded.  Returns fewer than k seeds (with a warning) when the
    vocabulary runs out.
    """
    if aspect not in model.topics:
        raise ValidationError(f"unknown aspect {aspect!r}; topics are {list(model.topics)}")
    if k <= 0:
        return SeedList(aspect=aspect, seeds=[])
    topic = model.topics.index(aspect)
    probs = model.topic_word_probs(topic)
    order = np.argsort(-probs, kind="stable")
    seeds: list[tuple[str, float]] = []
    for idx in order:
        token = model.tokens[idx]
        if token in stopwords or model.doc_freq[idx] < min_doc_freq:
            continue
        seeds.append((token, float(probs[idx])))
        if len(seeds) == k:
            break
    if len(seeds) < k:
        log.warning("aspect %s: only %d of %d requested seeds eligible", aspect, len(seeds), k)
    return SeedList(aspect=aspect, seeds=seeds)


def save_seeds(seed_lists, path) -> None:
    payload = {sl.aspect: [[t, s] for t, s in sl.seeds] for sl in seed_lists}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")


def load_seeds(path) -> dict[str, SeedList]:
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    return {aspect: SeedList(aspect=aspect, seeds=[(t, float(s)) for t, s in pairs])
            for aspect, pairs in payload.items()}
