"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with its runtime and enforcing the stated budget.

The real-data seed-plausibility check needs the benchmark corpora, which
are license-restricted and not bundled; point ASPECTAUX_DATA_DIR at a
directory containing them (see README) to enable it.
"""

import json
import math
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from aspectaux import auxgen, conllu, corpus, embeddings, llda, metrics, pipeline
from aspectaux.corpus import Annotation, ClassificationUnit, Review
from aspectaux.syntax import Rule, modifiers_for
from aspectaux.textutils import default_stopwords

from conftest import FIXTURES, REPO, fixture_embedding, fixture_seeds, real_data_dir
from synthcorpus import TOPIC_NAMES, planted_topic_corpus, planted_vocab, two_cluster_corpus
from synthpipe import categorization_f1

RESULTS: list[str] = []


@contextmanager
def criterion(name: str, budget_s: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL ({time.perf_counter() - start:.1f}s)")
        raise
    elapsed = time.perf_counter() - start
    line = f"ACCEPTANCE {name}: PASS ({elapsed:.1f}s, budget {budget_s:.0f}s)"
    print(line)
    RESULTS.append(line)
    assert elapsed < budget_s, f"{name} exceeded its runtime budget: {elapsed:.1f}s"


def test_dependency_rule_examples():
    with criterion("dependency-rule-examples", budget_s=1.0):
        graphs = {sid: toks for sid, toks in conllu.read_conllu(FIXTURES / "golden_phrases.conllu")}

        toks = graphs["phrase_amod"]
        hits = modifiers_for(toks, next(t.index for t in toks if t.form == "sushi"))
        assert [(h.modifier.form, h.rule) for h in hits] == [("delicious", Rule.AMOD)]

        toks = graphs["phrase_nsubj"]
        hits = modifiers_for(toks, next(t.index for t in toks if t.form == "sushi"))
        assert [(h.modifier.form, h.rule) for h in hits] == [("yummy", Rule.NSUBJ_ADJ)]

        toks = graphs["phrase_advmod"]
        hits = modifiers_for(toks, next(t.index for t in toks if t.form == "food"))
        assert [(h.modifier.form, h.rule) for h in hits] == [
            ("Genetically", Rule.ADVMOD_OUTLIER), ("modified", Rule.AMOD)]


def test_running_example_assembly():
    with criterion("running-example-assembly", budget_s=1.0):
        graphs = {sid: toks for sid, toks in
                  conllu.read_conllu(FIXTURES / "running_examples.conllu")}
        review = Review(id="s1", text="Did I mention that the coffee is outstanding?",
                        tokens=tuple(graphs["s1"]),
                        annotations=(Annotation(None, "food", "positive"),))
        matrix = fixture_embedding()
        seeds = fixture_seeds()
        assert embeddings.max_seed_similarity(matrix, "coffee", seeds["food"].tokens()) >= 0.3

        cfg = auxgen.AuxGenConfig(threshold=0.3)
        food = auxgen.construct(ClassificationUnit("s1", None, "food", "positive"),
                                review, seeds["food"], matrix, cfg)
        assert food.candidates == ["coffee"]
        assert food.modifiers == ["outstanding"]
        assert food.fallback_used is False

        price = auxgen.construct(ClassificationUnit("s1", None, "price", "none"),
                                 review, seeds["price"], matrix, cfg)
        assert price.fallback_used is True and price.text == "price"


def test_llda_recovery():
    with criterion("llda-recovery", budget_s=30.0):
        docs, labels = planted_topic_corpus(200, seed=11)
        precisions = []
        for rng_seed in range(5):
            checks = {"ok": True}

            def assert_restriction(sweep, model):
                for z, labs in zip(model.assignments, model.doc_labels):
                    if not set(int(k) for k in z) <= set(labs):
                        checks["ok"] = False

            on_sweep = assert_restriction if rng_seed == 0 else None
            model = llda.fit(docs, labels, topics=TOPIC_NAMES, iterations=120,
                             rng_seed=rng_seed, on_sweep=on_sweep)
            assert checks["ok"], "label restriction violated during sweeps"
            for topic in TOPIC_NAMES:
                top10 = llda.top_seeds(model, topic, 10, min_doc_freq=1).tokens()
                hits = len(set(top10) & set(planted_vocab(topic)))
                precisions.append(hits / 10)
        assert float(np.mean(precisions)) >= 0.8


def test_seed_plausibility_on_real_data():
    data_dir = real_data_dir()
    if data_dir is None:
        pytest.skip("real benchmark data not available; set ASPECTAUX_DATA_DIR "
                    "to a directory containing Restaurants_Train.xml (see README)")
    candidates = [data_dir / n for n in
                  ("Restaurants_Train.xml", "Restaurants_Train_v2.xml", "restaurants_train.xml")]
    path = next((p for p in candidates if p.exists()), None)
    if path is None:
        pytest.skip(f"no restaurant training XML found under {data_dir}")
    with criterion("seed-plausibility-real-data", budget_s=120.0):
        dataset = corpus.load_semeval(path, split="train")
        cfg = pipeline.PipelineConfig(task="absa", seeds_per_aspect=10, rng_seed=13)
        seed_lists = pipeline.extract_seeds(dataset, cfg)
        reference = {"delicious", "chicken", "menu", "beef", "sushi"}
        overlap = reference & set(seed_lists["food"].tokens())
        assert len(overlap) >= 3, f"food seeds {seed_lists['food'].tokens()} overlap {overlap}"


def test_sgns_properties():
    with criterion("sgns-properties", budget_s=60.0):
        # gradient check on a frozen 5-token toy vocabulary
        rng = np.random.default_rng(17)
        vecs = rng.normal(scale=0.5, size=(5, 6))
        v_c, u_o, u_n = vecs[0], vecs[1], vecs[2:5]
        g_c, g_o, g_n = embeddings.pair_gradients(v_c, u_o, u_n)
        h = 1e-6
        for j in range(6):
            d = np.zeros(6)
            d[j] = h
            num = (embeddings.pair_loss(v_c + d, u_o, u_n)
                   - embeddings.pair_loss(v_c - d, u_o, u_n)) / (2 * h)
            assert abs(g_c[j] - num) / max(abs(num), 1e-8) < 1e-4
            num = (embeddings.pair_loss(v_c, u_o + d, u_n)
                   - embeddings.pair_loss(v_c, u_o - d, u_n)) / (2 * h)
            assert abs(g_o[j] - num) / max(abs(num), 1e-8) < 1e-4
        for k in range(3):
            for j in range(6):
                bumped_p = u_n.copy(); bumped_p[k, j] += h
                bumped_m = u_n.copy(); bumped_m[k, j] -= h
                num = (embeddings.pair_loss(v_c, u_o, bumped_p)
                       - embeddings.pair_loss(v_c, u_o, bumped_m)) / (2 * h)
                assert abs(g_n[k, j] - num) / max(abs(num), 1e-8) < 1e-4

        # two-cluster separation: >= 90% of (intra, inter) comparisons won
        sentences = two_cluster_corpus(300, seed=0)
        cfg = embeddings.SgnsConfig(dim=24, window=5, negatives=5, epochs=8,
                                    min_count=1, subsample=0, rng_seed=5)
        m = embeddings.train_sgns(sentences, cfg)
        from synthcorpus import CLUSTER_A, CLUSTER_B
        intra, inter = [], []
        for group, other in ((CLUSTER_A, CLUSTER_B), (CLUSTER_B, CLUSTER_A)):
            for i, w1 in enumerate(group):
                for w2 in group[i + 1:]:
                    intra.append(embeddings.similarity(m, w1, w2))
                if group is CLUSTER_A:
                    for w2 in other:
                        inter.append(embeddings.similarity(m, w1, w2))
        wins = sum(a > b for a in intra for b in inter)
        assert wins / (len(intra) * len(inter)) >= 0.9

        # deterministic mode is bit-reproducible
        m2 = embeddings.train_sgns(sentences, cfg)
        assert np.array_equal(m.input_vectors, m2.input_vectors)
        assert np.array_equal(m.output_vectors, m2.output_vectors)


def test_metric_fixtures():
    with criterion("metric-fixtures", budget_s=10.0):
        import random as pyrandom
        from test_metrics import (brute_force_auc, pred, scored_pred, tabsa_group, unit)

        # categorization micro-PRF: exact rationals
        golds = [unit(f"r{i}", "food", "positive" if i < 4 else "none") for i in range(10)]
        preds = [pred(f"r{i}", "food",
                      "positive" if i in (0, 1) else ("negative" if i == 5 else "none"))
                 for i in range(10)]
        p, r, f1 = metrics.semeval_categorization_prf(preds, golds)
        assert abs(p - 2 / 3) < 1e-9 and abs(r - 1 / 2) < 1e-9 and abs(f1 - 4 / 7) < 1e-9

        # binary sentiment accuracy 7/10
        golds = [unit(f"b{i}", "food", "positive" if i % 2 == 0 else "negative")
                 for i in range(10)]
        preds = [pred(f"b{i}", "food", golds[i].gold if i < 7 else
                      ("negative" if golds[i].gold == "positive" else "positive"))
                 for i in range(10)]
        assert abs(metrics.semeval_sentiment_accuracy(preds, golds, "binary") - 0.7) < 1e-9

        # strict accuracy 2/3
        p1, g1 = tabsa_group("r1", "LOC1", {"price": "positive"}, {"price": "positive"})
        p2, g2 = tabsa_group("r2", "LOC1", {"safety": "negative"}, {"safety": "negative"})
        p3, g3 = tabsa_group("r3", "LOC1", {"general": "positive"},
                             {"general": "positive", "price": "negative"})
        assert abs(metrics.sentihood_strict_accuracy(p1 + p2 + p3, g1 + g2 + g3) - 2 / 3) < 1e-9

        # macro-F1 hand fixture = 0.6
        p1, g1 = tabsa_group("r1", "LOC1", {"price": "positive", "safety": "negative"},
                             {"price": "positive", "general": "positive"})
        p2, g2 = tabsa_group("r2", "LOC1", {"transit-location": "negative", "general": "positive"},
                             {"general": "positive"})
        assert abs(metrics.sentihood_macro_f1(p1 + p2, g1 + g2) - 0.6) < 1e-9

        # AUC on the 6-element fixture matches brute-force pair counting
        detection_scores = [0.9, 0.7, 0.4, 0.7, 0.3, 0.1]
        labels = [True, True, True, False, False, False]
        golds, preds = [], []
        for i, (s, lab) in enumerate(zip(detection_scores, labels)):
            golds.append(unit(f"a{i}", "food", "positive" if lab else "none"))
            preds.append(scored_pred(f"a{i}", "food", {"none": 1 - s, "positive": s}))
        value = metrics.auc(preds, golds, "aspect_detection")
        assert abs(value - brute_force_auc(detection_scores, labels)) < 1e-9
        assert abs(value - 7.5 / 9) < 1e-9

        # strict accuracy <= mean per-category accuracy, 100 random fixtures
        rng = pyrandom.Random(5)
        tabsa_labels = ("none", "negative", "positive")
        for _ in range(100):
            preds, golds = [], []
            for g in range(rng.randint(2, 6)):
                gold_by = {c: rng.choice(tabsa_labels) for c in corpus.SENTIHOOD_CATEGORIES}
                pred_by = {c: rng.choice(tabsa_labels) for c in corpus.SENTIHOOD_CATEGORIES}
                pp, gg = tabsa_group(f"g{g}", "LOC1",
                                     {c: v for c, v in gold_by.items() if v != "none"},
                                     {c: v for c, v in pred_by.items() if v != "none"})
                preds += pp
                golds += gg
            strict = metrics.sentihood_strict_accuracy(preds, golds)
            per_unit = sum(((p.predicted == "none") == (g.gold == "none"))
                           and (g.gold == "none" or p.predicted == g.gold)
                           for p, g in zip(preds, golds)) / len(golds)
            assert strict <= per_unit + 1e-12


def test_surrogate_signal(tmp_path):
    with criterion("surrogate-signal", budget_s=60.0):
        f1_aux = categorization_f1(tmp_path, fallback_only=False, seed=13)
        f1_fallback = categorization_f1(tmp_path, fallback_only=True, seed=13)
        assert f1_aux - f1_fallback >= 0.05, \
            f"aux F1 {f1_aux:.3f} vs fallback F1 {f1_fallback:.3f}"


def test_pipeline_closure(tmp_path):
    with criterion("pipeline-closure", budget_s=120.0):
        for task in ("absa", "tabsa"):
            cfg = pipeline.load_config(REPO / "configs" / f"mini_{task}.cfg")
            for key in ("train_data", "test_data", "train_parses", "test_parses"):
                setattr(cfg, key, str(REPO / getattr(cfg, key)))
            cfg.workdir = str(tmp_path / task)
            report = pipeline.run_pipeline(cfg)

            payload = json.loads((tmp_path / task / "report.json").read_text())
            assert payload["task"] == task
            expected = ({"precision", "recall", "f1", "acc_binary", "acc_3class", "acc_4class"}
                        if task == "absa" else
                        {"strict_acc", "macro_f1", "aspect_auc", "sentiment_acc", "sentiment_auc"})
            assert set(payload["metrics"]) == expected
            assert all(0.0 <= v <= 1.0 for v in payload["metrics"].values())
            assert payload["metrics"] == report.values

            cfg.workdir = str(tmp_path / f"{task}_again")
            pipeline.run_pipeline(cfg)
            for name in ("report.json", "report.txt", "seeds.json", "vectors.txt",
                         "pairs_train.jsonl", "pairs_test.jsonl", "predictions.jsonl"):
                a = (tmp_path / task / name).read_bytes()
                b = (tmp_path / f"{task}_again" / name).read_bytes()
                assert a == b, f"{task}/{name} differs between identical runs"
            for fig in ("metrics.png", "seeds.png"):
                a = (tmp_path / task / "figures" / fig).read_bytes()
                b = (tmp_path / f"{task}_again" / "figures" / fig).read_bytes()
                assert a == b, f"{task}/figures/{fig} differs between identical runs"
