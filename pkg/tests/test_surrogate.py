import logging

import numpy as np
import pytest

from aspectaux import surrogate
from aspectaux.errors import ValidationError
from synthpipe import categorization_f1


def toy_pairs():
    """Linearly separable: the auxiliary token alone determines the label."""
    rows = []
    for i in range(8):
        rows.append({"review_id": f"p{i}", "target": None, "category": "food",
                     "auxiliary_text": "tasty dish", "sentence_text": f"filler {i}",
                     "gold_label": "positive", "fallback_used": False})
        rows.append({"review_id": f"n{i}", "target": None, "category": "food",
                     "auxiliary_text": "awful dish", "sentence_text": f"filler {i}",
                     "gold_label": "negative", "fallback_used": False})
        rows.append({"review_id": f"z{i}", "target": None, "category": "price",
                     "auxiliary_text": "price", "sentence_text": f"filler {i}",
                     "gold_label": "none", "fallback_used": True})
    return rows


class TestTraining:
    def test_separable_pairs_reach_perfect_training_accuracy(self):
        pairs = toy_pairs()
        model = surrogate.train_surrogate(pairs, surrogate.SurrogateConfig(task="absa",
                                                                           iterations=400))
        assert surrogate.training_accuracy(model, pairs) == 1.0

    def test_loss_decreases(self):
        model = surrogate.train_surrogate(toy_pairs(), surrogate.SurrogateConfig(task="absa"))
        assert model.loss_curve[-1] < model.loss_curve[0]

    def test_deterministic_weights(self):
        cfg = surrogate.SurrogateConfig(task="absa", rng_seed=5)
        m1 = surrogate.train_surrogate(toy_pairs(), cfg)
        m2 = surrogate.train_surrogate(toy_pairs(), cfg)
        assert np.array_equal(m1.weights, m2.weights)
        assert np.array_equal(m1.bias, m2.bias)

    def test_absent_label_warns_and_keeps_prior_scores(self, caplog):
        pairs = toy_pairs()  # neutral and conflict never occur
        with caplog.at_level(logging.WARNING):
            model = surrogate.train_surrogate(pairs, surrogate.SurrogateConfig(task="absa"))
        assert sum("absent from training data" in m for m in caplog.messages) == 2
        preds = surrogate.predict_surrogate(model, pairs[:2])
        for p in preds:
            assert p.scores["neutral"] < 0.2 and p.scores["conflict"] < 0.2

    def test_label_outside_task_set_rejected(self):
        pairs = toy_pairs()
        pairs[0]["gold_label"] = "conflict"
        with pytest.raises(ValidationError, match="outside the tabsa label set"):
            surrogate.train_surrogate(pairs, surrogate.SurrogateConfig(task="tabsa"))

    def test_empty_training_rejected(self):
        with pytest.raises(ValidationError, match="no training pairs"):
            surrogate.train_surrogate([], surrogate.SurrogateConfig())


class TestPrediction:
    def test_scores_sum_to_one_and_cover_task_labels(self):
        pairs = toy_pairs()
        model = surrogate.train_surrogate(pairs, surrogate.SurrogateConfig(task="absa"))
        for p in surrogate.predict_surrogate(model, pairs):
            assert set(p.scores) == {"none", "negative", "neutral", "positive", "conflict"}
            assert sum(p.scores.values()) == pytest.approx(1.0, abs=1e-9)
            assert p.predicted == max(p.scores, key=p.scores.get)

    def test_unseen_features_are_ignored(self):
        model = surrogate.train_surrogate(toy_pairs(), surrogate.SurrogateConfig(task="absa"))
        novel = [{"review_id": "x", "target": None, "category": "food",
                  "auxiliary_text": "completely unseen words", "sentence_text": "also new",
                  "gold_label": "none", "fallback_used": True}]
        preds = surrogate.predict_surrogate(model, novel)
        assert len(preds) == 1
        assert sum(preds[0].scores.values()) == pytest.approx(1.0, abs=1e-9)


class TestAuxiliarySignal:
    def test_constructed_auxiliaries_beat_aspect_name_only(self, tmp_path):
        f1_aux = categorization_f1(tmp_path, fallback_only=False, seed=13)
        f1_fallback = categorization_f1(tmp_path, fallback_only=True, seed=13)
        assert f1_aux - f1_fallback >= 0.05
