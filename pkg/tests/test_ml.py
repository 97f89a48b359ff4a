"""Classifier contract: sanity datasets, ordinal metrics, CV protocol."""

import math
import random

import numpy as np
import pytest

from wikiquality.ml import (
    ALGORITHMS,
    ColumnChecksumError,
    CVResult,
    FeatureMatrix,
    TrainedModel,
    cross_validate,
    evaluate,
    fold_assignment,
    predict,
    run_experiment,
    train,
)
from wikiquality.types import QualityClass

CLASSES = sorted(QualityClass, key=lambda qc: qc.ordinal)


def blob_matrix(per_class=20, noise=0.1, seed=1, features=4):
    """Seven well-separated Gaussian blobs, one per quality class."""
    rng = np.random.default_rng(seed)
    rows, labels, ids = [], [], []
    for k, qc in enumerate(CLASSES):
        theta = 2 * math.pi * k / 7
        center = np.array([
            10 * math.cos((j // 2 + 1) * theta) if j % 2 == 0
            else 10 * math.sin((j // 2 + 1) * theta)
            for j in range(features)
        ])
        for i in range(per_class):
            rows.append(center + rng.normal(0, noise, features))
            labels.append(qc)
            ids.append(f"art-{k}-{i}")
    return FeatureMatrix(ids, [f"f{j}" for j in range(features)], np.array(rows), labels)


def xor_matrix(per_cluster=60, seed=3):
    rng = np.random.default_rng(seed)
    rows, labels, ids = [], [], []
    clusters = [((0, 0), QualityClass.STUB), ((1, 1), QualityClass.STUB),
                ((0, 1), QualityClass.FA), ((1, 0), QualityClass.FA)]
    for c, (center, qc) in enumerate(clusters):
        for i in range(per_cluster):
            rows.append(np.array(center) + rng.normal(0, 0.05, 2))
            labels.append(qc)
            ids.append(f"x-{c}-{i}")
    return FeatureMatrix(ids, ["f0", "f1"], np.array(rows), labels)


class TestTrain:
    @pytest.mark.parametrize("algo", ALGORITHMS)
    def test_separable_blobs_memorized(self, algo):
        matrix = blob_matrix(per_class=12)
        model = train(matrix, algo, seed=7)
        preds = predict(model, matrix)
        metrics = evaluate(matrix.labels, preds)
        assert metrics["accuracy"] >= 0.99

    def test_single_class_rejected(self):
        matrix = blob_matrix(per_class=5)
        matrix.labels = [QualityClass.FA] * len(matrix.ids)
        with pytest.raises(ValueError, match="two classes"):
            train(matrix, "DT")

    def test_nonfinite_feature_named(self):
        matrix = blob_matrix(per_class=3)
        matrix.values[2, 1] = float("nan")
        with pytest.raises(ValueError, match="'f1'"):
            train(matrix, "DT")

    def test_unknown_algorithm(self):
        with pytest.raises(ValueError, match="unknown algorithm"):
            train(blob_matrix(per_class=3), "SVM")

    def test_deterministic_given_seed(self):
        matrix = blob_matrix(per_class=8, noise=2.0)
        for algo in ("RF", "GB", "NN", "SVC"):
            m1 = train(matrix, algo, seed=11)
            m2 = train(matrix, algo, seed=11)
            assert predict(m1, matrix) == predict(m2, matrix)

    def test_xor_pattern(self):
        # Tree ensembles and the network separate XOR; a linear model cannot.
        matrix = xor_matrix()
        for algo in ("DT", "RF", "GB", "NN"):
            model = train(matrix, algo, seed=5)
            acc = evaluate(matrix.labels, predict(model, matrix))["accuracy"]
            assert acc >= 0.95, algo
        lr = train(matrix, "LR", seed=5)
        lr_acc = evaluate(matrix.labels, predict(lr, matrix))["accuracy"]
        assert lr_acc <= 0.6


class TestPredict:
    def test_unbounded_dt_memorizes_training_set(self):
        matrix = blob_matrix(per_class=10, noise=3.0)
        model = train(matrix, "DT", seed=2)
        assert predict(model, matrix) == matrix.labels

    def test_empty_matrix(self):
        matrix = blob_matrix(per_class=5)
        model = train(matrix, "DT")
        empty = FeatureMatrix([], matrix.columns, np.zeros((0, len(matrix.columns))), None)
        assert predict(model, empty) == []

    def test_knn_k1_returns_own_label(self):
        matrix = blob_matrix(per_class=6, noise=3.0)
        model = train(matrix, "KNN", params={"n_neighbors": 1})
        assert predict(model, matrix) == matrix.labels

    def test_checksum_mismatch_rejected(self):
        matrix = blob_matrix(per_class=5)
        model = train(matrix, "DT")
        renamed = FeatureMatrix(matrix.ids, ["g0", "g1", "g2", "g3"],
                                matrix.values, matrix.labels)
        with pytest.raises(ColumnChecksumError, match="re-extract"):
            predict(model, renamed)


class TestEvaluate:
    def test_identical_vectors(self):
        y = [QualityClass.B, QualityClass.FA, QualityClass.STUB]
        assert evaluate(y, y) == {"accuracy": 1.0, "mse": 0.0}

    def test_maximal_ordinal_error(self):
        y_true = [QualityClass.FA] * 4
        y_pred = [QualityClass.STUB] * 4
        metrics = evaluate(y_true, y_pred)
        assert metrics["accuracy"] == 0.0
        assert metrics["mse"] == 36.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            evaluate([QualityClass.FA], [])

    def test_mse_zero_iff_accuracy_one(self):
        rng = random.Random(1000)
        for _ in range(1000):
            size = rng.randrange(1, 12)
            y_true = [rng.choice(CLASSES) for _ in range(size)]
            if rng.random() < 0.5:
                y_pred = list(y_true)
            else:
                y_pred = [rng.choice(CLASSES) for _ in range(size)]
            metrics = evaluate(y_true, y_pred)
            assert (metrics["mse"] == 0.0) == (metrics["accuracy"] == 1.0)
            assert 0.0 <= metrics["accuracy"] <= 1.0
            assert 0.0 <= metrics["mse"] <= 36.0


class TestCrossValidate:
    def test_stratification_arithmetic(self):
        # 700 rows, 7 balanced classes, 10 folds: 70 test rows per fold,
        # 10 per class.
        ids = [f"a{i}" for i in range(700)]
        labels = [CLASSES[i % 7] for i in range(700)]
        assignment = fold_assignment(ids, labels, folds=10, seed=42)
        for fold in range(10):
            members = [i for i in ids if assignment[i] == fold]
            assert len(members) == 70
            per_class = {qc: 0 for qc in CLASSES}
            for art_id in members:
                per_class[labels[ids.index(art_id)]] += 1
            assert set(per_class.values()) == {10}

    def test_same_seed_identical(self):
        matrix = blob_matrix(per_class=8, noise=4.0)
        r1 = cross_validate(matrix, "DT", folds=4, seed=9)
        r2 = cross_validate(matrix, "DT", folds=4, seed=9)
        assert r1.assignment == r2.assignment
        assert r1.fold_metrics == r2.fold_metrics

    def test_row_permutation_invariance(self):
        matrix = blob_matrix(per_class=8, noise=4.0)
        order = list(range(len(matrix.ids)))
        random.Random(1).shuffle(order)
        shuffled = matrix.subset_rows(order)
        r1 = cross_validate(matrix, "DT", folds=4, seed=9)
        r2 = cross_validate(shuffled, "DT", folds=4, seed=9)
        assert r1.assignment == r2.assignment
        assert r1.mean_accuracy == r2.mean_accuracy

    def test_too_many_folds_rejected(self):
        matrix = blob_matrix(per_class=3)
        with pytest.raises(ValueError, match="exceed the smallest class"):
            cross_validate(matrix, "DT", folds=4)

    def test_chance_level_on_shuffled_labels(self):
        matrix = blob_matrix(per_class=100, noise=0.1, seed=6)
        rng = random.Random(21)
        shuffled = list(matrix.labels)
        rng.shuffle(shuffled)
        matrix.labels = shuffled
        result = cross_validate(matrix, "DT", folds=10, seed=42)
        assert abs(result.mean_accuracy - 1 / 7) <= 0.05

    def test_standardization_leakage_audit(self):
        matrix = blob_matrix(per_class=6)
        result = cross_validate(matrix, "KNN", folds=3, seed=1)
        assert result.leakage_audit == [True, True, True]

    def test_separable_blobs_cv(self):
        matrix = blob_matrix(per_class=9)
        result = cross_validate(matrix, "KNN", folds=3, seed=4)
        assert result.mean_accuracy >= 0.95
        assert result.mean_mse <= 0.5


class TestExperiment:
    def toy_matrix(self):
        # Mixed-group columns over 7 classes; signal only in review columns.
        rng = np.random.default_rng(11)
        n_per = 6
        ids, labels, rows = [], [], []
        columns = ["character_count", "word_count", "review_count", "user_count",
                   "pagerank", "in_degree"]
        for k, qc in enumerate(CLASSES):
            for i in range(n_per):
                ids.append(f"t-{k}-{i}")
                labels.append(qc)
                rows.append([
                    rng.normal(), rng.normal(),
                    10 * k + rng.normal(0, 0.05), 5 * k + rng.normal(0, 0.05),
                    rng.normal(), rng.normal(),
                ])
        return FeatureMatrix(ids, columns, np.array(rows), labels)

    def test_tables_shape(self):
        result = run_experiment(self.toy_matrix(), groups=("Text", "Review", "Network"),
                                algos=("DT", "KNN"), folds=3, seed=42)
        assert result.settings == ["All", "Text", "Review", "Network"]
        for table in (result.accuracy, result.mse):
            for setting in result.settings:
                assert set(table[setting]) == {"DT", "KNN"}
                for value in table[setting].values():
                    assert math.isfinite(value)

    def test_informative_group_wins(self):
        result = run_experiment(self.toy_matrix(), groups=("Text", "Review"),
                                algos=("DT",), folds=3, seed=42)
        assert result.accuracy["Review"]["DT"] > result.accuracy["Text"]["DT"]

    def test_unknown_group_rejected(self):
        with pytest.raises(ValueError, match="unknown feature group"):
            run_experiment(self.toy_matrix(), groups=("Prose",), algos=("DT",), folds=3)

    def test_csv_and_text_output(self, tmp_path):
        result = run_experiment(self.toy_matrix(), groups=("Review",),
                                algos=("DT", "NB"), folds=3, seed=42)
        out = tmp_path / "acc.csv"
        result.to_csv(out, "accuracy")
        lines = out.read_text().splitlines()
        assert lines[0] == "classifier,All,Review"
        assert len(lines) == 3
        text = result.to_text()
        assert "ACCURACY" in text and "MSE" in text


class TestSerialization:
    def test_csv_round_trip_byte_identical(self, tmp_path):
        matrix = blob_matrix(per_class=4)
        p1, p2 = tmp_path / "m1.csv", tmp_path / "m2.csv"
        matrix.to_csv(p1)
        FeatureMatrix.from_csv(p1).to_csv(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_model_save_load(self, tmp_path):
        matrix = blob_matrix(per_class=5)
        model = train(matrix, "RF", seed=3)
        path = tmp_path / "model.pkl"
        model.save(path)
        loaded = TrainedModel.load(path)
        assert loaded.algorithm == "RF"
        assert loaded.column_checksum == model.column_checksum
        assert predict(loaded, matrix) == predict(model, matrix)

    def test_label_round_trip(self, tmp_path):
        matrix = blob_matrix(per_class=3)
        path = tmp_path / "m.csv"
        matrix.to_csv(path)
        loaded = FeatureMatrix.from_csv(path)
        assert loaded.labels == matrix.labels
        assert loaded.ids == matrix.ids
        np.testing.assert_array_equal(loaded.values, matrix.values)
