"""Training, evaluation, and the experiment protocol.

Eight classifier families sit behind one train/predict contract, backed by
scikit-learn estimators configured to the documented defaults. Metrics are
exact-match accuracy and ordinal mean squared error (Stub=0 ... FA=6).
Cross-validation is stratified, keyed by article id, and refits both the
feature standardization and (when raw trigram counts are supplied) the
trigram selection inside each training fold.
"""

from __future__ import annotations

import csv
import hashlib
import math
import pickle
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sklearn.ensemble import GradientBoostingClassifier, RandomForestClassifier
from sklearn.linear_model import LogisticRegression, SGDClassifier
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.neural_network import MLPClassifier
from sklearn.tree import DecisionTreeClassifier

from .stylefeat import select_trigrams
from .types import QualityClass

ALGORITHMS = ("DT", "KNN", "LR", "NB", "RF", "SVC", "NN", "GB")
_STANDARDIZED = frozenset({"KNN", "LR", "SVC", "NN"})

DEFAULT_PARAMS: dict[str, dict] = {
    "DT": {"criterion": "gini"},
    "KNN": {"n_neighbors": 5},
    "LR": {"C": 1.0, "max_iter": 1000},
    "NB": {},
    "RF": {"n_estimators": 200, "max_features": "sqrt"},
    "SVC": {"loss": "hinge", "alpha": 1e-4, "max_iter": 2000},
    "NN": {"hidden_layer_sizes": (64,), "max_iter": 200},
    "GB": {"n_estimators": 300, "max_depth": 3, "learning_rate": 0.1},
}

MODEL_FORMAT = "wikiquality-model/1"


class ColumnChecksumError(ValueError):
    """Prediction matrix columns differ from the training matrix."""


@dataclass
class FeatureMatrix:
    ids: list[str]
    columns: list[str]
    values: np.ndarray
    labels: Optional[list[QualityClass]] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.ids), len(self.columns)):
            raise ValueError(
                f"matrix shape {self.values.shape} does not match "
                f"{len(self.ids)} rows x {len(self.columns)} columns"
            )
        if self.labels is not None and len(self.labels) != len(self.ids):
            raise ValueError("labels length differs from row count")

    def column_checksum(self) -> str:
        joined = "\x1f".join(self.columns)
        return hashlib.sha256(joined.encode("utf-8")).hexdigest()

    def require_finite(self) -> None:
        finite = np.isfinite(self.values)
        if not finite.all():
            bad = np.argwhere(~finite)[0]
            raise ValueError(
                f"non-finite value in column {self.columns[bad[1]]!r} "
                f"(article {self.ids[bad[0]]!r})"
            )

    def subset_columns(self, names: Sequence[str]) -> "FeatureMatrix":
        index = {c: i for i, c in enumerate(self.columns)}
        missing = [n for n in names if n not in index]
        if missing:
            raise ValueError(f"unknown columns: {missing[:5]}")
        cols = [index[n] for n in names]
        return FeatureMatrix(
            ids=list(self.ids),
            columns=list(names),
            values=self.values[:, cols].copy(),
            labels=None if self.labels is None else list(self.labels),
        )

    def subset_rows(self, row_indices: Sequence[int]) -> "FeatureMatrix":
        idx = list(row_indices)
        return FeatureMatrix(
            ids=[self.ids[i] for i in idx],
            columns=list(self.columns),
            values=self.values[idx],
            labels=None if self.labels is None else [self.labels[i] for i in idx],
        )

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id"] + self.columns + ["label"])
            for i, art_id in enumerate(self.ids):
                label = self.labels[i].label if self.labels and self.labels[i] else ""
                writer.writerow(
                    [art_id] + [repr(v) for v in self.values[i].tolist()] + [label]
                )

    @classmethod
    def from_csv(cls, path) -> "FeatureMatrix":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header[0] != "id" or header[-1] != "label":
                raise ValueError(f"{path}: expected 'id' first and 'label' last in header")
            columns = header[1:-1]
            ids, rows, labels = [], [], []
            for row in reader:
                ids.append(row[0])
                rows.append([float(v) for v in row[1:-1]])
                labels.append(QualityClass.from_label(row[-1]) if row[-1] else None)
        has_labels = any(l is not None for l in labels)
        return cls(
            ids=ids,
            columns=columns,
            values=np.array(rows, dtype=float) if rows else np.zeros((0, len(columns))),
            labels=labels if has_labels else None,
        )


@dataclass
class Standardizer:
    """Per-column z-scaling; remembers which rows it was fitted on."""

    mean: np.ndarray
    std: np.ndarray
    fitted_ids: tuple[str, ...]

    @classmethod
    def fit(cls, matrix: FeatureMatrix) -> "Standardizer":
        mean = matrix.values.mean(axis=0)
        std = matrix.values.std(axis=0)
        std = np.where(std == 0.0, 1.0, std)
        return cls(mean=mean, std=std, fitted_ids=tuple(matrix.ids))

    def transform(self, values: np.ndarray) -> np.ndarray:
        return (values - self.mean) / self.std


@dataclass
class TrainedModel:
    algorithm: str
    hyperparameters: dict
    seed: int
    columns: list[str]
    column_checksum: str
    estimator: object
    scaler: Optional[Standardizer]

    def save(self, path) -> None:
        payload = {
            "format": MODEL_FORMAT,
            "algorithm": self.algorithm,
            "hyperparameters": self.hyperparameters,
            "seed": self.seed,
            "columns": self.columns,
            "column_checksum": self.column_checksum,
            "estimator": self.estimator,
            "scaler": self.scaler,
        }
        with open(path, "wb") as fh:
            pickle.dump(payload, fh)

    @classmethod
    def load(cls, path) -> "TrainedModel":
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
        if payload.get("format") != MODEL_FORMAT:
            raise ValueError(f"{path}: not a {MODEL_FORMAT} file")
        payload.pop("format")
        return cls(**payload)


def _build_estimator(algo: str, params: dict, seed: int):
    if algo == "DT":
        return DecisionTreeClassifier(random_state=seed, **params)
    if algo == "KNN":
        return KNeighborsClassifier(**params)
    if algo == "LR":
        return LogisticRegression(**params)
    if algo == "NB":
        return GaussianNB(**params)
    if algo == "RF":
        return RandomForestClassifier(random_state=seed, **params)
    if algo == "SVC":
        return SGDClassifier(random_state=seed, **params)
    if algo == "NN":
        return MLPClassifier(random_state=seed, **params)
    if algo == "GB":
        return GradientBoostingClassifier(random_state=seed, **params)
    raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")


def train(
    matrix: FeatureMatrix,
    algo: str,
    params: Optional[dict] = None,
    seed: int = 0,
) -> TrainedModel:
    """Fit one classifier; deterministic for a given seed."""
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")
    if matrix.labels is None or any(l is None for l in matrix.labels):
        raise ValueError("training requires a label for every row")
    classes = {l for l in matrix.labels}
    if len(classes) < 2:
        raise ValueError("training requires at least two classes")
    matrix.require_finite()

    merged = dict(DEFAULT_PARAMS[algo])
    merged.update(params or {})
    estimator = _build_estimator(algo, merged, seed)
    scaler = Standardizer.fit(matrix) if algo in _STANDARDIZED else None
    X = scaler.transform(matrix.values) if scaler else matrix.values
    y = np.array([l.ordinal for l in matrix.labels])
    estimator.fit(X, y)
    return TrainedModel(
        algorithm=algo,
        hyperparameters=merged,
        seed=seed,
        columns=list(matrix.columns),
        column_checksum=matrix.column_checksum(),
        estimator=estimator,
        scaler=scaler,
    )


def predict(model: TrainedModel, matrix: FeatureMatrix) -> list[QualityClass]:
    if matrix.column_checksum() != model.column_checksum:
        raise ColumnChecksumError(
            "feature columns differ from the training matrix; re-extract the "
            "features with the same registry and selector"
        )
    if not matrix.ids:
        return []
    matrix.require_finite()
    X = model.scaler.transform(matrix.values) if model.scaler else matrix.values
    ordinals = model.estimator.predict(X)
    return [QualityClass.from_ordinal(int(o)) for o in ordinals]


def evaluate(y_true: Sequence[QualityClass], y_pred: Sequence[QualityClass]) -> dict:
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} != {len(y_pred)}")
    if not y_true:
        raise ValueError("evaluate needs at least one prediction")
    hits = sum(1 for t, p in zip(y_true, y_pred) if t is p)
    mse = sum((t.ordinal - p.ordinal) ** 2 for t, p in zip(y_true, y_pred)) / len(y_true)
    return {"accuracy": hits / len(y_true), "mse": mse}


def fold_assignment(
    ids: Sequence[str],
    labels: Sequence[QualityClass],
    folds: int,
    seed: int,
) -> dict[str, int]:
    """Stratified fold ids keyed by article id (row order never matters)."""
    if folds < 2:
        raise ValueError("folds must be >= 2")
    by_class: dict[QualityClass, list[str]] = {}
    for art_id, label in zip(ids, labels):
        by_class.setdefault(label, []).append(art_id)
    smallest = min(len(v) for v in by_class.values())
    if folds > smallest:
        raise ValueError(
            f"{folds} folds exceed the smallest class size ({smallest})"
        )
    assignment: dict[str, int] = {}
    for label in sorted(by_class, key=lambda qc: qc.ordinal):
        members = sorted(by_class[label])
        random.Random(f"{seed}:{label.ordinal}").shuffle(members)
        for i, art_id in enumerate(members):
            assignment[art_id] = i % folds
    return assignment


# Raw per-article trigram counts, for refitting the selector inside folds:
# {"char": {gram: count}, "char_total": int,
#  "pos": {"TAG TAG TAG": count}, "pos_total": int}
TrigramCounts = dict[str, dict]


def _patch_trigram_columns(
    matrix: FeatureMatrix,
    trigram_counts: dict[str, TrigramCounts],
    train_ids: set[str],
) -> FeatureMatrix:
    """Refit trigram selection on the training rows, recompute those columns."""
    char_cols = [c for c in matrix.columns if c.startswith("char_trigram_rank_")]
    pos_cols = [c for c in matrix.columns if c.startswith("pos_trigram_rank_")]
    if not char_cols and not pos_cols:
        return matrix
    m, n = len(char_cols), len(pos_cols)
    train_rows = [i for i, art_id in enumerate(matrix.ids) if art_id in train_ids]
    labels = [matrix.labels[i] for i in train_rows]
    char_presence = [
        set(trigram_counts[matrix.ids[i]]["char"]) for i in train_rows
    ]
    pos_presence = [
        {tuple(g.split(" ")) for g in trigram_counts[matrix.ids[i]]["pos"]}
        for i in train_rows
    ]
    selector = select_trigrams(char_presence, pos_presence, labels, m, n)

    values = matrix.values.copy()
    col_index = {c: i for i, c in enumerate(matrix.columns)}
    for row, art_id in enumerate(matrix.ids):
        counts = trigram_counts[art_id]
        char_total = counts.get("char_total", 0)
        pos_total = counts.get("pos_total", 0)
        for rank, gram in enumerate(selector.char_trigrams, start=1):
            col = col_index[f"char_trigram_rank_{rank:03d}"]
            values[row, col] = (counts["char"].get(gram, 0) / char_total) if char_total else 0.0
        for rank in range(len(selector.char_trigrams) + 1, m + 1):
            values[row, col_index[f"char_trigram_rank_{rank:03d}"]] = 0.0
        for rank, gram in enumerate(selector.pos_trigrams, start=1):
            col = col_index[f"pos_trigram_rank_{rank:03d}"]
            key = " ".join(gram)
            values[row, col] = (counts["pos"].get(key, 0) / pos_total) if pos_total else 0.0
        for rank in range(len(selector.pos_trigrams) + 1, n + 1):
            values[row, col_index[f"pos_trigram_rank_{rank:03d}"]] = 0.0
    return FeatureMatrix(matrix.ids, matrix.columns, values, matrix.labels)


@dataclass
class CVResult:
    fold_metrics: list[dict]
    mean_accuracy: float
    mean_mse: float
    std_accuracy: float
    std_mse: float
    assignment: dict[str, int]
    # One entry per fold: True iff scaling statistics came from training rows
    # only (standardization leakage instrumentation).
    leakage_audit: list[bool] = field(default_factory=list)


def cross_validate(
    matrix: FeatureMatrix,
    algo: str,
    params: Optional[dict] = None,
    folds: int = 10,
    seed: int = 42,
    trigram_counts: Optional[dict[str, TrigramCounts]] = None,
) -> CVResult:
    """Stratified k-fold CV with fold-internal refits.

    Standardization is always refit on the training fold; trigram selection
    is refit per fold whenever raw counts are supplied.
    """
    if matrix.labels is None or any(l is None for l in matrix.labels):
        raise ValueError("cross-validation requires labels")
    assignment = fold_assignment(matrix.ids, matrix.labels, folds, seed)
    fold_metrics = []
    audit = []
    for fold in range(folds):
        test_rows = [i for i, a in enumerate(matrix.ids) if assignment[a] == fold]
        train_rows = [i for i, a in enumerate(matrix.ids) if assignment[a] != fold]
        working = matrix
        if trigram_counts is not None:
            working = _patch_trigram_columns(
                matrix, trigram_counts, {matrix.ids[i] for i in train_rows}
            )
        train_matrix = working.subset_rows(train_rows)
        test_matrix = working.subset_rows(test_rows)
        model = train(train_matrix, algo, params, seed=seed)
        if model.scaler is not None:
            audit.append(set(model.scaler.fitted_ids) == set(train_matrix.ids))
        else:
            audit.append(True)
        metrics = evaluate(test_matrix.labels, predict(model, test_matrix))
        fold_metrics.append(metrics)
    accs = [m["accuracy"] for m in fold_metrics]
    mses = [m["mse"] for m in fold_metrics]
    return CVResult(
        fold_metrics=fold_metrics,
        mean_accuracy=sum(accs) / folds,
        mean_mse=sum(mses) / folds,
        std_accuracy=math.sqrt(sum((a - sum(accs) / folds) ** 2 for a in accs) / folds),
        std_mse=math.sqrt(sum((m - sum(mses) / folds) ** 2 for m in mses) / folds),
        assignment=assignment,
        leakage_audit=audit,
    )


@dataclass
class ExperimentResult:
    """Accuracy and MSE per (feature setting, algorithm), paper-table shaped."""

    settings: list[str]
    algorithms: list[str]
    accuracy: dict[str, dict[str, float]]
    mse: dict[str, dict[str, float]]

    def to_csv(self, path, metric: str) -> None:
        table = getattr(self, metric)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["classifier"] + self.settings)
            for algo in self.algorithms:
                writer.writerow([algo] + [repr(table[s][algo]) for s in self.settings])

    def to_text(self) -> str:
        lines = []
        for metric in ("accuracy", "mse"):
            table = getattr(self, metric)
            lines.append(f"{metric.upper()} ({'higher' if metric == 'accuracy' else 'lower'} is better)")
            header = f"{'classifier':<12}" + "".join(f"{s:>12}" for s in self.settings)
            lines.append(header)
            for algo in self.algorithms:
                row = f"{algo:<12}" + "".join(
                    f"{table[s][algo]:>12.3f}" for s in self.settings
                )
                lines.append(row)
            lines.append("")
        return "\n".join(lines)


def run_experiment(
    matrix: FeatureMatrix,
    groups: Sequence[str] = ("Text", "Review", "Network"),
    algos: Sequence[str] = ALGORITHMS,
    folds: int = 10,
    seed: int = 42,
    trigram_counts: Optional[dict[str, TrigramCounts]] = None,
) -> ExperimentResult:
    """Experiment 1 (all features) plus Experiment 2 (one group at a time)."""
    from .registry import experiment_group_columns

    if not groups:
        raise ValueError("at least one feature group is required")
    m = sum(1 for c in matrix.columns if c.startswith("char_trigram_rank_"))
    n = sum(1 for c in matrix.columns if c.startswith("pos_trigram_rank_"))
    for group in groups:
        experiment_group_columns(group, m=m, n=n)  # validates the name

    settings = ["All"] + list(groups)
    accuracy: dict[str, dict[str, float]] = {s: {} for s in settings}
    mse: dict[str, dict[str, float]] = {s: {} for s in settings}
    for setting in settings:
        if setting == "All":
            subset = matrix
        else:
            wanted = [c for c in experiment_group_columns(setting, m=m, n=n)
                      if c in matrix.columns]
            subset = matrix.subset_columns(wanted)
        counts = trigram_counts if any(
            c.startswith(("char_trigram_rank_", "pos_trigram_rank_")) for c in subset.columns
        ) else None
        for algo in algos:
            result = cross_validate(subset, algo, folds=folds, seed=seed,
                                    trigram_counts=counts)
            accuracy[setting][algo] = result.mean_accuracy
            mse[setting][algo] = result.mean_mse
    return ExperimentResult(
        settings=settings,
        algorithms=list(algos),
        accuracy=accuracy,
        mse=mse,
    )
