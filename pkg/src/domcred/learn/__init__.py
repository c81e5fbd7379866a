"""Seven classifiers behind one train/predict/classify contract."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..features import FeatureMatrix
from . import boosting, forest, naive_bayes, neural, tree
from . import linear as linear_mod
from .base import (
    ALGORITHMS,
    DEFAULT_HYPERPARAMETERS,
    ConstantModel,
    ModelSpec,
    Standardizer,
    TrainingSummary,
    decode_labels,
    encode_labels,
    independent_columns,
)
from .boosting import GradientBoosting
from .forest import RandomForest
from .linear import LinearCoefficients
from .naive_bayes import NaiveBayesModel
from .neural import NeuralNet
from .tree import DecisionTree, Node, RegressionTree

FORMAT_VERSION = 1

_FITTERS = {
    "naive_bayes": naive_bayes.fit,
    "logistic": linear_mod.fit_logistic,
    "glm_elastic_net": linear_mod.fit_elastic_net,
    "decision_tree": tree.fit,
    "random_forest": forest.fit,
    "gradient_boosted_trees": boosting.fit,
    "neural_net": neural.fit,
}

_PARAM_CLASSES = {
    "constant": ConstantModel,
    "naive_bayes": NaiveBayesModel,
    "logistic": LinearCoefficients,
    "glm_elastic_net": LinearCoefficients,
    "decision_tree": DecisionTree,
    "random_forest": RandomForest,
    "gradient_boosted_trees": GradientBoosting,
    "neural_net": NeuralNet,
}

_WARN_ON_CONSTANT = ("logistic", "glm_elastic_net", "neural_net")


@dataclass(frozen=True)
class TrainedModel:
    """A fitted classifier: spec, parameters, and a training summary."""

    spec: ModelSpec
    params: object
    summary: TrainingSummary
    n_features: int

    def predict_proba(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(1, -1)
        if x.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {x.shape[1]}")
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite feature values")
        return np.clip(self.params.predict_proba(x), 0.0, 1.0)

    def classify(self, x) -> list[str]:
        return decode_labels(self.predict_proba(x))


def train_xy(spec: ModelSpec, x: np.ndarray, y: np.ndarray) -> TrainedModel:
    """Fit on a bare (features, 0/1 labels) pair.

    Single-class data short-circuits to a constant model; for the solvers
    that cannot represent it natively (linear, neural) the summary carries a
    warning.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or len(x) != len(y):
        raise ValueError("x must be 2-D with one row per label")
    if len(y) < 2:
        raise ValueError("need at least 2 rows to train")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite feature values")
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise ValueError("labels must encode to 0/1")

    if np.all(y == y[0]):
        warnings = ()
        if spec.algorithm in _WARN_ON_CONSTANT:
            warnings = ("single-class training data: constant model substituted",)
        return TrainedModel(
            spec=spec,
            params=ConstantModel(probability=float(y[0])),
            summary=TrainingSummary(iterations=0, converged=True, warnings=warnings),
            n_features=x.shape[1],
        )

    params, summary = _FITTERS[spec.algorithm](x, y, spec.hyper, spec.seed)
    return TrainedModel(spec=spec, params=params, summary=summary, n_features=x.shape[1])


def train(spec: ModelSpec, matrix: FeatureMatrix) -> TrainedModel:
    """Fit on a labeled feature matrix."""
    if matrix.labels is None:
        raise ValueError("matrix has no labels; training is supervised")
    return train_xy(spec, matrix.x, encode_labels(matrix.labels))


def save_model(model: TrainedModel, path: str | Path) -> None:
    params_kind = (
        "constant" if isinstance(model.params, ConstantModel) else model.spec.algorithm
    )
    payload = {
        "format_version": FORMAT_VERSION,
        "algorithm": model.spec.algorithm,
        "hyperparameters": {
            k: list(v) if isinstance(v, tuple) else v
            for k, v in model.spec.hyperparameters.items()
        },
        "seed": model.spec.seed,
        "summary": model.summary.to_dict(),
        "n_features": model.n_features,
        "params_kind": params_kind,
        "parameters": model.params.to_dict(),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> TrainedModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format {payload.get('format_version')!r}")
    spec = ModelSpec(
        algorithm=payload["algorithm"],
        hyperparameters=payload["hyperparameters"],
        seed=payload["seed"],
    )
    params = _PARAM_CLASSES[payload["params_kind"]].from_dict(payload["parameters"])
    return TrainedModel(
        spec=spec,
        params=params,
        summary=TrainingSummary.from_dict(payload["summary"]),
        n_features=payload["n_features"],
    )


__all__ = [
    "ALGORITHMS",
    "DEFAULT_HYPERPARAMETERS",
    "ConstantModel",
    "DecisionTree",
    "GradientBoosting",
    "LinearCoefficients",
    "ModelSpec",
    "NaiveBayesModel",
    "NeuralNet",
    "Node",
    "RandomForest",
    "RegressionTree",
    "Standardizer",
    "TrainedModel",
    "TrainingSummary",
    "decode_labels",
    "encode_labels",
    "independent_columns",
    "load_model",
    "save_model",
    "train",
    "train_xy",
]
