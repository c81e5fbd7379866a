"""Gradient-boosted trees on the logistic loss.

Each stage fits a regression tree to the negative gradient (the residual
y - p), takes a Newton line search along the tree's output direction, and
updates the score by learning_rate times the searched step.  The stored
ensemble keeps normalized stage weights summing to 1, with the combined
multiplier folded into the leaf values, so the weighted member sum plus the
base score reproduces the training-time scores exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import TrainingSummary
from .tree import RegressionTree, grow_regression

_MAX_STEP = 1000.0


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * eta))


def _logistic_loss(scores: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(np.logaddexp(0.0, scores) - y * scores))


def _line_search(scores: np.ndarray, h: np.ndarray, y: np.ndarray) -> float:
    """Newton iterations on the 1-D convex problem min_rho loss(scores + rho*h)."""
    rho = 1.0
    for _ in range(12):
        p = _sigmoid(scores + rho * h)
        grad = float(np.mean(h * (p - y)))
        curv = float(np.mean(h * h * p * (1.0 - p)))
        if curv <= 1e-12:
            break
        step = grad / curv
        rho -= step
        rho = min(max(rho, 0.0), _MAX_STEP)
        if abs(step) < 1e-10:
            break
    # never accept a step that worsens the loss
    base = _logistic_loss(scores, y)
    for _ in range(30):
        if _logistic_loss(scores + rho * h, y) <= base + 1e-12:
            break
        rho /= 2.0
    else:
        rho = 0.0
    return rho


@dataclass
class GradientBoosting:
    """Base log-odds plus weighted regression trees; weights sum to 1."""

    base_score: float
    members: list[RegressionTree]
    weights: np.ndarray
    stage_losses: tuple[float, ...] = field(default=())

    def decision_scores(self, x: np.ndarray) -> np.ndarray:
        scores = np.full(x.shape[0], self.base_score)
        for w, member in zip(self.weights, self.members):
            scores += w * member.predict(x)
        return scores

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return _sigmoid(self.decision_scores(x))

    def to_dict(self) -> dict:
        return {
            "base_score": self.base_score,
            "members": [m.to_dict() for m in self.members],
            "weights": self.weights.tolist(),
            "stage_losses": list(self.stage_losses),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GradientBoosting":
        return cls(
            base_score=d["base_score"],
            members=[RegressionTree.from_dict(m) for m in d["members"]],
            weights=np.array(d["weights"]),
            stage_losses=tuple(d["stage_losses"]),
        )


def fit(x: np.ndarray, y: np.ndarray, hyper, seed: int) -> tuple[GradientBoosting, TrainingSummary]:
    n_trees = int(hyper["n_trees"])
    max_depth = int(hyper["max_depth"])
    learning_rate = float(hyper["learning_rate"])

    mean = float(np.clip(y.mean(), 1e-6, 1.0 - 1e-6))
    base_score = float(np.log(mean / (1.0 - mean)))
    scores = np.full(len(y), base_score)

    trees: list[RegressionTree] = []
    multipliers: list[float] = []
    losses = [_logistic_loss(scores, y)]

    for _ in range(n_trees):
        residual = y - _sigmoid(scores)
        tree = RegressionTree(grow_regression(x, residual, max_depth))
        h = tree.predict(x)
        rho = _line_search(scores, h, y)
        multiplier = learning_rate * rho
        scores = scores + multiplier * h
        trees.append(tree)
        multipliers.append(multiplier)
        losses.append(_logistic_loss(scores, y))

    total = sum(multipliers)
    if total > 0:
        weights = np.array(multipliers) / total
        for tree in trees:
            tree.scale_leaves(total)
    else:
        # every stage degenerated; keep the base score and uniform weights
        weights = np.full(n_trees, 1.0 / n_trees) if n_trees else np.array([])
        for tree in trees:
            tree.scale_leaves(0.0)

    model = GradientBoosting(
        base_score=base_score,
        members=trees,
        weights=weights,
        stage_losses=tuple(losses),
    )
    summary = TrainingSummary(iterations=n_trees, converged=True, final_loss=losses[-1])
    return model, summary
