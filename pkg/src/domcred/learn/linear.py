"""Linear classifiers: IRLS logistic regression and elastic-net GLM.

Both standardize features internally and report coefficients on the raw
feature scale (the two parameterizations give identical predictions).  The
elastic-net penalty is lambda * ((1 - alpha)/2 * ||b||_2^2 + alpha * ||b||_1)
on the mean loss, never applied to the intercept.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .base import Standardizer, TrainingSummary, independent_columns

COEFFICIENT_CAP = 30.0  # on the standardized scale; hit on separable data
_WEIGHT_FLOOR = 1e-10


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * eta))


def _binomial_nll(eta: np.ndarray, y: np.ndarray) -> float:
    # mean of log(1 + exp(eta)) - y*eta, computed stably
    return float(np.mean(np.logaddexp(0.0, eta) - y * eta))


@dataclass(frozen=True)
class LinearCoefficients:
    """Intercept and one weight per feature column, on the raw input scale."""

    family: str
    intercept: float
    weights: np.ndarray
    lambda_: float = 0.0
    alpha: float = 0.0
    p_values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.family not in ("binomial", "gaussian"):
            raise ValueError(f"unknown family {self.family!r}")
        if not np.isfinite(self.intercept) or not np.all(np.isfinite(self.weights)):
            raise ValueError("non-finite coefficients")

    def linear_predictor(self, x: np.ndarray) -> np.ndarray:
        return self.intercept + x @ self.weights

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        eta = self.linear_predictor(x)
        if self.family == "binomial":
            return _sigmoid(eta)
        return np.clip(eta, 0.0, 1.0)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "intercept": self.intercept,
            "weights": self.weights.tolist(),
            "lambda": self.lambda_,
            "alpha": self.alpha,
            "p_values": list(self.p_values) if self.p_values is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LinearCoefficients":
        return cls(
            family=d["family"],
            intercept=d["intercept"],
            weights=np.array(d["weights"]),
            lambda_=d["lambda"],
            alpha=d["alpha"],
            p_values=tuple(d["p_values"]) if d["p_values"] is not None else None,
        )


def _raw_scale(
    b0: float, beta: np.ndarray, kept: list[int], scaler: Standardizer, n_cols: int
) -> tuple[float, np.ndarray]:
    """Map standardized-scale coefficients back to the raw feature scale."""
    weights = np.zeros(n_cols)
    intercept = b0
    for coef, j in zip(beta, kept):
        weights[j] = coef / scaler.std[j]
        intercept -= coef * scaler.mean[j] / scaler.std[j]
    return intercept, weights


def fit_logistic(
    x: np.ndarray, y: np.ndarray, hyper, seed: int
) -> tuple[LinearCoefficients, TrainingSummary]:
    """Newton / iteratively reweighted least squares with step halving.

    Perfectly separable data drives coefficients to the cap; the model is
    then flagged non-converged with a warning instead of diverging.
    """
    max_iter = int(hyper["max_iter"])
    tol = float(hyper["tol"])
    cap = float(hyper["coefficient_cap"])
    use_intercept = bool(hyper["intercept"])

    scaler = Standardizer.fit(x)
    z = scaler.transform(x)
    if hyper["remove_collinear"]:
        kept = independent_columns(z)
    else:
        kept = [j for j in range(z.shape[1]) if np.linalg.norm(z[:, j]) > 1e-12]

    n = len(y)
    design_parts = []
    if use_intercept:
        design_parts.append(np.ones((n, 1)))
    design_parts.append(z[:, kept])
    design = np.hstack(design_parts)
    k = design.shape[1]

    b = np.zeros(k)
    nll = _binomial_nll(design @ b, y)
    converged = False
    capped = False
    iterations = 0
    hessian = np.eye(k)

    for iterations in range(1, max_iter + 1):
        eta = design @ b
        p = _sigmoid(eta)
        w = np.maximum(p * (1.0 - p), _WEIGHT_FLOOR)
        grad = design.T @ (y - p) / n
        hessian = (design.T * w) @ design / n
        try:
            delta = np.linalg.solve(hessian + 1e-12 * np.eye(k), grad)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(hessian, grad, rcond=None)[0]

        step = 1.0
        for _ in range(30):
            candidate = np.clip(b + step * delta, -cap, cap)
            new_nll = _binomial_nll(design @ candidate, y)
            if new_nll <= nll + 1e-12:
                break
            step /= 2.0
        else:
            candidate, new_nll = b, nll

        shift = float(np.max(np.abs(candidate - b)))
        b, nll = candidate, new_nll
        if shift < tol:
            converged = True
            break

    capped = bool(np.any(np.abs(b) >= cap - 1e-12))
    if capped:
        converged = False

    p_values = None
    if hyper["compute_p_values"]:
        p_values = [float("nan")] * x.shape[1]
        try:
            cov = np.linalg.inv(hessian * n)
            se = np.sqrt(np.maximum(np.diag(cov), 0.0))
            offset = 1 if use_intercept else 0
            normal = NormalDist()
            for idx, j in enumerate(kept):
                s = se[offset + idx]
                if s > 0:
                    zscore = b[offset + idx] / s
                    p_values[j] = 2.0 * (1.0 - normal.cdf(abs(zscore)))
        except np.linalg.LinAlgError:
            pass

    b0 = b[0] if use_intercept else 0.0
    beta = b[1:] if use_intercept else b
    intercept, weights = _raw_scale(b0, beta, kept, scaler, x.shape[1])

    warnings = ("separation suspected: coefficients capped",) if capped else ()
    model = LinearCoefficients(
        family="binomial",
        intercept=intercept,
        weights=weights,
        p_values=tuple(p_values) if p_values is not None else None,
    )
    summary = TrainingSummary(
        iterations=iterations, converged=converged, final_loss=nll, warnings=warnings
    )
    return model, summary


def _soft_threshold(value: float, threshold: float) -> float:
    if value > threshold:
        return value - threshold
    if value < -threshold:
        return value + threshold
    return 0.0


def _penalty(beta: np.ndarray, lam: float, alpha: float) -> float:
    return lam * ((1.0 - alpha) / 2.0 * float(beta @ beta) + alpha * float(np.abs(beta).sum()))


def _cd_weighted(
    z: np.ndarray,
    target: np.ndarray,
    w: np.ndarray,
    b0: float,
    beta: np.ndarray,
    lam: float,
    alpha: float,
    sweeps: int = 1000,
    inner_tol: float = 1e-10,
) -> tuple[float, np.ndarray]:
    """Coordinate descent on the weighted penalized least squares problem."""
    n = len(target)
    wx2 = (w[:, None] * z * z).sum(axis=0) / n
    eta = b0 + z @ beta
    w_sum = w.sum()
    for _ in range(sweeps):
        biggest = 0.0
        new_b0 = b0 + float(w @ (target - eta)) / w_sum
        eta += new_b0 - b0
        biggest = max(biggest, abs(new_b0 - b0))
        b0 = new_b0
        for j in range(z.shape[1]):
            old = beta[j]
            rho = float(w * z[:, j] @ (target - eta)) / n + wx2[j] * old
            denom = wx2[j] + lam * (1.0 - alpha)
            new = _soft_threshold(rho, lam * alpha) / denom if denom > 0 else 0.0
            if new != old:
                eta += z[:, j] * (new - old)
                beta[j] = new
                biggest = max(biggest, abs(new - old))
        if biggest < inner_tol:
            break
    return b0, beta


def fit_elastic_net(
    x: np.ndarray, y: np.ndarray, hyper, seed: int
) -> tuple[LinearCoefficients, TrainingSummary]:
    """Elastic-net GLM: coordinate descent, proximal Newton for binomial.

    With lambda = 0 this is unpenalized regression, so exactly-collinear
    columns are dropped first (the penalized problem handles them on its
    own and keeping them is the point of the penalty).
    """
    family = hyper["family"]
    lam = float(hyper["lambda"])
    alpha = float(hyper["alpha"])
    max_iter = int(hyper["max_iter"])
    tol = float(hyper["tol"])

    scaler = Standardizer.fit(x)
    z_full = scaler.transform(x)
    if lam == 0.0:
        kept = independent_columns(z_full)
    else:
        kept = [j for j in range(z_full.shape[1]) if np.linalg.norm(z_full[:, j]) > 1e-12]
    z = z_full[:, kept]
    n = len(y)

    beta = np.zeros(len(kept))
    b0 = 0.0
    converged = False
    iterations = 0

    if family == "gaussian":
        objective = lambda b0_, beta_: float(
            0.5 * np.mean((y - b0_ - z @ beta_) ** 2)
        ) + _penalty(beta_, lam, alpha)
        weights_const = np.ones(n)
        for iterations in range(1, max_iter + 1):
            prev = beta.copy()
            prev_b0 = b0
            b0, beta = _cd_weighted(z, y, weights_const, b0, beta, lam, alpha)
            if max(abs(b0 - prev_b0), float(np.max(np.abs(beta - prev))) if len(beta) else 0.0) < tol:
                converged = True
                break
        loss = objective(b0, beta)
    else:
        def objective(b0_, beta_):
            return _binomial_nll(b0_ + z @ beta_, y) + _penalty(beta_, lam, alpha)

        loss = objective(b0, beta)
        for iterations in range(1, max_iter + 1):
            eta = b0 + z @ beta
            p = _sigmoid(eta)
            w = np.maximum(p * (1.0 - p), _WEIGHT_FLOOR)
            target = eta + (y - p) / w

            new_b0, new_beta = _cd_weighted(z, target, w, b0, beta.copy(), lam, alpha)
            step = 1.0
            for _ in range(30):
                trial_b0 = b0 + step * (new_b0 - b0)
                trial_beta = beta + step * (new_beta - beta)
                if lam == 0.0:
                    trial_beta = np.clip(trial_beta, -COEFFICIENT_CAP, COEFFICIENT_CAP)
                    trial_b0 = float(np.clip(trial_b0, -COEFFICIENT_CAP, COEFFICIENT_CAP))
                new_loss = objective(trial_b0, trial_beta)
                if new_loss <= loss + 1e-12:
                    break
                step /= 2.0
            else:
                trial_b0, trial_beta, new_loss = b0, beta, loss

            shift = max(
                abs(trial_b0 - b0),
                float(np.max(np.abs(trial_beta - beta))) if len(beta) else 0.0,
            )
            b0, beta, loss = trial_b0, trial_beta, new_loss
            if shift < tol:
                converged = True
                break

    warnings = ()
    if family == "binomial" and lam == 0.0 and bool(
        np.any(np.abs(beta) >= COEFFICIENT_CAP - 1e-12)
    ):
        converged = False
        warnings = ("separation suspected: coefficients capped",)

    intercept, weights = _raw_scale(b0, beta, kept, scaler, x.shape[1])
    model = LinearCoefficients(
        family=family, intercept=intercept, weights=weights, lambda_=lam, alpha=alpha
    )
    summary = TrainingSummary(
        iterations=iterations, converged=converged, final_loss=loss, warnings=warnings
    )
    return model, summary
