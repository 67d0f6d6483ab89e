from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit

from icll.learners.base import Classifier, check_features, check_targets


class LogisticRegression(Classifier):
    """L2 正則化邏輯迴歸

    目標函數為 Σ log-loss + (λ/2)·‖w‖²（截距不懲罰），特徵先在內部標準化。
    以 L-BFGS-B（只用解析梯度的一階擬牛頓法）求解；每個梯度分量 ≤ tol/sqrt(p+1)，
    因此以梯度條件停止時梯度範數 ≤ tol。
    """

    kind = "lr"

    def __init__(self, l2_strength: float = 1.0, max_iter: int = 1000, tol: float = 1e-6):
        self.l2_strength = l2_strength
        self.max_iter = max_iter
        self.tol = tol

    @staticmethod
    def loss_and_gradient(
        params: np.ndarray, design: np.ndarray, targets: np.ndarray, l2_strength: float
    ) -> Tuple[float, np.ndarray]:
        weights, intercept = params[:-1], params[-1]
        response = design @ weights + intercept
        loss = float(np.sum(np.logaddexp(0.0, response) - targets * response))
        loss += 0.5 * l2_strength * float(weights @ weights)
        residual = expit(response) - targets
        gradient = np.empty_like(params)
        gradient[:-1] = design.T @ residual + l2_strength * weights
        gradient[-1] = residual.sum()
        return loss, gradient

    def standardize(self, features: np.ndarray) -> np.ndarray:
        return (check_features(features) - self.mean_) / self.scale_

    def fit(self, features: np.ndarray, targets: np.ndarray) -> "LogisticRegression":
        features = check_features(features)
        targets = check_targets(features, targets)
        if features.shape[0] < 2:
            raise ValueError("邏輯迴歸至少需要 2 筆樣本")
        self.mean_ = features.mean(axis=0)
        scale = features.std(axis=0)
        scale[scale == 0.0] = 1.0
        self.scale_ = scale

        n_features = features.shape[1]
        positives = int(targets.sum())
        self.constant_: Optional[float] = None
        if positives in (0, targets.shape[0]):
            # 單一類別：常數分數器
            self.constant_ = 1.0 if positives else 0.0
            self.coef_ = np.zeros(n_features)
            self.intercept_ = 0.0
            self.n_iter_ = 0
            return self

        design = self.standardize(features)
        result = minimize(
            self.loss_and_gradient,
            np.zeros(n_features + 1),
            args=(design, targets.astype(np.float64), self.l2_strength),
            jac=True,
            method="L-BFGS-B",
            options={
                "gtol": self.tol / np.sqrt(n_features + 1),
                "ftol": 0.0,
                "maxiter": self.max_iter,
            },
        )
        self.coef_ = result.x[:-1].copy()
        self.intercept_ = float(result.x[-1])
        self.n_iter_ = int(result.nit)
        return self

    @property
    def params_(self) -> np.ndarray:
        return np.append(self.coef_, self.intercept_)

    def decision_function(self, features: np.ndarray) -> np.ndarray:
        return self.standardize(features) @ self.coef_ + self.intercept_

    def score(self, features: np.ndarray) -> np.ndarray:
        if self.constant_ is not None:
            return np.full(check_features(features).shape[0], self.constant_)
        return expit(self.decision_function(features))

    def state_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean_.tolist(),
            "scale": self.scale_.tolist(),
            "coef": self.coef_.tolist(),
            "intercept": self.intercept_,
            "n_iter": self.n_iter_,
            "constant": self.constant_,
        }

    def load_state(self, state: Dict[str, Any]) -> "LogisticRegression":
        self.mean_ = np.array(state["mean"], dtype=np.float64)
        self.scale_ = np.array(state["scale"], dtype=np.float64)
        self.coef_ = np.array(state["coef"], dtype=np.float64)
        self.intercept_ = float(state["intercept"])
        self.n_iter_ = int(state["n_iter"])
        constant = state.get("constant")
        self.constant_ = None if constant is None else float(constant)
        return self
