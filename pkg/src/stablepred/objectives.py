"""Loss functions and analytic gradients for sparse linear prediction.

All data terms are averaged over samples (1/M), so penalty weights keep
their meaning across cohort sizes.  The L1 term uses the smooth surrogate
sqrt(t^2 + eps) throughout, which keeps every objective differentiable.
The bias enters the linear predictor but no penalty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .data import Dataset, Laplacian

__all__ = [
    "LinearParams",
    "FactorizedParams",
    "HyperParams",
    "logistic_loss_linear",
    "logistic_grad_linear",
    "lasso_penalty",
    "lasso_penalty_grad",
    "lasso_loss",
    "lasso_grad",
    "elastic_net_loss",
    "elastic_net_grad",
    "graph_penalty",
    "graph_penalty_grad",
    "lasso_graph_loss",
    "lasso_graph_grad",
    "logistic_loss_factorized",
    "logistic_grad_factorized",
    "ae_loss",
    "ae_grad",
    "ae_l2_penalty",
    "ae_l2_grad",
    "joint_loss",
    "joint_grad",
]


@dataclass(frozen=True, eq=False)
class LinearParams:
    """Weight vector over features plus an unpenalized intercept."""

    theta: np.ndarray
    bias: float = 0.0

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.theta, [self.bias]])

    def with_vector(self, vec: np.ndarray) -> "LinearParams":
        return LinearParams(theta=vec[:-1].copy(), bias=float(vec[-1]))


@dataclass(frozen=True, eq=False)
class FactorizedParams:
    """Factorized weights theta = W^T u, with W doubling as encoder weights.

    u is k-dimensional, W is the k x N encoder, V the N x k decoder, and
    b_W / b_V the encoder/decoder biases.  The intercept of the linear
    predictor is ``bias``.
    """

    u: np.ndarray
    W: np.ndarray
    V: np.ndarray
    b_W: np.ndarray
    b_V: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        k, n = self.W.shape
        if self.u.shape != (k,):
            raise ValueError(f"u has shape {self.u.shape}, expected ({k},)")
        if self.V.shape != (n, k):
            raise ValueError(f"V has shape {self.V.shape}, expected ({n}, {k})")
        if self.b_W.shape != (k,) or self.b_V.shape != (n,):
            raise ValueError("encoder/decoder bias shapes do not match W")

    @property
    def n_features(self) -> int:
        return self.W.shape[1]

    @property
    def hidden_units(self) -> int:
        return self.W.shape[0]

    def effective_theta(self) -> np.ndarray:
        return self.W.T @ self.u

    def to_vector(self) -> np.ndarray:
        return np.concatenate(
            [self.u, self.W.ravel(), self.V.ravel(), self.b_W, self.b_V, [self.bias]]
        )

    def with_vector(self, vec: np.ndarray) -> "FactorizedParams":
        k, n = self.W.shape
        parts = np.split(vec, np.cumsum([k, k * n, n * k, k, n]))
        return FactorizedParams(
            u=parts[0].copy(),
            W=parts[1].reshape(k, n).copy(),
            V=parts[2].reshape(n, k).copy(),
            b_W=parts[3].copy(),
            b_V=parts[4].copy(),
            bias=float(parts[5][0]),
        )


@dataclass(frozen=True)
class HyperParams:
    """Penalty weights and model-size settings.

    alpha scales the L1 term, lambda_en mixes L1 against squared-L2 inside
    the elastic net, lambda_fg scales the feature-graph quadratic form,
    lambda_ae the reconstruction term, lambda_l2 the decay on encoder and
    decoder weights/biases, hidden_units sets the latent width, and
    l1_epsilon the L1 smoothing constant.
    """

    alpha: float = 0.005
    lambda_en: float = 1.0
    lambda_fg: float = 0.0
    lambda_ae: float = 0.0
    lambda_l2: float = 0.0
    hidden_units: int = 10
    l1_epsilon: float = 1e-10

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if not 0.0 <= self.lambda_en <= 1.0:
            raise ValueError("lambda_en must lie in [0, 1]")
        if self.lambda_fg < 0 or self.lambda_ae < 0 or self.lambda_l2 < 0:
            raise ValueError("penalty weights must be >= 0")
        if self.hidden_units < 1:
            raise ValueError("hidden_units must be a positive integer")
        if self.l1_epsilon <= 0:
            raise ValueError("l1_epsilon must be > 0")


def _require_labeled(d: Dataset) -> None:
    if not d.labeled:
        raise ValueError("dataset has no labels")


def _logistic_data_loss(X: np.ndarray, y: np.ndarray, theta: np.ndarray, bias: float) -> float:
    margins = y * (X @ theta + bias)
    return float(np.mean(np.logaddexp(0.0, -margins)))


def _logistic_data_grad(
    X: np.ndarray, y: np.ndarray, theta: np.ndarray, bias: float
) -> tuple[np.ndarray, float]:
    m = X.shape[0]
    margins = y * (X @ theta + bias)
    resid = -y * expit(-margins) / m
    return X.T @ resid, float(resid.sum())


def logistic_loss_linear(p: LinearParams, d: Dataset) -> float:
    """Mean logistic loss (1/M) sum log(1 + exp(-y (theta.x + bias)))."""
    _require_labeled(d)
    return _logistic_data_loss(d.X, d.y, p.theta, p.bias)


def logistic_grad_linear(p: LinearParams, d: Dataset) -> LinearParams:
    _require_labeled(d)
    g_theta, g_bias = _logistic_data_grad(d.X, d.y, p.theta, p.bias)
    return LinearParams(theta=g_theta, bias=g_bias)


def lasso_penalty(theta: np.ndarray, alpha: float, eps: float) -> float:
    """Smoothed L1 penalty alpha * sum sqrt(theta_i^2 + eps)."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if eps <= 0:
        raise ValueError("eps must be > 0")
    return float(alpha * np.sum(np.sqrt(theta**2 + eps)))


def lasso_penalty_grad(theta: np.ndarray, alpha: float, eps: float) -> np.ndarray:
    return alpha * theta / np.sqrt(theta**2 + eps)


def lasso_loss(p: LinearParams, d: Dataset, h: HyperParams) -> float:
    """Logistic data term plus smoothed L1 on the weight vector."""
    return logistic_loss_linear(p, d) + lasso_penalty(p.theta, h.alpha, h.l1_epsilon)


def lasso_grad(p: LinearParams, d: Dataset, h: HyperParams) -> LinearParams:
    g = logistic_grad_linear(p, d)
    return LinearParams(
        theta=g.theta + lasso_penalty_grad(p.theta, h.alpha, h.l1_epsilon),
        bias=g.bias,
    )


def elastic_net_loss(p: LinearParams, d: Dataset, h: HyperParams) -> float:
    """Logistic term plus alpha * (lambda_en * L1 + (1 - lambda_en) * sum theta^2)."""
    l1 = lasso_penalty(p.theta, 1.0, h.l1_epsilon)
    l2 = float(np.sum(p.theta**2))
    penalty = h.alpha * (h.lambda_en * l1 + (1.0 - h.lambda_en) * l2)
    return logistic_loss_linear(p, d) + penalty


def elastic_net_grad(p: LinearParams, d: Dataset, h: HyperParams) -> LinearParams:
    g = logistic_grad_linear(p, d)
    g_pen = h.alpha * (
        h.lambda_en * lasso_penalty_grad(p.theta, 1.0, h.l1_epsilon)
        + (1.0 - h.lambda_en) * 2.0 * p.theta
    )
    return LinearParams(theta=g.theta + g_pen, bias=g.bias)


def graph_penalty(theta: np.ndarray, lap: Laplacian, lambda_fg: float) -> float:
    """Quadratic form (lambda_fg / 2) theta^T L theta over the feature graph."""
    if lap.matrix.shape != (theta.size, theta.size):
        raise ValueError(
            f"Laplacian is {lap.matrix.shape} but theta has {theta.size} entries"
        )
    return float(0.5 * lambda_fg * theta @ lap.matrix @ theta)


def graph_penalty_grad(theta: np.ndarray, lap: Laplacian, lambda_fg: float) -> np.ndarray:
    if lap.matrix.shape != (theta.size, theta.size):
        raise ValueError(
            f"Laplacian is {lap.matrix.shape} but theta has {theta.size} entries"
        )
    return lambda_fg * (lap.matrix @ theta)


def lasso_graph_loss(p: LinearParams, d: Dataset, h: HyperParams, lap: Laplacian) -> float:
    """Lasso objective with the feature-graph quadratic form added."""
    return lasso_loss(p, d, h) + graph_penalty(p.theta, lap, h.lambda_fg)


def lasso_graph_grad(p: LinearParams, d: Dataset, h: HyperParams, lap: Laplacian) -> LinearParams:
    g = lasso_grad(p, d, h)
    return LinearParams(
        theta=g.theta + graph_penalty_grad(p.theta, lap, h.lambda_fg),
        bias=g.bias,
    )


def logistic_loss_factorized(p: FactorizedParams, d: Dataset) -> float:
    """Mean logistic loss of the factorized predictor u^T W x + bias.

    Identical to the linear loss evaluated at theta = W^T u.
    """
    _require_labeled(d)
    return _logistic_data_loss(d.X, d.y, p.effective_theta(), p.bias)


def logistic_grad_factorized(p: FactorizedParams, d: Dataset) -> FactorizedParams:
    _require_labeled(d)
    g_theta, g_bias = _logistic_data_grad(d.X, d.y, p.effective_theta(), p.bias)
    return FactorizedParams(
        u=p.W @ g_theta,
        W=np.outer(p.u, g_theta),
        V=np.zeros_like(p.V),
        b_W=np.zeros_like(p.b_W),
        b_V=np.zeros_like(p.b_V),
        bias=g_bias,
    )


def _ae_forward(p: FactorizedParams, X: np.ndarray):
    hidden = expit(X @ p.W.T + p.b_W)
    residual = X - p.b_V - hidden @ p.V.T
    return hidden, residual


def ae_loss(p: FactorizedParams, X: np.ndarray) -> float:
    """Mean reconstruction error (1/2N) ||x - b_V - V sigmoid(Wx + b_W)||^2.

    Averaged over the rows of X.
    """
    if X.shape[1] != p.n_features:
        raise ValueError(f"X has {X.shape[1]} columns, model expects {p.n_features}")
    _, residual = _ae_forward(p, X)
    return float(np.sum(residual**2) / (2.0 * p.n_features * X.shape[0]))


def ae_grad(p: FactorizedParams, X: np.ndarray) -> FactorizedParams:
    if X.shape[1] != p.n_features:
        raise ValueError(f"X has {X.shape[1]} columns, model expects {p.n_features}")
    hidden, residual = _ae_forward(p, X)
    d_resid = residual / (p.n_features * X.shape[0])
    d_hidden = -(d_resid @ p.V)
    d_pre = d_hidden * hidden * (1.0 - hidden)
    return FactorizedParams(
        u=np.zeros_like(p.u),
        W=d_pre.T @ X,
        V=-(d_resid.T @ hidden),
        b_W=d_pre.sum(axis=0),
        b_V=-d_resid.sum(axis=0),
        bias=0.0,
    )


def ae_l2_penalty(p: FactorizedParams, lambda_l2: float) -> float:
    """Weight decay lambda_l2 * (||W||_F^2 + ||V||_F^2 + ||b_W||^2 + ||b_V||^2).

    u and the predictor bias are not penalized.
    """
    if lambda_l2 < 0:
        raise ValueError("lambda_l2 must be >= 0")
    return float(
        lambda_l2
        * (np.sum(p.W**2) + np.sum(p.V**2) + np.sum(p.b_W**2) + np.sum(p.b_V**2))
    )


def ae_l2_grad(p: FactorizedParams, lambda_l2: float) -> FactorizedParams:
    c = 2.0 * lambda_l2
    return FactorizedParams(
        u=np.zeros_like(p.u),
        W=c * p.W,
        V=c * p.V,
        b_W=c * p.b_W,
        b_V=c * p.b_V,
        bias=0.0,
    )


def _validate_augment(d: Dataset, aug: np.ndarray | None) -> None:
    if aug is not None and (aug.ndim != 2 or aug.shape[1] != d.n_features):
        raise ValueError(
            f"augment matrix has shape {aug.shape}, expected (*, {d.n_features})"
        )


def _ae_rows(d: Dataset, aug: np.ndarray | None) -> np.ndarray:
    return d.X if aug is None else np.vstack([d.X, aug])


def joint_loss(
    p: FactorizedParams,
    d: Dataset,
    aug: np.ndarray | None,
    h: HyperParams,
    lap: Laplacian | None = None,
) -> float:
    """Factorized logistic loss jointly regularized by reconstruction.

    Sum of the factorized logistic term, the smoothed L1 on theta = W^T u,
    lambda_ae times the reconstruction loss over the labeled rows stacked
    with any augment rows, the encoder/decoder weight decay, and (when a
    Laplacian is given) the feature-graph quadratic form on theta.
    """
    _require_labeled(d)
    _validate_augment(d, aug)
    theta = p.effective_theta()
    total = _logistic_data_loss(d.X, d.y, theta, p.bias)
    total += lasso_penalty(theta, h.alpha, h.l1_epsilon)
    if h.lambda_ae != 0.0:
        total += h.lambda_ae * ae_loss(p, _ae_rows(d, aug))
    total += ae_l2_penalty(p, h.lambda_l2)
    if lap is not None:
        total += graph_penalty(theta, lap, h.lambda_fg)
    return total


def joint_grad(
    p: FactorizedParams,
    d: Dataset,
    aug: np.ndarray | None,
    h: HyperParams,
    lap: Laplacian | None = None,
) -> FactorizedParams:
    """Analytic gradient of ``joint_loss`` for every parameter block."""
    _require_labeled(d)
    _validate_augment(d, aug)
    theta = p.effective_theta()

    g_theta, g_bias = _logistic_data_grad(d.X, d.y, theta, p.bias)
    g_theta = g_theta + lasso_penalty_grad(theta, h.alpha, h.l1_epsilon)
    if lap is not None:
        g_theta = g_theta + graph_penalty_grad(theta, lap, h.lambda_fg)

    # theta = W^T u, so d/du = W g_theta and d/dW = u (x) g_theta.
    g_u = p.W @ g_theta
    g_W = np.outer(p.u, g_theta)
    g_V = np.zeros_like(p.V)
    g_bW = np.zeros_like(p.b_W)
    g_bV = np.zeros_like(p.b_V)

    if h.lambda_ae != 0.0:
        g_ae = ae_grad(p, _ae_rows(d, aug))
        g_W = g_W + h.lambda_ae * g_ae.W
        g_V = g_V + h.lambda_ae * g_ae.V
        g_bW = g_bW + h.lambda_ae * g_ae.b_W
        g_bV = g_bV + h.lambda_ae * g_ae.b_V

    if h.lambda_l2 != 0.0:
        g_l2 = ae_l2_grad(p, h.lambda_l2)
        g_W = g_W + g_l2.W
        g_V = g_V + g_l2.V
        g_bW = g_bW + g_l2.b_W
        g_bV = g_bV + g_l2.b_V

    return FactorizedParams(u=g_u, W=g_W, V=g_V, b_W=g_bW, b_V=g_bV, bias=g_bias)
