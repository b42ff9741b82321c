"""Predictive-performance measures: rank-based AUC, F-maximizing threshold, sparsity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

__all__ = ["PredictionSet", "auc", "best_f_threshold", "selected_count"]


@dataclass(frozen=True, eq=False)
class PredictionSet:
    """Real-valued scores paired with +/-1 labels."""

    scores: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if len(self.scores) != len(self.labels):
            raise ValueError("scores and labels must have equal length")
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ValueError("labels must be +1 or -1")


def _require_both_classes(p: PredictionSet) -> None:
    if not (np.any(p.labels > 0) and np.any(p.labels < 0)):
        raise ValueError("both classes must be present")


def auc(p: PredictionSet) -> float:
    """Probability that a positive outscores a negative, ties counting 0.5.

    Computed from midranks in O(M log M); equals the fraction of
    (positive, negative) pairs won, plus half the ties.
    """
    _require_both_classes(p)
    pos = p.labels > 0
    n_pos = int(pos.sum())
    n_neg = len(p.labels) - n_pos
    ranks = rankdata(p.scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def best_f_threshold(p: PredictionSet) -> tuple[float, float]:
    """Threshold maximizing F1, predicting positive at score >= threshold.

    Candidates are the midpoints between consecutive distinct scores plus
    -inf and +inf; ties in F1 resolve to the smallest threshold.  A
    degenerate confusion matrix (no predicted or matched positives) scores 0.
    """
    _require_both_classes(p)
    distinct = np.unique(p.scores)
    candidates = np.concatenate([[-np.inf], (distinct[:-1] + distinct[1:]) / 2.0, [np.inf]])
    best_thr = -np.inf
    best_f = -1.0
    n_pos = int(np.sum(p.labels > 0))
    for thr in candidates:
        predicted = p.scores >= thr
        tp = int(np.sum(predicted & (p.labels > 0)))
        n_pred = int(predicted.sum())
        if tp == 0 or n_pred == 0:
            f1 = 0.0
        else:
            precision = tp / n_pred
            recall = tp / n_pos
            f1 = 2.0 * precision * recall / (precision + recall)
        if f1 > best_f:
            best_f = f1
            best_thr = float(thr)
    return best_thr, best_f


def selected_count(theta: np.ndarray, tol: float = 1e-6) -> tuple[int, float]:
    """How many weights exceed ``tol`` in magnitude, and that count over N."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    count = int(np.sum(np.abs(theta) > tol))
    return count, count / theta.size
