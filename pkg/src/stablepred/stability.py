"""Bootstrap stability protocol: resampled fits, rankings, consistency index, SNR."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .data import Dataset
from .models import ModelSpec, fit_model
from .objectives import HyperParams
from .optimizer import NumericalDivergenceError, OptimizerConfig

__all__ = [
    "BootstrapEnsemble",
    "FeatureRanking",
    "SubsetFamily",
    "run_bootstraps",
    "feature_importance",
    "top_k_subsets",
    "consistency_index",
    "mean_consistency",
    "snr",
    "snr_above",
]


@dataclass(frozen=True, eq=False)
class BootstrapEnsemble:
    """Fitted effective weight vectors, one row per bootstrap resample."""

    weights: np.ndarray
    seeds: tuple[int, ...]
    model_tag: str

    def __post_init__(self):
        if self.weights.ndim != 2:
            raise ValueError("weights must be a B x N matrix")
        if len(self.seeds) != self.weights.shape[0]:
            raise ValueError("one seed per bootstrap row required")

    @property
    def n_bootstraps(self) -> int:
        return self.weights.shape[0]

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True, eq=False)
class FeatureRanking:
    """Importance scores plus the permutation sorting them non-increasingly.

    Ties are broken toward the smaller feature index.
    """

    importance: np.ndarray
    order: np.ndarray


@dataclass(frozen=True)
class SubsetFamily:
    """Per-bootstrap top-k feature index sets."""

    k: int
    subsets: tuple[frozenset, ...]

    def __post_init__(self):
        for s in self.subsets:
            if len(s) != self.k:
                raise ValueError(f"subset of size {len(s)} in a k={self.k} family")


def _descending_order(values: np.ndarray) -> np.ndarray:
    # stable sort of -values: descending, ties by ascending index
    return np.argsort(-values, kind="stable")


def run_bootstraps(
    d: Dataset,
    model_spec: ModelSpec,
    h: HyperParams,
    cfg: OptimizerConfig,
    n_bootstraps: int,
    base_seed: int,
) -> BootstrapEnsemble:
    """Fit the model on ``n_bootstraps`` with-replacement resamples of ``d``.

    Bootstrap b resamples the M rows with seed ``base_seed + b`` and uses the
    same seed for parameter initialization, so any single bootstrap can be
    reproduced in isolation.  Aborts if any fit diverges.
    """
    if not d.labeled:
        raise ValueError("bootstrap training requires a labeled dataset")
    if n_bootstraps < 2:
        raise ValueError("at least 2 bootstraps are required for stability statistics")
    m = d.n_samples
    weights = np.empty((n_bootstraps, d.n_features))
    seeds = []
    for b in range(n_bootstraps):
        seed = base_seed + b
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, m, size=m)
        resampled = Dataset(
            feature_names=d.feature_names,
            X=d.X[idx],
            y=d.y[idx],
            raw_mean=d.raw_mean,
            raw_std=d.raw_std,
            standardized=d.standardized,
        )
        try:
            fit = fit_model(model_spec, resampled, h, cfg, init_seed=seed)
        except NumericalDivergenceError as e:
            raise NumericalDivergenceError(
                f"bootstrap {b}: {e}", e.iteration
            ) from e
        weights[b] = fit.effective_theta
        seeds.append(seed)
    return BootstrapEnsemble(weights=weights, seeds=tuple(seeds), model_tag=model_spec.name)


def feature_importance(e: BootstrapEnsemble, raw_std: np.ndarray) -> FeatureRanking:
    """Rank features by |mean weight across bootstraps| times raw feature std."""
    if raw_std.shape != (e.n_features,):
        raise ValueError("raw_std length must match the ensemble's feature count")
    importance = np.abs(e.weights.mean(axis=0)) * raw_std
    return FeatureRanking(importance=importance, order=_descending_order(importance))


def top_k_subsets(e: BootstrapEnsemble, raw_std: np.ndarray, k: int) -> SubsetFamily:
    """Top-k feature sets ranked within each bootstrap by |weight| * raw std."""
    if not 1 <= k < e.n_features:
        raise ValueError(f"k must satisfy 1 <= k < {e.n_features}")
    if raw_std.shape != (e.n_features,):
        raise ValueError("raw_std length must match the ensemble's feature count")
    subsets = []
    for row in e.weights:
        order = _descending_order(np.abs(row) * raw_std)
        subsets.append(frozenset(int(i) for i in order[:k]))
    return SubsetFamily(k=k, subsets=tuple(subsets))


def consistency_index(s_i: frozenset, s_j: frozenset, d: int) -> float:
    """Chance-corrected overlap (r*d - k^2) / (k*(d - k)) of two k-subsets.

    Equals 1 for identical subsets and 0 in expectation for independently
    drawn ones.  For k <= d/2 the value is bounded in [-1, 1]; disjoint
    subsets with k > d/2 fall below -1 (minimum -k/(d-k)) because
    k*(d-k) < k^2 there.
    """
    k = len(s_i)
    if len(s_j) != k:
        raise ValueError(f"subsets differ in size: {k} vs {len(s_j)}")
    if k == 0 or k >= d:
        raise ValueError(f"subset size must satisfy 0 < k < d, got k={k}, d={d}")
    r = len(s_i & s_j)
    return (r * d - k * k) / (k * (d - k))


def mean_consistency(f: SubsetFamily, d: int) -> float:
    """Average consistency index over all unordered pairs of subsets."""
    if len(f.subsets) < 2:
        raise ValueError("at least 2 subsets are required")
    values = [consistency_index(a, b, d) for a, b in combinations(f.subsets, 2)]
    return float(np.mean(values))


def snr(e: BootstrapEnsemble) -> np.ndarray:
    """Per-feature mean weight over its standard deviation across bootstraps.

    Uses the sample standard deviation (divisor B-1).  Zero deviation yields
    +inf when the mean is nonzero, else 0.  Values are signed; reporting
    uses their absolute value.
    """
    if e.n_bootstraps < 2:
        raise ValueError("at least 2 bootstraps are required")
    means = e.weights.mean(axis=0)
    stds = e.weights.std(axis=0, ddof=1)
    out = np.zeros_like(means)
    nonzero = stds > 0
    out[nonzero] = means[nonzero] / stds[nonzero]
    out[~nonzero & (means != 0)] = np.inf
    return out


def snr_above(
    e: BootstrapEnsemble,
    ranking: FeatureRanking,
    top: int,
    threshold: float = 1.96,
) -> int:
    """Count of the ``top`` ranked features with |SNR| at or above ``threshold``."""
    if top > e.n_features:
        raise ValueError("top exceeds the feature count")
    values = np.abs(snr(e))
    return int(np.sum(values[ranking.order[:top]] >= threshold))
