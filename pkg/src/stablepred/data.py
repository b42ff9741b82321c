"""Cohort data model: CSV ingestion, standardization, alignment, feature graphs."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Dataset",
    "FeatureGraph",
    "Laplacian",
    "make_dataset",
    "load_dataset",
    "write_dataset_csv",
    "standardize",
    "standardize_like",
    "align_common_features",
    "load_feature_graph",
    "write_feature_graph",
    "build_laplacian",
]

DEFAULT_LABEL_COLUMN = "label"
GRAPH_HEADER = ("name_a", "name_b", "weight")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Sample-major feature matrix with named columns and optional +/-1 labels.

    ``raw_mean`` and ``raw_std`` are the per-column statistics of the data as
    originally loaded (population standard deviation, divisor M).  They are
    carried through standardization and column selection so that feature
    ranking can always refer back to the original scale.
    """

    feature_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray | None
    raw_mean: np.ndarray
    raw_std: np.ndarray
    standardized: bool = False

    def __post_init__(self):
        if self.X.ndim != 2:
            raise ValueError(f"X must be 2-d, got shape {self.X.shape}")
        n = self.X.shape[1]
        if len(self.feature_names) != n:
            raise ValueError(
                f"{len(self.feature_names)} feature names for {n} columns"
            )
        if len(set(self.feature_names)) != n:
            raise ValueError("feature names must be unique")
        if self.y is not None:
            if len(self.y) != self.X.shape[0]:
                raise ValueError("label vector length does not match row count")
            if not np.all(np.isin(self.y, (-1.0, 1.0))):
                raise ValueError("labels must be +1 or -1")
        if self.raw_mean.shape != (n,) or self.raw_std.shape != (n,):
            raise ValueError("raw_mean/raw_std must have one entry per column")
        if np.any(self.raw_std < 0):
            raise ValueError("raw_std entries must be nonnegative")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def labeled(self) -> bool:
        return self.y is not None


def make_dataset(
    X,
    y=None,
    feature_names=None,
) -> Dataset:
    """Build an unstandardized Dataset from arrays, computing raw column stats."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be 2-d")
    if feature_names is None:
        feature_names = tuple(f"f{i}" for i in range(X.shape[1]))
    if y is not None:
        y = np.asarray(y, dtype=float)
    return Dataset(
        feature_names=tuple(feature_names),
        X=X,
        y=y,
        raw_mean=X.mean(axis=0),
        raw_std=X.std(axis=0),
        standardized=False,
    )


def load_dataset(path, label_column: str | None = None) -> Dataset:
    """Load a cohort from a headered CSV file.

    When ``label_column`` is given, that column is parsed as +1/-1 labels
    ("1"/"-1" accepted; "0" is mapped to -1 with a warning reporting how many
    values were remapped).  When it is None the cohort is loaded unlabeled.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        rows = list(reader)

    seen = set()
    for name in header:
        if name in seen:
            raise ValueError(f"{path}: duplicate column name {name!r}")
        seen.add(name)

    label_idx = None
    if label_column is not None:
        if label_column not in header:
            raise ValueError(f"{path}: label column {label_column!r} not found")
        label_idx = header.index(label_column)

    if not rows:
        raise ValueError(f"{path}: no data rows")

    values = np.empty((len(rows), len(header)), dtype=float)
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise ValueError(f"{path}: row {i + 2} has {len(row)} fields, expected {len(header)}")
        for j, cell in enumerate(row):
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise ValueError(
                    f"{path}: non-numeric value {cell!r} at row {i + 2}, column {header[j]!r}"
                ) from None

    y = None
    if label_idx is not None:
        raw = values[:, label_idx]
        zeros = int(np.sum(raw == 0.0))
        bad = ~np.isin(raw, (-1.0, 0.0, 1.0))
        if np.any(bad):
            first = raw[bad][0]
            raise ValueError(f"{path}: label value {first!r} outside accepted set {{+1, -1, 0}}")
        if zeros:
            warnings.warn(f"{path}: {zeros} label value(s) '0' mapped to -1", stacklevel=2)
        y = np.where(raw == 1.0, 1.0, -1.0)
        keep = [j for j in range(len(header)) if j != label_idx]
        values = values[:, keep]
        header = [header[j] for j in keep]

    return make_dataset(values, y=y, feature_names=header)


def write_dataset_csv(d: Dataset, path, label_column: str = DEFAULT_LABEL_COLUMN) -> None:
    """Write a cohort as a headered CSV, with labels as +1/-1 when present."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if d.labeled:
            writer.writerow(list(d.feature_names) + [label_column])
            for row, label in zip(d.X, d.y):
                writer.writerow([repr(float(v)) for v in row] + [str(int(label))])
        else:
            writer.writerow(list(d.feature_names))
            for row in d.X:
                writer.writerow([repr(float(v)) for v in row])


def standardize(d: Dataset) -> Dataset:
    """Center each column to mean 0 and scale to standard deviation 1.

    Columns with zero variance become all-zeros.  ``raw_mean``/``raw_std``
    are preserved from the input.  Standardizing twice is rejected.
    """
    if d.standardized:
        raise ValueError("dataset is already standardized")
    mean = d.X.mean(axis=0)
    std = d.X.std(axis=0)
    centered = d.X - mean
    scaled = np.divide(centered, std, out=np.zeros_like(centered), where=std > 0)
    return Dataset(
        feature_names=d.feature_names,
        X=scaled,
        y=d.y,
        raw_mean=d.raw_mean,
        raw_std=d.raw_std,
        standardized=True,
    )


def standardize_like(d: Dataset, reference: Dataset) -> Dataset:
    """Apply the reference cohort's column transform (its raw mean/std) to ``d``.

    Used to score held-out data with a model fit on the reference cohort's
    standardized scale.  Columns the reference holds constant become zeros.
    """
    if d.standardized:
        raise ValueError("dataset is already standardized")
    if d.feature_names != reference.feature_names:
        raise ValueError("feature columns do not match the reference dataset")
    centered = d.X - reference.raw_mean
    scaled = np.divide(
        centered, reference.raw_std, out=np.zeros_like(centered), where=reference.raw_std > 0
    )
    return Dataset(
        feature_names=d.feature_names,
        X=scaled,
        y=d.y,
        raw_mean=d.raw_mean,
        raw_std=d.raw_std,
        standardized=True,
    )


def _select_columns(d: Dataset, names: list[str]) -> Dataset:
    idx = [d.feature_names.index(n) for n in names]
    return Dataset(
        feature_names=tuple(names),
        X=d.X[:, idx],
        y=d.y,
        raw_mean=d.raw_mean[idx],
        raw_std=d.raw_std[idx],
        standardized=d.standardized,
    )


def align_common_features(a: Dataset, b: Dataset) -> tuple[Dataset, Dataset]:
    """Restrict both cohorts to their shared columns, ordered lexicographically.

    Labels and raw statistics are carried through.  Raises if the cohorts
    share no feature names.
    """
    common = sorted(set(a.feature_names) & set(b.feature_names))
    if not common:
        raise ValueError("datasets share no feature names")
    return _select_columns(a, common), _select_columns(b, common)


@dataclass(frozen=True)
class FeatureGraph:
    """Weighted undirected edges over feature names; no self-loops."""

    edges: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        for a, b, w in self.edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if w < 0:
                raise ValueError(f"negative edge weight {w} on ({a!r}, {b!r})")


@dataclass(frozen=True, eq=False)
class Laplacian:
    """Unnormalized graph Laplacian L = D - A over an ordered feature list."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def build_laplacian(g: FeatureGraph, feature_names) -> Laplacian:
    """Build L = D - A for ``g`` over the given column order.

    Every edge endpoint must resolve to a feature name; weights of repeated
    edges accumulate.  Features without edges contribute zero rows.
    """
    names = list(feature_names)
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    adj = np.zeros((n, n))
    for a, b, w in g.edges:
        if a not in index:
            raise ValueError(f"edge endpoint {a!r} is not a dataset feature")
        if b not in index:
            raise ValueError(f"edge endpoint {b!r} is not a dataset feature")
        i, j = index[a], index[b]
        adj[i, j] += w
        adj[j, i] += w
    lap = np.diag(adj.sum(axis=1)) - adj
    return Laplacian(matrix=lap)


def load_feature_graph(path) -> FeatureGraph:
    """Read a feature graph from a TSV with header name_a, name_b, weight."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    edges = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty graph file") from None
        if tuple(header) != GRAPH_HEADER:
            raise ValueError(f"{path}: expected header {GRAPH_HEADER}, got {tuple(header)}")
        for i, row in enumerate(reader):
            if len(row) != 3:
                raise ValueError(f"{path}: row {i + 2} has {len(row)} fields, expected 3")
            try:
                w = float(row[2])
            except ValueError:
                raise ValueError(f"{path}: non-numeric weight {row[2]!r} at row {i + 2}") from None
            edges.append((row[0], row[1], w))
    return FeatureGraph(edges=tuple(edges))


def write_feature_graph(g: FeatureGraph, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(GRAPH_HEADER)
        for a, b, w in g.edges:
            writer.writerow([a, b, repr(float(w))])
