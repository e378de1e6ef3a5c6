"""Immutable tabular dataset shared by algorithms, generators and the harness.

Values are held in a float64 matrix. Categoric values are stored as their
integer symbol index; a missing value of either kind is ``NaN``. Class labels
are dense integers ``0..n_classes-1``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Literal, Sequence

import numpy as np

from .errors import DatasetError, DegenerateStatisticsError

MISSING = math.nan

Kind = Literal["numeric", "categoric"]


@dataclass(frozen=True)
class FeatureMeta:
    name: str
    kind: Kind = "numeric"
    domain_size: int | None = None
    relevant: bool = False
    observed_min: float | None = None
    observed_max: float | None = None

    def __post_init__(self):
        if self.kind not in ("numeric", "categoric"):
            raise DatasetError(f"unknown feature kind {self.kind!r}")
        if self.kind == "categoric":
            if self.domain_size is None or self.domain_size < 2:
                raise DatasetError(f"categoric feature {self.name!r} needs domain_size >= 2")
        elif self.domain_size is not None:
            raise DatasetError(f"numeric feature {self.name!r} cannot have a domain_size")
        if (
            self.observed_min is not None
            and self.observed_max is not None
            and self.observed_min > self.observed_max
        ):
            raise DatasetError(f"feature {self.name!r}: observed_min > observed_max")

    @property
    def is_numeric(self) -> bool:
        return self.kind == "numeric"

    @property
    def has_range(self) -> bool:
        return self.observed_min is not None and self.observed_max is not None


def numeric(name: str, relevant: bool = False) -> FeatureMeta:
    return FeatureMeta(name, "numeric", None, relevant)


def categoric(name: str, domain_size: int, relevant: bool = False) -> FeatureMeta:
    return FeatureMeta(name, "categoric", domain_size, relevant)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature metadata, an instance-by-feature value matrix and class labels.

    Build instances with :meth:`from_rows` or :func:`make_dataset`, which run
    :func:`compute_stats`; the constructor itself only validates structure.
    """

    features: tuple[FeatureMeta, ...]
    values: np.ndarray
    classes: np.ndarray
    n_classes: int
    class_priors: np.ndarray | None = None
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        classes = np.array(self.classes, dtype=np.int64, copy=True)
        if values.ndim != 2:
            raise DatasetError("values must be a 2-D matrix")
        if classes.ndim != 1 or len(classes) != values.shape[0]:
            raise DatasetError("need exactly one class label per instance")
        if values.shape[1] != len(self.features):
            raise DatasetError(
                f"rows have {values.shape[1]} values but there are {len(self.features)} features"
            )
        if self.n_classes < 1:
            raise DatasetError("n_classes must be positive")
        if len(classes) and (classes.min() < 0 or classes.max() >= self.n_classes):
            raise DatasetError(f"class labels must lie in 0..{self.n_classes - 1}")
        for j, meta in enumerate(self.features):
            if meta.kind == "categoric":
                col = values[:, j]
                known = col[~np.isnan(col)]
                bad = (known < 0) | (known >= meta.domain_size) | (known != np.floor(known))
                if np.any(bad):
                    raise DatasetError(
                        f"feature {meta.name!r}: symbols must be integers in 0..{meta.domain_size - 1}"
                    )
        values.setflags(write=False)
        classes.setflags(write=False)
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "classes", classes)
        if self.class_priors is not None:
            priors = np.array(self.class_priors, dtype=np.float64, copy=True)
            priors.setflags(write=False)
            object.__setattr__(self, "class_priors", priors)

    @classmethod
    def from_rows(
        cls,
        features: Sequence[FeatureMeta],
        rows: Sequence[Sequence[float | int | None]],
        classes: Sequence[int],
        n_classes: int | None = None,
    ) -> "Dataset":
        """Build and compute stats; ``None`` in a row marks a missing value."""
        matrix = np.array(
            [[MISSING if v is None else float(v) for v in row] for row in rows], dtype=np.float64
        ).reshape(len(rows), len(features))
        labels = np.asarray(classes, dtype=np.int64)
        if n_classes is None:
            n_classes = int(labels.max()) + 1 if len(labels) else 1
        return compute_stats(cls(tuple(features), matrix, labels, n_classes))

    @property
    def n_instances(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def relevant(self) -> np.ndarray:
        return np.array([f.relevant for f in self.features], dtype=bool)

    @property
    def present_classes(self) -> np.ndarray:
        return np.unique(self.classes)

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())

    def fingerprint(self) -> str:
        """Content hash over metadata, values and labels."""
        import hashlib

        h = hashlib.sha256()
        h.update(json.dumps(_meta_dict(self), sort_keys=True).encode())
        h.update(np.ascontiguousarray(self.values).tobytes())
        h.update(np.ascontiguousarray(self.classes).tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.features == other.features
            and self.n_classes == other.n_classes
            and np.array_equal(self.values, other.values, equal_nan=True)
            and np.array_equal(self.classes, other.classes)
        )

    __hash__ = None


def make_dataset(
    features: Sequence[FeatureMeta],
    values: np.ndarray,
    classes: Sequence[int] | np.ndarray,
    n_classes: int,
) -> Dataset:
    return compute_stats(Dataset(tuple(features), values, np.asarray(classes), n_classes))


def compute_stats(dataset: Dataset) -> Dataset:
    """Return a copy with numeric ranges and class priors filled in.

    Raises:
        DatasetError: if the dataset has no instances.
        DegenerateStatisticsError: if a numeric column is entirely missing.
    """
    n = dataset.n_instances
    if n == 0:
        raise DatasetError("dataset has no instances")
    features = []
    for j, meta in enumerate(dataset.features):
        if meta.is_numeric:
            col = dataset.values[:, j]
            known = col[~np.isnan(col)]
            if len(known) == 0:
                raise DegenerateStatisticsError(f"numeric feature {meta.name!r} is entirely missing")
            meta = replace(meta, observed_min=float(known.min()), observed_max=float(known.max()))
        features.append(meta)
    counts = np.bincount(dataset.classes, minlength=dataset.n_classes).astype(np.float64)
    priors = counts / n
    return Dataset(tuple(features), dataset.values, dataset.classes, dataset.n_classes, priors)


def class_conditional_table(dataset: Dataset, feature: int) -> np.ndarray:
    """Maximum-likelihood ``P(value | class)`` for a categoric feature.

    Returns an ``(n_classes, domain_size)`` array; row ``c`` sums to one for
    every class present in the data. Rows of absent classes are all zero.
    """
    cached = dataset._tables.get(feature)
    if cached is not None:
        return cached
    meta = dataset.features[feature]
    if meta.kind != "categoric":
        raise DegenerateStatisticsError(f"feature {meta.name!r} is not categoric")
    col = dataset.values[:, feature]
    table = np.zeros((dataset.n_classes, meta.domain_size), dtype=np.float64)
    for c in dataset.present_classes:
        vals = col[(dataset.classes == c) & ~np.isnan(col)].astype(np.int64)
        if len(vals) == 0:
            raise DegenerateStatisticsError(
                f"class {c} has no known values for feature {meta.name!r}"
            )
        table[c] = np.bincount(vals, minlength=meta.domain_size) / len(vals)
    table.setflags(write=False)
    dataset._tables[feature] = table
    return table


# -- file format ------------------------------------------------------------


def _meta_dict(dataset: Dataset) -> dict:
    feats = []
    for f in dataset.features:
        entry = {"name": f.name, "kind": f.kind, "relevant": f.relevant}
        if f.kind == "categoric":
            entry["domainSize"] = f.domain_size
        feats.append(entry)
    return {"features": feats, "classes": dataset.n_classes}


def sidecar_path(csv_path: str | Path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".meta.json")


def write_dataset(dataset: Dataset, csv_path: str | Path) -> tuple[Path, Path]:
    """Write ``<name>.csv`` plus its ``<name>.meta.json`` sidecar."""
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f.name for f in dataset.features] + ["class"])
        for row, label in zip(dataset.values, dataset.classes):
            out = []
            for meta, v in zip(dataset.features, row):
                if math.isnan(v):
                    out.append("")
                elif meta.kind == "categoric":
                    out.append(str(int(v)))
                else:
                    out.append(repr(float(v)))
            writer.writerow(out + [str(int(label))])
    meta_path = sidecar_path(csv_path)
    meta_path.write_text(json.dumps(_meta_dict(dataset), indent=2) + "\n")
    return csv_path, meta_path


def read_dataset(csv_path: str | Path) -> Dataset:
    """Load a dataset written by :func:`write_dataset`.

    Without a sidecar every column is read as numeric and the number of classes
    is inferred from the labels.
    """
    csv_path = Path(csv_path)
    if not csv_path.exists():
        raise FileNotFoundError(csv_path)
    with csv_path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][-1] != "class":
        raise DatasetError(f"{csv_path}: header must end with a 'class' column")
    header, body = rows[0], [r for r in rows[1:] if r]
    names = header[:-1]

    meta_path = sidecar_path(csv_path)
    if meta_path.exists():
        try:
            meta = json.loads(meta_path.read_text())
            specs = meta["features"]
            n_classes = int(meta["classes"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DatasetError(f"{meta_path}: malformed sidecar ({exc})") from exc
        if len(specs) != len(names):
            raise DatasetError(f"{meta_path}: {len(specs)} features but CSV has {len(names)} columns")
        features = []
        for spec, name in zip(specs, names):
            if spec.get("name", name) != name:
                raise DatasetError(f"{meta_path}: feature {spec.get('name')!r} does not match column {name!r}")
            features.append(
                FeatureMeta(
                    name,
                    spec.get("kind", "numeric"),
                    spec.get("domainSize") if spec.get("kind") == "categoric" else None,
                    bool(spec.get("relevant", False)),
                )
            )
    else:
        features = [numeric(name) for name in names]
        n_classes = None

    values = np.empty((len(body), len(names)), dtype=np.float64)
    labels = np.empty(len(body), dtype=np.int64)
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise DatasetError(f"{csv_path}: row {i + 2} has {len(row)} fields, expected {len(header)}")
        try:
            values[i] = [MISSING if cell.strip() == "" else float(cell) for cell in row[:-1]]
            labels[i] = int(row[-1])
        except ValueError as exc:
            raise DatasetError(f"{csv_path}: row {i + 2}: {exc}") from exc
    if n_classes is None:
        n_classes = int(labels.max()) + 1 if len(labels) else 1
    return make_dataset(features, values, labels, n_classes)
