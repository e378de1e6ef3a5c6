"""Per-feature difference functions and instance distances.

``diff`` follows the heterogeneous Euclidean-overlap convention: overlap for
categoric features, range-normalized absolute difference for numeric ones,
and probability-based differences when a categoric value is missing.

Distances are ponderated sums of diffs. Ponderations are clamped at zero so a
negatively weighted feature is ignored rather than pulling instances closer.
All distance functions go through :func:`ponderated_sum`, which makes
``distance_weighted(w=1)`` and ``distance_plain`` bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .data import Dataset, FeatureMeta, class_conditional_table
from .errors import DatasetError, UnsupportedValueError


@dataclass(frozen=True)
class ProgressiveSchedule:
    """Parameters of the progressive ponderation ``f(w, t)``.

    ``s`` controls steepness and how close the terminal ponderation gets to
    ``w``; ``a`` is the exponent of ``c(t) = (t/m)**a``; ``m`` is the total
    number of iterations.
    """

    s: float = 0.06
    a: float = 2.0
    m: int = 1

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")


# -- per-feature diffs --------------------------------------------------------


def _is_missing(v) -> bool:
    return v is None or (isinstance(v, float) and math.isnan(v))


def diff_overlap(v1, v2) -> float:
    if _is_missing(v1) or _is_missing(v2):
        raise UnsupportedValueError("overlap diff is undefined for missing values; use diff_missing")
    if float(v1) != int(v1) or float(v2) != int(v2):
        raise UnsupportedValueError(f"overlap diff needs categoric symbols, got {v1!r}, {v2!r}")
    return 0.0 if int(v1) == int(v2) else 1.0


def diff_numeric(meta: FeatureMeta, v1, v2) -> float:
    if not meta.has_range:
        raise DatasetError(f"feature {meta.name!r} has no observed range; run compute_stats")
    if _is_missing(v1) or _is_missing(v2):
        raise UnsupportedValueError(f"numeric feature {meta.name!r} has a missing value")
    span = meta.observed_max - meta.observed_min
    if span == 0:
        return 0.0
    return min(1.0, abs(float(v1) - float(v2)) / span)


def diff_missing(dataset: Dataset, feature: int, i1: int, i2: int) -> float:
    """RELIEF-D difference when at least one categoric value is missing.

    With only ``i1`` missing the result is ``1 - P(value(i2) | class(i1))``;
    with only ``i2`` missing the roles swap. With both missing it is one minus
    the probability that independent draws from the two class-conditional
    distributions coincide.
    """
    meta = dataset.features[feature]
    if meta.is_numeric:
        raise UnsupportedValueError(f"missing values in numeric feature {meta.name!r} are unsupported")
    v1, v2 = dataset.values[i1, feature], dataset.values[i2, feature]
    m1, m2 = math.isnan(v1), math.isnan(v2)
    if not (m1 or m2):
        raise UnsupportedValueError("diff_missing called with two known values")
    table = class_conditional_table(dataset, feature)
    c1, c2 = dataset.classes[i1], dataset.classes[i2]
    if m1 and m2:
        d = 1.0 - float(np.dot(table[c1], table[c2]))
    elif m1:
        d = 1.0 - float(table[c1, int(v2)])
    else:
        d = 1.0 - float(table[c2, int(v1)])
    return min(1.0, max(0.0, d))


def diff(dataset: Dataset, feature: int, i1: int, i2: int) -> float:
    meta = dataset.features[feature]
    v1, v2 = dataset.values[i1, feature], dataset.values[i2, feature]
    if math.isnan(v1) or math.isnan(v2):
        return diff_missing(dataset, feature, i1, i2)
    if meta.is_numeric:
        return diff_numeric(meta, v1, v2)
    return diff_overlap(v1, v2)


# -- vectorized diffs ---------------------------------------------------------


def _spans(dataset: Dataset) -> np.ndarray:
    spans = np.ones(dataset.n_features)
    for j, meta in enumerate(dataset.features):
        if meta.is_numeric:
            if not meta.has_range:
                raise DatasetError(f"feature {meta.name!r} has no observed range; run compute_stats")
            spans[j] = meta.observed_max - meta.observed_min
    return spans


def diff_row(dataset: Dataset, ref: int) -> np.ndarray:
    """Diffs between instance ``ref`` and every instance, shape ``(n, n_features)``."""
    values = dataset.values
    numeric_mask = np.array([f.is_numeric for f in dataset.features], dtype=bool)
    row = values[ref]
    out = np.empty_like(values)
    if numeric_mask.any():
        spans = _spans(dataset)[numeric_mask]
        with np.errstate(invalid="ignore", divide="ignore"):
            num = np.abs(values[:, numeric_mask] - row[numeric_mask]) / spans
        num[:, spans == 0] = 0.0
        out[:, numeric_mask] = np.minimum(num, 1.0)
    if (~numeric_mask).any():
        out[:, ~numeric_mask] = (values[:, ~numeric_mask] != row[~numeric_mask]).astype(np.float64)
    missing = np.isnan(values)
    if missing.any():
        for j in np.flatnonzero(missing.any(axis=0)):
            if numeric_mask[j]:
                name = dataset.features[j].name
                raise UnsupportedValueError(f"missing values in numeric feature {name!r} are unsupported")
            for i in range(dataset.n_instances):
                if missing[ref, j] or missing[i, j]:
                    out[i, j] = diff_missing(dataset, j, ref, i)
    return out


def diff_tensor(dataset: Dataset) -> np.ndarray:
    """All pairwise diffs, shape ``(n, n, n_features)``; ``[i, j]`` is ``diff_row(i)[j]``."""
    return np.stack([diff_row(dataset, i) for i in range(dataset.n_instances)])


# -- distances ----------------------------------------------------------------


def ponderate(weights: np.ndarray) -> np.ndarray:
    """Clamp ponderations at zero."""
    return np.maximum(np.asarray(weights, dtype=np.float64), 0.0)


def ponderated_sum(diffs: np.ndarray, ponderation: np.ndarray | None = None) -> np.ndarray:
    """Row sums of ``diffs`` scaled per feature; ``None`` means all ones."""
    if ponderation is None:
        ponderation = np.ones(diffs.shape[-1])
    return (diffs * ponderate(ponderation)).sum(axis=-1)


def _check_length(dataset: Dataset, w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (dataset.n_features,):
        raise ValueError(f"weight vector has shape {w.shape}, expected ({dataset.n_features},)")
    return w


def distance_plain(dataset: Dataset, i1: int, i2: int) -> float:
    return float(ponderated_sum(diff_row(dataset, i1)[i2]))


def distance_weighted(dataset: Dataset, i1: int, i2: int, w) -> float:
    w = _check_length(dataset, w)
    return float(ponderated_sum(diff_row(dataset, i1)[i2], w))


def c_progress(t: float, sched: ProgressiveSchedule) -> float:
    return (t / sched.m) ** sched.a


def f_progress(w, t: float, sched: ProgressiveSchedule):
    """Ponderation that starts at 1 for ``t = 0`` and approaches ``w`` as ``t -> m``.

    Accepts a scalar or an array ``w``.
    """
    c = c_progress(t, sched)
    return (w - 1.0) * c / (c + sched.s) + 1.0


def distance_progressive(dataset: Dataset, i1: int, i2: int, w, t: float, sched: ProgressiveSchedule) -> float:
    w = _check_length(dataset, w)
    return float(ponderated_sum(diff_row(dataset, i1)[i2], f_progress(w, t, sched)))


def area_ratio(
    sched: ProgressiveSchedule,
    w: float = 0.5,
    f: Callable[[float, np.ndarray], np.ndarray] | None = None,
    n_points: int = 100_001,
) -> float:
    """Share of the area between ``1`` and ``w`` that lies below ``f`` on ``[1, m]``.

    Evaluated with composite Simpson quadrature. ``f(w, t)`` defaults to
    :func:`f_progress`; pass another callable to evaluate the boundary cases.
    The ratio does not depend on ``w`` for the default ``f``.
    """
    if sched.m < 2:
        raise ValueError("area_ratio needs m >= 2")
    if not w < 1:
        raise ValueError("reference weight must be below 1")
    n_points = max(n_points, 10_001)
    if n_points % 2 == 0:
        n_points += 1
    t = np.linspace(1.0, float(sched.m), n_points)
    values = f_progress(w, t, sched) if f is None else np.broadcast_to(f(w, t), t.shape)
    span = sched.m - 1.0
    below = simpson(values, x=t)
    return (below - w * span) / (span - w * span)
