"""Exhaustive nearest-hit / nearest-miss search with deterministic tie-breaking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .data import Dataset

DistanceArg = Union[np.ndarray, Callable[[int, int], float]]


@dataclass
class NeighborSet:
    hits: list[int]
    misses_by_class: dict[int, list[int]] = field(default_factory=dict)


def _distances_from(dataset: Dataset, ref: int, dist: DistanceArg) -> np.ndarray:
    if callable(dist):
        return np.array([0.0 if j == ref else dist(ref, j) for j in range(dataset.n_instances)])
    d = np.asarray(dist, dtype=np.float64)
    if d.shape != (dataset.n_instances,):
        raise ValueError(f"distance vector has shape {d.shape}, expected ({dataset.n_instances},)")
    return d


def nearest_of_class(distances: np.ndarray, classes: np.ndarray, ref: int, label: int, k: int) -> list[int]:
    """Up to ``k`` instances of class ``label`` closest to ``ref`` (ref excluded).

    Ordered by ``(distance, index)``: a stable sort over ascending indices
    keeps lower indices first among equal distances.
    """
    candidates = np.flatnonzero(classes == label)
    candidates = candidates[candidates != ref]
    order = np.argsort(distances[candidates], kind="stable")
    return candidates[order[:k]].tolist()


def find_neighbors(dataset: Dataset, ref: int, k: int, dist: DistanceArg) -> NeighborSet:
    """Nearest hits and per-class nearest misses of instance ``ref``.

    ``dist`` is either a vector of distances from ``ref`` to every instance or
    a callable ``dist(i1, i2)``. Classes with fewer than ``k`` other members
    yield shorter lists; a lone instance of its class gets no hits.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if dataset.n_instances < 2:
        raise ValueError("neighbor search needs at least 2 instances")
    distances = _distances_from(dataset, ref, dist)
    own = int(dataset.classes[ref])
    hits = nearest_of_class(distances, dataset.classes, ref, own, k)
    misses = {
        int(c): nearest_of_class(distances, dataset.classes, ref, int(c), k)
        for c in dataset.present_classes
        if c != own
    }
    return NeighborSet(hits, misses)
