"""Relief, Relieved, ReliefF, dReliefF and pdReliefF.

The ReliefF-based variants share :func:`_relieff_loop` and differ only in
the ponderation used for the neighbor search at each iteration:

* ReliefF / Relieved: none (plain distance).
* dReliefF: the running weight vector, after a plain first iteration.
* pdReliefF: ``f(W_t, t)``, which is exactly 1 at ``t = 0``.

Running weights are the partial sums ``W_t`` (hit and miss diffs summed so far,
divided by ``m * k``), never renormalized. Final weights are clipped to
``[-1, 1]``, which only ever removes floating-point excess.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .data import Dataset, compute_stats
from .errors import DatasetError, TwoClassOnlyError
from .metrics import ProgressiveSchedule, diff_row, f_progress, ponderated_sum
from .neighbors import find_neighbors
from .rng import SplitMix64

VARIANTS = ("relief", "relieved", "relieff", "drelieff", "pdrelieff")

# ponderation(W_t, t) -> per-feature ponderation, or None for plain distance
Ponderation = Callable[[np.ndarray, int], "np.ndarray | None"]


@dataclass(frozen=True)
class ReliefConfig:
    """Run parameters shared by all variants.

    ``m`` defaults to the number of instances. ``schedule`` is used by
    pdReliefF only; its ``m`` is replaced by the effective sample count.
    """

    variant: str = "relieff"
    m: int | None = None
    k: int = 10
    seed: int = 0
    schedule: ProgressiveSchedule = field(default_factory=ProgressiveSchedule)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.m is not None and self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")


def sample_order(n: int, m: int, seed: int) -> list[int]:
    """First ``m`` entries of a SplitMix64 Fisher-Yates permutation of ``0..n-1``."""
    if m > n:
        raise ValueError(f"cannot sample {m} instances without replacement from {n}")
    if m < 0:
        raise ValueError("m must be non-negative")
    return SplitMix64(seed).permutation(n)[:m]


def _prepare(dataset: Dataset, config: ReliefConfig) -> tuple[Dataset, int]:
    if dataset.class_priors is None:
        dataset = compute_stats(dataset)
    if len(dataset.present_classes) < 2:
        raise DatasetError("Relief needs at least two classes present in the data")
    m = dataset.n_instances if config.m is None else config.m
    if m > dataset.n_instances:
        raise ValueError(f"m={m} exceeds the number of instances ({dataset.n_instances})")
    return dataset, m


def _relieff_loop(
    dataset: Dataset,
    order: Sequence[int],
    k: int,
    ponderation: Ponderation | None = None,
) -> np.ndarray:
    m = len(order)
    priors = dataset.class_priors
    classes = [int(c) for c in dataset.present_classes]
    scale = m * k
    # unscaled sums; dividing once per read keeps m roundings out of W
    raw = np.zeros(dataset.n_features)
    for t, r in enumerate(order):
        diffs = diff_row(dataset, r)
        p = None if ponderation is None else ponderation(raw / scale, t)
        nb = find_neighbors(dataset, r, k, ponderated_sum(diffs, p))
        own = int(dataset.classes[r])
        # sum of foreign priors rather than 1 - P(own): equal in exact
        # arithmetic, and exactly 1.0 per factor in the two-class case
        foreign = sum(priors[c] for c in classes if c != own)
        hit = diffs[nb.hits].sum(axis=0)
        miss = np.zeros(dataset.n_features)
        for c in classes:
            if c == own:
                continue
            miss = miss + (priors[c] / foreign) * diffs[nb.misses_by_class[c]].sum(axis=0)
        raw = raw - hit + miss
    return _finish(raw, scale)


def _finish(raw: np.ndarray, scale: int) -> np.ndarray:
    # the exact value lies in [-1, 1]; clipping only removes last-ulp excess
    return np.clip(raw / scale, -1.0, 1.0)


def relief(dataset: Dataset, config: ReliefConfig = ReliefConfig("relief"), order: Sequence[int] | None = None) -> np.ndarray:
    """Original two-class Relief with one nearest hit and one nearest miss.

    Raises:
        TwoClassOnlyError: unless exactly two classes are present.
    """
    if dataset.class_priors is None:
        dataset = compute_stats(dataset)
    if len(dataset.present_classes) != 2:
        raise TwoClassOnlyError(
            f"Relief handles two-class problems only; data has {len(dataset.present_classes)} classes"
        )
    dataset, m = _prepare(dataset, config)
    if order is None:
        order = sample_order(dataset.n_instances, m, config.seed)
    m = len(order)
    raw = np.zeros(dataset.n_features)
    for r in order:
        diffs = diff_row(dataset, r)
        nb = find_neighbors(dataset, r, 1, ponderated_sum(diffs))
        (miss,) = nb.misses_by_class.values()
        hit = diffs[nb.hits[0]] if nb.hits else np.zeros(dataset.n_features)
        raw = raw - hit + diffs[miss[0]]
    return _finish(raw, m)


def relieved(dataset: Dataset, config: ReliefConfig = ReliefConfig("relieved")) -> np.ndarray:
    """Deterministic ReliefF: one pass over every instance in index order."""
    dataset, _ = _prepare(dataset, config)
    return _relieff_loop(dataset, range(dataset.n_instances), config.k)


def relieff(dataset: Dataset, config: ReliefConfig = ReliefConfig(), order: Sequence[int] | None = None) -> np.ndarray:
    dataset, m = _prepare(dataset, config)
    if order is None:
        order = sample_order(dataset.n_instances, m, config.seed)
    return _relieff_loop(dataset, order, config.k)


def _running_weights(weights: np.ndarray, t: int) -> np.ndarray | None:
    return None if t == 0 else weights


def drelieff(dataset: Dataset, config: ReliefConfig = ReliefConfig("drelieff"), order: Sequence[int] | None = None) -> np.ndarray:
    """ReliefF whose neighbor search ponderates features by the running weights.

    The first iteration uses plain distance: the all-zero starting weights
    would otherwise make every distance zero.
    """
    dataset, m = _prepare(dataset, config)
    if order is None:
        order = sample_order(dataset.n_instances, m, config.seed)
    return _relieff_loop(dataset, order, config.k, _running_weights)


def pdrelieff(
    dataset: Dataset,
    config: ReliefConfig = ReliefConfig("pdrelieff"),
    order: Sequence[int] | None = None,
    progress: Callable[[np.ndarray, int], np.ndarray] | None = None,
) -> np.ndarray:
    """ReliefF with ponderations blended from 1 toward the running weights.

    At iteration ``t`` (0-based count of completed iterations) the neighbor
    search uses ``progress(W_t, t)``, by default ``f_progress`` with the
    configured schedule. ``t = 0`` always uses ponderation 1 whatever
    ``progress`` is.
    """
    dataset, m = _prepare(dataset, config)
    if order is None:
        order = sample_order(dataset.n_instances, m, config.seed)
    sched = ProgressiveSchedule(config.schedule.s, config.schedule.a, len(order))
    if progress is None:
        progress = lambda w, t: f_progress(w, t, sched)  # noqa: E731
    ones = np.ones(dataset.n_features)

    def ponderation(weights: np.ndarray, t: int) -> np.ndarray:
        return ones if t == 0 else progress(weights, t)

    return _relieff_loop(dataset, order, config.k, ponderation)


_DISPATCH = {
    "relief": relief,
    "relieved": relieved,
    "relieff": relieff,
    "drelieff": drelieff,
    "pdrelieff": pdrelieff,
}


def run(dataset: Dataset, config: ReliefConfig) -> np.ndarray:
    """Run the variant named by ``config.variant``."""
    return _DISPATCH[config.variant](dataset, config)
