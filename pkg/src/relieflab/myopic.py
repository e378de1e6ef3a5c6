"""Closed-form myopic ReliefF and the modified Gini-index gain.

Myopic ReliefF is the limit of ReliefF when the neighbor condition is dropped
and hit/miss partners are arbitrary instances drawn with replacement:

    W'(X) = P_eqval * GG'(X) / (P_samecl * (1 - P_samecl))

with ``P_eqval = sum_x P(x)^2`` and ``P_samecl = sum_c P(c)^2``. Unlike the
standard Gini-index gain, which weights each value by ``P(x)``, ``GG'``
weights by ``P(x)^2 / sum_x P(x)^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import DegenerateStatisticsError


@dataclass(frozen=True)
class AttributeStats:
    """Joint statistics of one discrete attribute and the class.

    Attributes:
        value_probs: ``P(x)`` for each attribute value.
        class_probs: ``P(c)`` for each class.
        cond_class_probs: ``P(c | x)``, shape ``(n_values, n_classes)``.
    """

    value_probs: np.ndarray
    class_probs: np.ndarray
    cond_class_probs: np.ndarray

    @classmethod
    def from_joint(cls, joint) -> "AttributeStats":
        """From a ``(n_values, n_classes)`` table of joint counts or probabilities.

        Values that never occur are dropped.
        """
        joint = np.asarray(joint, dtype=np.float64)
        joint = joint / joint.sum()
        px = joint.sum(axis=1)
        keep = px > 0
        joint, px = joint[keep], px[keep]
        return cls(px, joint.sum(axis=0), joint / px[:, None])

    @classmethod
    def from_columns(cls, values, classes, n_values: int | None = None, n_classes: int | None = None) -> "AttributeStats":
        values = np.asarray(values, dtype=np.int64)
        classes = np.asarray(classes, dtype=np.int64)
        n_values = int(values.max()) + 1 if n_values is None else n_values
        n_classes = int(classes.max()) + 1 if n_classes is None else n_classes
        joint = np.zeros((n_values, n_classes))
        np.add.at(joint, (values, classes), 1.0)
        return cls.from_joint(joint)

    @classmethod
    def from_dataset(cls, dataset: Dataset, feature: int) -> "AttributeStats":
        meta = dataset.features[feature]
        if meta.kind != "categoric":
            raise DegenerateStatisticsError(f"feature {meta.name!r} is not categoric")
        col = dataset.values[:, feature]
        known = ~np.isnan(col)
        return cls.from_columns(col[known], dataset.classes[known], meta.domain_size, dataset.n_classes)


def p_eqval(stats: AttributeStats) -> float:
    """Probability that two instances drawn with replacement share the attribute value."""
    if len(stats.value_probs) == 0:
        raise DegenerateStatisticsError("attribute has an empty domain")
    return float(np.sum(stats.value_probs**2))


def p_samecl(stats: AttributeStats) -> float:
    return float(np.sum(stats.class_probs**2))


def gini_gain_modified(stats: AttributeStats) -> float:
    px2 = stats.value_probs**2
    purity = np.sum(stats.cond_class_probs**2, axis=1)
    return float(np.sum(px2 / px2.sum() * purity) - p_samecl(stats))


def myopic_weight(stats: AttributeStats) -> float:
    same = p_samecl(stats)
    if same <= 0.0 or same >= 1.0:
        raise DegenerateStatisticsError("myopic weight is undefined for a single-class distribution")
    return p_eqval(stats) * gini_gain_modified(stats) / (same * (1.0 - same))
