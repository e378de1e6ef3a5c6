"""Seeded synthetic problems with known relevant features.

Every generator puts the ``n_relevant`` relevant features first, followed by
``n_irrelevant`` features that are independent of the class. All randomness
comes from a single :class:`~relieflab.rng.SplitMix64` stream seeded by
``spec.seed``, so a spec always yields the same dataset bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Dataset, FeatureMeta, categoric, make_dataset, numeric
from .rng import SplitMix64

KINDS = (
    "rdg1-continuous",
    "rdg1-categoric",
    "random-rbf",
    "non-monotonic",
    "majority",
    "modulo-p",
)
NUMERIC_KINDS = ("rdg1-continuous", "random-rbf", "non-monotonic")
MAX_RULE_TERMS = 10


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n_relevant: int
    n_irrelevant: int = 0
    n_instances: int = 100
    seed: int = 0
    p: int = 3
    n_classes: int = 2
    centers_per_class: int = 3

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown problem kind {self.kind!r}; expected one of {KINDS}")
        if self.n_relevant < 1:
            raise ValueError("n_relevant must be >= 1")
        if self.n_irrelevant < 0:
            raise ValueError("n_irrelevant must be >= 0")
        if self.n_instances < 1:
            raise ValueError("n_instances must be >= 1")
        if self.kind == "modulo-p" and self.p < 2:
            raise ValueError(f"modulo-p needs p >= 2, got {self.p}")
        if self.n_classes < 1 or self.centers_per_class < 1:
            raise ValueError("n_classes and centers_per_class must be positive")

    @property
    def n_features(self) -> int:
        return self.n_relevant + self.n_irrelevant


def _features(spec: GeneratorSpec, domain_size: int | None = None) -> list[FeatureMeta]:
    out = []
    for j in range(spec.n_features):
        relevant = j < spec.n_relevant
        if domain_size is None:
            out.append(numeric(f"f{j}", relevant))
        else:
            out.append(categoric(f"f{j}", domain_size, relevant))
    return out


def _uniform_block(rng: SplitMix64, rows: int, cols: int) -> np.ndarray:
    return rng.random(rows * cols).reshape(rows, cols)


def _integer_block(rng: SplitMix64, bound: int, rows: int, cols: int) -> np.ndarray:
    return rng.integers(bound, rows * cols).reshape(rows, cols).astype(np.float64)


# -- RDG1 decision lists ------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """``x[feature] < threshold``, ``x[feature] >= threshold`` or ``x[feature] == threshold``."""

    feature: int
    op: str
    threshold: float

    def matches(self, x: Sequence[float]) -> bool:
        v = x[self.feature]
        if self.op == "<":
            return v < self.threshold
        if self.op == ">=":
            return v >= self.threshold
        return v == self.threshold

    def __str__(self):
        if self.op == "==":
            return f"a{self.feature} = {'true' if self.threshold else 'false'}"
        return f"a{self.feature} {self.op} {self.threshold:.3g}"


@dataclass(frozen=True)
class DecisionRule:
    terms: tuple[Term, ...]
    label: int

    def __post_init__(self):
        if not 1 <= len(self.terms) <= MAX_RULE_TERMS:
            raise ValueError(f"a rule needs 1..{MAX_RULE_TERMS} terms, got {len(self.terms)}")

    def matches(self, x: Sequence[float]) -> bool:
        return all(t.matches(x) for t in self.terms)

    def __str__(self):
        return f"c{self.label} := " + " AND ".join(str(t) for t in self.terms)


def classify(rules: Sequence[DecisionRule], x: Sequence[float]) -> int | None:
    """Label of the first matching rule, or ``None``."""
    for rule in rules:
        if rule.matches(x):
            return rule.label
    return None


def _rule_features(rng: SplitMix64, n_relevant: int) -> list[int]:
    count = min(1 + rng.integer(MAX_RULE_TERMS), n_relevant)
    return rng.permutation(n_relevant)[:count]


def _random_rule(rng: SplitMix64, n_relevant: int, label: int, boolean: bool) -> DecisionRule:
    terms = []
    for f in _rule_features(rng, n_relevant):
        if boolean:
            terms.append(Term(f, "==", float(rng.integer(2))))
        else:
            op = "<" if rng.integer(2) == 0 else ">="
            terms.append(Term(f, op, rng.random()))
    return DecisionRule(tuple(terms), label)


def _rule_for(rng: SplitMix64, x: np.ndarray, n_classes: int, boolean: bool) -> DecisionRule:
    """A random rule that ``x`` satisfies, with a uniform random class."""
    terms = []
    for f in _rule_features(rng, len(x)):
        v = float(x[f])
        if boolean:
            terms.append(Term(f, "==", v))
        elif rng.integer(2) == 0:
            # threshold in (v, 1]; nextafter guards against rounding back to v
            threshold = max(v + (1.0 - v) * (1.0 - rng.random()), math.nextafter(v, math.inf))
            terms.append(Term(f, "<", threshold))
        else:
            # threshold in [0, v)
            terms.append(Term(f, ">=", v * rng.random()))
    return DecisionRule(tuple(terms), rng.integer(n_classes))


def _rdg(spec: GeneratorSpec, boolean: bool) -> tuple[Dataset, list[DecisionRule]]:
    rng = SplitMix64(spec.seed)
    n, nr = spec.n_instances, spec.n_relevant
    rules = [_random_rule(rng, nr, c, boolean) for c in range(spec.n_classes)]
    relevant = np.empty((n, nr))
    labels = np.empty(n, dtype=np.int64)
    for i in range(n):
        x = rng.integers(2, nr).astype(np.float64) if boolean else rng.random(nr)
        label = classify(rules, x)
        if label is None:
            rule = _rule_for(rng, x, spec.n_classes, boolean)
            rules.append(rule)
            label = rule.label
        relevant[i], labels[i] = x, label
    if boolean:
        irrelevant = _integer_block(rng, 2, n, spec.n_irrelevant)
    else:
        irrelevant = _uniform_block(rng, n, spec.n_irrelevant)
    values = np.hstack([relevant, irrelevant])
    feats = _features(spec, 2 if boolean else None)
    return make_dataset(feats, values, labels, spec.n_classes), rules


def gen_rdg_continuous(spec: GeneratorSpec) -> Dataset:
    return _rdg(spec, boolean=False)[0]


def gen_rdg_categoric(spec: GeneratorSpec) -> Dataset:
    return _rdg(spec, boolean=True)[0]


def rdg_with_rules(spec: GeneratorSpec) -> tuple[Dataset, list[DecisionRule]]:
    """RDG1 dataset together with its final decision list."""
    if spec.kind not in ("rdg1-continuous", "rdg1-categoric"):
        raise ValueError(f"{spec.kind!r} is not an RDG1 problem")
    return _rdg(spec, boolean=spec.kind == "rdg1-categoric")


# -- RandomRBF ----------------------------------------------------------------


def gaussian_pdf(x, mu: float, sigma: float):
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return np.exp(-((np.asarray(x) - mu) ** 2) / (2.0 * sigma**2)) / (sigma * math.sqrt(2.0 * math.pi))


@dataclass(frozen=True)
class RBFCenter:
    label: int
    weight: float
    centroid: tuple[float, ...]
    std: float


def random_rbf_centers(rng: SplitMix64, labels: Sequence[int], per_label: int, dims: int) -> list[RBFCenter]:
    """``per_label`` centers per label: weight in (0, 1], centroid in [0, 1), std in (0, 0.5]."""
    centers = []
    for label in labels:
        for _ in range(per_label):
            weight = 1.0 - rng.random()
            centroid = tuple(rng.random(dims).tolist())
            std = 0.5 * (1.0 - rng.random())
            centers.append(RBFCenter(label, weight, centroid, std))
    return centers


def pick_centers(rng: SplitMix64, centers: Sequence[RBFCenter], n: int) -> np.ndarray:
    return rng.choice([c.weight for c in centers], size=n)


def sample_rbf(rng: SplitMix64, centers: Sequence[RBFCenter], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` points; returns ``(points, labels)``.

    Each point is its center's centroid plus a uniformly oriented offset whose
    length is ``|N(0, std)|``.
    """
    dims = len(centers[0].centroid)
    chosen = pick_centers(rng, centers, n)
    directions = rng.normal(n * dims).reshape(n, dims)
    lengths = np.linalg.norm(directions, axis=1)
    lengths[lengths == 0] = 1.0
    stds = np.array([centers[i].std for i in chosen])
    radii = np.abs(rng.normal(n)) * stds
    centroids = np.array([centers[i].centroid for i in chosen]).reshape(n, dims)
    points = centroids + directions / lengths[:, None] * radii[:, None]
    labels = np.array([centers[i].label for i in chosen], dtype=np.int64)
    return points, labels


def gen_random_rbf(spec: GeneratorSpec, centers: Sequence[RBFCenter] | None = None) -> Dataset:
    """RBF problem; irrelevant features come from their own class-free centers.

    ``centers`` overrides the random class centers for the relevant features.
    """
    rng = SplitMix64(spec.seed)
    if centers is None:
        centers = random_rbf_centers(rng, range(spec.n_classes), spec.centers_per_class, spec.n_relevant)
    elif any(len(c.centroid) != spec.n_relevant for c in centers):
        raise ValueError("center dimensionality must equal n_relevant")
    relevant, labels = sample_rbf(rng, centers, spec.n_instances)
    if spec.n_irrelevant:
        noise_centers = random_rbf_centers(rng, [-1], spec.centers_per_class, spec.n_irrelevant)
        irrelevant, _ = sample_rbf(rng, noise_centers, spec.n_instances)
    else:
        irrelevant = np.empty((spec.n_instances, 0))
    values = np.hstack([relevant, irrelevant])
    n_classes = max(spec.n_classes, int(labels.max()) + 1)
    return make_dataset(_features(spec), values, labels, n_classes)


# -- NonMonotonic / MajorityN / ModuloP ----------------------------------------


def non_monotonic_value(r_a: float, r_i: float, i: int) -> float:
    """Attribute value for 1-based instance ``i``."""
    return r_a * r_i if i % 2 != 0 else r_a * math.sqrt(r_i)


def non_monotonic_with_ponderators(spec: GeneratorSpec) -> tuple[Dataset, np.ndarray]:
    """NonMonotonic dataset plus the per-attribute ponderators ``r_a``."""
    rng = SplitMix64(spec.seed)
    n, nr = spec.n_instances, spec.n_relevant
    r_a = rng.random(nr)
    r_i = rng.random(n) * nr
    index = np.arange(1, n + 1)
    factor = np.where(index % 2 != 0, r_i, np.sqrt(r_i))
    relevant = factor[:, None] * r_a[None, :]
    labels = np.minimum(np.floor(r_i).astype(np.int64), nr - 1)
    irrelevant = _uniform_block(rng, n, spec.n_irrelevant)
    return make_dataset(_features(spec), np.hstack([relevant, irrelevant]), labels, nr), r_a


def gen_non_monotonic(spec: GeneratorSpec) -> Dataset:
    return non_monotonic_with_ponderators(spec)[0]


def majority_label(bits: Sequence[int]) -> int:
    return int(2 * int(np.sum(bits)) > len(bits))


def gen_majority(spec: GeneratorSpec) -> Dataset:
    rng = SplitMix64(spec.seed)
    values = _integer_block(rng, 2, spec.n_instances, spec.n_features)
    ones = values[:, : spec.n_relevant].sum(axis=1)
    labels = (2 * ones > spec.n_relevant).astype(np.int64)
    return make_dataset(_features(spec, 2), values, labels, 2)


def modulo_label(values: Sequence[int], p: int) -> int:
    return int(np.sum(values)) % p


def gen_modulo_p(spec: GeneratorSpec) -> Dataset:
    if spec.p < 2:
        raise ValueError(f"modulo-p needs p >= 2, got {spec.p}")
    rng = SplitMix64(spec.seed)
    values = _integer_block(rng, spec.p, spec.n_instances, spec.n_features)
    labels = values[:, : spec.n_relevant].sum(axis=1).astype(np.int64) % spec.p
    return make_dataset(_features(spec, spec.p), values, labels, spec.p)


_DISPATCH = {
    "rdg1-continuous": gen_rdg_continuous,
    "rdg1-categoric": gen_rdg_categoric,
    "random-rbf": gen_random_rbf,
    "non-monotonic": gen_non_monotonic,
    "majority": gen_majority,
    "modulo-p": gen_modulo_p,
}


def generate(spec: GeneratorSpec) -> Dataset:
    return _DISPATCH[spec.kind](spec)
