"""Full blocking design over problems, attribute counts and repetitions.

For each problem, relevant count ``n`` in ``1..max_relevant``, irrelevant
count in ``1..irr_multiplier*n`` and repetition in ``1..iterations``, one
dataset is generated and weighed by ReliefF, dReliefF and pdReliefF.

Cell seeds come from :func:`cell_seed`, a BLAKE2b hash of
``("relieflab-cell", base_seed, problem, n_relevant, n_irrelevant, iteration)``.
The same seed drives the generator and the algorithms' sample order, so the
three algorithms in a cell see the same data in the same order.
"""

from __future__ import annotations

import csv
import json
import math
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from functools import partial
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import __version__
from .errors import DatasetError, RecordsFormatError
from .generators import KINDS, GeneratorSpec, generate
from .metrics import ProgressiveSchedule
from .relief import ReliefConfig, run
from .rng import derive_seed

DESIGN_ALGORITHMS = ("relieff", "drelieff", "pdrelieff")
RECORD_COLUMNS = (
    "problem",
    "algorithm",
    "n_relevant",
    "n_irrelevant",
    "iteration",
    "seed",
    "separability",
    "walltime_ms",
    "weights",
)
RECORDS_FORMAT_VERSION = 1


@dataclass(frozen=True)
class DesignConfig:
    problems: tuple[str, ...] = KINDS
    max_relevant: int = 50
    irr_multiplier: int = 2
    iterations: int = 10
    n_instances: int = 100
    k: int = 10
    s: float = 0.06
    a: float = 2.0
    seed: int = 0
    p: int = 3
    n_classes: int = 2
    centers_per_class: int = 3

    def __post_init__(self):
        object.__setattr__(self, "problems", tuple(self.problems))
        unknown = [p for p in self.problems if p not in KINDS]
        if unknown:
            raise ValueError(f"unknown problems {unknown}; expected some of {KINDS}")
        if self.max_relevant < 1:
            raise ValueError("max_relevant must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.irr_multiplier < 1:
            raise ValueError("irr_multiplier must be >= 1")
        if self.n_instances < 2:
            raise ValueError("n_instances must be >= 2")

    @classmethod
    def smoke(cls, **overrides) -> "DesignConfig":
        return cls(**{"max_relevant": 10, "iterations": 3, **overrides})


@dataclass(frozen=True)
class Cell:
    problem: str
    n_relevant: int
    n_irrelevant: int
    iteration: int


@dataclass(frozen=True, eq=False)
class ExperimentRecord:
    """One algorithm run inside a design cell.

    ``separability`` is NaN and ``weights`` empty when the generated dataset
    had fewer than two classes, so no Relief variant could run.
    """

    problem: str
    algorithm: str
    n_relevant: int
    n_irrelevant: int
    iteration: int
    seed: int
    separability: float
    walltime_ms: float
    weights: tuple[float, ...] = field(default=())

    @property
    def total_attributes(self) -> int:
        return self.n_relevant + self.n_irrelevant

    def canonical(self) -> tuple:
        """Every field except wall time, NaN-safe, for determinism checks."""
        sep = None if math.isnan(self.separability) else self.separability
        return (
            self.problem,
            self.algorithm,
            self.n_relevant,
            self.n_irrelevant,
            self.iteration,
            self.seed,
            sep,
            self.weights,
        )

    def __eq__(self, other):
        if not isinstance(other, ExperimentRecord):
            return NotImplemented
        return self.canonical() == other.canonical() and self.walltime_ms == other.walltime_ms

    __hash__ = None


def separability(weights: Sequence[float], relevant: Sequence[bool]) -> float:
    """Best relevant weight minus best irrelevant weight."""
    w = np.asarray(weights, dtype=np.float64)
    mask = np.asarray(relevant, dtype=bool)
    if w.shape != mask.shape:
        raise ValueError("weights and relevance flags differ in length")
    if not mask.any() or mask.all():
        raise ValueError("separability needs at least one relevant and one irrelevant feature")
    return float(w[mask].max() - w[~mask].max())


def average_by_x(points: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    """Mean of ``s`` per distinct ``x``, sorted by ``x``; NaN values are ignored."""
    groups: dict[float, list[float]] = defaultdict(list)
    for x, s in points:
        bucket = groups[x]
        if not math.isnan(s):
            bucket.append(s)
    return [(x, float(np.mean(v)) if v else math.nan) for x, v in sorted(groups.items())]


def accumulate_separability(points: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    """Running sum of the per-``x`` mean separability.

    Points sharing an ``x`` are averaged first; an ``x`` with no finite value
    contributes nothing.
    """
    averaged = average_by_x(points)
    if not averaged:
        raise ValueError("cannot accumulate an empty series")
    out, total = [], 0.0
    for x, s in averaged:
        if not math.isnan(s):
            total += s
        out.append((x, total))
    return out


def separability_points(records: Iterable[ExperimentRecord], problem: str, algorithm: str) -> list[tuple[int, float]]:
    return [
        (r.total_attributes, r.separability)
        for r in records
        if r.problem == problem and r.algorithm == algorithm
    ]


# -- design --------------------------------------------------------------------


def cell_seed(base_seed: int, problem: str, n_relevant: int, n_irrelevant: int, iteration: int) -> int:
    return derive_seed("relieflab-cell", base_seed, problem, n_relevant, n_irrelevant, iteration)


def design_cells(config: DesignConfig) -> Iterator[Cell]:
    for problem in config.problems:
        for n_rel in range(1, config.max_relevant + 1):
            for n_irr in range(1, config.irr_multiplier * n_rel + 1):
                for it in range(1, config.iterations + 1):
                    yield Cell(problem, n_rel, n_irr, it)


def runs_per_problem(config: DesignConfig) -> int:
    cells = sum(config.irr_multiplier * n for n in range(1, config.max_relevant + 1))
    return len(DESIGN_ALGORITHMS) * config.iterations * cells


def cell_spec(config: DesignConfig, cell: Cell) -> GeneratorSpec:
    return GeneratorSpec(
        kind=cell.problem,
        n_relevant=cell.n_relevant,
        n_irrelevant=cell.n_irrelevant,
        n_instances=config.n_instances,
        seed=cell_seed(config.seed, cell.problem, cell.n_relevant, cell.n_irrelevant, cell.iteration),
        p=config.p,
        n_classes=config.n_classes,
        centers_per_class=config.centers_per_class,
    )


def _round9(x: float) -> float:
    return float(f"{x:.9g}")


def run_cell(config: DesignConfig, cell: Cell) -> list[ExperimentRecord]:
    spec = cell_spec(config, cell)
    dataset = generate(spec)
    schedule = ProgressiveSchedule(config.s, config.a, dataset.n_instances)
    records = []
    for algorithm in DESIGN_ALGORITHMS:
        relief_config = ReliefConfig(algorithm, m=dataset.n_instances, k=config.k, seed=spec.seed, schedule=schedule)
        start = time.perf_counter()
        try:
            weights = run(dataset, relief_config)
        except DatasetError:
            sep, rounded = math.nan, ()
        else:
            sep = separability(weights, dataset.relevant)
            rounded = tuple(_round9(w) for w in weights)
        elapsed = round((time.perf_counter() - start) * 1000.0, 3)
        records.append(
            ExperimentRecord(
                cell.problem, algorithm, cell.n_relevant, cell.n_irrelevant, cell.iteration,
                spec.seed, sep, elapsed, rounded,
            )
        )
    return records


def run_design(
    config: DesignConfig,
    workers: int = 1,
    on_record: Callable[[ExperimentRecord], None] | None = None,
) -> list[ExperimentRecord]:
    """Run every cell; records come back in canonical cell order.

    With ``workers > 1`` cells run in a process pool. ``on_record`` is called
    from the calling process only, in canonical order.
    """
    cells = list(design_cells(config))
    work = partial(run_cell, config)
    out: list[ExperimentRecord] = []

    def emit(batch: list[ExperimentRecord]):
        for record in batch:
            out.append(record)
            if on_record is not None:
                on_record(record)

    if workers <= 1:
        for cell in cells:
            emit(work(cell))
    else:
        chunk = max(1, len(cells) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for batch in pool.map(work, cells, chunksize=chunk):
                emit(batch)
    return out


# -- persistence ---------------------------------------------------------------


def _format_row(r: ExperimentRecord) -> list[str]:
    return [
        r.problem,
        r.algorithm,
        str(r.n_relevant),
        str(r.n_irrelevant),
        str(r.iteration),
        str(r.seed),
        repr(r.separability),
        repr(r.walltime_ms),
        ";".join(f"{w:.9g}" for w in r.weights),
    ]


class RecordWriter:
    """Appends records to a CSV file, writing the header once."""

    def __init__(self, path: str | Path, append: bool = False):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        exists = append and self.path.exists() and self.path.stat().st_size > 0
        if exists:
            with self.path.open(newline="") as fh:
                header = next(csv.reader(fh), None)
            if tuple(header or ()) != RECORD_COLUMNS:
                raise RecordsFormatError(f"{self.path}: cannot append, header does not match")
        self._fh = self.path.open("a" if exists else "w", newline="")
        self._writer = csv.writer(self._fh)
        if not exists:
            self._writer.writerow(RECORD_COLUMNS)

    def write(self, record: ExperimentRecord):
        self._writer.writerow(_format_row(record))

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_records(records: Iterable[ExperimentRecord], path: str | Path, append: bool = False) -> Path:
    with RecordWriter(path, append=append) as writer:
        for record in records:
            writer.write(record)
    return Path(path)


def _check_manifest_version(path: Path):
    manifest = path.with_name("manifest.json")
    if not manifest.exists():
        return
    try:
        version = json.loads(manifest.read_text())["records_format"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise RecordsFormatError(f"{manifest}: malformed manifest ({exc})") from exc
    if version != RECORDS_FORMAT_VERSION:
        raise RecordsFormatError(
            f"{path}: records format {version} is not supported (expected {RECORDS_FORMAT_VERSION})"
        )


def read_records(path: str | Path) -> list[ExperimentRecord]:
    path = Path(path)
    _check_manifest_version(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != RECORD_COLUMNS:
            raise RecordsFormatError(f"{path}: unexpected header {header}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(RECORD_COLUMNS):
                raise RecordsFormatError(f"{path}:{lineno}: expected {len(RECORD_COLUMNS)} fields, got {len(row)}")
            try:
                records.append(
                    ExperimentRecord(
                        problem=row[0],
                        algorithm=row[1],
                        n_relevant=int(row[2]),
                        n_irrelevant=int(row[3]),
                        iteration=int(row[4]),
                        seed=int(row[5]),
                        separability=float(row[6]),
                        walltime_ms=float(row[7]),
                        weights=tuple(float(w) for w in row[8].split(";")) if row[8] else (),
                    )
                )
            except ValueError as exc:
                raise RecordsFormatError(f"{path}:{lineno}: {exc}") from exc
    return records


def write_manifest(config: DesignConfig, path: str | Path, n_records: int | None = None) -> Path:
    path = Path(path)
    payload = {
        "artifact": "relieflab",
        "version": __version__,
        "records_format": RECORDS_FORMAT_VERSION,
        "config": asdict(config),
        "algorithms": list(DESIGN_ALGORITHMS),
        "runs_per_problem": runs_per_problem(config),
        "cell_seed": "blake2b-64('relieflab-cell|base|problem|n_relevant|n_irrelevant|iteration') & (2**63-1)",
        "sampler": "SplitMix64 Fisher-Yates",
    }
    if n_records is not None:
        payload["records"] = n_records
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def config_from_manifest(path: str | Path) -> DesignConfig:
    data = json.loads(Path(path).read_text())["config"]
    names = {f.name for f in fields(DesignConfig)}
    return DesignConfig(**{k: v for k, v in data.items() if k in names})
