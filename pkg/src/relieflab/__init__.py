"""Relief-family feature weighting, synthetic problems and separability experiments."""

__version__ = "0.1.0"

from .data import Dataset, FeatureMeta, categoric, compute_stats, make_dataset, numeric, read_dataset, write_dataset
from .generators import GeneratorSpec, generate
from .metrics import ProgressiveSchedule
from .relief import ReliefConfig, drelieff, pdrelieff, relief, relieff, relieved, run, sample_order

__all__ = [
    "Dataset",
    "FeatureMeta",
    "GeneratorSpec",
    "ProgressiveSchedule",
    "ReliefConfig",
    "categoric",
    "compute_stats",
    "drelieff",
    "generate",
    "make_dataset",
    "numeric",
    "pdrelieff",
    "read_dataset",
    "relief",
    "relieff",
    "relieved",
    "run",
    "sample_order",
    "write_dataset",
]
