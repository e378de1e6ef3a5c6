"""Exception types raised across the package."""


class ReliefLabError(Exception):
    """Base class for errors raised by relieflab."""


class DatasetError(ReliefLabError, ValueError):
    """Structurally invalid dataset or malformed dataset file."""


class DegenerateStatisticsError(ReliefLabError, ValueError):
    """Statistics cannot be estimated (empty class, all-missing column, ...)."""


class UnsupportedValueError(ReliefLabError, ValueError):
    """A value combination no diff function is defined for."""


class TwoClassOnlyError(ReliefLabError, ValueError):
    """Original Relief was called on data without exactly two classes."""


class RecordsFormatError(ReliefLabError, ValueError):
    """Experiment records file is malformed or from an incompatible version."""
