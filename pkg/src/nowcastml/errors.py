"""Exception types raised across the package.

All errors derive from :class:`NowcastError` so callers can catch the whole
family at the CLI boundary while tests assert on the specific class.
"""


class NowcastError(Exception):
    """Base class for every error raised by nowcastml."""


# data frame / ingestion

class MissingColumn(NowcastError):
    pass


class DuplicateColumn(NowcastError):
    pass


class BadQuarterLabel(NowcastError):
    pass


class DuplicateQuarter(NowcastError):
    pass


class IndexGap(NowcastError):
    pass


class NonNumericCell(NowcastError):
    pass


class EmptyData(NowcastError):
    pass


class NonPositiveCpi(NowcastError):
    pass


class UnknownColumn(NowcastError):
    pass


class BaseOutOfRange(NowcastError):
    pass


class NonPositiveValue(NowcastError):
    pass


class EmptyColumnSet(NowcastError):
    pass


class BoundaryOutOfRange(NowcastError):
    pass


# numeric kernels

class ShapeMismatch(NowcastError):
    pass


class NonFiniteInput(NowcastError):
    pass


class RankDeficient(NowcastError):
    pass


class EmptyInput(NowcastError):
    pass


class QOutOfRange(NowcastError):
    pass


# models

class BadHyperparameter(NowcastError):
    pass


class NotConverged(NowcastError):
    """Iterative solver hit its sweep budget before the tolerance.

    Carries ``sweeps`` and ``last_delta`` so callers can inspect how far the
    solve got.
    """

    def __init__(self, message, sweeps=None, last_delta=None):
        super().__init__(message)
        self.sweeps = sweeps
        self.last_delta = last_delta


class KOutOfRange(NowcastError):
    pass


class TooShort(NowcastError):
    pass


class FeatureMismatch(NowcastError):
    pass


class ModelFormatError(NowcastError):
    pass


# tuning

class TooShortForFolds(NowcastError):
    pass


class GridSearchError(NowcastError):
    pass


# ensemble

class NonPositiveMse(NowcastError):
    pass


class TooFewMembers(NowcastError):
    pass


class MemberMismatch(NowcastError):
    pass


# metrics

class LengthMismatch(NowcastError):
    pass


class ZeroActual(NowcastError):
    pass


class ZeroActualForMape(ZeroActual):
    pass


# config / pipeline

class ConfigError(NowcastError):
    pass


class BadDgp(NowcastError):
    pass


class PipelineError(NowcastError):
    """Wraps a lower-level failure with the pipeline stage it occurred in."""

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
