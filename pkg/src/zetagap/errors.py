"""Exception hierarchy.

Everything raised on purpose derives from ZetaGapError so callers (and the
CLI exit-code mapping) can tell our failures from genuine bugs.
"""


class ZetaGapError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ZetaGapError, ValueError):
    """Argument outside the supported domain (t <= 0, sigma outside strip, ...)."""


class PrecisionUnreachableError(ZetaGapError):
    """The requested absolute error cannot be certified at this point."""


class ConvergenceError(ZetaGapError):
    """An iteration (Newton, step halving) failed to converge."""


class StepCollapseError(ConvergenceError):
    """Argument tracking halved its step below 1e-12 without taming the phase.

    Usually means the integration path passes through (or hugs) a zero.
    """


class ToleranceUnreachableError(ZetaGapError):
    """Zero refinement cannot certify a sign change at the requested width."""


class CertificationError(ZetaGapError):
    """Located zero count disagrees with the argument-principle count.

    Carries the first height window where the counts diverge so the caller
    can re-scan it at a finer grid.
    """

    def __init__(self, message, window=None, discrepancy=0):
        super().__init__(message)
        self.window = window
        self.discrepancy = discrepancy


class UncertifiedRangeError(ZetaGapError):
    """A statistic was requested above the table's certified height."""


class TableFormatError(ZetaGapError, ValueError):
    """Malformed zero-table file; carries the offending line number."""

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no


class EmptyTableError(TableFormatError):
    """Zero-table file contains no data rows."""


class TailFitError(ZetaGapError):
    """Gaussian tail fit of the spacing density produced a non-decaying tail."""


class TooFewSamplesError(ZetaGapError, ValueError):
    """Not enough spacings for a meaningful histogram comparison."""


class ConfigError(ZetaGapError, ValueError):
    """Invalid run configuration."""
