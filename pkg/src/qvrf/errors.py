"""Exception types shared across the package.

Everything raised on purpose derives from QvrfError so callers can
catch one base class at a process boundary (the CLI does exactly
that) while tests assert on the specific subclasses.
"""

from __future__ import annotations


class QvrfError(Exception):
    """Base class for all errors raised deliberately by this package."""


class InvalidLength(QvrfError):
    """A byte string has the wrong length for its role."""


class InvalidEncoding(QvrfError):
    """Bytes do not decode to a valid group element or scalar."""


class HashToCurveFailure(QvrfError):
    """No curve point was found for any counter value."""


class SourceUnavailable(QvrfError):
    """An entropy backend cannot be reached or opened."""


class EntropyExhausted(QvrfError):
    """A bounded entropy source has fewer bytes left than requested.

    The failed read consumes nothing; `remaining` reports how many
    bytes the source could still deliver.
    """

    def __init__(self, remaining: int):
        super().__init__(f"entropy exhausted, {remaining} bytes remaining")
        self.remaining = remaining


class ProtocolError(QvrfError):
    """A remote entropy server answered with a malformed payload."""


class InsufficientSample(QvrfError):
    """Too few bytes to compute a meaningful entropy estimate."""


class MalformedProof(QvrfError):
    """A proof blob cannot be parsed into its three components."""


class CorruptRun(QvrfError):
    """A benchmark op produced a proof its own key rejected."""


class WriteFailed(QvrfError):
    """Benchmark results could not be written to disk."""


class NoData(QvrfError):
    """A summary was requested over an empty record set."""


class IncomparableRuns(QvrfError):
    """Two benchmark runs differ in shape and cannot be compared."""


class BenchAborted(QvrfError):
    """A benchmark run stopped early; partial results are attached.

    `failed_op_index` is the 1-based index of the op that failed.
    `records` and `samples` hold everything completed before that,
    already flushed to CSV when an output path was configured.
    """

    def __init__(self, failed_op_index: int, records, samples, cause: Exception):
        super().__init__(f"benchmark aborted at op {failed_op_index}: {cause}")
        self.failed_op_index = failed_op_index
        self.records = records
        self.samples = samples
        self.cause = cause
