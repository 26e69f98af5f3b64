"""Verifiable random function over ed25519 with pluggable entropy sources."""

from .errors import (
    BenchAborted,
    CorruptRun,
    EntropyExhausted,
    HashToCurveFailure,
    IncomparableRuns,
    InsufficientSample,
    InvalidEncoding,
    InvalidLength,
    MalformedProof,
    NoData,
    ProtocolError,
    QvrfError,
    SourceUnavailable,
    WriteFailed,
)

__all__ = [
    "BenchAborted",
    "CorruptRun",
    "EntropyExhausted",
    "HashToCurveFailure",
    "IncomparableRuns",
    "InsufficientSample",
    "InvalidEncoding",
    "InvalidLength",
    "MalformedProof",
    "NoData",
    "ProtocolError",
    "QvrfError",
    "SourceUnavailable",
    "WriteFailed",
]
