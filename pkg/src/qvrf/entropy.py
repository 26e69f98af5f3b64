"""Randomness suppliers behind one byte-oriented interface.

Four sources: a file-backed reader that consumes a binary entropy
file front to back, the operating system CSPRNG, a remote QRNG HTTP
client, and a block-caching pool that wraps any of the others. The
pool exists because fetching entropy in larger blocks and serving
ops from cache removes per-operation supplier latency; its byte
stream is guaranteed identical to the wrapped source's.

Exhaustion of a bounded source fails loudly with EntropyExhausted
instead of wrapping around or falling back to the OS source; any
silent substitution would invalidate source-vs-source benchmarks.
"""

from __future__ import annotations

import math
import os
import threading
from abc import ABC, abstractmethod
from collections import Counter

import requests

from .errors import (
    EntropyExhausted,
    InsufficientSample,
    ProtocolError,
    SourceUnavailable,
)

DEFAULT_BLOCK_SIZE = 4096
DEFAULT_BATCH_LENGTH = 1024
QRNG_URL_ENV_VAR = "QVRF_QRNG_URL"


class EntropySource(ABC):
    """Anything that can hand out n fresh bytes on demand."""

    source_kind: str = "abstract"

    @abstractmethod
    def read_bytes(self, n: int) -> bytes:
        """Return exactly n fresh bytes or raise; never short-read."""


def _check_count(n: int) -> None:
    if n < 0:
        raise ValueError(f"byte count must be non-negative, got {n}")


class FileEntropyReader(EntropySource):
    """Strict forward consumption of a binary entropy file.

    Every read opens the file, seeks to the current offset, and
    closes it again, which is the unbuffered per-operation access
    pattern the pool is later measured against. A failed read
    leaves the offset untouched.
    """

    source_kind = "file"

    def __init__(self, path: str, offset: int = 0, length: int | None = None):
        self.path = path
        if length is None:
            try:
                length = os.path.getsize(path)
            except OSError as exc:
                raise SourceUnavailable(f"cannot stat entropy file {path!r}: {exc}") from exc
        self.offset = offset
        self.length = length
        self._lock = threading.Lock()

    def remaining(self) -> int:
        return self.length - self.offset

    def read_bytes(self, n: int) -> bytes:
        _check_count(n)
        if n == 0:
            return b""
        with self._lock:
            left = self.length - self.offset
            if n > left:
                raise EntropyExhausted(remaining=left)
            try:
                with open(self.path, "rb") as handle:
                    handle.seek(self.offset)
                    data = handle.read(n)
            except OSError as exc:
                raise SourceUnavailable(f"cannot read entropy file {self.path!r}: {exc}") from exc
            if len(data) != n:
                raise SourceUnavailable(
                    f"entropy file {self.path!r} shrank below its recorded length"
                )
            self.offset += n
            return data


class SystemEntropySource(EntropySource):
    """The operating system CSPRNG; effectively unbounded."""

    source_kind = "system"

    def read_bytes(self, n: int) -> bytes:
        _check_count(n)
        return os.urandom(n)


class RemoteQrngClient(EntropySource):
    """HTTP client for QRNG services speaking a small JSON protocol.

    One GET per batch: {endpoint}?length=N&type=uint8 answered by
    {"success": bool, "data": [uint8...]}. Transport failures map to
    SourceUnavailable, a reachable server answering nonsense maps to
    ProtocolError. Meant to fill a pool in batches, never to sit on
    the per-operation hot path.
    """

    source_kind = "remote"

    def __init__(
        self,
        endpoint: str,
        batch_length: int = DEFAULT_BATCH_LENGTH,
        timeout: float = 10.0,
    ):
        if batch_length < 1:
            raise ValueError(f"batch_length must be positive, got {batch_length}")
        self.endpoint = endpoint
        self.batch_length = batch_length
        self.timeout = timeout

    def fetch(self, n: int) -> bytes:
        """One request for n bytes; n must fit in a single batch."""
        _check_count(n)
        if n == 0:
            return b""
        if n > self.batch_length:
            raise ValueError(f"n={n} exceeds the per-request maximum {self.batch_length}")
        try:
            response = requests.get(
                self.endpoint,
                params={"length": n, "type": "uint8"},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise SourceUnavailable(f"QRNG endpoint unreachable: {exc}") from exc
        try:
            payload = response.json()
        except ValueError as exc:
            raise ProtocolError(f"QRNG response is not JSON: {exc}") from exc
        if not isinstance(payload, dict) or payload.get("success") is not True:
            raise ProtocolError("QRNG response did not report success")
        data = payload.get("data")
        if not isinstance(data, list) or len(data) != n:
            got = len(data) if isinstance(data, list) else "no"
            raise ProtocolError(f"QRNG response carried {got} values, wanted {n}")
        try:
            return bytes(data)
        except (TypeError, ValueError) as exc:
            raise ProtocolError(f"QRNG response values are not uint8: {exc}") from exc

    def read_bytes(self, n: int) -> bytes:
        _check_count(n)
        chunks = []
        while n > 0:
            step = min(n, self.batch_length)
            chunks.append(self.fetch(step))
            n -= step
        return b"".join(chunks)


class EntropyPool(EntropySource):
    """Block-caching wrapper preserving the inner source's byte order.

    Reads that fit in the cache touch the inner source zero times.
    On a miss the pool fetches whole blocks until the request fits;
    when the inner source cannot fill a final block, the pool takes
    whatever remains so no tail byte is stranded. With prefetch
    enabled, a daemon thread refills one block whenever the cache
    dips below the low-water mark, concurrently with consumers.

    refill_count counts inner reads and only ever grows.
    """

    source_kind = "pooled"

    def __init__(
        self,
        inner: EntropySource,
        block_size: int = DEFAULT_BLOCK_SIZE,
        low_water_mark: int | None = None,
        prefetch: bool = False,
    ):
        if block_size < 32:
            raise ValueError(f"block_size must be at least 32, got {block_size}")
        self.inner = inner
        self.block_size = block_size
        self.low_water_mark = block_size // 4 if low_water_mark is None else low_water_mark
        self.refill_count = 0
        self._buf = bytearray()
        self._head = 0
        self._lock = threading.Lock()  # guards cache state and refill_count
        self._fill_lock = threading.Lock()  # serializes inner reads, keeps order
        self._inner_dry = False
        self._stop = threading.Event()
        self._wakeup = threading.Event()
        self._prefetch_thread = None
        if prefetch:
            self._prefetch_thread = threading.Thread(
                target=self._prefetch_loop, name="entropy-pool-refill", daemon=True
            )
            self._prefetch_thread.start()

    # -- cache primitives, all under self._lock --

    def _cached_locked(self) -> int:
        return len(self._buf) - self._head

    def cached(self) -> int:
        with self._lock:
            return self._cached_locked()

    def _take_locked(self, n: int) -> bytes:
        data = bytes(self._buf[self._head : self._head + n])
        self._head += n
        if self._head >= 1 << 16:
            del self._buf[: self._head]
            self._head = 0
        return data

    # -- refill machinery --

    def _fill_one_block(self) -> bool:
        """Fetch one block (or the inner remainder) under _fill_lock.

        Returns False once the inner source has nothing left.
        """
        if self._inner_dry:
            return False
        try:
            chunk = self.inner.read_bytes(self.block_size)
        except EntropyExhausted as exc:
            if exc.remaining <= 0:
                self._inner_dry = True
                return False
            chunk = self.inner.read_bytes(exc.remaining)
            self._inner_dry = True
        with self._lock:
            self._buf += chunk
            self.refill_count += 1
        return True

    def _prefetch_loop(self) -> None:
        while not self._stop.is_set():
            self._wakeup.wait()
            self._wakeup.clear()
            if self._stop.is_set():
                return
            with self._fill_lock:
                with self._lock:
                    low = self._cached_locked() < self.low_water_mark
                if low and not self._inner_dry:
                    try:
                        self._fill_one_block()
                    except Exception:
                        # Consumers will surface the error on their next miss.
                        pass

    def read_bytes(self, n: int) -> bytes:
        _check_count(n)
        if n == 0:
            return b""
        with self._lock:
            if self._cached_locked() >= n:
                data = self._take_locked(n)
                low = self._cached_locked() < self.low_water_mark
            else:
                data = None
                low = False
        if data is not None:
            if low and self._prefetch_thread is not None:
                self._wakeup.set()
            return data
        with self._fill_lock:
            while True:
                with self._lock:
                    if self._cached_locked() >= n:
                        data = self._take_locked(n)
                        low = self._cached_locked() < self.low_water_mark
                        break
                    if self._inner_dry:
                        raise EntropyExhausted(remaining=self._cached_locked())
                self._fill_one_block()
        if low and self._prefetch_thread is not None and not self._inner_dry:
            self._wakeup.set()
        return data

    def close(self) -> None:
        """Stop the prefetch thread, if any. Idempotent."""
        self._stop.set()
        self._wakeup.set()
        if self._prefetch_thread is not None:
            self._prefetch_thread.join(timeout=5.0)
            self._prefetch_thread = None

    def __enter__(self) -> "EntropyPool":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


# ---------------------------------------------------------------------------
# Module-level helpers
# ---------------------------------------------------------------------------


def open_file_source(path: str) -> FileEntropyReader:
    """Open a raw binary entropy file for forward consumption."""
    if not os.path.isfile(path):
        raise SourceUnavailable(f"entropy file {path!r} does not exist or is not a regular file")
    return FileEntropyReader(path)


def read_seed(source: EntropySource) -> bytes:
    """One 32-byte key seed from any source."""
    return source.read_bytes(32)


def pool_wrap(
    inner: EntropySource,
    block_size: int = DEFAULT_BLOCK_SIZE,
    low_water_mark: int | None = None,
    prefetch: bool = False,
) -> EntropyPool:
    return EntropyPool(inner, block_size=block_size, low_water_mark=low_water_mark, prefetch=prefetch)


def remote_fetch(client: RemoteQrngClient, n: int) -> bytes:
    """One-shot remote batch; n capped by the client's batch_length."""
    return client.fetch(n)


def min_entropy_estimate(sample: bytes) -> float:
    """Min-entropy of the empirical byte distribution, bits per byte.

    -log2(max frequency / sample length); 0.0 for a constant sample,
    8.0 when all 256 values are equally common. A crude health check,
    not a certified estimator.
    """
    if len(sample) < 256:
        raise InsufficientSample(f"need at least 256 bytes, got {len(sample)}")
    most_common = Counter(sample).most_common(1)[0][1]
    return -math.log2(most_common / len(sample))


def default_qrng_url() -> str | None:
    """The QRNG endpoint configured in the environment, if any."""
    return os.environ.get(QRNG_URL_ENV_VAR)
