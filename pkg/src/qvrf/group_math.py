"""Arithmetic for the prime-order subgroup of the ed25519 curve.

The twisted Edwards curve -x^2 + y^2 = 1 + d*x^2*y^2 over GF(2^255-19)
has a group of order 8*q with q prime; all scheme-level points live in
the order-q subgroup. This module exposes that subgroup additively
(`point_add`, `point_mul`, `base_mul`) together with the scalar field
GF(q), the canonical 32-byte little-endian encodings of both, and the
try-and-increment hash that maps arbitrary bytes onto the subgroup.

Internally points are (X:Y:Z:T) extended coordinates with x = X/Z,
y = Y/Z, T = XY/Z, and all field elements are gmpy2 mpz. The unified
addition formula used here is complete on this curve (a = -1 is a
square, d is not), so identity and doubling need no special cases.
"""

from __future__ import annotations

import hashlib

from gmpy2 import invert, mpz, powmod

from .errors import HashToCurveFailure, InvalidEncoding, InvalidLength

# Field prime, subgroup order, curve constant d = -121665/121666.
FIELD_PRIME = 2**255 - 19
GROUP_ORDER = 2**252 + 27742317777372353535851937790883648493
COFACTOR = 8

_P = mpz(FIELD_PRIME)
_Q = mpz(GROUP_ORDER)
_D = mpz(-121665) * invert(mpz(121666), _P) % _P
_D2 = (2 * _D) % _P
# sqrt(-1) mod p, needed when the candidate root has the wrong sign.
_SQRT_M1 = powmod(mpz(2), (_P - 1) // 4, _P)
_SQRT_EXP = (_P + 3) // 8

_ZERO = mpz(0)
_ONE = mpz(1)

# Identity in extended coordinates: affine (0, 1).
_IDENT = (_ZERO, _ONE, _ONE, _ZERO)


def scheme_hash(*parts: bytes) -> bytes:
    """The scheme's only hash: SHA-512 over the concatenated parts."""
    h = hashlib.sha512()
    for part in parts:
        h.update(part)
    return h.digest()


# ---------------------------------------------------------------------------
# Scalar field GF(q)
# ---------------------------------------------------------------------------


class Scalar:
    """An element of GF(q), stored canonically in [0, q)."""

    __slots__ = ("value",)

    def __init__(self, value: int):
        self.value = int(value) % GROUP_ORDER

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value + other.value)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value - other.value)

    def __mul__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.value * other.value)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.value)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Scalar) and self.value == other.value

    def __hash__(self) -> int:
        return hash(("Scalar", self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"Scalar({self.value})"

    def encode(self) -> bytes:
        return self.value.to_bytes(32, "little")

    @classmethod
    def decode(cls, data: bytes) -> "Scalar":
        """Strict decode: exactly 32 bytes, value < q."""
        if len(data) != 32:
            raise InvalidLength(f"scalar encoding must be 32 bytes, got {len(data)}")
        value = int.from_bytes(data, "little")
        if value >= GROUP_ORDER:
            raise InvalidEncoding("scalar encoding is not reduced mod the group order")
        return cls(value)


def scalar_from_wide_bytes(data: bytes) -> Scalar:
    """Reduce a 64-byte little-endian integer into GF(q).

    This is how hash outputs become scalars; the double-width input
    keeps the reduction bias negligible.
    """
    if len(data) != 64:
        raise InvalidLength(f"wide scalar input must be 64 bytes, got {len(data)}")
    return Scalar(int.from_bytes(data, "little"))


def scalar_muladd(a: Scalar, b: Scalar, c: Scalar) -> Scalar:
    """a*b + c in GF(q), the response-computation shape."""
    return Scalar((a.value * b.value + c.value) % GROUP_ORDER)


# ---------------------------------------------------------------------------
# Point arithmetic on (X:Y:Z:T) tuples of mpz
# ---------------------------------------------------------------------------


def _pt_add(p, q):
    x1, y1, z1, t1 = p
    x2, y2, z2, t2 = q
    a = (y1 - x1) * (y2 - x2) % _P
    b = (y1 + x1) * (y2 + x2) % _P
    c = t1 * _D2 % _P * t2 % _P
    d = z1 * 2 * z2 % _P
    e = b - a
    f = d - c
    g = d + c
    h = b + a
    return (e * f % _P, g * h % _P, f * g % _P, e * h % _P)


def _pt_double(p):
    x1, y1, z1, _ = p
    a = x1 * x1 % _P
    b = y1 * y1 % _P
    c = 2 * z1 * z1 % _P
    h = a + b
    e = h - (x1 + y1) ** 2 % _P
    g = a - b
    f = c + g
    return (e * f % _P, g * h % _P, f * g % _P, e * h % _P)


def _pt_neg(p):
    x, y, z, t = p
    return ((-x) % _P, y, z, (-t) % _P)


def _pt_equal(p, q) -> bool:
    # Cross-multiply to compare projective classes without inverting.
    x1, y1, z1, _ = p
    x2, y2, z2, _ = q
    return (x1 * z2 - x2 * z1) % _P == 0 and (y1 * z2 - y2 * z1) % _P == 0


def _small_multiples(p):
    """[p, 2p, ..., 15p] for 4-bit windowed multiplication."""
    row = [p]
    for _ in range(14):
        row.append(_pt_add(row[-1], p))
    return row


def _pt_scalarmult(p, k: int):
    """k*p via a fixed 4-bit window, msb first."""
    if k == 0:
        return _IDENT
    table = _small_multiples(p)
    acc = _IDENT
    started = False
    for shift in range(252, -4, -4):
        if started:
            acc = _pt_double(_pt_double(_pt_double(_pt_double(acc))))
        digit = (k >> shift) & 15
        if digit:
            acc = table[digit - 1] if not started else _pt_add(acc, table[digit - 1])
            started = True
    return acc


def _pt_to_affine(p):
    x, y, z, _ = p
    zi = invert(z, _P)
    return (int(x * zi % _P), int(y * zi % _P))


def _pt_encode(p) -> bytes:
    x, y = _pt_to_affine(p)
    data = bytearray(y.to_bytes(32, "little"))
    data[31] |= (x & 1) << 7
    return bytes(data)


def _pt_decode(data: bytes):
    if len(data) != 32:
        raise InvalidLength(f"point encoding must be 32 bytes, got {len(data)}")
    y = int.from_bytes(data, "little")
    sign = (y >> 255) & 1
    y &= (1 << 255) - 1
    if y >= FIELD_PRIME:
        raise InvalidEncoding("y coordinate is not reduced mod the field prime")
    ym = mpz(y)
    yy = ym * ym % _P
    num = (yy - 1) % _P
    den = (_D * yy + 1) % _P
    xx = num * invert(den, _P) % _P
    x = powmod(xx, _SQRT_EXP, _P)
    if (x * x - xx) % _P != 0:
        x = x * _SQRT_M1 % _P
        if (x * x - xx) % _P != 0:
            raise InvalidEncoding("encoding is not a point on the curve")
    if x == 0 and sign == 1:
        raise InvalidEncoding("x is zero but the sign bit is set")
    if (x & 1) != sign:
        x = (-x) % _P
    return (x, ym, _ONE, x * ym % _P)


# Base point: y = 4/5 with even x, recovered from its canonical encoding.
_B_Y = mpz(4) * invert(mpz(5), _P) % _P
_BASE = _pt_decode(int(_B_Y).to_bytes(32, "little"))

# 4-bit fixed-base comb: _BASE_TABLES[j][i-1] = i * 16^j * B for i in 1..15.
_BASE_TABLES = []
_step = _BASE
for _j in range(64):
    _BASE_TABLES.append(_small_multiples(_step))
    _step = _pt_double(_pt_double(_pt_double(_pt_double(_step))))
del _step, _j

# Small multiples of B reused by the verification double-mult.
_B_SMALL = _BASE_TABLES[0]


def _pt_scalarmult_base(k: int):
    acc = _IDENT
    started = False
    for j in range(64):
        digit = (k >> (4 * j)) & 15
        if digit:
            entry = _BASE_TABLES[j][digit - 1]
            acc = entry if not started else _pt_add(acc, entry)
            started = True
    return acc


def _pt_double_mul_sub(s: int, p_table, c: int, x):
    """s*P - c*X with interleaved 4-bit windows (P given as its table)."""
    nx_table = _small_multiples(_pt_neg(x))
    acc = _IDENT
    started = False
    for shift in range(252, -4, -4):
        if started:
            acc = _pt_double(_pt_double(_pt_double(_pt_double(acc))))
        ds = (s >> shift) & 15
        if ds:
            entry = p_table[ds - 1]
            acc = entry if not started else _pt_add(acc, entry)
            started = True
        dc = (c >> shift) & 15
        if dc:
            entry = nx_table[dc - 1]
            acc = entry if not started else _pt_add(acc, entry)
            started = True
    return acc


# ---------------------------------------------------------------------------
# Public wrapper
# ---------------------------------------------------------------------------


class GroupElement:
    """A point on the curve, usually in the prime-order subgroup.

    Wraps an extended-coordinate tuple; all public constructors go
    through strict decoding or arithmetic on already-valid points.
    """

    __slots__ = ("_pt",)

    def __init__(self, pt):
        self._pt = pt

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(_IDENT)

    @classmethod
    def decode(cls, data: bytes) -> "GroupElement":
        """Strict decode; rejects non-curve and non-canonical bytes."""
        return cls(_pt_decode(data))

    @classmethod
    def from_affine(cls, x: int, y: int) -> "GroupElement":
        xm, ym = mpz(x % FIELD_PRIME), mpz(y % FIELD_PRIME)
        return cls((xm, ym, _ONE, xm * ym % _P))

    def encode(self) -> bytes:
        return _pt_encode(self._pt)

    def affine(self) -> tuple[int, int]:
        return _pt_to_affine(self._pt)

    def is_identity(self) -> bool:
        return _pt_equal(self._pt, _IDENT)

    def in_prime_subgroup(self) -> bool:
        """True iff q * self is the identity."""
        return _pt_equal(_pt_scalarmult(self._pt, GROUP_ORDER), _IDENT)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(_pt_add(self._pt, other._pt))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(_pt_add(self._pt, _pt_neg(other._pt)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(_pt_neg(self._pt))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupElement) and _pt_equal(self._pt, other._pt)

    def __hash__(self) -> int:
        return hash(("GroupElement", self.encode()))

    def __repr__(self) -> str:
        return f"GroupElement({self.encode().hex()})"


BASE_POINT = GroupElement(_BASE)


def point_add(p: GroupElement, q: GroupElement) -> GroupElement:
    return p + q


def point_mul(p: GroupElement, k: Scalar) -> GroupElement:
    return GroupElement(_pt_scalarmult(p._pt, k.value))


def base_mul(k: Scalar) -> GroupElement:
    """k*B via the precomputed fixed-base table."""
    return GroupElement(_pt_scalarmult_base(k.value))


def double_mul_sub(s: Scalar, p: GroupElement, c: Scalar, x: GroupElement) -> GroupElement:
    """s*P - c*X in one interleaved pass; B as P hits the static table."""
    if _pt_equal(p._pt, _BASE):
        table = _B_SMALL
    else:
        table = _small_multiples(p._pt)
    return GroupElement(_pt_double_mul_sub(s.value, table, c.value, x._pt))


def in_prime_subgroup(p: GroupElement) -> bool:
    return p.in_prime_subgroup()


def hash_to_curve(pk_encoding: bytes, alpha: bytes) -> GroupElement:
    """Map (public key, message) onto the prime-order subgroup.

    Try-and-increment: hash with a single counter byte, read the
    first 32 bytes as a candidate encoding, and multiply the first
    decodable point by the cofactor. The result is never allowed to
    be the identity, so small-order candidates are skipped too.
    """
    for ctr in range(256):
        digest = scheme_hash(pk_encoding, alpha, bytes([ctr]))
        try:
            candidate = _pt_decode(digest[:32])
        except (InvalidEncoding, InvalidLength):
            continue
        cleared = _pt_scalarmult(candidate, COFACTOR)
        if _pt_equal(cleared, _IDENT):
            continue
        return GroupElement(cleared)
    raise HashToCurveFailure("no curve point found for any counter value")
