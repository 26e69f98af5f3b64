"""Key generation, deterministic signatures, and the VRF itself.

Keys are standard ed25519: the secret scalar is the clamped lower
half of the hashed seed, the public key is that scalar times the
base point, and signatures are the usual deterministic-nonce kind,
byte-compatible with any stock ed25519 implementation.

The VRF rides on the same keys. Proving hashes the message onto the
curve (P), publishes Z = x*P, and attaches a Schnorr-style proof of
discrete-log equality between (B, X) and (P, Z): commitments to a
fresh nonce on both bases, a 16-byte challenge hashed from all four
points, and one response scalar. The output beta is a hash of the
encoded Z rather than Z itself so the raw point never leaks.

One deliberate asymmetry: signature nonces are derived
deterministically from the key and message, while proof nonces are
drawn live from the caller's entropy source. Proof nonces therefore
consume 64 bytes per prove, and identical (key, message) pairs
yield identical beta but distinct proofs under distinct nonces.

Verification functions are total: malformed bytes mean "invalid",
never an exception.
"""

from __future__ import annotations

from dataclasses import dataclass

from .entropy import EntropySource, read_seed
from .errors import (
    HashToCurveFailure,
    InvalidEncoding,
    InvalidLength,
    MalformedProof,
)
from .group_math import (
    BASE_POINT,
    GROUP_ORDER,
    GroupElement,
    Scalar,
    base_mul,
    double_mul_sub,
    hash_to_curve,
    point_mul,
    scalar_from_wide_bytes,
    scalar_muladd,
    scheme_hash,
)

SEED_BYTES = 32
NONCE_BYTES = 64
SIGNATURE_BYTES = 64
PROOF_BYTES = 80
CHALLENGE_BYTES = 16
BETA_BYTES = 32


@dataclass(frozen=True)
class SecretKey:
    """Seed plus its expansion: clamped scalar and nonce-derivation key."""

    seed: bytes
    scalar: Scalar
    nonce_key: bytes


@dataclass(frozen=True)
class PublicKey:
    point: GroupElement
    encoding: bytes

    @classmethod
    def decode(cls, data: bytes) -> "PublicKey":
        """Strict decode of a 32-byte public key encoding."""
        return cls(point=GroupElement.decode(data), encoding=bytes(data))


@dataclass(frozen=True)
class Signature:
    """Wire form R ‖ S, 32 bytes each; S canonical when self-produced."""

    r_bytes: bytes
    s_bytes: bytes

    def encode(self) -> bytes:
        return self.r_bytes + self.s_bytes

    @classmethod
    def decode(cls, data: bytes) -> "Signature":
        if len(data) != SIGNATURE_BYTES:
            raise InvalidLength(f"signature must be {SIGNATURE_BYTES} bytes, got {len(data)}")
        return cls(r_bytes=bytes(data[:32]), s_bytes=bytes(data[32:]))


@dataclass(frozen=True)
class VrfProof:
    """(Z, c, s): published point, challenge, response."""

    z: GroupElement
    challenge: bytes
    s: Scalar

    def encode(self) -> bytes:
        return proof_encode(self)


@dataclass(frozen=True)
class VrfOutput:
    beta: bytes


def _clamp(hash_low: bytes) -> int:
    value = int.from_bytes(hash_low, "little")
    value &= ~7
    value &= ~(1 << 255)
    value |= 1 << 254
    return value


def keypair_from_seed(seed: bytes) -> tuple[SecretKey, PublicKey]:
    """Expand a 32-byte seed the standard ed25519 way."""
    if len(seed) != SEED_BYTES:
        raise InvalidLength(f"seed must be {SEED_BYTES} bytes, got {len(seed)}")
    digest = scheme_hash(seed)
    # Reducing mod q after clamping changes neither the public key nor
    # any response scalar: the group has order q.
    scalar = Scalar(_clamp(digest[:32]))
    secret = SecretKey(seed=bytes(seed), scalar=scalar, nonce_key=digest[32:])
    point = base_mul(scalar)
    return secret, PublicKey(point=point, encoding=point.encode())


def gen_keypair(source: EntropySource) -> tuple[SecretKey, PublicKey]:
    """Draw a 32-byte seed from the source and expand it."""
    return keypair_from_seed(read_seed(source))


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------


def sign(sk: SecretKey, message: bytes) -> Signature:
    pk_encoding = base_mul(sk.scalar).encode()
    r = scalar_from_wide_bytes(scheme_hash(sk.nonce_key, message))
    commitment = base_mul(r).encode()
    c = scalar_from_wide_bytes(scheme_hash(commitment, pk_encoding, message))
    s = scalar_muladd(c, sk.scalar, r)
    return Signature(r_bytes=commitment, s_bytes=s.encode())


def verify_signature(pk: PublicKey, message: bytes, sig: Signature) -> bool:
    """True iff S*B = R + c*X. Total: malformed fields are just false."""
    try:
        commitment = GroupElement.decode(sig.r_bytes)
        s = Scalar.decode(sig.s_bytes)
    except (InvalidEncoding, InvalidLength):
        return False
    c = scalar_from_wide_bytes(scheme_hash(sig.r_bytes, pk.encoding, message))
    return base_mul(s) == commitment + point_mul(pk.point, c)


def verify_signature_bytes(pk_encoding: bytes, message: bytes, sig_bytes: bytes) -> bool:
    """Totally-defined wire-level signature check."""
    try:
        pk = PublicKey.decode(pk_encoding)
        sig = Signature.decode(sig_bytes)
    except (InvalidEncoding, InvalidLength):
        return False
    return verify_signature(pk, message, sig)


# ---------------------------------------------------------------------------
# VRF
# ---------------------------------------------------------------------------


def _challenge_scalar(challenge: bytes) -> Scalar:
    return Scalar(int.from_bytes(challenge, "little"))


def _beta_from_z(z_encoding: bytes) -> bytes:
    return scheme_hash(z_encoding)[:BETA_BYTES]


def vrf_prove(
    sk: SecretKey, alpha: bytes, nonce_source: EntropySource
) -> tuple[VrfOutput, VrfProof]:
    """Produce (beta, proof) for message alpha under sk.

    Raises EntropyExhausted if the source cannot supply the 64 nonce
    bytes, and HashToCurveFailure if no curve point exists for alpha
    (never observed in practice; the per-counter failure chance is
    about one half and 256 counters are tried).
    """
    pk_encoding = base_mul(sk.scalar).encode()
    p = hash_to_curve(pk_encoding, alpha)
    p_encoding = p.encode()
    z = point_mul(p, sk.scalar)
    z_encoding = z.encode()
    r = scalar_from_wide_bytes(nonce_source.read_bytes(NONCE_BYTES))
    commitment_base = base_mul(r).encode()
    commitment_p = point_mul(p, r).encode()
    challenge = scheme_hash(p_encoding, z_encoding, commitment_base, commitment_p)[
        :CHALLENGE_BYTES
    ]
    s = scalar_muladd(sk.scalar, _challenge_scalar(challenge), r)
    proof = VrfProof(z=z, challenge=challenge, s=s)
    return VrfOutput(beta=_beta_from_z(z_encoding)), proof


def vrf_verify(pk: PublicKey, alpha: bytes, output: VrfOutput, proof: VrfProof) -> bool:
    """Check proof and output against (pk, alpha). Total over inputs."""
    try:
        p = hash_to_curve(pk.encoding, alpha)
    except HashToCurveFailure:
        return False
    z_encoding = proof.z.encode()
    c = _challenge_scalar(proof.challenge)
    commitment_base = double_mul_sub(proof.s, BASE_POINT, c, pk.point)
    commitment_p = double_mul_sub(proof.s, p, c, proof.z)
    expected = scheme_hash(
        p.encode(), z_encoding, commitment_base.encode(), commitment_p.encode()
    )[:CHALLENGE_BYTES]
    if expected != proof.challenge:
        return False
    if output.beta != _beta_from_z(z_encoding):
        return False
    # Reject Z outside the prime-order subgroup even when the challenge
    # algebra happens to hold.
    return proof.z.in_prime_subgroup()


def vrf_verify_bytes(
    pk_encoding: bytes, alpha: bytes, beta: bytes, proof_bytes: bytes
) -> bool:
    """Totally-defined wire-level VRF check; any malformed part is invalid."""
    if len(beta) != BETA_BYTES:
        return False
    try:
        pk = PublicKey.decode(pk_encoding)
        proof = proof_decode(proof_bytes)
    except (InvalidEncoding, InvalidLength, MalformedProof):
        return False
    return vrf_verify(pk, alpha, VrfOutput(beta=bytes(beta)), proof)


# ---------------------------------------------------------------------------
# Proof wire format: Z(32) ‖ c(16) ‖ s(32)
# ---------------------------------------------------------------------------


def proof_encode(proof: VrfProof) -> bytes:
    return proof.z.encode() + proof.challenge + proof.s.encode()


def proof_decode(data: bytes) -> VrfProof:
    """Parse and validate the 80-byte wire form.

    Rejects wrong lengths, undecodable Z, and non-canonical s. The
    subgroup status of Z is checked later, at verification.
    """
    if len(data) != PROOF_BYTES:
        raise MalformedProof(f"proof must be {PROOF_BYTES} bytes, got {len(data)}")
    try:
        z = GroupElement.decode(data[:32])
        s = Scalar.decode(data[48:80])
    except (InvalidEncoding, InvalidLength) as exc:
        raise MalformedProof(str(exc)) from exc
    return VrfProof(z=z, challenge=bytes(data[32:48]), s=s)
