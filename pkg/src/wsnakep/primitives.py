"""Elliptic-curve group arithmetic, hashing, authenticated encryption and
byte-level encodings that the protocol roles are built from.

Two curve configurations are provided: a tiny curve over GF(17) whose group
order is found by exhaustive enumeration (small enough that every group-law
claim can be checked against a brute-force oracle), and NIST P-256 for
realistic key sizes.  All hash outputs are 32 bytes; the algorithm is
selectable from a registry and its identifier travels with every report.

Every operation here is a pure function of its inputs.  When an
:class:`OpCounter` context is active, the expensive operations (hash,
scalar multiplication, symmetric seal/open) tally themselves per role so a
simulation run can report exact per-party operation counts.
"""

from __future__ import annotations

import hashlib
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Iterator

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

DIGEST_LEN = 32

DEFAULT_HASH = "sha256"

HASH_ALGORITHMS = {
    "sha256": hashlib.sha256,
    "sha3-256": hashlib.sha3_256,
    "blake2s": hashlib.blake2s,
}

# AE nonce tags: one derived key protects at most two messages, one per
# direction, so fixed per-direction nonces never collide.
TAG_TO_GATEWAY = 0x01
TAG_FROM_GATEWAY = 0x02

# Domain-separation prefixes for the two point-to-digest encodings.
_KDF_PREFIX = b"\x01"
_P2B_PREFIX = b"\x02"


class PointValidationError(ValueError):
    """A point failed curve membership or encoding preconditions."""


class DecryptionError(Exception):
    """Authenticated decryption failed (wrong key, tag, or tampering)."""


# ---------------------------------------------------------------------------
# operation counting
# ---------------------------------------------------------------------------

@dataclass
class RoleOps:
    """Exact tally of primitive invocations attributed to one role.

    ``derivation_hashes`` counts the point-to-digest derivations (key
    derivation and point digests) that are implementation plumbing rather
    than protocol-level hash applications; they are reported separately.
    """

    hash_ops: int = 0
    ecc_ops: int = 0
    sym_ops: int = 0
    derivation_hashes: int = 0

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def copy(self) -> "RoleOps":
        return RoleOps(**self.as_dict())


class OpCounter:
    """Per-role operation tallies for one simulation run."""

    def __init__(self) -> None:
        self.roles: dict[str, RoleOps] = {}

    def role(self, name: str) -> RoleOps:
        if name not in self.roles:
            self.roles[name] = RoleOps()
        return self.roles[name]

    @contextmanager
    def track(self, role: str) -> Iterator[RoleOps]:
        """Attribute primitive operations inside the block to ``role``."""
        token = _ACTIVE_COUNTER.set((self, role))
        try:
            yield self.role(role)
        finally:
            _ACTIVE_COUNTER.reset(token)

    def snapshot(self) -> dict[str, dict[str, int]]:
        return {name: ops.as_dict() for name, ops in sorted(self.roles.items())}


_ACTIVE_COUNTER: ContextVar[tuple[OpCounter, str] | None] = ContextVar(
    "wsnakep_active_op_counter", default=None
)


def _bump(attr: str) -> None:
    active = _ACTIVE_COUNTER.get()
    if active is not None:
        counter, role = active
        ops = counter.role(role)
        setattr(ops, attr, getattr(ops, attr) + 1)


# ---------------------------------------------------------------------------
# hashing and byte utilities
# ---------------------------------------------------------------------------

def _hash_raw(data: bytes, alg: str = DEFAULT_HASH) -> bytes:
    try:
        ctor = HASH_ALGORITHMS[alg]
    except KeyError:
        raise ValueError(f"unknown hash algorithm {alg!r}") from None
    return ctor(data).digest()


def hash_digest(data: bytes, alg: str = DEFAULT_HASH) -> bytes:
    """Protocol-level hash application; 32-byte output, counted as one hash op."""
    _bump("hash_ops")
    return _hash_raw(data, alg)


def frame(*parts: bytes) -> bytes:
    """Length-prefixed field framing: each part preceded by a 2-byte
    big-endian length.  Used for every hash input and sealed payload so that
    distinct field splits can never collide after concatenation."""
    out = bytearray()
    for part in parts:
        if len(part) > 0xFFFF:
            raise ValueError("framed field longer than 65535 bytes")
        out += len(part).to_bytes(2, "big")
        out += part
    return bytes(out)


def unframe(data: bytes) -> list[bytes]:
    """Inverse of :func:`frame`; rejects truncated or trailing bytes."""
    parts = []
    i = 0
    while i < len(data):
        if i + 2 > len(data):
            raise ValueError("truncated frame header")
        n = int.from_bytes(data[i : i + 2], "big")
        i += 2
        if i + n > len(data):
            raise ValueError("truncated frame body")
        parts.append(data[i : i + n])
        i += n
    return parts


def xor_bytes(a: bytes, b: bytes) -> bytes:
    """Bitwise XOR of two equal-length strings."""
    if len(a) != len(b):
        raise ValueError(f"xor operands differ in length: {len(a)} vs {len(b)}")
    return bytes(x ^ y for x, y in zip(a, b))


def ts_bytes(t_ms: int) -> bytes:
    """Timestamp wire form: 8-byte big-endian unsigned milliseconds."""
    if not 0 <= t_ms < 1 << 64:
        raise ValueError("timestamp out of range")
    return t_ms.to_bytes(8, "big")


def ts_from_bytes(data: bytes) -> int:
    if len(data) != 8:
        raise ValueError("timestamp field must be 8 bytes")
    return int.from_bytes(data, "big")


def fingerprint(secret: bytes, alg: str = DEFAULT_HASH) -> str:
    """Short hex fingerprint safe to print in reports; never the value itself."""
    return _hash_raw(b"fingerprint" + secret, alg)[:8].hex()


# ---------------------------------------------------------------------------
# elliptic-curve group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupPoint:
    """A point on a short Weierstrass curve: affine (x, y) or the identity."""

    x: int | None = None
    y: int | None = None

    @classmethod
    def infinity(cls) -> "GroupPoint":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.is_infinity:
            return "GroupPoint(inf)"
        return f"GroupPoint({self.x}, {self.y})"


INFINITY = GroupPoint.infinity()


@dataclass(frozen=True)
class CurveParams:
    """Short Weierstrass curve y^2 = x^3 + ax + b over GF(p) with a fixed
    generator of prime order n."""

    name: str
    p: int
    a: int
    b: int
    gx: int
    gy: int
    n: int

    def __post_init__(self) -> None:
        if self.p <= 3:
            raise ValueError("field characteristic must exceed 3")
        if (4 * pow(self.a, 3, self.p) + 27 * pow(self.b, 2, self.p)) % self.p == 0:
            raise ValueError(f"curve {self.name} is singular")
        if not is_on_curve(GroupPoint(self.gx, self.gy), self):
            raise ValueError(f"generator of {self.name} is not on the curve")
        if self.n < 1:
            raise ValueError("group order must be positive")

    @property
    def g(self) -> GroupPoint:
        return GroupPoint(self.gx, self.gy)

    @property
    def field_width(self) -> int:
        """Fixed coordinate width in bytes."""
        return (self.p.bit_length() + 7) // 8

    @property
    def scalar_width(self) -> int:
        return (self.n.bit_length() + 7) // 8


def is_on_curve(point: GroupPoint, curve: CurveParams) -> bool:
    if point.is_infinity:
        return True
    x, y = point.x, point.y
    if not (0 <= x < curve.p and 0 <= y < curve.p):
        return False
    return (y * y - (x * x * x + curve.a * x + curve.b)) % curve.p == 0


def _require_on_curve(point: GroupPoint, curve: CurveParams) -> None:
    if not is_on_curve(point, curve):
        raise PointValidationError(f"point {point!r} is not on curve {curve.name}")


def point_neg(point: GroupPoint, curve: CurveParams) -> GroupPoint:
    if point.is_infinity:
        return INFINITY
    return GroupPoint(point.x, (-point.y) % curve.p)


def point_add(p1: GroupPoint, p2: GroupPoint, curve: CurveParams) -> GroupPoint:
    """Chord-and-tangent group addition; the identity is the point at infinity."""
    _require_on_curve(p1, curve)
    _require_on_curve(p2, curve)
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    p = curve.p
    if p1.x == p2.x and (p1.y + p2.y) % p == 0:
        return INFINITY
    if p1 == p2:
        lam = (3 * p1.x * p1.x + curve.a) * pow(2 * p1.y, -1, p) % p
    else:
        lam = (p2.y - p1.y) * pow(p2.x - p1.x, -1, p) % p
    x3 = (lam * lam - p1.x - p2.x) % p
    y3 = (lam * (p1.x - x3) - p1.y) % p
    return GroupPoint(x3, y3)


def scalar_mult(k: int, point: GroupPoint, curve: CurveParams) -> GroupPoint:
    """k-fold group addition via double-and-add; counted as one EC mult."""
    if not 0 <= k < curve.n:
        raise ValueError(f"scalar {k} outside [0, {curve.n})")
    _require_on_curve(point, curve)
    _bump("ecc_ops")
    result = INFINITY
    addend = point
    while k:
        if k & 1:
            result = _add_unchecked(result, addend, curve)
        addend = _add_unchecked(addend, addend, curve)
        k >>= 1
    return result


def _add_unchecked(p1: GroupPoint, p2: GroupPoint, curve: CurveParams) -> GroupPoint:
    # inner loop of scalar_mult: operands already validated
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    p = curve.p
    if p1.x == p2.x and (p1.y + p2.y) % p == 0:
        return INFINITY
    if p1 == p2:
        lam = (3 * p1.x * p1.x + curve.a) * pow(2 * p1.y, -1, p) % p
    else:
        lam = (p2.y - p1.y) * pow(p2.x - p1.x, -1, p) % p
    x3 = (lam * lam - p1.x - p2.x) % p
    y3 = (lam * (p1.x - x3) - p1.y) % p
    return GroupPoint(x3, y3)


def enumerate_affine_points(p: int, a: int, b: int) -> list[tuple[int, int]]:
    """All affine solutions of the curve equation, by exhaustion.  Only
    sensible for desk-scale fields; used to pin down the tiny curve's order."""
    points = []
    for x in range(p):
        rhs = (x * x * x + a * x + b) % p
        for y in range(p):
            if (y * y) % p == rhs:
                points.append((x, y))
    return points


@lru_cache(maxsize=None)
def toy_curve() -> CurveParams:
    """Tiny curve over GF(17) with generator (5, 1).

    The group order is 19 (prime): 18 affine points found by exhaustive
    enumeration plus the identity, so every point generates the full group
    and brute-force oracles over all scalars stay cheap.
    """
    p, a, b = 17, 2, 2
    n = len(enumerate_affine_points(p, a, b)) + 1
    curve = CurveParams(name="toy", p=p, a=a, b=b, gx=5, gy=1, n=n)
    if scalar_mult(n - 1, curve.g, curve) != point_neg(curve.g, curve):
        raise AssertionError("enumerated order does not annihilate the generator")
    return curve


@lru_cache(maxsize=None)
def p256_curve() -> CurveParams:
    """NIST P-256 domain parameters (prime-order group, cofactor 1)."""
    curve = CurveParams(
        name="p256",
        p=0xFFFFFFFF00000001000000000000000000000000FFFFFFFFFFFFFFFFFFFFFFFF,
        a=0xFFFFFFFF00000001000000000000000000000000FFFFFFFFFFFFFFFFFFFFFFFC,
        b=0x5AC635D8AA3A93E7B3EBBD55769886BC651D06B0CC53B0F63BCE3C3E27D2604B,
        gx=0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296,
        gy=0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5,
        n=0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551,
    )
    if not scalar_mult(curve.n - 1, curve.g, curve) == point_neg(curve.g, curve):
        raise AssertionError("p256 generator order check failed")
    return curve


CURVES = {"toy": toy_curve, "standard": p256_curve, "p256": p256_curve}


def get_curve(name: str) -> CurveParams:
    try:
        return CURVES[name]()
    except KeyError:
        raise ValueError(
            f"unknown curve {name!r}; choose one of {sorted(CURVES)}"
        ) from None


# ---------------------------------------------------------------------------
# canonical encodings
# ---------------------------------------------------------------------------

def encode_scalar(k: int, curve: CurveParams) -> bytes:
    """Fixed-width big-endian scalar encoding sized to the group order."""
    if not 0 <= k < curve.n:
        raise ValueError(f"scalar {k} outside [0, {curve.n})")
    return k.to_bytes(curve.scalar_width, "big")


def encode_point(point: GroupPoint, curve: CurveParams) -> bytes:
    """Wire form: 0x00 for the identity, else 0x04 plus two fixed-width
    big-endian coordinates."""
    if point.is_infinity:
        return b"\x00"
    _require_on_curve(point, curve)
    w = curve.field_width
    return b"\x04" + point.x.to_bytes(w, "big") + point.y.to_bytes(w, "big")


def decode_point(data: bytes, curve: CurveParams) -> GroupPoint:
    if data == b"\x00":
        return INFINITY
    w = curve.field_width
    if len(data) != 1 + 2 * w or data[0] != 0x04:
        raise PointValidationError("malformed point encoding")
    point = GroupPoint(
        int.from_bytes(data[1 : 1 + w], "big"),
        int.from_bytes(data[1 + w :], "big"),
    )
    _require_on_curve(point, curve)
    return point


def _coords(point: GroupPoint, curve: CurveParams) -> bytes:
    if point.is_infinity:
        raise PointValidationError("the identity has no canonical encoding")
    w = curve.field_width
    return point.x.to_bytes(w, "big") + point.y.to_bytes(w, "big")


def kdf_key(point: GroupPoint, curve: CurveParams, alg: str = DEFAULT_HASH) -> bytes:
    """Symmetric key derived from an EC point (domain tag 0x01)."""
    data = _KDF_PREFIX + _coords(point, curve)
    _bump("derivation_hashes")
    return _hash_raw(data, alg)


def p2b(point: GroupPoint, curve: CurveParams, alg: str = DEFAULT_HASH) -> bytes:
    """32-byte point digest used as an XOR/hash operand (domain tag 0x02);
    deliberately unlinkable to the key derived from the same point."""
    data = _P2B_PREFIX + _coords(point, curve)
    _bump("derivation_hashes")
    return _hash_raw(data, alg)


# ---------------------------------------------------------------------------
# authenticated encryption
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ciphertext:
    """AES-256-GCM output under a direction-fixed nonce tag.

    Wire form: 1 nonce-tag byte, 2-byte big-endian length, ciphertext with
    the 16-byte authentication tag appended.
    """

    nonce_tag: int
    blob: bytes

    def encode(self) -> bytes:
        if len(self.blob) > 0xFFFF:
            raise ValueError("ciphertext too long for wire form")
        return bytes([self.nonce_tag]) + len(self.blob).to_bytes(2, "big") + self.blob

    @classmethod
    def decode(cls, data: bytes) -> "Ciphertext":
        if len(data) < 3:
            raise ValueError("truncated ciphertext")
        n = int.from_bytes(data[1:3], "big")
        if len(data) != 3 + n:
            raise ValueError("ciphertext length mismatch")
        return cls(nonce_tag=data[0], blob=data[3:])


def _nonce(tag: int) -> bytes:
    if not 0 <= tag <= 0xFF:
        raise ValueError("nonce tag must be one byte")
    return bytes([tag]) * 12


def ae_seal(key: bytes, nonce_tag: int, plaintext: bytes) -> Ciphertext:
    """Authenticated encryption; one symmetric op."""
    if len(key) != DIGEST_LEN:
        raise ValueError("AE key must be 32 bytes")
    _bump("sym_ops")
    blob = AESGCM(key).encrypt(_nonce(nonce_tag), plaintext, b"")
    return Ciphertext(nonce_tag=nonce_tag, blob=blob)


def ae_open(key: bytes, ct: Ciphertext, expected_tag: int | None = None) -> bytes:
    """Authenticated decryption; one symmetric op.  ``expected_tag`` pins the
    traffic direction so a ciphertext reflected back at its sender fails."""
    if len(key) != DIGEST_LEN:
        raise ValueError("AE key must be 32 bytes")
    _bump("sym_ops")
    if expected_tag is not None and ct.nonce_tag != expected_tag:
        raise DecryptionError("nonce tag does not match expected direction")
    try:
        return AESGCM(key).decrypt(_nonce(ct.nonce_tag), ct.blob, b"")
    except InvalidTag as exc:
        raise DecryptionError("authentication failed") from exc
