"""The three protocol roles (user with smartcard, gateway, sensor) and their
four phases: user registration, sensor registration, password change/update,
and the four-message authentication and key-exchange handshake.

Every step is a deterministic function of (state, message, local time,
randomness source).  A step either returns its outputs or raises
:class:`Rejected` with a distinct reason; rejected steps leave gateway and
sensor state untouched except for the gateway's replay cache, which only
ever gains entries for accepted requests.

Handshake overview (all hash inputs are length-framed; enc() is the
fixed-width scalar encoding):

  user     login: UAP = h(PW, BMP, q); B* = h(ID, UAP, z); check D = h(C, B*, z)
  user  -> gw    M1: e1 = a*G, e3 = seal(kdf(a*X), B*, SID, T1)
  gw    -> sensor M2: SP1 = e4 xor AS, SP2 = h(e4, SID, T2), T2, e5 = c*G
                  where e2 = S*e1, e4 = b xor p2b(e2), AS = h(SID, enc(S))
  sensor -> gw    M3: e6 = d*G, GP = h(SK, AS, T3), T3
                  where SK = h(e4, p2b(d*e5))
  gw    -> user  M4: e7 = seal(kdf(e2), B, SK xor z, T4)
                  gateway's SK = h(e4, p2b(c*e6)); user's SK = SKU xor z

T1 and T4 never travel in the clear; T2 and T3 do, but are bound under SP2
and GP.  Freshness uses an absolute-difference window on every hop.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum

from .primitives import (
    TAG_FROM_GATEWAY,
    TAG_TO_GATEWAY,
    Ciphertext,
    CurveParams,
    DecryptionError,
    DIGEST_LEN,
    DEFAULT_HASH,
    GroupPoint,
    ae_open,
    ae_seal,
    encode_scalar,
    frame,
    hash_digest,
    kdf_key,
    p2b,
    scalar_mult,
    ts_bytes,
    ts_from_bytes,
    unframe,
    xor_bytes,
)

DEFAULT_FRESHNESS_MS = 2_000
DEFAULT_GRACE_MS = 24 * 3600 * 1000

ZERO_BMP = b"\x00" * DIGEST_LEN


class RejectReason(Enum):
    """Why a party refused a message; each check has its own reason."""

    MALFORMED = "malformed message"
    DECRYPT_FAILED = "authenticated decryption failed"
    LOGIN_FAILED = "card check value mismatch"
    STALE_T1 = "request timestamp outside freshness window"
    REPLAYED = "request already seen inside freshness window"
    UNKNOWN_B = "no user record for presented verifier"
    UNKNOWN_SID = "sensor identity not registered"
    SP2_MISMATCH = "gateway authentication value mismatch"
    STALE_T2 = "relay timestamp outside freshness window"
    GP_MISMATCH = "sensor authentication value mismatch"
    STALE_T3 = "sensor timestamp outside freshness window"
    STALE_T4 = "response timestamp outside freshness window"
    B_MISMATCH = "returned verifier differs from the one sent"
    UNKNOWN_USER = "no record for presented user identity"


class Rejected(Exception):
    def __init__(self, reason: RejectReason, detail: str = "") -> None:
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason.value}" + (f": {detail}" if detail else ""))


class RegistrationError(Exception):
    """Registration precondition violated (duplicate ID, unprovisioned SID)."""


class SessionConsumed(Exception):
    """A single-use session context was stepped twice."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Credentials:
    user_id: bytes
    password: bytes
    bmp: bytes | None = None  # hashed biometric, optional

    def bmp_field(self) -> bytes:
        """Biometric digest, or the fixed placeholder keeping frame layout."""
        if self.bmp is None:
            return ZERO_BMP
        if len(self.bmp) != DIGEST_LEN:
            raise ValueError("biometric parameter must be a 32-byte digest")
        return self.bmp


@dataclass
class SmartCard:
    """User-side token: C (gateway proof), D (login check value), z (user's
    share of the gateway record), q (salt of the password digest)."""

    c: bytes
    d: bytes
    z: bytes
    q: bytes
    hash_alg: str = DEFAULT_HASH


@dataclass
class UserRecord:
    user_id: bytes
    b: bytes
    z: bytes
    pending_b: bytes | None = None
    pending_deadline: int | None = None


@dataclass
class SensorState:
    sid: bytes
    as_key: bytes  # AS = h(SID, enc(S)), installed at registration


class GatewayState:
    """Long-term gateway key pair plus user and sensor records.

    User records are additionally indexed by their verifier B because the
    handshake request carries no user identity.  A password change parks the
    replacement verifier as ``pending_b``; the old one keeps working until
    the new one is first used or the grace deadline passes.
    """

    def __init__(
        self,
        curve: CurveParams,
        private_key: int,
        hash_alg: str = DEFAULT_HASH,
        freshness_ms: int = DEFAULT_FRESHNESS_MS,
        grace_ms: int = DEFAULT_GRACE_MS,
        replay_cache_enabled: bool = True,
    ) -> None:
        if not 1 <= private_key < curve.n:
            raise ValueError("gateway private key outside [1, n)")
        self.curve = curve
        self.hash_alg = hash_alg
        self.s = private_key
        self.x = scalar_mult(private_key, curve.g, curve)
        self.freshness_ms = freshness_ms
        self.grace_ms = grace_ms
        self.replay_cache_enabled = replay_cache_enabled
        self.users: dict[bytes, UserRecord] = {}
        self.b_index: dict[bytes, bytes] = {}
        self.sensors: dict[bytes, bytes] = {}
        self.provisioned_sids: set[bytes] = set()
        self.replay_cache: set[tuple[bytes, int]] = set()

    @classmethod
    def generate(cls, curve: CurveParams, rng: random.Random, **kw) -> "GatewayState":
        return cls(curve, rng.randrange(1, curve.n), **kw)

    # -- record upkeep ------------------------------------------------------

    def _promote(self, record: UserRecord) -> None:
        if record.pending_b is None:
            return
        del self.b_index[record.b]
        record.b = record.pending_b
        record.pending_b = None
        record.pending_deadline = None

    def refresh(self, now_ms: int) -> None:
        """Promote pending verifiers past their grace deadline and drop
        replay-cache entries that have aged out of the freshness window."""
        for record in self.users.values():
            if record.pending_deadline is not None and now_ms >= record.pending_deadline:
                self._promote(record)
        horizon = now_ms - self.freshness_ms
        self.replay_cache = {(b, t1) for (b, t1) in self.replay_cache if t1 >= horizon}

    def _index_b(self, b: bytes, user_id: bytes) -> None:
        owner = self.b_index.get(b)
        if owner is not None and owner != user_id:
            raise RegistrationError("verifier collision across user records")
        self.b_index[b] = user_id

    def lookup_by_b(self, b: bytes) -> tuple[UserRecord, bool] | None:
        """Record owning verifier ``b`` and whether it matched the pending one."""
        user_id = self.b_index.get(b)
        if user_id is None:
            return None
        record = self.users[user_id]
        return record, record.pending_b == b


# ---------------------------------------------------------------------------
# registration phase
# ---------------------------------------------------------------------------

def make_uap(password: bytes, bmp: bytes, q: bytes, alg: str = DEFAULT_HASH) -> bytes:
    """User authentication parameter: h(PW, BMP, q)."""
    if len(bmp) != DIGEST_LEN or len(q) != DIGEST_LEN:
        raise ValueError("bmp and q must be 32 bytes")
    return hash_digest(frame(password, bmp, q), alg)


def gw_register_user(gw: GatewayState, user_id: bytes, uap: bytes, rng: random.Random) -> SmartCard:
    """Register a user from (ID, UAP) received over the secure channel.

    The gateway stores {ID, B, z} and returns the card content {C, D, z};
    the user seals their own q onto the card afterwards.
    """
    if user_id in gw.users:
        raise RegistrationError(f"user id {user_id!r} already registered")
    alg = gw.hash_alg
    z = bytes(rng.randbytes(DIGEST_LEN))
    b = hash_digest(frame(user_id, uap, z), alg)
    c = hash_digest(frame(user_id, encode_scalar(gw.s, gw.curve)), alg)
    d = hash_digest(frame(c, b, z), alg)
    gw._index_b(b, user_id)
    gw.users[user_id] = UserRecord(user_id=user_id, b=b, z=z)
    return SmartCard(c=c, d=d, z=z, q=b"", hash_alg=alg)


def enroll_user(
    gw: GatewayState, creds: Credentials, rng: random.Random
) -> SmartCard:
    """Full user registration over the (modelled-secure) channel: the user
    samples q, derives UAP, the gateway issues the card, the user adds q."""
    q = bytes(rng.randbytes(DIGEST_LEN))
    uap = make_uap(creds.password, creds.bmp_field(), q, gw.hash_alg)
    card = gw_register_user(gw, creds.user_id, uap, rng)
    card.q = q
    return card


def provision_sensor(gw: GatewayState, sid: bytes) -> None:
    """Add a sensor identity to the gateway's list of deployable sensors."""
    gw.provisioned_sids.add(sid)


def gw_register_sensor(gw: GatewayState, sid: bytes) -> bytes:
    """Issue AS = h(SID, enc(S)) for a provisioned sensor; idempotent."""
    if sid not in gw.provisioned_sids:
        raise RegistrationError(f"sensor id {sid!r} is not provisioned")
    as_key = hash_digest(frame(sid, encode_scalar(gw.s, gw.curve)), gw.hash_alg)
    gw.sensors[sid] = as_key
    return as_key


def enroll_sensor(gw: GatewayState, sid: bytes) -> SensorState:
    provision_sensor(gw, sid)
    return SensorState(sid=sid, as_key=gw_register_sensor(gw, sid))


# ---------------------------------------------------------------------------
# messages and session contexts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class M1:
    e1: GroupPoint
    e3: Ciphertext


@dataclass(frozen=True)
class M2:
    sp1: bytes
    sp2: bytes
    t2: int
    e5: GroupPoint


@dataclass(frozen=True)
class M3:
    e6: GroupPoint
    gp: bytes
    t3: int


@dataclass(frozen=True)
class M4:
    e7: Ciphertext


@dataclass(frozen=True)
class PC1:
    e1: GroupPoint
    e3: Ciphertext


@dataclass(frozen=True)
class PC2:
    ct: Ciphertext


@dataclass
class UserSession:
    a: int
    e2: GroupPoint
    b_star: bytes
    sid: bytes
    t1: int
    card: SmartCard
    curve: CurveParams
    consumed: bool = False


@dataclass
class GatewaySession:
    e2: GroupPoint
    e4: bytes
    c: int
    user_id: bytes
    b: bytes
    z: bytes
    sid: bytes
    as_key: bytes
    t2: int
    curve: CurveParams
    consumed: bool = False


@dataclass
class PcSession:
    a: int
    e2: GroupPoint
    user_id: bytes
    uap_new: bytes
    q_new: bytes
    card: SmartCard
    curve: CurveParams
    consumed: bool = False


def _consume(ctx) -> None:
    if ctx.consumed:
        raise SessionConsumed("session context already used")
    ctx.consumed = True


# ---------------------------------------------------------------------------
# authentication and key exchange
# ---------------------------------------------------------------------------

def user_login(card: SmartCard, creds: Credentials) -> bytes:
    """Local three-factor check; returns B* on success.

    Recomputes UAP from the typed password and biometric plus the card's q,
    rebuilds B* and D*, and accepts only if D* equals the card's D.
    """
    alg = card.hash_alg
    uap = make_uap(creds.password, creds.bmp_field(), card.q, alg)
    b_star = hash_digest(frame(creds.user_id, uap, card.z), alg)
    d_star = hash_digest(frame(card.c, b_star, card.z), alg)
    if d_star != card.d:
        raise Rejected(RejectReason.LOGIN_FAILED)
    return b_star


def user_auth_init(
    card: SmartCard,
    b_star: bytes,
    sid: bytes,
    t1: int,
    gateway_public: GroupPoint,
    curve: CurveParams,
    rng: random.Random,
) -> tuple[M1, UserSession]:
    """Build the handshake request after a successful login.

    Samples a, computes e1 = a*G and e2 = a*X, and seals (B*, SID, T1) under
    the key derived from e2 so the timestamp never travels in the clear.
    """
    alg = card.hash_alg
    a = rng.randrange(1, curve.n)
    e1 = scalar_mult(a, curve.g, curve)
    e2 = scalar_mult(a, gateway_public, curve)
    e3 = ae_seal(kdf_key(e2, curve, alg), TAG_TO_GATEWAY, frame(b_star, sid, ts_bytes(t1)))
    ctx = UserSession(a=a, e2=e2, b_star=b_star, sid=sid, t1=t1, card=card, curve=curve)
    return M1(e1=e1, e3=e3), ctx


def _parse_fields(payload: bytes, spec: list[int | None]) -> list[bytes]:
    # spec entry = exact length or None for free-form; raises on mismatch
    try:
        parts = unframe(payload)
    except ValueError as exc:
        raise Rejected(RejectReason.MALFORMED, str(exc)) from exc
    if len(parts) != len(spec):
        raise Rejected(RejectReason.MALFORMED, "unexpected field count")
    for part, want in zip(parts, spec):
        if want is not None and len(part) != want:
            raise Rejected(RejectReason.MALFORMED, "unexpected field length")
    return parts


def gw_on_m1(gw: GatewayState, m1: M1, t2: int, rng: random.Random) -> tuple[M2, GatewaySession]:
    """Gateway processing of the handshake request.

    Order of checks: recover e2 = S*e1 and open e3 (any garbage dies here
    after exactly one EC mult and one symmetric open), then timestamp
    freshness, then the replay cache, then the B and SID lookups.  Only a
    fully accepted request mutates state (replay cache, pending promotion).
    """
    alg = gw.hash_alg
    curve = gw.curve
    e2 = scalar_mult(gw.s, m1.e1, curve)
    try:
        payload = ae_open(kdf_key(e2, curve, alg), m1.e3, TAG_TO_GATEWAY)
    except DecryptionError as exc:
        raise Rejected(RejectReason.DECRYPT_FAILED, "dropped") from exc
    b, sid, t1_raw = _parse_fields(payload, [DIGEST_LEN, None, 8])
    t1 = ts_from_bytes(t1_raw)

    gw.refresh(t2)
    if abs(t2 - t1) > gw.freshness_ms:
        raise Rejected(RejectReason.STALE_T1, f"|{t2} - {t1}| > {gw.freshness_ms}")
    if gw.replay_cache_enabled and (b, t1) in gw.replay_cache:
        raise Rejected(RejectReason.REPLAYED)
    found = gw.lookup_by_b(b)
    if found is None:
        raise Rejected(RejectReason.UNKNOWN_B)
    record, via_pending = found
    if sid not in gw.sensors:
        raise Rejected(RejectReason.UNKNOWN_SID)

    # request accepted: replay-cache entry plus pending promotion on first use
    if gw.replay_cache_enabled:
        gw.replay_cache.add((b, t1))
    if via_pending:
        gw._promote(record)

    # the sensor authenticator is recomputed from SID and the private key,
    # not read back from the registration record
    as_key = hash_digest(frame(sid, encode_scalar(gw.s, curve)), alg)
    b_rand = bytes(rng.randbytes(DIGEST_LEN))
    c = rng.randrange(1, curve.n)
    e4 = xor_bytes(b_rand, p2b(e2, curve, alg))
    e5 = scalar_mult(c, curve.g, curve)
    sp1 = xor_bytes(e4, as_key)
    sp2 = hash_digest(frame(e4, sid, ts_bytes(t2)), alg)
    ctx = GatewaySession(
        e2=e2, e4=e4, c=c, user_id=record.user_id, b=record.b, z=record.z,
        sid=sid, as_key=as_key, t2=t2, curve=curve,
    )
    return M2(sp1=sp1, sp2=sp2, t2=t2, e5=e5), ctx


def sensor_on_m2(
    sensor: SensorState,
    m2: M2,
    t3: int,
    rng: random.Random,
    curve: CurveParams,
    freshness_ms: int = DEFAULT_FRESHNESS_MS,
    alg: str = DEFAULT_HASH,
) -> tuple[M3, bytes]:
    """Sensor processing of the relayed request; derives the session key.

    Recovers e4 = SP1 xor AS, authenticates the gateway via SP2 (one XOR and
    one hash before anything expensive), checks freshness, then commits:
    SK = h(e4, p2b(d*e5)), e6 = d*G, GP = h(SK, AS, T3).
    """
    if len(m2.sp1) != DIGEST_LEN or len(m2.sp2) != DIGEST_LEN:
        raise Rejected(RejectReason.MALFORMED, "bad digest length")
    e4 = xor_bytes(m2.sp1, sensor.as_key)
    sp2 = hash_digest(frame(e4, sensor.sid, ts_bytes(m2.t2)), alg)
    if sp2 != m2.sp2:
        raise Rejected(RejectReason.SP2_MISMATCH)
    if abs(t3 - m2.t2) > freshness_ms:
        raise Rejected(RejectReason.STALE_T2, f"|{t3} - {m2.t2}| > {freshness_ms}")
    d = rng.randrange(1, curve.n)
    shared = scalar_mult(d, m2.e5, curve)
    sk = hash_digest(frame(e4, p2b(shared, curve, alg)), alg)
    e6 = scalar_mult(d, curve.g, curve)
    gp = hash_digest(frame(sk, sensor.as_key, ts_bytes(t3)), alg)
    return M3(e6=e6, gp=gp, t3=t3), sk


def gw_on_m3(ctx: GatewaySession, m3: M3, t4: int, freshness_ms: int | None = None,
             alg: str = DEFAULT_HASH) -> tuple[M4, bytes]:
    """Gateway processing of the sensor's reply.

    Rebuilds SK = h(e4, p2b(c*e6)), authenticates the sensor via GP, checks
    freshness, then blinds the key for the user: e7 seals (B, SK xor z, T4).
    """
    _consume(ctx)
    curve = ctx.curve
    window = DEFAULT_FRESHNESS_MS if freshness_ms is None else freshness_ms
    if len(m3.gp) != DIGEST_LEN:
        raise Rejected(RejectReason.MALFORMED, "bad digest length")
    shared = scalar_mult(ctx.c, m3.e6, curve)
    sk = hash_digest(frame(ctx.e4, p2b(shared, curve, alg)), alg)
    gp = hash_digest(frame(sk, ctx.as_key, ts_bytes(m3.t3)), alg)
    if gp != m3.gp:
        raise Rejected(RejectReason.GP_MISMATCH)
    if abs(t4 - m3.t3) > window:
        raise Rejected(RejectReason.STALE_T3, f"|{t4} - {m3.t3}| > {window}")
    sku = xor_bytes(sk, ctx.z)
    e7 = ae_seal(
        kdf_key(ctx.e2, curve, alg), TAG_FROM_GATEWAY, frame(ctx.b, sku, ts_bytes(t4))
    )
    return M4(e7=e7), sk


def user_on_m4(ctx: UserSession, m4: M4, t5: int,
               freshness_ms: int = DEFAULT_FRESHNESS_MS) -> bytes:
    """User processing of the gateway's response; returns the session key.

    Opens e7 with the same key that protected the request, checks freshness,
    authenticates the gateway by comparing the returned B with the B* sent,
    and unblinds SK = SKU xor z with the card's z.
    """
    _consume(ctx)
    alg = ctx.card.hash_alg
    try:
        payload = ae_open(kdf_key(ctx.e2, ctx.curve, alg), m4.e7, TAG_FROM_GATEWAY)
    except DecryptionError as exc:
        raise Rejected(RejectReason.DECRYPT_FAILED, "dropped") from exc
    b, sku, t4_raw = _parse_fields(payload, [DIGEST_LEN, DIGEST_LEN, 8])
    t4 = ts_from_bytes(t4_raw)
    if abs(t5 - t4) > freshness_ms:
        raise Rejected(RejectReason.STALE_T4, f"|{t5} - {t4}| > {freshness_ms}")
    if b != ctx.b_star:
        raise Rejected(RejectReason.B_MISMATCH)
    return xor_bytes(sku, ctx.card.z)


# ---------------------------------------------------------------------------
# password change / update
# ---------------------------------------------------------------------------

def user_pc_request(
    card: SmartCard,
    creds: Credentials,
    new_password: bytes,
    t1: int,
    gateway_public: GroupPoint,
    curve: CurveParams,
    rng: random.Random,
) -> tuple[PC1, PcSession]:
    """Start a password change: login with the old credentials, derive the
    replacement UAP under a fresh q, and seal (ID, B*, UAP_new, T1)."""
    b_star = user_login(card, creds)  # no message leaves on failure
    alg = card.hash_alg
    q_new = bytes(rng.randbytes(DIGEST_LEN))
    uap_new = make_uap(new_password, creds.bmp_field(), q_new, alg)
    a = rng.randrange(1, curve.n)
    e1 = scalar_mult(a, curve.g, curve)
    e2 = scalar_mult(a, gateway_public, curve)
    e3 = ae_seal(
        kdf_key(e2, curve, alg),
        TAG_TO_GATEWAY,
        frame(creds.user_id, b_star, uap_new, ts_bytes(t1)),
    )
    ctx = PcSession(
        a=a, e2=e2, user_id=creds.user_id, uap_new=uap_new, q_new=q_new,
        card=card, curve=curve,
    )
    return PC1(e1=e1, e3=e3), ctx


def gw_on_pc(gw: GatewayState, pc1: PC1, t2: int) -> PC2:
    """Gateway side of the password change.

    Verifies freshness and the presented B* against the stored record, then
    parks B_new = h(ID, UAP_new, z) as the pending verifier with a grace
    deadline; the confirmation returns B_new sealed under the session key.
    """
    alg = gw.hash_alg
    curve = gw.curve
    e2 = scalar_mult(gw.s, pc1.e1, curve)
    try:
        payload = ae_open(kdf_key(e2, curve, alg), pc1.e3, TAG_TO_GATEWAY)
    except DecryptionError as exc:
        raise Rejected(RejectReason.DECRYPT_FAILED, "dropped") from exc
    user_id, b_star, uap_new, t1_raw = _parse_fields(
        payload, [None, DIGEST_LEN, DIGEST_LEN, 8]
    )
    t1 = ts_from_bytes(t1_raw)
    gw.refresh(t2)
    if abs(t2 - t1) > gw.freshness_ms:
        raise Rejected(RejectReason.STALE_T1, f"|{t2} - {t1}| > {gw.freshness_ms}")
    record = gw.users.get(user_id)
    if record is None:
        raise Rejected(RejectReason.UNKNOWN_USER)
    if b_star != record.b and b_star != record.pending_b:
        raise Rejected(RejectReason.B_MISMATCH)

    b_new = hash_digest(frame(user_id, uap_new, record.z), alg)
    if record.pending_b is not None:
        del gw.b_index[record.pending_b]
    gw._index_b(b_new, user_id)
    record.pending_b = b_new
    record.pending_deadline = t2 + gw.grace_ms
    ct = ae_seal(kdf_key(e2, curve, alg), TAG_FROM_GATEWAY, frame(b_new, ts_bytes(t2)))
    return PC2(ct=ct)


def user_pc_confirm(ctx: PcSession, pc2: PC2, t3: int,
                    freshness_ms: int = DEFAULT_FRESHNESS_MS) -> SmartCard:
    """Finish a password change: authenticate the gateway by checking the
    returned verifier equals the locally recomputed B_new, then update the
    card in place (q and D change; C and z never do)."""
    _consume(ctx)
    card = ctx.card
    alg = card.hash_alg
    try:
        payload = ae_open(kdf_key(ctx.e2, ctx.curve, alg), pc2.ct, TAG_FROM_GATEWAY)
    except DecryptionError as exc:
        raise Rejected(RejectReason.DECRYPT_FAILED, "card unchanged") from exc
    b_new, t2_raw = _parse_fields(payload, [DIGEST_LEN, 8])
    t2 = ts_from_bytes(t2_raw)
    if abs(t3 - t2) > freshness_ms:
        raise Rejected(RejectReason.STALE_T2, "card unchanged")
    expected = hash_digest(frame(ctx.user_id, ctx.uap_new, card.z), alg)
    if b_new != expected:
        raise Rejected(RejectReason.B_MISMATCH, "card unchanged")
    card.q = ctx.q_new
    card.d = hash_digest(frame(card.c, b_new, card.z), alg)
    return card


# ---------------------------------------------------------------------------
# snapshots (for state-free rejection checks and persistence)
# ---------------------------------------------------------------------------

def gateway_snapshot(gw: GatewayState) -> dict:
    """Deep comparable snapshot of everything but the replay cache."""
    return {
        "s": gw.s,
        "x": gw.x,
        "users": {
            uid: replace(rec) for uid, rec in sorted(gw.users.items())
        },
        "b_index": dict(gw.b_index),
        "sensors": dict(gw.sensors),
        "provisioned": set(gw.provisioned_sids),
    }
