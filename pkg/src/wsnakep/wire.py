"""Byte-exact wire and file formats.

Messages: 1 type byte, then each field as a 2-byte big-endian length plus
bytes, in declared field order.  Points use the tagged encoding from
:mod:`wsnakep.primitives`, digests are raw 32 bytes, timestamps 8-byte
big-endian milliseconds, ciphertexts their own tagged encoding.

Files are magic-prefixed TLV streams (1 type byte, 2-byte big-endian
length, value) written in canonical order so an unmodified load/store
round-trip is bit-exact.
"""

from __future__ import annotations

import random
from typing import Union

from .primitives import (
    Ciphertext,
    CurveParams,
    DIGEST_LEN,
    GroupPoint,
    PointValidationError,
    decode_point,
    encode_point,
    encode_scalar,
    frame,
    get_curve,
    ts_bytes,
    ts_from_bytes,
    unframe,
)
from .protocol import M1, M2, M3, M4, PC1, PC2, GatewayState, SmartCard, UserRecord

Message = Union[M1, M2, M3, M4, PC1, PC2]

MSG_M1 = 0x01
MSG_M2 = 0x02
MSG_M3 = 0x03
MSG_M4 = 0x04
MSG_PC1 = 0x11
MSG_PC2 = 0x12

TYPE_BY_CLASS = {M1: MSG_M1, M2: MSG_M2, M3: MSG_M3, M4: MSG_M4, PC1: MSG_PC1, PC2: MSG_PC2}
NAME_BY_TYPE = {MSG_M1: "M1", MSG_M2: "M2", MSG_M3: "M3", MSG_M4: "M4",
                MSG_PC1: "PC1", MSG_PC2: "PC2"}

CARD_MAGIC = b"WSNCARD1"
DB_MAGIC = b"WSNAKEP1"

# gateway database record types
REC_HEADER = 0x00
REC_USER = 0x01
REC_SENSOR = 0x02
REC_PENDING = 0x03
REC_PROVISIONED = 0x04


class CodecError(Exception):
    """Bytes do not parse as a well-formed message or file."""


def encode_message(msg: Message, curve: CurveParams) -> bytes:
    try:
        mtype = TYPE_BY_CLASS[type(msg)]
    except KeyError:
        raise CodecError(f"not a wire message: {type(msg).__name__}") from None
    if isinstance(msg, (M1, PC1)):
        fields = [encode_point(msg.e1, curve), msg.e3.encode()]
    elif isinstance(msg, M2):
        fields = [msg.sp1, msg.sp2, ts_bytes(msg.t2), encode_point(msg.e5, curve)]
    elif isinstance(msg, M3):
        fields = [encode_point(msg.e6, curve), msg.gp, ts_bytes(msg.t3)]
    elif isinstance(msg, M4):
        fields = [msg.e7.encode()]
    else:
        fields = [msg.ct.encode()]
    return bytes([mtype]) + frame(*fields)


def _fields(data: bytes, count: int) -> list[bytes]:
    try:
        parts = unframe(data)
    except ValueError as exc:
        raise CodecError(str(exc)) from exc
    if len(parts) != count:
        raise CodecError(f"expected {count} fields, found {len(parts)}")
    return parts


def _point(data: bytes, curve: CurveParams) -> GroupPoint:
    try:
        point = decode_point(data, curve)
    except PointValidationError as exc:
        raise CodecError(str(exc)) from exc
    if point.is_infinity:
        raise CodecError("identity point not allowed on the wire")
    return point


def _digest(data: bytes) -> bytes:
    if len(data) != DIGEST_LEN:
        raise CodecError("digest field must be 32 bytes")
    return data


def _ts(data: bytes) -> int:
    try:
        return ts_from_bytes(data)
    except ValueError as exc:
        raise CodecError(str(exc)) from exc


def _ciphertext(data: bytes) -> Ciphertext:
    try:
        return Ciphertext.decode(data)
    except ValueError as exc:
        raise CodecError(str(exc)) from exc


def decode_message(wire: bytes, curve: CurveParams) -> Message:
    """Strict decode: unknown types, bad lengths, off-curve or identity
    points all raise :class:`CodecError` before any crypto runs."""
    if not wire:
        raise CodecError("empty message")
    mtype, body = wire[0], wire[1:]
    if mtype in (MSG_M1, MSG_PC1):
        e1_raw, e3_raw = _fields(body, 2)
        cls = M1 if mtype == MSG_M1 else PC1
        return cls(e1=_point(e1_raw, curve), e3=_ciphertext(e3_raw))
    if mtype == MSG_M2:
        sp1, sp2, t2_raw, e5_raw = _fields(body, 4)
        return M2(sp1=_digest(sp1), sp2=_digest(sp2), t2=_ts(t2_raw),
                  e5=_point(e5_raw, curve))
    if mtype == MSG_M3:
        e6_raw, gp, t3_raw = _fields(body, 3)
        return M3(e6=_point(e6_raw, curve), gp=_digest(gp), t3=_ts(t3_raw))
    if mtype == MSG_M4:
        (e7_raw,) = _fields(body, 1)
        return M4(e7=_ciphertext(e7_raw))
    if mtype == MSG_PC2:
        (ct_raw,) = _fields(body, 1)
        return PC2(ct=_ciphertext(ct_raw))
    raise CodecError(f"unknown message type 0x{mtype:02x}")


def describe_message(wire: bytes, curve: CurveParams) -> dict:
    """Decoded view for transcripts; falls back to raw hex for junk bytes."""
    try:
        msg = decode_message(wire, curve)
    except CodecError as exc:
        return {"type": "raw", "hex": wire.hex(), "error": str(exc)}
    view: dict = {"type": NAME_BY_TYPE[wire[0]]}
    if isinstance(msg, (M1, PC1)):
        view["e1"] = encode_point(msg.e1, curve).hex()
        view["e3"] = msg.e3.encode().hex()
    elif isinstance(msg, M2):
        view.update(sp1=msg.sp1.hex(), sp2=msg.sp2.hex(), t2=msg.t2,
                    e5=encode_point(msg.e5, curve).hex())
    elif isinstance(msg, M3):
        view.update(e6=encode_point(msg.e6, curve).hex(), gp=msg.gp.hex(), t3=msg.t3)
    elif isinstance(msg, M4):
        view["e7"] = msg.e7.encode().hex()
    else:
        view["ct"] = msg.ct.encode().hex()
    return view


# ---------------------------------------------------------------------------
# TLV files
# ---------------------------------------------------------------------------

def _tlv(rtype: int, value: bytes) -> bytes:
    if len(value) > 0xFFFF:
        raise CodecError("TLV value too long")
    return bytes([rtype]) + len(value).to_bytes(2, "big") + value


def _parse_tlvs(data: bytes) -> list[tuple[int, bytes]]:
    out = []
    i = 0
    while i < len(data):
        if i + 3 > len(data):
            raise CodecError("truncated TLV header")
        rtype = data[i]
        n = int.from_bytes(data[i + 1 : i + 3], "big")
        i += 3
        if i + n > len(data):
            raise CodecError("truncated TLV value")
        out.append((rtype, data[i : i + n]))
        i += n
    return out


# card files -----------------------------------------------------------------

_CARD_FIELDS = {0x01: "c", 0x02: "d", 0x03: "z", 0x04: "q"}


def encode_card(card: SmartCard) -> bytes:
    body = b"".join(
        _tlv(rtype, getattr(card, name)) for rtype, name in sorted(_CARD_FIELDS.items())
    )
    body += _tlv(0x05, card.hash_alg.encode())
    return CARD_MAGIC + body


def decode_card(data: bytes) -> SmartCard:
    if not data.startswith(CARD_MAGIC):
        raise CodecError("not a card file")
    values: dict[str, bytes] = {}
    hash_alg = None
    for rtype, value in _parse_tlvs(data[len(CARD_MAGIC):]):
        if rtype in _CARD_FIELDS:
            values[_CARD_FIELDS[rtype]] = value
        elif rtype == 0x05:
            hash_alg = value.decode()
        else:
            raise CodecError(f"unknown card record 0x{rtype:02x}")
    missing = set(_CARD_FIELDS.values()) - set(values)
    if missing or hash_alg is None:
        raise CodecError("incomplete card file")
    return SmartCard(hash_alg=hash_alg, **values)


# gateway database -------------------------------------------------------------

def encode_gateway(gw: GatewayState) -> bytes:
    """Canonical serialization: header first, then records sorted by key."""
    header = frame(
        gw.curve.name.encode(),
        gw.hash_alg.encode(),
        encode_scalar(gw.s, gw.curve),
    )
    chunks = [_tlv(REC_HEADER, header)]
    for uid in sorted(gw.users):
        rec = gw.users[uid]
        chunks.append(_tlv(REC_USER, frame(rec.user_id, rec.b, rec.z)))
        if rec.pending_b is not None:
            chunks.append(
                _tlv(REC_PENDING, frame(rec.user_id, rec.pending_b,
                                        ts_bytes(rec.pending_deadline)))
            )
    for sid in sorted(gw.sensors):
        chunks.append(_tlv(REC_SENSOR, frame(sid, gw.sensors[sid])))
    for sid in sorted(gw.provisioned_sids - set(gw.sensors)):
        chunks.append(_tlv(REC_PROVISIONED, frame(sid)))
    return DB_MAGIC + b"".join(chunks)


def decode_gateway(data: bytes, **state_kw) -> GatewayState:
    """Rebuild a gateway from its database file.  Keyword arguments override
    runtime policy (freshness window, grace period, replay cache toggle)."""
    if not data.startswith(DB_MAGIC):
        raise CodecError("not a gateway database file")
    tlvs = _parse_tlvs(data[len(DB_MAGIC):])
    if not tlvs or tlvs[0][0] != REC_HEADER:
        raise CodecError("gateway database missing header record")
    try:
        curve_name, alg_raw, s_raw = unframe(tlvs[0][1])
    except ValueError as exc:
        raise CodecError(str(exc)) from exc
    curve = get_curve(curve_name.decode())
    gw = GatewayState(
        curve=curve,
        private_key=int.from_bytes(s_raw, "big"),
        hash_alg=alg_raw.decode(),
        **state_kw,
    )
    for rtype, value in tlvs[1:]:
        try:
            parts = unframe(value)
        except ValueError as exc:
            raise CodecError(str(exc)) from exc
        if rtype == REC_USER:
            user_id, b, z = parts
            gw.users[user_id] = UserRecord(user_id=user_id, b=b, z=z)
            gw.b_index[b] = user_id
        elif rtype == REC_PENDING:
            user_id, pending_b, deadline_raw = parts
            rec = gw.users.get(user_id)
            if rec is None:
                raise CodecError("pending record without user record")
            rec.pending_b = pending_b
            rec.pending_deadline = ts_from_bytes(deadline_raw)
            gw.b_index[pending_b] = user_id
        elif rtype == REC_SENSOR:
            sid, as_key = parts
            gw.sensors[sid] = as_key
            gw.provisioned_sids.add(sid)
        elif rtype == REC_PROVISIONED:
            (sid,) = parts
            gw.provisioned_sids.add(sid)
        else:
            raise CodecError(f"unknown database record 0x{rtype:02x}")
    return gw


def new_gateway(curve_name: str, seed: int, **state_kw) -> GatewayState:
    """Fresh gateway with a seeded key pair, for file-backed CLI use."""
    curve = get_curve(curve_name)
    rng = random.Random(seed)
    return GatewayState.generate(curve, rng, **state_kw)
