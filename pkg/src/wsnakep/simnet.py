"""Deterministic simulated network for the protocol.

A :class:`Simulation` wires one registered user, gateway and sensor to a
shared millisecond clock and an insecure channel.  Every message send is a
transcript event; an :class:`AdversaryScript` with full network control can
pass, drop, delay, mutate, replay or inject wire bytes.  Attack scenarios
from the catalog run scripted adversaries against honest parties and report
whether the protocol prevented the attack, alongside the resistance claim
each scenario audits.

Time never comes from the wall clock, so identical (seed, scenario, config)
inputs give byte-identical transcripts.
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field

from . import wire
from .primitives import (
    Ciphertext,
    OpCounter,
    RoleOps,
    TAG_FROM_GATEWAY,
    TAG_TO_GATEWAY,
    ae_open,
    ae_seal,
    fingerprint,
    frame,
    get_curve,
    kdf_key,
    p2b,
    scalar_mult,
    ts_bytes,
    unframe,
    xor_bytes,
)
from .protocol import (
    Credentials,
    DEFAULT_FRESHNESS_MS,
    DEFAULT_GRACE_MS,
    GatewayState,
    M1,
    M2,
    M3,
    M4,
    PC1,
    PC2,
    Rejected,
    RejectReason,
    SensorState,
    SessionConsumed,
    enroll_sensor,
    enroll_user,
    gw_on_m1,
    gw_on_m3,
    gw_on_pc,
    sensor_on_m2,
    user_auth_init,
    user_login,
    user_on_m4,
    user_pc_confirm,
    user_pc_request,
)

USER, GATEWAY, SENSOR, ADVERSARY = "user", "gateway", "sensor", "adversary"


@dataclass
class SimConfig:
    curve: str = "toy"
    hash_alg: str = "sha256"
    freshness_ms: int = DEFAULT_FRESHNESS_MS
    replay_cache: bool = True
    grace_ms: int = DEFAULT_GRACE_MS
    hop_latency_ms: int = 5
    start_ms: int = 1_000_000  # simulated epoch; keeps skewed clocks positive
    skew: dict[str, int] = field(default_factory=dict)
    user_id: bytes = b"alice"
    password: bytes = b"through the gates"
    bmp: bytes | None = None
    sid: bytes = b"sensor-01"


@dataclass
class SimClock:
    """Explicitly advanced simulated time with per-party skew offsets."""

    now_ms: int = 0
    skew: dict[str, int] = field(default_factory=dict)

    def local(self, party: str) -> int:
        return self.now_ms + self.skew.get(party, 0)

    def advance_to(self, t_ms: int) -> None:
        if t_ms > self.now_ms:
            self.now_ms = t_ms

    def advance(self, delta_ms: int) -> None:
        if delta_ms < 0:
            raise ValueError("time only moves forward")
        self.now_ms += delta_ms


# ---------------------------------------------------------------------------
# adversary scripting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pass:
    """Deliver the event unchanged after normal channel latency."""


@dataclass(frozen=True)
class Drop:
    """Suppress delivery."""


@dataclass(frozen=True)
class Delay:
    ms: int


@dataclass(frozen=True)
class Mutate:
    """XOR one wire byte with a mask before delivery."""

    offset: int
    mask: int = 0x01


@dataclass(frozen=True)
class Replay:
    """Deliver an extra copy of this event, this long after its capture."""

    after_ms: int
    to: str | None = None  # default: the original destination


@dataclass(frozen=True)
class Inject:
    """Deliver literal bytes, this long after the mission starts."""

    at_ms: int
    to: str
    wire: bytes


@dataclass
class AdversaryScript:
    """Per-event actions plus scheduled injections; unlisted events pass."""

    actions: dict[int, list] = field(default_factory=dict)
    injections: list[Inject] = field(default_factory=list)

    def on_send(self, index: int) -> list:
        return self.actions.get(index, [Pass()])


PASSTHROUGH = AdversaryScript()


# ---------------------------------------------------------------------------
# transcripts
# ---------------------------------------------------------------------------

@dataclass
class WireEvent:
    index: int
    t_sent: int
    src: str
    dst: str
    wire: bytes
    view: dict


@dataclass
class Delivery:
    event_index: int | None  # None for injected bytes
    t_delivered: int
    dst: str
    outcome: str  # "ok" | "completed" | "rejected: <reason>"


@dataclass
class PartyOutcome:
    status: str = "idle"  # idle | completed | rejected
    sk_fingerprint: str | None = None
    reason: str | None = None


@dataclass
class Transcript:
    label: str
    curve: str
    hash_alg: str
    seed: int
    freshness_ms: int
    replay_cache: bool
    events: list[WireEvent] = field(default_factory=list)
    deliveries: list[Delivery] = field(default_factory=list)
    outcomes: dict[str, PartyOutcome] = field(default_factory=dict)
    ops: dict[str, dict[str, int]] = field(default_factory=dict)
    session_keys: dict[str, bytes] = field(default_factory=dict, repr=False)

    def outcome(self, party: str) -> PartyOutcome:
        return self.outcomes.setdefault(party, PartyOutcome())

    def deliveries_of(self, event_index: int | None) -> list[Delivery]:
        return [d for d in self.deliveries if d.event_index == event_index]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "curve": self.curve,
            "hash": self.hash_alg,
            "seed": self.seed,
            "freshness_ms": self.freshness_ms,
            "replay_cache": self.replay_cache,
            "events": [
                {
                    "index": e.index,
                    "t_sent": e.t_sent,
                    "from": e.src,
                    "to": e.dst,
                    "wire_hex": e.wire.hex(),
                    "decoded": e.view,
                }
                for e in self.events
            ],
            "deliveries": [
                {
                    "event": d.event_index,
                    "t": d.t_delivered,
                    "to": d.dst,
                    "outcome": d.outcome,
                }
                for d in self.deliveries
            ],
            "outcomes": {
                party: {
                    "status": o.status,
                    "session_key_fingerprint": o.sk_fingerprint,
                    "reason": o.reason,
                }
                for party, o in sorted(self.outcomes.items())
            },
            "operation_counts": self.ops,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def render_text(self) -> str:
        lines = [
            f"session {self.label or 'run'}: curve={self.curve} hash={self.hash_alg} "
            f"seed={self.seed} freshness={self.freshness_ms}ms "
            f"replay_cache={'on' if self.replay_cache else 'off'}",
        ]
        for e in self.events:
            kind = e.view.get("type", "?")
            lines.append(
                f"  [{e.index}] t={e.t_sent}ms {e.src} -> {e.dst}: {kind} ({len(e.wire)} bytes)"
            )
        for d in self.deliveries:
            ref = "injected" if d.event_index is None else f"event {d.event_index}"
            lines.append(f"  t={d.t_delivered}ms {d.dst} got {ref}: {d.outcome}")
        for party, o in sorted(self.outcomes.items()):
            extra = f" sk={o.sk_fingerprint}" if o.sk_fingerprint else ""
            extra += f" ({o.reason})" if o.reason else ""
            lines.append(f"  {party}: {o.status}{extra}")
        for party, ops in sorted(self.ops.items()):
            lines.append(
                f"  ops[{party}]: hash={ops['hash_ops']} ecc={ops['ecc_ops']} "
                f"sym={ops['sym_ops']} (+{ops['derivation_hashes']} derivation hashes)"
            )
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# the simulation
# ---------------------------------------------------------------------------

class SetupError(Exception):
    pass


class Simulation:
    """One registered user and sensor behind a gateway, a clock, and a
    scriptable channel.  State persists across missions so follow-up runs
    (for example a handshake after a password change) see prior effects.
    """

    def __init__(
        self,
        config: SimConfig | None = None,
        seed: int = 0,
        gateway: GatewayState | None = None,
        card=None,
        creds: Credentials | None = None,
    ) -> None:
        self.config = config or SimConfig()
        self.seed = seed
        self.rng = random.Random(seed)
        self.clock = SimClock(now_ms=self.config.start_ms,
                              skew=dict(self.config.skew))
        self.counter = OpCounter()
        if gateway is None:
            gateway = GatewayState.generate(
                get_curve(self.config.curve),
                self.rng,
                hash_alg=self.config.hash_alg,
                freshness_ms=self.config.freshness_ms,
                grace_ms=self.config.grace_ms,
                replay_cache_enabled=self.config.replay_cache,
            )
        self.gateway = gateway
        self.curve = gateway.curve
        if self.config.sid in gateway.sensors:
            self.sensor = SensorState(
                sid=self.config.sid, as_key=gateway.sensors[self.config.sid]
            )
        elif gateway.provisioned_sids or gateway.users:
            # pre-loaded gateway without this sensor: the gateway's routing
            # check rejects for us, the placeholder sensor is never reached
            self.sensor = SensorState(sid=self.config.sid, as_key=b"\x00" * 32)
        else:
            self.sensor = enroll_sensor(gateway, self.config.sid)
        self.creds = creds or Credentials(
            user_id=self.config.user_id,
            password=self.config.password,
            bmp=self.config.bmp,
        )
        if card is None:
            card = enroll_user(gateway, self.creds, self.rng)
        self.card = card
        # live single-user contexts; the gateway may hold several sessions
        self.user_session = None
        self.pc_session = None
        self.gw_sessions: list = []

    # -- party handlers ------------------------------------------------------

    def _handle_user(self, msg, now: int) -> list[tuple[str, bytes]]:
        if isinstance(msg, M4):
            if self.user_session is None or self.user_session.consumed:
                raise Rejected(RejectReason.MALFORMED, "no live user session")
            sk = user_on_m4(
                self.user_session, msg, now, freshness_ms=self.config.freshness_ms
            )
            self._finish(USER, sk)
            return []
        if isinstance(msg, PC2):
            if self.pc_session is None or self.pc_session.consumed:
                raise Rejected(RejectReason.MALFORMED, "no live password-change session")
            user_pc_confirm(
                self.pc_session, msg, now, freshness_ms=self.config.freshness_ms
            )
            self._finish(USER, None, note="card updated")
            return []
        raise Rejected(RejectReason.MALFORMED, "unexpected message for user")

    def _handle_gateway(self, msg, now: int) -> list[tuple[str, bytes]]:
        if isinstance(msg, M1):
            m2, ctx = gw_on_m1(self.gateway, msg, now, self.rng)
            self.gw_sessions.append(ctx)
            return [(SENSOR, wire.encode_message(m2, self.curve))]
        if isinstance(msg, M3):
            open_sessions = [s for s in self.gw_sessions if not s.consumed]
            if not open_sessions:
                raise Rejected(RejectReason.MALFORMED, "no live gateway session")
            m4, sk = gw_on_m3(
                open_sessions[0], msg, now,
                freshness_ms=self.config.freshness_ms, alg=self.config.hash_alg,
            )
            self._finish(GATEWAY, sk)
            return [(USER, wire.encode_message(m4, self.curve))]
        if isinstance(msg, PC1):
            pc2 = gw_on_pc(self.gateway, msg, now)
            return [(USER, wire.encode_message(pc2, self.curve))]
        raise Rejected(RejectReason.MALFORMED, "unexpected message for gateway")

    def _handle_sensor(self, msg, now: int) -> list[tuple[str, bytes]]:
        if not isinstance(msg, M2):
            raise Rejected(RejectReason.MALFORMED, "unexpected message for sensor")
        m3, sk = sensor_on_m2(
            self.sensor, msg, now, self.rng, self.curve,
            freshness_ms=self.config.freshness_ms, alg=self.config.hash_alg,
        )
        self._finish(SENSOR, sk)
        return [(GATEWAY, wire.encode_message(m3, self.curve))]

    _HANDLERS = {USER: _handle_user, GATEWAY: _handle_gateway, SENSOR: _handle_sensor}

    def _finish(self, party: str, sk: bytes | None, note: str | None = None) -> None:
        out = self._transcript.outcome(party)
        out.status = "completed"
        out.reason = note
        if sk is not None:
            out.sk_fingerprint = fingerprint(sk, self.config.hash_alg)
            self._transcript.session_keys[party] = sk

    # -- event loop -----------------------------------------------------------

    def _new_transcript(self, label: str) -> Transcript:
        self._transcript = Transcript(
            label=label,
            curve=self.config.curve,
            hash_alg=self.config.hash_alg,
            seed=self.seed,
            freshness_ms=self.config.freshness_ms,
            replay_cache=self.config.replay_cache,
        )
        return self._transcript

    def run_mission(
        self,
        initial_sends: list[tuple[str, str, bytes]],
        adversary: AdversaryScript | None = None,
        label: str = "",
    ) -> Transcript:
        """Run the channel to quiescence starting from ``initial_sends``
        (src, dst, wire) and return the transcript."""
        adversary = adversary or PASSTHROUGH
        transcript = self._transcript if getattr(self, "_transcript", None) else None
        if transcript is None or transcript.label != label:
            transcript = self._new_transcript(label)
        heap: list[tuple[int, int, str, bytes, int | None]] = []
        seq = 0
        mission_start = self.clock.now_ms
        for inj in adversary.injections:
            heapq.heappush(heap, (mission_start + inj.at_ms, seq, inj.to,
                                  inj.wire, None))
            seq += 1

        def send(src: str, dst: str, payload: bytes) -> None:
            nonlocal seq
            event = WireEvent(
                index=len(transcript.events),
                t_sent=self.clock.now_ms,
                src=src,
                dst=dst,
                wire=payload,
                view=wire.describe_message(payload, self.curve),
            )
            transcript.events.append(event)
            for action in adversary.on_send(event.index):
                deliver_at = self.clock.now_ms + self.config.hop_latency_ms
                if isinstance(action, Pass):
                    heapq.heappush(heap, (deliver_at, seq, dst, payload, event.index))
                elif isinstance(action, Drop):
                    continue
                elif isinstance(action, Delay):
                    heapq.heappush(
                        heap, (deliver_at + action.ms, seq, dst, payload, event.index)
                    )
                elif isinstance(action, Mutate):
                    mutated = bytearray(payload)
                    mutated[action.offset % len(mutated)] ^= action.mask
                    heapq.heappush(
                        heap, (deliver_at, seq, dst, bytes(mutated), event.index)
                    )
                elif isinstance(action, Replay):
                    heapq.heappush(
                        heap,
                        (self.clock.now_ms + action.after_ms, seq,
                         action.to or dst, payload, event.index),
                    )
                else:
                    raise TypeError(f"unknown adversary action {action!r}")
                seq += 1

        for src, dst, payload in initial_sends:
            send(src, dst, payload)

        while heap:
            at, _, dst, payload, event_index = heapq.heappop(heap)
            self.clock.advance_to(at)
            outcome = self._deliver(dst, payload, send_fn=send)
            transcript.deliveries.append(
                Delivery(event_index=event_index, t_delivered=self.clock.now_ms,
                         dst=dst, outcome=outcome)
            )

        transcript.ops = self.counter.snapshot()
        return transcript

    def _deliver(self, dst: str, payload: bytes, send_fn) -> str:
        handler = self._HANDLERS.get(dst)
        if handler is None:
            return "dropped: no such party"
        local = self.clock.local(dst)
        with self.counter.track(dst):
            try:
                msg = wire.decode_message(payload, self.curve)
            except wire.CodecError as exc:
                out = self._transcript.outcome(dst)
                if out.status == "idle":
                    out.status, out.reason = "rejected", RejectReason.MALFORMED.name
                return f"rejected: {RejectReason.MALFORMED.name} ({exc})"
            try:
                outputs = handler(self, msg, local)
            except Rejected as rej:
                out = self._transcript.outcome(dst)
                if out.status != "completed":
                    out.status, out.reason = "rejected", rej.reason.name
                return f"rejected: {rej.reason.name}"
            except SessionConsumed:
                return "rejected: SESSION_CONSUMED"
        for next_dst, next_payload in outputs:
            send_fn(dst, next_dst, next_payload)
        status = self._transcript.outcomes.get(dst)
        if status is not None and status.status == "completed":
            return "completed"
        return "ok"

    # -- missions --------------------------------------------------------------

    def build_m1(
        self,
        creds: Credentials | None = None,
        sid: bytes | None = None,
        card=None,
    ) -> bytes:
        """User-side login plus handshake request; raises on login failure."""
        creds = creds or self.creds
        card = card or self.card
        with self.counter.track(USER):
            b_star = user_login(card, creds)
            m1, self.user_session = user_auth_init(
                card, b_star, sid if sid is not None else self.config.sid,
                self.clock.local(USER), self.gateway.x, self.curve, self.rng,
            )
        return wire.encode_message(m1, self.curve)

    def run_handshake(
        self,
        adversary: AdversaryScript | None = None,
        creds: Credentials | None = None,
        sid: bytes | None = None,
        label: str = "handshake",
    ) -> Transcript:
        """Login, then drive M1 through the channel to quiescence."""
        self._new_transcript(label)
        try:
            m1_wire = self.build_m1(creds=creds, sid=sid)
        except Rejected as rej:
            out = self._transcript.outcome(USER)
            out.status, out.reason = "rejected", rej.reason.name
            self._transcript.ops = self.counter.snapshot()
            return self._transcript
        return self.run_mission([(USER, GATEWAY, m1_wire)], adversary, label=label)

    def run_password_change(
        self,
        new_password: bytes,
        adversary: AdversaryScript | None = None,
        old_creds: Credentials | None = None,
        label: str = "password-change",
    ) -> Transcript:
        self._new_transcript(label)
        creds = old_creds or self.creds
        with self.counter.track(USER):
            try:
                pc1, self.pc_session = user_pc_request(
                    self.card, creds, new_password, self.clock.local(USER),
                    self.gateway.x, self.curve, self.rng,
                )
            except Rejected as rej:
                out = self._transcript.outcome(USER)
                out.status, out.reason = "rejected", rej.reason.name
                self._transcript.ops = self.counter.snapshot()
                return self._transcript
        pc1_wire = wire.encode_message(pc1, self.curve)
        return self.run_mission([(USER, GATEWAY, pc1_wire)], adversary, label=label)


def run_session(seed: int = 0, config: SimConfig | None = None,
                adversary: AdversaryScript | None = None) -> Transcript:
    """One full honest (or adversary-scripted) handshake from registration
    to key agreement, as a fresh deterministic simulation."""
    return Simulation(config, seed).run_handshake(adversary)


def dos_probe(sim: Simulation, payload: bytes, to: str = GATEWAY) -> tuple[str, RoleOps]:
    """Deliver raw bytes to one party and report (outcome, ops spent)."""
    before = sim.counter.role(to).copy()
    sim._new_transcript("dos-probe")
    transcript = sim.run_mission([(ADVERSARY, to, payload)], label="dos-probe")
    after = sim.counter.role(to)
    spent = RoleOps(
        hash_ops=after.hash_ops - before.hash_ops,
        ecc_ops=after.ecc_ops - before.ecc_ops,
        sym_ops=after.sym_ops - before.sym_ops,
        derivation_hashes=after.derivation_hashes - before.derivation_hashes,
    )
    return transcript.deliveries[0].outcome, spent


# ---------------------------------------------------------------------------
# attack scenario catalog
# ---------------------------------------------------------------------------

@dataclass
class AttackOutcome:
    scenario: str
    verdict: str  # "prevented" | "succeeded"
    claimed: str  # the resistance claim under audit
    diverges: bool
    reason: str | None
    ops: dict[str, dict[str, int]]
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "verdict": self.verdict,
            "claimed": self.claimed,
            "diverges": self.diverges,
            "reason": self.reason,
            "operation_counts": self.ops,
            "notes": self.notes,
        }

    def render_text(self) -> str:
        mark = "DIVERGES FROM CLAIM" if self.diverges else "matches claim"
        lines = [
            f"attack {self.scenario}: verdict={self.verdict} "
            f"claimed={self.claimed} [{mark}]"
        ]
        if self.reason:
            lines.append(f"  rejection: {self.reason}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        for party, ops in sorted(self.ops.items()):
            lines.append(
                f"  ops[{party}]: hash={ops['hash_ops']} ecc={ops['ecc_ops']} "
                f"sym={ops['sym_ops']}"
            )
        return "\n".join(lines)


def _outcome(name: str, verdict: str, claimed: str, reason: str | None,
             ops: dict, notes: list[str]) -> AttackOutcome:
    return AttackOutcome(
        scenario=name, verdict=verdict, claimed=claimed,
        diverges=(verdict != claimed), reason=reason, ops=ops, notes=notes,
    )


def _attack_replay_m1_late(config: SimConfig, seed: int) -> AttackOutcome:
    sim = Simulation(config, seed)
    late = config.freshness_ms + 500
    script = AdversaryScript(actions={0: [Pass(), Replay(after_ms=late)]})
    t = sim.run_handshake(script)
    replays = t.deliveries_of(0)
    verdict = "prevented"
    reason = None
    notes = [f"request replayed {late} ms after capture"]
    if len(replays) < 2 or "rejected" not in replays[-1].outcome:
        verdict = "succeeded"
        notes.append("replayed request was processed")
    else:
        reason = replays[-1].outcome
    return _outcome("replay-m1-late", verdict, "prevented", reason,
                    t.ops, notes)


def _attack_replay_m1_fast(config: SimConfig, seed: int) -> AttackOutcome:
    sim = Simulation(config, seed)
    script = AdversaryScript(actions={0: [Pass(), Replay(after_ms=config.freshness_ms // 2)]})
    t = sim.run_handshake(script)
    replays = t.deliveries_of(0)
    notes = [
        f"identical request replayed inside the freshness window "
        f"(replay cache {'on' if config.replay_cache else 'off'})"
    ]
    second = replays[-1]
    if "rejected" in second.outcome:
        verdict, reason = "prevented", second.outcome
    else:
        verdict, reason = "succeeded", None
        notes.append(
            "gateway accepted the duplicate and drove a full session from it"
        )
    return _outcome("replay-m1-fast", verdict, "prevented", reason, t.ops, notes)


def _attack_tamper_any_bit(config: SimConfig, seed: int) -> AttackOutcome:
    # honest run to learn field byte spans per message, then one fresh run
    # per single-bit mutation of every field byte
    baseline = Simulation(config, seed).run_handshake()
    spans: list[tuple[int, int, int]] = []  # (event index, offset, n_bytes)
    for event in baseline.events:
        body = event.wire[1:]
        offset = 1
        for part in unframe(body):
            offset += 2
            spans.append((event.index, offset, len(part)))
            offset += len(part)
    notes = []
    failures = 0
    trials = 0
    for event_index, start, length in spans:
        for byte_off in range(start, start + length):
            for bit in range(8):
                trials += 1
                sim = Simulation(config, seed)
                script = AdversaryScript(
                    actions={event_index: [Mutate(offset=byte_off, mask=1 << bit)]}
                )
                t = sim.run_handshake(script)
                user_done = t.outcomes.get(USER, PartyOutcome()).status == "completed"
                some_reject = any("rejected" in d.outcome for d in t.deliveries)
                if user_done or not some_reject:
                    failures += 1
                    notes.append(
                        f"mutation event={event_index} byte={byte_off} bit={bit} "
                        f"was not rejected"
                    )
    verdict = "prevented" if failures == 0 else "succeeded"
    notes.insert(0, f"{trials} single-bit mutations over every field byte of M1..M4")
    return _outcome("tamper-any-bit", verdict, "prevented",
                    None if failures == 0 else f"{failures} mutations accepted",
                    baseline.ops, notes)


def _attack_dos_garbage_m1(config: SimConfig, seed: int) -> AttackOutcome:
    sim = Simulation(config, seed)
    adv_rng = random.Random(seed ^ 0xD05)
    # probe 1: bytes that do not even parse
    junk_outcome, junk_ops = dos_probe(sim, bytes(adv_rng.randbytes(40)))
    # probe 2: well-formed request whose ciphertext is garbage
    e1 = scalar_mult(adv_rng.randrange(1, sim.curve.n), sim.curve.g, sim.curve)
    bogus = M1(e1=e1, e3=Ciphertext(TAG_TO_GATEWAY, bytes(adv_rng.randbytes(48))))
    m1_outcome, m1_ops = dos_probe(sim, wire.encode_message(bogus, sim.curve))
    notes = [
        f"unparseable bytes: {junk_outcome}; cost hash={junk_ops.hash_ops} "
        f"ecc={junk_ops.ecc_ops} sym={junk_ops.sym_ops}",
        f"garbage ciphertext: {m1_outcome}; cost hash={m1_ops.hash_ops} "
        f"ecc={m1_ops.ecc_ops} sym={m1_ops.sym_ops}",
    ]
    ok = (
        "rejected" in junk_outcome
        and (junk_ops.ecc_ops, junk_ops.sym_ops) == (0, 0)
        and "rejected" in m1_outcome
        and (m1_ops.hash_ops, m1_ops.ecc_ops, m1_ops.sym_ops) == (0, 1, 1)
    )
    ops = {"gateway_junk": junk_ops.as_dict(), "gateway_garbage_m1": m1_ops.as_dict()}
    return _outcome("dos-garbage-m1", "prevented" if ok else "succeeded",
                    "prevented", None if ok else "cost bound exceeded", ops, notes)


def _attack_dos_garbage_m2(config: SimConfig, seed: int) -> AttackOutcome:
    sim = Simulation(config, seed)
    adv_rng = random.Random(seed ^ 0xD06)
    e5 = scalar_mult(adv_rng.randrange(1, sim.curve.n), sim.curve.g, sim.curve)
    bogus = M2(
        sp1=bytes(adv_rng.randbytes(32)),
        sp2=bytes(adv_rng.randbytes(32)),
        t2=sim.clock.local(SENSOR),
        e5=e5,
    )
    outcome, ops = dos_probe(sim, wire.encode_message(bogus, sim.curve), to=SENSOR)
    ok = "rejected" in outcome and ops.ecc_ops == 0 and ops.hash_ops == 1
    notes = [
        f"forged relay: {outcome}; cost hash={ops.hash_ops} ecc={ops.ecc_ops} "
        f"sym={ops.sym_ops}"
    ]
    return _outcome("dos-garbage-m2", "prevented" if ok else "succeeded",
                    "prevented", None if ok else "cost bound exceeded",
                    {"sensor": ops.as_dict()}, notes)


def _attack_insider_intercept_sp1(config: SimConfig, seed: int) -> AttackOutcome:
    # a registered user watches their own session and tries to peel the
    # sensor authenticator out of SP1 with everything they legitimately hold
    sim = Simulation(config, seed)
    t = sim.run_handshake()
    m2_event = next(e for e in t.events if e.view.get("type") == "M2")
    m2 = wire.decode_message(m2_event.wire, sim.curve)
    insider_e2 = sim.user_session.e2
    candidate = xor_bytes(m2.sp1, p2b(insider_e2, sim.curve, config.hash_alg))
    leaked = candidate == sim.sensor.as_key
    notes = [
        "insider knows their own session scalar, the derived point, and the card",
        "best computable value is SP1 xor p2b(e2) = b xor AS, still masked by b",
    ]
    return _outcome(
        "insider-intercept-sp1",
        "succeeded" if leaked else "prevented",
        "prevented",
        None if not leaked else "sensor authenticator recovered",
        t.ops, notes,
    )


def _attack_stolen_card_no_password(config: SimConfig, seed: int) -> AttackOutcome:
    sim = Simulation(config, seed)
    guesses = [b"password", b"123456", config.password + b"?", b""]
    rejected = 0
    for guess in guesses:
        try:
            user_login(sim.card, Credentials(config.user_id, guess, config.bmp))
        except Rejected as rej:
            if rej.reason is RejectReason.LOGIN_FAILED:
                rejected += 1
    ok = rejected == len(guesses)
    notes = [f"{rejected}/{len(guesses)} password guesses rejected at the card check"]
    return _outcome("stolen-card-no-password", "prevented" if ok else "succeeded",
                    "prevented", None if ok else "a guess passed the card check",
                    sim.counter.snapshot(), notes)


def _attack_wrong_sid_routing(config: SimConfig, seed: int) -> AttackOutcome:
    sim = Simulation(config, seed)
    t = sim.run_handshake(sid=b"not-a-registered-sensor")
    delivery = t.deliveries_of(0)[-1]
    ok = "UNKNOWN_SID" in delivery.outcome
    return _outcome("wrong-sid-routing", "prevented" if ok else "succeeded",
                    "prevented", delivery.outcome if ok else "request routed",
                    t.ops, ["request targeted a sensor the gateway never registered"])


def _attack_pc_lost_confirmation(config: SimConfig, seed: int) -> AttackOutcome:
    sim = Simulation(config, seed)
    new_password = b"fresh words entirely"
    script = AdversaryScript(actions={1: [Drop()]})  # event 1 is the confirmation
    t_pc = sim.run_password_change(new_password, adversary=script)
    notes = ["confirmation message suppressed by the channel"]
    record = sim.gateway.users[config.user_id]
    if record.pending_b is None:
        notes.append("gateway never parked a pending verifier")
    # the user's card is unchanged; the old credentials must still work
    sim.clock.advance(50)
    t_auth = sim.run_handshake(label="post-loss-handshake")
    keys = t_auth.session_keys
    ok = (
        record.pending_b is not None
        and len(keys) == 3
        and len(set(keys.values())) == 1
    )
    if ok:
        notes.append("old credentials completed a handshake during the grace period")
    return _outcome("pc-lost-confirmation", "prevented" if ok else "succeeded",
                    "prevented", None if ok else "valid user locked out",
                    t_auth.ops, notes)


def _attack_stolen_verifier_forge(config: SimConfig, seed: int) -> AttackOutcome:
    # adversary who copied the gateway's verification table (B, z per user,
    # plus the sensor SID) forges a request with their own ephemeral scalar
    sim = Simulation(config, seed)
    adv_rng = random.Random(seed ^ 0x5E1F)
    record = sim.gateway.users[config.user_id]
    stolen_b, stolen_z = record.b, record.z
    a_adv = adv_rng.randrange(1, sim.curve.n)
    e1 = scalar_mult(a_adv, sim.curve.g, sim.curve)
    e2 = scalar_mult(a_adv, sim.gateway.x, sim.curve)
    t1 = sim.clock.local(ADVERSARY)
    e3 = ae_seal(
        kdf_key(e2, sim.curve, config.hash_alg),
        TAG_TO_GATEWAY,
        frame(stolen_b, config.sid, ts_bytes(t1)),
    )
    forged = wire.encode_message(M1(e1=e1, e3=e3), sim.curve)
    t = sim.run_mission([(ADVERSARY, GATEWAY, forged)], label="stolen-verifier")
    notes = ["forged request built from the stolen verifier table alone"]
    m4_event = next((e for e in t.events if e.view.get("type") == "M4"), None)
    sk_adv = None
    if m4_event is not None:
        m4 = wire.decode_message(m4_event.wire, sim.curve)
        try:
            payload = ae_open(
                kdf_key(e2, sim.curve, config.hash_alg), m4.e7, TAG_FROM_GATEWAY
            )
            _, sku, _ = unframe(payload)
            sk_adv = xor_bytes(sku, stolen_z)
        except Exception:
            sk_adv = None
    gw_sk = t.session_keys.get(GATEWAY)
    succeeded = sk_adv is not None and gw_sk is not None and sk_adv == gw_sk
    if succeeded:
        notes.append(
            "gateway and sensor completed; adversary unblinded the session key "
            "with the stolen z"
        )
    return _outcome("stolen-verifier-forge",
                    "succeeded" if succeeded else "prevented",
                    "prevented",
                    None,
                    t.ops, notes)


def _attack_compromise_s_z(config: SimConfig, seed: int) -> AttackOutcome:
    # sanity compromise: after an honest session, hand the adversary the
    # gateway private key and the user's z; the recorded traffic must yield SK
    sim = Simulation(config, seed)
    t = sim.run_handshake()
    m1 = wire.decode_message(t.events[0].wire, sim.curve)
    m4_event = next(e for e in t.events if e.view.get("type") == "M4")
    m4 = wire.decode_message(m4_event.wire, sim.curve)
    e2 = scalar_mult(sim.gateway.s, m1.e1, sim.curve)
    payload = ae_open(kdf_key(e2, sim.curve, config.hash_alg), m4.e7, TAG_FROM_GATEWAY)
    _, sku, _ = unframe(payload)
    sk_adv = xor_bytes(sku, sim.gateway.users[config.user_id].z)
    succeeded = sk_adv == t.session_keys[USER]
    notes = [
        "post-session compromise of the gateway key and the user's z",
        "expected to succeed: this pairing is outside the forward-secrecy claim",
    ]
    return _outcome("compromise-s-z", "succeeded" if succeeded else "prevented",
                    "succeeded", None, t.ops, notes)


@dataclass(frozen=True)
class AttackSpec:
    name: str
    summary: str
    claimed: str
    runner: object


ATTACKS: dict[str, AttackSpec] = {
    spec.name: spec
    for spec in [
        AttackSpec("replay-m1-late",
                   "replay the handshake request after the freshness window",
                   "prevented", _attack_replay_m1_late),
        AttackSpec("replay-m1-fast",
                   "replay the identical request inside the freshness window",
                   "prevented", _attack_replay_m1_fast),
        AttackSpec("tamper-any-bit",
                   "flip each bit of each field of each handshake message in transit",
                   "prevented", _attack_tamper_any_bit),
        AttackSpec("dos-garbage-m1",
                   "flood the gateway with junk and garbage-ciphertext requests",
                   "prevented", _attack_dos_garbage_m1),
        AttackSpec("dos-garbage-m2",
                   "feed the sensor a forged relay message",
                   "prevented", _attack_dos_garbage_m2),
        AttackSpec("insider-intercept-sp1",
                   "registered user tries to peel the sensor authenticator from SP1",
                   "prevented", _attack_insider_intercept_sp1),
        AttackSpec("stolen-card-no-password",
                   "card thief guesses passwords against the card check",
                   "prevented", _attack_stolen_card_no_password),
        AttackSpec("wrong-sid-routing",
                   "request a session with an unregistered sensor identity",
                   "prevented", _attack_wrong_sid_routing),
        AttackSpec("pc-lost-confirmation",
                   "drop the password-change confirmation and check for lockout",
                   "prevented", _attack_pc_lost_confirmation),
        AttackSpec("stolen-verifier-forge",
                   "impersonate a user from the stolen gateway verification table",
                   "prevented", _attack_stolen_verifier_forge),
        AttackSpec("compromise-s-z",
                   "post-session compromise of gateway key plus user z (sanity)",
                   "succeeded", _attack_compromise_s_z),
    ]
}


def run_attack(name: str, seed: int = 0, config: SimConfig | None = None) -> AttackOutcome:
    """Execute a named attack scenario and report the verdict next to the
    resistance claim it audits."""
    spec = ATTACKS.get(name)
    if spec is None:
        known = ", ".join(sorted(ATTACKS))
        raise ValueError(f"unknown attack scenario {name!r}; catalog: {known}")
    return spec.runner(config or SimConfig(), seed)
