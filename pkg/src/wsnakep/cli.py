"""Command-line front end: registration with a file-backed gateway
database, simulated handshakes and password changes, the concrete attack
catalog, the symbolic secrecy scenarios, and the cost table.

Attack and analysis commands exit 0 when the observed outcome matches the
resistance claim recorded in the catalog and 2 when it diverges, so the
whole claims audit is scriptable.  Reports never contain secret material,
only fingerprints.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import os
import sys
from contextlib import contextmanager

from . import costmodel, dolevyao, simnet, wire
from .primitives import DIGEST_LEN, fingerprint
from .protocol import (
    Credentials,
    RegistrationError,
    enroll_user,
    gw_register_sensor,
    provision_sensor,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGENCE = 2


class CliError(Exception):
    pass


@contextmanager
def _db_lock(db_path: str):
    """Exclusive advisory lock guarding one gateway database file."""
    lock_path = db_path + ".lock"
    fd = os.open(lock_path, os.O_CREAT | os.O_RDWR, 0o600)
    try:
        try:
            fcntl.flock(fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            raise CliError(f"database {db_path} is locked by another process")
        yield
    finally:
        os.close(fd)


def _load_gateway(args) -> "wire.GatewayState":
    if not os.path.exists(args.db):
        raise CliError(f"gateway database {args.db} does not exist")
    with open(args.db, "rb") as f:
        data = f.read()
    try:
        return wire.decode_gateway(
            data,
            freshness_ms=args.freshness_ms,
            grace_ms=args.grace_ms,
            replay_cache_enabled=args.replay_cache == "on",
        )
    except wire.CodecError as exc:
        raise CliError(f"cannot read {args.db}: {exc}")


def _load_or_create_gateway(args):
    if os.path.exists(args.db):
        return _load_gateway(args)
    gw = wire.new_gateway(
        args.curve,
        args.seed,
        freshness_ms=args.freshness_ms,
        grace_ms=args.grace_ms,
        replay_cache_enabled=args.replay_cache == "on",
    )
    return gw


def _store_gateway(args, gw) -> None:
    with open(args.db, "wb") as f:
        f.write(wire.encode_gateway(gw))


def _sim_config(args, **overrides) -> simnet.SimConfig:
    cfg = simnet.SimConfig(
        curve=args.curve,
        freshness_ms=args.freshness_ms,
        replay_cache=args.replay_cache == "on",
        grace_ms=args.grace_ms,
    )
    for name, value in overrides.items():
        setattr(cfg, name, value)
    return cfg


def _unit_costs(args) -> costmodel.UnitCosts:
    defaults = costmodel.DEFAULT_UNIT_COSTS
    return costmodel.UnitCosts.of(
        args.th if args.th is not None else defaults[0],
        args.tecc if args.tecc is not None else defaults[1],
        args.tsym if args.tsym is not None else defaults[2],
    )


def _bmp(args) -> bytes | None:
    if args.bmp is None:
        return None
    raw = bytes.fromhex(args.bmp)
    if len(raw) != DIGEST_LEN:
        raise CliError("--bmp must be 64 hex characters (a 32-byte digest)")
    return raw


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_register_user(args) -> int:
    import random

    with _db_lock(args.db):
        gw = _load_or_create_gateway(args)
        creds = Credentials(
            user_id=args.user_id.encode(),
            password=args.password.encode(),
            bmp=_bmp(args),
        )
        rng = random.Random(args.seed ^ 0xCA5D)
        try:
            card = enroll_user(gw, creds, rng)
        except RegistrationError as exc:
            raise CliError(str(exc))
        _store_gateway(args, gw)
    card_path = args.card or f"{args.user_id}.card"
    with open(card_path, "wb") as f:
        f.write(wire.encode_card(card))
    payload = {
        "command": "register-user",
        "user_id": args.user_id,
        "card_file": card_path,
        "db": args.db,
        "hash": card.hash_alg,
        "card_fingerprint": fingerprint(card.c + card.d + card.z + card.q),
    }
    _emit(args, payload,
          f"registered user {args.user_id}; card written to {card_path} "
          f"(hash {card.hash_alg})")
    return EXIT_OK


def cmd_register_sensor(args) -> int:
    with _db_lock(args.db):
        gw = _load_or_create_gateway(args)
        sid = args.sid.encode()
        provision_sensor(gw, sid)
        as_key = gw_register_sensor(gw, sid)
        _store_gateway(args, gw)
    payload = {
        "command": "register-sensor",
        "sid": args.sid,
        "db": args.db,
        "authenticator_fingerprint": fingerprint(as_key),
    }
    _emit(args, payload,
          f"registered sensor {args.sid} "
          f"(authenticator fingerprint {fingerprint(as_key)})")
    return EXIT_OK


def _transcript_payload(t: simnet.Transcript) -> dict:
    return t.to_dict()


def cmd_handshake(args) -> int:
    with _db_lock(args.db):
        gw = _load_gateway(args)
        with open(args.card, "rb") as f:
            card = wire.decode_card(f.read())
        creds = Credentials(
            user_id=args.user_id.encode(),
            password=args.password.encode(),
            bmp=_bmp(args),
        )
        config = _sim_config(
            args, curve=gw.curve.name,
            user_id=creds.user_id, sid=args.sid.encode(),
        )
        config.hash_alg = gw.hash_alg
        sim = simnet.Simulation(config, args.seed, gateway=gw, card=card, creds=creds)
        transcript = sim.run_handshake()
        _store_gateway(args, gw)

    completed = [p for p, o in transcript.outcomes.items() if o.status == "completed"]
    ok = sorted(completed) == ["gateway", "sensor", "user"]
    text_lines = [transcript.render_text()]
    if ok:
        profile = costmodel.measure_counts(transcript)
        fp = transcript.outcomes["user"].sk_fingerprint
        text_lines.append(f"three parties agreed; session key fingerprint {fp}")
        text_lines.append(
            "per-role counts: "
            + ", ".join(
                f"{role} {profile.role(role).formula()}"
                for role in costmodel.ROLES
            )
        )
    payload = {"command": "handshake", "agreed": ok,
               "transcript": _transcript_payload(transcript)}
    _emit(args, payload, "\n".join(text_lines))
    if ok:
        return EXIT_OK
    reasons = [o.reason for o in transcript.outcomes.values() if o.reason]
    raise CliError("handshake failed: " + "; ".join(reasons or ["no outcome"]))


def cmd_change_password(args) -> int:
    with _db_lock(args.db):
        gw = _load_gateway(args)
        with open(args.card, "rb") as f:
            card = wire.decode_card(f.read())
        creds = Credentials(
            user_id=args.user_id.encode(),
            password=args.password.encode(),
            bmp=_bmp(args),
        )
        config = _sim_config(
            args, curve=gw.curve.name,
            user_id=creds.user_id,
        )
        config.hash_alg = gw.hash_alg
        sim = simnet.Simulation(config, args.seed, gateway=gw, card=card, creds=creds)
        transcript = sim.run_password_change(args.new_password.encode())
        user_out = transcript.outcomes.get("user")
        ok = user_out is not None and user_out.status == "completed"
        if ok:
            _store_gateway(args, gw)
            with open(args.card, "wb") as f:
                f.write(wire.encode_card(card))
    payload = {"command": "change-password", "updated": ok,
               "transcript": _transcript_payload(transcript)}
    text = transcript.render_text()
    if ok:
        text += "\ncard updated; the previous verifier stays valid until first use of the new one"
    _emit(args, payload, text)
    if not ok:
        reason = user_out.reason if user_out else "no outcome"
        raise CliError(f"password change failed: {reason}")
    return EXIT_OK


def cmd_attack(args) -> int:
    outcome = simnet.run_attack(args.scenario, seed=args.seed, config=_sim_config(args))
    _emit(args, outcome.to_dict(), outcome.render_text())
    return EXIT_DIVERGENCE if outcome.diverges else EXIT_OK


def cmd_analyze(args) -> int:
    report = dolevyao.run_secrecy_scenario(args.scenario)
    _emit(args, report.to_dict(), report.render_text())
    return EXIT_DIVERGENCE if report.diverges else EXIT_OK


def cmd_cost_report(args) -> int:
    units = _unit_costs(args)
    rows = costmodel.table_rows(units=units)
    payload = {
        "command": "cost-report",
        "unit_costs": {"th": str(units.th), "tecc": str(units.tecc),
                       "tsym": str(units.tsym)},
        "rows": rows,
    }
    _emit(args, payload, costmodel.render_table(units=units))
    return EXIT_OK


def cmd_list_scenarios(args) -> int:
    attacks = [
        {"name": spec.name, "kind": "attack", "summary": spec.summary,
         "claimed": spec.claimed}
        for spec in simnet.ATTACKS.values()
    ]
    analyses = []
    for name, builder in sorted(dolevyao.SCENARIOS.items()):
        scenario = builder()
        analyses.append({
            "name": name, "kind": "analysis", "summary": scenario.summary,
            "targets": [
                {"target": label,
                 "claimed": "derivable" if claimed else "not derivable"}
                for label, _, _, claimed in scenario.targets
            ],
        })
    lines = ["concrete attack scenarios (run with: attack <name>):"]
    lines += [f"  {a['name']}: {a['summary']} [claimed {a['claimed']}]"
              for a in attacks]
    lines.append("symbolic secrecy scenarios (run with: analyze <name>):")
    for a in analyses:
        targets = ", ".join(f"{t['target']} ({t['claimed']})" for t in a["targets"])
        lines.append(f"  {a['name']}: {a['summary']} [targets: {targets}]")
    _emit(args, {"attacks": attacks, "analyses": analyses}, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsnakep",
        description="ECDH-based WSN authentication protocol: simulator, "
                    "attack harness, symbolic analyzer and cost model",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", choices=sorted(("toy", "standard")),
                        default="toy", help="curve configuration")
    common.add_argument("--freshness-ms", type=int, default=2000,
                        help="freshness window in simulated ms")
    common.add_argument("--replay-cache", choices=("on", "off"), default="on")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for all randomness")
    common.add_argument("--grace-ms", type=int, default=24 * 3600 * 1000,
                        help="grace period for a replaced verifier")
    common.add_argument("--db", default="gateway.db",
                        help="gateway database file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--th", default=None, help="hash unit cost override (s)")
    common.add_argument("--tecc", default=None,
                        help="EC multiplication unit cost override (s)")
    common.add_argument("--tsym", default=None,
                        help="symmetric op unit cost override (s)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("register-user", parents=[common],
                       help="register a user and write their card file")
    p.add_argument("user_id")
    p.add_argument("password")
    p.add_argument("--bmp", default=None, help="optional biometric digest (hex)")
    p.add_argument("--card", default=None, help="card file path")
    p.set_defaults(func=cmd_register_user)

    p = sub.add_parser("register-sensor", parents=[common],
                       help="provision and register a sensor")
    p.add_argument("sid")
    p.set_defaults(func=cmd_register_sensor)

    p = sub.add_parser("handshake", parents=[common],
                       help="run the authenticated key exchange end to end")
    p.add_argument("user_id")
    p.add_argument("password")
    p.add_argument("sid")
    p.add_argument("--bmp", default=None)
    p.add_argument("--card", required=True)
    p.set_defaults(func=cmd_handshake)

    p = sub.add_parser("change-password", parents=[common],
                       help="run the password change/update phase")
    p.add_argument("user_id")
    p.add_argument("password")
    p.add_argument("new_password")
    p.add_argument("--bmp", default=None)
    p.add_argument("--card", required=True)
    p.set_defaults(func=cmd_change_password)

    p = sub.add_parser("attack", parents=[common],
                       help="run a concrete attack scenario")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("analyze", parents=[common],
                       help="run a symbolic secrecy scenario")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("cost-report", parents=[common],
                       help="render the comparative cost table")
    p.set_defaults(func=cmd_cost_report)

    p = sub.add_parser("list-scenarios", parents=[common],
                       help="list attack and analysis catalogs")
    p.set_defaults(func=cmd_list_scenarios)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
