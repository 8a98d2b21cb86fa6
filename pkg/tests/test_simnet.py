"""Simulated network: determinism, channel neutrality, skew handling, the
adversary actions, DOS probes and the attack scenario catalog."""

import random

import pytest

from wsnakep import wire
from wsnakep.primitives import Ciphertext, scalar_mult
from wsnakep.protocol import M1, M2
from wsnakep.simnet import (
    ATTACKS,
    AdversaryScript,
    Delay,
    Drop,
    Mutate,
    PASSTHROUGH,
    Replay,
    SimConfig,
    Simulation,
    dos_probe,
    run_attack,
    run_session,
)


class TestHonestSession:
    def test_four_events_three_equal_keys(self):
        t = run_session(seed=0)
        assert [e.view["type"] for e in t.events] == ["M1", "M2", "M3", "M4"]
        assert len(t.session_keys) == 3
        assert len(set(t.session_keys.values())) == 1
        assert all(o.status == "completed" for o in t.outcomes.values())

    def test_determinism_byte_identical(self):
        a = run_session(seed=42)
        b = run_session(seed=42)
        assert a.to_json() == b.to_json()
        assert [e.wire for e in a.events] == [e.wire for e in b.events]

    def test_channel_neutrality(self):
        plain = run_session(seed=7)
        scripted = run_session(seed=7, adversary=PASSTHROUGH)
        assert plain.to_json() == scripted.to_json()

    def test_different_seeds_different_ephemerals(self):
        def points(t):
            m1 = wire.decode_message(t.events[0].wire, Simulation().curve)
            m2 = wire.decode_message(t.events[1].wire, Simulation().curve)
            m3 = wire.decode_message(t.events[2].wire, Simulation().curve)
            return {("e1",) + (m1.e1.x, m1.e1.y), ("e5",) + (m2.e5.x, m2.e5.y),
                    ("e6",) + (m3.e6.x, m3.e6.y)}

        assert points(run_session(seed=1)).isdisjoint(points(run_session(seed=2)))

    def test_skew_beyond_window_rejected(self):
        config = SimConfig(skew={"user": -3000})
        t = run_session(seed=0, config=config)
        outcome = t.deliveries_of(0)[0].outcome
        assert "STALE_T1" in outcome
        assert "user" not in t.session_keys

    def test_wire_bytes_redecode_to_view(self):
        t = run_session(seed=3)
        sim = Simulation()
        for event in t.events:
            assert wire.describe_message(event.wire, sim.curve) == event.view

    def test_standard_curve_session(self):
        t = run_session(seed=0, config=SimConfig(curve="standard"))
        assert len(set(t.session_keys.values())) == 1

    def test_transcript_never_contains_session_key(self):
        t = run_session(seed=5)
        sk = next(iter(t.session_keys.values()))
        assert sk.hex() not in t.to_json()
        assert sk.hex() not in t.render_text()


class TestAdversaryActions:
    def test_drop_stalls_session(self):
        t = run_session(seed=0, adversary=AdversaryScript(actions={1: [Drop()]}))
        assert "sensor" not in t.session_keys
        assert len(t.deliveries) == 1  # only the M1 delivery happened

    def test_delay_within_window_tolerated(self):
        t = run_session(seed=0, adversary=AdversaryScript(actions={0: [Delay(500)]}))
        assert len(set(t.session_keys.values())) == 1

    def test_delay_beyond_window_rejected(self):
        t = run_session(seed=0, adversary=AdversaryScript(actions={0: [Delay(2500)]}))
        assert "STALE_T1" in t.deliveries_of(0)[0].outcome

    def test_mutation_rejected(self):
        t = run_session(seed=0, adversary=AdversaryScript(actions={3: [Mutate(12)]}))
        assert any("rejected" in d.outcome for d in t.deliveries)
        assert "user" not in t.session_keys

    def test_replay_copies_recorded_bytes(self):
        script = AdversaryScript(actions={0: [Replay(after_ms=400)]})  # no Pass
        t = run_session(seed=0, adversary=script)
        deliveries = t.deliveries_of(0)
        assert len(deliveries) == 1
        assert deliveries[0].t_delivered == t.events[0].t_sent + 400

    def test_injection(self):
        from wsnakep.simnet import Inject

        script = AdversaryScript(injections=[Inject(at_ms=2, to="gateway",
                                                    wire=b"\xde\xad")])
        t = run_session(seed=0, adversary=script)
        injected = t.deliveries_of(None)
        assert len(injected) == 1 and "MALFORMED" in injected[0].outcome
        # the honest session still completes around the injection
        assert len(set(t.session_keys.values())) == 1


class TestDosProbes:
    def test_unparseable_bytes_cost_nothing(self):
        sim = Simulation(seed=1)
        outcome, ops = dos_probe(sim, b"\x00\x01\x02")
        assert "rejected" in outcome
        assert (ops.hash_ops, ops.ecc_ops, ops.sym_ops) == (0, 0, 0)

    def test_garbage_ciphertext_costs_one_mult_one_open(self):
        sim = Simulation(seed=1)
        rng = random.Random(5)
        e1 = scalar_mult(rng.randrange(1, sim.curve.n), sim.curve.g, sim.curve)
        bogus = M1(e1=e1, e3=Ciphertext(0x01, bytes(rng.randbytes(50))))
        outcome, ops = dos_probe(sim, wire.encode_message(bogus, sim.curve))
        assert "DECRYPT_FAILED" in outcome
        assert (ops.hash_ops, ops.ecc_ops, ops.sym_ops) == (0, 1, 1)

    def test_forged_relay_costs_sensor_one_hash(self):
        sim = Simulation(seed=1)
        rng = random.Random(6)
        bogus = M2(sp1=bytes(rng.randbytes(32)), sp2=bytes(rng.randbytes(32)),
                   t2=0, e5=scalar_mult(3, sim.curve.g, sim.curve))
        outcome, ops = dos_probe(sim, wire.encode_message(bogus, sim.curve),
                                 to="sensor")
        assert "SP2_MISMATCH" in outcome
        assert (ops.hash_ops, ops.ecc_ops, ops.sym_ops) == (1, 0, 0)

    def test_rejected_probes_cost_less_than_honest_legs(self):
        # honest per-message gateway cost is 2 EC mults (request) and 1 (reply);
        # every rejected probe must stay strictly below the cheapest leg it hits
        sim = Simulation(seed=1)
        rng = random.Random(7)
        probes = [
            (b"junk", "gateway"),
            (wire.encode_message(
                M1(e1=scalar_mult(2, sim.curve.g, sim.curve),
                   e3=Ciphertext(0x01, bytes(rng.randbytes(40)))), sim.curve),
             "gateway"),
            (wire.encode_message(
                M2(sp1=bytes(32), sp2=bytes(32), t2=0,
                   e5=scalar_mult(3, sim.curve.g, sim.curve)), sim.curve),
             "sensor"),
        ]
        for payload, target in probes:
            outcome, ops = dos_probe(Simulation(seed=1), payload, to=target)
            assert "rejected" in outcome
            assert ops.ecc_ops < 2


class TestAttackCatalog:
    @pytest.mark.parametrize("name", sorted(ATTACKS))
    def test_catalog_runs_deterministically(self, name):
        a = run_attack(name, seed=11)
        b = run_attack(name, seed=11)
        assert a.to_dict() == b.to_dict()

    def test_default_config_verdicts(self):
        expected_prevented = [
            "replay-m1-late", "replay-m1-fast", "dos-garbage-m1",
            "dos-garbage-m2", "insider-intercept-sp1",
            "stolen-card-no-password", "wrong-sid-routing",
            "pc-lost-confirmation",
        ]
        for name in expected_prevented:
            outcome = run_attack(name, seed=2)
            assert outcome.verdict == "prevented", (name, outcome.notes)
            assert not outcome.diverges

    def test_stolen_verifier_succeeds_and_diverges(self):
        outcome = run_attack("stolen-verifier-forge", seed=2)
        assert outcome.verdict == "succeeded"
        assert outcome.diverges
        assert outcome.claimed == "prevented"

    def test_compromise_sanity_succeeds_without_divergence(self):
        outcome = run_attack("compromise-s-z", seed=2)
        assert outcome.verdict == "succeeded"
        assert not outcome.diverges

    def test_replay_fast_cache_off_documented_gap(self):
        on = run_attack("replay-m1-fast", seed=2)
        off = run_attack("replay-m1-fast", seed=2,
                         config=SimConfig(replay_cache=False))
        assert on.verdict == "prevented" and not on.diverges
        assert off.verdict == "succeeded" and off.diverges

    def test_unknown_scenario_lists_catalog(self):
        with pytest.raises(ValueError, match="catalog"):
            run_attack("no-such-thing")

    def test_report_renders(self):
        outcome = run_attack("replay-m1-late", seed=2)
        text = outcome.render_text()
        assert "replay-m1-late" in text and "matches claim" in text
        assert outcome.to_dict()["verdict"] == "prevented"


class TestTamperAttack:
    def test_every_field_bit_flip_prevented(self):
        outcome = run_attack("tamper-any-bit", seed=4)
        assert outcome.verdict == "prevented"
        assert not outcome.diverges
