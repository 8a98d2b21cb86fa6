"""Exact cost arithmetic, instrumented counts, and table rendering."""

from decimal import Decimal

import pytest
from hypothesis import given, settings, strategies as st

from wsnakep.costmodel import (
    CostProfile,
    HonestRunRequired,
    RoleCounts,
    SchemeProfile,
    UnitCosts,
    builtin_profiles,
    derivation_overhead,
    measure_counts,
    quantize5,
    render_table,
    table_rows,
    total_cost,
)
from wsnakep.simnet import AdversaryScript, Drop, SimConfig, run_session

PAPER_UNITS = UnitCosts.default()

# printed reference totals the builtin table must reproduce exactly
REFERENCE_TOTALS = {
    "choi2016": Decimal("0.13936"),
    "moon2017": Decimal("0.11892"),
    "moghadam2020": Decimal("0.14626"),
    "ours": Decimal("0.1453"),
}


class TestTotals:
    def test_builtin_totals_exact_at_five_decimals(self):
        for scheme in builtin_profiles():
            got = quantize5(total_cost(scheme.profile, PAPER_UNITS))
            assert got == quantize5(REFERENCE_TOTALS[scheme.label]), scheme.label

    def test_zero_profile(self):
        assert total_cost(CostProfile(), PAPER_UNITS) == 0

    def test_unit_pricing(self):
        ones = UnitCosts.of(1, 1, 1)
        for scheme in builtin_profiles():
            t = scheme.profile.totals()
            assert total_cost(scheme.profile, ones) == t.n_h + t.n_ecc + t.n_sym

    @given(
        st.integers(min_value=0, max_value=50),
        st.integers(min_value=0, max_value=50),
        st.integers(min_value=0, max_value=50),
        st.integers(min_value=1, max_value=9999),
    )
    @settings(max_examples=100)
    def test_linearity_in_counts_and_units(self, h, e, s, unit_scale):
        units = UnitCosts.of(
            Decimal(unit_scale) / 10000,
            Decimal(unit_scale) / 1000,
            Decimal(unit_scale) / 100,
        )
        base = CostProfile(user=RoleCounts(h, e, s))
        bumped = CostProfile(user=RoleCounts(h + 1, e, s))
        assert total_cost(bumped, units) - total_cost(base, units) == units.th
        doubled = CostProfile(user=RoleCounts(2 * h, 2 * e, 2 * s))
        assert total_cost(doubled, units) == 2 * total_cost(base, units)

    def test_unit_costs_positive(self):
        with pytest.raises(ValueError):
            UnitCosts.of(0, 1, 1)

    def test_counts_non_negative(self):
        with pytest.raises(ValueError):
            RoleCounts(-1, 0, 0)


class TestMeasuredCounts:
    def test_honest_run_matches_published_row(self):
        profile = measure_counts(run_session(seed=9))
        assert profile.user == RoleCounts(3, 2, 2)
        assert profile.gateway == RoleCounts(4, 3, 2)
        assert profile.sensor == RoleCounts(3, 2, 0)

    def test_measured_total_matches_printed_value(self):
        profile = measure_counts(run_session(seed=9))
        assert quantize5(total_cost(profile, PAPER_UNITS)) == Decimal("0.14530")

    def test_profiles_identical_across_runs(self):
        assert measure_counts(run_session(seed=1)) == \
            measure_counts(run_session(seed=2024))

    def test_derivation_hashes_reported_separately(self):
        t = run_session(seed=9)
        overhead = derivation_overhead(t)
        assert overhead == {"user": 2, "gateway": 4, "sensor": 1}
        folded = measure_counts(t, include_derivation_hashes=True)
        assert folded.user.n_h == 3 + 2
        assert folded.gateway.n_h == 4 + 4
        assert folded.sensor.n_h == 3 + 1

    def test_non_honest_transcript_rejected(self):
        broken = run_session(seed=9, adversary=AdversaryScript(actions={1: [Drop()]}))
        with pytest.raises(HonestRunRequired):
            measure_counts(broken)

    def test_standard_curve_same_counts(self):
        profile = measure_counts(run_session(seed=3, config=SimConfig(curve="standard")))
        assert profile == measure_counts(run_session(seed=3))


class TestTable:
    def test_four_rows_with_exact_costs(self):
        rows = table_rows()
        assert [r["scheme"] for r in rows] == [
            "choi2016", "moon2017", "moghadam2020", "ours"]
        assert {r["scheme"]: r["cost_s"] for r in rows} == {
            "choi2016": "0.13936",
            "moon2017": "0.11892",
            "moghadam2020": "0.14626",
            "ours": "0.1453",
        }

    def test_formulas_render(self):
        rows = {r["scheme"]: r for r in table_rows()}
        assert rows["ours"]["user"] == "3Th + 2Tecc + 2Tsym"
        assert rows["ours"]["sensor"] == "3Th + 2Tecc"
        assert rows["ours"]["total"] == "10Th + 7Tecc + 4Tsym"
        assert rows["choi2016"]["total"] == "8Th + 8Tecc"

    def test_text_table_contains_all_schemes(self):
        text = render_table()
        for label in REFERENCE_TOTALS:
            assert label in text
        assert "0.1453" in text

    def test_empty_scheme_list(self):
        rows = table_rows(schemes=[])
        assert rows == []
        text = render_table(schemes=[])
        assert "Scheme" in text  # header only

    def test_duplicate_labels_rejected(self):
        dup = [SchemeProfile("x", CostProfile()), SchemeProfile("x", CostProfile())]
        with pytest.raises(ValueError, match="unique"):
            table_rows(schemes=dup)

    def test_custom_units_flow_through(self):
        ones = UnitCosts.of(1, 1, 1)
        rows = {r["scheme"]: r for r in table_rows(units=ones)}
        assert rows["ours"]["cost_s"] == "21"

    def test_measured_row_equals_builtin_ours(self):
        measured = measure_counts(run_session(seed=0))
        builtin = next(s.profile for s in builtin_profiles() if s.label == "ours")
        assert measured == builtin
