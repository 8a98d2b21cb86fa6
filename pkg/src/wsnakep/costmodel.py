"""Operation-count accounting and the comparative cost table.

Costs are modelled, not benchmarked: each scheme is a per-role tally of
hash, EC point-multiplication and symmetric cipher operations, priced at
fixed unit costs on a hypothetical CPU (XOR is treated as free).  Totals
use exact decimal arithmetic because the built-in table is checked for
equality at five decimal places, not float proximity.

The "ours" row is not hand-written: :func:`measure_counts` reads the
instrumentation tallies captured during an honest simulated handshake, so
the table entry and the executable protocol can never drift apart.
Derivation hashes (key derivation and point digests) are implementation
overhead outside the protocol-level accounting; they are tallied in a
separate column unless explicitly folded in.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .simnet import Transcript

# unit costs of the reference CPU model, seconds per operation
DEFAULT_UNIT_COSTS = ("0.00032", "0.0171", "0.0056")

ROLES = ("user", "gateway", "sensor")


@dataclass(frozen=True)
class UnitCosts:
    th: Decimal
    tecc: Decimal
    tsym: Decimal

    def __post_init__(self) -> None:
        for value in (self.th, self.tecc, self.tsym):
            if value <= 0:
                raise ValueError("unit costs must be strictly positive")

    @classmethod
    def default(cls) -> "UnitCosts":
        th, tecc, tsym = (Decimal(v) for v in DEFAULT_UNIT_COSTS)
        return cls(th=th, tecc=tecc, tsym=tsym)

    @classmethod
    def of(cls, th: str | float, tecc: str | float, tsym: str | float) -> "UnitCosts":
        return cls(Decimal(str(th)), Decimal(str(tecc)), Decimal(str(tsym)))


@dataclass(frozen=True)
class RoleCounts:
    n_h: int = 0
    n_ecc: int = 0
    n_sym: int = 0

    def __post_init__(self) -> None:
        if min(self.n_h, self.n_ecc, self.n_sym) < 0:
            raise ValueError("operation counts are non-negative")

    def formula(self) -> str:
        terms = []
        for count, unit in ((self.n_h, "Th"), (self.n_ecc, "Tecc"), (self.n_sym, "Tsym")):
            if count:
                terms.append(f"{count}{unit}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class CostProfile:
    user: RoleCounts = RoleCounts()
    gateway: RoleCounts = RoleCounts()
    sensor: RoleCounts = RoleCounts()

    def role(self, name: str) -> RoleCounts:
        return getattr(self, name)

    def totals(self) -> RoleCounts:
        return RoleCounts(
            n_h=self.user.n_h + self.gateway.n_h + self.sensor.n_h,
            n_ecc=self.user.n_ecc + self.gateway.n_ecc + self.sensor.n_ecc,
            n_sym=self.user.n_sym + self.gateway.n_sym + self.sensor.n_sym,
        )


@dataclass(frozen=True)
class SchemeProfile:
    label: str
    profile: CostProfile


def total_cost(profile: CostProfile, units: UnitCosts | None = None) -> Decimal:
    """Exact total in seconds: sum over roles of n_h*Th + n_ecc*Tecc + n_sym*Tsym."""
    units = units or UnitCosts.default()
    t = profile.totals()
    return t.n_h * units.th + t.n_ecc * units.tecc + t.n_sym * units.tsym


class HonestRunRequired(ValueError):
    """measure_counts is defined only for completed three-party handshakes."""


def measure_counts(transcript: Transcript,
                   include_derivation_hashes: bool = False) -> CostProfile:
    """Per-role counts tallied by the primitive instrumentation during one
    honest handshake.  Default accounting counts protocol-level operations
    only; pass ``include_derivation_hashes=True`` to fold the key-derivation
    and point-digest hashes into the hash column."""
    completed = [p for p, o in transcript.outcomes.items() if o.status == "completed"]
    if sorted(completed) != sorted(ROLES):
        raise HonestRunRequired(
            f"transcript is not an honest completed handshake: {transcript.outcomes}"
        )
    counts = {}
    for role in ROLES:
        ops = transcript.ops.get(role, {})
        n_h = ops.get("hash_ops", 0)
        if include_derivation_hashes:
            n_h += ops.get("derivation_hashes", 0)
        counts[role] = RoleCounts(
            n_h=n_h, n_ecc=ops.get("ecc_ops", 0), n_sym=ops.get("sym_ops", 0)
        )
    return CostProfile(**counts)


def derivation_overhead(transcript: Transcript) -> dict[str, int]:
    """Implementation-overhead hash count per role, reported alongside the
    protocol-level columns."""
    return {
        role: transcript.ops.get(role, {}).get("derivation_hashes", 0)
        for role in ROLES
    }


def builtin_profiles() -> list[SchemeProfile]:
    """The four compared schemes' per-role operation counts."""
    return [
        SchemeProfile("choi2016", CostProfile(
            user=RoleCounts(1, 2, 0),
            gateway=RoleCounts(4, 4, 0),
            sensor=RoleCounts(3, 2, 0),
        )),
        SchemeProfile("moon2017", CostProfile(
            user=RoleCounts(6, 3, 0),
            gateway=RoleCounts(6, 1, 1),
            sensor=RoleCounts(4, 2, 1),
        )),
        SchemeProfile("moghadam2020", CostProfile(
            user=RoleCounts(5, 4, 2),
            gateway=RoleCounts(5, 2, 2),
            sensor=RoleCounts(3, 1, 0),
        )),
        SchemeProfile("ours", CostProfile(
            user=RoleCounts(3, 2, 2),
            gateway=RoleCounts(4, 3, 2),
            sensor=RoleCounts(3, 2, 0),
        )),
    ]


def quantize5(value: Decimal) -> Decimal:
    return value.quantize(Decimal("0.00001"))


def _fmt_cost(value: Decimal) -> str:
    s = str(quantize5(value))
    return s.rstrip("0").rstrip(".") if "." in s else s


def table_rows(schemes: list[SchemeProfile] | None = None,
               units: UnitCosts | None = None) -> list[dict]:
    schemes = builtin_profiles() if schemes is None else schemes
    units = units or UnitCosts.default()
    labels = [s.label for s in schemes]
    if len(set(labels)) != len(labels):
        raise ValueError("scheme labels must be unique")
    rows = []
    for scheme in schemes:
        p = scheme.profile
        rows.append({
            "scheme": scheme.label,
            "user": p.user.formula(),
            "gateway": p.gateway.formula(),
            "sensor": p.sensor.formula(),
            "total": p.totals().formula(),
            "cost_s": _fmt_cost(total_cost(p, units)),
        })
    return rows


def render_table(schemes: list[SchemeProfile] | None = None,
                 units: UnitCosts | None = None) -> str:
    """Aligned text table of per-role formulas and exact totals."""
    units = units or UnitCosts.default()
    rows = table_rows(schemes, units)
    header = {"scheme": "Scheme", "user": "User", "gateway": "Gateway",
              "sensor": "Sensor", "total": "Total", "cost_s": "Cost (s)"}
    columns = list(header)
    widths = {
        c: max([len(header[c])] + [len(r[c]) for r in rows]) for c in columns
    }
    def fmt(row: dict) -> str:
        return "  ".join(row[c].ljust(widths[c]) for c in columns)
    lines = [
        f"unit costs: Th={units.th}s Tecc={units.tecc}s Tsym={units.tsym}s "
        "(XOR negligible)",
        fmt(header),
        fmt({c: "-" * widths[c] for c in columns}),
    ]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines)
