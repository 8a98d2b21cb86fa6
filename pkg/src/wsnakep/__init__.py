"""ECDH-based mutual authentication and key exchange for wireless sensor
networks, with a deterministic attack simulator, a symbolic secrecy
analyzer, and an operation-cost model that audit the protocol's claimed
security and performance properties end to end."""

from .primitives import (
    Ciphertext,
    CurveParams,
    GroupPoint,
    OpCounter,
    get_curve,
    p256_curve,
    toy_curve,
)
from .protocol import (
    Credentials,
    GatewayState,
    Rejected,
    RejectReason,
    SensorState,
    SmartCard,
)
from .simnet import ATTACKS, SimConfig, Simulation, run_attack, run_session
from .dolevyao import SCENARIOS, run_secrecy_scenario
from .costmodel import UnitCosts, builtin_profiles, measure_counts, total_cost

__version__ = "0.1.0"

__all__ = [
    "ATTACKS",
    "Ciphertext",
    "Credentials",
    "CurveParams",
    "GatewayState",
    "GroupPoint",
    "OpCounter",
    "Rejected",
    "RejectReason",
    "SCENARIOS",
    "SensorState",
    "SimConfig",
    "Simulation",
    "SmartCard",
    "UnitCosts",
    "builtin_profiles",
    "get_curve",
    "measure_counts",
    "p256_curve",
    "run_attack",
    "run_secrecy_scenario",
    "run_session",
    "total_cost",
    "toy_curve",
    "__version__",
]
