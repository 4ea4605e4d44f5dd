"""Pairwise UAV near-collision volumes and broadcast-format trade studies.

Library layout:
    distributions  densities, quantiles, and samplers for every model term
    geometry       per-pair separation arithmetic under a message format
    remoteid       binary broadcast codec and technology profiles
    flightsim      deterministic parallel Monte Carlo conflict counting
    config / cli   run configuration and the command-line front end
"""

from .distributions import (
    GPS_ACCURACY_STANDARDS,
    UAV_CATEGORIES,
    GpsAccuracyStandard,
    SpeedModel,
    UavCategory,
)
from .geometry import (
    AF_MAX,
    EPS_UPPER_BOUND,
    EpsMode,
    MessageFormat,
    UavProfile,
    UncertaintyBudget,
    r_mac,
    r_unmac,
    unmac_diameter,
)
from .flightsim import ConflictStats, Scenario, Trajectory, generate_scenario, run
from .remoteid import BROADCAST_PROFILES, RemoteIdMessage, decode, encode

__all__ = [
    "AF_MAX",
    "BROADCAST_PROFILES",
    "ConflictStats",
    "EPS_UPPER_BOUND",
    "EpsMode",
    "GPS_ACCURACY_STANDARDS",
    "GpsAccuracyStandard",
    "MessageFormat",
    "RemoteIdMessage",
    "Scenario",
    "SpeedModel",
    "Trajectory",
    "UAV_CATEGORIES",
    "UavCategory",
    "UavProfile",
    "UncertaintyBudget",
    "decode",
    "encode",
    "generate_scenario",
    "r_mac",
    "r_unmac",
    "run",
    "unmac_diameter",
]

__version__ = "0.1.0"
