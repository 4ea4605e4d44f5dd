"""Counter-based random streams for reproducible, parallel simulation.

Every random quantity in the flight simulator is a pure function of
(seed, scenario key, entity index, draw slot), computed by hashing the
indices with a splitmix64-style mixer and mapping the result to [0, 1).
Draws therefore never depend on evaluation order, worker count, or how
many other entities exist -- the properties the simulator's determinism
contract requires.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_INV_2_53 = float(2.0**-53)


def _mix(h: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, elementwise on uint64 input."""
    h = (h + _GOLDEN) & np.uint64(0xFFFFFFFFFFFFFFFF)
    h = (h ^ (h >> _U30)) * _MIX1
    h = (h ^ (h >> _U27)) * _MIX2
    return h ^ (h >> _U31)


def fold(key, *parts):
    """Fold integer parts (scalars or arrays) into a uint64 hash.

    Each part passes through the full finalizer before being absorbed, so
    nearby indices land on unrelated points of the stream.
    """
    with np.errstate(over="ignore"):
        h = _mix(np.asarray(key, dtype=np.uint64))
        for p in parts:
            h = _mix(h ^ _mix(np.asarray(p, dtype=np.uint64)))
    return h


def uniform_at(key, *parts):
    """Uniform draws in [0, 1) addressed by (key, *parts).

    Scalar parts give a scalar float; array parts broadcast elementwise.
    """
    h = fold(key, *parts)
    u = (h >> _U11).astype(np.float64) * _INV_2_53
    return float(u) if u.ndim == 0 else u


def float_bits(x: float) -> int:
    """IEEE-754 bit pattern of a float, for keying streams on real-valued
    parameters without rounding ambiguity."""
    return int(np.float64(x).view(np.uint64))


def scenario_key(seed: int, lam: float, area_side: float, scenario_index: int) -> int:
    """Key identifying one scenario draw within a run.

    Depends on the density and area (bit-exactly), so a given (seed, lambda)
    reproduces the same scenarios regardless of which other densities a
    sweep contains.
    """
    return int(fold(seed, float_bits(lam), float_bits(area_side), scenario_index))


# Stream tags separating independent draw families within a scenario.
STREAM_UAV = 1
STREAM_PAIR_EPS = 2
