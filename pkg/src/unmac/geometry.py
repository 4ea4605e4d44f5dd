"""Pairwise separation arithmetic for a UAV pair under a broadcast format.

The per-aircraft uncertainty disc combines airframe size, reported (or
upper-bounded) localization error, and the distance flown between two
broadcasts. The pairwise safety circle is the sum of both discs; which
bound enters each term depends on the message format in use.

Everything here is pure arithmetic on immutable inputs. The core term
functions accept floats or numpy arrays so the flight simulator can apply
them to whole pair batches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .distributions import UavCategory, sample_airframe, sample_half_normal

#: Largest modeled airframe diameter, m.
AF_MAX = 7.5

#: Worst-case per-aircraft GPS positioning error bound, m.
EPS_UPPER_BOUND = 40.0


class AfPolicy(Enum):
    """Which airframe size enters the separation formula."""

    MAX = "max"
    ACTUAL = "actual"


class LocPolicy(Enum):
    """Which localization error bound enters the separation formula."""

    UPPER_BOUND = "upper_bound"
    REPORTED = "reported"
    ZERO = "zero"


class MobilityPolicy(Enum):
    """How inter-broadcast displacement enters the separation formula."""

    SPEED_ONLY = "speed_only"
    SPEED_AND_DIRECTION = "speed_and_direction"
    NONE = "none"


class MessageFormat(Enum):
    """Broadcast format, from the mandated baseline to richer candidates.

    ``PERFECT_KNOWLEDGE`` is the zero-error baseline whose radius collapses
    to the physical collision radius; it has no wire representation.
    """

    STANDARD_REMOTE_ID = "standard-remote-id"
    CANDIDATE_1 = "candidate1"
    CANDIDATE_2 = "candidate2"
    CANDIDATE_3 = "candidate3"
    PERFECT_KNOWLEDGE = "perfect-knowledge"

    @property
    def af_policy(self) -> AfPolicy:
        return _POLICIES[self][0]

    @property
    def loc_policy(self) -> LocPolicy:
        return _POLICIES[self][1]

    @property
    def mobility_policy(self) -> MobilityPolicy:
        return _POLICIES[self][2]


_POLICIES: dict[MessageFormat, tuple[AfPolicy, LocPolicy, MobilityPolicy]] = {
    MessageFormat.STANDARD_REMOTE_ID: (
        AfPolicy.MAX,
        LocPolicy.UPPER_BOUND,
        MobilityPolicy.SPEED_ONLY,
    ),
    MessageFormat.CANDIDATE_1: (
        AfPolicy.MAX,
        LocPolicy.REPORTED,
        MobilityPolicy.SPEED_ONLY,
    ),
    MessageFormat.CANDIDATE_2: (
        AfPolicy.ACTUAL,
        LocPolicy.REPORTED,
        MobilityPolicy.SPEED_ONLY,
    ),
    MessageFormat.CANDIDATE_3: (
        AfPolicy.ACTUAL,
        LocPolicy.REPORTED,
        MobilityPolicy.SPEED_AND_DIRECTION,
    ),
    MessageFormat.PERFECT_KNOWLEDGE: (
        AfPolicy.ACTUAL,
        LocPolicy.ZERO,
        MobilityPolicy.NONE,
    ),
}


class EpsMode(Enum):
    """How a reported localization error is produced for a candidate format."""

    SAMPLED = "sampled"
    FIXED_3SIGMA = "fixed_3sigma"


@dataclass(frozen=True)
class UavProfile:
    """Ground truth for one aircraft: size, GPS quality, speed, and course."""

    airframe_diameter: float
    gps_sigma: float
    category: UavCategory
    speed: float
    heading: float

    def __post_init__(self) -> None:
        if not 0.0 < self.airframe_diameter <= AF_MAX:
            raise ValueError(
                f"airframe_diameter must lie in (0, {AF_MAX}], got {self.airframe_diameter}"
            )
        if self.gps_sigma <= 0:
            raise ValueError(f"gps_sigma must be positive, got {self.gps_sigma}")
        if self.speed <= 0:
            raise ValueError(f"speed must be positive, got {self.speed}")

    @property
    def velocity(self) -> tuple[float, float]:
        """(east, north) velocity components, m/s."""
        return (
            self.speed * math.cos(self.heading),
            self.speed * math.sin(self.heading),
        )


@dataclass(frozen=True)
class UncertaintyBudget:
    """Effective per-pair terms after the format's policies are applied."""

    eps_i: float
    eps_j: float
    af_i: float
    af_j: float
    mobility_term: float
    dt: float

    def __post_init__(self) -> None:
        for name in ("eps_i", "eps_j", "af_i", "af_j", "mobility_term", "dt"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def diameter(self) -> float:
        """Pairwise safety-circle diameter implied by this budget."""
        return self.af_i + self.af_j + 2.0 * (self.eps_i + self.eps_j) + self.mobility_term


# ---------------------------------------------------------------------------
# Core arithmetic (float or array inputs)
# ---------------------------------------------------------------------------


def uncertainty_diameter(d_af, eps, speed, dt, direction_known: bool = False):
    """Diameter of one aircraft's uncertainty disc.

    Direction unknown: d_af + 2*(eps + speed*dt) -- the aircraft may have
    moved speed*dt in any direction since its last broadcast. Direction
    known: d_af + 2*eps + speed*dt -- the displacement extends the disc on
    one side only.
    """
    if np.any(np.asarray(dt) < 0):
        raise ValueError("dt must be non-negative")
    if direction_known:
        return d_af + 2.0 * eps + speed * dt
    return d_af + 2.0 * (eps + speed * dt)


def mobility_term(policy: MobilityPolicy, speed_i, speed_j, dt, v_rel=None):
    """Mobility contribution to the pairwise diameter under ``policy``.

    SPEED_ONLY: 2*(speed_i + speed_j)*dt. SPEED_AND_DIRECTION: v_rel*dt with
    v_rel the relative ground-speed magnitude (zero for parallel motion).
    NONE: 0.
    """
    if policy is MobilityPolicy.SPEED_ONLY:
        return 2.0 * (speed_i + speed_j) * dt
    if policy is MobilityPolicy.SPEED_AND_DIRECTION:
        if v_rel is None:
            raise ValueError("v_rel is required under SPEED_AND_DIRECTION")
        return v_rel * dt
    return np.zeros_like(np.asarray(speed_i, dtype=float)) * dt


def relative_speed(speed_i, heading_i, speed_j, heading_j):
    """|v_i - v_j| from ground-truth speeds and headings."""
    dvx = speed_i * np.cos(heading_i) - speed_j * np.cos(heading_j)
    dvy = speed_i * np.sin(heading_i) - speed_j * np.sin(heading_j)
    return np.hypot(dvx, dvy)


def format_unmac_diameter(
    fmt: MessageFormat,
    af_i,
    af_j,
    eps_i,
    eps_j,
    speed_i,
    speed_j,
    dt,
    v_rel=None,
):
    """Pairwise diameter with the format's substitutions applied.

    ``eps_i``/``eps_j`` are the reported error values; they are ignored when
    the format carries no error field (upper bound or zero is used instead).
    ``v_rel`` is required only for direction-aware formats.
    """
    if fmt.af_policy is AfPolicy.MAX:
        af_i = np.full_like(np.asarray(af_i, dtype=float), AF_MAX)
        af_j = np.full_like(np.asarray(af_j, dtype=float), AF_MAX)
    if fmt.loc_policy is LocPolicy.UPPER_BOUND:
        eps_i = np.full_like(np.asarray(eps_i, dtype=float), EPS_UPPER_BOUND)
        eps_j = np.full_like(np.asarray(eps_j, dtype=float), EPS_UPPER_BOUND)
    elif fmt.loc_policy is LocPolicy.ZERO:
        eps_i = np.zeros_like(np.asarray(eps_i, dtype=float))
        eps_j = np.zeros_like(np.asarray(eps_j, dtype=float))
    mob = mobility_term(fmt.mobility_policy, speed_i, speed_j, dt, v_rel=v_rel)
    out = af_i + af_j + 2.0 * (eps_i + eps_j) + mob
    return float(out) if np.ndim(out) == 0 else out


def unmac_diameter(
    profile_i: UavProfile,
    profile_j: UavProfile,
    dt: float,
    fmt: MessageFormat,
    reported_eps: tuple[float, float] | None = None,
) -> float:
    """Pairwise safety-circle diameter for two profiled aircraft.

    ``reported_eps`` supplies the broadcast error magnitudes and is required
    for formats whose localization policy is REPORTED.

    Raises:
        ValueError: If ``dt`` is negative, or a reported-error format is
            evaluated without ``reported_eps``.
    """
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    if fmt.loc_policy is LocPolicy.REPORTED:
        if reported_eps is None:
            raise ValueError(f"{fmt.value} requires reported_eps")
        eps_i, eps_j = reported_eps
        if eps_i < 0 or eps_j < 0:
            raise ValueError(f"reported_eps must be non-negative, got {reported_eps}")
    else:
        eps_i = eps_j = 0.0
    v_rel = None
    if fmt.mobility_policy is MobilityPolicy.SPEED_AND_DIRECTION:
        v_rel = relative_speed(
            profile_i.speed, profile_i.heading, profile_j.speed, profile_j.heading
        )
    return float(
        format_unmac_diameter(
            fmt,
            profile_i.airframe_diameter,
            profile_j.airframe_diameter,
            eps_i,
            eps_j,
            profile_i.speed,
            profile_j.speed,
            dt,
            v_rel=v_rel,
        )
    )


def r_unmac(d_unmac):
    """Separation radius: half the pairwise diameter."""
    if np.any(np.asarray(d_unmac) < 0):
        raise ValueError("d_unmac must be non-negative")
    out = np.asarray(d_unmac, dtype=float) / 2.0
    return float(out) if out.ndim == 0 else out


def r_mac(d_af_i, d_af_j):
    """Physical collision radius (d_af_i + d_af_j) / 2."""
    if np.any(np.asarray(d_af_i) <= 0) or np.any(np.asarray(d_af_j) <= 0):
        raise ValueError("airframe diameters must be positive")
    out = (np.asarray(d_af_i, dtype=float) + np.asarray(d_af_j, dtype=float)) / 2.0
    return float(out) if out.ndim == 0 else out


def direction_known_bounds(
    profile_i: UavProfile,
    profile_j: UavProfile,
    dt: float,
    reported_eps: tuple[float, float],
) -> tuple[float, float]:
    """Range [a, a + dt*(V_i+V_j)] that brackets the direction-aware radius.

    a = r_mac + eps_i + eps_j. The direction-aware radius equals
    a + v_rel*dt/2 and v_rel never exceeds V_i + V_j, so it always lies
    inside the returned interval.
    """
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    eps_i, eps_j = reported_eps
    a = r_mac(profile_i.airframe_diameter, profile_j.airframe_diameter) + eps_i + eps_j
    return a, a + dt * (profile_i.speed + profile_j.speed)


# ---------------------------------------------------------------------------
# Monte Carlo sampling of the pairwise radius
# ---------------------------------------------------------------------------


def sample_speeds(
    rng: np.random.Generator,
    mu: np.ndarray,
    sigma: np.ndarray,
    max_retries: int = 100,
) -> np.ndarray:
    """Vectorized Gaussian speed draws with the (0, 1.1*(mu+3*sigma)] window."""
    v = rng.normal(mu, sigma)
    cap = 1.1 * (mu + 3.0 * sigma)
    bad = (v <= 0.0) | (v > cap)
    for _ in range(max_retries):
        if not bad.any():
            return v
        v[bad] = rng.normal(mu[bad], sigma[bad])
        bad = (v <= 0.0) | (v > cap)
    raise RuntimeError(f"speed sampling exhausted {max_retries} retries")


def sample_pair_radii(
    rng: np.random.Generator,
    n_samples: int,
    formats: tuple[MessageFormat, ...],
    dt_list: tuple[float, ...],
    gps_sigma: float,
    eps_mode: EpsMode = EpsMode.SAMPLED,
    af_max: float = AF_MAX,
) -> dict[tuple[MessageFormat, float], np.ndarray]:
    """Sample the separation radius for random aircraft pairs.

    Each sample draws two aircraft (category, speed, airframe, heading) and
    one pair of localization errors per ``eps_mode``; every requested
    (format, dt) combination is evaluated on the same draw so the samples
    are directly comparable across formats.

    Returns a dict mapping (format, dt) to an array of ``n_samples`` radii.
    """
    from .distributions import UAV_CATEGORIES

    cat_mu = np.array([UAV_CATEGORIES[k].v_cruise for k in (1, 2, 3, 4)])
    cat_sigma = np.array(
        [
            (UAV_CATEGORIES[k].v_max - UAV_CATEGORIES[k].v_cruise) / 3.0
            for k in (1, 2, 3, 4)
        ]
    )

    def draw_side() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        cat = rng.integers(0, 4, n_samples)
        speed = sample_speeds(rng, cat_mu[cat], cat_sigma[cat])
        af = sample_airframe(rng, af_max, size=n_samples)
        heading = rng.uniform(-math.pi, math.pi, n_samples)
        return speed, af, heading, cat

    speed_i, af_i, heading_i, _ = draw_side()
    speed_j, af_j, heading_j, _ = draw_side()

    if eps_mode is EpsMode.SAMPLED:
        eps_i = sample_half_normal(gps_sigma, rng, size=n_samples)
        eps_j = sample_half_normal(gps_sigma, rng, size=n_samples)
    else:
        eps_i = np.full(n_samples, 3.0 * gps_sigma)
        eps_j = np.full(n_samples, 3.0 * gps_sigma)

    v_rel = relative_speed(speed_i, heading_i, speed_j, heading_j)

    out: dict[tuple[MessageFormat, float], np.ndarray] = {}
    for fmt in formats:
        for dt in dt_list:
            d = format_unmac_diameter(
                fmt, af_i, af_j, eps_i, eps_j, speed_i, speed_j, dt, v_rel=v_rel
            )
            out[(fmt, dt)] = r_unmac(d)
    return out
