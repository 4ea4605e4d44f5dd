"""Monte Carlo flight simulator: conflict and collision rates vs density.

Aircraft fly straight constant-speed legs between uniform endpoints in a
square area, all departing at t=0. Every pair is screened by closest point
of approach; pairs inside the worst-case envelope are checked against the
physical collision radius and against each message format's separation
radius, and the counts are normalized by accumulated flight hours.

Randomness is counter-based (see :mod:`unmac.rng`): every draw is addressed
by (seed, density, area, scenario, entity), so results are bit-identical
for any worker count and every aircraft's draws are independent of how
many others exist.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import erfinv, ndtri

from .distributions import UAV_CATEGORIES, GPS_ACCURACY_STANDARDS, UavCategory
from .geometry import (
    AF_MAX,
    EPS_UPPER_BOUND,
    EpsMode,
    MessageFormat,
    MobilityPolicy,
    UavProfile,
    format_unmac_diameter,
    r_mac,
    r_unmac,
)
from .rng import STREAM_PAIR_EPS, STREAM_UAV, scenario_key, uniform_at

_SQRT2 = math.sqrt(2.0)

#: Fastest category's maximum airspeed, m/s (drives the screening envelope).
V_MAX_FASTEST = UAV_CATEGORIES[4].v_max

_CAT_MU = np.array([UAV_CATEGORIES[k].v_cruise for k in (1, 2, 3, 4)])
_CAT_SIGMA = np.array(
    [(UAV_CATEGORIES[k].v_max - UAV_CATEGORIES[k].v_cruise) / 3.0 for k in (1, 2, 3, 4)]
)

# Draw-slot layout within a UAV's stream.
_SLOT_X0, _SLOT_Y0, _SLOT_X1, _SLOT_Y1 = 0, 1, 2, 3
_SLOT_CATEGORY = 4
_SLOT_AIRFRAME = 5
_SLOT_ENDPOINT_RETRY = 6  # two slots per retry
_SLOT_SPEED_BASE = 100  # one slot per rejection round
_MAX_RETRIES = 100


@dataclass(frozen=True)
class Trajectory:
    """Constant-velocity leg from ``start`` to ``end`` at ``speed`` m/s."""

    start: tuple[float, float]
    end: tuple[float, float]
    speed: float

    def __post_init__(self) -> None:
        if self.start == self.end:
            raise ValueError("trajectory endpoints must differ")
        if self.speed <= 0:
            raise ValueError(f"speed must be positive, got {self.speed}")

    @property
    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    @property
    def duration(self) -> float:
        return self.length / self.speed

    @property
    def heading(self) -> float:
        return math.atan2(self.end[1] - self.start[1], self.end[0] - self.start[0])

    @property
    def velocity(self) -> tuple[float, float]:
        scale = self.speed / self.length
        return (
            (self.end[0] - self.start[0]) * scale,
            (self.end[1] - self.start[1]) * scale,
        )


@dataclass(frozen=True)
class Scenario:
    """One generated traffic picture, stored column-wise for batch math."""

    lam: float
    area_side: float
    n_uav: int
    seed: int
    scenario_index: int
    gps_sigma: float
    key: int
    start: np.ndarray  # (N, 2) m
    vel: np.ndarray  # (N, 2) m/s
    speed: np.ndarray  # (N,) m/s
    duration: np.ndarray  # (N,) s
    heading: np.ndarray  # (N,) rad
    airframe: np.ndarray  # (N,) m
    category_index: np.ndarray  # (N,) values 1..4

    @property
    def flight_hours(self) -> float:
        return float(self.duration.sum()) / 3600.0

    def category(self, k: int) -> UavCategory:
        return UAV_CATEGORIES[int(self.category_index[k])]

    def uav(self, k: int) -> tuple[UavProfile, Trajectory]:
        """Materialize aircraft ``k`` as domain objects."""
        traj = Trajectory(
            start=(float(self.start[k, 0]), float(self.start[k, 1])),
            end=(
                float(self.start[k, 0] + self.vel[k, 0] * self.duration[k]),
                float(self.start[k, 1] + self.vel[k, 1] * self.duration[k]),
            ),
            speed=float(self.speed[k]),
        )
        profile = UavProfile(
            airframe_diameter=float(self.airframe[k]),
            gps_sigma=self.gps_sigma,
            category=self.category(k),
            speed=float(self.speed[k]),
            heading=float(self.heading[k]),
        )
        return profile, traj

    @property
    def uavs(self) -> list[tuple[UavProfile, Trajectory]]:
        return [self.uav(k) for k in range(self.n_uav)]


def generate_scenario(
    lam: float,
    area_km2: float = 10.0,
    seed: int = 0,
    scenario_index: int = 0,
    gps_sigma: float = GPS_ACCURACY_STANDARDS["zero-aod"].sigma,
) -> Scenario:
    """Generate round(lam * area) aircraft with uniform endpoints.

    Per aircraft: endpoints uniform in the square, category uniform over
    {1..4}, speed Gaussian for the category resampled into
    (0, 1.1*(mu+3*sigma)], airframe uniform over (0, AF_MAX]. Each
    aircraft's draws come from its own counter-based stream, so aircraft k
    is identical no matter how many others the scenario holds.

    Raises:
        ValueError: If fewer than two aircraft would be generated.
    """
    if lam <= 0:
        raise ValueError(f"density must be positive, got {lam}")
    n = int(round(lam * area_km2))
    if n < 2:
        raise ValueError(f"lam*area = {lam * area_km2:.3f} yields {n} aircraft; need >= 2")
    side = math.sqrt(area_km2) * 1000.0
    key = scenario_key(seed, lam, side, scenario_index)
    ks = np.arange(n, dtype=np.uint64)

    x0 = uniform_at(key, STREAM_UAV, ks, _SLOT_X0) * side
    y0 = uniform_at(key, STREAM_UAV, ks, _SLOT_Y0) * side
    x1 = uniform_at(key, STREAM_UAV, ks, _SLOT_X1) * side
    y1 = uniform_at(key, STREAM_UAV, ks, _SLOT_Y1) * side
    for retry in range(_MAX_RETRIES):
        degenerate = (x0 == x1) & (y0 == y1)
        if not degenerate.any():
            break
        slot = _SLOT_ENDPOINT_RETRY + 2 * retry
        x1[degenerate] = uniform_at(key, STREAM_UAV, ks[degenerate], slot) * side
        y1[degenerate] = uniform_at(key, STREAM_UAV, ks[degenerate], slot + 1) * side
    else:
        raise RuntimeError("endpoint resampling exhausted retries")

    cat = np.minimum((uniform_at(key, STREAM_UAV, ks, _SLOT_CATEGORY) * 4).astype(int), 3)
    mu, sig = _CAT_MU[cat], _CAT_SIGMA[cat]
    cap = 1.1 * (mu + 3.0 * sig)
    speed = np.full(n, np.nan)
    bad = np.ones(n, dtype=bool)
    for r in range(_MAX_RETRIES):
        if not bad.any():
            break
        u = uniform_at(key, STREAM_UAV, ks[bad], _SLOT_SPEED_BASE + r)
        v = mu[bad] + sig[bad] * ndtri(u)
        speed[bad] = v
        bad = ~((speed > 0.0) & (speed <= cap))
    else:
        raise RuntimeError("speed resampling exhausted retries")

    airframe = AF_MAX - uniform_at(key, STREAM_UAV, ks, _SLOT_AIRFRAME) * AF_MAX

    dx, dy = x1 - x0, y1 - y0
    length = np.hypot(dx, dy)
    duration = length / speed
    heading = np.arctan2(dy, dx)
    vel = np.stack([dx, dy], axis=1) * (speed / length)[:, None]

    return Scenario(
        lam=lam,
        area_side=side,
        n_uav=n,
        seed=seed,
        scenario_index=scenario_index,
        gps_sigma=gps_sigma,
        key=key,
        start=np.stack([x0, y0], axis=1),
        vel=vel,
        speed=speed,
        duration=duration,
        heading=heading,
        airframe=airframe,
        category_index=cat + 1,
    )


# ---------------------------------------------------------------------------
# Closest point of approach
# ---------------------------------------------------------------------------


def cpa(traj_i: Trajectory, traj_j: Trajectory) -> tuple[float, float]:
    """Time and distance of closest approach over the common flight window.

    Minimizes |p_i(t) - p_j(t)| for t in [0, min(T_i, T_j)] in closed form:
    the unconstrained minimizer -(dp.dv)/|dv|^2 clamped into the window.
    Zero relative velocity pins the time to 0.
    """
    t, miss = _cpa_arrays(
        np.array([traj_i.start]),
        np.array([traj_i.velocity]),
        np.array([traj_i.duration]),
        np.array([traj_j.start]),
        np.array([traj_j.velocity]),
        np.array([traj_j.duration]),
    )
    return float(t[0]), float(miss[0])


def _cpa_arrays(start_i, vel_i, dur_i, start_j, vel_j, dur_j):
    dp = start_i - start_j
    dv = vel_i - vel_j
    dv2 = np.einsum("ij,ij->i", dv, dv)
    t_end = np.minimum(dur_i, dur_j)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_star = np.where(dv2 > 0.0, -np.einsum("ij,ij->i", dp, dv) / dv2, 0.0)
    t_star = np.clip(t_star, 0.0, t_end)
    closest = dp + dv * t_star[:, None]
    miss = np.hypot(closest[:, 0], closest[:, 1])
    return t_star, miss


# ---------------------------------------------------------------------------
# Pair screening and evaluation
# ---------------------------------------------------------------------------


def prefilter_threshold(dt: float = 1.0) -> float:
    """Worst-case screening envelope: AF_MAX + 2*(eps_max + V_max*dt).

    Built from the largest airframe, the localization upper bound, and the
    fastest category's maximum airspeed; 190.5 m at dt = 1 s.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    return AF_MAX + 2.0 * (EPS_UPPER_BOUND + V_MAX_FASTEST * dt)


def candidate_pairs(
    scenario: Scenario, threshold: float | None = None, block: int = 1024
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All-pairs CPA screen: keep pairs whose miss is within ``threshold``.

    ``threshold=None`` keeps every pair (used by the screening-soundness
    oracle). Returns (i, j, t_cpa, miss) arrays with i < j, processed in
    row blocks to bound memory.
    """
    n = scenario.n_uav
    keep_i: list[np.ndarray] = []
    keep_j: list[np.ndarray] = []
    keep_t: list[np.ndarray] = []
    keep_miss: list[np.ndarray] = []
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        ii, jj = np.meshgrid(np.arange(i0, i1), np.arange(n), indexing="ij")
        mask = jj > ii
        ii, jj = ii[mask], jj[mask]
        if ii.size == 0:
            continue
        t, miss = _cpa_arrays(
            scenario.start[ii],
            scenario.vel[ii],
            scenario.duration[ii],
            scenario.start[jj],
            scenario.vel[jj],
            scenario.duration[jj],
        )
        if threshold is not None:
            sel = miss <= threshold
            ii, jj, t, miss = ii[sel], jj[sel], t[sel], miss[sel]
        keep_i.append(ii)
        keep_j.append(jj)
        keep_t.append(t)
        keep_miss.append(miss)
    if not keep_i:
        empty = np.empty(0)
        return empty.astype(int), empty.astype(int), empty, empty
    return (
        np.concatenate(keep_i),
        np.concatenate(keep_j),
        np.concatenate(keep_t),
        np.concatenate(keep_miss),
    )


def prefilter(
    scenario: Scenario, threshold: float | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Screen all pairs against the worst-case envelope (default 190.5 m)."""
    if threshold is None:
        threshold = prefilter_threshold()
    return candidate_pairs(scenario, threshold)


def pair_eps(
    scenario: Scenario, i: np.ndarray, j: np.ndarray, eps_mode: EpsMode
) -> tuple[np.ndarray, np.ndarray]:
    """Reported localization errors for the given pairs.

    SAMPLED draws half-normal magnitudes from each pair's dedicated
    counter-based substream (addressed by the pair's indices, so the values
    do not depend on which other pairs are evaluated). FIXED_3SIGMA uses
    the 3-sigma bound.
    """
    if eps_mode is EpsMode.FIXED_3SIGMA:
        fixed = 3.0 * scenario.gps_sigma
        return np.full(len(i), fixed), np.full(len(j), fixed)
    u_i = uniform_at(scenario.key, STREAM_PAIR_EPS, i, j, 0)
    u_j = uniform_at(scenario.key, STREAM_PAIR_EPS, i, j, 1)
    sigma = scenario.gps_sigma
    return (
        sigma * _SQRT2 * erfinv(np.asarray(u_i)),
        sigma * _SQRT2 * erfinv(np.asarray(u_j)),
    )


@dataclass(frozen=True)
class PairEvaluation:
    """Outcome for one screened pair: CPA and per-format conflict flags."""

    i: int
    j: int
    t_cpa: float
    miss_distance: float
    mac: bool
    conflicts: Mapping[tuple[MessageFormat, float], bool]


def _conflict_flags(
    scenario: Scenario,
    i: np.ndarray,
    j: np.ndarray,
    miss: np.ndarray,
    formats: Sequence[MessageFormat],
    dt_list: Sequence[float],
    eps_mode: EpsMode,
) -> tuple[np.ndarray, dict[tuple[MessageFormat, float], np.ndarray]]:
    """MAC flags and per-(format, dt) conflict flags for pair arrays."""
    eps_i, eps_j = pair_eps(scenario, i, j, eps_mode)
    af_i, af_j = scenario.airframe[i], scenario.airframe[j]
    speed_i, speed_j = scenario.speed[i], scenario.speed[j]
    dvel = scenario.vel[i] - scenario.vel[j]
    v_rel = np.hypot(dvel[:, 0], dvel[:, 1])

    mac = miss < r_mac(af_i, af_j)
    flags: dict[tuple[MessageFormat, float], np.ndarray] = {}
    for fmt in formats:
        for dt in dt_list:
            d = format_unmac_diameter(
                fmt, af_i, af_j, eps_i, eps_j, speed_i, speed_j, dt, v_rel=v_rel
            )
            flags[(fmt, float(dt))] = miss < r_unmac(d)
    return mac, flags


def evaluate_pair(
    scenario: Scenario,
    i: int,
    j: int,
    formats: Sequence[MessageFormat],
    dt_list: Sequence[float],
    eps_mode: EpsMode = EpsMode.SAMPLED,
) -> PairEvaluation:
    """Evaluate one pair: MAC iff CPA miss is below the physical collision
    radius, conflict per (format, dt) iff below that format's separation
    radius."""
    if i == j:
        raise ValueError("pair indices must differ")
    if i > j:
        i, j = j, i
    profile_i, traj_i = scenario.uav(i)
    profile_j, traj_j = scenario.uav(j)
    t_cpa, miss = cpa(traj_i, traj_j)
    ii, jj = np.array([i]), np.array([j])
    mac, flags = _conflict_flags(
        scenario, ii, jj, np.array([miss]), formats, dt_list, eps_mode
    )
    return PairEvaluation(
        i=i,
        j=j,
        t_cpa=t_cpa,
        miss_distance=miss,
        mac=bool(mac[0]),
        conflicts={key: bool(v[0]) for key, v in flags.items()},
    )


# ---------------------------------------------------------------------------
# Density sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConflictStatsRow:
    """Accumulated counts and rates for one (density, format, dt) cell."""

    lam: float
    fmt: MessageFormat
    dt: float
    conflicts: int
    macs: int
    flight_hours: float

    @property
    def rate(self) -> float:
        return self.conflicts / self.flight_hours if self.flight_hours > 0 else 0.0

    @property
    def mac_rate(self) -> float:
        return self.macs / self.flight_hours if self.flight_hours > 0 else 0.0


@dataclass(frozen=True)
class ConflictStats:
    """Result table of a density sweep."""

    rows: tuple[ConflictStatsRow, ...]

    CSV_HEADER = "lambda,format,dt,conflicts,macs,flight_hours,rate"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.lam!r},{r.fmt.value},{r.dt!r},{r.conflicts},{r.macs},"
                f"{r.flight_hours!r},{r.rate!r}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ConflictStats":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != cls.CSV_HEADER:
            raise ValueError(f"malformed stats CSV: expected header {cls.CSV_HEADER!r}")
        rows = []
        for ln in lines[1:]:
            parts = ln.split(",")
            if len(parts) != 7:
                raise ValueError(f"malformed stats CSV row: {ln!r}")
            lam, fmt, dt, conflicts, macs, hours, _rate = parts
            rows.append(
                ConflictStatsRow(
                    lam=float(lam),
                    fmt=MessageFormat(fmt),
                    dt=float(dt),
                    conflicts=int(conflicts),
                    macs=int(macs),
                    flight_hours=float(hours),
                )
            )
        return cls(rows=tuple(rows))


def _scenario_counts(
    args: tuple,
) -> tuple[int, list[int], int, float]:
    """Worker task: one scenario's conflict counts.

    Returns (scenario_index, per-(format, dt) conflict counts in iteration
    order, MAC count, flight hours). Pure function of its arguments.
    """
    (
        seed,
        lam,
        area_km2,
        gps_sigma,
        scenario_index,
        format_values,
        dt_list,
        eps_mode_value,
        threshold,
    ) = args
    scenario = generate_scenario(
        lam, area_km2, seed=seed, scenario_index=scenario_index, gps_sigma=gps_sigma
    )
    formats = [MessageFormat(v) for v in format_values]
    i, j, _, miss = prefilter(scenario, threshold)
    mac, flags = _conflict_flags(
        scenario, i, j, miss, formats, dt_list, EpsMode(eps_mode_value)
    )
    counts = [int(flags[(fmt, float(dt))].sum()) for fmt in formats for dt in dt_list]
    return scenario_index, counts, int(mac.sum()), scenario.flight_hours


def run(
    lambdas: Iterable[float],
    *,
    seed: int,
    area_km2: float = 10.0,
    trajectory_budget: int = 100_000,
    formats: Sequence[MessageFormat] = tuple(MessageFormat),
    dt_list: Sequence[float] = (1.0, 0.02),
    eps_mode: EpsMode = EpsMode.SAMPLED,
    gps_sigma: float = GPS_ACCURACY_STANDARDS["zero-aod"].sigma,
    workers: int = 1,
    prefilter_dt: float | None = None,
) -> ConflictStats:
    """Sweep densities: accumulate scenarios until the trajectory budget.

    The screening envelope uses the largest dt being evaluated (or
    ``prefilter_dt`` if given). Scenario evaluation is parallel over a
    process pool; counts are integers and hours are reduced in scenario
    order, so the result is bit-identical for any worker count.
    """
    dt_list = [float(dt) for dt in dt_list]
    threshold = prefilter_threshold(prefilter_dt if prefilter_dt is not None else max(dt_list))
    rows: list[ConflictStatsRow] = []
    for lam in lambdas:
        n_uav = int(round(lam * area_km2))
        if n_uav < 2:
            raise ValueError(f"lam={lam} yields {n_uav} aircraft; need >= 2")
        n_scenarios = max(1, math.ceil(trajectory_budget / n_uav))
        tasks = [
            (
                seed,
                lam,
                area_km2,
                gps_sigma,
                idx,
                tuple(f.value for f in formats),
                tuple(dt_list),
                eps_mode.value,
                threshold,
            )
            for idx in range(n_scenarios)
        ]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_scenario_counts, tasks, chunksize=8))
        else:
            results = [_scenario_counts(t) for t in tasks]
        results.sort(key=lambda r: r[0])

        n_cells = len(formats) * len(dt_list)
        totals = [0] * n_cells
        macs = 0
        hours = 0.0
        for _, counts, mac_count, scen_hours in results:
            for c in range(n_cells):
                totals[c] += counts[c]
            macs += mac_count
            hours += scen_hours

        cell = 0
        for fmt in formats:
            for dt in dt_list:
                rows.append(
                    ConflictStatsRow(
                        lam=lam,
                        fmt=fmt,
                        dt=dt,
                        conflicts=totals[cell],
                        macs=macs,
                        flight_hours=hours,
                    )
                )
                cell += 1
    return ConflictStats(rows=tuple(rows))
