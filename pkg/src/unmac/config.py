"""Run configuration: dataclass, INI file round trip, flag overlay.

Config files are plain INI with a single ``[run]`` section whose keys
mirror :class:`RunConfig` field names, so sweeps are versionable and a run
can be reproduced from the echoed file alone.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
from dataclasses import dataclass

from .distributions import GPS_ACCURACY_STANDARDS
from .geometry import EpsMode, MessageFormat

DEFAULT_FORMATS = (
    MessageFormat.PERFECT_KNOWLEDGE,
    MessageFormat.CANDIDATE_3,
    MessageFormat.CANDIDATE_2,
    MessageFormat.CANDIDATE_1,
    MessageFormat.STANDARD_REMOTE_ID,
)


def resolve_gps_sigma(spec: str) -> float:
    """Interpret a GPS accuracy spec: a named accuracy class or an explicit
    per-axis sigma in meters."""
    std = GPS_ACCURACY_STANDARDS.get(spec)
    if std is not None:
        return std.sigma
    try:
        sigma = float(spec)
    except ValueError:
        names = ", ".join(GPS_ACCURACY_STANDARDS)
        raise ValueError(
            f"unknown GPS accuracy spec {spec!r}; use one of [{names}] or a sigma in meters"
        ) from None
    if sigma <= 0:
        raise ValueError(f"gps sigma must be positive, got {sigma}")
    return sigma


@dataclass(frozen=True)
class RunConfig:
    """Everything a sweep needs; defaults mirror the reference scenario."""

    seed: int = 1
    area_km2: float = 10.0
    lambdas: tuple[float, ...] = (5.0, 10.0, 20.0, 40.0, 63.0)
    trajectory_budget: int = 100_000
    formats: tuple[MessageFormat, ...] = DEFAULT_FORMATS
    dt_list: tuple[float, ...] = (1.0, 0.02)
    gps_standard: str = "zero-aod"
    eps_mode: EpsMode = EpsMode.SAMPLED
    workers: int = 1
    out_dir: str = "out"

    def __post_init__(self) -> None:
        if not self.lambdas:
            raise ValueError("lambdas must not be empty")
        if any(lam <= 0 for lam in self.lambdas):
            raise ValueError(f"densities must be positive, got {self.lambdas}")
        if not self.formats:
            raise ValueError("formats must not be empty")
        if not self.dt_list:
            raise ValueError("dt_list must not be empty")
        if any(dt <= 0 for dt in self.dt_list):
            raise ValueError(f"dt values must be positive, got {self.dt_list}")
        if self.trajectory_budget < 1000:
            raise ValueError(
                f"trajectory_budget must be >= 1000, got {self.trajectory_budget}"
            )
        if self.area_km2 <= 0:
            raise ValueError(f"area_km2 must be positive, got {self.area_km2}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        resolve_gps_sigma(self.gps_standard)  # fail fast on bad specs

    @property
    def gps_sigma(self) -> float:
        return resolve_gps_sigma(self.gps_standard)

    def replace(self, **overrides) -> "RunConfig":
        """New config with the given non-None overrides applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes)


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip())


def load_config(path: str) -> RunConfig:
    """Read a RunConfig from an INI file with a ``[run]`` section.

    Raises:
        ValueError: On a missing section or unknown key.
    """
    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_file(fh)
    if "run" not in parser:
        raise ValueError(f"{path}: missing [run] section")
    section = parser["run"]
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(section) - known
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")

    kwargs: dict = {}
    if "seed" in section:
        kwargs["seed"] = section.getint("seed")
    if "area_km2" in section:
        kwargs["area_km2"] = section.getfloat("area_km2")
    if "lambdas" in section:
        kwargs["lambdas"] = _parse_floats(section["lambdas"])
    if "trajectory_budget" in section:
        kwargs["trajectory_budget"] = section.getint("trajectory_budget")
    if "formats" in section:
        kwargs["formats"] = tuple(
            MessageFormat(part.strip())
            for part in section["formats"].split(",")
            if part.strip()
        )
    if "dt_list" in section:
        kwargs["dt_list"] = _parse_floats(section["dt_list"])
    if "gps_standard" in section:
        kwargs["gps_standard"] = section["gps_standard"].strip()
    if "eps_mode" in section:
        kwargs["eps_mode"] = EpsMode(section["eps_mode"].strip())
    if "workers" in section:
        kwargs["workers"] = section.getint("workers")
    if "out_dir" in section:
        kwargs["out_dir"] = section["out_dir"].strip()
    return RunConfig(**kwargs)


def dump_config(config: RunConfig) -> str:
    """Serialize a RunConfig to INI text that :func:`load_config` accepts."""
    parser = configparser.ConfigParser()
    parser["run"] = {
        "seed": str(config.seed),
        "area_km2": repr(config.area_km2),
        "lambdas": ", ".join(repr(v) for v in config.lambdas),
        "trajectory_budget": str(config.trajectory_budget),
        "formats": ", ".join(f.value for f in config.formats),
        "dt_list": ", ".join(repr(v) for v in config.dt_list),
        "gps_standard": config.gps_standard,
        "eps_mode": config.eps_mode.value,
        "workers": str(config.workers),
        "out_dir": config.out_dir,
    }
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
