"""Probability models behind the pairwise separation framework.

Closed-form densities, CDFs, quantiles, and samplers for the four
ingredients of the separation radius: GPS localization error (half-normal,
and the erf-sum density of a two-aircraft error sum), airframe size
(triangular sum of two uniforms), cruise speed (category-derived Gaussian),
and the direction factor cos(Y) of the relative motion.

All samplers take an explicit ``numpy.random.Generator``; nothing in this
module owns hidden RNG state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .quadrature import integrate, invert_monotone

_SQRT2 = math.sqrt(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GpsAccuracyStandard:
    """A GPS positioning accuracy class, stated as its 3-sigma bound in meters."""

    name: str
    three_sigma: float

    def __post_init__(self) -> None:
        if self.three_sigma <= 0:
            raise ValueError(f"three_sigma must be positive, got {self.three_sigma}")

    @property
    def sigma(self) -> float:
        """Standard deviation of the per-axis positioning error (m)."""
        return self.three_sigma / 3.0


#: Published accuracy classes, keyed by age-of-data regime.
GPS_ACCURACY_STANDARDS: dict[str, GpsAccuracyStandard] = {
    "zero-aod": GpsAccuracyStandard("Normal Operations at Zero AOD", 5.7),
    "all-aods": GpsAccuracyStandard("Normal Operations over all AODs", 10.5),
    "any-aod": GpsAccuracyStandard("Normal Operations at Any AOD", 13.85),
    "worst-case": GpsAccuracyStandard("Worst case, during Normal Operations", 30.0),
}


@dataclass(frozen=True)
class UavCategory:
    """Representative UAV class: cruise/max speeds (m/s) and MGTOW range (kg)."""

    index: int
    v_cruise: float
    v_max: float
    mgtow_range: tuple[float, float]

    def __post_init__(self) -> None:
        if not 0 < self.v_cruise < self.v_max:
            raise ValueError(
                f"need 0 < v_cruise < v_max, got ({self.v_cruise}, {self.v_max})"
            )


#: The four representative categories, keyed by index.
UAV_CATEGORIES: dict[int, UavCategory] = {
    1: UavCategory(1, 12.9, 20.6, (0.0, 1.8)),
    2: UavCategory(2, 10.3, 15.4, (0.0, 9.0)),
    3: UavCategory(3, 15.4, 30.7, (0.0, 9.0)),
    4: UavCategory(4, 30.7, 51.5, (9.0, 25.0)),
}


@dataclass(frozen=True)
class SpeedModel:
    """Gaussian airspeed model N(mu_v, sigma_v^2) in m/s."""

    mu_v: float
    sigma_v: float

    def __post_init__(self) -> None:
        if self.sigma_v <= 0:
            raise ValueError(f"sigma_v must be positive, got {self.sigma_v}")

    @classmethod
    def from_category(cls, category: UavCategory) -> "SpeedModel":
        return cls(category.v_cruise, speed_sigma(category.v_cruise, category.v_max))

    @property
    def truncation_cap(self) -> float:
        """Upper resampling bound for :func:`sample_speed`."""
        return 1.1 * (self.mu_v + 3.0 * self.sigma_v)


def speed_sigma(v_cruise: float, v_max: float) -> float:
    """Speed standard deviation (v_max - v_cruise) / 3.

    Args:
        v_cruise: Cruise speed, m/s. Must be non-negative.
        v_max: Maximum operating speed, m/s. Must exceed ``v_cruise``.
    """
    if v_cruise < 0:
        raise ValueError(f"v_cruise must be non-negative, got {v_cruise}")
    if v_max <= v_cruise:
        raise ValueError(f"need v_max > v_cruise, got ({v_cruise}, {v_max})")
    return (v_max - v_cruise) / 3.0


# ---------------------------------------------------------------------------
# Localization error
# ---------------------------------------------------------------------------


def half_normal_pdf(x, sigma: float):
    """Half-normal density sqrt(2)/(sigma*sqrt(pi)) * exp(-x^2 / 2 sigma^2).

    Zero for x < 0. Accepts a scalar or array ``x``.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = np.asarray(x, dtype=float)
    out = np.where(
        x >= 0.0,
        _SQRT2 / (sigma * math.sqrt(math.pi)) * np.exp(-(x * x) / (2.0 * sigma * sigma)),
        0.0,
    )
    return float(out) if out.ndim == 0 else out


def sum_half_normal_pdf(x, sigma_i: float, sigma_j: float):
    """Density of the sum of two independent half-normal errors.

    f(x) = sqrt(2/pi)/s * exp(-x^2/(2 s^2))
           * [erf(sigma_i x / (sqrt(2) sigma_j s)) + erf(sigma_j x / (sqrt(2) sigma_i s))]

    with s = sqrt(sigma_i^2 + sigma_j^2), supported on x >= 0. Accepts a
    scalar or array ``x``.
    """
    if sigma_i <= 0 or sigma_j <= 0:
        raise ValueError(f"sigmas must be positive, got ({sigma_i}, {sigma_j})")
    x = np.asarray(x, dtype=float)
    s2 = sigma_i * sigma_i + sigma_j * sigma_j
    s = math.sqrt(s2)
    pref = _SQRT_2_OVER_PI / s * np.exp(-(x * x) / (2.0 * s2))
    bracket = erf(sigma_i * x / (_SQRT2 * sigma_j * s)) + erf(
        sigma_j * x / (_SQRT2 * sigma_i * s)
    )
    out = np.where(x >= 0.0, pref * bracket, 0.0)
    return float(out) if out.ndim == 0 else out


def sum_half_normal_mean(sigma_i: float, sigma_j: float) -> float:
    """Mean (sigma_i + sigma_j) * sqrt(2/pi) of the half-normal sum."""
    if sigma_i <= 0 or sigma_j <= 0:
        raise ValueError(f"sigmas must be positive, got ({sigma_i}, {sigma_j})")
    return (sigma_i + sigma_j) * _SQRT_2_OVER_PI


def _sum_half_normal_cap(sigma_i: float, sigma_j: float) -> float:
    # Integration horizon: mean + 12 sigma of the sum comfortably holds all
    # mass representable at the tolerances used here.
    return sum_half_normal_mean(sigma_i, sigma_j) + 12.0 * math.sqrt(
        sigma_i * sigma_i + sigma_j * sigma_j
    )


def sum_half_normal_cdf(x: float, sigma_i: float, sigma_j: float) -> float:
    """CDF of the half-normal sum, by adaptive Simpson quadrature."""
    if sigma_i <= 0 or sigma_j <= 0:
        raise ValueError(f"sigmas must be positive, got ({sigma_i}, {sigma_j})")
    if x <= 0.0:
        return 0.0
    cap = _sum_half_normal_cap(sigma_i, sigma_j)
    if x >= cap:
        return 1.0
    return min(
        1.0,
        integrate(lambda t: sum_half_normal_pdf(t, sigma_i, sigma_j), 0.0, x),
    )


def sum_half_normal_quantile(
    p: float, sigma_i: float, sigma_j: float, xtol: float = 1e-4
) -> float:
    """Quantile of the half-normal sum: the q with CDF(q) = p.

    Inverts the quadrature CDF by bisection to an absolute tolerance of
    ``xtol`` meters.

    Raises:
        ValueError: If ``p`` lies outside the open interval (0, 1).
        QuadratureError: If the bisection fails to converge.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    cap = _sum_half_normal_cap(sigma_i, sigma_j)
    return invert_monotone(
        lambda q: sum_half_normal_cdf(q, sigma_i, sigma_j), p, 0.0, cap, xtol=xtol
    )


# ---------------------------------------------------------------------------
# Airframe term
# ---------------------------------------------------------------------------


def triangle_af_pdf(x, af_max: float):
    """Density of (AF_i + AF_j)/2 with AF ~ Uniform(0, af_max].

    Triangular on (0, af_max), peaking at af_max/2. Accepts a scalar or
    array ``x``.
    """
    if af_max <= 0:
        raise ValueError(f"af_max must be positive, got {af_max}")
    x = np.asarray(x, dtype=float)
    quarter = af_max * af_max / 4.0
    out = np.select(
        [
            (x > 0.0) & (x < af_max / 2.0),
            (x >= af_max / 2.0) & (x < af_max),
        ],
        [x / quarter, (af_max - x) / quarter],
        default=0.0,
    )
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Direction factor
# ---------------------------------------------------------------------------


def direction_factor_pdf(x):
    """Density 1/(pi*sqrt(1-x^2)) of cos(Y) for Y ~ Uniform(-pi, pi).

    Defined on the open interval (-1, 1); the endpoints are singular and
    rejected. Accepts a scalar or array ``x``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise ValueError("direction factor density is defined only for |x| < 1")
    out = 1.0 / (math.pi * np.sqrt(1.0 - x * x))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Mobility-induced expansion
# ---------------------------------------------------------------------------


def mobility_expansion_params(
    dt: float, model_i: SpeedModel, model_j: SpeedModel
) -> tuple[float, float]:
    """Mean and standard deviation of the direction-unknown expansion.

    The displacement sum over one update interval is Gaussian with mean
    dt*(mu_i + mu_j) and variance dt^2*(sigma_i^2 + sigma_j^2).
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    mean = dt * (model_i.mu_v + model_j.mu_v)
    std = dt * math.sqrt(model_i.sigma_v**2 + model_j.sigma_v**2)
    return mean, std


def mobility_expansion_pdf(
    z: float,
    dt: float,
    model_i: SpeedModel,
    model_j: SpeedModel,
    direction_known: bool = False,
) -> float:
    """Density of the expansion the two aircraft add over one interval.

    Direction unknown: the plain Gaussian of the speed sum scaled by ``dt``.

    Direction known: the product of that Gaussian with cos(Y),
    Y ~ Uniform(-pi, pi), conditioned on the hazardous closing part z >= 0
    and renormalized. Because cos(Y) is symmetric the conditioning constant
    is exactly 1/2, so the conditional density is twice the unconditioned
    one. Evaluated as

        f(z) = (2/pi) * int_0^inf [g(z cosh u) + g(-z cosh u)] du,

    with g the Gaussian density; the cosh substitution removes the
    sqrt singularity of the direction factor. The density itself has an
    integrable logarithmic spike at z = 0, reported as ``inf``.
    """
    mean, std = mobility_expansion_params(dt, model_i, model_j)

    if not direction_known:
        u = (z - mean) / std
        return math.exp(-0.5 * u * u) / (std * math.sqrt(2.0 * math.pi))

    if z < 0.0:
        return 0.0
    if z == 0.0:
        return math.inf

    span = abs(mean) + 12.0 * std
    if z >= span:
        return 0.0
    u_max = math.acosh(span / z)

    norm = 1.0 / (std * math.sqrt(2.0 * math.pi))

    def integrand(u: float) -> float:
        x = z * math.cosh(u)
        a = (x - mean) / std
        b = (x + mean) / std
        return norm * (math.exp(-0.5 * a * a) + math.exp(-0.5 * b * b))

    return 2.0 / math.pi * integrate(integrand, 0.0, u_max)


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def sample_speed(
    model: SpeedModel, rng: np.random.Generator, max_retries: int = 100
) -> float:
    """Draw one speed from N(mu_v, sigma_v^2), resampling outside (0, cap].

    The cap is 1.1*(mu_v + 3 sigma_v); negative or wildly supercritical
    draws would break trajectory durations downstream.

    Raises:
        RuntimeError: If ``max_retries`` draws all fall outside the window.
    """
    cap = model.truncation_cap
    for _ in range(max_retries):
        v = rng.normal(model.mu_v, model.sigma_v)
        if 0.0 < v <= cap:
            return float(v)
    raise RuntimeError(
        f"speed sampling exhausted {max_retries} retries for model {model}"
    )


def sample_half_normal(sigma: float, rng: np.random.Generator, size=None):
    """Draw |N(0, sigma^2)| magnitudes."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return np.abs(rng.normal(0.0, sigma, size=size))


def sample_airframe(rng: np.random.Generator, af_max: float = 7.5, size=None):
    """Draw airframe diameters uniformly from the half-open (0, af_max]."""
    if af_max <= 0:
        raise ValueError(f"af_max must be positive, got {af_max}")
    return af_max - rng.uniform(0.0, af_max, size=size)


def sample_direction_factor(rng: np.random.Generator, size=None):
    """Draw cos(Y) with Y ~ Uniform(-pi, pi).

    Sampled through the angle and transformed, never by inverting the
    density (which blows up at the endpoints).
    """
    return np.cos(rng.uniform(-math.pi, math.pi, size=size))
