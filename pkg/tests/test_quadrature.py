import math

import pytest
from scipy.special import ndtr, ndtri

from unmac.quadrature import QuadratureError, integrate, invert_monotone


def test_polynomial_exact():
    assert integrate(lambda x: x * x, 0.0, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_sine_half_period():
    assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-10)


def test_gaussian_mass():
    f = lambda x: math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    assert integrate(f, -10.0, 10.0) == pytest.approx(1.0, abs=1e-9)


def test_reversed_limits_flip_sign():
    assert integrate(math.sin, math.pi, 0.0) == pytest.approx(-2.0, rel=1e-10)


def test_empty_interval():
    assert integrate(math.sin, 1.0, 1.0) == 0.0


def test_invert_monotone_matches_normal_quantile():
    q = invert_monotone(lambda x: float(ndtr(x)), 0.975, -10.0, 10.0, xtol=1e-6)
    assert q == pytest.approx(float(ndtri(0.975)), abs=1e-5)


def test_invert_monotone_rejects_bad_bracket():
    with pytest.raises(QuadratureError):
        invert_monotone(lambda x: x, 5.0, 0.0, 1.0)
