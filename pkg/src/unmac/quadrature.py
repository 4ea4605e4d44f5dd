"""Deterministic scalar quadrature and root finding.

Adaptive Simpson integration plus bisection-based CDF inversion. Both are
deliberately dependency-free and fully deterministic so that every density,
CDF, and quantile in the package evaluates to the same bits on every run.
"""

from __future__ import annotations

from typing import Callable


class QuadratureError(RuntimeError):
    """Raised when an integral or root search fails to converge."""


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = 1e-8,
    max_depth: int = 60,
) -> float:
    """Integrate ``f`` over ``[a, b]`` with adaptive Simpson refinement.

    The tolerance is applied relative to a first whole-interval estimate
    (with a small absolute floor so integrals near zero terminate).

    Args:
        f: Smooth scalar integrand.
        a: Lower limit.
        b: Upper limit (may be below ``a``; the sign flips accordingly).
        rel_tol: Target relative accuracy.
        max_depth: Recursion limit before giving up.

    Raises:
        QuadratureError: If the refinement hits ``max_depth`` without
            meeting the local error target.
    """
    if a == b:
        return 0.0
    if b < a:
        return -integrate(f, b, a, rel_tol=rel_tol, max_depth=max_depth)

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = max(rel_tol * abs(whole), 1e-300)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_step(
    f: Callable[[float], float],
    a: float,
    b: float,
    fa: float,
    fm: float,
    fb: float,
    whole: float,
    tol: float,
    depth: int,
) -> float:
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson failed to converge on [{a}, {b}]"
        )
    half = 0.5 * tol
    return _simpson_step(f, a, m, fa, flm, fm, left, half, depth - 1) + _simpson_step(
        f, m, b, fm, frm, fb, right, half, depth - 1
    )


def invert_monotone(
    g: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    xtol: float = 1e-4,
    max_iter: int = 200,
) -> float:
    """Solve ``g(x) == target`` for a non-decreasing ``g`` by bisection.

    Args:
        g: Non-decreasing function of one variable.
        target: Value to match.
        lo: Lower bracket; ``g(lo)`` must not exceed ``target``.
        hi: Upper bracket; ``g(hi)`` must not fall below ``target``.
        xtol: Absolute half-width of the final bracket.
        max_iter: Bisection iteration cap.

    Raises:
        QuadratureError: If the bracket is invalid or the tolerance is not
            reached within ``max_iter`` iterations.
    """
    glo, ghi = g(lo), g(hi)
    if glo > target or ghi < target:
        raise QuadratureError(
            f"root not bracketed: g({lo})={glo}, g({hi})={ghi}, target={target}"
        )
    for _ in range(max_iter):
        if hi - lo <= 2.0 * xtol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if g(mid) < target:
            lo = mid
        else:
            hi = mid
    raise QuadratureError(
        f"bisection did not reach xtol={xtol} within {max_iter} iterations"
    )
