"""Switching-line analysis for the large-q regime.

For q > 1 the adjoint shooting problem is piecewise linear with one
possible crossing of the switching line.  This module carries the
derived constants of that analysis, the hitting time of the lambda2-axis
as a function of the shooting parameter, the crossing location, the
threshold length above which a crossing occurs, and the root solve that
pins the transversality-consistent shooting value.

Naming: lam_star and lam_starstar are the two critical shooting values
(orbit tangent to the switching line, and orbit asymptotic to the second
stable manifold).  i1, i2 are stable-manifold axis intercepts, e1, e2
equilibrium heights, is1, is2 the manifold/switch-line intersections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._specfun import arctanh, bisect_root
from .params import ParameterError, ScaledParams


@dataclass(frozen=True)
class DerivedConstants:
    a1: float
    b1: float
    a2: float
    b2: float
    i1: float
    i2: float
    e1: float
    e2: float
    is1: float
    is2: float
    lam_star: float
    lam_starstar: float
    l_min: float


@dataclass(frozen=True)
class SaddleGeometry:
    """Equilibrium and invariant-line slopes of a constant-rate adjoint flow."""

    equilibrium: tuple[float, float]
    stable_slope: float
    unstable_slope: float


def derive_constants(sp: ScaledParams) -> DerivedConstants:
    if not sp.q > 1.0:
        raise ParameterError(f"switching analysis requires q > 1, got q={sp.q!r}")
    l, q, hbar = sp.l, sp.q, sp.hbar
    a1, b1 = hbar + 1.0, hbar + q
    a2, b2 = 1.0, q
    is2 = (math.sqrt(a2) / l) * (b2 / a2 - 1.0)
    lam_star = math.sqrt(2.0 * b1 - a1) / l
    return DerivedConstants(
        a1=a1,
        b1=b1,
        a2=a2,
        b2=b2,
        i1=b1 / (math.sqrt(a1) * l),
        i2=b2 / (math.sqrt(a2) * l),
        e1=-b1 / (a1 * l),
        e2=-b2 / (a2 * l),
        is1=(math.sqrt(a1) / l) * (b1 / a1 - 1.0),
        is2=is2,
        lam_star=lam_star,
        lam_starstar=math.hypot(lam_star, is2),
        l_min=min_length(sp),
    )


def saddle_geometry(a: float, b: float, l: float) -> SaddleGeometry:
    if not (a > 0.0 and b > 0.0 and l > 0.0):
        raise ParameterError(f"a, b, l must be positive, got {(a, b, l)!r}")
    return SaddleGeometry(
        equilibrium=(0.0, -b / (a * l)),
        stable_slope=1.0 / math.sqrt(a),
        unstable_slope=-1.0 / math.sqrt(a),
    )


def switch_line_intercept(lambda0: float, dc: DerivedConstants) -> float:
    """lambda1-coordinate where the ray from (lambda0, 0) meets the switch line."""
    if lambda0 < dc.lam_star:
        raise ParameterError(
            f"no switch-line contact below lam_star={dc.lam_star!r}, got {lambda0!r}"
        )
    # tiny negative radicands at lambda0 == lam_star are roundoff
    return math.sqrt(max(lambda0 * lambda0 - dc.lam_star * dc.lam_star, 0.0))


def switch_time(lambda0: float, dc: DerivedConstants) -> float:
    """Travel distance to the switch line for a shooting value >= lam_star.

    The three textbook cases (arccosh below i1, a bare logarithm at i1,
    arcsinh above) are algebraically one expression,
        (1/sqrt(a1)) * log((i1 + lambda0) / (is1 + tilde)),
    via the identity i1^2 - lam_star^2 = is1^2.  The merged form stays
    accurate through both joins, where the separate branches cancel
    catastrophically.
    """
    if lambda0 < dc.lam_star:
        raise ParameterError(
            f"switch time defined for lambda0 >= lam_star={dc.lam_star!r}, got {lambda0!r}"
        )
    tilde = switch_line_intercept(lambda0, dc)
    return math.log((dc.i1 + lambda0) / (dc.is1 + tilde)) / math.sqrt(dc.a1)


def post_switch_time(tilde_lambda0: float, dc: DerivedConstants) -> float:
    """Travel distance from the switch line to the lambda2-axis."""
    if not 0.0 < tilde_lambda0 <= dc.is2:
        raise ParameterError(
            f"intercept must lie in (0, {dc.is2!r}], got {tilde_lambda0!r}"
        )
    if tilde_lambda0 == dc.is2:
        return math.inf
    return arctanh(tilde_lambda0 / dc.is2) / math.sqrt(dc.a2)


def hitting_time(lambda0: float, dc: DerivedConstants) -> float:
    """First arrival of the adjoint ray at the lambda2-axis; inf if never.

    Below lam_star the ray reaches the axis directly; between lam_star
    and lam_starstar it crosses the switching line once and finishes in
    the zero-control flow; at lam_starstar and beyond it escapes.
    """
    if not lambda0 > 0.0:
        raise ParameterError(f"lambda0 must be positive, got {lambda0!r}")
    if lambda0 >= dc.lam_starstar:
        return math.inf
    if lambda0 < dc.lam_star:
        return arctanh(lambda0 / dc.i1) / math.sqrt(dc.a1)
    tilde = switch_line_intercept(lambda0, dc)
    if tilde >= dc.is2:
        return math.inf
    if tilde == 0.0:
        return switch_time(lambda0, dc)
    return switch_time(lambda0, dc) + post_switch_time(tilde, dc)


def min_length(sp: ScaledParams) -> float:
    """Threshold coastline length: above it the optimal control switches."""
    if not sp.q > 1.0:
        raise ParameterError(f"threshold length requires q > 1, got q={sp.q!r}")
    hbar, q = sp.hbar, sp.q
    arg = math.sqrt((hbar + 1.0) * (hbar + 2.0 * q - 1.0)) / (hbar + q)
    return (2.0 / math.sqrt(hbar + 1.0)) * arctanh(arg)


def solve_lambda_bar(dc: DerivedConstants, l: float) -> float:
    """The unique shooting value whose hitting time equals l/2.

    Bisection on the monotone hitting time over (0, lam_starstar), then
    a few guarded Newton corrections with a finite-difference slope.
    """
    top = dc.lam_starstar
    eps = 1e-13 * top
    target = l / 2.0

    def residual(lam: float) -> float:
        return hitting_time(lam, dc) - target

    root = bisect_root(residual, eps, top - eps)
    best, best_res = root, abs(residual(root))
    for _ in range(3):
        if best_res <= 1e-15:
            break
        step = 1e-8 * min(best, top - best)
        slope = (residual(best + step) - residual(best - step)) / (2.0 * step)
        if not math.isfinite(slope) or slope <= 0.0:
            break
        cand = best - residual(best) / slope
        if not eps < cand < top - eps:
            break
        cand_res = abs(residual(cand))
        if cand_res >= best_res:
            break
        best, best_res = cand, cand_res
    return best


def switch_location(sp: ScaledParams) -> float:
    """Distance from the coast end to the reserve edge, for l > l_min."""
    dc = derive_constants(sp)
    if not sp.l > dc.l_min:
        raise ParameterError(
            f"no switch for l={sp.l!r} at or below the threshold {dc.l_min!r}"
        )
    lam_bar = solve_lambda_bar(dc, sp.l)
    return switch_time(lam_bar, dc)


def monotonicity_witness(lambda0: float, dc: DerivedConstants) -> float:
    """The increasing auxiliary function whose positivity orders hitting times.

    Vanishes identically at lam_star; positive beyond it.
    """
    if lambda0 < dc.lam_star:
        raise ParameterError(
            f"witness defined for lambda0 >= lam_star={dc.lam_star!r}, got {lambda0!r}"
        )
    r1 = dc.b1 / dc.a1
    tilde = switch_line_intercept(lambda0, dc)
    quad = dc.lam_starstar * dc.lam_starstar - lambda0 * lambda0
    return -((2.0 * dc.b1 - dc.a1) / dc.a1) * quad + (dc.b2 / dc.a2 - 1.0) * lambda0 * (
        r1 * tilde + (r1 - 1.0) * lambda0
    )
