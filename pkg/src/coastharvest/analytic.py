"""Closed-form steady states and adjoints for constant harvest rates.

Every constant-rate segment of the model solves u'' = (1+h)u - 1, whose
solutions are a constant offset plus a cosh/sinh pair.  SegmentSolution
captures that structure exactly; the module-level functions build the
specific solutions used by the optimality analysis: the constant-control
steady state on the full interval, the matching adjoint pair, and the
return-time functions that decide the small-q regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ._specfun import arccoth, arctanh, sech
from .params import ParameterError


@dataclass(frozen=True)
class SegmentSolution:
    """u(x) = offset + A*cosh(k(x-anchor)) + B*sinh(k(x-anchor)) on [x0, x1].

    The anchor defaults to x0.  Coefficients are only meaningful relative
    to their anchor, and moving it matters numerically: a profile that is
    exponentially smaller than cosh(k(x1-x0)) at one end must be anchored
    near that end, or at its symmetry point, to evaluate there without
    catastrophic cancellation.
    """

    k: float
    offset: float
    A: float
    B: float
    x0: float
    x1: float
    anchor: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.k > 0.0:
            raise ParameterError(f"segment stiffness must be positive, got {self.k!r}")
        if not self.x0 < self.x1:
            raise ParameterError(f"empty segment [{self.x0!r}, {self.x1!r}]")
        if self.anchor is None:
            object.__setattr__(self, "anchor", self.x0)

    def value(self, x: float) -> float:
        s = self.k * (x - self.anchor)
        return self.offset + self.A * math.cosh(s) + self.B * math.sinh(s)

    def deriv(self, x: float) -> float:
        s = self.k * (x - self.anchor)
        return self.k * (self.A * math.sinh(s) + self.B * math.cosh(s))

    def second_deriv(self, x: float) -> float:
        s = self.k * (x - self.anchor)
        return self.k * self.k * (self.A * math.cosh(s) + self.B * math.sinh(s))

    def integral(self) -> float:
        """Exact integral of u over [x0, x1]."""
        s0 = self.k * (self.x0 - self.anchor)
        s1 = self.k * (self.x1 - self.anchor)
        return (
            self.offset * (self.x1 - self.x0)
            + (self.A / self.k) * (math.sinh(s1) - math.sinh(s0))
            + (self.B / self.k) * (math.cosh(s1) - math.cosh(s0))
        )


def constant_control_steady_state(hhat: float, l: float) -> SegmentSolution:
    """Steady state with harvest rate hhat everywhere and zero boundaries.

    u(x) = (1 - sech(k*l/2)*cosh(k*x)) / (1+hhat) with k = sqrt(1+hhat),
    anchored at the midpoint so evenness is exact and the boundary
    values stay at roundoff however large k*l gets.
    """
    if hhat < 0.0:
        raise ParameterError(f"harvest rate must be nonnegative, got {hhat!r}")
    if not l > 0.0:
        raise ParameterError(f"l must be positive, got {l!r}")
    k = math.sqrt(1.0 + hhat)
    off = 1.0 / (1.0 + hhat)
    return SegmentSolution(
        k=k,
        offset=off,
        A=-off * sech(k * l / 2.0),
        B=0.0,
        x0=-l / 2.0,
        x1=l / 2.0,
        anchor=0.0,
    )


def optimal_shoot_slope(hbar: float, l: float) -> float:
    """The unique initial slope v(-l/2) of the constant-hbar steady state."""
    if hbar < 0.0:
        raise ParameterError(f"hbar must be nonnegative, got {hbar!r}")
    if not l > 0.0:
        raise ParameterError(f"l must be positive, got {l!r}")
    c = math.sqrt(hbar + 1.0)
    return math.tanh(c * l / 2.0) / c


def state_return_time(v0: float, hbar: float, l: float) -> float:
    """Return time of the state orbit started at (0, v0) to the u = 0 axis.

    T0(v0) = (2/c)*arccoth(1/(v0*c)) - l/2, c = sqrt(hbar+1).  Increasing
    in v0, tends to -l/2 as v0 -> 0 and diverges as v0 -> 1/c.
    """
    c = math.sqrt(hbar + 1.0)
    if not 0.0 < v0 < 1.0 / c:
        raise ParameterError(f"v0 must lie in (0, {1.0 / c!r}), got {v0!r}")
    return (2.0 / c) * arccoth(1.0 / (v0 * c)) - l / 2.0


def switch_level(hbar: float, q: float, l: float) -> float:
    """Largest admissible adjoint shooting value, (hbar+q)/(sqrt(hbar+1)*l)."""
    return (hbar + q) / (math.sqrt(hbar + 1.0) * l)


def adjoint_constant_hbar(
    lambda0: float, hbar: float, q: float, l: float, x: float
) -> tuple[float, float]:
    """Adjoint pair (lambda1, lambda2) at x for the constant-hbar control.

    Shot from (lambda0, 0) at x = -l/2.  The phase shift beta satisfies
    tanh(c*beta) = lambda0/lam_s; lambda2(-l/2) = 0 holds by construction.
    """
    lam_s = switch_level(hbar, q, l)
    if not 0.0 < lambda0 < lam_s:
        raise ParameterError(f"lambda0 must lie in (0, {lam_s!r}), got {lambda0!r}")
    c = math.sqrt(hbar + 1.0)
    beta = arctanh(lambda0 / lam_s) / c
    arg = c * (x + l / 2.0 - beta)
    lam1 = -lam_s * sech(c * beta) * math.sinh(arg)
    lam2 = (lam_s / c) * (sech(c * beta) * math.cosh(arg) - 1.0)
    return lam1, lam2


def adjoint_return_time_q_le_1(lambda0: float, hbar: float, q: float, l: float) -> float:
    """Return time of the adjoint orbit to the lambda1-axis.

    T(lambda0) = (2/c)*arctanh(lambda0/lam_s) - l/2.  The transversality
    solve picks the lambda0 with T = l/2; for q <= 1 that root stays
    below the switch line, so the constant-hbar control is optimal.
    """
    lam_s = switch_level(hbar, q, l)
    if not 0.0 < lambda0 < lam_s:
        raise ParameterError(f"lambda0 must lie in (0, {lam_s!r}), got {lambda0!r}")
    c = math.sqrt(hbar + 1.0)
    return (2.0 / c) * arctanh(lambda0 / lam_s) - l / 2.0


def constant_control_objective(hhat: float, q: float, l: float) -> float:
    """Closed-form objective of the constant-hhat policy."""
    if hhat < 0.0:
        raise ParameterError(f"harvest rate must be nonnegative, got {hhat!r}")
    if not l > 0.0:
        raise ParameterError(f"l must be positive, got {l!r}")
    k = math.sqrt(1.0 + hhat)
    return (q + hhat) / (1.0 + hhat) * (1.0 - (2.0 / (k * l)) * math.tanh(k * l / 2.0))
