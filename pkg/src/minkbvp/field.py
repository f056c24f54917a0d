"""Minkowski curvature operator ingredients and the radial flux-variable system.

The radial reduction of div(phi_N(grad v)) works with the scalar map
phi1(s) = s / sqrt(1 - s^2) on (-1, 1).  The state carried along a
trajectory is (r, u, w) with the flux

    w = r^(N-1) * phi1(u')

so the inner Neumann condition u'(delta) = 0 becomes w(delta) = 0 exactly,
and the vector field stays defined for every real w because the inverse map
phi1_inv is total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MinkBVPError


def phi1(s: float) -> float:
    """Gradient map s / sqrt(1 - s^2); strictly increasing and odd on (-1, 1)."""
    if abs(s) >= 1.0:
        raise MinkBVPError(f"phi1 domain error: |s| >= 1 (s={s!r})")
    return s / math.sqrt(1.0 - s * s)

_OPEN_ONE = math.nextafter(1.0, 0.0)

def phi1_inv(t: float) -> float:
    """Inverse gradient map t / sqrt(1 + t^2); total, odd, range (-1, 1).

    Clamped to the largest float below 1 so the open range survives the
    saturation of floating-point division at |t| >~ 1e8.
    """
    v = t / math.hypot(1.0, t)
    if v >= 1.0:
        return _OPEN_ONE
    if v <= -1.0:
        return -_OPEN_ONE
    return v


def h_factor(y: float) -> float:
    """(1 - y^2)^(3/2) for |y| <= 1, zero beyond; continuous at |y| = 1."""
    if abs(y) >= 1.0:
        return 0.0
    return (1.0 - y * y) ** 1.5


@dataclass(frozen=True)
class RadialState:
    """Point on a radial trajectory: radius r, value u, flux w = r^(N-1) phi1(u')."""

    r: float
    u: float
    w: float

    def slope(self, dimension: int) -> float:
        """Recovered u' = phi1_inv(w / r^(N-1)); strictly inside (-1, 1)."""
        return phi1_inv(self.w / self.r ** (dimension - 1))


@dataclass(frozen=True)
class FieldParams:
    """Immutable bundle (problem, lambda) defining one vector field.

    epsilon_slope is a guard band for clamping the phi1_inv argument; the
    default 0 means no clamping (phi1_inv is total, clamping is never needed
    for integration, only exposed for diagnostics).
    """

    spec: "object"  # ProblemSpec; untyped here to avoid an import cycle
    lam: float
    epsilon_slope: float = 0.0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lam}")


def flux_rhs(state: RadialState, params: FieldParams) -> tuple[float, float]:
    """Right-hand side of the flux system at r > 0.

    du/dr = phi1_inv(w / r^(N-1))
    dw/dr = -lambda * r^(N-1) * f(r, u)
    """
    n1 = params.spec.dimension - 1
    rn1 = state.r**n1
    du = phi1_inv(state.w / rn1)
    dw = -params.lam * rn1 * params.spec.eval_f(state.r, state.u)
    return du, dw


def origin_startup(d: float, params: FieldParams, r_start: float) -> RadialState:
    """Taylor-consistent state at a small radius r_start for ball problems.

    On the ball the flux quotient w / r^(N-1) is 0/0 at the origin, so the
    first interval [0, r_start] is replaced by the local expansion

        u(r) = d - lambda * f(0, d) * r^2 / (2N) + O(r^3)
        w(r) = -lambda * f(0, d) * r^N / N + O(r^(N+1)),

    the leading terms of the exact flux integral.
    """
    spec = params.spec
    if spec.inner_radius != 0.0:
        raise ValueError("origin_startup applies only to ball problems (delta = 0)")
    if r_start <= 0.0:
        raise ValueError(f"r_start must be positive, got {r_start}")
    f0 = spec.eval_f(0.0, d)
    n = spec.dimension
    u = d - params.lam * f0 * r_start**2 / (2.0 * n)
    w = -params.lam * f0 * r_start**n / n
    return RadialState(r=r_start, u=u, w=w)


def quasilinear_accel(r: float, u: float, du: float, params: FieldParams) -> float:
    """u'' of the equivalent divergence-expanded form at a state with |u'| < 1.

    u'' = -lambda * f(r, u) * h(u') - (N - 1) * u' * (1 - u'^2) / r

    Used for cross-route residual checks; algebraically identical to the
    flux system wherever |u'| < 1.
    """
    n1 = params.spec.dimension - 1
    f = params.spec.eval_f(r, u)
    return -params.lam * f * h_factor(du) - n1 * du * (1.0 - du * du) / r
