"""Independent oracles used by the test suite.

Deliberately disjoint from the package's own numerics: a fixed-step classic
RK4 marcher, a power-series Bessel J0 with bisection for its first zero, the
closed-form radial Helmholtz solution, and a scipy collocation solver for
the divergence-expanded form of the curvature equation.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_bvp


def rk4_path(rhs, r0, y0, r_end, h):
    """Classic fixed-step RK4; returns (r array, y array of shape (n, 2))."""
    steps = int(math.ceil((r_end - r0) / h))
    rs = np.empty(steps + 1)
    ys = np.empty((steps + 1, len(y0)))
    r = r0
    y = np.asarray(y0, dtype=float)
    rs[0] = r
    ys[0] = y
    for i in range(steps):
        hh = min(h, r_end - r)
        k1 = np.asarray(rhs(r, y))
        k2 = np.asarray(rhs(r + hh / 2, y + hh / 2 * k1))
        k3 = np.asarray(rhs(r + hh / 2, y + hh / 2 * k2))
        k4 = np.asarray(rhs(r + hh, y + hh * k3))
        y = y + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        r = r + hh
        rs[i + 1] = r
        ys[i + 1] = y
    return rs, ys


def rk4_first_zero(rhs, r0, y0, r_end, h, component=0):
    """First sign-change location of one component, by linear interpolation
    on the fixed-step path."""
    rs, ys = rk4_path(rhs, r0, y0, r_end, h)
    v = ys[:, component]
    for i in range(len(v) - 1):
        if v[i] * v[i + 1] < 0:
            t = v[i] / (v[i] - v[i + 1])
            return rs[i] + t * (rs[i + 1] - rs[i])
    return None


def bessel_j0(x: float, terms: int = 40) -> float:
    """J0 by its power series; plenty accurate for |x| < 10."""
    z = -0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, terms):
        term *= z / (k * k)
        total += term
    return total


def bessel_j0_first_zero(tol: float = 1e-13) -> float:
    lo, hi = 2.0, 3.0
    flo = bessel_j0(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = bessel_j0(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def helmholtz_ball_profile(d: float, lam: float, r):
    """u(r) = d sin(sqrt(lam) r) / (sqrt(lam) r): the N=3 radial solution of
    the linear problem with u(0)=d, u'(0)=0 and unit weight."""
    a = math.sqrt(lam)
    r = np.asarray(r, dtype=float)
    out = np.where(r == 0.0, d, d * np.sin(a * r) / (a * np.maximum(r, 1e-300)))
    return out


def collocation_profile(spec, lam: float, d_guess: float, mesh: int = 400, tol: float = 1e-10):
    """Solve the divergence-expanded curvature BVP on the ball by scipy
    collocation, seeded near amplitude d_guess.

    System: u' = v, v' = -lam f(r,u) h(v) + (N-1) v^3 / r, with the singular
    linear part -(N-1) v / r handled through solve_bvp's S matrix.  Returns
    (r, u, v) arrays or None when the solver fails to converge.
    """
    N = spec.dimension
    R = spec.outer_radius

    def h_fac(v):
        vv = np.clip(v, -1 + 1e-14, 1 - 1e-14)
        return (1 - vv * vv) ** 1.5

    def fun(x, y):
        u, v = y
        f = np.array([spec.eval_f(float(xi), float(ui)) for xi, ui in zip(x, u)])
        cubic = np.where(x > 0, (N - 1) * v**3 / np.maximum(x, 1e-300), 0.0)
        return np.vstack([v, -lam * f * h_fac(v) + cubic])

    def bc(ya, yb):
        return np.array([ya[1], yb[0]])

    S = np.array([[0.0, 0.0], [0.0, -(N - 1)]])
    x = np.linspace(0.0, R, mesh)
    u0 = d_guess * np.cos(0.5 * math.pi * x / R)
    v0 = -d_guess * 0.5 * math.pi / R * np.sin(0.5 * math.pi * x / R)
    sol = solve_bvp(fun, bc, x, np.vstack([u0, v0]), S=S, tol=tol, max_nodes=200000)
    if not sol.success:
        return None
    return sol.x, sol.y[0], sol.y[1]
