"""Radial trajectory integration with event detection and nodal classification.

Events are zeros of u (nodes) and zeros of u' (extrema, located as zeros of
the flux w since phi1 is strictly increasing).  Both are bracketed by sign
changes of the dense output sampled inside each accepted step, then polished
by root finding on the step interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .field import FieldParams, RadialState, phi1_inv
from .problems import NodalSignature
from .rk import dopri5

NODE = "node"
EXTREMUM = "extremum"

#: |u'| below this at an interior node marks the trajectory degenerate
DEGENERACY_TOL = 1e-6
#: events closer than this (relative to R) are treated as a degenerate tie
TIE_TOL = 1e-8
#: sub-samples per step when scanning the dense output for sign changes
_SUBSAMPLES = 4


def zero_tolerance(d: float) -> float:
    """Shooting acceptance threshold on |u(R)| for initial amplitude d."""
    return 1e-9 * max(1.0, abs(d))


@dataclass(frozen=True)
class Event:
    r: float
    kind: str
    slope: float  # u' at the event radius


@dataclass(frozen=True)
class Degenerate:
    """Classification outcome when a nodal signature cannot be assigned."""

    reason: str


@dataclass
class Trajectory:
    params: FieldParams
    solution: "object"  # OdeSolution over (u, w)
    events: list = field(default_factory=list)
    degenerate: bool = False
    degenerate_reason: str | None = None
    sup_slope: float = 0.0

    # -- basic accessors -----------------------------------------------------

    @property
    def r(self):
        return self.solution.r

    @property
    def u(self):
        return self.solution.y[:, 0]

    @property
    def w(self):
        return self.solution.y[:, 1]

    @property
    def r_inner(self) -> float:
        return float(self.solution.r[0])

    @property
    def terminal(self) -> float:
        return float(self.solution.y[-1, 0])

    def state(self, r: float) -> RadialState:
        u, w = self.solution(r)
        return RadialState(r=r, u=float(u), w=float(w))

    def slope_at(self, r: float) -> float:
        u, w = self.solution(r)
        n1 = self.params.spec.dimension - 1
        return phi1_inv(float(w) / r**n1)

    def sample(self, count: int = 1025):
        """Dense (r, u, u') arrays on a uniform grid over the computed range."""
        rr = np.linspace(self.r[0], self.r[-1], count)
        n1 = self.params.spec.dimension - 1
        uu = np.empty(count)
        du = np.empty(count)
        for i, r in enumerate(rr):
            u, w = self.solution(float(r))
            uu[i] = u
            du[i] = phi1_inv(float(w) / float(r) ** n1)
        return rr, uu, du

    def nodes(self):
        return [e for e in self.events if e.kind == NODE]

    def extrema(self):
        return [e for e in self.events if e.kind == EXTREMUM]

    def interior_zero_count(self, edge_band: float = 0.0) -> int:
        """Number of node events, optionally excluding a band below r = R."""
        r_hi = self.r[-1] - edge_band
        return sum(1 for e in self.nodes() if e.r <= r_hi)

    def export_rows(self):
        """Rows (r, u, du, w) at the accepted nodes, for CSV export."""
        n1 = self.params.spec.dimension - 1
        return [
            (float(r), float(u), phi1_inv(float(w) / float(r) ** n1), float(w))
            for r, u, w in zip(self.r, self.u, self.w)
        ]


def _locate_sign_changes(sol, component, r_tol):
    """Scan dense output of one component for roots; returns sorted radii."""
    roots = []
    for interp in sol.interpolants:
        rr = np.linspace(interp.r0, interp.r1, _SUBSAMPLES + 1)
        vals = [float(interp(r)[component]) for r in rr]
        for a, b, fa, fb in zip(rr, rr[1:], vals, vals[1:]):
            if fa * fb < 0.0:
                root = brentq(
                    lambda r: float(interp(r)[component]), a, b, xtol=r_tol, rtol=1e-15
                )
                roots.append(float(root))
            elif fb == 0.0 and fa != 0.0 and b == interp.r1:
                roots.append(float(b))
    # de-duplicate step-boundary repeats
    out = []
    for r in sorted(roots):
        if not out or r - out[-1] > r_tol * 4:
            out.append(r)
    return out


def integrate(
    initial: RadialState,
    params: FieldParams,
    tols: tuple[float, float] = (1e-10, 1e-12),
    *,
    breakpoints=(),
    events: bool = True,
) -> Trajectory:
    """Integrate the flux system from the initial state to r = R.

    Local error per step is bounded by the (rel, abs) tolerances; events are
    located to 1e-10 * R.  Raises StepSizeUnderflow below 1e-14 * R.
    """
    spec = params.spec
    R = spec.outer_radius
    if not initial.r < R:
        raise ValueError(f"initial radius {initial.r} must lie below R={R}")
    rtol, atol = tols
    if rtol <= 0 or atol <= 0:
        raise ValueError("tolerances must be positive")
    n1 = spec.dimension - 1

    def rhs(r, y):
        rn1 = r**n1
        return (phi1_inv(y[1] / rn1), -params.lam * rn1 * spec.eval_f(r, y[0]))

    sol = dopri5(
        rhs,
        initial.r,
        (initial.u, initial.w),
        R,
        rtol,
        atol,
        breakpoints=breakpoints,
        step_floor=1e-14 * R,
    )

    traj = Trajectory(params=params, solution=sol)
    slopes = np.abs([phi1_inv(w / r**n1) for r, w in zip(sol.r, sol.y[:, 1])])
    traj.sup_slope = float(np.max(slopes)) if len(slopes) else 0.0
    assert traj.sup_slope < 1.0  # strict light-cone bound, guaranteed by phi1_inv

    if events:
        r_tol = 1e-10 * R
        guard = initial.r + 1e-12 * R
        node_rs = [r for r in _locate_sign_changes(sol, 0, r_tol) if r > guard]
        ext_rs = [r for r in _locate_sign_changes(sol, 1, r_tol) if r > guard]
        evs = [Event(r, NODE, traj.slope_at(r)) for r in node_rs]
        evs += [Event(r, EXTREMUM, traj.slope_at(r)) for r in ext_rs]
        evs.sort(key=lambda e: e.r)
        traj.events = evs

        for e in evs:
            if e.kind == NODE and abs(e.slope) < DEGENERACY_TOL:
                traj.degenerate = True
                traj.degenerate_reason = f"near-degenerate node at r={e.r:.12g}"
                break
        for a, b in zip(evs, evs[1:]):
            if a.kind != b.kind and b.r - a.r < TIE_TOL * R:
                traj.degenerate = True
                traj.degenerate_reason = (
                    f"u and u' vanish together near r={a.r:.12g}"
                )
                break

    return traj


def interior_events(traj: Trajectory, zero_tol: float) -> list:
    """Events with the terminal boundary zero filtered out.

    A node crossing within the terminal band belongs to the boundary zero
    u(R) = 0, not to the interior nodal structure; the band width follows
    from the zero tolerance and the terminal slope.
    """
    R = traj.r[-1]
    slope_R = abs(traj.slope_at(R))
    band = max(4.0 * zero_tol / max(slope_R, DEGENERACY_TOL), 1e-12 * R)
    return [e for e in traj.events if not (e.kind == NODE and e.r > R - band)]


def count_nodal_signature(
    traj: Trajectory, zero_tol: float | None = None
) -> NodalSignature | Degenerate:
    """Classify a BVP solution candidate into its nodal class.

    k is the interior node count plus one; nu is the sign of u on the first
    arch.  Additionally verifies the interleaving property: nodes and extrema
    strictly alternate, starting with a node and ending with an extremum
    (exactly one extremum between consecutive zeros, counting r = R as the
    terminal zero), and no extremum before the first node.
    """
    if zero_tol is None:
        zero_tol = zero_tolerance(traj.u[0])
    if abs(traj.terminal) > zero_tol:
        raise ValueError(
            f"|u(R)|={abs(traj.terminal):.3e} exceeds zero tolerance {zero_tol:.3e}; "
            "not a BVP solution candidate"
        )
    if traj.degenerate:
        return Degenerate(traj.degenerate_reason or "degenerate trajectory")

    sup_u = float(np.max(np.abs(traj.u)))
    if sup_u <= zero_tol:
        return Degenerate("trivial (identically zero) profile")

    events = interior_events(traj, zero_tol)
    nodes = [e for e in events if e.kind == NODE]
    exts = [e for e in events if e.kind == EXTREMUM]
    k = len(nodes) + 1
    nu = +1 if traj.u[0] > 0 else -1

    kinds = [e.kind for e in events]
    expected = [NODE, EXTREMUM] * len(nodes)
    if kinds != expected:
        return Degenerate(
            f"interleaving violated: {len(nodes)} nodes, {len(exts)} extrema, "
            f"pattern {'/'.join(p[0] for p in kinds)}"
        )
    return NodalSignature(k=k, nu=nu)
