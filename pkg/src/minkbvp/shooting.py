"""Shooting solver for the mixed Neumann/Dirichlet radial BVP.

The free parameter is the initial amplitude d = u(delta); u'(delta) = 0 is
exact in the flux variable.  A full amplitude scan (the time map) brackets
every nodal solution at fixed lambda; each bracket is closed by bisection
with secant acceleration on the terminal value u(R; d).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BracketLost, DegenerateSolution, EmptyScan, MinkBVPError
from .field import FieldParams, RadialState, origin_startup, quasilinear_accel
from .integrate import (
    EXTREMUM,
    NODE,
    Degenerate,
    Trajectory,
    count_nodal_signature,
    integrate,
    interior_events,
    zero_tolerance,
)
from .problems import NodalSignature, ProblemSpec
from .rk import dopri5

#: relative factor for the ball startup radius
R_START_FACTOR = 1e-6
#: solutions closer than this in d are considered duplicates
D_PROXIMITY = 1e-8

DEFAULT_TOLS = (1e-10, 1e-13)


@dataclass(frozen=True)
class ShootResult:
    """One shot: amplitude, terminal value, zero count over [delta, R)."""

    d: float
    terminal: float
    zero_count: int
    trajectory: Trajectory

    @property
    def signature_so_far(self) -> NodalSignature | None:
        """Nodal signature ignoring the terminal value; None for the trivial shot."""
        if self.d == 0.0:
            return None
        return NodalSignature(self.zero_count + 1, +1 if self.d > 0 else -1)


@dataclass(frozen=True)
class SolutionProfile:
    """An accepted BVP solution with its nodal signature and norms."""

    lam: float
    d: float
    signature: NodalSignature
    r: np.ndarray
    u: np.ndarray
    du: np.ndarray
    sup_u: float
    sup_du: float
    c1_norm: float
    zeros: tuple
    extrema: tuple
    trajectory: Trajectory = field(repr=False)

    @property
    def terminal(self) -> float:
        return float(self.trajectory.terminal)


def initial_state(d: float, params: FieldParams) -> RadialState:
    spec = params.spec
    if spec.inner_radius > 0.0:
        return RadialState(r=spec.inner_radius, u=d, w=0.0)
    return origin_startup(d, params, R_START_FACTOR * spec.outer_radius)


def shoot(
    d: float,
    lam: float,
    spec: ProblemSpec,
    tols: tuple[float, float] | None = None,
    *,
    events: bool = True,
    breakpoints=(),
) -> ShootResult:
    """Integrate from (delta, d, 0) to R; returns terminal value and zero count."""
    if abs(d) >= spec.alpha:
        raise MinkBVPError(f"|d|={abs(d):.6g} outside the admissible range (alpha={spec.alpha:.6g})")
    if tols is None:
        rtol = DEFAULT_TOLS[0]
        atol = DEFAULT_TOLS[1] * max(abs(d), 1e-2)
        tols = (rtol, atol)
    params = FieldParams(spec=spec, lam=lam)
    traj = integrate(initial_state(d, params), params, tols, events=events, breakpoints=breakpoints)
    return ShootResult(
        d=d,
        terminal=traj.terminal,
        zero_count=traj.interior_zero_count(),
        trajectory=traj,
    )


def amplitude_grid(
    spec: ProblemSpec,
    *,
    n_geometric: int = 96,
    n_uniform: int = 64,
    d_min: float = 1e-8,
    d_max: float | None = None,
) -> np.ndarray:
    """Positive scan grid: geometric near 0 (resolves the small-amplitude
    branches of the f0=infinity regime), uniform above."""
    if d_max is None:
        d_max = 0.999 * min(spec.alpha, spec.span)
    split = 0.1 * d_max
    geo = np.geomspace(d_min, split, n_geometric, endpoint=False)
    uni = np.linspace(split, d_max, n_uniform)
    return np.concatenate([geo, uni])


def time_map_scan(
    lam: float,
    spec: ProblemSpec,
    d_grid,
    target: NodalSignature,
    *,
    tols: tuple[float, float] | None = None,
    shot_cache: dict | None = None,
) -> list[tuple[float, float]]:
    """Bracket every sign change of u(R; d) adjoining the target nodal class.

    The scan grid is positive; shots are mirrored for nu = -1.  A bracket is
    an adjacent pair with opposite terminal signs whose interior-zero counts
    are exactly {k-1, k}: on one side the k-th zero has slipped past R, on
    the other it has not yet entered.  Raises EmptyScan when nothing is
    found (the legitimate outcome below the existence threshold).
    """
    grid = np.asarray(d_grid, dtype=float)
    if len(grid) < 32:
        raise ValueError(f"scan grid needs >= 32 points, got {len(grid)}")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("scan grid must be positive and strictly increasing")

    cache = shot_cache if shot_cache is not None else {}

    def shot(dd: float) -> ShootResult:
        if dd not in cache:
            cache[dd] = shoot(dd, lam, spec, tols)
        return cache[dd]

    k = target.k
    brackets = []
    prev = None
    for d_pos in grid:
        d = target.nu * d_pos
        cur = shot(d)
        if cur.terminal == 0.0 and cur.zero_count == k - 1:
            # exact hit; anything short of exact must come in as a sign
            # change, or tiny amplitudes near a bifurcation point would pass
            # the absolute tolerance as spurious zero-width roots
            brackets.append((d, d))
        elif prev is not None:
            t0, t1 = prev.terminal, cur.terminal
            counts = {prev.zero_count, cur.zero_count}
            if t0 * t1 < 0 and counts == {k - 1, k}:
                brackets.append((prev.d, cur.d))
        prev = cur
    if not brackets:
        raise EmptyScan(
            f"no S_{k}^{'+' if target.nu > 0 else '-'} bracket at lambda={lam:.6g} "
            f"over {len(grid)} amplitudes in [{grid[0]:.3g}, {grid[-1]:.3g}]"
        )
    return brackets


def solve_bvp(
    lam: float,
    spec: ProblemSpec,
    target: NodalSignature,
    bracket: tuple[float, float],
    *,
    tols: tuple[float, float] | None = None,
    max_iter: int = 200,
) -> SolutionProfile:
    """Close a shooting bracket: root of u(R; d) with the target signature.

    Bisection is the guaranteed fallback; secant steps are taken only while
    they stay inside the current bracket (u(R; d) need not be smooth in d
    when f is non-Lipschitz at zero).
    """
    k = target.k
    a, b = bracket
    shot_a = shoot(a, lam, spec, tols)
    if a == b:
        return classify_profile(shot_a, lam, spec, target)
    shot_b = shoot(b, lam, spec, tols)
    fa, fb = shot_a.terminal, shot_b.terminal
    for s in (shot_a, shot_b):
        if s.zero_count not in (k - 1, k):
            raise BracketLost(s.d, s.zero_count, k - 1)
    if fa * fb > 0:
        raise MinkBVPError(
            f"bracket endpoints do not straddle a root: u(R)={fa:.3e}, {fb:.3e}"
        )

    best = shot_a if abs(fa) < abs(fb) else shot_b
    for _ in range(max_iter):
        if abs(best.terminal) < zero_tolerance(best.d):
            break
        mid = 0.5 * (a + b)
        if fb != fa:
            secant = b - fb * (b - a) / (fb - fa)
            lo, hi = (a, b) if a < b else (b, a)
            width = hi - lo
            if lo + 0.01 * width < secant < hi - 0.01 * width:
                mid = secant
        if abs(b - a) < 1e-15 * max(1.0, abs(a)):
            break
        trial = shoot(mid, lam, spec, tols)
        if trial.zero_count not in (k - 1, k):
            raise BracketLost(mid, trial.zero_count, k - 1)
        if abs(trial.terminal) < abs(best.terminal):
            best = trial
        if trial.terminal * fa < 0:
            b, fb, shot_b = mid, trial.terminal, trial
        else:
            a, fa, shot_a = mid, trial.terminal, trial

    if abs(best.terminal) >= zero_tolerance(best.d):
        raise MinkBVPError(
            f"bisection stalled: |u(R)|={abs(best.terminal):.3e} at d={best.d:.12g}"
        )
    return classify_profile(best, lam, spec, target)


def classify_profile(
    shot: ShootResult,
    lam: float,
    spec: ProblemSpec,
    target: NodalSignature | None = None,
    *,
    sample_count: int = 2049,
) -> SolutionProfile:
    """Validate an accepted root: signature, interleaving, a priori bounds."""
    traj = shot.trajectory
    sig = count_nodal_signature(traj)
    if isinstance(sig, Degenerate):
        raise DegenerateSolution(sig.reason)
    if target is not None and sig != target:
        raise DegenerateSolution(f"classified {sig}, expected {target}")

    rr, uu, du = traj.sample(sample_count)
    sup_u = float(np.max(np.abs(uu)))
    sup_du = float(np.max(np.abs(du)))
    if not (sup_du < 1.0 and sup_u < spec.span):
        raise MinkBVPError(
            f"a priori bound violated: sup|u|={sup_u:.6g} (limit {spec.span:.6g}), "
            f"sup|u'|={sup_du:.6g}"
        )
    evs = interior_events(traj, zero_tolerance(shot.d))
    return SolutionProfile(
        lam=lam,
        d=shot.d,
        signature=sig,
        r=rr,
        u=uu,
        du=du,
        sup_u=sup_u,
        sup_du=sup_du,
        c1_norm=sup_u + sup_du,
        zeros=tuple(e.r for e in evs if e.kind == NODE),
        extrema=tuple(e.r for e in evs if e.kind == EXTREMUM),
        trajectory=traj,
    )


def solve_all(
    lam: float,
    spec: ProblemSpec,
    target: NodalSignature,
    d_grid=None,
    *,
    tols=None,
    shot_cache: dict | None = None,
) -> list[SolutionProfile]:
    """Scan + solve every bracket for one signature; duplicates merged by d."""
    if d_grid is None:
        d_grid = amplitude_grid(spec)
    cache: dict = shot_cache if shot_cache is not None else {}
    brackets = time_map_scan(lam, spec, d_grid, target, tols=tols, shot_cache=cache)
    out: list[SolutionProfile] = []
    for br in brackets:
        prof = solve_bvp(lam, spec, target, br, tols=tols)
        if all(abs(prof.d - p.d) > D_PROXIMITY for p in out):
            out.append(prof)
    out.sort(key=lambda p: p.d)
    return out


def first_arch_check(profile: SolutionProfile, tol: float = 1e-10) -> bool:
    """Strict monotonicity of the first arch: u(delta) > 0 and u' < 0 up to
    the first zero.  Profiles with nu = -1 are checked through -u."""
    sgn = profile.signature.nu
    tau1 = profile.zeros[0] if profile.zeros else profile.r[-1]
    mask = profile.r <= tau1
    u0 = sgn * profile.u[0]
    slopes = sgn * profile.du[mask]
    if u0 <= 0:
        return False
    return bool(np.all(slopes <= tol) and np.all(slopes[1:] < tol))


def reintegrate_quasilinear(
    profile: SolutionProfile,
    spec: ProblemSpec,
    lam: float,
    tols: tuple[float, float] = (1e-10, 1e-12),
) -> float:
    """Re-run an accepted profile through the divergence-expanded form.

    Integrates u'' = -lambda f(r,u) h(u') - (N-1) u' (1 - u'^2) / r from the
    profile's inner grid point and returns the sup-norm deviation; the two
    formulations agree wherever |u'| < 1.
    """
    params = FieldParams(spec=spec, lam=lam)
    traj = profile.trajectory
    r0 = float(traj.r[0])
    y0 = (float(traj.u[0]), traj.slope_at(r0))

    def rhs(r, y):
        return (y[1], quasilinear_accel(r, y[0], y[1], params))

    sol = dopri5(rhs, r0, y0, spec.outer_radius, tols[0], tols[1])
    dev = 0.0
    for r, u in zip(profile.r, profile.u):
        if r < r0 or r > sol.r[-1]:
            continue
        dev = max(dev, abs(float(sol(float(r))[0]) - float(u)))
    return dev
