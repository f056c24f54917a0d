"""Pseudo-arclength continuation of nodal branches in the (lambda, d) plane.

Shooting reduces each solution branch to a curve G(lambda, d) = 0 with
G(lambda, d) = u(R; lambda, d), so continuation runs on two scalars.  Nodal
membership is enforced a posteriori: every accepted point is classified and
a branch is truncated the moment the corrector lands on a different
signature (never silently mixed).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .errors import EmptyScan, MinkBVPError, SeedFailure
from .integrate import Degenerate, count_nodal_signature
from .problems import NodalSignature, ProblemSpec
from .shooting import (
    SolutionProfile,
    amplitude_grid,
    classify_profile,
    shoot,
    solve_all,
)
from .spectrum import eigen_prufer

log = logging.getLogger(__name__)

LAMBDA_CAP_FACTOR = 20.0  # default cap: 20 * lambda_1 scale
FD_REL = 1e-6  # relative finite-difference step
FD_FLOOR = 1e-9  # absolute floor; must stay far below any live amplitude


@dataclass(frozen=True)
class BranchPoint:
    lam: float
    d: float
    sup_u: float
    sup_du: float
    c1_norm: float
    signature: NodalSignature
    fold: bool = False
    profile: SolutionProfile | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_profile(cls, p: SolutionProfile) -> "BranchPoint":
        return cls(
            lam=p.lam,
            d=p.d,
            sup_u=p.sup_u,
            sup_du=p.sup_du,
            c1_norm=p.c1_norm,
            signature=p.signature,
            profile=p,
        )


@dataclass(frozen=True)
class Origin:
    kind: str  # "eigenvalue_bifurcation" | "zero_lambda_origin" | "user_seed"
    lam: float | None = None


@dataclass
class Branch:
    points: list
    signature: NodalSignature
    origin: Origin
    termination: str  # forward-end fate: lambda_cap | step_failure | trivial_collapse | nodal_jump
    origin_termination: str  # backward-end fate, same vocabulary
    log: list = field(default_factory=list)

    @property
    def lambda_star(self) -> float:
        return min(p.lam for p in self.points)

    @property
    def proj_lambda(self) -> tuple:
        lams = [p.lam for p in self.points]
        return (min(lams), max(lams))

    @property
    def fold_count(self) -> int:
        return sum(1 for p in self.points if p.fold)

    @property
    def bifurcation_direction(self) -> str:
        """Measured direction at the bifurcation point: does lambda grow or
        shrink with amplitude near the trivial state?  Reported, never
        guaranteed; empty for branches that do not bifurcate from an
        eigenvalue.

        Sampled at a small-but-resolved amplitude: at the very smallest
        amplitudes the quadratic signal lambda(d) - lambda_k sits below the
        corrector slack, so the tiniest points carry sign noise.
        """
        if self.origin.kind != "eigenvalue_bifurcation" or self.origin.lam is None:
            return ""
        d_max = max(abs(p.d) for p in self.points)
        resolved = [p for p in self.points if abs(p.d) >= 0.05 * d_max]
        small = min(resolved or self.points, key=lambda p: abs(p.d))
        rel = (small.lam - self.origin.lam) / self.origin.lam
        if abs(rel) < 1e-9:
            return "indeterminate"
        return "supercritical" if rel > 0 else "subcritical"

    def __len__(self):
        return len(self.points)


def _terminal_fn(spec: ProblemSpec, *, tols=None):
    def G(lam: float, d: float) -> float:
        return shoot(d, lam, spec, tols, events=False).terminal

    return G


def _corr_tol(d: float) -> float:
    """Corrector residual threshold: never looser than the shooting zero
    tolerance, and scaling down with d so lambda stays sharp near the
    trivial solution."""
    return min(1e-9 * max(1.0, abs(d)), max(1e-8 * abs(d), 3e-13))


def seed_from_eigenvalue(
    spec: ProblemSpec,
    k: int,
    nu: int,
    *,
    eps: float | None = None,
    weight=None,
    lam_k: float | None = None,
) -> tuple[BranchPoint, float]:
    """First validated branch point near the k-th bifurcation point.

    Fixes the amplitude d = nu * eps and root-finds lambda in the window
    [0.8, 1.2] * lambda_k where the shot with that amplitude closes the
    boundary condition with the right zero count.  Returns (point, lambda_k).
    """
    target = NodalSignature(k, nu)
    if eps is None:
        eps = 1e-3 * spec.span
    if lam_k is None:
        lam_k = float(eigen_prufer(spec, k, weight=weight).lams[k - 1])
    d = nu * eps
    lo, hi = 0.8 * lam_k, 1.2 * lam_k

    for n_scan in (33, 129):
        lams = np.linspace(lo, hi, n_scan)
        shots = [shoot(d, float(lam), spec) for lam in lams]
        bracket = None
        for (la, sa), (lb, sb) in zip(
            zip(lams, shots), zip(lams[1:], shots[1:])
        ):
            counts = {sa.zero_count, sb.zero_count}
            if sa.terminal * sb.terminal < 0 and counts == {k - 1, k}:
                bracket = (float(la), float(lb))
                break
        if bracket is not None:
            break
    if bracket is None:
        raise SeedFailure(
            f"no seed for {target} near lambda_k={lam_k:.6g} at |d|={eps:.3g}",
            diagnostics={
                "window": (lo, hi),
                "counts": [s.zero_count for s in shots],
                "terminals": [s.terminal for s in shots],
            },
        )
    G = _terminal_fn(spec)
    lam_seed = brentq(lambda lam: G(lam, d), *bracket, xtol=1e-12 * lam_k, rtol=1e-12)
    prof = classify_profile(shoot(d, float(lam_seed), spec), float(lam_seed), spec, target)
    return BranchPoint.from_profile(prof), lam_k


def _trace_direction(
    spec: ProblemSpec,
    seed: BranchPoint,
    orient: float,
    lam_cap: float,
    *,
    ds0: float,
    ds_min: float,
    ds_max: float,
    max_points: int,
    collapse_d: float,
    tols,
):
    """One-directional pseudo-arclength march; returns (points, fate, log)."""
    G = _terminal_fn(spec, tols=tols)
    lam_sc = max(abs(seed.lam), 1.0)
    d_sc = spec.span
    target = seed.signature
    k = target.k

    def jac(lam, d):
        # central differences; the step scales with the variable and floors
        # at 1e-9 so it never swamps a small amplitude
        hl = max(FD_FLOOR, FD_REL * abs(lam))
        hd = max(FD_FLOOR, FD_REL * abs(d))
        gl = (G(lam + hl, d) - G(lam - hl, d)) / (2 * hl)
        gd = (G(lam, d + hd) - G(lam, d - hd)) / (2 * hd)
        return gl * lam_sc, gd * d_sc  # scaled-variable Jacobian

    points: list[BranchPoint] = []
    notes: list[str] = []
    lam, d = seed.lam, seed.d
    prev_tangent = None
    ds = ds0

    for _ in range(max_points):
        jl, jd = jac(lam, d)
        norm = math.hypot(jl, jd)
        if norm == 0.0:
            notes.append(f"singular Jacobian at (lambda={lam:.6g}, d={d:.6g})")
            return points, "step_failure", notes
        tl, td = -jd / norm, jl / norm
        if prev_tangent is not None:
            if tl * prev_tangent[0] + td * prev_tangent[1] < 0:
                tl, td = -tl, -td
        else:
            # first step: orient along growing (orient=+1) or shrinking
            # (orient=-1) amplitude, falling back to the lambda direction
            ref = td if abs(td) > 1e-12 else tl
            if math.copysign(1.0, ref) * math.copysign(1.0, seed.d or 1.0) != orient:
                tl, td = -tl, -td
        prev_tangent = (tl, td)

        accepted = None
        while ds >= ds_min:
            # geometric caps: branches of every nodal class accumulate at the
            # trivial state, so steps must shrink with lambda and with |d|
            # (at most halving the amplitude per step, which also prevents
            # crossing onto the mirror branch)
            ds_try = ds
            dl_move = abs(tl) * lam_sc
            if dl_move > 0:
                ds_try = min(ds_try, 0.3 * max(lam, 1e-3 * lam_sc) / dl_move)
            dd_move = td * d_sc
            if d != 0.0 and dd_move * d < 0:
                ds_try = min(ds_try, 0.5 * abs(d) / abs(dd_move))
            lam_p = lam + ds_try * tl * lam_sc
            d_p = d + ds_try * td * d_sc
            ok, lam_c, d_c = _correct(G, jac, (jl, jd), (tl, td), lam_p, d_p, lam_sc, d_sc)
            if ok and lam_c > 0 and d_c * (d if d != 0 else d_c) >= 0:
                # trust region: a converged point far from the predictor is a
                # basin hop onto a neighboring branch, not a continuation step
                dist = math.hypot((lam_c - lam_p) / lam_sc, (d_c - d_p) / d_sc)
                if dist <= 2.0 * ds_try + 1e-12:
                    accepted = (lam_c, d_c)
                    break
            ds *= 0.5
        if accepted is None:
            notes.append(f"corrector failed below ds_min at (lambda={lam:.6g}, d={d:.6g})")
            return points, "step_failure", notes

        lam, d = accepted
        res = shoot(d, lam, spec, tols)
        sig = count_nodal_signature(res.trajectory)
        if isinstance(sig, Degenerate) or sig != target:
            notes.append(
                f"nodal jump at (lambda={lam:.6g}, d={d:.6g}): "
                f"{sig.reason if isinstance(sig, Degenerate) else sig} != {target}"
            )
            return points, "nodal_jump", notes
        prof = classify_profile(res, lam, spec, target, sample_count=513)
        points.append(BranchPoint.from_profile(prof))

        if lam >= lam_cap:
            return points, "lambda_cap", notes
        if abs(d) <= collapse_d:
            return points, "trivial_collapse", notes
        ds = min(ds * 1.4, ds_max)

    notes.append(f"point budget ({max_points}) exhausted")
    return points, "step_failure", notes


def _correct(G, jac, j0, tangent, lam, d, lam_sc, d_sc, max_iter=10):
    """Newton on [G = 0; arclength constraint] with a quasi-fixed Jacobian."""
    tl, td = tangent
    lam0, d0 = lam, d
    jl, jd = j0
    for it in range(max_iter):
        g = G(lam, d)
        c = ((lam - lam0) / lam_sc) * tl + ((d - d0) / d_sc) * td
        if abs(g) <= _corr_tol(d) and abs(c) < 1e-12:
            return True, lam, d
        if it >= 3:  # refresh the Jacobian if convergence drags
            jl, jd = jac(lam, d)
        det = jl * td - jd * tl
        if det == 0.0 or not math.isfinite(det):
            return False, lam, d
        # solve [jl jd; tl td] [dl; dd] = -[g; c] in scaled variables
        dl = (-g * td + jd * c) / det
        dd = (-tl * (-g) + jl * (-c)) / det  # = (tl*g - jl*c)/det
        lam += dl * lam_sc
        dd_step = dd * d_sc
        d += dd_step
        if not (math.isfinite(lam) and math.isfinite(d)):
            return False, lam, d
    return False, lam, d


def continue_branch(
    seed: BranchPoint,
    spec: ProblemSpec,
    lam_cap: float | None = None,
    *,
    origin: Origin | None = None,
    ds0: float = 1e-2,
    ds_min: float = 1e-9,
    ds_max: float = 0.2,
    max_points: int = 400,
    collapse_d: float | None = None,
    tols=None,
) -> Branch:
    """Trace the branch through the seed in both arclength directions.

    Forward direction grows the amplitude (into the branch), backward
    shrinks it (toward the trivial state for bifurcating branches).  Stops
    at lambda >= lam_cap ("joins infinity", certified only as reaching the
    cap), on trivial collapse (|d| below threshold), on unrecoverable step
    failure, or on a nodal jump.
    """
    if lam_cap is None:
        if spec.weight is not None:
            lam_cap = LAMBDA_CAP_FACTOR * float(eigen_prufer(spec, 1).lams[0])
        else:
            lam_cap = LAMBDA_CAP_FACTOR * (math.pi / spec.span) ** 2
    if collapse_d is None:
        collapse_d = max(1e-2 * abs(seed.d), 1e-6 * spec.span)

    fwd, fate_fwd, log_fwd = _trace_direction(
        spec, seed, +1.0, lam_cap,
        ds0=ds0, ds_min=ds_min, ds_max=ds_max, max_points=max_points,
        collapse_d=collapse_d, tols=tols,
    )
    back, fate_back, log_back = _trace_direction(
        spec, seed, -1.0, lam_cap,
        ds0=ds0, ds_min=ds_min, ds_max=ds_max, max_points=max_points,
        collapse_d=collapse_d, tols=tols,
    )

    points = list(reversed(back)) + [seed] + fwd
    points = _mark_folds(points)

    if origin is None:
        if fate_back == "trivial_collapse":
            lam_end = back[-1].lam if back else seed.lam
            if lam_end <= 0.02 * max(p.lam for p in points):
                origin = Origin("zero_lambda_origin", lam_end)
            else:
                origin = Origin("eigenvalue_bifurcation", lam_end)
        else:
            origin = Origin("user_seed", seed.lam)

    return Branch(
        points=points,
        signature=seed.signature,
        origin=origin,
        termination=fate_fwd,
        origin_termination=fate_back,
        log=log_back + log_fwd,
    )


def _mark_folds(points: list) -> list:
    """Flag points where the lambda direction reverses along arclength."""
    if len(points) < 3:
        return points
    out = list(points)
    for i in range(1, len(points) - 1):
        dl_prev = points[i].lam - points[i - 1].lam
        dl_next = points[i + 1].lam - points[i].lam
        if dl_prev * dl_next < 0:
            out[i] = replace(points[i], fold=True)
    return out


def lambda_star(branch: Branch, lam_k: float | None = None) -> float:
    """Infimum of lambda over the branch.

    For branches bifurcating from an eigenvalue, asserts the threshold
    inequality 0 < lambda_* <= lambda_k * (1 + 1e-6).
    """
    if not branch.points:
        raise ValueError("empty branch")
    ls = branch.lambda_star
    if lam_k is None and branch.origin.kind == "eigenvalue_bifurcation":
        lam_k = branch.origin.lam
    if lam_k is not None and branch.origin.kind != "zero_lambda_origin":
        if not (0.0 < ls <= lam_k * (1.0 + 1e-6)):
            raise MinkBVPError(
                f"lambda_* = {ls:.12g} outside (0, lambda_k*(1+1e-6)] with lambda_k={lam_k:.12g}"
            )
    return ls


@dataclass(frozen=True)
class SweepCell:
    lam: float
    signature: NodalSignature
    count: int
    amplitudes: tuple
    max_sup_u: float
    max_sup_du: float
    error: str = ""


def sweep_cells_at(spec: ProblemSpec, lam: float, signatures, d_grid, *, tols=None) -> list[SweepCell]:
    """All requested signature cells at one lambda, sharing a shot cache."""
    cache: dict = {}
    cells = []
    for sig in signatures:
        try:
            sols = solve_all(lam, spec, sig, d_grid, tols=tols, shot_cache=cache)
            cells.append(
                SweepCell(
                    lam=lam,
                    signature=sig,
                    count=len(sols),
                    amplitudes=tuple(p.d for p in sols),
                    max_sup_u=max(p.sup_u for p in sols),
                    max_sup_du=max(p.sup_du for p in sols),
                )
            )
        except EmptyScan:
            cells.append(SweepCell(lam, sig, 0, (), 0.0, 0.0))
        except MinkBVPError as exc:
            log.warning("sweep cell (lambda=%g, %s) failed: %s", lam, sig, exc)
            cells.append(SweepCell(lam, sig, -1, (), 0.0, 0.0, error=str(exc)))
    return cells


def sweep_diagram(
    spec: ProblemSpec,
    lam_grid,
    signatures,
    d_grid=None,
    *,
    tols=None,
) -> list[SweepCell]:
    """Solution counts and norms over a lambda grid, per nodal signature.

    Renders the existence thresholds as data: below lambda_* a cell is
    empty, above lambda_k it holds at least one solution.  Cell errors are
    logged and recorded; the sweep continues.
    """
    lam_grid = [float(x) for x in lam_grid]
    if len(lam_grid) < 8 or any(x <= 0 for x in lam_grid):
        raise ValueError("lambda grid must be positive with >= 8 points")
    if d_grid is None:
        d_grid = amplitude_grid(spec)
    cells = []
    for lam in lam_grid:
        cells.extend(sweep_cells_at(spec, lam, signatures, d_grid, tols=tols))
    return cells
