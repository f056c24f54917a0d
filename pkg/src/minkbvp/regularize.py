"""Regularized problem families and their limit experiments.

Three constructions, indexed by n:

* slope cap: replace f by its secant linearization n f(r, 1/n) s below
  amplitude 1/n.  Restores a finite linearization weight m_n(r) = n f(r, 1/n)
  for nonlinearities with infinite slope at zero; m_n blows up pointwise, so
  the bifurcation values lambda_k(m_n, delta) sink to 0 as n grows.
* radial shift: on the ball, push the nonlinearity outward by 1/n and solve
  on the annulus (1/n, R); annulus solutions extend to ball solutions by a
  constant plug on [0, 1/n].
* annulus shrink: the plain family delta_n = 1/n with f unchanged.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson

from .continuation import continue_branch, seed_from_eigenvalue
from .errors import EmptyScan, HypothesisViolation, MinkBVPError, MissingSolution
from .field import phi1
from .problems import NodalSignature, ProblemSpec, ShiftedWeight
from .shooting import SolutionProfile, amplitude_grid, solve_all
from .spectrum import eigen_prufer

log = logging.getLogger(__name__)

DEFAULT_LADDER = (4, 16, 64, 256)


# --------------------------------------------------------------------------
# slope cap f^[n]
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SlopeCapWeight:
    """m_n(r) = n * f(r, 1/n), the linearization weight of the capped family."""

    base_f: object
    n: int

    def __call__(self, r):
        return self.n * self.base_f(r, 1.0 / self.n)

    def describe(self):
        return {"kind": "slope_cap", "n": self.n}


@dataclass(frozen=True)
class SlopeCapped:
    """f_n(r, s) = n f(r, 1/n) s for |s| <= 1/n, f(r, s) beyond; continuous
    at |s| = 1/n."""

    base: object
    n: int

    family = "slope_capped"
    f0_infinite = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"slope-cap index must be >= 1, got {self.n}")

    @property
    def odd(self):
        return self.base.odd

    @property
    def alpha(self):
        return self.base.alpha

    @property
    def weight(self):
        return SlopeCapWeight(self.base, self.n)

    def __call__(self, r, s):
        if abs(s) <= 1.0 / self.n:
            return self.n * self.base(r, 1.0 / self.n) * s
        return self.base(r, s)

    def describe(self):
        return {"family": self.family, "n": self.n, "base": self.base.describe()}


def build_slope_capped(spec: ProblemSpec, n: int) -> ProblemSpec:
    """Problem with f replaced by its slope-capped version f_n."""
    return spec.replace(nonlinearity=SlopeCapped(spec.nonlinearity, n))


# --------------------------------------------------------------------------
# radial shift g_n
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialShifted:
    """g_n(r, s) = 0 for r <= 1/n, f(r - 1/n, s) for r > 1/n.

    Discontinuous in r at the junction unless f(0, s) = 0; the jump magnitude
    is |f(0, s)| (see junction_mismatch).
    """

    base: object
    shift: float

    family = "radial_shifted"

    @property
    def odd(self):
        return self.base.odd

    @property
    def alpha(self):
        return self.base.alpha

    @property
    def f0_infinite(self):
        return self.base.f0_infinite

    @property
    def weight(self):
        m = self.base.weight
        return ShiftedWeight(m, self.shift) if m is not None else None

    def __call__(self, r, s):
        if r <= self.shift:
            return 0.0
        return self.base(r - self.shift, s)

    def describe(self):
        return {"family": self.family, "shift": self.shift, "base": self.base.describe()}


def build_radial_shift(spec: ProblemSpec, n: int) -> ProblemSpec:
    """Annulus problem (1/n, R) with the outward-shifted nonlinearity."""
    if spec.inner_radius != 0.0:
        raise ValueError("radial shift starts from a ball problem (delta = 0)")
    shift = 1.0 / n
    if not shift < spec.outer_radius:
        raise ValueError(f"need 1/n < R, got 1/{n} vs R={spec.outer_radius}")
    return spec.replace(
        inner_radius=shift, nonlinearity=RadialShifted(spec.nonlinearity, shift)
    )


def junction_mismatch(g_spec: ProblemSpec, s: float) -> float:
    """|f(0, s)|: the r-discontinuity of g_n at the junction radius."""
    nl = g_spec.nonlinearity
    if not isinstance(nl, RadialShifted):
        raise ValueError("junction_mismatch applies to radially shifted problems")
    return abs(nl.base(0.0, s))


@dataclass(frozen=True)
class RegularizedFamily:
    """One member of a regularization ladder."""

    base: ProblemSpec
    n: int
    kind: str  # "slope_cap" | "radial_shift" | "annulus_shrink"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"index must be >= 1, got {self.n}")
        if self.kind not in ("slope_cap", "radial_shift", "annulus_shrink"):
            raise ValueError(f"unknown regularization kind {self.kind!r}")
        if self.kind in ("radial_shift", "annulus_shrink"):
            if not 1.0 / self.n < self.base.outer_radius:
                raise ValueError(f"need 1/n < R for kind {self.kind!r}")

    def build(self) -> ProblemSpec:
        if self.kind == "slope_cap":
            return build_slope_capped(self.base, self.n)
        if self.kind == "radial_shift":
            return build_radial_shift(self.base, self.n)
        return self.base.replace(inner_radius=1.0 / self.n)


# --------------------------------------------------------------------------
# constant extension of annulus solutions to the ball
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtendedProfile:
    """Annulus solution extended by its inner value onto [0, 1/n]."""

    junction: float
    r: np.ndarray
    u: np.ndarray
    du: np.ndarray
    sup_u: float
    junction_slope_jump: float
    second_derivative_jump: float
    inner_residual: float
    profile: SolutionProfile = field(repr=False)


def extend_to_ball(
    profile: SolutionProfile,
    g_spec: ProblemSpec,
    *,
    slope_tol: float = 1e-8,
    inner_points: int = 65,
) -> ExtendedProfile:
    """Extend an annulus solution with u'(1/n) = 0 constantly to the ball.

    The extension matches C1 at the junction (both one-sided slopes vanish)
    and solves the shifted ball problem on [0, 1/n] exactly: u' = 0 and the
    shifted nonlinearity vanishes there, so the residual is identically zero.
    The second derivative is generally discontinuous; its jump
    lambda * |f(0+, u(1/n))| is measured and reported, not interpreted.
    """
    rj = g_spec.inner_radius
    slope_jump = abs(float(profile.du[0]))
    if slope_jump > slope_tol:
        raise MinkBVPError(
            f"inner slope {slope_jump:.3e} exceeds {slope_tol:.1e}; "
            "not a Neumann annulus solution"
        )
    u_j = float(profile.u[0])
    r_in = np.linspace(0.0, rj, inner_points, endpoint=False)
    r_ext = np.concatenate([r_in, profile.r])
    u_ext = np.concatenate([np.full(inner_points, u_j), profile.u])
    du_ext = np.concatenate([np.zeros(inner_points), profile.du])

    nl = g_spec.nonlinearity
    inside_accel = 0.0  # u constant, g_n = 0 on (0, 1/n]
    outside_accel = -profile.lam * nl(rj * (1 + 1e-12), u_j)
    return ExtendedProfile(
        junction=rj,
        r=r_ext,
        u=u_ext,
        du=du_ext,
        sup_u=float(np.max(np.abs(u_ext))),
        junction_slope_jump=slope_jump,
        second_derivative_jump=abs(outside_accel - inside_accel),
        inner_residual=0.0,
        profile=profile,
    )


def ball_residual(ext: ExtendedProfile, g_spec: ProblemSpec, arch_samples: int = 1025) -> float:
    """Sup-norm defect of the extended profile in the flux form of the ball
    problem: r^(N-1) phi1(u') + lambda * integral_0^r t^(N-1) g_n(t, u) dt.

    Zero on [0, 1/n] by construction; beyond the junction it measures the
    integrator + quadrature error of the underlying annulus solution.  The
    quadrature runs arch by arch on a cosine-graded grid: nonlinearities
    with infinite slope at zero (|u|^q, q < 1) make the integrand's
    derivatives blow up at every zero of u, and the grading restores smooth
    convergence there.
    """
    N = g_spec.dimension
    lam = ext.profile.lam
    traj = ext.profile.trajectory
    R = g_spec.outer_radius

    edges = [ext.junction] + [z for z in ext.profile.zeros] + [R]
    worst = 0.0
    offset = 0.0  # accumulated integral up to the current arch start
    for a, b in zip(edges, edges[1:]):
        t = np.linspace(0.0, 1.0, arch_samples)
        rr = a + (b - a) * 0.5 * (1.0 - np.cos(math.pi * t))
        drdt = (b - a) * 0.5 * math.pi * np.sin(math.pi * t)
        uu = np.array([traj.solution(float(r))[0] for r in rr])
        gg = np.array(
            [r ** (N - 1) * g_spec.eval_f(float(r), float(u)) for r, u in zip(rr, uu)]
        )
        integral = offset + cumulative_simpson(gg * drdt, x=t, initial=0.0)
        flux = np.array(
            [r ** (N - 1) * phi1(traj.slope_at(float(r))) for r in rr]
        )
        worst = max(worst, float(np.max(np.abs(flux + lam * integral))))
        offset = float(integral[-1])
    return worst


# --------------------------------------------------------------------------
# limit experiments
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SlopeCapRow:
    n: int
    lam_k: float
    seed_lam: float
    branch_min_lam: float
    error: str = ""


def limit_study_slope_cap(
    spec: ProblemSpec,
    k: int,
    nu: int,
    ladder=DEFAULT_LADDER,
    *,
    branch_points: int = 40,
) -> list[SlopeCapRow]:
    """Slope-cap ladder: bifurcation values lambda_k(m_n, delta) sink to zero.

    For each n: cap the slope, compute the k-th weighted eigenvalue, seed the
    (k, nu) branch near it and trace briefly; the table exhibits the
    migration of the whole branch family toward lambda = 0.
    """
    if not spec.nonlinearity.f0_infinite:
        raise HypothesisViolation("slope-cap limit study needs the infinite-slope regime (A3)")
    rows = []
    for n in ladder:
        try:
            spec_n = build_slope_capped(spec, n)
            lam_k = float(eigen_prufer(spec_n, k).lams[k - 1])
            seed, _ = seed_from_eigenvalue(spec_n, k, nu, lam_k=lam_k)
            branch = continue_branch(
                seed, spec_n, lam_cap=2.0 * lam_k, max_points=branch_points
            )
            rows.append(
                SlopeCapRow(
                    n=n,
                    lam_k=lam_k,
                    seed_lam=seed.lam,
                    branch_min_lam=branch.lambda_star,
                )
            )
        except MinkBVPError as exc:
            log.warning("slope-cap ladder entry n=%d failed: %s", n, exc)
            rows.append(SlopeCapRow(n, math.nan, math.nan, math.nan, error=str(exc)))
    return rows


@dataclass(frozen=True)
class DecayRow:
    n: int
    nu: int
    found: bool
    d: float
    sup_u: float
    sup_du: float
    c1_norm: float
    error: str = ""


def limit_study_norm_decay(
    spec: ProblemSpec,
    n_max: int = 6,
    lam: float = 1.0,
    *,
    d_grid=None,
    check: bool = True,
) -> list[DecayRow]:
    """Fixed lambda, growing nodal count: norms of u_n decay toward zero.

    For each nodal class n <= n_max and both signs, finds a solution by
    amplitude scan and records its norms.  With check=True asserts the C1
    norms are eventually decreasing (from the first index with consecutive
    ratio < 1 onward) and that the last entry is below half the first.
    """
    if n_max < 4:
        raise ValueError(f"n_max must be >= 4, got {n_max}")
    if not spec.nonlinearity.f0_infinite:
        raise HypothesisViolation("norm-decay study needs the infinite-slope regime (A3)")
    if d_grid is None:
        d_grid = amplitude_grid(spec, n_geometric=160, n_uniform=48, d_min=1e-9)
    rows = []
    cache: dict = {}
    for n in range(1, n_max + 1):
        for nu in (+1, -1):
            try:
                sols = solve_all(lam, spec, NodalSignature(n, nu), d_grid, shot_cache=cache)
                best = max(sols, key=lambda p: abs(p.d))
                rows.append(
                    DecayRow(n, nu, True, best.d, best.sup_u, best.sup_du, best.c1_norm)
                )
            except (EmptyScan, MinkBVPError) as exc:
                log.warning("decay study: no (%d, %+d) solution: %s", n, nu, exc)
                rows.append(
                    DecayRow(n, nu, False, math.nan, math.nan, math.nan, math.nan, error=str(exc))
                )
    if check:
        for nu in (+1, -1):
            seq = [row.c1_norm for row in rows if row.nu == nu and row.found]
            if len(seq) < 2:
                raise MissingSolution(f"too few solutions found for nu={nu:+d}")
            start = next(
                (i for i in range(len(seq) - 1) if seq[i + 1] < seq[i]), None
            )
            if start is None:
                raise MinkBVPError(f"C1 norms never start decreasing (nu={nu:+d}): {seq}")
            tail = seq[start:]
            if any(b >= a for a, b in zip(tail, tail[1:])):
                raise MinkBVPError(f"C1 norms not eventually decreasing (nu={nu:+d}): {seq}")
            if not seq[-1] < 0.5 * seq[0]:
                raise MinkBVPError(
                    f"C1 norm decay too weak (nu={nu:+d}): last/first = {seq[-1] / seq[0]:.3f}"
                )
    return rows
