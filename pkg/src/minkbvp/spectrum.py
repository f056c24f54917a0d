"""Weighted eigenvalues of the linear radial operator with mixed boundary data.

    -(r^(N-1) u')' = lambda r^(N-1) m(r) u,   u'(delta) = 0 = u(R)

Two independent routes:

* rotation-count shooting (primary): integrate the linear flux system,
  bracket lambda_k by the interior-zero count of the shot, polish on the
  terminal value.  Works on the ball (delta = 0) via a Taylor startup and
  yields the eigenfunction's zero count for free.
* Nystrom discretization of the equivalent compact integral operator built
  on the explicit kernel of the auxiliary problem (cross-check; needs
  delta > 0 where the kernel is regular).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from .errors import BracketFailure, HypothesisViolation, MinkBVPError
from .problems import ProblemSpec, ShiftedWeight
from .rk import dopri5

#: minimum relative gap between consecutive eigenvalues (simplicity check)
GAP_TOL = 1e-8


@dataclass(frozen=True)
class EigenRecord:
    k: int
    lam: float
    zeros: int
    method: str
    residual: float


@dataclass(frozen=True)
class EigenSet:
    records: tuple

    def __post_init__(self):
        lams = [rec.lam for rec in self.records]
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise MinkBVPError(f"eigenvalues not strictly increasing: {lams}")
        if lams and any(
            b - a <= GAP_TOL * lams[0] for a, b in zip(lams, lams[1:])
        ):
            raise MinkBVPError(f"eigenvalue gap below simplicity tolerance: {lams}")

    @property
    def lams(self) -> np.ndarray:
        return np.array([rec.lam for rec in self.records])

    def __getitem__(self, i):
        return self.records[i]

    def __len__(self):
        return len(self.records)


# --------------------------------------------------------------------------
# explicit kernel of the auxiliary linear problem
# --------------------------------------------------------------------------

def green_kernel_eval(t, s, dimension: int, outer_radius: float):
    """Kernel K(t, s) of -(r^(N-1) u')' = r^(N-1) h with u'(delta)=0, u(R)=0.

    K(t, s) = (R^(2-N) - max(t,s)^(2-N)) / (2-N) for N >= 3, and
    ln(R / max(t,s)) for N = 2.  Symmetric, nonnegative, K(R, s) = 0.
    """
    N, R = dimension, outer_radius
    if N < 2:
        raise ValueError(f"dimension must be >= 2, got {N}")
    m = np.maximum(t, s)
    if np.any(np.asarray(m) <= 0.0):
        raise MinkBVPError("kernel endpoint max(t,s)=0 (ball inner endpoint); use open quadrature")
    if N == 2:
        return np.log(R / m)
    p = 2.0 - N
    return (R**p - m**p) / p


@dataclass(frozen=True)
class GreenKernel:
    dimension: int
    inner_radius: float
    outer_radius: float

    def __call__(self, t, s):
        return green_kernel_eval(t, s, self.dimension, self.outer_radius)


# --------------------------------------------------------------------------
# rotation-count shooting
# --------------------------------------------------------------------------

def _weight_of(spec: ProblemSpec, weight):
    m = weight if weight is not None else spec.weight
    if m is None:
        raise HypothesisViolation(
            "no linearization weight attached to this problem (A2 fails or is degenerate)"
        )
    return m


def _linear_shot(
    lam: float,
    spec: ProblemSpec,
    m,
    *,
    rtol: float,
    atol: float,
    max_step: float = math.inf,
    want_count: bool = True,
):
    """Shoot the linear flux system from u(delta)=1, u'(delta)=0.

    Returns (terminal u(R), interior zero count).  The count uses node values
    plus midpoint samples of the dense output; adaptive error control keeps
    several steps per half-wave, so crossings cannot pair up inside a step.
    """
    N = spec.dimension
    n1 = N - 1
    R = spec.outer_radius
    delta = spec.inner_radius

    def rhs(r, y):
        rn1 = r**n1
        return (y[1] / rn1, -lam * rn1 * m(r) * y[0])

    if delta > 0:
        r0, y0 = delta, (1.0, 0.0)
    else:
        r0 = 1e-6 * R
        m0 = m(0.0)
        y0 = (1.0 - lam * m0 * r0**2 / (2 * N), -lam * m0 * r0**N / N)

    sol = dopri5(rhs, r0, y0, R, rtol, atol, max_step=max_step, dense=want_count)
    terminal = float(sol.y[-1, 0])
    if not want_count:
        return terminal, -1
    vals = []
    for interp in sol.interpolants:
        vals.append(float(interp(interp.r0)[0]))
        vals.append(float(interp(0.5 * (interp.r0 + interp.r1))[0]))
    vals.append(terminal)
    v = np.asarray(vals)
    count = int(np.sum(v[:-1] * v[1:] < 0))
    return terminal, count


def eigen_prufer(
    spec: ProblemSpec,
    count: int,
    *,
    weight=None,
    max_expand: int = 60,
) -> EigenSet:
    """First `count` weighted eigenvalues by rotation-count shooting.

    lambda_k is bracketed by the integer zero count (which is exactly the
    rotation integer of the shot), narrowed by bisection, then polished on
    the smooth terminal map u(R; lambda) to relative 1e-12.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    m = _weight_of(spec, weight)
    R, delta = spec.outer_radius, spec.inner_radius
    span = spec.span

    grid = np.linspace(delta, R, 257)
    m_max = max(m(float(r)) for r in grid)
    m_min = min(m(float(r)) for r in grid)
    if m_min < 0:
        raise HypothesisViolation(f"weight is negative on the grid (min {m_min:.3g})")
    if m_max <= 0:
        raise HypothesisViolation("weight vanishes identically on the grid")

    records = []
    for k in range(1, count + 1):
        est = (k * math.pi / span) ** 2 / m_max
        coarse = dict(rtol=1e-7, atol=1e-10, max_step=span / (6.0 * (k + 1)))

        def zcount(lam):
            _, c = _linear_shot(lam, spec, m, **coarse)
            return c

        lo, hi = est / 4.0, est * 4.0
        for _ in range(max_expand):
            if zcount(lo) <= k - 1:
                break
            lo /= 2.0
        else:
            raise BracketFailure(f"count {k}: no lower bracket above lambda={lo:.3g}")
        for _ in range(max_expand):
            if zcount(hi) >= k:
                break
            hi *= 2.0
        else:
            raise BracketFailure(f"count {k}: no upper bracket below lambda={hi:.3g}")

        while hi - lo > 1e-2 * lo or zcount(lo) != k - 1 or zcount(hi) != k:
            mid = 0.5 * (lo + hi)
            if zcount(mid) >= k:
                hi = mid
            else:
                lo = mid
            if hi - lo < 1e-13 * hi:
                break

        def terminal(lam):
            t, _ = _linear_shot(lam, spec, m, rtol=1e-11, atol=1e-14, want_count=False)
            return t

        lam_k = brentq(terminal, lo, hi, xtol=1e-13 * hi, rtol=1e-12)

        # validate: residual and the eigenfunction's nodal count
        t_res, c_res = _linear_shot(lam_k, spec, m, rtol=1e-11, atol=1e-14)
        zeros = c_res
        if zeros == k:  # the k-th zero sits at R itself; recount away from it
            coarse_zero, c2 = _linear_shot(
                lam_k * (1 - 1e-9), spec, m, rtol=1e-11, atol=1e-14
            )
            zeros = c2
        if zeros != k - 1:
            raise MinkBVPError(
                f"eigenfunction for k={k} shows {zeros} interior zeros"
            )
        records.append(
            EigenRecord(k=k, lam=float(lam_k), zeros=zeros, method="prufer", residual=abs(t_res))
        )
    return EigenSet(records=tuple(records))


# --------------------------------------------------------------------------
# Nystrom route
# --------------------------------------------------------------------------

def _panel_rule(delta: float, R: float, panels: int, order: int):
    x, w = leggauss(order)
    edges = np.linspace(delta, R, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights, edges


def _row_integrals(t, edges, g_fn, kernel_g, N, R):
    """Accurate k_bar(t_i) = integral of K(t_i, s) g(s) ds for every node.

    Splitting K(t,s) = G(max(t,s)) gives
        k_bar(t) = G(t) * P(t) + integral_t^R G(s) g(s) ds
    with P(t) = integral_delta^t g.  Both pieces are smooth, so per-panel
    Gauss rules plus a partial-panel rule at each node are exact to
    round-off; the kernel crease never enters.
    """
    x8, w8 = leggauss(8)

    def gl_panel(lo, hi, fn):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        pts = mid[..., None] + half[..., None] * x8
        return half * (fn(pts) @ w8)

    g_panels = gl_panel(edges[:-1], edges[1:], g_fn)
    T_panels = gl_panel(edges[:-1], edges[1:], lambda s: kernel_g(s) * g_fn(s))
    cumP = np.concatenate([[0.0], np.cumsum(g_panels)])
    cumT = np.concatenate([[0.0], np.cumsum(T_panels)])
    totalT = cumT[-1]

    idx = np.clip(np.searchsorted(edges, t, side="right") - 1, 0, len(edges) - 2)
    lo = edges[idx]
    P_t = cumP[idx] + gl_panel(lo, t, g_fn)
    T_to_t = cumT[idx] + gl_panel(lo, t, lambda s: kernel_g(s) * g_fn(s))
    return kernel_g(t) * P_t + (totalT - T_to_t)


def _nystrom_lams(spec: ProblemSpec, m, count: int, panels: int, order: int):
    N, R, delta = spec.dimension, spec.outer_radius, spec.inner_radius
    t, w, edges = _panel_rule(delta, R, panels, order)
    m_vec = np.vectorize(m, otypes=[float])
    mv = m_vec(t)
    if np.any(mv < 0):
        raise HypothesisViolation("weight is negative on the quadrature grid")
    omega = w * t ** (N - 1) * mv
    if not np.any(omega > 0):
        raise HypothesisViolation("weight vanishes identically: no positive eigenvalues")

    K = green_kernel_eval(t[:, None], t[None, :], N, R)

    # singularity subtraction: quadrature acts on u(s) - u(t), which vanishes
    # across the diagonal crease; the exact row integral k_bar is added back
    # on the diagonal.
    def g_fn(s):
        return s ** (N - 1) * m_vec(s)

    def kernel_g(s):
        return green_kernel_eval(s, s, N, R)

    k_bar = _row_integrals(t, edges, g_fn, kernel_g, N, R)
    diag_corr = k_bar - K @ omega

    if np.all(omega > 0):
        sq = np.sqrt(omega)
        B = K * np.outer(sq, sq) + np.diag(diag_corr)
        evals, evecs = np.linalg.eigh(B)
        u_from_z = lambda z: z / sq
    else:
        A = K * omega[None, :] + np.diag(diag_corr)
        evals_c, evecs_c = np.linalg.eig(A)
        keep = np.abs(evals_c.imag) <= 1e-10 * np.abs(evals_c.real).max()
        evals, evecs = evals_c.real[keep], evecs_c.real[:, keep]
        u_from_z = lambda z: z

    order_desc = np.argsort(evals)[::-1]
    mus = evals[order_desc]
    if np.sum(mus > 0) < count:
        raise MinkBVPError(
            f"only {int(np.sum(mus > 0))} positive operator eigenvalues at Q={len(t)}"
        )
    lams = 1.0 / mus[:count]
    zero_counts = []
    for i in range(count):
        u = u_from_z(evecs[:, order_desc[i]])
        zero_counts.append(int(np.sum(u[:-1] * u[1:] < 0)))
    return lams, zero_counts


def eigen_nystrom(
    spec: ProblemSpec,
    count: int,
    *,
    weight=None,
    quadrature: int = 512,
    panel_order: int = 4,
) -> EigenSet:
    """First `count` eigenvalues via the discretized integral operator.

    Composite Gauss-Legendre panels (shared for rows and columns, so the
    kernel's diagonal crease stays confined to one panel per row); the
    matrix eigenvalues are 1/lambda_k.  The residual is a Richardson check
    against the doubled grid.  Requires delta > 0.
    """
    if spec.inner_radius <= 0:
        raise ValueError("Nystrom route needs delta > 0 (kernel is endpoint-singular on the ball)")
    if quadrature < 64:
        raise ValueError(f"quadrature size must be >= 64, got {quadrature}")
    m = _weight_of(spec, weight)
    panels = max(2, quadrature // panel_order)
    lams, zeros = _nystrom_lams(spec, m, count, panels, panel_order)
    lams2, _ = _nystrom_lams(spec, m, count, 2 * panels, panel_order)
    records = tuple(
        EigenRecord(
            k=i + 1,
            lam=float(lams[i]),
            zeros=zeros[i],
            method="nystrom",
            residual=float(abs(lams[i] - lams2[i]) / lams2[i]),
        )
        for i in range(count)
    )
    return EigenSet(records=records)


def eigen_shift_family(spec: ProblemSpec, n: int, count: int) -> EigenSet:
    """Eigenvalues of the annulus problem with inner radius 1/n and the
    weight shifted outward by 1/n; converges to the ball eigenvalues."""
    R = spec.outer_radius
    if n < math.ceil(2.0 / R):
        raise ValueError(f"need n >= ceil(2/R) = {math.ceil(2.0 / R)}, got {n}")
    base = _weight_of(spec, None)
    shifted = ShiftedWeight(base, 1.0 / n)
    spec_n = spec.replace(inner_radius=1.0 / n)
    return eigen_prufer(spec_n, count, weight=shifted)
