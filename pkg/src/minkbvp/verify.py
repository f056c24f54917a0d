"""Self-test suite behind the `verify` CLI subcommand.

Runs the package's structural invariants on a stock problem set: operator
identities, spectral oracles with closed forms, symmetry, the trivial
solution, and the a priori bounds on a sample solve.  Fast (seconds), no
files written.
"""

from __future__ import annotations

import math

import numpy as np

from .field import FieldParams, h_factor, phi1, phi1_inv
from .problems import LinearPlusCubic, NodalSignature, ProblemSpec, truncate_f
from .shooting import first_arch_check, reintegrate_quasilinear, shoot, solve_all
from .spectrum import eigen_nystrom, eigen_prufer, green_kernel_eval

_J01_SQUARED = 5.783185962946785  # (first positive zero of J0)^2


def _check_phi_roundtrip():
    grid = np.linspace(-0.999, 0.999, 4001)
    err = max(abs(phi1_inv(phi1(float(s))) - float(s)) for s in grid)
    return err < 1e-12, f"max roundtrip error {err:.2e}"


def _check_phi_shape():
    ss = np.linspace(-0.95, 0.95, 101)
    vals = [phi1(float(s)) for s in ss]
    odd = max(abs(phi1(float(s)) + phi1(-float(s))) for s in ss)
    inc = all(b > a for a, b in zip(vals, vals[1:]))
    d0 = (phi1(1e-7) - phi1(-1e-7)) / 2e-7
    ok = odd == 0.0 and inc and abs(d0 - 1.0) < 1e-6
    return ok, f"oddness {odd:.1e}, increasing {inc}, slope at 0: {d0:.8f}"


def _check_h_factor():
    ok = (
        h_factor(0.0) == 1.0
        and abs(h_factor(0.6) - 0.512) < 1e-15
        and h_factor(1.5) == 0.0
    )
    return ok, "spot values 0 -> 1, 0.6 -> 0.512, 1.5 -> 0"


def _check_flux_identity():
    spec = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0))
    params = FieldParams(spec=spec, lam=7.3)
    worst = 0.0
    for r, u, w in [(0.3, 0.2, -0.01), (0.7, -0.4, 0.15), (0.95, 0.05, -0.3)]:
        n1 = spec.dimension - 1
        s = phi1_inv(w / r**n1)
        f = spec.eval_f(r, u)
        # (r^(N-1) u')' expanded through the flux field must match the
        # divergence-expanded right-hand side
        lhs_accel = -params.lam * f * h_factor(s) - (spec.dimension - 1) * s * (1 - s * s) / r
        lhs = (spec.dimension - 1) * r ** (n1 - 1) * s + r**n1 * lhs_accel
        rhs = -(r**n1) * (params.lam * f * h_factor(s) - (spec.dimension - 1) * s**3 / r)
        worst = max(worst, abs(lhs - rhs))
    return worst < 1e-8, f"max identity defect {worst:.2e}"


def _check_spectrum_oracles():
    spec = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0))
    es = eigen_prufer(spec, 3)
    rel = max(abs(es.lams[k] - ((k + 1) * math.pi) ** 2) / ((k + 1) * math.pi) ** 2 for k in range(3))
    spec2 = ProblemSpec(dimension=2, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0))
    rel2 = abs(eigen_prufer(spec2, 1).lams[0] - _J01_SQUARED) / _J01_SQUARED
    return rel < 1e-8 and rel2 < 1e-6, f"ball N=3 rel {rel:.2e}, N=2 rel {rel2:.2e}"


def _check_method_agreement():
    spec = ProblemSpec(
        dimension=3, outer_radius=1.0, inner_radius=0.5, nonlinearity=LinearPlusCubic(1.0, 1.0)
    )
    a = eigen_prufer(spec, 3).lams
    b = eigen_nystrom(spec, 3, quadrature=256).lams
    rel = float(np.max(np.abs(a - b) / a))
    return rel < 1e-5, f"max relative gap {rel:.2e}"


def _check_green_kernel():
    ok = (
        abs(green_kernel_eval(0.5, 0.5, 2, 1.0) - math.log(2.0)) < 1e-15
        and abs(green_kernel_eval(0.5, 0.25, 3, 1.0) - 1.0) < 1e-15
        and green_kernel_eval(1.0, 0.3, 3, 1.0) == 0.0
    )
    return ok, "spot values ln 2, 1, 0"


def _check_truncation():
    spec = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 0.0))
    tr = truncate_f(spec)
    same = all(
        tr.eval_f(0.5, s) == spec.eval_f(0.5, s) for s in np.linspace(-0.99, 0.99, 21)
    )
    mid = abs(tr.eval_f(0.5, 1.5) - 0.5) < 1e-15
    far = tr.eval_f(0.5, 3.0) == 0.0
    return same and mid and far, "identity inside, linear taper, zero outside"


def _check_trivial_and_symmetry():
    spec = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0))
    z = shoot(0.0, 5.0, spec)
    zero_ok = float(np.max(np.abs(z.trajectory.u))) < 1e-14
    t_plus = shoot(0.3, 12.0, spec).terminal
    t_minus = shoot(-0.3, 12.0, spec).terminal
    sym = abs(t_plus + t_minus)
    return zero_ok and sym < 1e-10, f"|u| from d=0: {0.0:.1g}, symmetry defect {sym:.2e}"


def _check_sample_solve():
    spec = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0))
    lam = 1.5 * math.pi**2
    sols = solve_all(lam, spec, NodalSignature(1, +1))
    p = sols[0]
    bounds = p.sup_du < 1.0 and p.sup_u < spec.span
    arch = first_arch_check(p)
    dev = reintegrate_quasilinear(p, spec, lam)
    return bounds and arch and dev < 1e-6, (
        f"sup_u {p.sup_u:.4f}, sup_du {p.sup_du:.4f}, arch {arch}, requasilinear {dev:.1e}"
    )


CHECKS = [
    ("gradient map roundtrip", _check_phi_roundtrip),
    ("gradient map shape", _check_phi_shape),
    ("slope factor", _check_h_factor),
    ("flux/divergence identity", _check_flux_identity),
    ("spectrum closed forms", _check_spectrum_oracles),
    ("spectral method agreement", _check_method_agreement),
    ("kernel spot values", _check_green_kernel),
    ("truncation", _check_truncation),
    ("trivial solution and symmetry", _check_trivial_and_symmetry),
    ("sample solve bounds", _check_sample_solve),
]


def run_verify(echo=print) -> bool:
    passed = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # surfaced, not swallowed: verify must not lie
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        passed &= ok
        echo(f"{'ok  ' if ok else 'FAIL'} - {name}: {detail}")
    return passed
