"""Weighted eigenvalues: two independent routes and a closed-form check.

The linearized problem -(r^(N-1) u')' = lambda r^(N-1) m(r) u with
u'(delta) = 0 = u(R) supplies the bifurcation points of the nodal branches.
Route one shoots the linear flux system and counts rotations; route two
discretizes the equivalent compact integral operator built on the explicit
kernel.  On the unit ball with m = 1 and N = 3 the eigenvalues are exactly
(k pi)^2, which makes a satisfying sanity anchor.
"""

import math

from minkbvp import (
    ConstantWeight,
    LinearPlusCubic,
    ProblemSpec,
    eigen_nystrom,
    eigen_prufer,
    eigen_shift_family,
)

ball = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0))
print("unit ball, N=3, m=1 (closed form (k pi)^2):")
print("  k   rotation-count      exact           rel err")
for rec in eigen_prufer(ball, 5).records:
    exact = (rec.k * math.pi) ** 2
    print(f"  {rec.k}   {rec.lam:.10f}   {exact:.10f}   {abs(rec.lam-exact)/exact:.1e}")

annulus = ProblemSpec(
    dimension=3, outer_radius=1.0, inner_radius=0.5, nonlinearity=LinearPlusCubic(1.0, 1.0)
)
print("\nannulus (0.5, 1): rotation-count vs integral-operator route:")
a = eigen_prufer(annulus, 5)
b = eigen_nystrom(annulus, 5, quadrature=512)
print("  k   shooting          Nystrom           rel gap    eigfn zeros")
for ra, rb in zip(a.records, b.records):
    print(
        f"  {ra.k}   {ra.lam:.10f}   {rb.lam:.10f}   {abs(ra.lam-rb.lam)/ra.lam:.1e}"
        f"    {rb.zeros}"
    )

print("\nweight scaling m -> 4m divides every eigenvalue by 4:")
scaled = eigen_prufer(annulus, 3, weight=ConstantWeight(4.0))
for ra, rs in zip(a.records[:3], scaled.records):
    print(f"  k={ra.k}: {ra.lam:.8f} / 4 = {ra.lam/4:.8f} vs {rs.lam:.8f}")

print("\nshrinking annulus (1/n, R): eigenvalues sink to the ball values:")
for n in (4, 16, 64, 256):
    lam1 = eigen_shift_family(ball, n, 1).lams[0]
    print(f"  n={n:4d}  lambda_1 = {lam1:.10f}   gap to pi^2 = {lam1 - math.pi**2:.3e}")
