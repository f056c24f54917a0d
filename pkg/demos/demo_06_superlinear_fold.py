"""Fold multiplicity for the pure power family f = |s| s.

No linearization weight, no eigenvalue to bifurcate from: the positive
branch instead bends back at a threshold Lambda.  Below it there are no
positive solutions, at it one, above it two (a small-amplitude and a
large-amplitude state).  The threshold moves down as the ball grows.
"""

import math

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from minkbvp import (
    BranchPoint,
    EmptyScan,
    NodalSignature,
    PowerLaw,
    ProblemSpec,
    continue_branch,
    solve_all,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

fig, ax = plt.subplots(figsize=(7, 4.5))
branches = {}
print("  R      Lambda(R)    folds")
for R, color in ((0.5, "C0"), (1.0, "C1"), (2.0, "C2")):
    spec = ProblemSpec(dimension=3, outer_radius=R, nonlinearity=PowerLaw(exponent=2.0))
    scale = (math.pi / R) ** 2
    sols = None
    for c in (2.5, 4.0, 6.5, 10.0):
        try:
            sols = solve_all(c * scale, spec, NodalSignature(1, +1))
            break
        except EmptyScan:
            continue
    branch = continue_branch(
        BranchPoint.from_profile(sols[0]), spec, lam_cap=3.2 * sols[0].lam, collapse_d=1e-9
    )
    branches[R] = (spec, branch)
    ax.plot([p.lam for p in branch.points], [p.sup_u for p in branch.points],
            color=color, label=f"R = {R}")
    fold = [p for p in branch.points if p.fold][0]
    ax.plot([fold.lam], [fold.sup_u], "v", color=color, ms=8)
    print(f"  {R:3.1f}   {branch.lambda_star:10.4f}    {branch.fold_count}")

ax.set_xscale("log")
ax.set_xlabel("lambda")
ax.set_ylabel("sup|u|")
ax.set_title("positive branches fold at Lambda(R); triangles mark the folds")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "superlinear_folds.png", dpi=120)
print("\nwrote", OUT / "superlinear_folds.png")

spec1, branch = branches[1.0]
Lam = branch.lambda_star
print(f"\nmultiplicity across the R = 1 threshold Lambda = {Lam:.5f}:")
for factor in (0.5, 1.5):
    lam = factor * Lam
    try:
        found = solve_all(lam, spec1, NodalSignature(1, +1))
        print(f"  lambda = {factor} Lambda: {len(found)} positive solution(s)")
    except EmptyScan:
        print(f"  lambda = {factor} Lambda: no positive solution")
