"""Global branch structure for the cubic family.

Each nodal class spawns a branch at its weighted eigenvalue lambda_k.  The
gradient bound confines amplitudes, so branches cannot escape upward in
norm: they run off to large lambda instead.  Pseudo-arclength continuation
traces each branch from near the bifurcation point to the lambda cap and
measures the existence threshold lambda_* = min lambda along the way.
"""

import math

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from minkbvp import (
    LinearPlusCubic,
    Origin,
    ProblemSpec,
    continue_branch,
    eigen_prufer,
    seed_from_eigenvalue,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

spec = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0))
lam_cap = 12 * math.pi**2

fig, ax = plt.subplots(figsize=(7, 4.5))
for k in (1, 2):
    lam_k = float(eigen_prufer(spec, k).lams[k - 1])
    for nu, style in ((+1, "-"), (-1, "--")):
        seed, _ = seed_from_eigenvalue(spec, k, nu, lam_k=lam_k)
        br = continue_branch(
            seed, spec, lam_cap=lam_cap, origin=Origin("eigenvalue_bifurcation", lam_k)
        )
        lams = [p.lam for p in br.points]
        amps = [nu * p.sup_u for p in br.points]
        ax.plot(lams, amps, style, color=f"C{k-1}",
                label=f"k={k}, nu={'+' if nu>0 else '-'}")
        print(
            f"(k={k}, nu={nu:+d})  lambda_k = {lam_k:.6f}  lambda_* = "
            f"{br.lambda_star:.6f}  points = {len(br.points)}  "
            f"direction = {br.bifurcation_direction}  end = {br.termination}"
        )
    ax.plot([lam_k], [0], "ko", ms=5)

ax.set_xlabel("lambda")
ax.set_ylabel("signed sup|u|")
ax.set_title("nodal branches leave the trivial axis at lambda_k")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "branches.png", dpi=120)
print("\nwrote", OUT / "branches.png")
print(
    "\nEvery branch is measured supercritical here: the curvature operator's"
    "\ngradient stiffening beats the softening cubic, so lambda grows with"
    "\namplitude and lambda_* = lambda_k to ten digits."
)
