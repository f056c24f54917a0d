"""Command-line frontend.

Subcommands: solve, spectrum, branch, sweep, limits, verify.  Outputs are
deterministic for a fixed configuration (see output.py); every run writes a
manifest.json recording the problem hash, tolerances and parameters.

Problem definition file (JSON)::

    {
      "dimension": 3,
      "outer_radius": 1.0,
      "inner_radius": 0.0,          // optional, default 0
      "alpha": null,                // optional; null = family default
      "lambda": 0.0,                // optional default bifurcation parameter
      "family": "linear_plus_cubic",
      "params": {"m": 1.0, "c": 1.0}
    }

Families and their params:
  linear_plus_cubic   {"m": weight, "c": number}
  power_superlinear   {"q": number > 1, "mu": weight}
  power_sublinear     {"q": number in (0,1), "mu": weight}
  custom_table        {"s": [..], "f": [..], "odd": bool, "m": weight|null}
A weight is a number (constant) or {"r": [..], "values": [..]} (table).

Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 hypothesis
violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .continuation import (
    Origin,
    continue_branch,
    lambda_star,
    seed_from_eigenvalue,
    sweep_cells_at,
)
from .errors import EmptyScan, HypothesisViolation, MinkBVPError
from .output import provenance, write_csv, write_json, write_manifest
from .problems import (
    ConstantWeight,
    CustomTable,
    LinearPlusCubic,
    NodalSignature,
    PowerLaw,
    ProblemSpec,
    TableWeight,
    validate_hypotheses,
)
from .shooting import amplitude_grid, solve_all
from .spectrum import eigen_nystrom, eigen_prufer, eigen_shift_family
from .regularize import limit_study_norm_decay, limit_study_slope_cap
from .verify import run_verify

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_HYPOTHESIS = 3


class ProblemFileError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1 (2 is reserved
    for numeric failures)."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# problem file parsing
# --------------------------------------------------------------------------

_TOP_KEYS = {"dimension", "outer_radius", "inner_radius", "alpha", "lambda", "family", "params"}
_FAMILY_PARAMS = {
    "linear_plus_cubic": {"m", "c"},
    "power_superlinear": {"q", "mu"},
    "power_sublinear": {"q", "mu"},
    "custom_table": {"s", "f", "odd", "m"},
}


def _parse_weight(value, where):
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return ConstantWeight(float(value))
    if isinstance(value, dict):
        unknown = set(value) - {"r", "values"}
        if unknown:
            raise ProblemFileError(f"{where}: unknown weight keys {sorted(unknown)}")
        try:
            return TableWeight(tuple(value["r"]), tuple(value["values"]))
        except KeyError as exc:
            raise ProblemFileError(f"{where}: weight table needs 'r' and 'values'") from exc
    raise ProblemFileError(f"{where}: weight must be a number or a table object")


def parse_problem(path) -> ProblemSpec:
    """Load and fully validate a problem definition file; unknown keys rejected."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ProblemFileError(f"{path}: top level must be an object")

    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ProblemFileError(f"{path}: unknown keys {sorted(unknown)}")
    for key in ("dimension", "outer_radius", "family"):
        if key not in doc:
            raise ProblemFileError(f"{path}: missing required key '{key}'")

    family = doc["family"]
    if family not in _FAMILY_PARAMS:
        raise ProblemFileError(
            f"{path}: unknown family '{family}' (choose from {sorted(_FAMILY_PARAMS)})"
        )
    params = doc.get("params", {})
    unknown = set(params) - _FAMILY_PARAMS[family]
    if unknown:
        raise ProblemFileError(f"{path}: unknown params for {family}: {sorted(unknown)}")

    try:
        if family == "linear_plus_cubic":
            nl = LinearPlusCubic(
                weight=_parse_weight(params.get("m", 1.0), f"{path}: params.m"),
                cubic=float(params.get("c", 0.0)),
            )
        elif family in ("power_superlinear", "power_sublinear"):
            q = float(params.get("q", 2.0 if family == "power_superlinear" else 0.5))
            if family == "power_superlinear" and not q > 1:
                raise ProblemFileError(f"{path}: power_superlinear needs q > 1, got {q}")
            if family == "power_sublinear" and not 0 < q < 1:
                raise ProblemFileError(f"{path}: power_sublinear needs 0 < q < 1, got {q}")
            nl = PowerLaw(exponent=q, mu=_parse_weight(params.get("mu", 1.0), f"{path}: params.mu"))
        else:
            nl = CustomTable(
                s_nodes=tuple(params["s"]),
                f_values=tuple(params["f"]),
                odd=bool(params.get("odd", True)),
                weight=_parse_weight(params.get("m"), f"{path}: params.m"),
            )
        alpha = doc.get("alpha")
        spec = ProblemSpec(
            dimension=int(doc["dimension"]),
            outer_radius=float(doc["outer_radius"]),
            inner_radius=float(doc.get("inner_radius", 0.0)),
            lam=float(doc.get("lambda", 0.0)),
            nonlinearity=nl,
            alpha=None if alpha is None else float(alpha),
        )
    except ProblemFileError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise ProblemFileError(f"{path}: {exc}") from exc
    return spec


# --------------------------------------------------------------------------
# shared emission helpers
# --------------------------------------------------------------------------

def _emit_table(out_dir, stem, header, rows, prov, fmt):
    """Diagram emission: bit-stable CSV or JSON with fixed ordering."""
    if fmt == "json":
        payload = {
            "provenance": prov,
            "columns": list(header),
            "rows": [list(r) for r in rows],
        }
        return write_json(Path(out_dir) / f"{stem}.json", payload)
    return write_csv(Path(out_dir) / f"{stem}.csv", header, rows, prov)


def _nu_values(arg):
    return {"+": (+1,), "-": (-1,), "both": (+1, -1)}[arg]


def _tols(args):
    return (args.tol_rel, args.tol_abs)


def _d_grid(spec, args):
    return amplitude_grid(spec, n_geometric=args.d_grid * 3 // 5, n_uniform=args.d_grid - args.d_grid * 3 // 5)


def _gate_hypotheses(spec, need_a1=True):
    report = validate_hypotheses(spec, 32)
    if need_a1 and not report.a1:
        raise HypothesisViolation(
            f"sign condition fails at grid point (r={report.worst_point[0]:.4g}, "
            f"s={report.worst_point[1]:.4g})"
        )
    return report


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _cmd_solve(args):
    spec = parse_problem(args.problem)
    _gate_hypotheses(spec)
    lam = args.lam if args.lam is not None else spec.lam
    if lam <= 0:
        raise MinkBVPError(f"solve needs a positive lambda (got {lam})")
    out = Path(args.out)
    tols = _tols(args)
    prov = provenance(spec, {"rel": tols[0], "abs": tols[1]}, {"lambda": lam})
    files = []
    rows_meta = []
    for nu in _nu_values(args.nu):
        target = NodalSignature(args.k, nu)
        try:
            sols = solve_all(lam, spec, target, _d_grid(spec, args), tols=tols)
        except EmptyScan:
            sols = []
        for i, p in enumerate(sols):
            tag = f"k{target.k}{'p' if nu > 0 else 'm'}_{i}"
            files.append(
                write_csv(
                    out / f"solution_{tag}.csv",
                    ["r", "u", "du"],
                    list(zip(p.r, p.u, p.du)),
                    prov,
                )
            )
            if args.trajectory:
                files.append(
                    write_csv(
                        out / f"trajectory_{tag}.csv",
                        ["r", "u", "du", "w"],
                        p.trajectory.export_rows(),
                        prov,
                    )
                )
            rows_meta.append(
                {
                    "file": f"solution_{tag}.csv",
                    "lambda": lam,
                    "k": target.k,
                    "nu": nu,
                    "d": p.d,
                    "sup_u": p.sup_u,
                    "sup_du": p.sup_du,
                    "c1_norm": p.c1_norm,
                    "zeros": list(p.zeros),
                    "extrema": list(p.extrema),
                }
            )
    files.append(write_json(out / "solutions.json", {"provenance": prov, "solutions": rows_meta}))
    write_manifest(out, prov, files, {"command": "solve", "lambda": lam, "k": args.k, "nu": args.nu})
    print(f"solve: {len(rows_meta)} solution(s) written to {out}")
    return EXIT_OK


def _cmd_spectrum(args):
    spec = parse_problem(args.problem)
    out = Path(args.out)
    tols = _tols(args)
    rows = []
    if args.method in ("prufer", "both"):
        for rec in eigen_prufer(spec, args.count).records:
            rows.append((rec.k, rec.lam, rec.zeros, rec.method, rec.residual))
    if args.method in ("nystrom", "both"):
        for rec in eigen_nystrom(spec, args.count, quadrature=args.quadrature).records:
            rows.append((rec.k, rec.lam, rec.zeros, rec.method, rec.residual))
    if args.shift_index:
        for rec in eigen_shift_family(spec, args.shift_index, args.count).records:
            rows.append((rec.k, rec.lam, rec.zeros, f"prufer-shift-{args.shift_index}", rec.residual))
    rows.sort(key=lambda r: (r[3], r[0]))
    prov = provenance(spec, {"rel": tols[0], "abs": tols[1]}, {"quadrature": args.quadrature})
    f = _emit_table(out, "spectrum", ["k", "lambda", "zeros", "method", "residual"], rows, prov, args.format)
    write_manifest(out, prov, [f], {"command": "spectrum", "count": args.count, "method": args.method})
    print(f"spectrum: {len(rows)} rows written to {f}")
    return EXIT_OK


def _cmd_branch(args):
    spec = parse_problem(args.problem)
    _gate_hypotheses(spec)
    out = Path(args.out)
    tols = _tols(args)
    nu = _nu_values(args.nu)[0]
    seed, lam_k = seed_from_eigenvalue(spec, args.k, nu, eps=args.eps)
    lam_cap = args.lambda_max if args.lambda_max else None
    branch = continue_branch(
        seed, spec, lam_cap, origin=Origin("eigenvalue_bifurcation", lam_k), tols=tols
    )
    rows = [
        (p.lam, p.d, p.sup_u, p.sup_du, p.signature.k, "+" if p.signature.nu > 0 else "-", p.fold)
        for p in branch.points
    ]
    prov = provenance(spec, {"rel": tols[0], "abs": tols[1]}, {"k": args.k, "nu": args.nu})
    f1 = _emit_table(out, "branch", ["lambda", "d", "sup_u", "sup_du", "k", "nu", "fold"], rows, prov, args.format)
    summary = {
        "provenance": prov,
        "origin": {"kind": branch.origin.kind, "lambda": branch.origin.lam},
        "termination": branch.termination,
        "origin_termination": branch.origin_termination,
        "lambda_star": lambda_star(branch),
        "proj_lambda": list(branch.proj_lambda),
        "points": len(branch.points),
        "folds": branch.fold_count,
        "bifurcation_direction": branch.bifurcation_direction,
        "log": branch.log,
    }
    f2 = write_json(out / "branch_summary.json", summary)
    write_manifest(out, prov, [f1, f2], {"command": "branch", "k": args.k, "nu": args.nu})
    print(
        f"branch: {len(branch.points)} points, lambda_* = {branch.lambda_star:.12g}, "
        f"termination {branch.termination}"
    )
    return EXIT_OK


def _cmd_sweep(args):
    if args.lambda_steps < 8:
        print("minkbvp: sweep needs --lambda-steps >= 8", file=sys.stderr)
        return EXIT_USAGE
    if not 0 < args.lambda_min < args.lambda_max:
        print("minkbvp: sweep needs 0 < --lambda-min < --lambda-max", file=sys.stderr)
        return EXIT_USAGE
    spec = parse_problem(args.problem)
    _gate_hypotheses(spec)
    out = Path(args.out)
    tols = _tols(args)
    lams = [
        args.lambda_min + i * (args.lambda_max - args.lambda_min) / (args.lambda_steps - 1)
        for i in range(args.lambda_steps)
    ]
    ks = [int(x) for x in args.k.split(",")]
    sigs = [NodalSignature(k, nu) for k in ks for nu in _nu_values(args.nu)]
    grid = _d_grid(spec, args)

    def cell_group(lam):
        return sweep_cells_at(spec, lam, sigs, grid, tols=tols)

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            groups = list(pool.map(cell_group, lams))
    else:
        groups = [cell_group(lam) for lam in lams]
    cells = [c for grp in groups for c in grp]
    cells.sort(key=lambda c: (c.lam, c.signature.k, -c.signature.nu))
    rows = [
        (
            c.lam,
            c.signature.k,
            "+" if c.signature.nu > 0 else "-",
            c.count,
            c.max_sup_u,
            c.max_sup_du,
            c.error,
        )
        for c in cells
    ]
    prov = provenance(spec, {"rel": tols[0], "abs": tols[1]}, {"k": args.k, "nu": args.nu})
    f = _emit_table(out, "sweep", ["lambda", "k", "nu", "count", "max_sup_u", "max_sup_du", "error"], rows, prov, args.format)
    write_manifest(
        out,
        prov,
        [f],
        {
            "command": "sweep",
            "lambda_grid": [args.lambda_min, args.lambda_max, args.lambda_steps],
            "k": args.k,
            "nu": args.nu,
            "workers": args.workers,
        },
    )
    print(f"sweep: {len(rows)} cells written to {f}")
    return EXIT_OK


def _cmd_limits(args):
    spec = parse_problem(args.problem)
    out = Path(args.out)
    tols = _tols(args)
    prov = provenance(spec, {"rel": tols[0], "abs": tols[1]}, {"mode": args.mode})
    files = []
    if args.mode == "slope-cap":
        ladder = [int(x) for x in args.ladder.split(",")]
        rows = limit_study_slope_cap(spec, args.k, _nu_values(args.nu)[0], ladder)
        files.append(
            _emit_table(
                out,
                "limits_slope_cap",
                ["n", "lambda_k", "seed_lambda", "branch_min_lambda", "error"],
                [(r.n, r.lam_k, r.seed_lam, r.branch_min_lam, r.error) for r in rows],
                prov,
                args.format,
            )
        )
        params = {"command": "limits", "mode": args.mode, "ladder": ladder, "k": args.k}
    elif args.mode == "decay":
        rows = limit_study_norm_decay(spec, n_max=args.n_max, lam=args.lam or 1.0, check=False)
        files.append(
            _emit_table(
                out,
                "limits_decay",
                ["n", "nu", "found", "d", "sup_u", "sup_du", "c1_norm", "error"],
                [
                    (r.n, "+" if r.nu > 0 else "-", r.found, r.d, r.sup_u, r.sup_du, r.c1_norm, r.error)
                    for r in rows
                ],
                prov,
                args.format,
            )
        )
        params = {"command": "limits", "mode": args.mode, "n_max": args.n_max, "lambda": args.lam or 1.0}
    else:  # shift
        ladder = [int(x) for x in args.ladder.split(",")]
        rows = []
        for n in ladder:
            es = eigen_shift_family(spec, n, args.k)
            rows.append((n, es.lams[args.k - 1]))
        files.append(
            _emit_table(out, "limits_shift", ["n", f"lambda_{args.k}"], rows, prov, args.format)
        )
        params = {"command": "limits", "mode": args.mode, "ladder": ladder, "k": args.k}
    write_manifest(out, prov, files, params)
    print(f"limits[{args.mode}]: written to {out}")
    return EXIT_OK


def _cmd_verify(args):
    ok = run_verify()
    return EXIT_OK if ok else EXIT_NUMERIC


# --------------------------------------------------------------------------
# argument wiring
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="minkbvp", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, problem=True):
        if problem:
            sp.add_argument("--problem", required=True, help="problem definition JSON file")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--tol-rel", type=float, default=1e-10)
        sp.add_argument("--tol-abs", type=float, default=1e-13)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("solve", help="all nodal solutions at one lambda")
    common(sp)
    sp.add_argument("--lam", "--lambda", dest="lam", type=float, default=None)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--nu", choices=("+", "-", "both"), default="both")
    sp.add_argument("--d-grid", type=int, default=160, help="amplitude scan size")
    sp.add_argument("--trajectory", action="store_true", help="also export trajectories (r,u,du,w)")
    sp.set_defaults(fn=_cmd_solve)

    sp = sub.add_parser("spectrum", help="weighted eigenvalues")
    common(sp)
    sp.add_argument("--count", type=int, default=5)
    sp.add_argument("--method", choices=("prufer", "nystrom", "both"), default="prufer")
    sp.add_argument("--quadrature", type=int, default=512)
    sp.add_argument("--shift-index", type=int, default=0, help="also emit shifted-annulus eigenvalues for this n")
    sp.set_defaults(fn=_cmd_spectrum)

    sp = sub.add_parser("branch", help="pseudo-arclength branch from an eigenvalue")
    common(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--nu", choices=("+", "-"), default="+")
    sp.add_argument("--eps", type=float, default=None, help="seed amplitude")
    sp.add_argument("--lambda-max", type=float, default=None, help="continuation cap")
    sp.set_defaults(fn=_cmd_branch)

    sp = sub.add_parser("sweep", help="solution counts over a lambda grid")
    common(sp)
    sp.add_argument("--lambda-min", type=float, required=True)
    sp.add_argument("--lambda-max", type=float, required=True)
    sp.add_argument("--lambda-steps", type=int, default=8)
    sp.add_argument("--k", default="1", help="comma-separated nodal indices")
    sp.add_argument("--nu", choices=("+", "-", "both"), default="both")
    sp.add_argument("--d-grid", type=int, default=160)
    sp.set_defaults(fn=_cmd_sweep)

    sp = sub.add_parser("limits", help="regularization limit experiments")
    common(sp)
    sp.add_argument("--mode", choices=("slope-cap", "decay", "shift"), required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--nu", choices=("+", "-"), default="+")
    sp.add_argument("--ladder", default="4,16,64,256")
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--lam", "--lambda", dest="lam", type=float, default=None)
    sp.set_defaults(fn=_cmd_limits)

    sp = sub.add_parser("verify", help="run the built-in invariant suite")
    sp.set_defaults(fn=_cmd_verify)

    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ProblemFileError as exc:
        print(f"minkbvp: problem file error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisViolation as exc:
        print(f"minkbvp: hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except MinkBVPError as exc:
        print(f"minkbvp: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
