"""Radial Minkowski-curvature BVP toolkit: shooting, continuation, spectra."""

from .errors import (
    BracketFailure,
    BracketLost,
    DegenerateSolution,
    EmptyScan,
    HypothesisViolation,
    MinkBVPError,
    MissingSolution,
    NonlinearityDomainError,
    SeedFailure,
    StepSizeUnderflow,
)
from .field import (
    FieldParams,
    RadialState,
    flux_rhs,
    h_factor,
    origin_startup,
    phi1,
    phi1_inv,
)
from .integrate import (
    Degenerate,
    Event,
    Trajectory,
    count_nodal_signature,
    integrate,
    zero_tolerance,
)
from .problems import (
    ConstantWeight,
    CustomTable,
    HypothesisReport,
    LinearPlusCubic,
    NodalSignature,
    PowerLaw,
    ProblemSpec,
    ShiftedWeight,
    TableWeight,
    TruncatedNonlinearity,
    eval_f,
    truncate_f,
    validate_hypotheses,
)
from .shooting import (
    ShootResult,
    SolutionProfile,
    amplitude_grid,
    classify_profile,
    first_arch_check,
    reintegrate_quasilinear,
    shoot,
    solve_all,
    solve_bvp,
    time_map_scan,
)
from .spectrum import (
    EigenRecord,
    EigenSet,
    GreenKernel,
    eigen_nystrom,
    eigen_prufer,
    eigen_shift_family,
    green_kernel_eval,
)
from .continuation import (
    Branch,
    BranchPoint,
    Origin,
    SweepCell,
    continue_branch,
    lambda_star,
    seed_from_eigenvalue,
    sweep_cells_at,
    sweep_diagram,
)
from .regularize import (
    DecayRow,
    ExtendedProfile,
    RadialShifted,
    RegularizedFamily,
    SlopeCapRow,
    SlopeCapWeight,
    SlopeCapped,
    ball_residual,
    build_slope_capped,
    build_radial_shift,
    extend_to_ball,
    junction_mismatch,
    limit_study_norm_decay,
    limit_study_slope_cap,
)

__version__ = "0.1.0"
