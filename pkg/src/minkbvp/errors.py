"""Exception types shared across the package."""


class MinkBVPError(Exception):
    """Base class for all package-specific failures."""


class NonlinearityDomainError(MinkBVPError, ValueError):
    """f(r, s) was evaluated outside its s-domain (|s| >= alpha)."""


class HypothesisViolation(MinkBVPError):
    """A problem fails a structural hypothesis required by the requested operation."""


class StepSizeUnderflow(MinkBVPError):
    """Adaptive step fell below 1e-14 * R.

    Signals blow-up or a gradient approaching the light-cone bound faster
    than the tolerances can resolve.  Reported, never silently truncated.
    """

    def __init__(self, r, h, message=None):
        self.r = r
        self.h = h
        super().__init__(message or f"step size underflow at r={r:.6g} (h={h:.3g})")


class EmptyScan(MinkBVPError):
    """Amplitude scan found no bracket for the requested nodal signature.

    A legitimate outcome below the existence threshold lambda_*.
    """


class BracketLost(MinkBVPError):
    """Interior-zero count changed inside a shooting bracket."""

    def __init__(self, d, count, target, message=None):
        self.d = d
        self.count = count
        self.target = target
        super().__init__(
            message
            or f"zero count {count} != target {target} at d={d:.12g} inside bracket"
        )


class DegenerateSolution(MinkBVPError):
    """Nodal classification failed: near-degenerate zero or broken interleaving."""


class SeedFailure(MinkBVPError):
    """No branch seed found near the requested bifurcation point."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class BracketFailure(MinkBVPError):
    """Eigenvalue search window exceeded its cap without bracketing."""


class MissingSolution(MinkBVPError):
    """A scan failed to produce a solution that was expected to exist."""
