"""Embedded Dormand-Prince 5(4) integrator with quartic dense output.

Specialized to two-state systems (every field in this package is a pair:
value/flux, value/slope, or a linearization thereof) and written with plain
float arithmetic: the state vectors are tiny, so unrolled scalar code beats
array machinery by an order of magnitude in the shooting loops.

Kept in-house rather than delegated to a library so the package controls
step breakpoints (piecewise-defined fields), the step-underflow contract,
and event semantics on the identically-zero trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StepSizeUnderflow

# Dormand-Prince RK5(4)7M coefficients
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168,
    -355 / 33,
    46732 / 5247,
    49 / 176,
    -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# b5 - b4 (embedded error weights)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)
# dense-output weights for the quartic interpolant
_D1, _D3, _D4, _D5, _D6, _D7 = (
    -12715105075 / 11282082432,
    87487479700 / 32700410799,
    -10690763975 / 1880347072,
    701980252875 / 199316789632,
    -1453857185 / 822651844,
    69997945 / 29380423,
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass
class StepInterpolant:
    """Quartic interpolant over one accepted step [r0, r1]; returns (y0, y1)."""

    r0: float
    r1: float
    c: tuple  # (c0a, c0b, c1a, c1b, c2a, c2b, c3a, c3b, c4a, c4b)

    def __call__(self, r):
        th = (r - self.r0) / (self.r1 - self.r0)
        om = 1.0 - th
        c = self.c
        ya = c[0] + th * (c[2] + om * (c[4] + th * (c[6] + om * c[8])))
        yb = c[1] + th * (c[3] + om * (c[5] + th * (c[7] + om * c[9])))
        return (ya, yb)


@dataclass
class OdeSolution:
    r: np.ndarray
    y: np.ndarray  # shape (len(r), 2)
    interpolants: list
    nfev: int
    nsteps: int
    nrejected: int

    def __call__(self, r):
        """Dense evaluation at a scalar radius inside the computed range."""
        idx = int(np.searchsorted(self.r, r, side="right")) - 1
        idx = min(max(idx, 0), len(self.interpolants) - 1)
        return self.interpolants[idx](r)


def _initial_step(rhs, r0, ya, yb, fa, fb, span, rtol, atol_a, atol_b):
    sa = atol_a + rtol * abs(ya)
    sb = atol_b + rtol * abs(yb)
    d0 = math.sqrt(0.5 * ((ya / sa) ** 2 + (yb / sb) ** 2))
    d1 = math.sqrt(0.5 * ((fa / sa) ** 2 + (fb / sb) ** 2))
    h0 = 1e-6 * span if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, 0.1 * span)
    ga, gb = rhs(r0 + h0, (ya + h0 * fa, yb + h0 * fb))
    d2 = math.sqrt(0.5 * (((ga - fa) / sa) ** 2 + ((gb - fb) / sb) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6 * span, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span)


def dopri5(
    rhs,
    r0: float,
    y0,
    r_end: float,
    rtol: float,
    atol,
    *,
    max_step: float = math.inf,
    breakpoints=(),
    step_floor: float = 0.0,
    dense: bool = True,
) -> OdeSolution:
    """Integrate the two-state system y' = rhs(r, y) forward from r0 to r_end.

    rhs takes (r, (ya, yb)) and returns (fa, fb).  breakpoints are interior
    radii the stepper never crosses (the field may jump there); step_floor
    triggers StepSizeUnderflow.
    """
    if r_end <= r0:
        raise ValueError(f"forward integration only (r0={r0}, r_end={r_end})")
    ya, yb = float(y0[0]), float(y0[1])
    try:
        atol_a, atol_b = float(atol[0]), float(atol[1])
    except (TypeError, IndexError):
        atol_a = atol_b = float(atol)

    cuts = sorted(b for b in breakpoints if r0 < b < r_end)
    segments = list(zip([r0] + cuts, cuts + [r_end]))

    rs = [r0]
    ys = [(ya, yb)]
    interps: list[StepInterpolant] = []
    nfev = 0
    nsteps = 0
    nrejected = 0

    for seg_lo, seg_hi in segments:
        r = seg_lo
        k1a, k1b = rhs(r, (ya, yb))
        nfev += 2
        h = min(
            _initial_step(rhs, r, ya, yb, k1a, k1b, seg_hi - seg_lo, rtol, atol_a, atol_b),
            max_step,
        )
        just_rejected = False

        while r < seg_hi:
            h = min(h, seg_hi - r, max_step)
            if h < step_floor:
                raise StepSizeUnderflow(r, h)

            k2a, k2b = rhs(r + _C2 * h, (ya + h * _A21 * k1a, yb + h * _A21 * k1b))
            k3a, k3b = rhs(
                r + _C3 * h,
                (ya + h * (_A31 * k1a + _A32 * k2a), yb + h * (_A31 * k1b + _A32 * k2b)),
            )
            k4a, k4b = rhs(
                r + _C4 * h,
                (
                    ya + h * (_A41 * k1a + _A42 * k2a + _A43 * k3a),
                    yb + h * (_A41 * k1b + _A42 * k2b + _A43 * k3b),
                ),
            )
            k5a, k5b = rhs(
                r + _C5 * h,
                (
                    ya + h * (_A51 * k1a + _A52 * k2a + _A53 * k3a + _A54 * k4a),
                    yb + h * (_A51 * k1b + _A52 * k2b + _A53 * k3b + _A54 * k4b),
                ),
            )
            k6a, k6b = rhs(
                r + h,
                (
                    ya + h * (_A61 * k1a + _A62 * k2a + _A63 * k3a + _A64 * k4a + _A65 * k5a),
                    yb + h * (_A61 * k1b + _A62 * k2b + _A63 * k3b + _A64 * k4b + _A65 * k5b),
                ),
            )
            za = ya + h * (_B1 * k1a + _B3 * k3a + _B4 * k4a + _B5 * k5a + _B6 * k6a)
            zb = yb + h * (_B1 * k1b + _B3 * k3b + _B4 * k4b + _B5 * k5b + _B6 * k6b)
            k7a, k7b = rhs(r + h, (za, zb))
            nfev += 12

            ea = h * (_E1 * k1a + _E3 * k3a + _E4 * k4a + _E5 * k5a + _E6 * k6a + _E7 * k7a)
            eb = h * (_E1 * k1b + _E3 * k3b + _E4 * k4b + _E5 * k5b + _E6 * k6b + _E7 * k7b)
            sa = atol_a + rtol * max(abs(ya), abs(za))
            sb = atol_b + rtol * max(abs(yb), abs(zb))
            err = math.sqrt(0.5 * ((ea / sa) ** 2 + (eb / sb) ** 2))

            if err <= 1.0:
                r_new = r + h
                if dense:
                    dya, dyb = za - ya, zb - yb
                    c2a, c2b = h * k1a - dya, h * k1b - dyb
                    c3a, c3b = dya - h * k7a - c2a, dyb - h * k7b - c2b
                    c4a = h * (
                        _D1 * k1a + _D3 * k3a + _D4 * k4a + _D5 * k5a + _D6 * k6a + _D7 * k7a
                    )
                    c4b = h * (
                        _D1 * k1b + _D3 * k3b + _D4 * k4b + _D5 * k5b + _D6 * k6b + _D7 * k7b
                    )
                    interps.append(
                        StepInterpolant(
                            r, r_new, (ya, yb, dya, dyb, c2a, c2b, c3a, c3b, c4a, c4b)
                        )
                    )
                rs.append(r_new)
                ys.append((za, zb))
                r, ya, yb = r_new, za, zb
                k1a, k1b = k7a, k7b  # FSAL
                nsteps += 1
                factor = _MAX_FACTOR if not just_rejected else 1.0
                if err > 0.0:
                    factor = min(factor, max(_MIN_FACTOR, _SAFETY * err**-0.2))
                h *= factor
                just_rejected = False
            else:
                nrejected += 1
                just_rejected = True
                h *= max(_MIN_FACTOR, _SAFETY * err**-0.2)

    return OdeSolution(
        r=np.array(rs),
        y=np.array(ys),
        interpolants=interps,
        nfev=nfev,
        nsteps=nsteps,
        nrejected=nrejected,
    )
