import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minkbvp import (
    FieldParams,
    MinkBVPError,
    RadialState,
    flux_rhs,
    h_factor,
    origin_startup,
    phi1,
    phi1_inv,
)
from minkbvp.field import quasilinear_accel

from oracles import rk4_path


class TestPhi1:
    def test_origin(self):
        assert phi1(0.0) == 0.0

    def test_spot_value(self):
        assert phi1(0.6) == pytest.approx(0.75, abs=1e-15)

    def test_odd_spot(self):
        assert phi1(-0.6) == pytest.approx(-0.75, abs=1e-15)

    @pytest.mark.parametrize("s", [1.0, -1.0, 1.5])
    def test_domain_error(self, s):
        with pytest.raises(MinkBVPError):
            phi1(s)

    @given(st.floats(-0.999, 0.999))
    def test_roundtrip(self, s):
        assert phi1_inv(phi1(s)) == pytest.approx(s, abs=1e-12)

    @given(st.floats(-0.99, 0.99))
    def test_oddness(self, s):
        assert phi1(-s) == -phi1(s)

    def test_strictly_increasing(self):
        grid = np.linspace(-0.999, 0.999, 2001)
        vals = [phi1(float(s)) for s in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_unit_slope_at_origin(self):
        fd = (phi1(1e-7) - phi1(-1e-7)) / 2e-7
        assert fd == pytest.approx(1.0, abs=1e-6)


class TestPhi1Inv:
    def test_origin(self):
        assert phi1_inv(0.0) == 0.0

    def test_spot_value(self):
        assert phi1_inv(0.75) == pytest.approx(0.6, abs=1e-15)

    def test_saturation(self):
        v = phi1_inv(1e6)
        assert 1 - 1e-11 < v < 1.0
        assert -1.0 < phi1_inv(-1e6) < -(1 - 1e-11)

    @given(st.floats(-1e12, 1e12, allow_nan=False))
    def test_total_and_bounded(self, t):
        assert abs(phi1_inv(t)) < 1.0


class TestHFactor:
    def test_spot_values(self):
        assert h_factor(0.0) == 1.0
        assert h_factor(0.6) == pytest.approx(0.512, abs=1e-15)
        assert h_factor(1.5) == 0.0

    def test_continuity_at_one(self):
        assert h_factor(1.0 - 1e-9) == pytest.approx(0.0, abs=1e-12)
        assert h_factor(1.0) == 0.0


class TestFluxRHS:
    def test_trivial_state_is_stationary(self, ball_cubic):
        params = FieldParams(spec=ball_cubic, lam=5.0)
        du, dw = flux_rhs(RadialState(r=1.0, u=0.0, w=0.0), params)
        assert du == 0.0 and dw == 0.0

    def test_positive_amplitude_flux_decreases(self, ball_cubic):
        params = FieldParams(spec=ball_cubic, lam=2.0)
        du, dw = flux_rhs(RadialState(r=1.0, u=0.4, w=0.0), params)
        assert du == 0.0
        assert dw < 0.0

    def test_slope_recovery_value(self, ball_linear):
        # w / r^(N-1) = -0.09375 / 0.25 = -0.375
        params = FieldParams(spec=ball_linear, lam=0.0)
        du, _ = flux_rhs(RadialState(r=0.5, u=0.2, w=-0.09375), params)
        assert du == pytest.approx(-0.375 / math.sqrt(1.140625), abs=1e-15)
        assert du == pytest.approx(-0.35112, abs=5e-6)

    def test_negative_lambda_rejected(self, ball_cubic):
        with pytest.raises(ValueError):
            FieldParams(spec=ball_cubic, lam=-1.0)


class TestOriginStartup:
    def test_zero_amplitude(self, ball_linear):
        st0 = origin_startup(0.0, FieldParams(spec=ball_linear, lam=3.0), 1e-4)
        assert st0.u == 0.0 and st0.w == 0.0

    def test_zero_lambda(self, ball_linear):
        st0 = origin_startup(0.4, FieldParams(spec=ball_linear, lam=0.0), 1e-4)
        assert st0.u == 0.4 and st0.w == 0.0

    def test_leading_terms(self, ball_linear):
        # N=3, lambda=1, f(0,d)=d, d=0.1, r=1e-3
        st0 = origin_startup(0.1, FieldParams(spec=ball_linear, lam=1.0), 1e-3)
        assert st0.w == pytest.approx(-0.1e-9 / 3.0, rel=1e-12)
        assert st0.u == pytest.approx(0.1 - 0.1e-6 / 6.0, rel=1e-14)
        assert st0.w == pytest.approx(-3.333e-11, rel=1e-3)
        assert st0.u == pytest.approx(0.1 - 1.6667e-8, rel=1e-12)

    def test_against_dense_rk4(self, ball_linear):
        # march the flux system from r=1e-6 (where the expansion is exact to
        # round-off) up to 1e-3 and compare with the one-shot startup there
        lam, d = 1.0, 0.1
        params = FieldParams(spec=ball_linear, lam=lam)

        def rhs(r, y):
            return np.array(flux_rhs(RadialState(r=r, u=y[0], w=y[1]), params))

        tiny = origin_startup(d, params, 1e-6)
        _, ys = rk4_path(rhs, 1e-6, (tiny.u, tiny.w), 1e-3, 1e-6)
        direct = origin_startup(d, params, 1e-3)
        assert direct.u == pytest.approx(ys[-1, 0], abs=1e-14)
        assert direct.w == pytest.approx(ys[-1, 1], rel=1e-6)

    def test_rejects_bad_start(self, ball_linear, annulus_cubic):
        with pytest.raises(ValueError):
            origin_startup(0.1, FieldParams(spec=ball_linear, lam=1.0), 0.0)
        with pytest.raises(ValueError):
            origin_startup(0.1, FieldParams(spec=annulus_cubic, lam=1.0), 1e-4)


class TestFormEquivalence:
    def test_flux_matches_quasilinear_form(self, ball_cubic):
        """(r^(N-1) u')' expanded through the flux field equals
        r^(N-1) [lambda f h(u') - (N-1) u'^3 / r] with flipped sign."""
        params = FieldParams(spec=ball_cubic, lam=7.3)
        n1 = ball_cubic.dimension - 1
        for r, u, w in [(0.3, 0.2, -0.01), (0.6, -0.5, 0.2), (0.9, 0.1, -0.4)]:
            s = phi1_inv(w / r**n1)
            accel = quasilinear_accel(r, u, s, params)
            lhs = n1 * r ** (n1 - 1) * s + r**n1 * accel
            f = ball_cubic.eval_f(r, u)
            rhs = -(r**n1) * (params.lam * f * h_factor(s) - n1 * s**3 / r)
            assert lhs == pytest.approx(rhs, abs=1e-8)
