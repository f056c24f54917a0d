import math

import numpy as np
import pytest

from minkbvp import (
    ConstantWeight,
    EigenRecord,
    EigenSet,
    GreenKernel,
    HypothesisViolation,
    LinearPlusCubic,
    MinkBVPError,
    ProblemSpec,
    eigen_nystrom,
    eigen_prufer,
    eigen_shift_family,
    green_kernel_eval,
)

from oracles import bessel_j0_first_zero


class TestGreenKernel:
    def test_dirichlet_end(self):
        for s in (0.1, 0.5, 0.9):
            assert green_kernel_eval(1.0, s, 3, 1.0) == 0.0
            assert green_kernel_eval(1.0, s, 2, 1.0) == 0.0

    def test_planar_log_value(self):
        assert green_kernel_eval(0.5, 0.5, 2, 1.0) == pytest.approx(math.log(2.0), abs=1e-15)

    def test_three_dim_value(self):
        # (R^(2-N) - max^(2-N)) / (2-N) = (1 - 2) / (-1) = 1
        assert green_kernel_eval(0.5, 0.25, 3, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_symmetry_and_sign(self):
        rng = np.linspace(0.05, 1.0, 9)
        for N in (2, 3, 4):
            for t in rng:
                for s in rng:
                    a = green_kernel_eval(float(t), float(s), N, 1.0)
                    b = green_kernel_eval(float(s), float(t), N, 1.0)
                    assert a == b
                    assert a >= 0.0

    def test_origin_endpoint_rejected(self):
        with pytest.raises(MinkBVPError):
            green_kernel_eval(0.0, 0.0, 3, 1.0)

    def test_kernel_object(self):
        K = GreenKernel(dimension=3, inner_radius=0.5, outer_radius=1.0)
        assert K(0.5, 0.25) == pytest.approx(1.0)

    def test_solves_auxiliary_problem(self):
        # u(t) = int K(t,s) s^(N-1) h(s) ds must satisfy -(r^(N-1)u')' =
        # r^(N-1) h with u'(delta)=0, u(R)=0; probe with h = 1, N = 3:
        # closed form u(t) = (R^2 - t^2)/6 + delta^3 (1/R - 1/t)/3
        delta, R, N = 0.5, 1.0, 3
        ss = np.linspace(delta, R, 20001)
        h = np.ones_like(ss)
        for t in (0.5, 0.7, 0.95):
            K = green_kernel_eval(t, ss, N, R)
            u = np.trapezoid(K * ss ** (N - 1) * h, ss)
            exact = (R**2 - t**2) / 6 + delta**3 * (1 / R - 1 / t) / 3
            assert u == pytest.approx(exact, abs=1e-8)


class TestEigenPrufer:
    def test_ball_closed_form(self, ball_cubic):
        es = eigen_prufer(ball_cubic, 3)
        for rec in es.records:
            exact = (rec.k * math.pi) ** 2
            assert abs(rec.lam - exact) / exact < 1e-8
            assert rec.zeros == rec.k - 1
            assert rec.method == "prufer"

    def test_planar_bessel_oracle(self):
        spec = ProblemSpec(dimension=2, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0))
        lam1 = eigen_prufer(spec, 1).lams[0]
        j01 = bessel_j0_first_zero()
        assert abs(lam1 - j01**2) / j01**2 < 1e-6
        assert lam1 == pytest.approx(5.7831860, abs=1e-6)

    def test_weight_scaling_homogeneity(self, annulus_cubic):
        base = eigen_prufer(annulus_cubic, 3).lams
        for c in (2.0, 10.0):
            scaled = eigen_prufer(annulus_cubic, 3, weight=ConstantWeight(c)).lams
            assert np.max(np.abs(scaled * c - base) / base) < 1e-10

    def test_strict_ordering_and_gaps(self, annulus_cubic):
        es = eigen_prufer(annulus_cubic, 5)
        lams = es.lams
        assert np.all(np.diff(lams) > 1e-8 * lams[0])

    def test_missing_weight_rejected(self, superlinear_ball):
        with pytest.raises(HypothesisViolation):
            eigen_prufer(superlinear_ball, 2)

    def test_zero_weight_rejected(self, ball_cubic):
        with pytest.raises(HypothesisViolation):
            eigen_prufer(ball_cubic, 1, weight=ConstantWeight(0.0))

    def test_count_validation(self, ball_cubic):
        with pytest.raises(ValueError):
            eigen_prufer(ball_cubic, 0)


class TestEigenNystrom:
    def test_ball_rejected(self, ball_cubic):
        with pytest.raises(ValueError):
            eigen_nystrom(ball_cubic, 2)

    def test_quadrature_floor(self, annulus_cubic):
        with pytest.raises(ValueError):
            eigen_nystrom(annulus_cubic, 2, quadrature=32)

    def test_agreement_with_prufer(self, annulus_cubic):
        a = eigen_prufer(annulus_cubic, 3).lams
        b = eigen_nystrom(annulus_cubic, 3, quadrature=256).lams
        assert np.max(np.abs(a - b) / a) < 1e-5

    def test_lambda1_tight_agreement(self, annulus_cubic):
        a = eigen_prufer(annulus_cubic, 1).lams[0]
        b = eigen_nystrom(annulus_cubic, 1, quadrature=512).lams[0]
        assert abs(a - b) / a < 1e-6

    def test_second_eigenvector_sign_change(self, annulus_cubic):
        es = eigen_nystrom(annulus_cubic, 2, quadrature=256)
        assert es.records[1].zeros == 1

    def test_zero_weight_flagged(self, annulus_cubic):
        with pytest.raises(HypothesisViolation):
            eigen_nystrom(annulus_cubic, 1, weight=ConstantWeight(0.0))

    def test_richardson_residual_small(self, annulus_cubic):
        es = eigen_nystrom(annulus_cubic, 3, quadrature=512)
        assert all(rec.residual < 1e-6 for rec in es.records)


class TestShiftFamily:
    def test_min_index(self, ball_cubic):
        with pytest.raises(ValueError):
            eigen_shift_family(ball_cubic, 1, 1)

    def test_monotone_convergence_to_ball(self, ball_cubic):
        lam_ball = (math.pi) ** 2
        prev = None
        for n in (4, 16, 64):
            lam_n = eigen_shift_family(ball_cubic, n, 1).lams[0]
            if prev is not None:
                assert lam_n < prev
            assert lam_n > lam_ball
            prev = lam_n
        assert abs(prev - lam_ball) < 1e-3

    def test_ordering_preserved(self, ball_cubic):
        es = eigen_shift_family(ball_cubic, 8, 3)
        assert np.all(np.diff(es.lams) > 0)


class TestEigenSet:
    def test_rejects_unordered(self):
        with pytest.raises(MinkBVPError):
            EigenSet(
                records=(
                    EigenRecord(1, 4.0, 0, "prufer", 0.0),
                    EigenRecord(2, 3.0, 1, "prufer", 0.0),
                )
            )
