import math

import numpy as np
import pytest

from minkbvp import (
    BracketLost,
    EmptyScan,
    MinkBVPError,
    NodalSignature,
    ProblemSpec,
    amplitude_grid,
    first_arch_check,
    reintegrate_quasilinear,
    shoot,
    solve_all,
    solve_bvp,
    time_map_scan,
    zero_tolerance,
)

from oracles import collocation_profile, helmholtz_ball_profile

LAM1 = math.pi**2


class TestShoot:
    def test_trivial_amplitude(self, ball_cubic):
        res = shoot(0.0, 7.0, ball_cubic)
        assert res.terminal == 0.0
        assert res.zero_count == 0
        assert res.signature_so_far is None

    def test_no_forcing(self, ball_cubic):
        res = shoot(0.3, 0.0, ball_cubic)
        assert res.terminal == pytest.approx(0.3, abs=1e-14)

    def test_small_amplitude_linear_limit(self, ball_linear):
        # at lambda = pi^2 the linearization closes the boundary condition;
        # the curvature correction enters only at O(d^3)
        d = 0.01
        res = shoot(d, LAM1, ball_linear)
        assert abs(res.terminal) < 1e-4 * d
        rr, uu, _ = res.trajectory.sample(257)
        exact = helmholtz_ball_profile(d, LAM1, rr)
        assert float(np.max(np.abs(uu - exact))) < 5e-5 * d

    def test_oddness(self, ball_cubic):
        for lam in (7.0, 12.0, 30.0):
            a = shoot(0.37, lam, ball_cubic).terminal
            b = shoot(-0.37, lam, ball_cubic).terminal
            assert a == pytest.approx(-b, abs=1e-10)

    def test_amplitude_domain_guard(self):
        from minkbvp import CustomTable

        nl = CustomTable((0.0, 1.0, 2.0), (0.0, 0.5, 1.0))
        spec = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=nl)
        with pytest.raises(MinkBVPError):
            shoot(2.5, 1.0, spec)

    def test_signature_so_far(self, ball_cubic):
        res = shoot(-0.2, 1.2 * (2 * math.pi) ** 2, ball_cubic)
        sig = res.signature_so_far
        assert sig.nu == -1
        assert sig.k == res.zero_count + 1


class TestAmplitudeGrid:
    def test_default_grid(self, ball_cubic):
        g = amplitude_grid(ball_cubic)
        assert len(g) >= 32
        assert g[0] > 0 and np.all(np.diff(g) > 0)
        assert g[-1] == pytest.approx(0.999 * ball_cubic.span)

    def test_respects_alpha(self):
        from minkbvp import CustomTable

        nl = CustomTable((0.0, 0.55, 1.2), (0.0, 0.4, 0.9))
        spec = ProblemSpec(dimension=3, outer_radius=1.0, nonlinearity=nl)
        g = amplitude_grid(spec)
        assert g[-1] <= 0.999 * spec.alpha


class TestTimeMapScan:
    def test_grid_validation(self, ball_cubic):
        with pytest.raises(ValueError):
            time_map_scan(12.0, ball_cubic, np.linspace(0.01, 0.9, 8), NodalSignature(1, +1))
        with pytest.raises(ValueError):
            time_map_scan(12.0, ball_cubic, np.linspace(-0.1, 0.9, 40), NodalSignature(1, +1))

    def test_below_threshold_empty(self, ball_cubic):
        with pytest.raises(EmptyScan):
            time_map_scan(0.5 * LAM1, ball_cubic, amplitude_grid(ball_cubic), NodalSignature(1, +1))

    def test_above_threshold_bracket(self, ball_cubic):
        brackets = time_map_scan(
            1.5 * LAM1, ball_cubic, amplitude_grid(ball_cubic), NodalSignature(1, +1)
        )
        assert len(brackets) >= 1

    def test_sublinear_many_classes(self, sublinear_annulus):
        grid = amplitude_grid(sublinear_annulus, n_geometric=160, n_uniform=48, d_min=1e-9)
        cache = {}
        for n in range(1, 5):
            for nu in (+1, -1):
                brackets = time_map_scan(
                    1.0, sublinear_annulus, grid, NodalSignature(n, nu), shot_cache=cache
                )
                assert len(brackets) >= 1


class TestSolveBVP:
    def test_positive_solution_against_collocation(self, ball_cubic):
        lam = 1.2 * LAM1
        profile = solve_all(lam, ball_cubic, NodalSignature(1, +1))[0]
        assert abs(profile.terminal) < zero_tolerance(profile.d)
        assert profile.sup_du < 1.0 and profile.sup_u < ball_cubic.span
        orc = collocation_profile(ball_cubic, lam, profile.d)
        assert orc is not None
        _, u_orc, _ = orc
        assert abs(profile.sup_u - float(np.max(np.abs(u_orc)))) < 1e-4

    def test_mirror_symmetry(self, ball_cubic):
        lam = 1.2 * LAM1
        p = solve_all(lam, ball_cubic, NodalSignature(1, +1))[0]
        m = solve_all(lam, ball_cubic, NodalSignature(1, -1))[0]
        mirrored = np.interp(p.r, m.r, -m.u)
        assert float(np.max(np.abs(p.u - mirrored))) < 1e-8

    def test_bracket_lost_on_wrong_counts(self, ball_cubic):
        lam = 1.2 * LAM1
        [bracket] = time_map_scan(
            lam, ball_cubic, amplitude_grid(ball_cubic), NodalSignature(1, +1)
        )
        with pytest.raises((BracketLost, MinkBVPError)):
            solve_bvp(lam, ball_cubic, NodalSignature(2, +1), bracket)

    def test_requires_straddling_bracket(self, ball_cubic):
        with pytest.raises(MinkBVPError):
            solve_bvp(1.5 * LAM1, ball_cubic, NodalSignature(1, +1), (1e-4, 2e-4))

    def test_quasilinear_reintegration(self, ball_cubic, annulus_cubic):
        for spec, lam in ((ball_cubic, 1.2 * LAM1), (annulus_cubic, 25.0)):
            p = solve_all(lam, spec, NodalSignature(1, +1))[0]
            assert reintegrate_quasilinear(p, spec, lam) < 1e-6

    def test_dedup_by_proximity(self, ball_cubic):
        lam = 1.5 * LAM1
        sols = solve_all(lam, ball_cubic, NodalSignature(1, +1))
        ds = [p.d for p in sols]
        assert all(abs(b - a) > 1e-8 for a, b in zip(ds, ds[1:]))

    def test_planar_domain(self):
        # N = 2 ball: first eigenvalue is the squared first J0 zero
        from minkbvp import LinearPlusCubic

        spec = ProblemSpec(
            dimension=2, outer_radius=1.0, nonlinearity=LinearPlusCubic(1.0, 1.0)
        )
        p = solve_all(1.4 * 5.7831860, spec, NodalSignature(1, +1))[0]
        assert p.signature == NodalSignature(1, +1)
        assert p.sup_du < 1.0 and p.sup_u < spec.span
        assert first_arch_check(p)


class TestFirstArch:
    def test_positive_solution(self, ball_cubic):
        p = solve_all(1.2 * LAM1, ball_cubic, NodalSignature(1, +1))[0]
        assert first_arch_check(p)

    def test_mirrored_via_negation(self, ball_cubic):
        m = solve_all(1.2 * LAM1, ball_cubic, NodalSignature(1, -1))[0]
        assert first_arch_check(m)

    def test_k2_first_arch(self, ball_cubic):
        p = solve_all(1.2 * (2 * math.pi) ** 2, ball_cubic, NodalSignature(2, +1))[0]
        assert first_arch_check(p)
