import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import simpson_ip
from singosc.envelope import PAPER_FREE_PARTICLE, envelope_at
from singosc.numerics import bessel_i, gamma_ln
from singosc.states import (
    BasisIndex,
    CoherentLabel,
    PhysParams,
    VIRTUAL_UPPER,
    basis_state,
    basis_state_with_dx,
    bg_coeff,
    bg_state_closed,
    bg_state_series,
    density_moments,
    perelomov_series,
    perelomov_state,
)


class TestPhysParams:
    def test_g2_gives_quarter_plus_one(self):
        p = PhysParams.from_g(2.0)
        assert p.k == pytest.approx(1.25, abs=0.0)

    def test_consistency_enforced(self):
        with pytest.raises(ValueError):
            PhysParams(g=2.0, k=1.3)

    def test_g_floor(self):
        with pytest.raises(ValueError):
            PhysParams.from_g(-0.3)

    def test_round_trip(self):
        p = PhysParams.from_k(1.25)
        assert p.g == pytest.approx(2.0, abs=1e-14)


class TestCoherentLabel:
    def test_disc_constraint(self):
        with pytest.raises(ValueError):
            CoherentLabel("perelomov", 1.0)
        CoherentLabel("perelomov", 0.5j)
        CoherentLabel("bg", 3.7 + 2j)


class TestBasisStates:
    def test_ground_unit_norm_both_conventions(self, params, profile, fine_grid):
        for conv in ("wronskian-half-i", "paper-free-particle"):
            env = envelope_at(profile, 0.0, conv)
            w = basis_state(BasisIndex(0), params, env, fine_grid)
            norm, _ = quad(
                lambda x: abs(basis_state_with_dx(BasisIndex(0), params, env,
                                                  np.array([x]))[0][0]) ** 2,
                0.0, fine_grid.x_max, limit=200)
            assert norm == pytest.approx(1.0, abs=1e-8)
            assert np.all(np.isfinite(w.values))

    def test_orthogonality_first_two(self, params, env0, fine_grid):
        x = fine_grid.points
        w0 = basis_state(BasisIndex(0), params, env0, fine_grid)
        w1 = basis_state(BasisIndex(1), params, env0, fine_grid)
        assert abs(simpson_ip(x, w0.values, w1.values)) < 1e-8

    def test_virtual_upper_nodeless(self, params, env1, op_grid):
        for n in range(4):
            idx = BasisIndex(n, branch=VIRTUAL_UPPER)
            w = basis_state(idx, params, env1, op_grid, normalized=False)
            assert np.min(np.abs(w.values)) > 0.0

    def test_virtual_normalization_rejected(self, params, env0, op_grid):
        with pytest.raises(ValueError):
            basis_state(BasisIndex(0, branch=VIRTUAL_UPPER), params, env0, op_grid,
                        normalized=True)

    def test_bound_alpha_forced(self, params):
        with pytest.raises(ValueError):
            BasisIndex(0, alpha=1.0 - 2 * params.k).resolved_alpha(params)

    def test_virtual_both_alpha_signs(self, params, env0, op_grid):
        up = BasisIndex(1, branch=VIRTUAL_UPPER, alpha=2 * params.k - 1)
        dn = BasisIndex(1, branch=VIRTUAL_UPPER, alpha=1.0 - 2 * params.k)
        wu = basis_state(up, params, env0, op_grid, normalized=False)
        wd = basis_state(dn, params, env0, op_grid, normalized=False)
        assert not np.allclose(wu.values, wd.values)

    def test_closed_form_derivative(self, params, env1):
        x = np.linspace(0.3, 8.0, 41)
        psi, dpsi = basis_state_with_dx(BasisIndex(2), params, env1, x)
        h = 1e-6
        psi_p, _ = basis_state_with_dx(BasisIndex(2), params, env1, x + h)
        psi_m, _ = basis_state_with_dx(BasisIndex(2), params, env1, x - h)
        fd = (psi_p - psi_m) / (2 * h)
        assert np.max(np.abs(fd - dpsi)) < 1e-7


class TestBarutGirardello:
    def test_small_label_is_ground_state(self, params, env0, fine_grid):
        w = bg_state_closed(1e-8, params, env0, fine_grid)
        g = basis_state(BasisIndex(0), params, env0, fine_grid)
        mask = np.abs(g.values) > 1e-3 * np.abs(g.values).max()
        assert np.max(np.abs(w.values[mask] / g.values[mask] - 1.0)) < 1e-6

    def test_zero_label_exact(self, params, env0, fine_grid):
        w = bg_state_closed(0.0, params, env0, fine_grid)
        g = basis_state(BasisIndex(0), params, env0, fine_grid)
        assert np.array_equal(w.values, g.values)

    def test_unit_norm_real_label(self, params, env0, fine_grid):
        w = bg_state_closed(1.021, params, env0, fine_grid)
        norm = simpson_ip(fine_grid.points, w.values, w.values).real
        assert norm == pytest.approx(1.0, abs=1e-7)

    @pytest.mark.parametrize("t", [0.0, 1.0])
    def test_closed_matches_series(self, params, profile, fine_grid, t):
        env = envelope_at(profile, t)
        closed = bg_state_closed(1.021, params, env, fine_grid)
        series, tail = bg_state_series(1.021, 60, params, env, fine_grid)
        assert tail < 1e-12
        assert np.max(np.abs(closed.values - series.values)) < 1e-8

    def test_first_coefficient(self, params):
        # a_1 = -1/sqrt(2k)
        assert bg_coeff(1, params.k) == pytest.approx(-1.0 / math.sqrt(2 * params.k),
                                                      rel=1e-13)

    def test_coefficient_lowering_recurrence(self, params):
        # a_n sqrt(n(n+2k-1)) = -a_{n-1}: the lowering eigenrelation ratio
        k = params.k
        for n in range(1, 40):
            lhs = bg_coeff(n, k) * math.sqrt(n * (n + 2 * k - 1))
            assert lhs == pytest.approx(-bg_coeff(n - 1, k), rel=1e-12)

    def test_truncation_error_enforced(self, params, env0, fine_grid):
        with pytest.raises(ValueError, match="tail"):
            bg_state_series(5.0, 8, params, env0, fine_grid)

    def test_overlap_formula(self, params, env0, fine_grid):
        # <psi_lam' | psi_lam> = I_{2k-1}(2 sqrt(lam lam')) / sqrt(I I')
        k = params.k
        la, lb = 1.021, 0.5
        wa = bg_state_closed(la, params, env0, fine_grid)
        wb = bg_state_closed(lb, params, env0, fine_grid)
        got = simpson_ip(fine_grid.points, wb.values, wa.values)
        target = bessel_i(2 * k - 1, 2 * math.sqrt(la * lb)) / math.sqrt(
            bessel_i(2 * k - 1, 2 * la) * bessel_i(2 * k - 1, 2 * lb))
        assert abs(got - target) < 1e-6

    def test_complex_label_norm(self, params, env1, fine_grid):
        w = bg_state_closed(0.7 + 0.9j, params, env1, fine_grid)
        norm = simpson_ip(fine_grid.points, w.values, w.values).real
        assert norm == pytest.approx(1.0, abs=1e-7)


class TestPerelomov:
    def test_zero_label_is_ground(self, params, env0, fine_grid):
        w = perelomov_state(0.0, params, env0, fine_grid)
        g = basis_state(BasisIndex(0), params, env0, fine_grid)
        assert np.max(np.abs(w.values - g.values)) < 1e-14

    def test_default_label_unit_norm(self, params, env0, fine_grid):
        z = (2 * params.k + 1) ** -0.5
        w = perelomov_state(z, params, env0, fine_grid)
        assert simpson_ip(fine_grid.points, w.values, w.values).real == pytest.approx(
            1.0, abs=1e-7)

    @pytest.mark.parametrize("z", [0.2, -0.45, 0.3 + 0.4j, -0.2 + 0.55j, 0.534522])
    def test_closed_matches_series(self, params, profile, fine_grid, z):
        for t in (0.0, 2.0):
            env = envelope_at(profile, t)
            closed = perelomov_state(z, params, env, fine_grid)
            series, tail = perelomov_series(z, 140, params, env, fine_grid)
            assert tail < 1e-12
            assert np.max(np.abs(closed.values - series.values)) < 1e-8

    def test_disc_boundary_rejected(self, params, env0, fine_grid):
        with pytest.raises(ValueError):
            perelomov_state(1.0, params, env0, fine_grid)


class TestDynamics:
    def test_schrodinger_residual_states(self, params, op_grid):
        from singosc.verify import schrodinger_residual

        lam, z = 1.021, (2 * params.k + 1) ** -0.5
        for n in range(6):
            res = schrodinger_residual(
                lambda e, n=n: basis_state_with_dx(BasisIndex(n), params, e,
                                                   op_grid.points)[0],
                params, t=1.0, grid=op_grid)
            assert res < 1e-5
        from singosc.states import bg_state_with_dx, perelomov_state_with_dx

        assert schrodinger_residual(
            lambda e: bg_state_with_dx(lam, params, e, op_grid.points)[0],
            params, t=1.0, grid=op_grid) < 1e-5
        assert schrodinger_residual(
            lambda e: perelomov_state_with_dx(z, params, e, op_grid.points)[0],
            params, t=1.0, grid=op_grid) < 1e-5


class TestDensityMoments:
    def test_ground_state_norm(self, params, env0, fine_grid):
        w = basis_state(BasisIndex(0), params, env0, fine_grid)
        norm, mean, sigma = density_moments(w)
        assert norm == pytest.approx(1.0, abs=1e-8)
        assert mean > 0 and sigma > 0

    def test_scaling(self, params, env0, fine_grid):
        w = basis_state(BasisIndex(1), params, env0, fine_grid)
        n1, m1, s1 = density_moments(w)
        n2, m2, s2 = density_moments(w.scaled(2.0))
        assert n2 == pytest.approx(4.0 * n1, rel=1e-12)
        assert m2 == pytest.approx(m1, rel=1e-12)
        assert s2 == pytest.approx(s1, rel=1e-12)

    def test_stability_comparison(self, params, profile):
        # the group-translated family keeps its width better than the
        # lowering-eigenstate family under free evolution
        from singosc.numerics import RadialGrid

        grid = RadialGrid.uniform(4000, 60.0)
        sig = {}
        for t in (0.0, 2.0):
            env = envelope_at(profile, t, PAPER_FREE_PARTICLE)
            sig[("bg", t)] = density_moments(
                bg_state_closed(1.021, params, env, grid))[2]
            sig[("z", t)] = density_moments(
                perelomov_state((2 * params.k + 1) ** -0.5, params, env, grid))[2]
        assert sig[("bg", 0.0)] < sig[("z", 0.0)]
        assert sig[("bg", 2.0)] / sig[("bg", 0.0)] > sig[("z", 2.0)] / sig[("z", 0.0)]
