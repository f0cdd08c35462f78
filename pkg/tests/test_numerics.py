import math

import numpy as np
import pytest
from scipy.integrate import quad

from singosc.numerics import (
    GridWave,
    QuadratureError,
    QuadratureScheme,
    RadialGrid,
    bessel_i,
    bessel_i_entire,
    bessel_k,
    gamma_ln,
    grid_derivative,
    integrate_semiaxis,
    laguerre,
)


class TestGammaLn:
    def test_gamma_one(self):
        assert gamma_ln(1.0) == pytest.approx(0.0, abs=1e-15)

    def test_half_integer(self):
        # Gamma(5/2) = (3/2)(1/2) sqrt(pi)
        assert gamma_ln(2.5) == pytest.approx(math.log(0.75 * math.sqrt(math.pi)), rel=1e-12)

    def test_factorial(self):
        assert gamma_ln(5.0) == pytest.approx(math.log(24.0), rel=1e-12)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            gamma_ln(0.0)
        with pytest.raises(ValueError):
            gamma_ln(-2.5)


class TestBesselI:
    def test_zero_argument(self):
        assert bessel_i(1.5, 0.0) == 0.0
        assert bessel_i(0.0, 0.0) == 1.0

    def test_half_integer_identity(self):
        # I_{3/2}(z) = sqrt(2/(pi z)) (cosh z - sinh z / z)
        z = 2.0
        expected = math.sqrt(2.0 / (math.pi * z)) * (math.cosh(z) - math.sinh(z) / z)
        assert bessel_i(1.5, z) == pytest.approx(expected, rel=1e-12)

    def test_series_oracle_small_argument(self):
        # direct power series with explicit terms
        nu, z = 2.5, 3.7
        total, term = 0.0, math.exp(nu * math.log(z / 2) - gamma_ln(nu + 1))
        for m in range(1, 60):
            total += term
            term *= (z * z / 4.0) / (m * (m + nu))
        assert bessel_i(nu, z) == pytest.approx(total, rel=1e-13)

    def test_crossover_continuity(self):
        # series and asymptotic paths agree where they meet
        for nu in (0.0, 1.5, 3.3):
            for arg in (0.0, 0.7, -1.1):
                z = 29.9 * np.exp(1j * arg)
                a = bessel_i(nu, complex(z))
                b = bessel_i(nu, complex(z * (30.2 / 29.9)))
                # smooth growth, no jump: compare against scipy at both
                from scipy.special import iv

                assert abs(a - iv(nu, complex(z))) <= 1e-10 * abs(a)
                assert abs(b - iv(nu, complex(z) * (30.2 / 29.9))) <= 1e-10 * abs(b)

    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.5, 2.5, 4.0])
    def test_against_scipy_sweep(self, nu):
        from scipy.special import iv

        rng = np.random.default_rng(42)
        r = np.concatenate([rng.uniform(0.05, 29, 25), rng.uniform(31, 250, 25)])
        th = rng.uniform(-np.pi, np.pi, r.size)
        z = r * np.exp(1j * th)
        mine = bessel_i(nu, z)
        ref = iv(nu, z)
        assert np.max(np.abs(mine - ref) / np.abs(ref)) < 1e-10

    def test_overflow_error(self):
        with pytest.raises(OverflowError):
            bessel_i(1.5, 800.0)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            bessel_i(-1.0, 2.0)

    def test_real_input_real_output(self):
        out = bessel_i(1.5, np.array([0.5, 2.0, 40.0]))
        assert not np.iscomplexobj(out)


class TestBesselIEntire:
    def test_matches_composition_positive(self):
        w = 7.3
        expected = w ** (-0.75) * bessel_i(1.5, 2.0 * math.sqrt(w))
        assert bessel_i_entire(1.5, w) == pytest.approx(expected, rel=1e-12)

    def test_entire_across_negative_axis(self):
        # single-valued: approaching the negative w axis from either side agrees
        for mag in (40.0, 900.0):
            up = bessel_i_entire(2.5, complex(-mag, 1e-10))
            dn = bessel_i_entire(2.5, complex(-mag, -1e-10))
            assert abs(up - dn) <= 1e-8 * max(abs(up), 1e-30)

    def test_negative_axis_is_oscillatory(self):
        # w < 0 gives the J-type (bounded, real) branch
        val = bessel_i_entire(1.5, -25.0)
        assert abs(val.imag) < 1e-14
        assert abs(val) < 1.0


class TestBesselK:
    def test_half_integer_small(self):
        # K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
        assert bessel_k(0.5, 1.0) == pytest.approx(
            math.sqrt(math.pi / 2.0) * math.exp(-1.0), rel=1e-12
        )

    def test_three_halves(self):
        x = 3.0
        expected = math.sqrt(math.pi / (2 * x)) * math.exp(-x) * (1.0 + 1.0 / x)
        assert bessel_k(1.5, x) == pytest.approx(expected, rel=1e-12)

    def test_integral_representation_oracle(self):
        # K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
        nu, x = 1.5, 0.5
        oracle, _ = quad(lambda t: math.exp(-x * math.cosh(t)) * math.cosh(nu * t),
                         0.0, 60.0, epsabs=1e-13, epsrel=1e-12, limit=300)
        assert bessel_k(nu, x) == pytest.approx(oracle, rel=1e-10)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            bessel_k(1.5, 0.0)
        with pytest.raises(ValueError):
            bessel_k(1.5, -1.0)

    def test_wronskian_identity_property(self):
        # I_nu(x) K_{nu+1}(x) + I_{nu+1}(x) K_nu(x) = 1/x
        for nu in np.linspace(0.0, 4.0, 9):
            for x in np.geomspace(0.1, 20.0, 12):
                lhs = bessel_i(nu, x) * bessel_k(nu + 1, x) + bessel_i(nu + 1, x) * bessel_k(nu, x)
                assert abs(lhs - 1.0 / x) < 1e-9


class TestLaguerre:
    def test_degree_zero(self):
        assert laguerre(0, 1.7, 123.4) == 1.0
        assert laguerre(0, -0.3, 2.0 + 1.0j) == 1.0 + 0.0j

    def test_degree_one(self):
        # L_1^alpha(z) = 1 + alpha - z
        assert laguerre(1, 1.5, 2.0) == pytest.approx(0.5, abs=1e-15)

    def test_monomial_sum_oracle(self):
        # L_n^alpha(z) = sum_k binom(n+alpha, n-k) (-z)^k / k!
        n, alpha, z = 5, 1.5, -3.0
        total = 0.0
        for kk in range(n + 1):
            binom = math.exp(
                gamma_ln(n + alpha + 1) - gamma_ln(kk + alpha + 1) - gamma_ln(n - kk + 1)
            )
            total += binom * (-z) ** kk / math.factorial(kk)
        assert laguerre(n, alpha, z) == pytest.approx(total, rel=1e-13)

    def test_recurrence_self_consistency(self):
        # (n+1) L_{n+1} = (2n+1+alpha-z) L_n - (n+alpha) L_{n-1}
        rng = np.random.default_rng(0)
        z = rng.uniform(-8, 8, 20) + 1j * rng.uniform(-3, 3, 20)
        alpha = 1.5
        for n in range(1, 12):
            lhs = (n + 1) * laguerre(n + 1, alpha, z)
            rhs = (2 * n + 1 + alpha - z) * laguerre(n, alpha, z) - (n + alpha) * laguerre(n - 1, alpha, z)
            assert np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1.0)) < 1e-12

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            laguerre(-1, 0.5, 1.0)


class TestIntegrateSemiaxis:
    def test_exponential(self):
        val, err = integrate_semiaxis(lambda x: math.exp(-x))
        assert val == pytest.approx(1.0, rel=1e-11)
        assert err < 1e-8

    def test_gamma_integral(self):
        val, _ = integrate_semiaxis(lambda x: x**1.5 * math.exp(-x))
        assert val == pytest.approx(math.exp(gamma_ln(2.5)), rel=1e-11)

    def test_weighted_bessel_moment(self):
        # int_0^inf 2 x^(k-1/2) K_{2k-1}(2 sqrt x) dx = Gamma(1) Gamma(2k) at k = 5/4
        k = 1.25
        val, _ = integrate_semiaxis(
            lambda x: 2.0 * x ** (k - 0.5) * bessel_k(2 * k - 1, 2.0 * math.sqrt(x))
            if x > 0 else 0.0
        )
        assert val.real == pytest.approx(math.exp(gamma_ln(2.5)), rel=1e-8)

    @pytest.mark.parametrize("n", range(0, 11))
    def test_factorial_moments(self, n):
        val, _ = integrate_semiaxis(lambda x, n=n: x**n * math.exp(-x))
        assert val.real == pytest.approx(math.factorial(n), rel=1e-9)

    def test_complex_integrand(self):
        val, _ = integrate_semiaxis(lambda x: (1 + 2j) * math.exp(-x))
        assert val == pytest.approx(1 + 2j, rel=1e-10)

    def test_gauss_laguerre_kind(self):
        scheme = QuadratureScheme(kind="gauss-laguerre", abs_tol=1e-10, rel_tol=1e-9)
        val, _ = integrate_semiaxis(lambda x: x**2 * math.exp(-x), scheme)
        assert val.real == pytest.approx(2.0, rel=1e-9)

    def test_nonconvergence_raises_with_partial(self):
        with pytest.raises(QuadratureError) as exc:
            integrate_semiaxis(lambda x: math.sin(50.0 * x) / (1.0 + 1e-6 * x))
        assert exc.value.partial is not None

    def test_bad_scheme_rejected(self):
        with pytest.raises(ValueError):
            QuadratureScheme(abs_tol=-1.0)
        with pytest.raises(ValueError):
            QuadratureScheme(kind="monte-carlo")


class TestRadialGrid:
    def test_minimum_size(self):
        with pytest.raises(ValueError):
            RadialGrid(np.linspace(0.1, 1.0, 10))

    def test_positivity(self):
        with pytest.raises(ValueError):
            RadialGrid(np.linspace(0.0, 1.0, 128))

    def test_monotonicity(self):
        pts = np.linspace(0.1, 1.0, 128)
        pts[50] = pts[49]
        with pytest.raises(ValueError):
            RadialGrid(pts)

    def test_log_default(self):
        g = RadialGrid.make(128, 10.0)
        assert g.spacing_mode == "log"
        assert g.points[0] < 1e-3

    def test_wave_shape_mismatch(self):
        g = RadialGrid.uniform(128, 10.0)
        with pytest.raises(ValueError):
            GridWave(g, np.ones(64))

    def test_wave_rejects_nonfinite(self):
        g = RadialGrid.uniform(128, 10.0)
        vals = np.ones(128, dtype=complex)
        vals[3] = np.nan
        with pytest.raises(ValueError):
            GridWave(g, vals)


class TestGridDerivative:
    def test_second_derivative_of_square(self):
        g = RadialGrid.uniform(1000, 10.0, x_min=1e-2)
        w = GridWave(g, (g.points**2).astype(complex))
        d2 = grid_derivative(w, 2)
        assert np.max(np.abs(d2.values[4:-4] - 2.0)) < 1e-8

    def test_third_derivative_of_sine(self):
        g = RadialGrid.uniform(2000, 10.0, x_min=1e-3)
        w = GridWave(g, np.sin(g.points).astype(complex))
        d3 = grid_derivative(w, 3)
        err = np.abs(d3.values[5:-5] + np.cos(g.points[5:-5]))
        assert np.max(err) < 1e-6

    def test_gaussian_first_derivative(self):
        g = RadialGrid.uniform(1500, 8.0, x_min=1e-3)
        x = g.points
        w = GridWave(g, np.exp(-x * x / 4.0).astype(complex))
        d1 = grid_derivative(w, 1)
        target = -(x / 2.0) * np.exp(-x * x / 4.0)
        assert np.max(np.abs(d1.values[4:-4] - target[4:-4])) < 1e-9

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_convergence_order(self, order):
        # measured slope of log-error vs log-h within 0.3 of nominal (>= 4)
        errs, hs = [], []
        for n in (400, 800, 1600):
            g = RadialGrid.uniform(n, 6.0, x_min=1e-3)
            x = g.points
            w = GridWave(g, np.sin(x).astype(complex))
            d = grid_derivative(w, order)
            ref = {1: np.cos(x), 2: -np.sin(x), 3: -np.cos(x)}[order]
            errs.append(np.max(np.abs(d.values[8:-8] - ref[8:-8])))
            hs.append(x[1] - x[0])
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        nominal = {1: 6.0, 2: 5.0, 3: 4.0}[order]
        assert slope > nominal - 0.3

    def test_log_spaced_grid(self):
        g = RadialGrid.log_spaced(2000, 10.0, x_min=1e-3)
        x = g.points
        w = GridWave(g, (x**3).astype(complex))
        d2 = grid_derivative(w, 2)
        assert np.max(np.abs(d2.values[4:-4] - 6.0 * x[4:-4]) / (6.0 * x[4:-4])) < 1e-9

    def test_small_grid_rejected(self):
        g = RadialGrid.uniform(64, 1.0)
        w = GridWave(g, np.ones(64, dtype=complex))
        with pytest.raises(ValueError):
            grid_derivative(w, 1, stencil=129)
