import math

import numpy as np
import pytest

from singosc.envelope import (
    PAPER_FREE_PARTICLE,
    WRONSKIAN_HALF_I,
    FrequencyProfile,
    envelope_at,
    envelope_path,
    profile_from_csv,
)


class TestFreeParticleClosedForms:
    def test_paper_convention_at_zero(self):
        env = envelope_at(FrequencyProfile.zero(), 0.0, PAPER_FREE_PARTICLE)
        assert env.eps == pytest.approx(1j / math.sqrt(2.0))
        assert env.gamma == pytest.approx(0.5)
        assert env.wronskian == pytest.approx(-1.0j)

    def test_wronskian_convention_at_zero(self):
        # substituting eps = (t - i)/2 into W = eps' conj(eps) - eps conj(eps)'
        # gives W = i/2 for every t; at t = 0 eps = -i/2
        env = envelope_at(FrequencyProfile.zero(), 0.0, WRONSKIAN_HALF_I)
        assert env.eps == pytest.approx(-0.5j)
        assert env.wronskian == pytest.approx(0.5j)

    @pytest.mark.parametrize("conv", [WRONSKIAN_HALF_I, PAPER_FREE_PARTICLE])
    def test_wronskian_constant_along_trajectory(self, conv):
        prof = FrequencyProfile.zero()
        w0 = envelope_at(prof, 0.0, conv).wronskian
        for t in np.linspace(-3.0, 5.0, 17):
            assert abs(envelope_at(prof, t, conv).wronskian - w0) < 1e-9

    @pytest.mark.parametrize("conv", [WRONSKIAN_HALF_I, PAPER_FREE_PARTICLE])
    def test_gamma_positive(self, conv):
        prof = FrequencyProfile.zero()
        for t in np.linspace(-4.0, 4.0, 9):
            assert envelope_at(prof, t, conv).gamma > 0.0


class TestConstantProfile:
    @pytest.mark.parametrize("conv", [WRONSKIAN_HALF_I, PAPER_FREE_PARTICLE])
    def test_modulus_constant(self, conv):
        prof = FrequencyProfile.constant(0.8)
        mags = [abs(envelope_at(prof, t, conv).eps) for t in (0.0, 0.3, 1.7, 4.0)]
        assert np.ptp(mags) < 1e-14
        assert abs(envelope_at(prof, 1.3, conv).gamma_dot) < 1e-14

    @pytest.mark.parametrize("conv,target", [(WRONSKIAN_HALF_I, 0.5j),
                                             (PAPER_FREE_PARTICLE, -1.0j)])
    def test_wronskian_value(self, conv, target):
        prof = FrequencyProfile.constant(1.2)
        assert envelope_at(prof, 2.5, conv).wronskian == pytest.approx(target)

    def test_oscillator_equation_residual(self):
        # |eps'' + 4 w^2 eps| <= 1e-8 |eps|, eps'' from finite differences
        prof = FrequencyProfile.constant(0.7)
        dt = 1e-5
        for t in (0.0, 0.9, 2.2):
            es = [envelope_at(prof, t + s, WRONSKIAN_HALF_I).eps for s in (-dt, 0.0, dt)]
            edd = (es[0] - 2 * es[1] + es[2]) / dt**2
            resid = abs(edd + 4.0 * prof.omega(t) ** 2 * es[1])
            assert resid <= 1e-8 * abs(es[1]) + 1e-8

    def test_zero_omega_rejected(self):
        with pytest.raises(ValueError):
            FrequencyProfile.constant(0.0)


class TestTabulatedProfile:
    def test_matches_exact_constant_solution(self):
        # constant table integrates to A e^{2iwt} + B e^{-2iwt} with the
        # coefficients fixed by the convention's initial conditions
        w0 = 1.0
        t_tab = np.linspace(-0.5, 3.0, 40)
        prof = FrequencyProfile.tabulated(t_tab, np.full_like(t_tab, w0))
        eps0, epsd0 = -0.5j, 0.5
        a = 0.5 * (eps0 + epsd0 / (2j * w0))
        b = 0.5 * (eps0 - epsd0 / (2j * w0))
        for t in (0.5, 1.5, 2.8):
            env = envelope_at(prof, t, WRONSKIAN_HALF_I)
            exact = a * np.exp(2j * w0 * t) + b * np.exp(-2j * w0 * t)
            assert abs(env.eps - exact) < 1e-9
            assert abs(env.wronskian - 0.5j) < 1e-9

    def test_path_sweep(self):
        t_tab = np.linspace(-1.0, 4.0, 30)
        prof = FrequencyProfile.tabulated(t_tab, 1.0 + 0.2 * np.sin(t_tab))
        times = [-0.5, 0.0, 0.4, 1.0, 2.5]
        envs = envelope_path(prof, times, WRONSKIAN_HALF_I)
        for env in envs:
            assert abs(env.wronskian - 0.5j) < 1e-9
            assert env.gamma > 0.0

    def test_out_of_range_rejected(self):
        prof = FrequencyProfile.tabulated([-1.0, 0.0, 1.0], [1.0, 1.0, 1.0])
        with pytest.raises(ValueError):
            envelope_at(prof, 5.0)

    def test_table_must_cover_zero(self):
        with pytest.raises(ValueError):
            FrequencyProfile.tabulated([1.0, 2.0], [1.0, 1.0])


class TestCsvLoader:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "profile.csv"
        p.write_text("t,omega\n-1.0,0.9\n0.0,1.0\n1.0,1.1\n2.0,1.0\n")
        prof = profile_from_csv(p)
        assert prof.kind == "tabulated"
        assert prof.omega(0.5) == pytest.approx(1.05)

    def test_header_required(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("0.0,1.0\n1.0,1.0\n")
        with pytest.raises(ValueError, match="header"):
            profile_from_csv(p)

    def test_too_short(self, tmp_path):
        p = tmp_path / "short.csv"
        p.write_text("t,omega\n0.0,1.0\n")
        with pytest.raises(ValueError):
            profile_from_csv(p)


def test_unknown_convention_rejected():
    with pytest.raises(ValueError):
        envelope_at(FrequencyProfile.zero(), 0.0, "other")
