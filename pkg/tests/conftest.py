import numpy as np
import pytest

from singosc.envelope import FrequencyProfile, envelope_at
from singosc.numerics import RadialGrid
from singosc.states import PhysParams


@pytest.fixture(scope="session")
def params():
    return PhysParams.from_g(2.0, m_darboux=1)


@pytest.fixture(scope="session")
def profile():
    return FrequencyProfile.zero()


@pytest.fixture(scope="session")
def env0(profile):
    return envelope_at(profile, 0.0)


@pytest.fixture(scope="session")
def env1(profile):
    return envelope_at(profile, 1.0)


@pytest.fixture(scope="session")
def fine_grid():
    return RadialGrid.uniform(8000, 35.0)


@pytest.fixture(scope="session")
def op_grid():
    return RadialGrid.uniform(3000, 25.0)


def simpson_ip(x, a, b):
    from scipy.integrate import simpson

    f = np.conj(a) * b
    return complex(simpson(f.real, x=x) + 1j * simpson(f.imag, x=x))
