"""Exact solutions of the time-dependent singular oscillator.

Bound and non-normalizable basis solutions, the Barut-Girardello family
(lowering-operator eigenstates) in closed and truncated-series form, and the
Perelomov family (group-translated ground state).  All closed forms are
assembled from the scale variable y = x / (2 sqrt(gamma)), the continuous
envelope phase, and the entire Bessel-type kernel, so they remain valid and
unit-normalized for every envelope convention.

Normalization note: the bound-state constant used here is
2**(-k) * sqrt(n! / Gamma(n+2k)); it is the unique prefactor under which the
basis is orthonormal and consistent with both coherent-state expansions
(checked to machine precision by the test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .envelope import Envelope
from .numerics import (
    GridWave,
    RadialGrid,
    bessel_i,
    bessel_i_entire,
    gamma_ln,
    laguerre,
)

__all__ = [
    "PhysParams",
    "BasisIndex",
    "CoherentLabel",
    "bg_coeff",
    "bg_norm_const",
    "perelomov_coeff",
    "basis_state",
    "bg_state_closed",
    "bg_state_series",
    "bg_series_cutoff",
    "perelomov_state",
    "perelomov_series",
    "density_moments",
]

BOUND = "bound"
VIRTUAL_UPPER = "virtual-upper"

# exp(y^2/4) in the non-normalizable branch overflows beyond this
_VIRTUAL_EXP_CAP = 690.0


@dataclass(frozen=True)
class PhysParams:
    """Coupling g of g/x^2, representation parameter k, Darboux index m.

    g and k are tied by g = 3/4 + 4k(k-1), equivalently
    k = 1/2 + sqrt(1+4g)/4; both are stored and the consistency is enforced.
    """

    g: float
    k: float
    m_darboux: int = 0

    def __post_init__(self):
        if self.g <= -0.25:
            raise ValueError("need g > -1/4 for a real representation parameter")
        if abs(self.g - (0.75 + 4.0 * self.k * (self.k - 1.0))) > 1e-12:
            raise ValueError("inconsistent (g, k) pair")
        if self.m_darboux < 0:
            raise ValueError("m_darboux must be >= 0")

    @classmethod
    def from_g(cls, g: float, m_darboux: int = 0) -> "PhysParams":
        k = 0.5 + 0.25 * math.sqrt(1.0 + 4.0 * g)
        return cls(g=float(g), k=k, m_darboux=m_darboux)

    @classmethod
    def from_k(cls, k: float, m_darboux: int = 0) -> "PhysParams":
        g = 0.75 + 4.0 * k * (k - 1.0)
        return cls(g=g, k=float(k), m_darboux=m_darboux)

    @property
    def alpha(self) -> float:
        return 2.0 * self.k - 1.0


@dataclass(frozen=True)
class BasisIndex:
    """Index of a separated solution: quantum number, branch, Laguerre alpha.

    The bound branch forces alpha = 2k-1 (square-integrable spectrum); the
    virtual-upper branch admits alpha = 2k-1 or 1-2k and is not
    normalizable.
    """

    n: int
    branch: str = BOUND
    alpha: float | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("basis index n must be >= 0")
        if self.branch not in (BOUND, VIRTUAL_UPPER):
            raise ValueError(f"unknown branch {self.branch!r}")

    def resolved_alpha(self, params: PhysParams) -> float:
        if self.alpha is None:
            return params.alpha
        if self.branch == BOUND and abs(self.alpha - params.alpha) > 1e-12:
            raise ValueError("bound branch requires alpha = 2k - 1")
        if self.branch == VIRTUAL_UPPER:
            if not (
                abs(self.alpha - params.alpha) < 1e-12
                or abs(self.alpha + params.alpha) < 1e-12
            ):
                raise ValueError("virtual branch allows alpha = +-(2k - 1) only")
        return self.alpha

    def separation_constant(self, params: PhysParams) -> float:
        k = params.k
        if self.branch == BOUND:
            return self.n + k
        if abs(self.resolved_alpha(params) - params.alpha) < 1e-12:
            return -(k + self.n)
        return k - self.n - 1.0


@dataclass(frozen=True)
class CoherentLabel:
    """Coherent-state label: BG lambda in C, or Perelomov z in the unit disc."""

    family: str  # "bg" | "perelomov"
    value: complex

    def __post_init__(self):
        if self.family not in ("bg", "perelomov"):
            raise ValueError(f"unknown coherent family {self.family!r}")
        if self.family == "perelomov" and abs(self.value) >= 1.0:
            raise ValueError("Perelomov label requires |z| < 1")


# ---------------------------------------------------------------------------
# series coefficients and normalization constants
# ---------------------------------------------------------------------------


def bg_coeff(n: int, k: float) -> float:
    """a_n = (-1)^n sqrt(Gamma(2k) / (n! Gamma(n+2k))) of the BG expansion."""
    sign = -1.0 if n % 2 else 1.0
    return sign * math.exp(0.5 * (gamma_ln(2 * k) - gamma_ln(n + 1) - gamma_ln(n + 2 * k)))


def perelomov_coeff(n: int, k: float) -> float:
    """sqrt(Gamma(n+2k) / (n! Gamma(2k))) of the Perelomov expansion."""
    return math.exp(0.5 * (gamma_ln(n + 2 * k) - gamma_ln(n + 1) - gamma_ln(2 * k)))


def bg_norm_const(lam: complex, k: float) -> float:
    """N_{0 lambda} = |lambda|^(k-1/2) I_{2k-1}(2|lambda|)^(-1/2) Gamma(2k)^(-1/2)."""
    r = abs(lam)
    if r == 0.0:
        return 1.0
    return (
        r ** (k - 0.5)
        * float(bessel_i(2 * k - 1, 2.0 * r)) ** -0.5
        * math.exp(-0.5 * gamma_ln(2 * k))
    )


def _log_bound_norm(n: int, k: float) -> float:
    # 2**(-k) sqrt(n! / Gamma(n+2k))
    return -k * math.log(2.0) + 0.5 * (gamma_ln(n + 1) - gamma_ln(n + 2 * k))


# ---------------------------------------------------------------------------
# basis solutions
# ---------------------------------------------------------------------------


def _basis_fields(idx: BasisIndex, params: PhysParams, env: Envelope, x: np.ndarray,
                  normalized: bool):
    """Closed-form basis solution and its x-derivative on arbitrary points."""
    k = params.k
    alpha = idx.resolved_alpha(params)
    lam_sep = idx.separation_constant(params)
    gam, gamd = env.gamma, env.gamma_dot
    y = x / (2.0 * math.sqrt(gam))
    y2 = y * y

    if idx.branch == BOUND:
        sgn = -1.0
        lag_arg = y2 / 2.0
        dlag_arg_dx = x / (4.0 * gam)
        log_norm = _log_bound_norm(idx.n, k) if normalized else 0.0
    else:
        sgn = +1.0
        lag_arg = -y2 / 2.0
        dlag_arg_dx = -x / (4.0 * gam)
        if np.any(y2 / 4.0 > _VIRTUAL_EXP_CAP):
            raise OverflowError(
                "virtual-branch solution overflows on this grid; reduce x_max"
            )
        log_norm = 0.0

    c_exp = sgn * 0.25 + 0.5j * gamd
    prefactor = (
        math.exp(log_norm)
        * gam**-0.25
        * env.phase_pow(lam_sep)
        * y ** (alpha + 0.5)
        * np.exp(c_exp * y2)
    )
    lag = laguerre(idx.n, alpha, lag_arg)
    dlag = -laguerre(idx.n - 1, alpha + 1.0, lag_arg) if idx.n >= 1 else np.zeros_like(x)
    psi = prefactor * lag
    # d/dx of log(prefactor) is analytic; the Laguerre factor is handled
    # separately so nodes of L do not poison the derivative
    dlog_pref = (alpha + 0.5) / x + c_exp * x / (2.0 * gam)
    dpsi = prefactor * (dlog_pref * lag + dlag * dlag_arg_dx)
    return psi, dpsi


def basis_state(idx: BasisIndex, params: PhysParams, env: Envelope, grid: RadialGrid,
                normalized: bool | None = None) -> GridWave:
    """Sample the separated solution psi_n on a radial grid.

    Bound states are normalized to unity.  Requesting normalization for the
    virtual branch is an error: those solutions are not square integrable.
    """
    if normalized is None:
        normalized = idx.branch == BOUND
    if normalized and idx.branch != BOUND:
        raise ValueError("virtual-branch solutions are not normalizable")
    psi, _ = _basis_fields(idx, params, env, grid.points, normalized)
    return GridWave(grid, psi, env.t)


def basis_state_with_dx(idx: BasisIndex, params: PhysParams, env: Envelope, x,
                        normalized: bool | None = None):
    """Closed-form (psi, dpsi/dx) pair on arbitrary positive points."""
    if normalized is None:
        normalized = idx.branch == BOUND
    if normalized and idx.branch != BOUND:
        raise ValueError("virtual-branch solutions are not normalizable")
    return _basis_fields(idx, params, env, np.asarray(x, dtype=float), normalized)


# ---------------------------------------------------------------------------
# Barut-Girardello family
# ---------------------------------------------------------------------------


def _bg_fields(lam: complex, params: PhysParams, env: Envelope, x: np.ndarray):
    """Closed-form BG state and d/dx, via the entire kernel G_nu(w).

    The resummed form
        psi_lam = N0 * 2**(-k) sqrt(Gamma(2k)) * gamma**(-1/4)
                  * (conj(eps)/eps)**k * y**(2k-1/2)
                  * exp((-1/4 + i gamma'/2) y^2) * exp(-T) * G_{2k-1}(T y^2/2)
    with T = lam * conj(eps)/eps is exactly the sum of the coefficient
    expansion for any envelope, so it stays unit-normalized in every
    convention.  For real lam > 0 it coincides with the Bessel closed form
    expressed through mu = sqrt(lam/2).
    """
    k = params.k
    if lam == 0:
        return _basis_fields(BasisIndex(0), params, env, x, normalized=True)
    gam, gamd = env.gamma, env.gamma_dot
    y = x / (2.0 * math.sqrt(gam))
    y2 = y * y
    T = lam * env.phase_pow(1.0)
    w = T * y2 / 2.0
    nu = 2.0 * k - 1.0
    pref = (
        bg_norm_const(lam, k)
        * math.exp(0.5 * gamma_ln(2 * k) - k * math.log(2.0))
        * gam**-0.25
        * env.phase_pow(k)
        * np.exp(-T)
    )
    body = y ** (2 * k - 0.5) * np.exp((-0.25 + 0.5j * gamd) * y2)
    G = bessel_i_entire(nu, w)
    dG = bessel_i_entire(nu + 1.0, w)  # d/dw of G_nu is G_{nu+1}
    psi = pref * body * G
    dlog_body = (2 * k - 0.5) / x + (-0.25 + 0.5j * gamd) * x / (2.0 * gam)
    dpsi = pref * body * (dlog_body * G + dG * T * x / (4.0 * gam))
    return psi, dpsi


def bg_state_closed(lam: complex, params: PhysParams, env: Envelope,
                    grid: RadialGrid) -> GridWave:
    """Closed-form Barut-Girardello state, unit norm, on a grid."""
    psi, _ = _bg_fields(complex(lam), params, env, grid.points)
    return GridWave(grid, psi, env.t)


def bg_state_with_dx(lam: complex, params: PhysParams, env: Envelope, x):
    return _bg_fields(complex(lam), params, env, np.asarray(x, dtype=float))


def bg_series_cutoff(lam: complex, k: float, tail: float = 1e-12, n_max: int = 200) -> int:
    """Smallest N with |a_n lam^n| < tail for all n >= N."""
    r = abs(lam)
    if r == 0.0:
        return 1
    for n in range(n_max + 1):
        if abs(bg_coeff(n, k)) * r**n < tail:
            return n + 1
    raise ValueError("tail bound not met below n_max; raise n_max")


def bg_state_series(lam: complex, n_trunc: int, params: PhysParams, env: Envelope,
                    grid: RadialGrid, tail: float = 1e-12):
    """Truncated coefficient-expansion BG state.

    Returns (wave, tail_estimate); raises if the requested truncation leaves
    a tail above the bound (the terms decay super-geometrically, so the
    first neglected |a_n lam^n| is an honest estimate).
    """
    lam = complex(lam)
    k = params.k
    total = np.zeros(grid.n, dtype=complex)
    for n in range(n_trunc):
        cn = bg_coeff(n, k) * lam**n
        if cn == 0:
            continue
        psi, _ = _basis_fields(BasisIndex(n), params, env, grid.points, normalized=True)
        total += cn * psi
    tail_est = abs(bg_coeff(n_trunc, k)) * abs(lam) ** n_trunc
    if tail_est >= tail:
        raise ValueError(
            f"series tail {tail_est:.2e} above requested bound {tail:.2e}; increase n_trunc"
        )
    return GridWave(grid, bg_norm_const(lam, k) * total, env.t), tail_est


# ---------------------------------------------------------------------------
# Perelomov family
# ---------------------------------------------------------------------------


def _perelomov_fields(z: complex, params: PhysParams, env: Envelope, x: np.ndarray):
    """Closed-form Perelomov state and d/dx (generating-function resummation)."""
    if abs(z) >= 1.0:
        raise ValueError("Perelomov label requires |z| < 1")
    k = params.k
    gam, gamd = env.gamma, env.gamma_dot
    y = x / (2.0 * math.sqrt(gam))
    y2 = y * y
    zeta = z * env.phase_pow(1.0)
    one_minus = 1.0 - zeta  # Re > 0 since |zeta| < 1: principal powers are safe
    pref = (
        (1.0 - abs(z) ** 2) ** k
        * math.exp(-k * math.log(2.0) - 0.5 * gamma_ln(2 * k))
        * gam**-0.25
        * env.phase_pow(k)
        * one_minus ** (-2.0 * k)
    )
    c_exp = -0.25 + 0.5j * gamd - 0.5 * zeta / one_minus
    psi = pref * y ** (2 * k - 0.5) * np.exp(c_exp * y2)
    dpsi = psi * ((2 * k - 0.5) / x + c_exp * x / (2.0 * gam))
    return psi, dpsi


def perelomov_state(z: complex, params: PhysParams, env: Envelope,
                    grid: RadialGrid) -> GridWave:
    """Closed-form Perelomov state, unit norm, on a grid."""
    psi, _ = _perelomov_fields(complex(z), params, env, grid.points)
    return GridWave(grid, psi, env.t)


def perelomov_state_with_dx(z: complex, params: PhysParams, env: Envelope, x):
    return _perelomov_fields(complex(z), params, env, np.asarray(x, dtype=float))


def perelomov_series(z: complex, n_trunc: int, params: PhysParams, env: Envelope,
                     grid: RadialGrid, tail: float = 1e-12):
    """Truncated coefficient-expansion Perelomov state; returns (wave, tail)."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError("Perelomov label requires |z| < 1")
    k = params.k
    total = np.zeros(grid.n, dtype=complex)
    for n in range(n_trunc):
        cn = perelomov_coeff(n, k) * z**n
        if cn == 0:
            continue
        psi, _ = _basis_fields(BasisIndex(n), params, env, grid.points, normalized=True)
        total += cn * psi
    tail_est = perelomov_coeff(n_trunc, k) * abs(z) ** n_trunc
    if tail_est >= tail:
        raise ValueError(
            f"series tail {tail_est:.2e} above requested bound {tail:.2e}; increase n_trunc"
        )
    return GridWave(grid, (1.0 - abs(z) ** 2) ** k * total, env.t), tail_est


# ---------------------------------------------------------------------------
# density diagnostics
# ---------------------------------------------------------------------------


def density_moments(w: GridWave) -> tuple[float, float, float]:
    """(norm, <x>, sigma_x) of |psi|^2 by quadrature on the wave's grid."""
    from scipy.integrate import simpson

    x = w.grid.points
    rho = np.abs(w.values) ** 2
    if not np.all(np.isfinite(rho)):
        raise ValueError("non-finite density")
    norm = float(simpson(rho, x=x))
    mean = float(simpson(x * rho, x=x)) / norm
    second = float(simpson(x * x * rho, x=x)) / norm
    return norm, mean, math.sqrt(max(second - mean * mean, 0.0))
