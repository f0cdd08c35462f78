"""su(1,1) generators on grids and in the holomorphic representation.

The grid realization composes first-order ladder factors built from the
envelope; k0 is applied literally as half the commutator of the lowering and
raising operators, reusing the tested pieces.  The ladder eigenvalue
structure (k0 psi_n = (k+n) psi_n with the advertised coefficients) holds
under the wronskian-half-i envelope convention.

The holomorphic representation acts on Taylor coefficients v_n of analytic
functions sum_n v_n lam^n; on the orthonormal images a_n lam^n of the basis
these actions are exact up to float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .envelope import Envelope
from .numerics import GridWave, bessel_i, gamma_ln, grid_derivative
from .states import PhysParams, bg_coeff

__all__ = [
    "GridOperator",
    "CoeffVector",
    "apply_generator",
    "ladder_coefficient",
    "holo_generator",
    "bg_coeff_vector",
    "mean_k0",
    "mean_k0_sq",
    "lambda_for_mean_excitation",
    "casimir_check",
]


@dataclass(frozen=True)
class GridOperator:
    """A symmetry operator applied on grids in a (params, envelope) context."""

    label: str  # k_minus | k_plus | k_zero | hamiltonian_h0 | custom
    params: PhysParams
    env: Envelope
    omega: float = 0.0  # instantaneous w(t), used by the Hamiltonian
    fn: object = None  # callable GridWave -> GridWave for label "custom"

    def __post_init__(self):
        if self.label not in ("k_minus", "k_plus", "k_zero", "hamiltonian_h0", "custom"):
            raise ValueError(f"unknown operator label {self.label!r}")
        if self.label == "custom" and not callable(self.fn):
            raise ValueError("custom operator needs a callable fn")


def _lower_factor(w: GridWave, env: Envelope, stencil: int) -> GridWave:
    # a = eps d/dx - (i/2) eps' x
    d = grid_derivative(w, 1, stencil)
    vals = env.eps * d.values - 0.5j * env.eps_dot * w.grid.points * w.values
    return GridWave(w.grid, vals, w.t)


def _raise_factor(w: GridWave, env: Envelope, stencil: int) -> GridWave:
    # a+ = -conj(eps) d/dx + (i/2) conj(eps') x
    d = grid_derivative(w, 1, stencil)
    vals = (
        -np.conj(env.eps) * d.values
        + 0.5j * np.conj(env.eps_dot) * w.grid.points * w.values
    )
    return GridWave(w.grid, vals, w.t)


def apply_generator(op: GridOperator, w: GridWave, stencil: int = 9) -> GridWave:
    """Apply a generator to a sampled wave by stencil composition.

    Points within edge_margin(stencil) of each boundary (twice that per
    composed derivative) are contaminated by one-sided stencils; callers
    should mask them.
    """
    env, params = op.env, op.params
    x = w.grid.points
    if op.label == "custom":
        return op.fn(w)
    if op.label == "hamiltonian_h0":
        d2 = grid_derivative(w, 2, stencil)
        vals = -d2.values + (op.omega**2 * x * x + params.g / (x * x)) * w.values
        return GridWave(w.grid, vals, w.t)
    if op.label == "k_minus":
        aa = _lower_factor(_lower_factor(w, env, stencil), env, stencil)
        vals = 2.0 * (aa.values - env.eps**2 * params.g / (x * x) * w.values)
        return GridWave(w.grid, vals, w.t)
    if op.label == "k_plus":
        aa = _raise_factor(_raise_factor(w, env, stencil), env, stencil)
        vals = 2.0 * (aa.values - np.conj(env.eps) ** 2 * params.g / (x * x) * w.values)
        return GridWave(w.grid, vals, w.t)
    # k_zero = (k_minus k_plus - k_plus k_minus) / 2
    km = GridOperator("k_minus", params, env)
    kp = GridOperator("k_plus", params, env)
    lhs = apply_generator(km, apply_generator(kp, w, stencil), stencil)
    rhs = apply_generator(kp, apply_generator(km, w, stencil), stencil)
    return GridWave(w.grid, 0.5 * (lhs.values - rhs.values), w.t)


def ladder_coefficient(n: int, k: float, sign: int) -> float:
    """c_n^(+-) = sqrt(n + 1/2 +- 1/2) sqrt(n + 2k - 1/2 +- 1/2)."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    a = n + 0.5 + 0.5 * sign
    b = n + 2.0 * k - 0.5 + 0.5 * sign
    return math.sqrt(a * b)


# ---------------------------------------------------------------------------
# holomorphic (coefficient) representation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoeffVector:
    """Taylor coefficients v_0..v_N of an analytic function of the BG label."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "coeffs", arr)
        if arr.ndim != 1 or arr.size < 3:
            raise ValueError("coefficient vector needs at least 3 entries (margin >= 2)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite coefficients")

    @property
    def n_max(self) -> int:
        return self.coeffs.size - 1


def holo_generator(label: str, v: CoeffVector, params: PhysParams) -> CoeffVector:
    """k0 = lam d/dlam + k,  k+ = lam,  k- = lam d^2/dlam^2 + 2k d/dlam.

    Acting on coefficients: (k0 v)_n = (n+k) v_n, (k+ v)_n = v_{n-1},
    (k- v)_n = (n+1)(n+2k) v_{n+1}.  The top entries lose meaning under
    shifts, hence the margin requirement on CoeffVector.
    """
    k = params.k
    c = v.coeffs
    n = np.arange(c.size)
    if label == "k_zero":
        return CoeffVector((n + k) * c)
    if label == "k_plus":
        out = np.zeros_like(c)
        out[1:] = c[:-1]
        return CoeffVector(out)
    if label == "k_minus":
        out = np.zeros_like(c)
        out[:-1] = (n[:-1] + 1.0) * (n[:-1] + 2.0 * k) * c[1:]
        return CoeffVector(out)
    raise ValueError(f"unknown holomorphic generator {label!r}")


def bg_coeff_vector(lam: complex, k: float, n_max: int) -> CoeffVector:
    """Holomorphic representative of the BG state: v_n = a_n^2 lam^n."""
    lam = complex(lam)
    n = np.arange(n_max + 1)
    log_an2 = gamma_ln(2 * k) - gamma_ln(n + 1.0) - gamma_ln(n + 2.0 * k)
    return CoeffVector(np.exp(log_an2) * lam**n)


# ---------------------------------------------------------------------------
# mean values and the Casimir identity
# ---------------------------------------------------------------------------


def _bessel_ratio_up(nu: float, x: float) -> float:
    """I_nu(x) / I_{nu-1}(x) for x > 0, overflow-safe at large x."""
    if x < 600.0:
        return float(bessel_i(nu, x)) / float(bessel_i(nu - 1, x))
    # both orders share the exp(x) prefactor; the subdominant exponential is
    # exp(-2x) relative and negligible here
    from .numerics import _asym_sums

    z = np.array([complex(x)])
    num, _ = _asym_sums(nu, z)
    den, _ = _asym_sums(nu - 1.0, z)
    return float((num[0] / den[0]).real)


def mean_k0(lam: complex, k: float) -> float:
    """<k0> in the BG state: k + |lam| I_2k(2|lam|) / I_{2k-1}(2|lam|).

    This is the value the coefficient expansion sums to,
    sum_n (n+k) |N0 a_n lam^n|^2; the self-adjacent Bessel index makes it
    consistent with the normalization I_{2k-1} and with <k0^2> below.
    """
    if k <= 0.5:
        raise ValueError("mean_k0 requires k > 1/2")
    r = abs(lam)
    if r == 0.0:
        return k
    return k + r * _bessel_ratio_up(2.0 * k, 2.0 * r)


def mean_k0_sq(lam: complex, k: float) -> float:
    """<k0^2> in the BG state: k^2 + |lam|^2 + |lam| I_2k(2|lam|)/I_{2k-1}(2|lam|)."""
    if k <= 0.5:
        raise ValueError("mean_k0_sq requires k > 1/2")
    r = abs(lam)
    if r == 0.0:
        return k * k
    return k * k + r * r + r * _bessel_ratio_up(2.0 * k, 2.0 * r)


def lambda_for_mean_excitation(k: float, excitation: float = 1.0) -> float:
    """Real lam > 0 with <k0> = k + excitation."""
    if excitation <= 0.0:
        raise ValueError("excitation must be positive")
    hi = 4.0
    while mean_k0(hi, k) - k < excitation:
        hi *= 2.0
        if hi > 1e6:
            raise ValueError("mean excitation target not bracketed")
    return float(brentq(lambda x: mean_k0(x, k) - k - excitation, 1e-9, hi, xtol=1e-13))


def mean_k0_series(lam: complex, k: float, n_trunc: int = 200) -> float:
    """Independent series route: sum_n (n+k) |N0 a_n lam^n|^2."""
    r = abs(lam)
    n = np.arange(n_trunc)
    logp = np.where(n > 0, 2.0 * n * np.log(r if r > 0 else 1.0), 0.0)
    logp = logp - gamma_ln(n + 1.0) - gamma_ln(n + 2.0 * k)
    p = np.exp(logp - logp.max())
    if r == 0.0:
        p = np.zeros(n_trunc)
        p[0] = 1.0
    return float(((n + k) * p).sum() / p.sum())


def mean_k0_sq_series(lam: complex, k: float, n_trunc: int = 200) -> float:
    r = abs(lam)
    n = np.arange(n_trunc)
    logp = np.where(n > 0, 2.0 * n * np.log(r if r > 0 else 1.0), 0.0)
    logp = logp - gamma_ln(n + 1.0) - gamma_ln(n + 2.0 * k)
    p = np.exp(logp - logp.max())
    if r == 0.0:
        p = np.zeros(n_trunc)
        p[0] = 1.0
    return float((((n + k) ** 2) * p).sum() / p.sum())


def casimir_check(params: PhysParams) -> float:
    """|C(g) - k(1-k)| with C = 3/16 - g/4; zero up to rounding for valid params."""
    c_from_g = 3.0 / 16.0 - params.g / 4.0
    c_from_k = params.k * (1.0 - params.k)
    return abs(c_from_g - c_from_k)


def bg_coefficient_recurrence_residual(k: float, n_max: int = 60) -> float:
    """max_n |a_n sqrt(n(n+2k-1)) + a_{n-1}|: the lowering-eigenrelation ratio."""
    worst = 0.0
    for n in range(1, n_max + 1):
        worst = max(
            worst,
            abs(bg_coeff(n, k) * math.sqrt(n * (n + 2 * k - 1)) + bg_coeff(n - 1, k)),
        )
    return worst
