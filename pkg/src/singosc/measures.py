"""Resolution-of-identity measures and the moment-problem weight.

Both coherent families resolve the identity against radial measures.  For
the original lowering-eigenstate family the radial weight in x = |lam|^2 is
proportional to f(x) = 2 x^(k-1/2) K_{2k-1}(2 sqrt x), whose power moments
are Gamma(n+1) Gamma(n+2k).  The Darboux-transformed family needs the
moment-problem solution

    Phi(x) = x^(m+2k-1) * integral_x^inf y^(-2k-m) f(y) dy,

with moments Gamma(n+1) Gamma(n+2k) / (n + 2k + m).  The Perelomov family
uses the standard disc measure (2k-1)/pi (1-|z|^2)^(-2) d^2z, accepted here
through the same diagonal resolution test.

All complex-plane integrals are reduced to radial ones analytically
(off-diagonal matrix elements vanish by the angular phase integral and are
never integrated numerically).
"""

from __future__ import annotations

import math
import threading

import numpy as np
from scipy.interpolate import PchipInterpolator

from .numerics import (
    QuadratureScheme,
    bessel_i_entire,
    bessel_k,
    gamma_ln,
    integrate_semiaxis,
)
from .states import PhysParams

__all__ = [
    "f_weight",
    "f_moment",
    "PhiWeight",
    "phi_weight",
    "phi_moment",
    "reproducing_kernel",
    "reproducing_point_check",
    "identity_resolution_check",
    "perelomov_disc_density",
]

_MOMENT_SCHEME = QuadratureScheme(abs_tol=1e-12, rel_tol=1e-9, max_evals=2_000_000)


def f_weight(x, k: float):
    """f(x) = 2 x^(k-1/2) K_{2k-1}(2 sqrt x); x > 0, k > 1/2."""
    if k <= 0.5:
        raise ValueError("f_weight requires k > 1/2")
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise ValueError("f_weight requires x > 0")
    out = 2.0 * arr ** (k - 0.5) * bessel_k(2.0 * k - 1.0, 2.0 * np.sqrt(arr))
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def f_moment(n: int, k: float, scheme: QuadratureScheme = _MOMENT_SCHEME) -> float:
    """integral_0^inf x^n f(x) dx by quadrature (target: Gamma(n+1) Gamma(n+2k))."""
    val, _ = integrate_semiaxis(lambda x: x**n * f_weight(x, k) if x > 0 else 0.0, scheme)
    return float(val.real)


def f_moment_target(n: int, k: float) -> float:
    return math.exp(gamma_ln(n + 1.0) + gamma_ln(n + 2.0 * k))


class PhiWeight:
    """Moment-problem weight Phi for the transformed family, memoized.

    Direct evaluation does one tail quadrature per point; repeated use goes
    through a monotone cubic interpolant of log Phi on a log-spaced cache
    grid, built lazily.  Cache construction is guarded by a lock; reads of
    the built interpolant are safe concurrently.
    """

    def __init__(self, k: float, m: int, cache_points: int = 1600,
                 x_lo: float = 1e-7, x_hi: float = 3.0e4):
        if k <= 0.5:
            raise ValueError("PhiWeight requires k > 1/2 (so x Phi -> 0 at 0)")
        if m < 0:
            raise ValueError("PhiWeight requires m >= 0")
        self.k, self.m = float(k), int(m)
        self._cache_points = cache_points
        self._x_lo, self._x_hi = x_lo, x_hi
        self._interp = None
        self._lock = threading.Lock()

    def direct(self, x: float) -> float:
        """Tail quadrature x^(m+2k-1) * integral_x^inf y^(-2k-m) f(y) dy.

        Substituting y = x (1 + v) cancels the power prefactor exactly and
        leaves the bounded integral
        Phi(x) = integral_0^inf (1+v)^(-2k-m) f(x(1+v)) dv, well conditioned
        both for x -> 0 (where f is flat) and for large x (exponential
        decay in v).
        """
        if x <= 0.0:
            raise ValueError("Phi is defined for x > 0")
        k, m = self.k, self.m
        tail, _ = integrate_semiaxis(
            lambda v: (1.0 + v) ** (-2.0 * k - m) * f_weight(x * (1.0 + v), k),
            _MOMENT_SCHEME,
        )
        return float(tail.real)

    def _build(self):
        xs = np.geomspace(self._x_lo, self._x_hi, self._cache_points)
        vals = np.array([self.direct(x) for x in xs])
        self._interp = PchipInterpolator(np.log(xs), np.log(vals), extrapolate=False)

    def __call__(self, x):
        scalar = np.isscalar(x)
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(arr <= 0.0):
            raise ValueError("Phi is defined for x > 0")
        if self._interp is None:
            with self._lock:
                if self._interp is None:
                    self._build()
        out = np.empty_like(arr)
        inside = (arr >= self._x_lo) & (arr <= self._x_hi)
        if np.any(inside):
            out[inside] = np.exp(self._interp(np.log(arr[inside])))
        for i in np.nonzero(~inside)[0]:
            out[i] = self.direct(float(arr[i]))
        return float(out[0]) if scalar else out


_PHI_CACHE: dict[tuple[float, int], PhiWeight] = {}
_PHI_CACHE_LOCK = threading.Lock()


def _phi(k: float, m: int) -> PhiWeight:
    key = (float(k), int(m))
    with _PHI_CACHE_LOCK:
        if key not in _PHI_CACHE:
            _PHI_CACHE[key] = PhiWeight(k, m)
        return _PHI_CACHE[key]


def phi_weight(x, k: float, m: int):
    """Phi(x) for the transformed-family measure (memoized across calls)."""
    return _phi(k, m)(x)


def phi_moment(n: int, k: float, m: int,
               scheme: QuadratureScheme = _MOMENT_SCHEME) -> float:
    """integral_0^inf x^n Phi(x) dx by quadrature over the cached weight.

    Target value: Gamma(n+1) Gamma(n+2k) / (n + 2k + m).  The substitution
    x = u^2 tames the exp(-2 sqrt x) tail for the adaptive integrator.
    """
    phi = _phi(k, m)
    val, _ = integrate_semiaxis(
        lambda u: 2.0 * u ** (2 * n + 1) * phi(u * u) if u > 0 else 0.0, scheme
    )
    return float(val.real)


def phi_moment_target(n: int, k: float, m: int) -> float:
    return math.exp(gamma_ln(n + 1.0) + gamma_ln(n + 2.0 * k)) / (n + 2.0 * k + m)


# ---------------------------------------------------------------------------
# reproducing kernel
# ---------------------------------------------------------------------------


def reproducing_kernel(lam: complex, lam_prime: complex, k: float) -> complex:
    """delta(lam, lam') = Gamma(2k) sum_n (lam conj(lam'))^n / (n! Gamma(n+2k)).

    Evaluated through the entire kernel function, i.e.
    Gamma(2k) (lam conj(lam'))^((1-2k)/2) I_{2k-1}(2 sqrt(lam conj(lam'))),
    single-valued in the product lam conj(lam').
    """
    w = complex(lam) * np.conj(complex(lam_prime))
    return math.exp(gamma_ln(2.0 * k)) * complex(bessel_i_entire(2.0 * k - 1.0, w))


def reproducing_point_check(lam: float, k: float, power: int = 2) -> complex:
    """integral delta(lam, lam') lam'^power d rho~(lam'), radially reduced.

    Should reproduce lam**power.  The angular integral keeps only the
    n = power term of the kernel series; what is left is the radial
    orthonormality integral of that mode, 4 int r^(2n+2k) K_{2k-1}(2r) dr
    over n! Gamma(n+2k).
    """
    n = power

    def radial(r: float) -> float:
        if r <= 0.0:
            return 0.0
        return r ** (2 * n + 2 * k) * bessel_k(2.0 * k - 1.0, 2.0 * r)

    integral, _ = integrate_semiaxis(radial, _MOMENT_SCHEME)
    return lam**n * 4.0 * float(integral.real) * math.exp(
        -(gamma_ln(n + 1.0) + gamma_ln(n + 2.0 * k))
    )


# ---------------------------------------------------------------------------
# resolution of the identity
# ---------------------------------------------------------------------------


def perelomov_disc_density(r, k: float):
    """Radial density of the standard SU(1,1) disc measure
    (2k-1)/pi (1-|z|^2)^(-2) per unit area; valid for k > 1/2."""
    if k <= 0.5:
        raise ValueError("disc measure requires k > 1/2")
    arr = np.asarray(r, dtype=float)
    out = (2.0 * k - 1.0) / math.pi * (1.0 - arr * arr) ** -2.0
    return float(out) if np.isscalar(r) else out


def identity_resolution_check(family: str, n: int, n_prime: int, params: PhysParams,
                              m: int | None = None) -> complex:
    """<psi_n| [ integral |CS><CS| d mu ] |psi_n'> for one coherent family.

    Off-diagonal elements vanish identically by the angular phase integral
    (int e^{i(n-n') phi} d phi = 0) and are returned as exact zero; the
    radial quadrature is only performed on the diagonal, where the result
    should be 1.
    """
    if family not in ("original_bg", "transformed_bg", "perelomov"):
        raise ValueError(f"unknown family {family!r}")
    if n != n_prime:
        return 0.0 + 0.0j
    k = params.k
    if family == "original_bg":
        val = f_moment(n, k) / f_moment_target(n, k)
        return complex(val)
    if family == "transformed_bg":
        mm = params.m_darboux if m is None else m
        val = phi_moment(n, k, mm) * (n + 2.0 * k + mm) / math.exp(
            gamma_ln(n + 1.0) + gamma_ln(n + 2.0 * k)
        )
        return complex(val)
    # Perelomov: 2 (2k-1) Gamma(n+2k)/(n! Gamma(2k)) int_0^1 r^(2n+1) (1-r^2)^(2k-2) dr
    from scipy.integrate import quad

    coeff = 2.0 * (2.0 * k - 1.0) * math.exp(
        gamma_ln(n + 2.0 * k) - gamma_ln(n + 1.0) - gamma_ln(2.0 * k)
    )
    radial, _ = quad(lambda r: r ** (2 * n + 1) * (1.0 - r * r) ** (2 * k - 2.0),
                     0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=400)
    return complex(coeff * radial)
