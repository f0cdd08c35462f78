"""Classical envelope eps(t) solving eps'' + 4 w(t)^2 eps = 0.

The complex envelope carries all time dependence of the quantum states.  Its
Wronskian W = eps' conj(eps) - eps conj(eps)' is purely imaginary and
conserved; two normalization conventions ship because they are both useful:

* ``wronskian-half-i``:  W = i/2.  This is the normalization under which the
  separated solutions satisfy i d(psi)/dt = h0 psi and the ladder algebra
  closes with the advertised coefficients.  Free particle: eps = (t - i)/2.
* ``paper-free-particle``:  W = -i, free particle eps = (t + i)/sqrt(2).
  States built on it are still orthonormal (densities differ from the other
  convention only by a scale in x), which is all that figure reproduction
  needs.

For constant frequency the phase direction is chosen per convention so the
required Wronskian sign is attainable: e^{+2 i w0 t} for W = i/2 and
e^{-2 i w0 t} for W = -i.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "WRONSKIAN_HALF_I",
    "PAPER_FREE_PARTICLE",
    "FrequencyProfile",
    "Envelope",
    "envelope_at",
    "envelope_path",
    "profile_from_csv",
]

WRONSKIAN_HALF_I = "wronskian-half-i"
PAPER_FREE_PARTICLE = "paper-free-particle"
_CONVENTIONS = (WRONSKIAN_HALF_I, PAPER_FREE_PARTICLE)

# Wronskian drift beyond this fraction of |W| rejects an ODE step.
_W_DRIFT_TOL = 1e-11


@dataclass(frozen=True)
class FrequencyProfile:
    """Real-valued frequency profile w(t): zero, constant, or tabulated."""

    kind: str
    omega0: float = 0.0
    t_table: np.ndarray | None = None
    w_table: np.ndarray | None = None

    @classmethod
    def zero(cls) -> "FrequencyProfile":
        return cls(kind="zero")

    @classmethod
    def constant(cls, omega0: float) -> "FrequencyProfile":
        if omega0 <= 0.0:
            raise ValueError("constant profile requires omega0 > 0 (use zero())")
        return cls(kind="constant", omega0=float(omega0))

    @classmethod
    def tabulated(cls, t, w) -> "FrequencyProfile":
        t = np.asarray(t, dtype=float)
        w = np.asarray(w, dtype=float)
        if t.ndim != 1 or t.shape != w.shape or t.size < 2:
            raise ValueError("tabulated profile needs matching 1-d t and omega arrays")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("tabulated profile times must be strictly increasing")
        if not (t[0] <= 0.0 <= t[-1]):
            raise ValueError("tabulated profile must cover t = 0 (integration anchor)")
        return cls(kind="tabulated", t_table=t, w_table=w)

    def omega(self, t: float) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return self.omega0
        if t < self.t_table[0] or t > self.t_table[-1]:
            raise ValueError(f"t = {t} outside tabulated profile range")
        return float(np.interp(t, self.t_table, self.w_table))


def profile_from_csv(path) -> FrequencyProfile:
    """Load a tabulated profile from two-column CSV (t, omega); header required."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty profile file")
        try:
            float(header[0])
        except (ValueError, IndexError):
            pass  # non-numeric first row: the required header
        else:
            raise ValueError(f"{path}: profile CSV must start with a header line")
        for row in reader:
            if not row or not row[0].strip():
                continue
            rows.append((float(row[0]), float(row[1])))
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least two (t, omega) rows")
    t, w = map(np.array, zip(*rows))
    return FrequencyProfile.tabulated(t, w)


@dataclass(frozen=True)
class Envelope:
    """eps, eps' and the derived gamma = |eps|^2 at one instant.

    eps_arg is the continuously tracked argument of eps, used downstream to
    evaluate (conj(eps)/eps)**p = exp(-2 i p eps_arg) without branch jumps.
    """

    eps: complex
    eps_dot: complex
    t: float
    eps_arg: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError("envelope with gamma <= 0")

    @property
    def gamma(self) -> float:
        return abs(self.eps) ** 2

    @property
    def gamma_dot(self) -> float:
        return 2.0 * (self.eps_dot * np.conj(self.eps)).real

    @property
    def wronskian(self) -> complex:
        return self.eps_dot * np.conj(self.eps) - self.eps * np.conj(self.eps_dot)

    def phase_pow(self, p: float) -> complex:
        """(conj(eps)/eps)**p on the branch continuous in t."""
        return complex(np.exp(-2j * p * self.eps_arg))


def _initial_conditions(convention: str) -> tuple[complex, complex]:
    if convention == WRONSKIAN_HALF_I:
        return -0.5j, 0.5
    return 1j / math.sqrt(2.0), 1.0 / math.sqrt(2.0)


def _closed_form(profile: FrequencyProfile, t: float, convention: str) -> Envelope:
    if profile.kind == "zero":
        if convention == WRONSKIAN_HALF_I:
            eps = (t - 1j) / 2.0
            eps_dot = 0.5 + 0.0j
        else:
            eps = (t + 1j) / math.sqrt(2.0)
            eps_dot = 1.0 / math.sqrt(2.0) + 0.0j
        return Envelope(eps, eps_dot, t, float(np.angle(eps)))
    w0 = profile.omega0
    if convention == WRONSKIAN_HALF_I:
        c = -1j / (2.0 * math.sqrt(2.0 * w0))
        eps = c * np.exp(2j * w0 * t)
        eps_dot = 2j * w0 * eps
        arg = -math.pi / 2.0 + 2.0 * w0 * t
    else:
        c = 1j / (2.0 * math.sqrt(w0))
        eps = c * np.exp(-2j * w0 * t)
        eps_dot = -2j * w0 * eps
        arg = math.pi / 2.0 - 2.0 * w0 * t
    return Envelope(complex(eps), complex(eps_dot), t, arg)


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


def _integrate_envelope(profile: FrequencyProfile, times, convention: str):
    """Adaptive RK45 for (eps, eps', theta) with Wronskian-drift step control.

    theta' = Im(eps'/eps) tracks the unwrapped argument of eps.  A step is
    accepted only if both the embedded error estimate and the Wronskian
    drift are within tolerance: the conserved Wronskian is the natural
    accuracy gauge for this equation.
    """
    eps0, epsd0 = _initial_conditions(convention)
    w_target = epsd0 * np.conj(eps0) - eps0 * np.conj(epsd0)
    theta0 = float(np.angle(eps0))

    def rhs(t, y):
        om = profile.omega(t)
        return np.array([y[1], -4.0 * om * om * y[0], (y[1] / y[0]).imag], dtype=complex)

    def wronskian_of(y):
        return y[1] * np.conj(y[0]) - y[0] * np.conj(y[1])

    out: dict[float, Envelope] = {}
    rtol, atol = 1e-11, 1e-13
    for direction in (+1.0, -1.0):
        targets = sorted(t for t in times if (t > 0 if direction > 0 else t < 0))
        if direction < 0:
            targets = targets[::-1]
        if not targets:
            continue
        t = 0.0
        y = np.array([eps0, epsd0, theta0], dtype=complex)
        h = direction * 1e-3
        for t_goal in targets:
            while (t_goal - t) * direction > 1e-14:
                if (t + h - t_goal) * direction > 0.0:
                    h = t_goal - t
                ks = []
                for i in range(7):
                    yi = y.copy()
                    for j, aij in enumerate(_DP_A[i]):
                        yi = yi + h * aij * ks[j]
                    ks.append(rhs(t + _DP_C[i] * h, yi))
                ks = np.array(ks)
                y5 = y + h * (_DP_B5[:, None] * ks).sum(axis=0)
                y4 = y + h * (_DP_B4[:, None] * ks).sum(axis=0)
                scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
                err = float(np.max(np.abs(y5 - y4) / scale))
                drift = abs(wronskian_of(y5) - w_target) / abs(w_target)
                err = max(err, drift / _W_DRIFT_TOL)
                if err <= 1.0:
                    t, y = t + h, y5
                h *= min(5.0, max(0.2, 0.9 * (1.0 / max(err, 1e-10)) ** 0.2))
            out[t_goal] = Envelope(complex(y[0]), complex(y[1]), t_goal, float(y[2].real))
    if any(abs(t) <= 1e-14 for t in times):
        out[0.0] = Envelope(eps0, epsd0, 0.0, theta0)
    return out


def envelope_at(profile: FrequencyProfile, t: float, convention: str = WRONSKIAN_HALF_I) -> Envelope:
    """Envelope at time t for the given profile and Wronskian convention."""
    if convention not in _CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if profile.kind in ("zero", "constant"):
        return _closed_form(profile, t, convention)
    profile.omega(t)  # range check
    return _integrate_envelope(profile, [t], convention)[t if abs(t) > 1e-14 else 0.0]


def envelope_path(profile: FrequencyProfile, times, convention: str = WRONSKIAN_HALF_I):
    """Envelopes at several times; one ODE sweep for tabulated profiles."""
    if convention not in _CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    times = [float(t) for t in times]
    if profile.kind in ("zero", "constant"):
        return [_closed_form(profile, t, convention) for t in times]
    for t in times:
        profile.omega(t)
    table = _integrate_envelope(profile, times, convention)
    return [table[t if abs(t) > 1e-14 else 0.0] for t in times]
