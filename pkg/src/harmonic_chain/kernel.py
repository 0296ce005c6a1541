"""Propagators of the chain and of its continuum limits.

Each normal mode with frequency w evolves with the Mehler kernel

    K(y, y'; t) = sqrt(m w / (2 pi i hbar sin wt))
                  * exp(i m w / (2 hbar sin wt) * (cos wt (y^2 + y'^2) - 2 y y'))

and the zero mode with the free-particle kernel. The chain kernel is the
product over modes in normal coordinates y = O x. The square root takes
the principal branch; no Maslov phase is added, so values are only
meaningful between caustics (sin wt = 0).
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from .chain import mode_oscillators
from .continuum import dispersion
from .errors import Caustic, SingularK

DEFAULT_CAUSTIC_TOL = 1.0e-9


def _wrap_phase(phase):
    # into (-pi, pi]
    return phase - 2.0 * math.pi * math.ceil((phase - math.pi) / (2.0 * math.pi))


@dataclass(frozen=True)
class ComplexAmplitude:
    modulus: float
    phase: float

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError("modulus must be non-negative")
        object.__setattr__(self, "phase", _wrap_phase(float(self.phase)))

    @property
    def value(self):
        return self.modulus * cmath.exp(1j * self.phase)

    @classmethod
    def from_complex(cls, z):
        return cls(abs(z), cmath.phase(z))

    def __mul__(self, other):
        return ComplexAmplitude(self.modulus * other.modulus, self.phase + other.phase)


@dataclass(frozen=True)
class TruncationPolicy:
    max_modes: int
    caustic_tol: float = DEFAULT_CAUSTIC_TOL

    def __post_init__(self):
        if self.max_modes < 1:
            raise ValueError("max_modes must be >= 1")
        if not self.caustic_tol > 0:
            raise ValueError("caustic_tol must be positive")


def _check_time(t):
    if not t > 0:
        raise ValueError(f"propagation time must be positive, got {t}")


def _mode_prefactor_and_coeffs(mode, t, caustic_tol):
    """Complex prefactor and (diagonal, cross) exponent coefficients.

    The exponent is ``diag * (y^2 + y'^2) + cross * y y'``.
    """
    _check_time(t)
    m, hbar, w = mode.mass, mode.hbar, mode.eff_frequency
    if mode.is_free:
        pref = cmath.sqrt(m / (2j * math.pi * hbar * t))
        c = 1j * m / (2.0 * hbar * t)
        return pref, c, -2.0 * c
    s = math.sin(w * t)
    if abs(s) < caustic_tol:
        raise Caustic(f"caustic: sin({w}*{t}) = {s:.3e}")
    pref = cmath.sqrt(m * w / (2j * math.pi * hbar * s))
    c = 1j * m * w / (2.0 * hbar * s)
    return pref, c * math.cos(w * t), -2.0 * c


def mode_kernel(mode, y, y_prev, t, caustic_tol=DEFAULT_CAUSTIC_TOL):
    """Single-mode kernel K(y, y'; t) as modulus and phase."""
    pref, diag, cross = _mode_prefactor_and_coeffs(mode, t, caustic_tol)
    exponent = diag * (y * y + y_prev * y_prev) + cross * y * y_prev
    return ComplexAmplitude(abs(pref) * math.exp(exponent.real),
                            cmath.phase(pref) + exponent.imag)


def mode_kernel_values(mode, y, y_prev, t, caustic_tol=DEFAULT_CAUSTIC_TOL):
    """Vectorised K(y, y'; t) with numpy broadcasting.

    Arguments may be complex, which the contour-rotated quadrature in
    ``oracle`` relies on.
    """
    pref, diag, cross = _mode_prefactor_and_coeffs(mode, t, caustic_tol)
    y = np.asarray(y)
    y_prev = np.asarray(y_prev)
    return pref * np.exp(diag * (y * y + y_prev * y_prev) + cross * y * y_prev)


def chain_kernel(spec, spectrum, x_final, x_initial, t, caustic_tol=DEFAULT_CAUSTIC_TOL):
    """Exact chain propagator K(x, x'; t) as the product over normal modes."""
    x_final = np.asarray(x_final, dtype=float)
    x_initial = np.asarray(x_initial, dtype=float)
    if x_final.shape != (spec.n_atoms,) or x_initial.shape != (spec.n_atoms,):
        raise ValueError(f"positions must have length {spec.n_atoms}")
    y = spectrum.to_modes(x_final)
    y_prev = spectrum.to_modes(x_initial)
    modulus, phase = 1.0, 0.0
    # fixed left-to-right reduction by mode index
    for n, mode in enumerate(mode_oscillators(spec, spectrum)):
        try:
            factor = mode_kernel(mode, y[n], y_prev[n], t, caustic_tol)
        except Caustic as exc:
            raise Caustic(f"mode {n}: {exc}", mode_index=n) from exc
        modulus *= factor.modulus
        phase = _wrap_phase(phase + factor.phase)
    return ComplexAmplitude(modulus, phase)


@dataclass(frozen=True)
class StringKernelTerms:
    """Truncated string kernel: exponent plus the truncated prefactor product.

    ``log_increments[j]`` is the principal log of the j-th prefactor factor;
    their running sums show whether the infinite product drifts to 0 or
    infinity.
    """

    exponent: complex
    log_prefactor: complex
    log_increments: np.ndarray
    form: str

    @property
    def prefactor(self):
        with np.errstate(over="ignore"):
            return complex(np.exp(self.log_prefactor))


STRING_FORMS = ("dimensional", "rescaled")


def string_kernel_exponent(policy, length_L, Omega, eta, eta_prev, t, mu=1.0, hbar=1.0,
                           form="dimensional"):
    """Mode-sum exponent and truncated prefactor of the string propagator.

    ``form='dimensional'`` uses dimensional fields eta with the coefficient
    (mu Omega / 2 hbar) j pi / L; ``form='rescaled'`` uses the rescaled
    dimensionless fields with j pi^2 / L. Modes j = 0..max_modes are kept;
    missing amplitudes count as zero. The j = 0 term is the free-particle
    limit of the general term.
    """
    if form not in STRING_FORMS:
        raise ValueError(f"form must be one of {STRING_FORMS}")
    _check_time(t)
    j_max = policy.max_modes
    eta = _pad(eta, j_max + 1)
    eta_prev = _pad(eta_prev, j_max + 1)

    j = np.arange(1, j_max + 1)
    k_j = j * math.pi / length_L
    arg = Omega * k_j * t
    s = np.sin(arg)
    bad = np.flatnonzero(np.abs(s) < policy.caustic_tol)
    if bad.size:
        raise Caustic(f"string mode j={j[bad[0]]} is at a caustic", mode_index=int(j[bad[0]]))
    bracket = (eta[1:] ** 2 + eta_prev[1:] ** 2) * np.cos(arg) - 2.0 * eta[1:] * eta_prev[1:]
    d0 = (eta[0] - eta_prev[0]) ** 2
    if form == "dimensional":
        coeff = mu * Omega / (2.0 * hbar)
        exponent = 1j * coeff * (d0 / (Omega * t) + np.sum(k_j / s * bracket))
        factors = mu * Omega * k_j / (2j * math.pi * hbar * s)
        factor0 = mu / (2j * math.pi * hbar * t)
    else:
        exponent = 1j * (math.pi * d0 / (Omega * t) + np.sum(math.pi * k_j / s * bracket))
        factors = k_j / (1j * s)
        factor0 = 1.0 / (1j * Omega * t)
    logs = np.log(np.concatenate([[factor0], factors]).astype(complex))
    return StringKernelTerms(exponent=complex(exponent), log_prefactor=complex(np.sum(logs)),
                             log_increments=logs, form=form)


def _pad(values, size):
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size > size:
        raise ValueError(f"at most {size} mode amplitudes (j = 0..{size - 1}) allowed")
    out = np.zeros(size)
    out[:values.size] = values
    return out


@dataclass(frozen=True)
class KGKernelTerms:
    exponent: complex
    log_prefactor: complex


def kg_kernel_exponent(k_grid, eta, eta_prev, t, params, caustic_tol=DEFAULT_CAUSTIC_TOL):
    """Klein-Gordon functional kernel exponent by quadrature over the k grid.

    Integrand: i E_k / (hbar^2 k sin(E_k t/hbar))
               * (cos(E_k t/hbar) (|eta|^2 + |eta'|^2) - 2 eta eta').
    The prefactor product over nodes is returned as its log only.
    """
    _check_time(t)
    k = np.asarray(k_grid.nodes, dtype=float)
    eta = np.asarray(eta, dtype=complex)
    eta_prev = np.asarray(eta_prev, dtype=complex)
    if eta.shape != k.shape or eta_prev.shape != k.shape:
        raise ValueError("field samples must match the k grid")
    if np.any(k == 0.0):
        raise SingularK("k = 0 node: the 1/k factor diverges")
    e = np.atleast_1d(dispersion(k, params))
    arg = e * t / params.hbar
    s = np.sin(arg)
    bad = np.flatnonzero(np.abs(s) < caustic_tol)
    if bad.size:
        raise Caustic(f"caustic at k = {k[bad[0]]}", mode_index=int(bad[0]))
    bracket = np.cos(arg) * (np.abs(eta) ** 2 + np.abs(eta_prev) ** 2) - 2.0 * eta * eta_prev
    integrand = 1j * e / (params.hbar ** 2 * k * s) * bracket
    exponent = np.sum(k_grid.weights * integrand)
    log_pref = 0.5 * np.sum(np.log((e / (1j * params.hbar * s)).astype(complex)))
    return KGKernelTerms(exponent=complex(exponent), log_prefactor=complex(log_pref))
