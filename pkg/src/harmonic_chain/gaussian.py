"""Minimum-uncertainty product Gaussians under the chain propagator.

The formulas are evaluated exactly as written for the chain, the string
and the Klein-Gordon field. Several of them disagree with the
unitary evolution measured by ``oracle``; the comparisons are made there
and in ``verify``, never patched here.
"""

import math

import numpy as np

from .continuum import KGParams, dispersion
from .errors import FreeModeUnsupported, NegativeRadicand

__all__ = [
    "KGParams", "READINGS", "width_discrete", "width_free", "width_string",
    "width_kg", "kg_width_squared", "density_discrete", "avg_quanta_discrete",
    "avg_quanta_string", "number_density_kg",
]

READINGS = ("consistent", "verbatim")


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _sqrt_checked(radicand, what):
    radicand = np.asarray(radicand, dtype=float)
    if np.any(radicand < 0):
        raise NegativeRadicand(f"{what}: radicand {np.min(radicand):.6g} < 0")
    return np.sqrt(radicand)


def width_discrete(mode, sigma0, t):
    """sigma_j(t) = sigma sqrt(1 + (hbar^2/(2 m^2 sigma^4 w^2) - 1) sin^2(w t)).

    ``w`` is the mode's effective frequency; with a mass term this is the
    massive variant (omega replaced by omega_j).
    """
    if mode.is_free:
        raise FreeModeUnsupported("free mode: use width_free")
    w, m, hbar = mode.eff_frequency, mode.mass, mode.hbar
    bracket = hbar ** 2 / (2.0 * m ** 2 * sigma0 ** 4 * w ** 2) - 1.0
    t = np.asarray(t, dtype=float)
    return _out(sigma0 * _sqrt_checked(1.0 + bracket * np.sin(w * t) ** 2, "width_discrete"))


def width_free(mass, hbar, sigma0, t):
    """w -> 0 limit of ``width_discrete``: sigma sqrt(1 + hbar^2 t^2 / (2 m^2 sigma^4))."""
    t = np.asarray(t, dtype=float)
    return _out(sigma0 * np.sqrt(1.0 + hbar ** 2 * t ** 2 / (2.0 * mass ** 2 * sigma0 ** 4)))


def width_string(j, s, L, Omega, mu, hbar, t):
    if j < 1:
        raise ValueError("j must be >= 1")
    bracket = hbar ** 2 * L ** 2 / (2.0 * Omega ** 2 * mu ** 2 * s ** 4 * j ** 2 * math.pi ** 2) - 1.0
    t = np.asarray(t, dtype=float)
    return _out(s * _sqrt_checked(1.0 + bracket * np.sin(Omega * t * j * math.pi / L) ** 2,
                                  "width_string"))


def width_kg(k, params, t, reading="consistent"):
    """Field-localisation width of the Klein-Gordon mode k.

    ``reading='consistent'`` returns s_k(t) with a sin^2 time dependence like
    the chain and string widths. ``reading='verbatim'`` returns the stated
    right-hand side sbar sqrt(1 + (...) sin(E_k t/hbar)), which is s_k^2 by
    its own left-hand side.
    """
    if reading not in READINGS:
        raise ValueError(f"reading must be one of {READINGS}")
    e = dispersion(k, params)
    bracket = 2.0 * params.hbar ** 2 * params.c ** 2 / (e ** 2 * params.sbar ** 4) - 1.0
    phase = e * np.asarray(t, dtype=float) / params.hbar
    if reading == "consistent":
        return _out(params.sbar * _sqrt_checked(1.0 + bracket * np.sin(phase) ** 2, "width_kg"))
    return _out(params.sbar * _sqrt_checked(1.0 + bracket * np.sin(phase), "width_kg (verbatim)"))


def kg_width_squared(k, params, t, reading="consistent"):
    w = width_kg(k, params, t, reading)
    return w ** 2 if reading == "consistent" else w


def density_discrete(widths, y):
    """Product Gaussian probability density in normal coordinates."""
    widths = np.asarray(widths, dtype=float)
    y = np.asarray(y, dtype=float)
    if widths.shape[-1] != y.shape[-1]:
        raise ValueError("widths and y must have the same length")
    norm = np.prod(1.0 / np.sqrt(2.0 * math.pi * widths ** 2), axis=-1)
    return _out(norm * np.exp(-np.sum(y ** 2 / (2.0 * widths ** 2), axis=-1)))


def avg_quanta_discrete(mode, width):
    """(m w / 2 hbar) sigma^2 + (3 hbar / 4 m w) / sigma^2 - 1/2 with w = omega sqrt(lambda)."""
    if mode.is_free:
        raise FreeModeUnsupported("quanta are undefined for a free mode")
    w, m, hbar = mode.eff_frequency, mode.mass, mode.hbar
    s2 = np.asarray(width, dtype=float) ** 2
    return _out(m * w / (2.0 * hbar) * s2 + 3.0 * hbar / (4.0 * m * w) / s2 - 0.5)


def avg_quanta_string(j, width, L, Omega, mu, hbar):
    if j < 1:
        raise ValueError("j must be >= 1")
    kj = j * math.pi / L
    s2 = np.asarray(width, dtype=float) ** 2
    return _out(mu * Omega / (2.0 * hbar) * s2 * kj + 3.0 * hbar / (4.0 * mu * Omega) / (s2 * kj) - 0.5)


def number_density_kg(k, params, t, reading="consistent"):
    """nu_k(t) = [E_k s_k^2 / hbar + (3 hbar / 8 E_k) / s_k^2 - 1/2] / pi."""
    e = dispersion(k, params)
    s2 = kg_width_squared(k, params, t, reading)
    return _out((e * s2 / params.hbar + 3.0 * params.hbar / (8.0 * e) / s2 - 0.5) / math.pi)
