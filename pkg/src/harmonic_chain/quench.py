"""Sudden switch-on of a linear source on the chain, string and field.

For t > 0 each normal mode feels a constant force E'_j = (O E)_j. The
closed forms below give the displacement of the mode Gaussian and the
number density of produced quanta; t < 0 is the unperturbed vacuum.
"""

from dataclasses import dataclass, field
import csv
import math

import numpy as np

from .continuum import dispersion
from .errors import FreeModeUnsupported, SingularK

SOURCE_KINDS = ("site", "xi", "k")


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class SourceProfile:
    """Source samples in one representation.

    kind 'site': E_i per chain site (labels are site indices);
    kind 'xi':   E(xi) sampled at positions in [0, L];
    kind 'k':    I(k), the Fourier transform of the current J = (2/mu) E.
    """

    kind: str
    labels: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ValueError(f"kind must be one of {SOURCE_KINDS}, got {self.kind!r}")
        labels = np.asarray(self.labels, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if labels.shape != values.shape or labels.ndim != 1:
            raise ValueError("labels and values must be 1-d arrays of equal length")
        if not np.all(np.isfinite(values)):
            raise ValueError("source values must be finite")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", values)

    @classmethod
    def sites(cls, values):
        values = np.asarray(values, dtype=float)
        return cls("site", np.arange(values.size), values)

    @classmethod
    def from_csv(cls, path):
        """Read a ``label,value`` CSV whose '#' comment names the kind.

        Example header::

            # kind: xi
            label,value
        """
        kind = "site"
        rows = []
        with open(path, newline="") as fh:
            lines = []
            for line in fh:
                stripped = line.strip()
                if stripped.startswith("#"):
                    body = stripped.lstrip("#").strip()
                    if body.lower().startswith("kind"):
                        kind = body.split(":", 1)[-1].split("=", 1)[-1].strip()
                    continue
                if stripped:
                    lines.append(stripped)
        for rec in csv.DictReader(lines):
            rows.append((float(rec["label"]), float(rec["value"])))
        if not rows:
            raise ValueError(f"{path}: no source rows")
        rows.sort()
        labels, values = zip(*rows)
        return cls(kind, np.array(labels), np.array(values), {"path": str(path)})


def project_source(source, spectrum, cmap=None):
    """Mode components of the source.

    Sites: E' = O E. Positions: F_j = int O_j(xi) E(xi) dxi on the lattice,
    with E linearly interpolated to the sites. Wavenumber samples are
    already spectral and are returned unchanged.
    """
    if source.kind == "site":
        if source.values.size != spectrum.size:
            raise ValueError(f"source has {source.values.size} sites, chain has {spectrum.size}")
        return spectrum.mode_matrix @ source.values
    if source.kind == "xi":
        if cmap is None:
            raise ValueError("a ContinuumMap is required to project a position profile")
        if cmap.n_atoms != spectrum.size:
            raise ValueError("continuum map and spectrum describe different chains")
        samples = np.interp(cmap.sites, source.labels, source.values)
        return math.sqrt(cmap.a) * (spectrum.mode_matrix @ samples)
    return source.values.copy()


def _after_switch_on(t, values):
    t = np.asarray(t, dtype=float)
    return _out(np.where(t > 0, values, 0.0))


def displacement_discrete(mode, eps_mode, t):
    """a_j(t) = E'_j sin^2(w t / 2) / (m w^2)."""
    if mode.is_free:
        raise FreeModeUnsupported("the zero mode is uniformly accelerated by a constant force")
    w = mode.eff_frequency
    t = np.asarray(t, dtype=float)
    return _after_switch_on(t, eps_mode * np.sin(w * t / 2.0) ** 2 / (mode.mass * w ** 2))


def displaced_density(mode, y, t, eps_mode):
    """Normalised mode density (m w / pi hbar)^{1/2} exp(-(m w / hbar)(y + a_j(t))^2)."""
    if mode.is_free:
        raise FreeModeUnsupported("the zero mode has no vacuum Gaussian")
    w, m, hbar = mode.eff_frequency, mode.mass, mode.hbar
    shift = displacement_discrete(mode, eps_mode, t)
    y = np.asarray(y, dtype=float)
    return _out(math.sqrt(m * w / (math.pi * hbar)) * np.exp(-m * w / hbar * (y + shift) ** 2))


def displaced_amplitude(mode, y, t, eps_mode, include_field_phase=True):
    """Amplitude whose modulus squared is ``displaced_density``.

    The constant Lagrangian term E'^2 / (2 m w^2) only contributes the
    global phase exp(i E'^2 t / (2 m w^2 hbar)).
    """
    amp = np.sqrt(displaced_density(mode, y, t, eps_mode)).astype(complex)
    if include_field_phase and t > 0:
        energy = eps_mode ** 2 / (2.0 * mode.mass * mode.eff_frequency ** 2)
        amp = amp * np.exp(1j * energy * t / mode.hbar)
    return amp


def raw_density_prefactor(mode):
    """The prefactor (pi hbar / m w)^{1/2} of the closed form; the reciprocal of the normalisation."""
    return math.sqrt(math.pi * mode.hbar / (mode.mass * mode.eff_frequency))


def displacement_string(j, F_j, t, L, Omega, mu):
    """alpha_j(t) = F_j sin^2(Omega t j pi / 2L) / (mu Omega^2 (j pi / L)^2)."""
    if j < 1:
        raise ValueError("j must be >= 1")
    kj = j * math.pi / L
    t = np.asarray(t, dtype=float)
    return _after_switch_on(t, F_j * np.sin(Omega * t * kj / 2.0) ** 2 / (mu * Omega ** 2 * kj ** 2))


def displacement_kg(k, I_k, t, params, massless=False):
    """Mean field displacement alpha(k, t) of the Klein-Gordon mode k.

    massless: I(k) sin^2(c k t) / (2 c^2 k)
    massive:  hbar^2 I(k) sin^2(E_k t / 2 hbar) / (2 E_k^2)
    """
    t = np.asarray(t, dtype=float)
    c = params.c
    if massless:
        if k == 0:
            raise SingularK("massless displacement diverges at k = 0")
        return _after_switch_on(t, I_k * np.sin(c * k * t) ** 2 / (2.0 * c ** 2 * k))
    e = dispersion(k, params)
    if e == 0:
        raise SingularK("E_k = 0 (massless field at k = 0)")
    hbar = params.hbar
    return _after_switch_on(t, hbar ** 2 * I_k * np.sin(e * t / (2.0 * hbar)) ** 2 / (2.0 * e ** 2))


def quench_number_density(k, I_k, t, params):
    """nu_k(t) = hbar^3 |I(k)|^2 sin^4(E_k t / 2 hbar) / (4 E_k^2)."""
    e = dispersion(k, params)
    if e == 0:
        raise SingularK("E_k = 0 (massless field at k = 0)")
    hbar = params.hbar
    t = np.asarray(t, dtype=float)
    return _after_switch_on(
        t, hbar ** 3 * abs(I_k) ** 2 * np.sin(e * t / (2.0 * hbar)) ** 4 / (4.0 * e ** 2))
