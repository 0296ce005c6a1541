"""Discrete-to-continuum scaling dictionary and convergence studies.

Lattice spacing a = L/N, linear density mu = m/a and wave speed
Omega = omega a are held fixed as N grows; the chain becomes a string of
length L with Young's modulus mu Omega^2. Sending L to infinity with a
mass term gives the Klein-Gordon field with E_k = sqrt(hbar^2 c^2 k^2 + M^2 c^4).
"""

from dataclasses import dataclass
import math

import numpy as np

from .chain import ChainSpec, asymptotic_eigenvalues, exact_spectrum


@dataclass(frozen=True)
class ContinuumMap:
    n_atoms: int
    a: float
    L: float
    mu: float
    Omega: float

    @property
    def young_modulus(self):
        return self.mu * self.Omega ** 2

    @property
    def sites(self):
        """Site positions (i + 1/2) a, i = 0..N-1, inside [0, L]."""
        return (np.arange(self.n_atoms) + 0.5) * self.a

    def chain_parameters(self):
        """(mass, omega) recovered from (mu, Omega, a)."""
        return self.mu * self.a, self.Omega / self.a

    def metadata(self):
        return {"N": self.n_atoms, "a": self.a, "L": self.L, "mu": self.mu,
                "Omega": self.Omega, "young_modulus": self.young_modulus}


@dataclass(frozen=True)
class KGParams:
    """Klein-Gordon field parameters.

    ``sbar`` is the dimensionless rescaled width sqrt(mu Omega / 2 hbar) s.
    """

    mass_M: float = 1.0
    c: float = 1.0
    hbar: float = 1.0
    mu: float = 1.0
    sbar: float = 1.0

    def __post_init__(self):
        if not self.mass_M >= 0:
            raise ValueError("mass_M must be non-negative")
        for name in ("c", "hbar", "mu", "sbar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @staticmethod
    def rescaled_width(s, mu, Omega, hbar):
        return math.sqrt(mu * Omega / (2.0 * hbar)) * s

    @property
    def rest_energy(self):
        return self.mass_M * self.c ** 2

    @property
    def compton_k(self):
        """Wavenumber M c / hbar; the unit used for the two reference curves."""
        return self.mass_M * self.c / self.hbar


@dataclass(frozen=True)
class KGrid:
    """Half-offset uniform grid on (-k_max, k_max) with midpoint weights."""

    k_max: float
    n_points: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def dk(self):
        return 2.0 * self.k_max / self.n_points


def make_kgrid(k_max, n_points):
    if not k_max > 0:
        raise ValueError("k_max must be positive")
    if n_points < 2 or n_points % 2:
        raise ValueError("n_points must be a positive even integer")
    dk = 2.0 * k_max / n_points
    nodes = -k_max + (np.arange(n_points) + 0.5) * dk
    return KGrid(k_max=float(k_max), n_points=int(n_points), nodes=nodes,
                 weights=np.full(n_points, dk))


def make_continuum_map(spec, L):
    if not L > 0:
        raise ValueError("L must be positive")
    a = L / spec.n_atoms
    return ContinuumMap(n_atoms=spec.n_atoms, a=a, L=float(L), mu=spec.mass / a,
                        Omega=spec.omega * a)


def lambda_continuum(j, L):
    """Continuum mode eigenvalue (j pi / L)^2."""
    if j < 0:
        raise ValueError("j must be non-negative")
    return (j * math.pi / L) ** 2


def lambda_over_a2(n_atoms, L, route="asymptotic"):
    """Discrete eigenvalues divided by a^2 with a = L/N.

    ``route='asymptotic'`` uses the asymptotic 4 sin^2(j pi / (2(N-1))) exactly as
    the scaling argument writes it; ``route='exact'`` uses the diagonalised
    spectrum.
    """
    a = L / n_atoms
    if route == "asymptotic":
        lam = asymptotic_eigenvalues(n_atoms)
    elif route == "exact":
        lam = exact_spectrum(ChainSpec(n_atoms)).eigenvalues
    else:
        raise ValueError(f"unknown route {route!r}")
    return lam / a ** 2


def convergence_study(n_values, j_values, L, route="asymptotic"):
    """Rows (N, j, lambda_over_a2, Lambda_j, abs_error), sorted by (N, j)."""
    rows = []
    for n_atoms in sorted(n_values):
        scaled = lambda_over_a2(n_atoms, L, route)
        for j in sorted(j_values):
            if j >= n_atoms:
                raise ValueError(f"mode j={j} does not exist for N={n_atoms}")
            target = lambda_continuum(j, L)
            rows.append({"N": n_atoms, "j": j, "lambda_over_a2": float(scaled[j]),
                         "Lambda_j": target, "abs_error": abs(float(scaled[j]) - target)})
    return rows


def dispersion(k, params):
    """E_k = sqrt(hbar^2 c^2 k^2 + M^2 c^4)."""
    k = np.asarray(k, dtype=float)
    e = np.sqrt((params.hbar * params.c * k) ** 2 + params.rest_energy ** 2)
    return float(e) if e.ndim == 0 else e


def _site_index(cmap, xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(xi > cmap.L):
        raise ValueError(f"xi outside [0, {cmap.L}]")
    return np.minimum((xi / cmap.a).astype(int), cmap.n_atoms - 1)


def mode_function_limit(spectrum, cmap, j, xi):
    """Rescaled eigenvector O_j(xi) = O_{j,i}/sqrt(a) at the site nearest xi."""
    if not 0 <= j < spectrum.size:
        raise ValueError(f"mode index {j} out of range")
    idx = _site_index(cmap, xi)
    value = spectrum.mode_matrix[j, idx] / math.sqrt(cmap.a)
    return float(value) if np.ndim(value) == 0 else value


def field_transform_pair(samples, direction, spectrum, cmap):
    """Map lattice field samples phi(xi_i) to mode amplitudes eta_j, or back.

    Forward: eta_j = sum_i a O_j(xi_i) phi_i. Inverse: phi_i = sum_j O_j(xi_i) eta_j.
    """
    samples = np.asarray(samples)
    if samples.shape[0] != spectrum.size:
        raise ValueError(f"expected {spectrum.size} samples, got {samples.shape[0]}")
    if direction == "forward":
        return math.sqrt(cmap.a) * (spectrum.mode_matrix @ samples)
    if direction == "inverse":
        return (spectrum.mode_matrix.T @ samples) / math.sqrt(cmap.a)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def line_transform(phi, xi, grid):
    """eta(k) = int dxi e^{-i k xi} phi(xi) / sqrt(2 pi) on the grid nodes.

    ``xi`` is a uniform sample grid covering the support of ``phi``.
    """
    xi = np.asarray(xi, dtype=float)
    dxi = xi[1] - xi[0]
    phase = np.exp(-1j * np.outer(grid.nodes, xi))
    return phase @ np.asarray(phi) * dxi / math.sqrt(2.0 * math.pi)
