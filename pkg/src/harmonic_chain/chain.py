"""Free-ends harmonic chain: coupling matrix, spectrum and normal modes.

The chain of N equal masses joined by equal springs has the coupling
matrix

    V = [[ 1, -1,  0, ...       ],
         [-1,  2, -1, ...       ],
         ...
         [ ...,       -1,  2, -1],
         [ ...,        0, -1,  1]]

whose spectrum is obtained three ways here: a symmetric tridiagonal
eigensolver, the 2x2 characteristic-polynomial recursion (with its
diagonalised closed form), and the large-N asymptotic formula
4 sin^2(n pi / (2 (N - 1))).
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .errors import EvaluationUnstable, SolverFailure

# eigenvalues below this are snapped to the exact zero (translation) mode
ZERO_MODE_TOL = 1.0e-12
# pairwise eigenvector overlap that triggers re-orthogonalisation
ORTHO_TOL = 1.0e-10


@dataclass(frozen=True)
class ChainSpec:
    """Physical parameters of the chain.

    ``mass_term`` is the relativistic mass scale Mc^2/hbar (1/time); zero
    for the massless chain.
    """

    n_atoms: int
    mass: float = 1.0
    omega: float = 1.0
    mass_term: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 2:
            raise ValueError(f"n_atoms must be an integer >= 2, got {self.n_atoms!r}")
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if not self.mass_term >= 0:
            raise ValueError("mass_term must be non-negative")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")


@dataclass(frozen=True)
class CouplingMatrix:
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    @property
    def dimension(self):
        return self.diagonal.size

    def dense(self):
        return (np.diag(self.diagonal)
                + np.diag(self.off_diagonal, 1)
                + np.diag(self.off_diagonal, -1))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and the orthogonal mode matrix.

    Row ``n`` of ``mode_matrix`` is the eigenvector of ``eigenvalues[n]``,
    so normal coordinates are ``y = mode_matrix @ x``.
    """

    eigenvalues: np.ndarray
    mode_matrix: np.ndarray

    @property
    def size(self):
        return self.eigenvalues.size

    def to_modes(self, x):
        return self.mode_matrix @ np.asarray(x, dtype=float)

    def to_sites(self, y):
        return self.mode_matrix.T @ np.asarray(y, dtype=float)


@dataclass(frozen=True)
class ModeOscillator:
    """One normal mode seen as an independent oscillator.

    ``eff_frequency`` is omega_j * sqrt(lambda_j), the angular frequency
    that appears in every per-mode formula.
    """

    lam: float
    eff_frequency: float
    mass: float = 1.0
    hbar: float = 1.0

    @property
    def is_free(self):
        return self.eff_frequency == 0.0

    @classmethod
    def harmonic(cls, eff_frequency, mass=1.0, hbar=1.0, omega=1.0):
        """Mode with a given frequency; lambda is inferred as (w~/omega)^2."""
        return cls(lam=(eff_frequency / omega) ** 2, eff_frequency=float(eff_frequency),
                   mass=mass, hbar=hbar)


def build_coupling_matrix(spec):
    n = spec.n_atoms
    diagonal = np.full(n, 2.0)
    diagonal[0] = diagonal[-1] = 1.0
    return CouplingMatrix(diagonal=diagonal, off_diagonal=np.full(n - 1, -1.0))


def char_polys_recursive(n, lam):
    """phi_n(lam) = det(V_n - lam I) and chi_n(lam) = det(M_n - lam I).

    M_n is V_n with its last diagonal entry set to 2. Plain arithmetic
    only, so ``fractions.Fraction`` arguments give exact results.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    phi = lam * lam - 2 * lam
    chi = lam * lam - 3 * lam + 1
    for _ in range(n - 2):
        phi, chi = phi - lam * chi, phi + (1 - lam) * chi
    return phi, chi


def char_polys_closed(n, lam, epsilon=1.0e-10):
    """Characteristic polynomials from the diagonalised recursion.

    The transfer matrix [[1, -lam], [1, 1 - lam]] has eigenvalues 1 - a and
    1 - lam/a with a = (lam + sqrt(lam (lam - 4))) / 2, and its n - 2 power
    is applied to the (phi_2, chi_2) seeds. Real ``lam`` is shifted to
    ``lam + i epsilon`` and the real parts are returned.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    real_input = not isinstance(lam, complex) or lam.imag == 0
    if real_input:
        lam = float(np.real(lam))
        if abs(lam * (lam - 4.0)) < epsilon ** 2:
            raise EvaluationUnstable(
                f"lambda={lam} is at a branch point of a(lambda)")
        z = complex(lam, epsilon)
    else:
        z = complex(lam)
    a = 0.5 * (z + np.sqrt(z * (z - 4.0)))
    phi2 = z * z - 2.0 * z
    chi2 = z * z - 3.0 * z + 1.0
    # columns are the eigenvectors for 1 - a and 1 - z/a
    p = np.array([[1.0, 1.0], [a / z, 1.0 / a]])
    d = np.diag([(1.0 - a) ** (n - 2), (1.0 - z / a) ** (n - 2)])
    p_inv = np.array([[z, -a * z], [-a * a, a * z]]) / (z - a * a)
    phi, chi = p @ d @ p_inv @ np.array([phi2, chi2])
    if real_input:
        return float(phi.real), float(chi.real)
    return complex(phi), complex(chi)


def secular_residual(n, alpha):
    """Left-hand side of the trigonometric secular equation.

    With lam = 4 cos^2(alpha/2):
    (phi_2 - 2 chi_2) sin((n-2) alpha) cos(alpha/2)
        - phi_2 cos((n-2) alpha) sin(alpha/2)
    """
    lam = 4.0 * math.cos(alpha / 2.0) ** 2
    phi2 = lam * lam - 2.0 * lam
    chi2 = lam * lam - 3.0 * lam + 1.0
    return ((phi2 - 2.0 * chi2) * math.sin((n - 2) * alpha) * math.cos(alpha / 2.0)
            - phi2 * math.cos((n - 2) * alpha) * math.sin(alpha / 2.0))


def secular_scale(alpha):
    """Magnitude of the terms in ``secular_residual``; used to scale tolerances."""
    lam = 4.0 * math.cos(alpha / 2.0) ** 2
    phi2 = lam * lam - 2.0 * lam
    chi2 = lam * lam - 3.0 * lam + 1.0
    return max(1.0, abs(phi2 - 2.0 * chi2) + abs(phi2))


def eigenvalue_angle(lam):
    """Inverse of lam = 4 cos^2(alpha/2), alpha in [0, pi]."""
    return 2.0 * math.acos(math.sqrt(min(max(lam / 4.0, 0.0), 1.0)))


def asymptotic_eigenvalues(spec):
    """Large-N formula lambda_n = 4 sin^2(n pi / (2 (N - 1))), n = 0..N-1."""
    n_atoms = spec.n_atoms if isinstance(spec, ChainSpec) else int(spec)
    n = np.arange(n_atoms)
    return 4.0 * np.sin(n * np.pi / (2.0 * (n_atoms - 1))) ** 2


def _fix_signs(vectors):
    # first component with |v_i| above noise is made positive
    for row in vectors:
        nz = np.flatnonzero(np.abs(row) > 1.0e-12)
        if nz.size and row[nz[0]] < 0:
            row *= -1.0
    return vectors


def exact_spectrum(spec):
    """Eigen-decomposition of the coupling matrix by a tridiagonal solver."""
    coupling = build_coupling_matrix(spec)
    try:
        w, v = scipy.linalg.eigh_tridiagonal(coupling.diagonal, coupling.off_diagonal)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverFailure(f"tridiagonal eigensolver failed for N={spec.n_atoms}: {exc}") from exc
    order = np.argsort(w, kind="stable")
    w = w[order]
    rows = np.ascontiguousarray(v[:, order].T)

    overlap = rows @ rows.T - np.eye(rows.shape[0])
    if np.max(np.abs(overlap)) > ORTHO_TOL:
        q, _ = np.linalg.qr(rows.T)
        rows = np.ascontiguousarray(q.T)
    rows = _fix_signs(rows)

    w = np.where(np.abs(w) < ZERO_MODE_TOL, 0.0, w)
    return SpectralDecomposition(eigenvalues=w, mode_matrix=rows)


def mode_frequency(spec, lam):
    """Effective frequency omega_j sqrt(lambda_j) = sqrt(omega^2 lambda + mass_term^2)."""
    if lam == 0.0:
        return float(spec.mass_term)
    return math.sqrt(spec.omega ** 2 * lam + spec.mass_term ** 2)


def mode_oscillators(spec, spectrum):
    return [ModeOscillator(lam=float(lam), eff_frequency=mode_frequency(spec, float(lam)),
                           mass=spec.mass, hbar=spec.hbar)
            for lam in spectrum.eigenvalues]
