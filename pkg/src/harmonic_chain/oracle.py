"""Independent numerical oracle for single normal modes.

Everything here works on one mode in one dimension: a uniform grid
wavefunction is stepped with Crank-Nicolson (3-point kinetic stencil,
Dirichlet edges), or the closed-form kernel is applied as an integral
operator by quadrature. Observables are measured directly on the grid.
The classical driven oscillator is integrated with fixed-step RK4.
"""

from dataclasses import dataclass, field
import math

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import BoundaryLeak, Caustic
from .kernel import DEFAULT_CAUSTIC_TOL, mode_kernel_values
from .series import TimeSeries

DEFAULT_POINTS = 4096
DEFAULT_WIDTHS = 12.0
STEPS_PER_UNIT = 2000
LEAK_TOL = 1.0e-6

QUANTITIES = ("variance", "center", "energy", "quanta")


@dataclass(frozen=True)
class GridWavefunction:
    y: np.ndarray
    psi: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        psi = np.asarray(self.psi, dtype=complex)
        if y.ndim != 1 or y.shape != psi.shape:
            raise ValueError("grid and amplitudes must be 1-d arrays of equal length")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "psi", psi)

    @property
    def dy(self):
        return self.y[1] - self.y[0]

    @property
    def norm(self):
        return _trapezoid(np.abs(self.psi) ** 2, self.dy)

    def normalized(self):
        return GridWavefunction(self.y, self.psi / math.sqrt(self.norm), self.metadata)

    def overlap(self, other):
        return _trapezoid(np.conj(self.psi) * other.psi, self.dy)

    def l2_distance(self, other):
        return math.sqrt(_trapezoid(np.abs(self.psi - other.psi) ** 2, self.dy))


@dataclass(frozen=True)
class PropagationTask:
    """H = p^2/2m + m w^2 y^2 / 2 - force * y, run for ``t_final``."""

    mass: float
    frequency: float
    t_final: float
    n_steps: int
    force: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.n_steps < 100:
            raise ValueError("n_steps must be >= 100")
        if not self.mass > 0 or not self.hbar > 0:
            raise ValueError("mass and hbar must be positive")
        if self.frequency < 0 or self.t_final < 0:
            raise ValueError("frequency and t_final must be non-negative")

    @classmethod
    def for_mode(cls, mode, t_final, force=0.0, steps_per_unit=STEPS_PER_UNIT):
        scale = max(mode.eff_frequency, 1.0)
        n_steps = max(100, math.ceil(steps_per_unit * scale * t_final))
        return cls(mode.mass, mode.eff_frequency, t_final, n_steps, force, mode.hbar)


def _trapezoid(f, dx):
    total = dx * (np.sum(f) - 0.5 * (f[0] + f[-1]))
    return complex(total) if np.iscomplexobj(f) else float(total)


def ground_width(mass, frequency, hbar=1.0):
    """Position standard deviation of the oscillator ground state."""
    return math.sqrt(hbar / (2.0 * mass * frequency))


def make_grid(half_width, n_points=DEFAULT_POINTS):
    if n_points < 256:
        raise ValueError("n_points must be >= 256")
    return np.linspace(-half_width, half_width, n_points)


def grid_for_mode(mode, n_points=DEFAULT_POINTS, n_widths=DEFAULT_WIDTHS, scale=None):
    """Grid spanning ``n_widths`` ground-state widths (or ``scale`` units for free modes)."""
    if scale is None:
        if mode.is_free:
            raise ValueError("free modes need an explicit length scale")
        scale = ground_width(mode.mass, mode.eff_frequency, mode.hbar)
    return make_grid(n_widths * scale, n_points)


def gaussian_state(y, sigma, center=0.0, momentum=0.0, hbar=1.0):
    """Normalised exp(-(y - c)^2 / 4 sigma^2 + i p y / hbar); |psi|^2 has std sigma."""
    y = np.asarray(y, dtype=float)
    psi = np.exp(-(y - center) ** 2 / (4.0 * sigma ** 2) + 1j * momentum * y / hbar)
    return GridWavefunction(y, psi).normalized()


def ground_state(y, mode, center=0.0):
    """Analytic ground state (coherent state when ``center`` != 0)."""
    return gaussian_state(y, ground_width(mode.mass, mode.eff_frequency, mode.hbar), center,
                          hbar=mode.hbar)


def _hamiltonian_bands(y, mass, frequency, hbar, force):
    dy = y[1] - y[0]
    kin = hbar ** 2 / (2.0 * mass * dy ** 2)
    diag = 2.0 * kin + 0.5 * mass * frequency ** 2 * y ** 2 - force * y
    off = np.full(y.size - 1, -kin)
    return diag, off


def discrete_ground_state(y, mode):
    """Lowest eigenvector of the grid Hamiltonian; stationary under ``propagate_grid``."""
    diag, off = _hamiltonian_bands(np.asarray(y, dtype=float), mode.mass, mode.eff_frequency,
                                   mode.hbar, 0.0)
    _, v = scipy.linalg.eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    vec = v[:, 0]
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    return GridWavefunction(y, vec).normalized()


def _check_edges(psi, where):
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge > LEAK_TOL:
        raise BoundaryLeak(f"edge amplitude {edge:.3e} exceeds {LEAK_TOL:g} {where}")


def propagate_grid(psi0, task):
    """Crank-Nicolson evolution of ``psi0`` for ``task.t_final``.

    (1 + i H dt / 2 hbar) psi_{n+1} = (1 - i H dt / 2 hbar) psi_n, which is
    unitary in the grid inner product and second order in dt.
    """
    y = psi0.y
    _check_edges(psi0.psi, "in the initial state")
    if task.t_final == 0:
        return psi0
    dt = task.t_final / task.n_steps
    diag, off = _hamiltonian_bands(y, task.mass, task.frequency, task.hbar, task.force)
    g = 0.5j * dt / task.hbar
    lhs = scipy.sparse.diags([g * off, 1.0 + g * diag, g * off], [-1, 0, 1], format="csc")
    solve = scipy.sparse.linalg.factorized(lhs)
    b_diag = 1.0 - g * diag
    b_off = -g * off
    psi = psi0.psi.copy()
    rhs = np.empty_like(psi)
    for step in range(task.n_steps):
        np.multiply(b_diag, psi, out=rhs)
        rhs[:-1] += b_off * psi[1:]
        rhs[1:] += b_off * psi[:-1]
        psi = solve(rhs)
        if abs(psi[0]) > LEAK_TOL or abs(psi[-1]) > LEAK_TOL:
            _check_edges(psi, f"at step {step + 1}")
    meta = dict(psi0.metadata, t=task.t_final, n_steps=task.n_steps)
    return GridWavefunction(y, psi, meta)


def evolve_through(psi0, mode, times, force=0.0, steps_per_unit=STEPS_PER_UNIT):
    """Grid states at each of the increasing ``times`` (starting from t = 0)."""
    states = []
    current, t_now = psi0, 0.0
    for t in times:
        if t < t_now:
            raise ValueError("times must be non-decreasing and >= 0")
        if t > t_now:
            task = PropagationTask.for_mode(mode, t - t_now, force, steps_per_unit)
            current = propagate_grid(current, task)
            t_now = t
        states.append(current)
    return states


def apply_kernel_quadrature(mode, psi0, t, caustic_tol=DEFAULT_CAUSTIC_TOL, block=512):
    """psi(y, t) = sum_j K(y, y'_j; t) psi0(y'_j) w_j with trapezoid weights."""
    y = psi0.y
    weights = np.full(y.size, psi0.dy)
    weights[0] = weights[-1] = 0.5 * psi0.dy
    src = weights * psi0.psi
    out = np.empty(y.size, dtype=complex)
    for start in range(0, y.size, block):
        rows = y[start:start + block, None]
        out[start:start + block] = mode_kernel_values(mode, rows, y[None, :], t, caustic_tol) @ src
    return GridWavefunction(y, out, dict(psi0.metadata, t=t, route="kernel"))


def compose_kernels_gauss_hermite(mode, y, y_prev, t1, t2, n_nodes=80,
                                  caustic_tol=DEFAULT_CAUSTIC_TOL):
    """int K(y, z; t1) K(z, y'; t2) dz by Gauss-Hermite on a rotated contour.

    The integrand is exp(i alpha z^2 + linear); rotating z = e^{+-i pi/4} v/sqrt|alpha|
    turns the chirp into the Hermite weight exp(-v^2).
    """
    def quad_coeff(t):
        if mode.is_free:
            return mode.mass / (2.0 * mode.hbar * t)
        w = mode.eff_frequency
        return mode.mass * w * math.cos(w * t) / (2.0 * mode.hbar * math.sin(w * t))

    alpha = quad_coeff(t1) + quad_coeff(t2)
    if abs(alpha) < caustic_tol:
        raise Caustic("composite time is at a caustic; no Gaussian damping on any contour")
    rot = np.exp(1j * math.copysign(math.pi / 4.0, alpha))
    v, w = np.polynomial.hermite.hermgauss(n_nodes)
    z = rot * v / math.sqrt(abs(alpha))
    integrand = (mode_kernel_values(mode, y, z, t1, caustic_tol)
                 * mode_kernel_values(mode, z, y_prev, t2, caustic_tol)
                 * np.exp(v * v))
    return complex(rot / math.sqrt(abs(alpha)) * np.sum(w * integrand))


def _laplacian(psi, dy):
    out = -2.0 * psi
    out[:-1] += psi[1:]
    out[1:] += psi[:-1]
    return out / dy ** 2


def measure(psi, quantity, mass=1.0, frequency=None, hbar=1.0):
    """Expectation values on the grid (``psi`` is renormalised first)."""
    if quantity not in QUANTITIES:
        raise ValueError(f"quantity must be one of {QUANTITIES}")
    psi = psi.normalized()
    dy, y = psi.dy, psi.y
    rho = np.abs(psi.psi) ** 2
    center = _trapezoid(y * rho, dy)
    if quantity == "center":
        return center
    if quantity == "variance":
        return _trapezoid((y - center) ** 2 * rho, dy)
    if frequency is None:
        raise ValueError(f"{quantity} needs the oscillator frequency")
    kinetic = -hbar ** 2 / (2.0 * mass) * _trapezoid(np.conj(psi.psi) * _laplacian(psi.psi, dy), dy)
    potential = _trapezoid(0.5 * mass * frequency ** 2 * y ** 2 * rho, dy)
    energy = float(np.real(kinetic)) + potential
    if quantity == "energy":
        return energy
    if frequency <= 0:
        raise ValueError("quanta are undefined for a free mode")
    return energy / (hbar * frequency) - 0.5


def textbook_width(mass, frequency, hbar, sigma0, t):
    """Std of a minimum-uncertainty Gaussian of initial std sigma0 (reference for self-checks)."""
    t = np.asarray(t, dtype=float)
    if frequency == 0:
        return sigma0 * np.sqrt(1.0 + hbar ** 2 * t ** 2 / (4.0 * mass ** 2 * sigma0 ** 4))
    spread = hbar / (2.0 * mass * frequency * sigma0)
    return np.sqrt(sigma0 ** 2 * np.cos(frequency * t) ** 2 + spread ** 2 * np.sin(frequency * t) ** 2)


def classical_driven_oscillator(mode, force, t_final, n_steps=2000):
    """RK4 solution of m z'' = -m w^2 z + force from rest at z = 0."""
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    m, w2 = mode.mass, mode.eff_frequency ** 2
    dt = t_final / n_steps

    def rhs(state):
        z, v = state
        return np.array([v, -w2 * z + force / m])

    state = np.zeros(2)
    z = np.empty(n_steps + 1)
    z[0] = 0.0
    for i in range(n_steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * dt * k1)
        k3 = rhs(state + 0.5 * dt * k2)
        k4 = rhs(state + dt * k3)
        state = state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        z[i + 1] = state[0]
    t = np.linspace(0.0, t_final, n_steps + 1)
    return TimeSeries("classical_displacement", mode.eff_frequency, t, z,
                      {"force": force, "mass": m, "frequency": mode.eff_frequency,
                       "scheme": "rk4", "n_steps": n_steps})
