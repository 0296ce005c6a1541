"""Verification battery: oracle self-checks plus closed-form vs oracle comparisons.

``run_battery`` returns a JSON-ready report. Checks of kind ``oracle``
decide the exit status of ``harmonic-chain verify``; checks of kind
``formula`` and the ``formula_discrepancies`` list are informational.
"""

from fractions import Fraction
import math

import numpy as np

from . import chain, continuum, gaussian, oracle, quench
from .chain import ChainSpec, ModeOscillator
from .kernel import mode_kernel
from .series import crossing_period


def _num(x):
    """Round to 12 significant digits so reports are stable across platforms."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.12g}")


def _check(name, kind, value, tolerance, passed, detail=""):
    return {"name": name, "kind": kind, "value": _num(value), "tolerance": tolerance,
            "passed": bool(passed), "detail": detail}


def _discrepancy(formula, quantity, closed, oracle_value, note):
    ratio = oracle_value / closed if closed != 0 else float("nan")
    return {"formula": formula, "quantity": quantity, "formula_value": _num(closed),
            "oracle_value": _num(oracle_value), "ratio_oracle_over_formula": _num(ratio),
            "note": note}


def _det_fraction(matrix):
    # cofactor expansion on Fractions; small N only
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = Fraction(0)
    for col in range(n):
        if matrix[0][col] == 0:
            continue
        minor = [row[:col] + row[col + 1:] for row in matrix[1:]]
        total += (-1) ** col * matrix[0][col] * _det_fraction(minor)
    return total


def shifted_coupling_fraction(n, lam):
    v = chain.build_coupling_matrix(ChainSpec(n)).dense()
    return [[Fraction(int(v[i, j])) - (lam if i == j else 0) for j in range(n)] for i in range(n)]


# ----------------------------------------------------------------- individual checks

def small_spectra():
    expected = {2: [0.0, 2.0], 3: [0.0, 1.0, 3.0],
                4: [0.0, 2.0 - math.sqrt(2.0), 2.0, 2.0 + math.sqrt(2.0)]}
    err = max(np.max(np.abs(chain.exact_spectrum(ChainSpec(n)).eigenvalues - np.array(ev)))
              for n, ev in expected.items())
    return err


def recursion_vs_determinant():
    exact_ok = True
    float_err = 0.0
    for n in range(2, 7):
        for lam in range(5):
            phi, _ = chain.char_polys_recursive(n, Fraction(lam))
            exact_ok &= phi == _det_fraction(shifted_coupling_fraction(n, Fraction(lam)))
            v = chain.build_coupling_matrix(ChainSpec(n)).dense()
            phi_f, _ = chain.char_polys_recursive(n, float(lam))
            float_err = max(float_err, abs(phi_f - np.linalg.det(v - lam * np.eye(n))))
    return exact_ok, float_err


def secular_at_eigen_angles(max_n=12):
    worst = 0.0
    for n in range(3, max_n + 1):
        for lam in chain.exact_spectrum(ChainSpec(n)).eigenvalues:
            alpha = chain.eigenvalue_angle(lam)
            worst = max(worst, abs(chain.secular_residual(n, alpha)) / chain.secular_scale(alpha))
    return worst


def asymptotic_errors(n_values=(10, 100)):
    return {n: float(np.max(np.abs(chain.asymptotic_eigenvalues(n)
                                   - chain.exact_spectrum(ChainSpec(n)).eigenvalues)))
            for n in n_values}


def chapman_kolmogorov(points=((0.4, -0.7), (0.0, 0.0), (1.2, 0.5), (-1.5, 2.0))):
    mode = ModeOscillator.harmonic(1.0)
    worst = 0.0
    for y, yp in points:
        composed = oracle.compose_kernels_gauss_hermite(mode, y, yp, 0.3, 0.3)
        direct = mode_kernel(mode, y, yp, 0.6).value
        worst = max(worst, abs(composed - direct) / abs(direct))
    return worst


def battery_states(mode, y):
    return {"ground": oracle.ground_state(y, mode),
            "coherent_d1": oracle.ground_state(y, mode, center=1.0),
            "gaussian_sigma1": oracle.gaussian_state(y, 1.0, hbar=mode.hbar)}


BATTERY_TIMES = (0.3, 0.7, 1.3)


def grid_vs_kernel_battery(n_points=oracle.DEFAULT_POINTS):
    """Max L2 distance and max kernel-route norm error over 3 states x 3 times."""
    mode = ModeOscillator.harmonic(1.0)
    y = oracle.grid_for_mode(mode, n_points)
    worst_l2 = worst_norm = 0.0
    for psi0 in battery_states(mode, y).values():
        for t in BATTERY_TIMES:
            grid = oracle.propagate_grid(psi0, oracle.PropagationTask.for_mode(mode, t))
            quad = oracle.apply_kernel_quadrature(mode, psi0, t)
            worst_l2 = max(worst_l2, grid.l2_distance(quad))
            worst_norm = max(worst_norm, abs(quad.norm - 1.0))
    return worst_l2, worst_norm


def free_width_grid(sigma0=1.0, t=1.0, n_points=oracle.DEFAULT_POINTS):
    y = oracle.make_grid(12.0 * sigma0 * math.sqrt(1.0 + t * t), n_points)
    psi = oracle.propagate_grid(oracle.gaussian_state(y, sigma0),
                                oracle.PropagationTask(1.0, 0.0, t, max(100, int(2000 * t))))
    return math.sqrt(oracle.measure(psi, "variance"))


def harmonic_width_grid(sigma0=1.0, t=math.pi / 2):
    mode = ModeOscillator.harmonic(1.0)
    y = oracle.grid_for_mode(mode)
    psi = oracle.propagate_grid(oracle.gaussian_state(y, sigma0),
                                oracle.PropagationTask.for_mode(mode, t))
    return math.sqrt(oracle.measure(psi, "variance"))


def quanta_drift(sigma0=1.0, times=tuple(np.linspace(0.0, 3.0, 7))):
    mode = ModeOscillator.harmonic(1.0)
    y = oracle.grid_for_mode(mode)
    states = oracle.evolve_through(oracle.gaussian_state(y, sigma0), mode, times)
    q = [oracle.measure(s, "quanta", frequency=1.0) for s in states]
    return float(np.ptp(q)), q[0]


def ground_state_quanta():
    mode = ModeOscillator.harmonic(1.0)
    return oracle.measure(oracle.ground_state(oracle.grid_for_mode(mode), mode), "quanta",
                          frequency=1.0)


def stationary_ground_variance():
    mode = ModeOscillator.harmonic(1.0)
    y = oracle.grid_for_mode(mode)
    states = oracle.evolve_through(oracle.discrete_ground_state(y, mode), mode,
                                   np.linspace(0.0, 2.0 * math.pi, 9))
    return float(np.ptp([oracle.measure(s, "variance") for s in states]))


def classical_at_pi(n_steps=2000):
    mode = ModeOscillator.harmonic(1.0)
    coarse = oracle.classical_driven_oscillator(mode, 1.0, math.pi, n_steps)
    fine = oracle.classical_driven_oscillator(mode, 1.0, math.pi, 2 * n_steps)
    return float(fine.values[-1]), abs(fine.values[-1] - coarse.values[-1])


def figure1_series(params=None, reading="consistent", n_periods=5, n_samples=4001):
    """nu_k(t) for k = 10 Mc/hbar and 5 Mc/hbar over ``n_periods`` of the slower curve."""
    params = params or continuum.KGParams()
    k_hi, k_lo = 10.0 * params.compton_k, 5.0 * params.compton_k
    slow_period = _nu_period(k_lo, params, reading)
    t = np.linspace(0.0, n_periods * slow_period, n_samples)
    out = {}
    for k in (k_hi, k_lo):
        out[k] = (t, np.asarray(gaussian.number_density_kg(k, params, t, reading)))
    return out


def _nu_period(k, params, reading):
    e = continuum.dispersion(k, params)
    period = math.pi * params.hbar / e
    return period if reading == "consistent" else 2.0 * period


def figure1_period_ratio(reading="consistent"):
    series = figure1_series(reading=reading)
    (k_hi, (t, hi)), (k_lo, (_, lo)) = series.items()
    return crossing_period(t, hi) / crossing_period(t, lo)


def quench_period_error(k=2.0, params=None):
    params = params or continuum.KGParams()
    e = continuum.dispersion(k, params)
    expected = 2.0 * math.pi * params.hbar / e
    t = np.linspace(0.0, 6.0 * expected, 6001)
    nu = quench.quench_number_density(k, 1.0, t, params)
    return abs(crossing_period(t, nu) / expected - 1.0)


def displaced_density_norm():
    mode = ModeOscillator.harmonic(1.0)
    y = np.linspace(-15.0, 15.0, 30001)
    worst = 0.0
    for t in (0.0, 0.5, math.pi):
        rho = quench.displaced_density(mode, y, t, 1.0)
        worst = max(worst, abs(np.trapezoid(rho, y) - 1.0))
    return worst


def continuum_rates(n_values=(50, 100, 200, 400), j_values=(1, 2, 3), L=math.pi, route="asymptotic"):
    rows = continuum.convergence_study(n_values, j_values, L, route)
    ratios = []
    for j in j_values:
        errs = [r["abs_error"] for r in rows if r["j"] == j]
        ratios.extend(a / b for a, b in zip(errs, errs[1:]))
    return ratios


def cosine_correlation(n_atoms=400, j=1, L=math.pi):
    spec = ChainSpec(n_atoms)
    spectrum = chain.exact_spectrum(spec)
    cmap = continuum.make_continuum_map(spec, L)
    xi = cmap.sites
    profile = continuum.mode_function_limit(spectrum, cmap, j, xi)
    reference = math.sqrt(2.0 / L) * np.cos(j * math.pi * xi / L)
    return float(np.corrcoef(profile, reference)[0, 1])


def quench_center_grid(t=math.pi):
    """Oracle center of the vacuum after a unit force is switched on (m = w = hbar = 1)."""
    mode = ModeOscillator.harmonic(1.0)
    y = oracle.grid_for_mode(mode)
    psi = oracle.propagate_grid(oracle.ground_state(y, mode),
                                oracle.PropagationTask.for_mode(mode, t, force=1.0))
    return oracle.measure(psi, "center")


def closed_chi_lambda_entry(n, lam, epsilon=1e-10):
    """chi_n from the closed form with the eigenvector entry taken as 1/lam instead of 1/a."""
    z = complex(lam, epsilon)
    a = 0.5 * (z + np.sqrt(z * (z - 4.0)))
    p = np.array([[1.0, 1.0], [a / z, 1.0 / z]])
    d = np.diag([(1.0 - a) ** (n - 2), (1.0 - z / a) ** (n - 2)])
    q = np.array([[z, -a * z], [-a * a, a * z]]) / (z - a * a)
    seeds = np.array([z * z - 2.0 * z, z * z - 3.0 * z + 1.0])
    return float((p @ d @ q @ seeds)[1].real)


# ----------------------------------------------------------------- report

def run_battery():
    checks = []

    err = small_spectra()
    checks.append(_check("small_n_spectra", "formula", err, 1e-10, err <= 1e-10,
                         "N=2,3,4 exact eigenvalues"))
    exact_ok, ferr = recursion_vs_determinant()
    checks.append(_check("recursion_vs_determinant", "formula", ferr, 1e-12,
                         exact_ok and ferr <= 1e-12, "N<=6, lambda in {0..4}; exact rationals"))
    closed_err = max(abs(chain.char_polys_closed(n, lam)[i] - chain.char_polys_recursive(n, lam)[i])
                     / max(1.0, abs(chain.char_polys_recursive(n, lam)[i]))
                     for n in (3, 10, 30, 50) for lam in (0.5, 1.5, 2.7, 3.5) for i in (0, 1))
    checks.append(_check("closed_form_vs_recursion", "formula", closed_err, 1e-8,
                         closed_err <= 1e-8, "eigenvector entry 1/a"))
    sec = secular_at_eigen_angles()
    checks.append(_check("secular_residual_at_eigenvalues", "formula", sec, 1e-10, sec <= 1e-10,
                         "N<=12, scaled residual"))
    errs = asymptotic_errors()
    rate = errs[10] / errs[100]
    checks.append(_check("asymptotic_max_error_N10", "formula", errs[10], 0.4, errs[10] <= 0.4))
    checks.append(_check("asymptotic_error_rate_N10_over_N100", "formula", rate, [8, 12],
                         8 <= rate <= 12))

    ck = chapman_kolmogorov()
    checks.append(_check("chapman_kolmogorov_gauss_hermite", "oracle", ck, 1e-6, ck <= 1e-6,
                         "t=0.3+0.3 vs 0.6, w=1"))
    l2, norm_err = grid_vs_kernel_battery()
    checks.append(_check("kernel_quadrature_norm", "oracle", norm_err, 1e-6, norm_err <= 1e-6))
    checks.append(_check("grid_vs_kernel_l2", "oracle", l2, 1e-5, l2 <= 1e-5,
                         "3 states x 3 times"))
    gq = ground_state_quanta()
    checks.append(_check("ground_state_quanta", "oracle", gq, 2e-6, abs(gq) <= 2e-6))
    drift, q0 = quanta_drift()
    checks.append(_check("quanta_conservation", "oracle", drift, 1e-5, drift <= 1e-5))
    sv = stationary_ground_variance()
    checks.append(_check("stationary_ground_variance", "oracle", sv, 1e-8, sv <= 1e-8))
    fw = free_width_grid()
    ref = float(oracle.textbook_width(1.0, 0.0, 1.0, 1.0, 1.0))
    checks.append(_check("free_width_grid_vs_analytic", "oracle", abs(fw / ref - 1.0), 1e-5,
                         abs(fw / ref - 1.0) <= 1e-5, "free spreading, sigma0=1, t=1"))
    z_pi, z_step = classical_at_pi()
    checks.append(_check("classical_rk4_step_halving", "oracle", z_step, 1e-8, z_step <= 1e-8))

    ratio = figure1_period_ratio()
    target = math.sqrt(26.0) / math.sqrt(101.0)
    checks.append(_check("figure1_period_ratio", "formula", ratio, "1% of sqrt(26/101)",
                         abs(ratio / target - 1.0) <= 0.01))
    qp = quench_period_error()
    checks.append(_check("quench_nu_period", "formula", qp, 0.01, qp <= 0.01))
    dn = displaced_density_norm()
    checks.append(_check("displaced_density_normalization", "formula", dn, 1e-10, dn <= 1e-10))
    rates = continuum_rates()
    checks.append(_check("continuum_rate_asymptotic_route", "formula", min(rates), [1.6, 2.4],
                         all(1.6 <= r <= 2.4 for r in rates), "min ratio shown"))
    corr = cosine_correlation()
    checks.append(_check("mode_function_cosine_correlation", "formula", corr, 0.999, corr > 0.999))

    disc = []
    mode = ModeOscillator.harmonic(1.0)
    disc.append(_discrepancy(
        "asymptotic spectrum", "largest eigenvalue at N=10",
        float(np.max(chain.asymptotic_eigenvalues(10))), float(np.max(chain.exact_spectrum(ChainSpec(10)).eigenvalues)),
        f"max abs error over all modes {errs[10]:.6g}; exact spectrum is 4 sin^2(n pi / 2N)"))
    disc.append(_discrepancy(
        "closed-form characteristic polynomials", "chi_10(1.5) with eigenvector entry 1/lambda",
        closed_chi_lambda_entry(10, 1.5), chain.char_polys_recursive(10, 1.5)[1],
        "first component (phi_N) is unaffected; 1/a restores chi_N"))
    disc.append(_discrepancy(
        "discrete width", "width at w t = pi/2 (m=w=hbar=sigma0=1)",
        gaussian.width_discrete(mode, 1.0, math.pi / 2), harmonic_width_grid(),
        "oracle is the CN grid; minimum-uncertainty spreading has hbar^2/4, not hbar^2/2"))
    disc.append(_discrepancy(
        "discrete width, w -> 0", "free width at t=1 (m=hbar=sigma0=1)",
        gaussian.width_free(1.0, 1.0, 1.0, 1.0), fw, "oracle is the CN grid with w=0"))
    disc.append(_discrepancy(
        "average quanta", "<N> at t=0 (m=w=hbar=lambda=sigma=1)",
        gaussian.avg_quanta_discrete(mode, 1.0), q0,
        "oracle <N> is conserved; the formula varies in time"))
    disc.append(_discrepancy(
        "average quanta", "<N> at w t = pi/2 (same state)",
        gaussian.avg_quanta_discrete(mode, gaussian.width_discrete(mode, 1.0, math.pi / 2)), q0,
        "same oracle value as at t=0"))
    disc.append(_discrepancy(
        "quench displacement", "a_j at w t = pi (m=w=lambda=E'=1)",
        quench.displacement_discrete(mode, 1.0, math.pi), z_pi,
        "classical driven oscillator from rest: (E'/m w^2)(1 - cos w t)"))
    disc.append(_discrepancy(
        "quench density", "mode center at w t = pi after unit force",
        -quench.displacement_discrete(mode, 1.0, math.pi), quench_center_grid(),
        "closed-form density peaks at -a_j(t); the oracle wavepacket moves along +force"))
    disc.append(_discrepancy(
        "quench density", "density prefactor closed form / normalised",
        quench.raw_density_prefactor(mode), math.sqrt(mode.mass * mode.eff_frequency / (math.pi * mode.hbar)),
        "closed-form prefactor is the reciprocal of the normalisation"))
    massless = continuum.KGParams(mass_M=0.0)
    disc.append(_discrepancy(
        "massless vs massive field displacement", "alpha(k=1, t=1) massless formula vs M=0 massive formula",
        quench.displacement_kg(1.0, 1.0, 1.0, massless, massless=True),
        quench.displacement_kg(1.0, 1.0, 1.0, massless, massless=False),
        "the massive formula at M=0 is not the massless formula"))
    rates_exact = continuum_rates(route="exact")
    disc.append(_discrepancy(
        "asymptotic continuum eigenvalues", "error ratio per doubling of N (j=1, N=50->100)",
        continuum_rates()[0], rates_exact[0],
        "asymptotic route converges as 1/N; exact eigenvalues converge as 1/N^2"))

    return {
        "battery": "harmonic-chain verify",
        "units": "natural (m = omega = hbar = c = mu = 1)",
        "checks": checks,
        "oracle_checks_passed": all(c["passed"] for c in checks if c["kind"] == "oracle"),
        "formula_discrepancies": disc,
    }
