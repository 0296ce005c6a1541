"""Command-line front end.

    harmonic-chain spectrum  --n-atoms 10
    harmonic-chain widths    --kind kg --reading verbatim
    harmonic-chain figure1   --output fig1.csv
    harmonic-chain quench    --source profile.csv
    harmonic-chain verify    --output report.json

Values come from defaults, then an optional JSON ``--config`` file, then
flags (flags win). Output is CSV (``#`` metadata lines, a header row,
then data) or JSON.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 oracle self-check failure.
"""

import argparse
from dataclasses import asdict, dataclass, fields
import json
import logging
import math
import sys

import numpy as np

from . import chain, continuum, gaussian, kernel, oracle, quench, verify
from .chain import ChainSpec, ModeOscillator
from .errors import Caustic, ChainError, NegativeRadicand
from .series import crossing_period

logger = logging.getLogger("harmonic_chain")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ORACLE = 0, 2, 3, 4

SUBCOMMANDS = ("spectrum", "widths", "quanta", "kernel", "figure1", "quench", "continuum", "verify")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n_atoms: int = 3
    mass: float = 1.0
    omega: float = 1.0
    mass_term: float = 0.0
    hbar: float = 1.0
    c: float = 1.0
    mass_M: float = 1.0
    mu: float = 1.0
    Omega: float = 1.0
    sigma: float = 1.0
    sbar: float = 1.0
    length_L: float = math.pi
    source: str = None
    kind: str = None
    modes: list = None
    k_values: list = None
    x_final: list = None
    x_initial: list = None
    t_min: float = 0.0
    t_max: float = 2.0 * math.pi
    t_points: int = 201
    j_max: int = 8
    grid_points: int = oracle.DEFAULT_POINTS
    reading: str = "consistent"
    string_form: str = "dimensional"
    n_values: list = None
    j_values: list = None
    route: str = "asymptotic"
    periods: float = 5.0
    output: str = None
    format: str = "csv"

    def validate(self):
        positive = ("mass", "omega", "hbar", "c", "mu", "Omega", "sigma", "sbar", "length_L", "t_max")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.mass_term < 0 or self.mass_M < 0:
            raise ConfigError("mass terms must be non-negative")
        if self.n_atoms < 2:
            raise ConfigError("n_atoms must be >= 2")
        if self.t_points < 2 or self.t_min < 0 or self.t_min >= self.t_max:
            raise ConfigError("need t_points >= 2 and 0 <= t_min < t_max")
        if self.reading not in gaussian.READINGS:
            raise ConfigError(f"reading must be one of {gaussian.READINGS}")
        if self.string_form not in kernel.STRING_FORMS:
            raise ConfigError(f"string_form must be one of {kernel.STRING_FORMS}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.route not in ("asymptotic", "exact"):
            raise ConfigError("route must be asymptotic or exact")
        return self

    def chain_spec(self):
        return ChainSpec(self.n_atoms, self.mass, self.omega, self.mass_term, self.hbar)

    def kg_params(self):
        return continuum.KGParams(self.mass_M, self.c, self.hbar, self.mu, self.sbar)

    def times(self, positive=False):
        t = np.linspace(self.t_min, self.t_max, self.t_points)
        return t[t > 0] if positive else t

    def echo(self):
        out = asdict(self)
        out.pop("output")
        out.pop("format")
        return out


def load_config(path, overrides):
    """Defaults < JSON file < explicit flags."""
    values = {}
    names = {f.name for f in fields(RunConfig)}
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    values.update({k: v for k, v in overrides.items() if v is not None and k in names})
    return RunConfig(**values).validate()


# ----------------------------------------------------------------- output

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.14e}"
    return str(v)


def _jsonable(v):
    if isinstance(v, np.generic):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def write_table(columns, rows, metadata, cfg, stream):
    if cfg.format == "json":
        doc = {"metadata": metadata, "columns": list(columns),
               "rows": [[_jsonable(v) for v in row] for row in rows]}
        stream.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        return
    for key in sorted(metadata):
        stream.write(f"# {key}: {json.dumps(metadata[key], sort_keys=True)}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def _metadata(cfg, subcommand, **extra):
    meta = {"subcommand": subcommand, "parameters": cfg.echo(), "reading": cfg.reading}
    meta.update(extra)
    return meta


# ----------------------------------------------------------------- subcommands

def cmd_spectrum(cfg):
    spec = cfg.chain_spec()
    exact = chain.exact_spectrum(spec).eigenvalues
    asym = chain.asymptotic_eigenvalues(spec)
    rows = [(n, exact[n], asym[n], abs(exact[n] - asym[n])) for n in range(spec.n_atoms)]
    meta = _metadata(cfg, "spectrum", max_abs_error=float(np.max(np.abs(exact - asym))))
    return ("n", "lambda_exact", "lambda_asymptotic", "abs_error"), rows, meta


def _selected_modes(cfg, n_modes, default):
    modes = cfg.modes if cfg.modes is not None else default
    bad = [j for j in modes if not 0 <= j < n_modes]
    if bad:
        raise ConfigError(f"mode indices out of range: {bad}")
    return sorted(modes)


def _default_k_values(cfg):
    if cfg.k_values is not None:
        return sorted(cfg.k_values)
    k0 = cfg.kg_params().compton_k
    if k0 == 0:
        raise ConfigError("k_values are required when mass_M = 0")
    return [5.0 * k0, 10.0 * k0]


def cmd_widths(cfg):
    kind = cfg.kind or "discrete"
    t = cfg.times()
    rows = []
    if kind == "discrete":
        spec = cfg.chain_spec()
        modes = chain.mode_oscillators(spec, chain.exact_spectrum(spec))
        for j in _selected_modes(cfg, len(modes), range(len(modes))):
            m = modes[j]
            if m.is_free:
                values = gaussian.width_free(m.mass, m.hbar, cfg.sigma, t)
            else:
                values = gaussian.width_discrete(m, cfg.sigma, t)
            rows += [("sigma_j", j, ti, v, "ok") for ti, v in zip(t, values)]
    elif kind == "string":
        for j in _selected_modes(cfg, cfg.j_max + 1, range(1, 4)):
            if j < 1:
                raise ConfigError("string widths need j >= 1")
            values = gaussian.width_string(j, cfg.sigma, cfg.length_L, cfg.Omega, cfg.mu, cfg.hbar, t)
            rows += [("s_j", j, ti, v, "ok") for ti, v in zip(t, values)]
    elif kind == "kg":
        params = cfg.kg_params()
        quantity = "s_k" if cfg.reading == "consistent" else "s_k_squared"
        for k in _default_k_values(cfg):
            for ti in t:
                try:
                    rows.append((quantity, k, ti, gaussian.width_kg(k, params, ti, cfg.reading), "ok"))
                except NegativeRadicand:
                    rows.append((quantity, k, ti, float("nan"), "NEGATIVE_RADICAND"))
    else:
        raise ConfigError(f"widths kind must be discrete, string or kg, not {kind!r}")
    meta = _metadata(cfg, "widths", kind=kind)
    return ("quantity", "label", "t", "value", "status"), rows, meta


def _oracle_quanta(mode, sigma0, t, grid_points):
    spread = mode.hbar / (2.0 * mode.mass * mode.eff_frequency * sigma0)
    scale = max(sigma0, spread, oracle.ground_width(mode.mass, mode.eff_frequency, mode.hbar))
    y = oracle.grid_for_mode(mode, grid_points, scale=scale)
    states = oracle.evolve_through(oracle.gaussian_state(y, sigma0, hbar=mode.hbar), mode, t)
    return np.array([oracle.measure(s, "quanta", mode.mass, mode.eff_frequency, mode.hbar)
                     for s in states])


def cmd_quanta(cfg):
    kind = cfg.kind or "discrete"
    t = cfg.times()
    rows = []
    if kind == "discrete":
        spec = cfg.chain_spec()
        modes = chain.mode_oscillators(spec, chain.exact_spectrum(spec))
        labelled = [(j, modes[j]) for j in _selected_modes(cfg, len(modes), range(len(modes)))]
        closed = lambda j, m: gaussian.avg_quanta_discrete(m, gaussian.width_discrete(m, cfg.sigma, t))
    elif kind == "string":
        labelled = []
        for j in _selected_modes(cfg, cfg.j_max + 1, range(1, 4)):
            if j < 1:
                raise ConfigError("string quanta need j >= 1")
            kj = j * math.pi / cfg.length_L
            labelled.append((j, ModeOscillator(kj ** 2, cfg.Omega * kj, cfg.mu, cfg.hbar)))
        closed = lambda j, m: gaussian.avg_quanta_string(
            j, gaussian.width_string(j, cfg.sigma, cfg.length_L, cfg.Omega, cfg.mu, cfg.hbar, t),
            cfg.length_L, cfg.Omega, cfg.mu, cfg.hbar)
    else:
        raise ConfigError(f"quanta kind must be discrete or string, not {kind!r}")
    for j, m in labelled:
        if m.is_free:
            logger.warning("mode %d is free; quanta undefined, skipped", j)
            continue
        p = np.atleast_1d(closed(j, m))
        o = _oracle_quanta(m, cfg.sigma, t, cfg.grid_points)
        rows += [("N_j", j, ti, pv, ov, ov / pv if pv else float("nan"))
                 for ti, pv, ov in zip(t, p, o)]
    meta = _metadata(cfg, "quanta", kind=kind, oracle="crank-nicolson grid, <H>/(hbar w) - 1/2")
    return ("quantity", "label", "t", "formula_value", "oracle_value", "ratio"), rows, meta


def _vector(values, n, name):
    if values is None:
        return np.zeros(n)
    values = np.asarray(values, dtype=float)
    if values.shape != (n,):
        raise ConfigError(f"{name} must have {n} entries")
    return values


def cmd_kernel(cfg):
    kind = cfg.kind or "chain"
    t = cfg.times(positive=True)
    rows = []
    if kind == "chain":
        spec = cfg.chain_spec()
        spectrum = chain.exact_spectrum(spec)
        xf = _vector(cfg.x_final, spec.n_atoms, "x_final")
        xi = _vector(cfg.x_initial, spec.n_atoms, "x_initial")
        for ti in t:
            try:
                amp = kernel.chain_kernel(spec, spectrum, xf, xi, ti)
                rows.append((ti, amp.modulus, amp.phase, "ok"))
            except Caustic as exc:
                rows.append((ti, float("nan"), float("nan"), f"CAUSTIC(mode {exc.mode_index})"))
        columns = ("t", "modulus", "phase", "status")
    elif kind == "string":
        policy = kernel.TruncationPolicy(cfg.j_max)
        eta = cfg.x_final or []
        eta_prev = cfg.x_initial or []
        for ti in t:
            try:
                terms = kernel.string_kernel_exponent(policy, cfg.length_L, cfg.Omega, eta, eta_prev,
                                                      ti, cfg.mu, cfg.hbar, cfg.string_form)
                rows.append((ti, terms.exponent.real, terms.exponent.imag,
                             terms.log_prefactor.real, terms.log_prefactor.imag, "ok"))
            except Caustic as exc:
                nan = float("nan")
                rows.append((ti, nan, nan, nan, nan, f"CAUSTIC(mode {exc.mode_index})"))
        columns = ("t", "exponent_re", "exponent_im", "log_prefactor_re", "log_prefactor_im", "status")
    else:
        raise ConfigError(f"kernel kind must be chain or string, not {kind!r}")
    meta = _metadata(cfg, "kernel", kind=kind, string_form=cfg.string_form,
                     branch="principal square root, no Maslov correction")
    return columns, rows, meta


def cmd_figure1(cfg):
    params = cfg.kg_params()
    if params.compton_k == 0:
        raise ConfigError("figure1 needs mass_M > 0 (k is measured in units of Mc/hbar)")
    series = verify.figure1_series(params, cfg.reading, cfg.periods, max(cfg.t_points, 2001))
    rows, periods = [], {}
    for k in sorted(series):
        t, nu = series[k]
        periods[f"{k / params.compton_k:g}"] = crossing_period(t, nu)
        rows += [("nu_k", k, ti, v) for ti, v in zip(t, nu)]
    meta = _metadata(cfg, "figure1", k_in_units_of_Mc_over_hbar=[5, 10],
                     measured_periods=periods)
    return ("quantity", "label", "t", "value"), rows, meta


def _classical_on_grid(mode, force, t):
    sub = max(1, math.ceil(2000 / (t.size - 1)))
    ts = oracle.classical_driven_oscillator(mode, force, t[-1], sub * (t.size - 1))
    return ts.values[::sub]


def cmd_quench(cfg):
    t = cfg.times()
    if t[0] != 0.0:
        raise ConfigError("quench time grid must start at t_min = 0")
    if cfg.source:
        try:
            source = quench.SourceProfile.from_csv(cfg.source)
        except OSError as exc:
            raise ConfigError(f"cannot read source {cfg.source}: {exc}") from exc
    else:
        unit = chain.exact_spectrum(cfg.chain_spec()).mode_matrix[1]
        source = quench.SourceProfile.sites(unit)
    rows = []
    nan = float("nan")

    def add(quantity, label, formula, orc):
        for ti, pv, ov in zip(t, np.atleast_1d(formula), np.atleast_1d(orc)):
            rows.append((quantity, label, ti, pv, ov, ov / pv if pv else nan))

    if source.kind == "site":
        spec = ChainSpec(source.values.size, cfg.mass, cfg.omega, cfg.mass_term, cfg.hbar)
        spectrum = chain.exact_spectrum(spec)
        eps = quench.project_source(source, spectrum)
        for j, m in enumerate(chain.mode_oscillators(spec, spectrum)):
            if m.is_free:
                logger.warning("mode %d is free; FREE_MODE row skipped", j)
                continue
            add("a_j", j, quench.displacement_discrete(m, eps[j], t),
                _classical_on_grid(m, eps[j], t))
    elif source.kind == "xi":
        spec = ChainSpec(cfg.n_atoms)
        cmap = continuum.make_continuum_map(spec, cfg.length_L)
        F = quench.project_source(source, chain.exact_spectrum(spec), cmap)
        for j in range(1, min(cfg.j_max, spec.n_atoms - 1) + 1):
            kj = j * math.pi / cfg.length_L
            m = ModeOscillator(kj ** 2, cfg.Omega * kj, cfg.mu, cfg.hbar)
            add("alpha_j", j,
                quench.displacement_string(j, F[j], t, cfg.length_L, cfg.Omega, cfg.mu),
                _classical_on_grid(m, F[j], t))
    else:
        params = cfg.kg_params()
        for k, I_k in zip(source.labels, source.values):
            add("alpha_k", k, quench.displacement_kg(k, I_k, t, params), np.full(t.size, nan))
            add("nu_k", k, quench.quench_number_density(k, I_k, t, params), np.full(t.size, nan))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    meta = _metadata(cfg, "quench", source_kind=source.kind,
                     oracle="classical driven oscillator from rest (RK4)",
                     formula_gaps=["displacement factor 2 vs (1 - cos)",
                                         "density prefactor is the reciprocal of the normalisation"])
    return ("quantity", "label", "t", "formula_value", "oracle_value", "ratio"), rows, meta


def cmd_continuum(cfg):
    n_values = cfg.n_values or [50, 100, 200, 400]
    j_values = cfg.j_values or [1, 2, 3]
    rows = continuum.convergence_study(n_values, j_values, cfg.length_L, cfg.route)
    ratios = {}
    for j in j_values:
        errs = [r["abs_error"] for r in rows if r["j"] == j]
        ratios[str(j)] = [a / b for a, b in zip(errs, errs[1:])]
    columns = ("N", "j", "lambda_over_a2", "Lambda_j", "abs_error")
    meta = _metadata(cfg, "continuum", route=cfg.route, error_ratio_per_doubling=ratios)
    return columns, [tuple(r[c] for c in columns) for r in rows], meta


COMMANDS = {
    "spectrum": cmd_spectrum, "widths": cmd_widths, "quanta": cmd_quanta,
    "kernel": cmd_kernel, "figure1": cmd_figure1, "quench": cmd_quench,
    "continuum": cmd_continuum,
}


# ----------------------------------------------------------------- argument parsing

def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--output", "-o", help="write here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))
    g = common.add_argument_group("physics")
    g.add_argument("--n-atoms", dest="n_atoms", type=int)
    g.add_argument("--mass", type=float)
    g.add_argument("--omega", type=float)
    g.add_argument("--mass-term", dest="mass_term", type=float, help="chain mass term Mc^2/hbar")
    g.add_argument("--hbar", type=float)
    g.add_argument("--c", type=float)
    g.add_argument("--mass-M", dest="mass_M", type=float, help="field mass M")
    g.add_argument("--mu", type=float)
    g.add_argument("--Omega", type=float)
    g.add_argument("--sigma", type=float)
    g.add_argument("--sbar", type=float)
    g.add_argument("--length-L", dest="length_L", type=float)
    n = common.add_argument_group("numerics")
    n.add_argument("--kind")
    n.add_argument("--modes", type=_ints)
    n.add_argument("--k-values", dest="k_values", type=_floats)
    n.add_argument("--x-final", dest="x_final", type=_floats)
    n.add_argument("--x-initial", dest="x_initial", type=_floats)
    n.add_argument("--t-min", dest="t_min", type=float)
    n.add_argument("--t-max", dest="t_max", type=float)
    n.add_argument("--t-points", dest="t_points", type=int)
    n.add_argument("--j-max", dest="j_max", type=int)
    n.add_argument("--grid-points", dest="grid_points", type=int)
    n.add_argument("--reading", choices=gaussian.READINGS)
    n.add_argument("--string-form", dest="string_form", choices=kernel.STRING_FORMS)
    n.add_argument("--n-values", dest="n_values", type=_ints)
    n.add_argument("--j-values", dest="j_values", type=_ints)
    n.add_argument("--route", choices=("asymptotic", "exact"))
    n.add_argument("--periods", type=float)
    n.add_argument("--source", help="source profile CSV (label,value; '# kind: site|xi|k')")

    parser = argparse.ArgumentParser(prog="harmonic-chain", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _open_output(cfg):
    if cfg.output:
        return open(cfg.output, "w", newline="")
    return sys.stdout


def main(argv=None):
    logging.basicConfig(format="[%(name)s] %(levelname)s: %(message)s", level=logging.INFO)
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, vars(args))
        if args.subcommand == "verify":
            report = verify.run_battery()
            text = json.dumps(report, indent=1, sort_keys=True) + "\n"
            stream = _open_output(cfg)
            try:
                stream.write(text)
            finally:
                if stream is not sys.stdout:
                    stream.close()
            return EXIT_OK if report["oracle_checks_passed"] else EXIT_ORACLE
        columns, rows, meta = COMMANDS[args.subcommand](cfg)
        stream = _open_output(cfg)
        try:
            write_table(columns, rows, meta, cfg, stream)
        finally:
            if stream is not sys.stdout:
                stream.close()
    except (ConfigError, TypeError) as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except ChainError as exc:
        logger.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except ValueError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        sys.stderr.close()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
