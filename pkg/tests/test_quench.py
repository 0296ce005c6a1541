import math

import numpy as np
import pytest
from scipy import integrate

from harmonic_chain import chain, quench
from harmonic_chain.chain import ChainSpec, ModeOscillator
from harmonic_chain.continuum import KGParams, make_continuum_map
from harmonic_chain.errors import FreeModeUnsupported, SingularK

UNIT = ModeOscillator.harmonic(1.0)


def test_project_source():
    spec = ChainSpec(5)
    spectrum = chain.exact_spectrum(spec)
    uniform = quench.project_source(quench.SourceProfile.sites(np.full(5, 0.3)), spectrum)
    assert uniform[0] == pytest.approx(0.3 * math.sqrt(5))
    assert np.allclose(uniform[1:], 0, atol=1e-12)
    row = quench.project_source(quench.SourceProfile.sites(spectrum.mode_matrix[2]), spectrum)
    assert np.allclose(row, np.eye(5)[2], atol=1e-12)
    assert np.all(quench.project_source(quench.SourceProfile.sites(np.zeros(5)), spectrum) == 0)
    with pytest.raises(ValueError):
        quench.project_source(quench.SourceProfile.sites(np.zeros(4)), spectrum)


def test_source_profile_csv(tmp_path):
    path = tmp_path / "src.csv"
    path.write_text("# kind: xi\nlabel,value\n1.0,0.5\n0.0,0.25\n")
    src = quench.SourceProfile.from_csv(path)
    assert src.kind == "xi"
    assert np.array_equal(src.labels, [0.0, 1.0])
    assert np.array_equal(src.values, [0.25, 0.5])
    with pytest.raises(ValueError):
        quench.SourceProfile("bogus", [0], [1])


def test_xi_projection_of_mode_function():
    spec = ChainSpec(40)
    spectrum = chain.exact_spectrum(spec)
    cmap = make_continuum_map(spec, math.pi)
    profile = quench.SourceProfile("xi", cmap.sites, spectrum.mode_matrix[3] / math.sqrt(cmap.a))
    assert np.allclose(quench.project_source(profile, spectrum, cmap), np.eye(40)[3], atol=1e-10)


def test_displacement_discrete():
    assert quench.displacement_discrete(UNIT, 1.0, 0.0) == 0.0
    assert quench.displacement_discrete(UNIT, 1.0, -1.0) == 0.0
    assert quench.displacement_discrete(UNIT, 1.0, math.pi) == pytest.approx(1.0)
    with pytest.raises(FreeModeUnsupported):
        quench.displacement_discrete(ModeOscillator(0.0, 0.0), 1.0, 1.0)


def test_displaced_density():
    y = np.linspace(-3, 3, 7)
    assert np.allclose(quench.displaced_density(UNIT, y, 2.0, 0.0),
                       quench.displaced_density(UNIT, y, 0.0, 0.0))
    total, _ = integrate.quad(lambda v: quench.displaced_density(UNIT, v, 1.1, 0.7), -30, 30,
                              epsabs=1e-13, epsrel=1e-13, points=[-0.5, 0.0])
    assert total == pytest.approx(1.0, abs=1e-10)
    amp = quench.displaced_amplitude(UNIT, y, 1.1, 0.7)
    assert np.allclose(np.abs(amp) ** 2, quench.displaced_density(UNIT, y, 1.1, 0.7))
    assert quench.raw_density_prefactor(UNIT) == pytest.approx(math.sqrt(math.pi))


def test_displacement_string_and_kg():
    assert quench.displacement_string(1, 1.0, 0.0, math.pi, 1.0, 1.0) == 0.0
    assert quench.displacement_string(1, 1.0, math.pi, math.pi, 1.0, 1.0) == pytest.approx(1.0)
    p = KGParams(mass_M=1.0)
    assert quench.displacement_kg(0.0, 1.0, math.pi, p) == pytest.approx(0.5)
    assert quench.displacement_kg(2.0, 1.0, 0.0, p) == 0.0
    assert quench.displacement_kg(2.0, 1.0, 0.0, p, massless=True) == 0.0
    massless = KGParams(mass_M=0.0)
    with pytest.raises(SingularK):
        quench.displacement_kg(0.0, 1.0, 1.0, massless, massless=True)
    with pytest.raises(SingularK):
        quench.displacement_kg(0.0, 1.0, 1.0, massless)


def test_quench_number_density():
    p = KGParams()
    assert quench.quench_number_density(2.0, 1.0, 0.0, p) == 0.0
    e = math.sqrt(5.0)
    peak = quench.quench_number_density(2.0, 1.3, math.pi / e, p)
    assert peak == pytest.approx(1.3 ** 2 / (4 * e ** 2))
