import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from harmonic_chain import gaussian
from harmonic_chain.chain import ModeOscillator
from harmonic_chain.continuum import KGParams
from harmonic_chain.errors import FreeModeUnsupported, NegativeRadicand

UNIT = ModeOscillator.harmonic(1.0)


def test_width_discrete_examples():
    assert gaussian.width_discrete(UNIT, 1.3, 0.0) == 1.3
    assert gaussian.width_discrete(UNIT, 1.3, math.pi) == pytest.approx(1.3, abs=1e-12)
    assert gaussian.width_discrete(UNIT, 1.0, math.pi / 2) == pytest.approx(1 / math.sqrt(2))
    with pytest.raises(FreeModeUnsupported):
        gaussian.width_discrete(ModeOscillator(0.0, 0.0), 1.0, 1.0)


@given(st.floats(0.2, 5.0), st.floats(0.3, 3.0), st.floats(0.0, 20.0))
def test_width_discrete_periodic(w, sigma0, t):
    mode = ModeOscillator.harmonic(w)
    a = gaussian.width_discrete(mode, sigma0, t)
    b = gaussian.width_discrete(mode, sigma0, t + math.pi / w)
    assert a == pytest.approx(b, rel=1e-9)


def test_width_free():
    assert gaussian.width_free(1.0, 1.0, 1.0, 0.0) == 1.0
    assert gaussian.width_free(1.0, 1.0, 1.0, 1.0) == pytest.approx(math.sqrt(1.5))
    t = 1e6
    assert gaussian.width_free(1.0, 1.0, 0.8, t) == pytest.approx(t / (math.sqrt(2) * 0.8), rel=1e-9)
    ts = np.linspace(0, 5, 50)
    assert np.all(np.diff(gaussian.width_free(2.0, 1.0, 0.5, ts)) > 0)


def test_width_string():
    assert gaussian.width_string(1, 0.9, math.pi, 1.0, 1.0, 1.0, 0.0) == 0.9
    assert gaussian.width_string(1, 1.0, math.pi, 1.0, 1.0, 1.0, math.pi / 2) == pytest.approx(1 / math.sqrt(2))
    # bracket zero: hbar L / (sqrt2 Omega mu s^2 j pi) = 1
    s = math.sqrt(1.0 / (math.sqrt(2.0)))
    ts = np.linspace(0, 4, 9)
    assert np.allclose(gaussian.width_string(1, s, math.pi, 1.0, 1.0, 1.0, ts), s)


def test_width_kg_readings():
    p = KGParams(mass_M=1.0)
    assert gaussian.width_kg(3.0, p, 0.0, "consistent") == p.sbar
    assert gaussian.width_kg(3.0, p, 0.0, "verbatim") == p.sbar
    e = math.sqrt(10.0)
    assert gaussian.width_kg(3.0, p, math.pi / e, "consistent") == pytest.approx(p.sbar)
    # E_k = sqrt 2 at k = 1, M = 1: bracket vanishes
    assert gaussian.width_kg(1.0, p, (math.pi / 2) / math.sqrt(2), "consistent") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gaussian.width_kg(1.0, p, 0.1, "other")


def test_width_kg_verbatim_negative_radicand():
    p = KGParams(mass_M=1.0, sbar=0.5)
    t = 1.5 * math.pi / math.sqrt(2.0)
    with pytest.raises(NegativeRadicand):
        gaussian.width_kg(1.0, p, t, "verbatim")


def test_density_discrete():
    assert gaussian.density_discrete([1, 1, 1], [0, 0, 0]) == pytest.approx((2 * math.pi) ** -1.5)
    assert gaussian.density_discrete([1 / math.sqrt(2)], [1.0]) == pytest.approx(0.20755, abs=1e-5)
    total, _ = integrate.dblquad(lambda y1, y0: gaussian.density_discrete([0.7, 1.9], [y0, y1]),
                                 -20, 20, -20, 20, epsabs=1e-13, epsrel=1e-12)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_avg_quanta():
    assert gaussian.avg_quanta_discrete(UNIT, 1.0) == 0.75
    assert gaussian.avg_quanta_string(1, 1.0, math.pi, 1.0, 1.0, 1.0) == 0.75
    big = gaussian.avg_quanta_discrete(UNIT, np.array([10.0, 20.0]))
    assert big[1] / big[0] == pytest.approx(4.0, rel=1e-2)
    with pytest.raises(FreeModeUnsupported):
        gaussian.avg_quanta_discrete(ModeOscillator(0.0, 0.0), 1.0)


def test_closed_form_quanta_not_constant():
    q = gaussian.avg_quanta_discrete(UNIT, gaussian.width_discrete(UNIT, 1.0, np.linspace(0, 1.5, 5)))
    assert np.ptp(q) > 0.1


def test_number_density():
    # bracket zero (k = 1, M = 1) keeps s_k and nu constant
    p = KGParams()
    nu = gaussian.number_density_kg(1.0, p, np.linspace(0, 5, 11))
    assert np.ptp(nu) < 1e-12
    hi = gaussian.number_density_kg(10.0, p, np.linspace(0, 1, 200))
    assert np.all(np.isfinite(hi)) and np.ptp(hi) > 0
