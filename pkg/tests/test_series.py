import numpy as np
import pytest

from harmonic_chain.series import TimeSeries, crossing_period


def test_time_series_validation():
    ts = TimeSeries("x", 1, [0.0, 1.0], [2.0, 3.0])
    assert len(ts) == 2 and list(ts.rows()) == [(0.0, 2.0), (1.0, 3.0)]
    with pytest.raises(ValueError):
        TimeSeries("x", 1, [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        TimeSeries("x", 1, [0.0, 1.0], [1.0])


def test_crossing_period():
    t = np.linspace(0, 20, 5001)
    assert crossing_period(t, np.sin(3 * t) ** 2) == pytest.approx(np.pi / 3, rel=1e-4)
    assert np.isnan(crossing_period(t, t))
