"""Sampled (t, value) records passed between the library and the CLI."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    """A named, labelled time series.

    ``label`` is a mode index or a wavenumber. ``metadata`` echoes the
    parameters used to produce the samples.
    """

    quantity: str
    label: object
    t: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        values = np.asarray(self.values)
        if t.shape != values.shape[:1]:
            raise ValueError("t and values must have the same length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("t must be strictly increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.t.size

    def rows(self):
        for t, v in zip(self.t, self.values):
            yield float(t), v


def crossing_period(t, values, level=None):
    """Mean period from upward crossings of ``level`` (default: the mid-range).

    Crossing times are located by linear interpolation between samples.
    Returns nan when fewer than two crossings are found.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if level is None:
        level = 0.5 * (v.max() + v.min())
    d = v - level
    idx = np.flatnonzero((d[:-1] < 0) & (d[1:] >= 0))
    if idx.size < 2:
        return float("nan")
    frac = -d[idx] / (d[idx + 1] - d[idx])
    crossings = t[idx] + frac * (t[idx + 1] - t[idx])
    return float((crossings[-1] - crossings[0]) / (crossings.size - 1))
