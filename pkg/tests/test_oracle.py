import math

import numpy as np
import pytest

from harmonic_chain import oracle
from harmonic_chain.chain import ModeOscillator
from harmonic_chain.errors import BoundaryLeak

UNIT = ModeOscillator.harmonic(1.0)


def test_grid_and_states():
    y = oracle.grid_for_mode(UNIT, 1024)
    assert y.size == 1024
    assert oracle.ground_state(y, UNIT).norm == pytest.approx(1.0, abs=1e-12)
    assert oracle.measure(oracle.gaussian_state(y, 0.8), "variance") == pytest.approx(0.64, rel=1e-10)
    with pytest.raises(ValueError):
        oracle.make_grid(5.0, 16)


def test_task_validation():
    with pytest.raises(ValueError):
        oracle.PropagationTask(1.0, 1.0, 1.0, n_steps=10)


def test_ground_state_is_stationary():
    y = oracle.grid_for_mode(UNIT, 1024)
    psi0 = oracle.discrete_ground_state(y, UNIT)
    out = oracle.propagate_grid(psi0, oracle.PropagationTask.for_mode(UNIT, 1.0))
    assert abs(out.overlap(psi0)) >= 1 - 1e-6
    assert out.norm == pytest.approx(1.0, abs=1e-10)


def test_coherent_state_oscillates():
    y = oracle.grid_for_mode(UNIT)
    psi0 = oracle.ground_state(y, UNIT, center=1.0)
    out = oracle.propagate_grid(psi0, oracle.PropagationTask.for_mode(UNIT, math.pi))
    assert oracle.measure(out, "center") == pytest.approx(-1.0, abs=1e-5)


def test_free_spreading_matches_textbook():
    y = oracle.make_grid(40.0, 4096)
    psi0 = oracle.gaussian_state(y, 1.0)
    free = ModeOscillator(0.0, 0.0)
    out = oracle.propagate_grid(psi0, oracle.PropagationTask.for_mode(free, 1.0))
    ref = oracle.textbook_width(1.0, 0.0, 1.0, 1.0, 1.0)
    assert math.sqrt(oracle.measure(out, "variance")) == pytest.approx(ref, rel=1e-5)


def test_boundary_leak():
    y = oracle.make_grid(3.0, 512)
    psi0 = oracle.gaussian_state(y, 0.3, center=2.5, momentum=20.0)
    with pytest.raises(BoundaryLeak):
        oracle.propagate_grid(psi0, oracle.PropagationTask(1.0, 0.0, 1.0, 200))


def test_kernel_quadrature_matches_grid():
    y = oracle.grid_for_mode(UNIT, 2048)
    psi0 = oracle.gaussian_state(y, 0.7, center=0.5)
    grid = oracle.propagate_grid(psi0, oracle.PropagationTask.for_mode(UNIT, 0.7))
    quad = oracle.apply_kernel_quadrature(UNIT, psi0, 0.7)
    assert grid.l2_distance(quad) < 1e-4


def test_composition():
    from harmonic_chain.kernel import mode_kernel
    direct = mode_kernel(UNIT, 0.4, -0.7, 0.6).value
    composed = oracle.compose_kernels_gauss_hermite(UNIT, 0.4, -0.7, 0.3, 0.3)
    assert composed == pytest.approx(direct, rel=1e-10)


def test_classical_oscillator():
    zero = oracle.classical_driven_oscillator(UNIT, 0.0, 3.0)
    assert np.all(zero.values == 0)
    driven = oracle.classical_driven_oscillator(UNIT, 1.0, math.pi)
    assert driven.values[-1] == pytest.approx(2.0, abs=1e-8)
    assert np.allclose(driven.values, 1 - np.cos(driven.t), atol=1e-8)
