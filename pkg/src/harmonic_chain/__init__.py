"""Exact propagators of the free-ends harmonic chain and their continuum limits.

Modules: ``chain`` (coupling matrix and spectrum), ``kernel`` (propagators),
``gaussian`` (minimum-uncertainty states), ``quench`` (sudden linear source),
``continuum`` (scaling to strings and fields), ``oracle`` (grid numerics used
to check the closed forms) and ``cli``.
"""

from .chain import (ChainSpec, CouplingMatrix, ModeOscillator, SpectralDecomposition,
                    asymptotic_eigenvalues, build_coupling_matrix, char_polys_closed,
                    char_polys_recursive, exact_spectrum, mode_oscillators, secular_residual)
from .continuum import ContinuumMap, KGParams, KGrid, make_continuum_map, make_kgrid
from .errors import (BoundaryLeak, Caustic, ChainError, EvaluationUnstable, FreeModeUnsupported,
                     NegativeRadicand, SingularK, SolverFailure)
from .kernel import ComplexAmplitude, TruncationPolicy, chain_kernel, mode_kernel
from .series import TimeSeries

__version__ = "0.1.0"
