"""Exception hierarchy shared by all modules."""


class ChainError(Exception):
    """Base class for every numerical failure raised by this package."""


class EvaluationUnstable(ChainError):
    """Closed-form evaluation requested too close to a branch point."""


class SolverFailure(ChainError):
    """The eigensolver did not converge."""


class Caustic(ChainError):
    """The harmonic kernel degenerates to a delta distribution (sin(w t) ~ 0).

    ``mode_index`` names the offending mode (or grid node) when known.
    """

    def __init__(self, message, mode_index=None):
        super().__init__(message)
        self.mode_index = mode_index


class SingularK(ChainError):
    """A 1/k or 1/E_k factor is evaluated at a point where it diverges."""


class NegativeRadicand(ChainError):
    """A width formula produced a negative number under the square root."""


class FreeModeUnsupported(ChainError):
    """A closed form that divides by the mode frequency was given a free mode."""


class BoundaryLeak(ChainError):
    """Grid propagation pushed amplitude onto the edges of the grid."""
