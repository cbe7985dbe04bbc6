"""Exception hierarchy for direktor.

Every malformed input or unusable parameter regime maps to a named error;
library code never lets a bare numpy/scipy exception escape for a condition
the caller could reasonably hit.
"""


class DirektorError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------------------
# network construction / validation


class NetworkValidationError(DirektorError):
    pass


class NonHermitianCoupling(NetworkValidationError):
    pass


class AsymmetricSqueezing(NetworkValidationError):
    pass


class DanglingIndex(NetworkValidationError):
    pass


class DuplicatePort(NetworkValidationError):
    pass


class IndexOutOfRange(DirektorError):
    pass


# ---------------------------------------------------------------------------
# frequency-domain engine


class SingularAtFrequency(DirektorError):
    """Scattering evaluation requested exactly at a marginally stable pole."""


class NoPortOnMode(DirektorError):
    pass


class EliminationNotSupported(DirektorError):
    """Adiabatic elimination asked for a mode with interactions outside the
    supported pattern (membership in a dissipator, self-squeezing, detuning)."""


class WeakDampingWarning(UserWarning):
    """Adiabatic elimination requested for a mode whose damping does not
    dominate the other rates; the reduced model may be inaccurate."""


# ---------------------------------------------------------------------------
# noise analysis


class UnstableNetwork(DirektorError):
    pass


class ZeroGain(DirektorError):
    pass


# ---------------------------------------------------------------------------
# matching / design


class NullDissipator(DirektorError):
    pass


class InfeasibleCooperativity(DirektorError):
    pass


class NotConverged(DirektorError):
    """Numeric matching stopped above tolerance.  Carries the best solution
    found in ``solution``."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class UnstableDuringSearch(DirektorError):
    pass


# ---------------------------------------------------------------------------
# Fock-space oracle


class DimensionMismatch(DirektorError):
    pass


class StepSizeUnderflow(DirektorError):
    pass


class TruncationLeak(DirektorError):
    """Population of the top Fock level exceeded the accepted bound, so the
    truncated evolution can no longer be trusted."""


class NotFactorizable(DirektorError):
    pass


# ---------------------------------------------------------------------------
# configuration / CLI


class ConfigError(DirektorError):
    """Config document rejected; message carries line/column when known."""
