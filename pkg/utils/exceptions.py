# utils/exceptions.py
from typing import Optional

class RigidLabError(Exception):
    """Base class for every error raised by rigidlab"""

class InvalidSeedError(RigidLabError, ValueError):
    """Seed parameters violate the family invariants"""

class OutsideSeedDomainError(RigidLabError):
    """Seed evaluated on a branch cut, a pole, or outside its strip"""

    def __init__(self, message: str, w: complex = None):
        super().__init__(message)
        self.w = w

class UnsupportedCompositionError(RigidLabError):
    """a*f + b leaves the closed-form catalog"""

class UnsupportedFamilyError(RigidLabError):
    """Operation is not defined for this seed family"""

class OutsideDomainError(RigidLabError):
    """Point lies outside the transform's domain for a closed-form formula"""

class PoleError(RigidLabError):
    pass

class PoleAtMinusIError(PoleError):
    pass

class PoleAtOneError(PoleError):
    pass

class NonConvergenceError(RigidLabError):
    """Iteration budget exhausted"""

    def __init__(self, message: str, iterations: int = 0, residual: float = float('inf')):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual

class SolverError(RigidLabError):
    """Failure of the implicit solve; carries the status and the last iterate"""

    def __init__(self, message: str, status=None, lam: Optional[complex] = None,
                 x_reached: Optional[float] = None):
        super().__init__(message)
        self.status = status
        self.lam = lam
        self.x_reached = x_reached

    @property
    def outcome(self):
        return self.status.outcome if self.status is not None else None

class EquivarianceSideError(SolverError):
    """Solver failure on one side of the affine equivariance identity"""

    def __init__(self, side: str, cause: SolverError):
        super().__init__(f"{side} side failed: {cause}", cause.status, cause.lam, cause.x_reached)
        self.side = side
        self.cause = cause
