# models/solve.py
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

from config.settings import settings

class Outcome(Enum):
    CONVERGED = "Converged"
    SHOCK = "Shock"
    ELLIPTICITY_LOSS = "EllipticityLoss"
    OUTSIDE_SEED_DOMAIN = "OutsideSeedDomain"
    NON_CONVERGENCE = "NonConvergence"

@dataclass(frozen=True)
class SolveStatus:
    outcome: Outcome
    jacobian_modulus: float = 0.0
    im_lambda: float = 0.0

    @property
    def converged(self) -> bool:
        return self.outcome == Outcome.CONVERGED

    def to_dict(self) -> Dict[str, Any]:
        return {
            'outcome': self.outcome.value,
            'jacobian_modulus': self.jacobian_modulus,
            'im_lambda': self.im_lambda
        }

@dataclass(frozen=True)
class SolverConfig:
    newton_tol: float = 1e-13
    shock_tol: float = 1e-10
    max_newton_iters: int = 40
    continuation_steps: int = 64

    def __post_init__(self):
        if self.newton_tol <= 0 or self.shock_tol <= 0:
            raise ValueError("Solver tolerances must be positive")
        if self.max_newton_iters < 1 or self.continuation_steps < 1:
            raise ValueError("Solver iteration counts must be positive")

    @classmethod
    def from_settings(cls) -> 'SolverConfig':
        return cls(**settings.get_solver_config())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'newton_tol': self.newton_tol,
            'shock_tol': self.shock_tol,
            'max_newton_iters': self.max_newton_iters,
            'continuation_steps': self.continuation_steps
        }

@dataclass(frozen=True)
class SolveResult:
    """A converged transform value with its characteristic data"""
    lam: complex
    w0: complex
    jac: complex
    status: SolveStatus
    iterations: int = 0
    method: str = "closed_form"
