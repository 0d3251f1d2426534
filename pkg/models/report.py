# models/report.py
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Tuple

from config.settings import settings

class FDScheme(Enum):
    CENTRAL2 = "Central2"
    CENTRAL4 = "Central4"

    @classmethod
    def from_name(cls, name: str) -> 'FDScheme':
        for scheme in cls:
            if scheme.value.lower() == name.strip().lower():
                return scheme
        raise ValueError(f"Unknown finite-difference scheme: {name!r}")

@dataclass(frozen=True)
class FDConfig:
    step: float = 1e-5
    scheme: FDScheme = FDScheme.CENTRAL2

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError(f"FD step must be positive, got {self.step}")

    @classmethod
    def from_settings(cls) -> 'FDConfig':
        fd = settings.get_fd_config()
        return cls(fd['step'], FDScheme.from_name(fd['scheme']))

@dataclass(frozen=True)
class ResidualReport:
    name: str
    point: Tuple[float, float]
    value: complex
    fd_step: float = 0.0
    detail: Dict[str, complex] = field(default_factory=dict)

    @property
    def magnitude(self) -> float:
        return abs(self.value)

class Suite(Enum):
    RIGIDITY = "rigidity"
    DILATATION = "dilatation"
    OBSTRUCTION = "obstruction"
    PROPAGATOR = "propagator"
    EQUIVARIANCE = "equivariance"
    ALL = "all"

@dataclass(frozen=True)
class CheckResult:
    name: str
    seed: str
    point: Tuple[float, float]
    magnitude: float
    tolerance: float
    passed: bool
    skipped: bool = False
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'seed': self.seed,
            'point': [self.point[0], self.point[1]],
            'magnitude': self.magnitude,
            'tolerance': self.tolerance,
            'pass': self.passed
        }
