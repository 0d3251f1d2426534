# models/field.py
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Tuple

import numpy as np

from models.seed import SeedSpec
from models.solve import Outcome, SolveStatus

class BoundaryType(Enum):
    PURE_SHOCK = "PureShock"
    ELLIPTICITY_LOSS = "EllipticityLoss"
    MIXED = "Mixed"

@dataclass(frozen=True)
class SpectralSample:
    x: float
    y: float
    lam: complex
    w0: complex
    jac: complex
    mu: complex
    alpha: float
    beta: float
    delta_disc: float
    status: SolveStatus

    @classmethod
    def failed(cls, x: float, y: float, status: SolveStatus) -> 'SpectralSample':
        """Sample for a node the solver could not fill; field values are zero sentinels"""
        return cls(x, y, 0j, 0j, 0j, 0j, 0.0, 0.0, 0.0, status)

    @property
    def converged(self) -> bool:
        return self.status.converged

    @property
    def abs_jac(self) -> float:
        """|J| at the node; NaN where no Jacobian was measured"""
        if self.converged:
            return abs(self.jac)
        if self.status.outcome == Outcome.SHOCK:
            return self.status.jacobian_modulus
        return math.nan

@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"Grid needs at least 2 nodes per axis, got {self.nx}x{self.ny}")
        if not self.x_min < self.x_max:
            raise ValueError(f"Grid needs x_min < x_max, got {self.x_min} >= {self.x_max}")
        if not self.y_min < self.y_max:
            raise ValueError(f"Grid needs y_min < y_max, got {self.y_min} >= {self.y_max}")

    @classmethod
    def parse(cls, text: str) -> 'GridSpec':
        """Parse 'x0:x1:nx,y0:y1:ny'"""
        try:
            x_part, y_part = text.split(',')
            x0, x1, nx = x_part.split(':')
            y0, y1, ny = y_part.split(':')
            return cls(float(x0), float(x1), float(y0), float(y1), int(nx), int(ny))
        except ValueError as e:
            raise ValueError(f"Bad grid {text!r}, expected 'x0:x1:nx,y0:y1:ny' ({e})")

    def x_values(self) -> List[float]:
        return np.linspace(self.x_min, self.x_max, self.nx).tolist()

    def y_values(self) -> List[float]:
        return np.linspace(self.y_min, self.y_max, self.ny).tolist()

    def nodes(self) -> List[Tuple[float, float]]:
        """Row-major node list, y is the slow index"""
        xs = self.x_values()
        return [(x, y) for y in self.y_values() for x in xs]

    @property
    def size(self) -> int:
        return self.nx * self.ny

    def to_dict(self) -> Dict[str, Any]:
        return {
            'x_min': self.x_min,
            'x_max': self.x_max,
            'y_min': self.y_min,
            'y_max': self.y_max,
            'nx': self.nx,
            'ny': self.ny
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridSpec':
        return cls(float(data['x_min']), float(data['x_max']),
                   float(data['y_min']), float(data['y_max']),
                   int(data['nx']), int(data['ny']))

@dataclass(frozen=True)
class GridField:
    grid: GridSpec
    seed: SeedSpec
    samples: Tuple[SpectralSample, ...]

    def __post_init__(self):
        object.__setattr__(self, 'samples', tuple(self.samples))
        if len(self.samples) != self.grid.size:
            raise ValueError(f"GridField needs {self.grid.size} samples, got {len(self.samples)}")

    def sample_at(self, i: int, j: int) -> SpectralSample:
        """Sample at column i (x index) and row j (y index)"""
        return self.samples[j * self.grid.nx + i]

    def converged_samples(self) -> List[SpectralSample]:
        return [s for s in self.samples if s.converged]

    def outcome_counts(self) -> Dict[str, int]:
        counts = {outcome.value: 0 for outcome in Outcome}
        for sample in self.samples:
            counts[sample.status.outcome.value] += 1
        return counts

    def as_arrays(self) -> Dict[str, np.ndarray]:
        shape = (self.grid.ny, self.grid.nx)
        return {
            'x': np.array([s.x for s in self.samples]).reshape(shape),
            'y': np.array([s.y for s in self.samples]).reshape(shape),
            'lambda': np.array([s.lam for s in self.samples], dtype=complex).reshape(shape),
            'mu': np.array([s.mu for s in self.samples], dtype=complex).reshape(shape),
            'alpha': np.array([s.alpha for s in self.samples]).reshape(shape),
            'beta': np.array([s.beta for s in self.samples]).reshape(shape),
            'delta_disc': np.array([s.delta_disc for s in self.samples]).reshape(shape),
            'abs_jac': np.array([s.abs_jac for s in self.samples]).reshape(shape),
            'status': np.array([s.status.outcome.value for s in self.samples]).reshape(shape),
        }
