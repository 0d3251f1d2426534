# models/run.py
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from models.field import GridSpec
from models.report import FDConfig
from models.seed import SeedSpec
from models.solve import SolverConfig

class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"

@dataclass(frozen=True)
class RunConfig:
    seed: SeedSpec
    solver: SolverConfig = SolverConfig()
    fd: FDConfig = FDConfig()
    grid: Optional[GridSpec] = None
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[str] = None

    def require_grid(self, command: str) -> GridSpec:
        if self.grid is None:
            raise ValueError(f"'{command}' needs a grid (--grid x0:x1:nx,y0:y1:ny or a config file)")
        return self.grid
