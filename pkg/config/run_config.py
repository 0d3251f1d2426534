# config/run_config.py
import json
from typing import Any, Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.field import GridSpec
from models.report import FDConfig, FDScheme
from models.run import OutputFormat, RunConfig
from models.seed import SeedSpec
from models.solve import SolverConfig
from utils.exceptions import InvalidSeedError
from utils.logger import get_logger

logger = get_logger(__name__)

class SeedModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    family: str
    params: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode='after')
    def check_family_invariants(self):
        self.to_spec()
        return self

    def to_spec(self) -> SeedSpec:
        try:
            return SeedSpec.from_dict({'family': self.family, 'params': self.params})
        except InvalidSeedError as e:
            raise ValueError(str(e))

class SolverModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    newton_tol: Optional[float] = Field(default=None, gt=0)
    shock_tol: Optional[float] = Field(default=None, gt=0)
    max_newton_iters: Optional[int] = Field(default=None, ge=1)
    continuation_steps: Optional[int] = Field(default=None, ge=1)

class FDModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    step: Optional[float] = Field(default=None, gt=0)
    scheme: Optional[str] = None

    @field_validator('scheme')
    @classmethod
    def check_scheme(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            FDScheme.from_name(value)
        return value

class GridModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int = Field(ge=2)
    ny: int = Field(ge=2)

    @model_validator(mode='after')
    def check_ranges(self):
        if not self.x_min < self.x_max:
            raise ValueError("grid needs x_min < x_max")
        if not self.y_min < self.y_max:
            raise ValueError("grid needs y_min < y_max")
        return self

    def to_spec(self) -> GridSpec:
        return GridSpec(self.x_min, self.x_max, self.y_min, self.y_max, self.nx, self.ny)

class RunConfigModel(BaseModel):
    """Schema of the optional JSON run configuration file"""
    model_config = ConfigDict(extra='forbid')

    seed: Optional[Union[str, SeedModel]] = None
    solver: SolverModel = Field(default_factory=SolverModel)
    fd: FDModel = Field(default_factory=FDModel)
    grid: Optional[Union[str, GridModel]] = None
    format: Optional[Literal['csv', 'json']] = None
    out: Optional[str] = None

    @field_validator('seed')
    @classmethod
    def check_seed_text(cls, value):
        if isinstance(value, str):
            try:
                SeedSpec.parse(value)
            except InvalidSeedError as e:
                raise ValueError(str(e))
        return value

    @field_validator('grid')
    @classmethod
    def check_grid_text(cls, value):
        if isinstance(value, str):
            GridSpec.parse(value)
        return value

    def seed_spec(self) -> Optional[SeedSpec]:
        if self.seed is None:
            return None
        if isinstance(self.seed, str):
            return SeedSpec.parse(self.seed)
        return self.seed.to_spec()

    def grid_spec(self) -> Optional[GridSpec]:
        if self.grid is None:
            return None
        if isinstance(self.grid, str):
            return GridSpec.parse(self.grid)
        return self.grid.to_spec()

def load_run_config_file(path: str) -> RunConfigModel:
    """Parse and validate a JSON run configuration file"""
    with open(path, 'r', encoding='utf-8') as handle:
        data = json.load(handle)
    model = RunConfigModel.model_validate(data)
    logger.info(f"Loaded run configuration: {path}")
    return model

def _pick(flag: Any, file_value: Any, default: Any) -> Any:
    if flag is not None:
        return flag
    if file_value is not None:
        return file_value
    return default

def build_run_config(model: Optional[RunConfigModel] = None, seed: Optional[str] = None,
                     grid: Optional[str] = None, output_format: Optional[str] = None,
                     out: Optional[str] = None) -> RunConfig:
    """Merge flags over file values over environment defaults"""
    model = model or RunConfigModel()

    if seed is not None:
        seed_spec = SeedSpec.parse(seed)
    else:
        seed_spec = model.seed_spec()
    if seed_spec is None:
        raise InvalidSeedError("A seed is required (--seed or the config file's 'seed')")

    solver_defaults = SolverConfig.from_settings()
    solver = SolverConfig(
        newton_tol=_pick(None, model.solver.newton_tol, solver_defaults.newton_tol),
        shock_tol=_pick(None, model.solver.shock_tol, solver_defaults.shock_tol),
        max_newton_iters=_pick(None, model.solver.max_newton_iters, solver_defaults.max_newton_iters),
        continuation_steps=_pick(None, model.solver.continuation_steps, solver_defaults.continuation_steps)
    )

    fd_defaults = FDConfig.from_settings()
    fd = FDConfig(
        step=_pick(None, model.fd.step, fd_defaults.step),
        scheme=FDScheme.from_name(model.fd.scheme) if model.fd.scheme else fd_defaults.scheme
    )

    grid_spec = GridSpec.parse(grid) if grid is not None else model.grid_spec()
    fmt = OutputFormat(_pick(output_format, model.format, OutputFormat.CSV.value))

    return RunConfig(seed_spec, solver, fd, grid_spec, fmt, _pick(out, model.out, None))
