# tests/conftest.py
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Keep the console quiet; file logs still go to LOG_DIR
os.environ.setdefault('LOG_TO_CONSOLE', 'false')

import pytest
from click.testing import CliRunner

from models.field import GridSpec
from models.report import FDConfig
from models.seed import SeedSpec
from models.solve import SolverConfig

@pytest.fixture
def cfg():
    return SolverConfig()

@pytest.fixture
def fd():
    return FDConfig()

@pytest.fixture
def delta_seed():
    return SeedSpec.affine_delta(1.0)

@pytest.fixture
def eps_seed():
    return SeedSpec.epsilon(0.5)

@pytest.fixture
def exp_seed():
    return SeedSpec.exponential()

@pytest.fixture
def cauchy_seed():
    return SeedSpec.cauchy_kernel(1.0)

@pytest.fixture
def nonholo_seed():
    return SeedSpec.non_holo_test(1.0, 0.2)

@pytest.fixture
def small_grid():
    return GridSpec(0.0, 1.0, -1.0, 1.0, 3, 3)

@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "output"
    path.mkdir()
    return path

@pytest.fixture
def cli_runner():
    # stdout must stay separate from the stderr console summary
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()
