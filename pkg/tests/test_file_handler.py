# tests/test_file_handler.py
import json
import math

import pytest

from models.field import GridSpec
from models.report import Suite
from models.run import OutputFormat
from services.field_service import FieldService
from services.solver_service import SolverService
from services.verification_service import VerificationService
from utils.file_handler import GRID_HEADER, FieldExporter, format_number

@pytest.fixture
def mixed_field(delta_seed):
    # x = -1 column is a shock line
    return FieldService.sample_grid(delta_seed, GridSpec(-1.0, 1.0, -1.0, 1.0, 3, 2))

class TestGridExport:
    def test_csv_layout(self, delta_seed, small_grid):
        text = FieldExporter.grid_csv(FieldService.sample_grid(delta_seed, small_grid))
        lines = text.splitlines()
        assert lines[0] == ",".join(GRID_HEADER)
        assert len(lines) == 10
        assert lines[1].split(',')[:4] == ['0', '-1', '-1', '1']
        assert lines[1].endswith(',Converged')

    def test_failed_nodes_leave_blank_cells(self, mixed_field):
        first = FieldExporter.grid_csv(mixed_field).splitlines()[1].split(',')
        assert first[0] == '-1'
        assert first[2:9] == [''] * 7
        assert first[9] == '0'
        assert first[-1] == 'Shock'

    def test_jacobian_blank_without_a_shock(self, eps_seed):
        field = FieldService.sample_grid(eps_seed, GridSpec(-1.0, 3.0, -5.0, 5.0, 5, 11))
        rows = [line.split(',') for line in FieldExporter.grid_csv(field).splitlines()[1:]]
        document = json.loads(FieldExporter.grid_json(field))
        seen = set()
        for sample, row, entry in zip(field.samples, rows, document['samples']):
            seen.add(row[-1])
            if sample.converged or row[-1] == 'Shock':
                assert row[9] != ''
                assert entry['abs_jac'] is not None
            else:
                assert row[9] == ''
                assert entry['abs_jac'] is None
        assert {'Converged', 'Shock', 'EllipticityLoss', 'OutsideSeedDomain'} <= seen

    def test_full_precision(self):
        assert float(format_number(0.1 + 0.2)) == 0.1 + 0.2
        assert format_number(1.25) == '1.25'

    def test_json_round_trip(self, mixed_field, output_dir):
        path = FieldExporter.write_grid_json(mixed_field, str(output_dir / "field.json"))
        assert path is not None
        assert FieldExporter.read_grid_json(path) == mixed_field

    def test_json_round_trip_epsilon(self, eps_seed, output_dir):
        field = FieldService.sample_grid(eps_seed, GridSpec(-1.0, 3.0, -5.0, 5.0, 5, 11))
        path = FieldExporter.write_grid(field, str(output_dir / "eps.json"), OutputFormat.JSON)
        assert FieldExporter.read_grid_json(path) == field

    def test_deterministic_bytes(self, exp_seed, output_dir):
        grid = GridSpec(-1.0, 1.0, -1.0, 1.0, 4, 4)
        first = FieldExporter.write_grid(FieldService.sample_grid(exp_seed, grid), str(output_dir / "a.csv"),
                                         OutputFormat.CSV)
        second = FieldExporter.write_grid(FieldService.sample_grid(exp_seed, grid), str(output_dir / "b.csv"),
                                          OutputFormat.CSV)
        with open(first, 'rb') as a, open(second, 'rb') as b:
            assert a.read() == b.read()

    def test_creates_parent_directories(self, mixed_field, output_dir):
        path = FieldExporter.write_grid_csv(mixed_field, str(output_dir / "nested" / "deeper" / "grid.csv"))
        assert path is not None

    def test_unwritable_path(self, mixed_field, output_dir):
        blocker = output_dir / "blocker"
        blocker.write_text("not a directory")
        assert FieldExporter.write_grid_csv(mixed_field, str(blocker / "grid.csv")) is None

    def test_unreadable_json(self, output_dir):
        broken = output_dir / "broken.json"
        broken.write_text("{")
        assert FieldExporter.read_grid_json(str(broken)) is None

    def test_default_path(self, eps_seed):
        path = FieldExporter.default_path("output", eps_seed, "grid", OutputFormat.JSON)
        assert path.replace("\\", "/") == "output/Epsilon_grid.json"

class TestPointExport:
    def test_shock_points_csv(self, output_dir):
        path = FieldExporter.write_points([(0.25, 0.0)], str(output_dir / "shock.csv"), OutputFormat.CSV)
        with open(path) as handle:
            assert handle.read() == "x,y\n0.25,0\n"

    def test_shock_points_json(self, output_dir):
        path = FieldExporter.write_points([(-1.0, 0.5)], str(output_dir / "shock.json"), OutputFormat.JSON)
        with open(path) as handle:
            assert json.load(handle) == [[-1.0, 0.5]]

    def test_empty_trace_keeps_header(self, output_dir):
        path = FieldExporter.write_points([], str(output_dir / "none.csv"), OutputFormat.CSV)
        with open(path) as handle:
            assert handle.read() == "x,y\n"

    def test_leaf(self, output_dir):
        path = FieldExporter.write_leaf([0j, 0.5 - 0.25j], str(output_dir / "leaf.csv"), OutputFormat.CSV)
        with open(path) as handle:
            assert handle.read().splitlines() == ["re_mu,im_mu", "0,0", "0.5,-0.25"]

class TestReports:
    def test_report_json(self, delta_seed):
        summary = VerificationService.run_suite(delta_seed, Suite.RIGIDITY)
        records = json.loads(FieldExporter.report_json(summary))
        assert len(records) == summary['total']
        assert all(record['pass'] for record in records)

    def test_infinite_magnitude_is_null(self, delta_seed):
        summary = {'results': [VerificationService._check(
            "demo", delta_seed, (0.0, 0.0), 1e-6, lambda: math.inf)]}
        assert json.loads(FieldExporter.report_json(summary))[0]['magnitude'] is None

    def test_sample_json(self, delta_seed):
        result = FieldService.sample_from_result(1, 2, SolverService.solve(delta_seed, 1, 2))
        document = json.loads(FieldExporter.sample_json(result))
        assert document['lambda'] == [1.0, 0.5]
        assert document['alpha'] == 1.25
        assert document['status']['outcome'] == 'Converged'
