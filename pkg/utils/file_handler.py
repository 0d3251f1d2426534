# utils/file_handler.py
import csv
import io
import json
import math
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from models.field import GridField, GridSpec, SpectralSample
from models.run import OutputFormat
from models.seed import SeedSpec
from models.solve import Outcome, SolveStatus
from utils.logger import get_logger

logger = get_logger(__name__)

GRID_HEADER = ['x', 'y', 're_lambda', 'im_lambda', 're_mu', 'im_mu',
               'alpha', 'beta', 'delta_disc', 'abs_jac', 'status']

def format_number(value: float) -> str:
    """17 significant digits, enough to round-trip a double"""
    return format(value, '.17g')

def _complex_json(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value

class FieldExporter:
    @staticmethod
    def ensure_directory(path: str):
        """Create the parent directory of an output file"""
        parent = Path(path).parent
        if str(parent):
            parent.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def default_path(output_dir: str, seed: SeedSpec, command: str, output_format: OutputFormat) -> str:
        """OUTPUT_DIR/<family>_<command>.<format>"""
        return os.path.join(output_dir, f"{seed.family.value}_{command}.{output_format.value}")

    @staticmethod
    def _write_text(path: str, text: str, what: str) -> Optional[str]:
        try:
            FieldExporter.ensure_directory(path)
            # newline='' keeps the bytes identical across platforms
            with open(path, 'w', encoding='utf-8', newline='') as handle:
                handle.write(text)
            logger.info(f"{what} written: {path}")
            return path
        except Exception as e:
            logger.error(f"Error writing {what} to {path}: {e}")
            return None

    @staticmethod
    def _csv_text(header: List[str], rows: Iterable[List[str]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
        return buffer.getvalue()

    # Grid fields

    @staticmethod
    def sample_row(sample: SpectralSample) -> List[str]:
        """CSV row; failed nodes keep x, y and status, plus |J| for shocks, with blank field cells"""
        row = [format_number(sample.x), format_number(sample.y)]
        if sample.converged:
            row += [format_number(v) for v in (
                sample.lam.real, sample.lam.imag, sample.mu.real, sample.mu.imag,
                sample.alpha, sample.beta, sample.delta_disc
            )]
        else:
            row += [''] * 7
        abs_jac = sample.abs_jac
        row += ['' if math.isnan(abs_jac) else format_number(abs_jac), sample.status.outcome.value]
        return row

    @staticmethod
    def grid_csv(field: GridField) -> str:
        return FieldExporter._csv_text(GRID_HEADER, (FieldExporter.sample_row(s) for s in field.samples))

    @staticmethod
    def sample_to_dict(sample: SpectralSample) -> Dict[str, Any]:
        return {
            'x': sample.x,
            'y': sample.y,
            're_lambda': sample.lam.real,
            'im_lambda': sample.lam.imag,
            're_mu': sample.mu.real,
            'im_mu': sample.mu.imag,
            'alpha': sample.alpha,
            'beta': sample.beta,
            'delta_disc': sample.delta_disc,
            'abs_jac': None if math.isnan(sample.abs_jac) else sample.abs_jac,
            'status': sample.status.outcome.value,
            're_w0': sample.w0.real,
            'im_w0': sample.w0.imag,
            're_jac': sample.jac.real,
            'im_jac': sample.jac.imag,
            'status_jacobian_modulus': sample.status.jacobian_modulus,
            'status_im_lambda': sample.status.im_lambda
        }

    @staticmethod
    def sample_from_dict(data: Dict[str, Any]) -> SpectralSample:
        status = SolveStatus(Outcome(data['status']), data['status_jacobian_modulus'], data['status_im_lambda'])
        return SpectralSample(
            data['x'], data['y'],
            complex(data['re_lambda'], data['im_lambda']),
            complex(data['re_w0'], data['im_w0']),
            complex(data['re_jac'], data['im_jac']),
            complex(data['re_mu'], data['im_mu']),
            data['alpha'], data['beta'], data['delta_disc'],
            status
        )

    @staticmethod
    def grid_json(field: GridField) -> str:
        document = {
            'grid': field.grid.to_dict(),
            'seed': field.seed.to_dict(),
            'samples': [FieldExporter.sample_to_dict(s) for s in field.samples]
        }
        return json.dumps(document, indent=2) + '\n'

    @staticmethod
    def write_grid_csv(field: GridField, path: str) -> Optional[str]:
        return FieldExporter._write_text(path, FieldExporter.grid_csv(field), "Grid CSV")

    @staticmethod
    def write_grid_json(field: GridField, path: str) -> Optional[str]:
        return FieldExporter._write_text(path, FieldExporter.grid_json(field), "Grid JSON")

    @staticmethod
    def write_grid(field: GridField, path: str, output_format: OutputFormat) -> Optional[str]:
        if output_format == OutputFormat.JSON:
            return FieldExporter.write_grid_json(field, path)
        return FieldExporter.write_grid_csv(field, path)

    @staticmethod
    def read_grid_json(path: str) -> Optional[GridField]:
        """Load a grid written by write_grid_json"""
        try:
            with open(path, 'r', encoding='utf-8') as handle:
                document = json.load(handle)
            return GridField(
                GridSpec.from_dict(document['grid']),
                SeedSpec.from_dict(document['seed']),
                tuple(FieldExporter.sample_from_dict(s) for s in document['samples'])
            )
        except Exception as e:
            logger.error(f"Error reading grid JSON {path}: {e}")
            return None

    # Point lists

    @staticmethod
    def _pairs_text(pairs: List[Tuple[float, float]], header: List[str], output_format: OutputFormat) -> str:
        if output_format == OutputFormat.JSON:
            return json.dumps([[a, b] for a, b in pairs]) + '\n'
        return FieldExporter._csv_text(header, ([format_number(a), format_number(b)] for a, b in pairs))

    @staticmethod
    def write_points(points: List[Tuple[float, float]], path: str, output_format: OutputFormat) -> Optional[str]:
        """Shock trace as x,y rows or a JSON array of [x, y]"""
        return FieldExporter._write_text(
            path, FieldExporter._pairs_text(points, ['x', 'y'], output_format), "Shock trace"
        )

    @staticmethod
    def write_leaf(values: List[complex], path: str, output_format: OutputFormat) -> Optional[str]:
        """Leaf sample as re_mu,im_mu rows or a JSON array of [re, im]"""
        pairs = [(v.real, v.imag) for v in values]
        return FieldExporter._write_text(
            path, FieldExporter._pairs_text(pairs, ['re_mu', 'im_mu'], output_format), "Leaf sample"
        )

    # Reports

    @staticmethod
    def report_json(summary: Dict[str, Any]) -> str:
        """Verification results as a JSON array of check records"""
        records = []
        for result in summary['results']:
            record = result.to_dict()
            if math.isinf(record['magnitude']):
                record['magnitude'] = None
            records.append(record)
        return json.dumps(records, indent=2) + '\n'

    @staticmethod
    def write_report(summary: Dict[str, Any], path: str) -> Optional[str]:
        return FieldExporter._write_text(path, FieldExporter.report_json(summary), "Verification report")

    @staticmethod
    def sample_json(sample: SpectralSample) -> str:
        """Single evaluated point for the eval command"""
        if not sample.converged:
            return json.dumps({'x': sample.x, 'y': sample.y, 'status': sample.status.to_dict()}, indent=2)

        document = {
            'x': sample.x,
            'y': sample.y,
            'lambda': _complex_json(sample.lam),
            'w0': _complex_json(sample.w0),
            'jac': _complex_json(sample.jac),
            'mu': _complex_json(sample.mu),
            'alpha': sample.alpha,
            'beta': sample.beta,
            'delta_disc': sample.delta_disc,
            'status': sample.status.to_dict()
        }
        return json.dumps(document, indent=2)
