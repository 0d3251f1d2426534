# cli/rigidlab_cli.py
import sys
from typing import Optional

import click

from cli.cli_utils import CLIUtils
from config.run_config import build_run_config, load_run_config_file
from config.settings import settings
from models.report import Suite
from models.run import RunConfig
from services.field_service import FieldService
from services.solver_service import SolverService
from services.verification_service import VerificationService
from utils.exceptions import RigidLabError, SolverError, UnsupportedFamilyError
from utils.file_handler import FieldExporter
from utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_VERIFY = 3

class RigidLabGroup(click.Group):
    """Command group whose usage errors exit with code 1"""

    def main(self, *args, **kwargs):
        kwargs['standalone_mode'] = False
        try:
            rv = super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)

def _run_config(ctx: click.Context, config_path: Optional[str], **flags) -> RunConfig:
    """RunConfig from flags over the config file over settings; exits 1 on bad input"""
    try:
        model = load_run_config_file(config_path) if config_path else None
        return build_run_config(model, **flags)
    except (RigidLabError, ValueError, OSError) as e:
        CLIUtils.print_error(f"Invalid configuration: {e}")
        logger.error(f"Invalid configuration: {e}")
        ctx.exit(EXIT_USAGE)

def _require_grid(ctx: click.Context, config: RunConfig, command: str):
    try:
        return config.require_grid(command)
    except ValueError as e:
        CLIUtils.print_error(str(e))
        ctx.exit(EXIT_USAGE)

def _output_path(config: RunConfig, command: str) -> str:
    return config.output_path or FieldExporter.default_path(
        settings.OUTPUT_DIR, config.seed, command, config.output_format
    )

def _finish_write(ctx: click.Context, path: Optional[str], what: str):
    if path is None:
        CLIUtils.print_error(f"Could not write {what}")
        ctx.exit(EXIT_USAGE)
    CLIUtils.print_success(f"{what} written to {path}")
    ctx.exit(EXIT_OK)

seed_option = click.option('--seed', 'seed', default=None, help="Seed, e.g. delta:1, eps:0.5, exp, cauchy:1, affine:2,0,1")
config_option = click.option('--config', 'config_path', default=None, type=click.Path(dir_okay=False),
                             help="JSON run configuration file")
grid_option = click.option('--grid', 'grid', default=None, help="Grid window x0:x1:nx,y0:y1:ny")
format_option = click.option('--format', 'output_format', default=None, type=click.Choice(['csv', 'json']),
                             help="Output format")
out_option = click.option('--out', 'out', default=None, help="Output file path")

@click.group(cls=RigidLabGroup)
def cli():
    """rigidlab: implicit transform lambda = f(y - lambda x) of holomorphic seeds"""

@cli.command('eval')
@seed_option
@click.option('--x', 'x', required=True, type=float, help="x coordinate")
@click.option('--y', 'y', required=True, type=float, help="y coordinate")
@config_option
@click.pass_context
def eval_command(ctx, seed, x, y, config_path):
    """Evaluate the transform and its derived fields at one point"""
    config = _run_config(ctx, config_path, seed=seed)
    try:
        result = SolverService.solve(config.seed, x, y, config.solver)
    except SolverError as e:
        click.echo(FieldExporter.sample_json(FieldService.failed_sample(x, y, e)))
        CLIUtils.print_error(f"Solve failed: {e}")
        ctx.exit(EXIT_SOLVER)
    except UnsupportedFamilyError as e:
        CLIUtils.print_error(f"Solve failed: {e}")
        ctx.exit(EXIT_SOLVER)

    click.echo(FieldExporter.sample_json(FieldService.sample_from_result(x, y, result)))
    ctx.exit(EXIT_OK)

@cli.command('grid')
@seed_option
@grid_option
@format_option
@out_option
@config_option
@click.pass_context
def grid_command(ctx, seed, grid, output_format, out, config_path):
    """Sample the transform on a grid and export the field"""
    config = _run_config(ctx, config_path, seed=seed, grid=grid, output_format=output_format, out=out)
    grid_spec = _require_grid(ctx, config, 'grid')

    field = FieldService.sample_grid(config.seed, grid_spec, config.solver)
    CLIUtils.print_outcome_counts(field.outcome_counts(), f"{config.seed} on {grid_spec.nx}x{grid_spec.ny} grid")
    path = FieldExporter.write_grid(field, _output_path(config, 'grid'), config.output_format)
    _finish_write(ctx, path, "Grid field")

@cli.command('verify')
@seed_option
@click.option('--suite', 'suite', default='all', type=click.Choice([s.value for s in Suite]),
              help="Verification suite")
@out_option
@config_option
@click.pass_context
def verify_command(ctx, seed, suite, out, config_path):
    """Run a verification suite over built-in check points"""
    config = _run_config(ctx, config_path, seed=seed, out=out)
    summary = VerificationService.run_suite(config.seed, Suite(suite), config.fd, config.solver)
    CLIUtils.print_summary(summary)

    if config.output_path:
        if FieldExporter.write_report(summary, config.output_path) is None:
            CLIUtils.print_error(f"Could not write report to {config.output_path}")
            ctx.exit(EXIT_USAGE)
    else:
        click.echo(FieldExporter.report_json(summary), nl=False)

    ctx.exit(EXIT_OK if summary['failed'] == 0 else EXIT_VERIFY)

@cli.command('shock')
@seed_option
@grid_option
@format_option
@out_option
@config_option
@click.pass_context
def shock_command(ctx, seed, grid, output_format, out, config_path):
    """Trace the shock locus inside a grid window"""
    config = _run_config(ctx, config_path, seed=seed, grid=grid, output_format=output_format, out=out)
    grid_spec = _require_grid(ctx, config, 'shock')

    points = FieldService.shock_trace(config.seed, grid_spec, config.solver)
    if points:
        CLIUtils.print_info(f"{len(points)} shock point(s) found")
    else:
        CLIUtils.print_warning("No shock points in the window")
    path = FieldExporter.write_points(points, _output_path(config, 'shock'), config.output_format)
    _finish_write(ctx, path, "Shock trace")

@cli.command('leaf')
@seed_option
@grid_option
@format_option
@out_option
@config_option
@click.pass_context
def leaf_command(ctx, seed, grid, output_format, out, config_path):
    """Sample the Beltrami leaf over a grid"""
    config = _run_config(ctx, config_path, seed=seed, grid=grid, output_format=output_format, out=out)
    grid_spec = _require_grid(ctx, config, 'leaf')

    values = FieldService.leaf_sample(config.seed, grid_spec, config.solver)
    CLIUtils.print_info(f"{len(values)} of {grid_spec.size} nodes on the leaf")
    path = FieldExporter.write_leaf(values, _output_path(config, 'leaf'), config.output_format)
    _finish_write(ctx, path, "Leaf sample")
