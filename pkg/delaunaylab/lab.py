import logging
import sys
from typing import Optional

import click
from loguru import logger

from delaunaylab.commands.geometry import mesh, period, profile
from delaunaylab.commands.spectrum import bands, bifurcate, flow, index
from delaunaylab.commands.verify import verify
from delaunaylab.utils.config import read_config
from delaunaylab.utils.errors import DelaunayLabError, DomainError
from delaunaylab.utils.generic import InterceptHandler

__all__ = ['main']

LOG_FORMAT = "<d>{time:YYYY-MM-DD HH:mm:ss}</> <lvl>{level: ^8}</>|<lvl><n>{message}</n></lvl>"


def setup_logging(level: str = 'INFO') -> None:
    logger.remove()
    logger.add(sys.stderr, format=LOG_FORMAT, level=level, backtrace=False, diagnose=False)


setup_logging()
logging.captureWarnings(True)
logging.basicConfig(handlers=[InterceptHandler()], level=0)


class LabGroup(click.Group):
    """Maps numerical failures to exit codes: 2 for domain errors, 1 for everything else."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except DomainError as e:
            logger.error(f'Invalid input: {e}')
            ctx.exit(2)
        except DelaunayLabError as e:
            logger.error(f'{type(e).__name__}: {e}')
            ctx.exit(1)


@click.group(cls=LabGroup)
@click.option('--config', 'config_file', type=click.Path(dir_okay=False), help='YAML config file.')
@click.option('--output-dir', type=click.Path(file_okay=False), help='Directory for result files.')
@click.option('--workers', type=click.IntRange(min=1), help='Threads for parameter sweeps.')
@click.option('-v', '--verbose', is_flag=True, help='Log solver iterations.')
@click.pass_context
def main(
    ctx: click.Context, config_file: Optional[str], output_dir: Optional[str], workers: Optional[int], verbose: bool
) -> None:
    """Delaunay surfaces, their Jacobi band spectra and bifurcation values."""
    setup_logging('DEBUG' if verbose else 'INFO')
    ctx.obj = read_config(config_file, output_dir=output_dir, workers=workers)


for command in (profile, period, bands, flow, index, bifurcate, mesh, verify):
    main.add_command(command)


if __name__ == '__main__':
    main()
