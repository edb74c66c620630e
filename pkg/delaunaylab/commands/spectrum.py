"""Commands for band tables, spectral flow, the Morse index and bifurcation values."""
from pathlib import Path
from typing import Optional, Tuple

import click
import numpy as np

from delaunaylab.bifurcation.crossing import (
    BifurcationPoint,
    critical_tau_star,
    first_bifurcation,
    second_crossing,
)
from delaunaylab.bifurcation.index import index as morse_index
from delaunaylab.bifurcation.index import spectral_flow_table
from delaunaylab.bifurcation.symmetry import SymmetryClass
from delaunaylab.core.profile import jacobi_profile
from delaunaylab.spectral.bands import band_table
from delaunaylab.utils.config import RunConfig
from delaunaylab.utils.generic import format_number
from delaunaylab.utils.tables import write_csv, write_json


def _bifurcation_line(point: BifurcationPoint) -> str:
    fields = [
        str(point.symmetry.j),
        format_number(point.symmetry.alpha),
        format_number(point.tau_star),
        format_number(point.slope) if point.slope is not None else 'nan',
        str(point.band_index),
    ]
    line = ' '.join(fields)
    return line + ' conjectural' if point.conjectural else line


@click.command()
@click.option('--tau', type=float, required=True, help='Delaunay parameter.')
@click.option('--kmax', type=int, help='Number of eigenvalues per phase.')
@click.option('--alphas', type=int, help='Number of phases sampled on [0, pi].')
@click.option('--out', type=click.Path(dir_okay=False), help='CSV destination for the (tau, k, alpha, lambda) table.')
@click.pass_obj
def bands(config: RunConfig, tau: float, kmax: Optional[int], alphas: Optional[int], out: Optional[str]):
    """Band edges of the reduced Jacobi operator at tau."""
    profile = jacobi_profile(tau, config.spectral_samples, config.ode_tolerance)
    grid = np.linspace(0, np.pi, alphas) if alphas else None
    k_max = kmax or config.k_max
    table = band_table(profile, k_max, grid, config.n_modes, config.n_coeffs, config.workers, config.eigen_tolerance)
    path = Path(out) if out else config.output_path / f'bands_tau{format_number(tau)}.csv'
    write_csv(table.to_frame(), path)
    for band in table.bands:
        click.echo(f'B_{band.k} {format_number(band.lower)} {format_number(band.upper)}')


@click.command()
@click.option('--j', type=int, required=True, help='Rotational order.')
@click.option('--alpha', type=float, default=0.0, show_default=True, help='Screw angle.')
@click.option('--tau-from', type=float, default=-1.0, show_default=True)
@click.option('--tau-to', type=float, default=-6.0, show_default=True)
@click.option('--steps', type=click.IntRange(min=2), default=51, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), help='CSV destination for the flow table.')
@click.pass_obj
def flow(config: RunConfig, j: int, alpha: float, tau_from: float, tau_to: float, steps: int, out: Optional[str]):
    """Spectral flow of the symmetric Jacobi operator along a decreasing tau grid."""
    sym = SymmetryClass(j, alpha)
    grid = np.linspace(tau_from, tau_to, steps)
    table = spectral_flow_table(
        sym,
        grid,
        config.n_modes,
        config.spectral_samples,
        config.n_coeffs,
        config.workers,
        ode_tolerance=config.ode_tolerance,
        eigen_tolerance=config.eigen_tolerance,
    )
    path = Path(out) if out else config.output_path / f'flow_j{j}_alpha{format_number(alpha)}.csv'
    write_csv(table, path)
    negative = table[table['lambda'] < 0].groupby('tau', sort=False).size()
    for tau in grid:
        click.echo(f'{format_number(tau)} {int(negative.get(tau, 0))}')


@click.command()
@click.option('--tau', type=float, required=True, help='Delaunay parameter.')
@click.option('--j', type=int, required=True, help='Rotational order.')
@click.option('--alpha', type=float, default=0.0, show_default=True, help='Screw angle.')
@click.pass_obj
def index(config: RunConfig, tau: float, j: int, alpha: float):
    """Morse index of the Delaunay surface restricted to one symmetry class."""
    report = morse_index(
        tau,
        SymmetryClass(j, alpha),
        config.n_modes,
        config.spectral_samples,
        config.n_coeffs,
        ode_tolerance=config.ode_tolerance,
        eigen_tolerance=config.eigen_tolerance,
    )
    click.echo(f'index {report.index}')
    for c in report.contributions:
        click.echo(f'n={c.n} k={c.k} lambda={format_number(c.eigenvalue)}')
    click.echo(f'n_cutoff {report.n_cutoff}')
    click.echo(f'excluded_modes {",".join(str(n) for n in report.excluded_modes)}')


@click.command()
@click.option('--j', type=int, help='Rotational order.')
@click.option('--alpha', type=float, default=0.0, show_default=True, help='Screw angle.')
@click.option('--second', is_flag=True, help='Also scan for a crossing of the next band.')
@click.option('--tau-star', 'tau_star', is_flag=True, help='Maximize the crossing over j and alpha instead.')
@click.option('--j-max', type=int, default=6, show_default=True, help='Largest j used with --tau-star.')
@click.option('--out', type=click.Path(dir_okay=False), help='JSON destination for the located crossings.')
@click.pass_obj
def bifurcate(
    config: RunConfig,
    j: Optional[int],
    alpha: float,
    second: bool,
    tau_star: bool,
    j_max: int,
    out: Optional[str],
):
    """Locate tau_{j,alpha}; prints j alpha tau slope band_index."""
    if tau_star:
        result = critical_tau_star(
            j_max,
            config.alpha_samples,
            config.n_modes,
            config.polish_modes,
            config.spectral_samples,
            config.n_coeffs,
            config.workers,
            config.root_tolerance,
            config.root_ftolerance,
            config.ode_tolerance,
        )
        points: Tuple[BifurcationPoint, ...] = tuple(result.points)
        for point in points:
            click.echo(_bifurcation_line(point))
        click.echo(f'tau_star {format_number(result.tau_star)} at {result.maximizer.symmetry}')
        for a, b in result.collisions:
            click.echo(f'collision {a.symmetry} {b.symmetry}')
        default_name = f'tau_star_j{j_max}.json'
    else:
        if j is None:
            raise click.UsageError('--j is required unless --tau-star is given')
        sym = SymmetryClass(j, alpha)
        args = (
            config.n_modes,
            config.polish_modes,
            config.spectral_samples,
            config.n_coeffs,
            config.root_tolerance,
            config.root_ftolerance,
        )
        first = first_bifurcation(sym, *args, ode_tolerance=config.ode_tolerance)
        points = (first,)
        if second:
            found = second_crossing(sym, *args, workers=config.workers, ode_tolerance=config.ode_tolerance)
            if found is not None:
                points += (found,)
        for point in points:
            click.echo(_bifurcation_line(point))
        default_name = f'bifurcation_j{j}_alpha{format_number(alpha)}.json'
    path = Path(out) if out else config.output_path / default_name
    write_json({'crossings': [p.as_row() for p in points], 'config': config.metadata()}, path)
