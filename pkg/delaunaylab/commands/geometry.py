"""Commands for profiles, periods and meshes."""
from pathlib import Path
from typing import Optional

import click
from loguru import logger

from delaunaylab.bifurcation.crossing import first_bifurcation
from delaunaylab.bifurcation.symmetry import SymmetryClass
from delaunaylab.core.period import PeriodMethod, compute_period, large_tau_period, small_tau_period
from delaunaylab.core.profile import solve_profile
from delaunaylab.surface.export import MeshFormat, export_mesh
from delaunaylab.surface.mesh import mesh_delaunay, mesh_perturbed
from delaunaylab.utils.config import RunConfig
from delaunaylab.utils.generic import format_number
from delaunaylab.utils.tables import write_csv, write_json


@click.command()
@click.option('--tau', type=float, required=True, help='Delaunay parameter.')
@click.option('--samples', type=int, help='Samples per period.')
@click.option('--periods', type=int, default=1, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), help='CSV destination; metadata goes next to it as JSON.')
@click.pass_obj
def profile(config: RunConfig, tau: float, samples: Optional[int], periods: int, out: Optional[str]):
    """Sample sigma, d sigma/ds and kappa over whole periods."""
    solution = solve_profile(tau, samples or config.samples_per_period, periods, config.ode_tolerance)
    path = Path(out) if out else config.output_path / f'profile_tau{format_number(solution.tau)}.csv'
    write_csv(solution.to_frame(), path)
    write_json({**solution.metadata(), 'config': config.metadata()}, path.with_suffix('.json'))
    click.echo(f'tau {format_number(solution.tau)}')
    click.echo(f's_tau {format_number(solution.s_tau)}')
    click.echo(f'max_energy_defect {format_number(solution.metadata()["max_energy_defect"])}')
    click.echo(f'csv {path}')


@click.command()
@click.option('--tau', type=float, required=True, help='Delaunay parameter.')
@click.option(
    '--method', type=click.Choice(['quadrature', 'elliptic', 'both']), default='both', show_default=True
)
@click.pass_obj
def period(config: RunConfig, tau: float, method: str):
    """Print s_tau by quadrature and by the elliptic integral, and their difference."""
    methods = list(PeriodMethod) if method == 'both' else [PeriodMethod(method)]
    values = {m: compute_period(tau, m, config.quadrature_tolerance).s_tau for m in methods}
    for m, value in values.items():
        click.echo(f'{m.value} {format_number(value)}')
    if len(values) == 2:
        quad, ell = values[PeriodMethod.QUADRATURE], values[PeriodMethod.ELLIPTIC]
        click.echo(f'difference {format_number(abs(quad - ell))}')
    if tau <= -1:
        click.echo(f'large_tau_model {format_number(large_tau_period(tau))}')
    elif tau < 0:
        click.echo(f'small_tau_model {format_number(small_tau_period(tau))}')


@click.command()
@click.option('--tau', type=float, help='Delaunay parameter; replaced by the crossing value when --j is given.')
@click.option('--j', type=int, help='Rotational order of the bifurcating mode.')
@click.option('--alpha', type=float, default=0.0, show_default=True, help='Screw angle.')
@click.option('--eta', type=float, default=0.0, show_default=True, help='Amplitude of the normal graph.')
@click.option('--periods', type=int, default=1, show_default=True)
@click.option('--res-t', type=int, help='Grid points per period in t.')
@click.option('--res-theta', type=int, help='Grid points around the axis.')
@click.option('--format', 'fmt', type=click.Choice([f.value for f in MeshFormat]), default='obj', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), help='Destination file.')
@click.pass_obj
def mesh(
    config: RunConfig,
    tau: Optional[float],
    j: Optional[int],
    alpha: float,
    eta: float,
    periods: int,
    res_t: Optional[int],
    res_theta: Optional[int],
    fmt: str,
    out: Optional[str],
):
    """Write a Delaunay mesh, or with --j a first-order bifurcated mesh."""
    res = (res_t or config.mesh_res_t, res_theta or config.mesh_res_theta)
    if j is None:
        if tau is None:
            raise click.UsageError('either --tau or --j is required')
        solution = solve_profile(tau, config.samples_per_period, periods, config.ode_tolerance)
        surface = mesh_delaunay(solution, periods, *res)
        name = f'delaunay_tau{format_number(tau)}'
    else:
        point = first_bifurcation(
            SymmetryClass(j, alpha),
            config.n_modes,
            config.polish_modes,
            config.spectral_samples,
            config.n_coeffs,
            config.root_tolerance,
            config.root_ftolerance,
            config.ode_tolerance,
        )
        if tau is not None:
            logger.info(f'Using the crossing tau={format_number(point.tau_star)} instead of --tau {tau}')
        solution = solve_profile(point.tau_star, config.spectral_samples, periods, config.ode_tolerance)
        surface = mesh_perturbed(solution, point, eta, res, periods, config.curvature_step)
        name = f'perturbed_j{j}_alpha{format_number(alpha)}_eta{format_number(eta)}'
    path = Path(out) if out else config.output_path / f'{name}.{fmt}'
    export_mesh(surface, path, MeshFormat(fmt))
    click.echo(f'vertices {surface.vertex_count}')
    click.echo(f'faces {len(surface.faces)}')
    click.echo(f'{fmt} {path}')
