import click

from delaunaylab.acceptance import CHECKS, run_acceptance
from delaunaylab.utils.config import RunConfig


@click.command()
@click.option(
    '--check',
    'checks',
    type=click.IntRange(1, len(CHECKS)),
    multiple=True,
    help='Run only this acceptance check; repeatable.',
)
@click.pass_obj
def verify(config: RunConfig, checks):
    """Run the numerical acceptance checks and exit 1 if any fails."""
    results = run_acceptance(config, checks or None)
    for result in results:
        status = 'PASS' if result.passed else 'FAIL'
        click.echo(f'{status} {result.number:2d} {result.name}: {result.detail}')
    failed = [r for r in results if not r.passed]
    click.echo(f'{len(results) - len(failed)}/{len(results)} checks passed')
    if failed:
        raise SystemExit(1)
