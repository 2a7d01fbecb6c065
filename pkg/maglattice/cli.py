"""
Command line entry point.

    maglattice SUBCOMMAND --config PATH [--out DIR] [--format csv|json] [--threads N]

Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
"""
import argparse
import math
import sys

from . import __version__, config
from .configfile import emit_config, load_config
from .exceptions import ConfigError, DomainError, NumericalError
from .lattice import Lattice
from .logger import Logger

SUBCOMMANDS = ('field-map', 'sites', 'bands', 'barriers', 'levels', 'sweep')

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

log = Logger.get_logger()


def build_parser():
    parser = argparse.ArgumentParser(prog='maglattice', description='Magnetic lattice atom-chip analyzer.')
    parser.add_argument('--version', action='version', version=f'maglattice {__version__}')
    subparsers = parser.add_subparsers(dest='subcommand', required=True, metavar='SUBCOMMAND')
    for name in SUBCOMMANDS:
        command = subparsers.add_parser(name)
        command.add_argument('--config', required=True, help='JSON configuration file')
        command.add_argument('--out', default=config.DEFAULT_OUTPUT_DIRECTORY, help='output directory')
        command.add_argument('--format', default='csv', choices=('csv', 'json'))
        command.add_argument('--threads', type=int, default=None,
                             help='worker threads (default: MAGLAT_THREADS or every core)')
        command.add_argument('--log-file', default=None, help='also write the log to this file')
    return parser


def _check_clamping(lattice, region, grid):
    fraction = lattice.clamped_fraction(region.points(grid))
    if fraction > config.CLAMPED_FRACTION_LIMIT:
        raise NumericalError(f'{fraction:.2%} of the grid points have a negative radicand '
                             f'(limit {config.CLAMPED_FRACTION_LIMIT:.0%}); the analytic field is not '
                             'valid there, raise the bias or move the region up')


def _summary(sites, bands):
    lowest = min((site.b_min for site in sites), default=math.nan)
    return f'sites={len(sites)} bands={len(bands)} min_b_min_T={format(lowest, ".17g")}'


def _run(lattice, settings, subcommand, fmt):
    if subcommand == 'field-map':
        region, grid = settings.field_map.region, settings.field_map.grid
        _check_clamping(lattice, region, grid)
        lattice.write_field_map(lattice.field_map(region, grid), fmt)
        return f'points={grid[0] * grid[1] * grid[2]}'

    _check_clamping(lattice, lattice.region, lattice.grid)
    if subcommand == 'sweep':
        plan = settings.sweep_plan()
        if plan is None:
            raise ConfigError('the sweep subcommand needs a "sweep" block in the configuration')
        records = lattice.run_bias_sweep(plan)
        lattice.write_sweep(records, fmt)
        return f'records={len(records)} site_counts={";".join(str(record.site_count) for record in records)}'

    analysis = lattice.analyze()
    if subcommand == 'sites':
        lattice.write_sites(analysis.sites, fmt)
    elif subcommand == 'bands':
        lattice.write_bands(analysis.bands, analysis.gaps, fmt)
    elif subcommand == 'barriers':
        lattice.write_barriers(analysis.barriers, fmt)
    elif subcommand == 'levels':
        lattice.write_levels(lattice.characterize(analysis), fmt)
    return _summary(analysis.sites, analysis.bands)


def cli_dispatch(subcommand, flags):
    """
    Run one subcommand and report how it ended.

    :param subcommand: one of SUBCOMMANDS
    :param flags: dict with 'config' and optionally 'out', 'format', 'threads', 'log_file'
    :return: int - exit code
    """
    lattice = None
    try:
        if subcommand not in SUBCOMMANDS:
            raise ConfigError(f'unknown subcommand {subcommand!r}, expected one of {", ".join(SUBCOMMANDS)}')
        if flags.get('log_file'):
            Logger.attach_file(flags['log_file'])
        threads = flags.get('threads')
        if threads is not None and threads < 1:
            raise ConfigError(f'--threads must be >= 1, got {threads!r}')
        settings = load_config(flags['config'])
        lattice = Lattice.from_config(settings, threads=threads)
        lattice.set_output_directory(flags.get('out') or config.DEFAULT_OUTPUT_DIRECTORY, append=False)
        log.info(f'{subcommand} on {flags["config"]} (model {settings.model})')
        lattice.write_effective_config(emit_config(settings))
        summary = _run(lattice, settings, subcommand, flags.get('format') or 'csv')
    except ConfigError as error:
        return _fail(lattice, error, EXIT_CONFIG)
    except (NumericalError, DomainError) as error:
        return _fail(lattice, error, EXIT_NUMERICAL)
    except OSError as error:
        return _fail(lattice, error, EXIT_IO)
    print(summary)
    return EXIT_OK


def _fail(lattice, error, code):
    log.error(str(error))
    if lattice is not None:
        try:
            lattice.discard_outputs()
        except OSError as cleanup_error:
            log.error(f'could not remove partial outputs: {cleanup_error}')
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    flags = vars(args)
    return cli_dispatch(flags.pop('subcommand'), flags)


if __name__ == '__main__':
    sys.exit(main())
