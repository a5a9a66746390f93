"""Command line runner for modular reports, random suites and Klein-Gordon experiments"""

# pylint: disable=too-many-statements,too-many-branches

import argparse
import signal
import sys

from qfiso.config import ExperimentConfig
from qfiso.errors import (ConfigError, ExplicitlyUnsupported, InvariantFailure,
                          MismatchWithDagger, NotPSD, NotStandard, QuadratureNotConverged,
                          SweepTruncated)
from qfiso.kernel_bound import check_mass_uniform_constants, run_kernel_bounds
from qfiso.loader import Loader
import qfiso.loaders
from qfiso.logger import LOGGER, LogLevel, configure_logging, set_level
from qfiso.plot_script import emit_plot
from qfiso.report import modular_report_from_file
from qfiso.suite import run_random_suite, write_summary
from qfiso.sweep import run_kg_sweep

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

INPUT_ERRORS = (ConfigError, NotStandard, ExplicitlyUnsupported, ValueError, OSError)
FAILURES = (InvariantFailure, NotPSD, MismatchWithDagger, QuadratureNotConverged)


def _positive_int(value):
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Expected an integer, got {value}") from exc
    if number < 1:
        raise argparse.ArgumentTypeError(f"Expected an integer >= 1, got {value}")
    return number


def _non_negative_int(value):
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Expected an integer, got {value}") from exc
    if number < 0:
        raise argparse.ArgumentTypeError(f"Expected an integer >= 0, got {value}")
    return number


def parse_args(argv=None):
    """Parse the arguments for the cli"""
    parser = argparse.ArgumentParser(
        prog='qfiso',
        description="Modular theory of standard subspaces and quasi-free mass changes")

    def log_level(value):
        try:
            return LogLevel.parse(value)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    parser.add_argument(
        '-l', '--log-level',
        type=log_level,
        default=LogLevel.WARN,
        help=f'Logging level to configure: {", ".join(str(e) for e in LogLevel)} (default warn)'
    )

    parser.add_argument(
        '--log-file',
        type=str,
        default=None,
        help='Logfile to write to (defaults to none (=console))'
    )

    parser.add_argument(
        '-L', '--loaders',
        action='store_true',
        help="List all spec file loaders"
    )

    commands = parser.add_subparsers(dest='command', metavar='command')

    types = []
    registered = ', '.join(Loader.loader_types())
    unavailable = ', '.join(qfiso.loaders.failed_plugins().keys())
    if registered:
        types.append(f"loaders: {registered}")
    if unavailable:
        types.append(f"unavailable: {unavailable}")

    modular = commands.add_parser('modular', help='Modular data report of a subspace spec file')
    modular.add_argument('spec_file', nargs='?', default=None,
                         help=f'Spec file, optionally as type:path ({"; ".join(types)});'
                              ' defaults to [modular] spec_file of --config')
    modular.add_argument('-c', '--config', default=None, help='Experiment config (INI)')
    modular.add_argument('-o', '--output', default=None, help='Write the report here')

    suite = commands.add_parser('suite', help='Seeded random invariant suite')
    suite.add_argument('--seed', type=_non_negative_int, default=None,
                       help='Random seed (default: [suite] seed, 42)')
    suite.add_argument('--trials', type=_positive_int, default=None,
                       help='Number of trials (default: [suite] trials, 100)')
    suite.add_argument('-c', '--config', default=None, help='Experiment config (INI)')

    sweep = commands.add_parser('kg-sweep', help='Klein-Gordon Hilbert-Schmidt mass sweep')
    sweep.add_argument('-c', '--config', default=None, help='Experiment config (INI)')

    kernel = commands.add_parser('kg-kernel', help='Kernel quadrature bounds')
    kernel.add_argument('-c', '--config', default=None, help='Experiment config (INI)')

    plot = commands.add_parser('plot', help='Emit a plotting script for a sweep CSV')
    plot.add_argument('csv', help='Sweep CSV')
    plot.add_argument('-o', '--output', default=None,
                      help='Script path (default: plot_<csv name>.py next to the CSV)')

    config = commands.add_parser('config', help='Print the effective experiment config')
    config.add_argument('-c', '--config', default=None, help='Experiment config (INI)')

    args = parser.parse_args(argv)
    if not args.command and not args.loaders:
        parser.error('a command is required')
    return args


def _list_loaders():
    print("Available loaders:")
    print(', '.join(Loader.loader_types()))
    failed = qfiso.loaders.failed_plugins()
    if failed:
        print("")
        print("Unavailable loaders:")
        for name, reason in failed.items():
            print(f"{name}:\n\t{reason}")


def _run_modular(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    spec_file = args.spec_file or config.modular.spec_file
    if not spec_file:
        raise ConfigError('no spec file given')
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as out:
            passed = modular_report_from_file(spec_file, out, config.tolerances())
    else:
        passed = modular_report_from_file(spec_file, sys.stdout, config.tolerances())
    return EXIT_OK if passed else EXIT_FAILURE


def _run_suite(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    seed = config.suite.seed if args.seed is None else args.seed
    trials = config.suite.trials if args.trials is None else args.trials
    result = run_random_suite(seed, trials, config.tolerances())
    write_summary(result, sys.stdout)
    return EXIT_OK if result.failures == 0 else EXIT_FAILURE


def _run_sweep(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    target = run_kg_sweep(config)
    print(f'wrote {target}')
    return EXIT_OK


def _run_kernel(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    target, results = run_kernel_bounds(config)
    for res in results:
        print(f'd={res.dim} m={res.mass:g}: phi {res.bound_phi:.6g}, pi {res.bound_pi:.6g}'
              f' (levels {res.levels}, change {res.rel_change:.2e})')
    uniform = [m for m in config.kernel.masses if 0 < m <= 1]
    if uniform:
        report = check_mass_uniform_constants(uniform)
        print(f'mass-uniform constants on {report.samples} samples: F {report.f_max:.6g},'
              f' G {report.g_max:.6g}, literal {report.literal_max:.6g}')
        if not report.passed:
            print('mass-uniform estimates violated', file=sys.stderr)
            return EXIT_FAILURE
    print(f'wrote {target}')
    return EXIT_OK


def _run_plot(args) -> int:
    target = emit_plot(args.csv, args.output)
    print(f'wrote {target}')
    return EXIT_OK


def _run_config(args) -> int:
    sys.stdout.write(ExperimentConfig.from_file(args.config).to_string())
    return EXIT_OK


COMMANDS = {
    'modular': _run_modular,
    'suite': _run_suite,
    'kg-sweep': _run_sweep,
    'kg-kernel': _run_kernel,
    'plot': _run_plot,
    'config': _run_config,
}


def run(argv=None) -> int:
    """Parse argv, run the command and map errors to exit codes"""
    args = parse_args(argv)

    configure_logging(args.log_level, args.log_file)
    LOGGER.debug('Logging for qfiso configured at: %s', args.log_level)

    def usr1_handler(_signum, _frame):
        """USR1 signal handler -- enable debug logging"""
        set_level(LogLevel.DEBUG)
        LOGGER.debug('debug logging enabled by SIGUSR1')

    if 'SIGUSR1' in dir(signal):
        # Doesn't work on windows
        signal.signal(signal.SIGUSR1, usr1_handler)

    if args.loaders:
        _list_loaders()
        if not args.command:
            return EXIT_OK

    try:
        return COMMANDS[args.command](args)
    except SweepTruncated as ex:
        print(f'interrupted: {ex}; partial CSV written', file=sys.stderr)
        return EXIT_FAILURE
    except FAILURES as ex:
        LOGGER.debug("exception", exc_info=True)
        print(f'{type(ex).__name__}: {ex}', file=sys.stderr)
        return EXIT_FAILURE
    except INPUT_ERRORS as ex:
        LOGGER.debug("exception", exc_info=True)
        print(f'{type(ex).__name__}: {ex}', file=sys.stderr)
        return EXIT_INPUT


def main():
    """Zee main(), like in C"""
    sys.exit(run())


if __name__ == "__main__":
    main()
