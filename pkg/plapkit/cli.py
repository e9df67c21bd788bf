#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

"""
    Command line entry point::

        plapkit solve --p 2 --q 3 --r 1 --window 64 --mode both --seed 42
        plapkit verify --suite all --samples 1000
        plapkit counterexample --p 2 --q 2 --window 1000000
        plapkit sweep --param q --from 2.5 --to 4 --step 0.5

    Results are written as CSV (and minimizer dumps) to --out-dir, which defaults to $PLAPKIT_OUT_DIR or ./results.
    Exit status is 0 when everything passed or converged, 1 on a failed check or a run without converged start and 2
    on usage errors.
"""

import os
import sys
import math
import logging
from collections import namedtuple

import click

from .errors import InvalidParams, NoConvergedStart, PlapkitError
from .ground_state_processor import SolveConfig
from .inequality_processor import SeriesParams
from .lattice import CoefficientProfile, ProblemParams
from .solve_result_set import SWEEP_AXES, SolveResultSet
from .utils import load_coefficient_file
from .verification_result_set import SUITES, VerificationResultSet

COMMANDS = ('solve', 'verify', 'counterexample', 'sweep')

DEFAULT_WINDOW = {'solve': 64, 'sweep': 64, 'verify': 8, 'counterexample': 10 ** 6}

DEFAULT_OUT_DIR = 'results'


class ConstraintError(click.UsageError):
    """Flags that parse on their own but violate a constraint between them."""


class RunConfig(namedtuple('RunConfig', ['command', 'params', 'profile', 'coeff_file', 'solve', 'out_dir', 'suite',
                                         'samples', 'mode', 'sweep', 'verbose', 'quiet'])):
    """
        A validated invocation. `params` is a ProblemParams, or a SeriesParams for the counterexample command;
        `sweep` is (axis, values) or None.
    """
    __slots__ = ()


@click.command(context_settings={'help_option_names': ['-h', '--help']})
@click.argument('command', type=click.Choice(COMMANDS))
@click.option('--p', 'p', type=float, default=2.0, show_default=True, help='p-Laplacian exponent.')
@click.option('--q', 'q', type=float, default=None, help='Power of the nonlinearity [3, or 2 for counterexample].')
@click.option('--r', 'r', type=float, default=1.0, show_default=True, help='Weight inside the logarithm.')
@click.option('--zeta', 'zeta', type=float, default=None, help='Growth bound exponent [q + 1].')
@click.option('--window', 'window', type=int, default=None,
              help='Window radius N [64 solve/sweep, 8 verify, 10**6 counterexample].')
@click.option('--profile', type=click.Choice(CoefficientProfile.FAMILIES), default='constant', show_default=True)
@click.option('--coeff-file', 'coeff_file', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Per-site coefficients "n<TAB>a<TAB>b<TAB>c" overriding the profile family.')
@click.option('--mode', type=click.Choice(['ground', 'sign_changing', 'both']), default='ground', show_default=True)
@click.option('--tol', 'tol', type=float, default=1e-10, show_default=True, help='Projection tolerance.')
@click.option('--tol-grad', 'tol_grad', type=float, default=1e-8, show_default=True, help='Stationarity target.')
@click.option('--max-iter', 'max_iter', type=int, default=5000, show_default=True)
@click.option('--starts', type=int, default=16, show_default=True)
@click.option('--workers', type=int, default=1, show_default=True, help='Threads running solver starts.')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--out-dir', 'out_dir', type=click.Path(file_okay=False), envvar='PLAPKIT_OUT_DIR',
              default=DEFAULT_OUT_DIR, show_default=True)
@click.option('--suite', type=click.Choice(list(SUITES) + ['all']), default='all', show_default=True)
@click.option('--samples', type=int, default=100, show_default=True, help='Samples per randomized check.')
@click.option('--param', 'param', type=click.Choice(SWEEP_AXES), default='q', show_default=True,
              help='Sweep axis.')
@click.option('--from', 'sweep_from', type=float, default=None)
@click.option('--to', 'sweep_to', type=float, default=None)
@click.option('--step', 'sweep_step', type=float, default=None)
@click.option('--verbose', '-v', is_flag=True, help='Debug logging.')
@click.option('--quiet', is_flag=True, help='No progress bars.')
def command(**options):
    """Ground states and sign-changing ground states of the discrete p-Laplacian with logarithmic nonlinearity."""
    return build_config(options)


def _sweep_values(start, stop, step, axis):
    if start is None or stop is None or step is None:
        raise ConstraintError('sweep needs --from, --to and --step')
    if not step > 0:
        raise ConstraintError('--step must be positive, got {}'.format(step))
    if stop < start:
        raise ConstraintError('--to must not be below --from')
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    values = [round(start + k * step, 12) for k in range(count)]
    if axis == 'window':
        values = [int(v) for v in values]
        if min(values) < 1:
            raise ConstraintError('--from must be >= 1 for the window axis')
    return values


def build_config(options):
    """
        Validates the parsed options and returns a RunConfig.

        :raises ConstraintError: when flags contradict each other or the exponents are out of range
        :rtype: RunConfig
    """
    name = options['command']
    window = options['window'] if options['window'] is not None else DEFAULT_WINDOW[name]
    if window < 1:
        raise ConstraintError('--window must be >= 1, got {}'.format(window))

    if name == 'counterexample':
        q = 2.0 if options['q'] is None else options['q']
        params = SeriesParams(options['p'], q, options['r'])
        if not params.p > 1:
            raise ConstraintError('--p must be > 1, got {}'.format(params.p))
        if not 1 < params.q <= 2:
            raise ConstraintError('--q must satisfy 1 < q <= 2 for the divergent series, got {}'.format(params.q))
        if not params.r >= 1:
            raise ConstraintError('--r must be >= 1, got {}'.format(params.r))
        if window < params.p + 2:
            raise ConstraintError('--window must be >= p + 2, got {}'.format(window))
    else:
        q = 3.0 if options['q'] is None else options['q']
        try:
            params = ProblemParams(options['p'], q, options['r'], options['zeta'])
        except InvalidParams as err:
            raise ConstraintError('--p/--q/--r/--zeta need 1 < p < q < zeta and r >= 1: {}'.format(err))

    if name == 'verify' and options['suite'] == 'decomposition' and not params.even_p:
        raise ConstraintError('--suite decomposition needs an even --p, got {}'.format(params.p))
    if options['profile'] == 'custom' and options['coeff_file'] is None:
        raise ConstraintError('--profile custom needs --coeff-file')
    if options['samples'] < 1:
        raise ConstraintError('--samples must be positive, got {}'.format(options['samples']))

    try:
        solve = SolveConfig(N=window, starts=options['starts'], max_iter=options['max_iter'],
                            tol_grad=options['tol_grad'], tol_proj=options['tol'], seed=options['seed'],
                            workers=options['workers'], progress=not options['quiet'])
    except ValueError as err:
        raise ConstraintError(str(err))

    sweep = None
    if name == 'sweep':
        sweep = (options['param'], _sweep_values(options['sweep_from'], options['sweep_to'], options['sweep_step'],
                                                 options['param']))

    return RunConfig(name, params, options['profile'], options['coeff_file'], solve, options['out_dir'],
                     options['suite'], options['samples'], options['mode'], sweep, options['verbose'],
                     options['quiet'])


def parse_config(argv):
    """
        Parses command line arguments into a RunConfig.

        :param argv: the arguments without the program name
        :type argv: list of str
        :raises click.UsageError: on unknown or malformed flags (ConstraintError for inconsistent ones)
        :rtype: RunConfig

        :Example:

        >>> parse_config(['solve', '--p', '2', '--q', '3', '--window', '64', '--seed', '42']).solve.seed
        42
    """
    ctx = command.make_context('plapkit', list(argv))
    with ctx:
        try:
            return build_config(ctx.params)
        except ConstraintError as err:
            err.ctx = ctx
            raise


def _overrides(config):
    return load_coefficient_file(config.coeff_file) if config.coeff_file else None


def _run_solve(config):
    result_set = SolveResultSet(config.params, config.solve, config.profile, _overrides(config))
    result_set.solve(config.mode)
    result_set.write_output(os.path.join(config.out_dir, 'solve_{}.csv'.format(config.mode)))
    result_set.write_minimizers(config.out_dir)
    for row in result_set.results.itertuples():
        click.echo('{} energy={!r} stationarity={!r} sign_changes={} iterations={} converged={}'.format(
            row.mode, row.energy, row.stationarity, row.sign_changes, row.iterations, row.converged))
    holds = result_set.theorem_holds()
    if holds is not None:
        click.echo('m* >= 2c*: {}'.format(holds))
        return 0 if holds and result_set.passed else 1
    return 0 if result_set.passed else 1


def _run_verify(config):
    coeff = CoefficientProfile.from_tag(config.profile, config.params, _overrides(config))
    result_set = VerificationResultSet(coeff, config.params, N=config.solve.N, samples=config.samples,
                                       seed=config.solve.seed, progress=config.solve.progress)
    result_set.process(config.suite)
    result_set.write_output(os.path.join(config.out_dir, 'verify_{}.csv'.format(config.suite)))
    for row in result_set.results.itertuples():
        click.echo('{} samples={} min_slack={!r} passed={}'.format(row.id, row.samples, row.min_slack, row.passed))
    return 0 if result_set.passed else 1


def _run_counterexample(config):
    frame = VerificationResultSet.counterexample(config.params, N_max=config.solve.N)
    path = os.path.join(config.out_dir, 'counterexample.csv')
    try:
        frame.to_csv(path_or_buf=path, index=False)
    except IOError as e:
        logging.error("counterexample I/O error (%s): %s", e.errno, e.strerror)
        raise
    last = frame.iloc[-1]
    passed = bool(frame['decreasing'].all())
    click.echo('N={} S_N={!r} decreasing={}'.format(int(last['N']), float(last['S_N']), passed))
    return 0 if passed else 1


def _run_sweep(config):
    axis, values = config.sweep
    result_set = SolveResultSet(config.params, config.solve, config.profile, _overrides(config))
    frame = result_set.sweep(axis, values)
    result_set.write_output(os.path.join(config.out_dir, 'sweep_{}.csv'.format(axis)))
    for row in frame.itertuples():
        click.echo('{}={} c*={!r} m*={!r} ratio={!r} holds={}'.format(
            axis, row.value, row.ground_energy, row.sign_changing_energy, row.ratio, row.theorem_holds))
    return 0 if result_set.passed else 1


RUNNERS = {'solve': _run_solve, 'verify': _run_verify, 'counterexample': _run_counterexample, 'sweep': _run_sweep}


def run(config):
    """
        Executes a RunConfig and returns the exit status.

        :param config: the invocation
        :type config: RunConfig
        :rtype: int
    """
    try:
        os.makedirs(config.out_dir, exist_ok=True)
    except OSError as e:
        click.echo('plapkit: cannot create output directory {}: {}'.format(config.out_dir, e.strerror), err=True)
        return 2
    try:
        return RUNNERS[config.command](config)
    except NoConvergedStart as err:
        click.echo('plapkit: {}'.format(err), err=True)
        for diagnostic in err.diagnostics:
            logging.info("start diagnostics %s", diagnostic)
        return 1
    except PlapkitError as err:
        click.echo('plapkit: {}: {}'.format(type(err).__name__, err), err=True)
        return 1


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except click.exceptions.Exit as done:
        return done.exit_code
    except click.UsageError as err:
        err.show()
        return err.exit_code
    logging.basicConfig(level=logging.DEBUG if config.verbose else logging.WARNING,
                        format='%(asctime)s %(levelname)s %(message)s')
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
