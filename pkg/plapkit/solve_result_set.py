#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import os
import sys
import logging
from collections import OrderedDict

import numpy as np
import pandas as pd
from tqdm import tqdm

from .errors import NoConvergedStart, PlapkitError
from .ground_state_processor import GroundStateProcessor, SolveConfig
from .lattice import CoefficientProfile
from .lattice_series import SequenceSeries

SWEEP_AXES = ('q', 'r', 'p', 'zeta', 'window')


class SolveResultSet:
    """
        Runs the solver for one parameter set (or along a sweep axis) and collects plot-ready rows.

        :param params: the exponents p, q, r, zeta
        :type params: ProblemParams
        :param config: solver settings
        :type config: SolveConfig
        :param profile: coefficient family tag, 'constant', 'appendix1' or 'custom' (default 'constant')
        :type profile: str
        :param overrides: (optional) per-site coefficients of the custom family
        :type overrides: pandas.DataFrame

        :Example:

        >>> import plapkit
        >>> srs = plapkit.SolveResultSet(plapkit.ProblemParams(2, 3), plapkit.SolveConfig(N=16, starts=4))
        >>> srs.solve('both')
        >>> srs.results[['mode', 'energy', 'converged']]
    """

    SOLVE_COLUMNS = ['mode', 'p', 'q', 'r', 'zeta', 'N', 'energy', 'stationarity', 'sign_changes', 'iterations',
                     'converged', 'seed', 'profile']

    SWEEP_COLUMNS = ['param', 'value', 'p', 'q', 'r', 'zeta', 'N', 'ground_energy', 'sign_changing_energy', 'ratio',
                     'split_energy', 'theorem_holds', 'sign_changes', 'converged', 'seed', 'profile']

    def __init__(self, params, config=None, profile='constant', overrides=None):
        try:
            self.params = params
            self.config = config or SolveConfig()
            self.profile = profile
            self.overrides = overrides
            CoefficientProfile.from_tag(profile, params, overrides)
            self.results = pd.DataFrame(columns=self.SOLVE_COLUMNS)
            self.minimizers = OrderedDict()
        except ValueError as verr:
            logging.error("SolveResultSet ValueError ->%s", verr)
            raise
        except:
            logging.error("Unexpected error on SolveResultSet init: %s", sys.exc_info()[0])
            raise
        logging.debug("SolveResultSet init")

    def processor(self, params=None):
        params = params or self.params
        return GroundStateProcessor(CoefficientProfile.from_tag(self.profile, params, self.overrides), params,
                                    tol=self.config.tol_proj)

    def _solve_row(self, result, params, config):
        p, q, r, zeta = params
        return OrderedDict([('mode', result.mode), ('p', p), ('q', q), ('r', r), ('zeta', zeta), ('N', config.N),
                            ('energy', result.energy), ('stationarity', result.stationarity),
                            ('sign_changes', result.sign_changes), ('iterations', result.iterations),
                            ('converged', result.converged), ('seed', config.seed), ('profile', self.profile)])

    def solve(self, mode='ground'):
        """
            Solves for the ground state, the sign-changing ground state or both ('both'), filling `results` and
            `minimizers`. With 'both' the halves of the sign-changing minimizer, projected onto the Nehari set, are
            added as ground-state seeds.

            :param mode: 'ground', 'sign_changing' or 'both'
            :type mode: str
            :raises NoConvergedStart: when a mode has no converged start
        """
        if mode not in ('ground', 'sign_changing', 'both'):
            raise ValueError('unknown mode {}'.format(mode))
        gsp = self.processor()
        rows = []
        extra = None
        if mode in ('sign_changing', 'both'):
            result = gsp.minimize_sign_changing(self.config)
            self.minimizers['sign_changing'] = result
            rows.append(self._solve_row(result, self.params, self.config))
            if mode == 'both':
                plus, minus, _ = gsp.split_projection(result.minimizer)
                extra = [plus.u, minus.u]
        if mode in ('ground', 'both'):
            result = gsp.minimize_ground_state(self.config, extra_seeds=extra)
            self.minimizers['ground'] = result
            rows.insert(0, self._solve_row(result, self.params, self.config))
        self.results = pd.DataFrame(rows, columns=self.SOLVE_COLUMNS)

    def theorem_holds(self):
        """m* >= 2c* - 1e-8 \\|m*\\| for the solved pair, with a single sign change of the sign-changing minimizer."""
        ground, sign = self.minimizers.get('ground'), self.minimizers.get('sign_changing')
        if ground is None or sign is None:
            return None
        return bool(sign.energy >= 2.0 * ground.energy - 1e-8 * abs(sign.energy) and sign.sign_changes == 1)

    def _sweep_point(self, axis, value):
        params, config = self.params, self.config
        if axis == 'window':
            config = config.replace(N=int(value))
        elif axis == 'q' and params.zeta <= value:
            params = params.replace(q=value, zeta=value + 1.0)
        else:
            params = params.replace(**{axis: value})
        gsp = self.processor(params)
        p, q, r, zeta = params
        row = OrderedDict([('param', axis), ('value', value), ('p', p), ('q', q), ('r', r), ('zeta', zeta),
                           ('N', config.N), ('ground_energy', np.nan), ('sign_changing_energy', np.nan),
                           ('ratio', np.nan), ('split_energy', np.nan), ('theorem_holds', False),
                           ('sign_changes', -1), ('converged', False), ('seed', config.seed),
                           ('profile', self.profile)])
        try:
            sign = gsp.minimize_sign_changing(config)
            plus, minus, split = gsp.split_projection(sign.minimizer)
            ground = gsp.minimize_ground_state(config, extra_seeds=[plus.u, minus.u])
        except NoConvergedStart as err:
            logging.warning("sweep %s=%s: %s", axis, value, err)
            return row
        except PlapkitError as err:
            logging.error("sweep %s=%s failed: %s", axis, value, err)
            return row
        row.update(ground_energy=ground.energy, sign_changing_energy=sign.energy, ratio=sign.energy / ground.energy,
                   split_energy=split, sign_changes=sign.sign_changes, converged=True,
                   theorem_holds=bool(sign.energy >= 2.0 * ground.energy - 1e-8 * abs(sign.energy)
                                      and sign.sign_changes == 1))
        return row

    def sweep(self, axis, values):
        """
            Solves both problems at every value of one axis and checks m* >= 2c* on each row.

            :param axis: one of 'q', 'r', 'p', 'zeta', 'window'
            :type axis: str
            :param values: the axis values
            :type values: iterable of float
            :rtype: pandas.DataFrame
        """
        if axis not in SWEEP_AXES:
            raise ValueError('unknown sweep axis {}'.format(axis))
        rows = [self._sweep_point(axis, value) for value in tqdm(list(values), desc='sweep ' + axis,
                                                                 disable=not self.config.progress)]
        self.results = pd.DataFrame(rows, columns=self.SWEEP_COLUMNS)
        return self.results

    @property
    def passed(self):
        if 'theorem_holds' in self.results:
            return bool(len(self.results)) and bool(self.results['theorem_holds'].all())
        return bool(len(self.results)) and bool(self.results['converged'].all())

    def write_output(self, filename):
        """
            Writes `results` as CSV with a header row.

            :param filename: the output path
            :type filename: str
        """
        try:
            self.results.to_csv(path_or_buf=filename, index=False)
        except IOError as e:
            ierr = "({}): {}".format(e.errno, e.strerror)
            logging.error("SolveResultSet write_output I/O error %s", ierr)
            raise

    def write_minimizers(self, folder):
        """
            Dumps every minimizer to `folder`/minimizer_<mode>.tsv in the Sequence dump format. The header carries
            the scalings and residuals of a fresh projection of the minimizer (t0 for the ground state, s0 and t0 for
            the sign-changing one, both close to 1).

            :return: the written paths
            :rtype: list of str
        """
        series = SequenceSeries()
        gsp = self.processor()
        paths = []
        p, q, r, zeta = self.params
        for mode, result in self.minimizers.items():
            path = os.path.join(folder, 'minimizer_{}.tsv'.format(mode))
            header = OrderedDict([('mode', mode), ('p', p), ('q', q), ('r', r), ('zeta', zeta),
                                  ('profile', self.profile), ('energy', result.energy),
                                  ('stationarity', result.stationarity)])
            if mode == 'ground':
                point = gsp.project_nehari(result.minimizer)
                header.update(t0=point.t0, residual=point.residual)
            else:
                point = gsp.project_sign_changing(result.minimizer)
                header.update(s0=point.s0, t0=point.t0, residual_plus=point.residuals[0],
                              residual_minus=point.residuals[1])
            header['seed'] = self.config.seed
            series.dump(result.minimizer, path, header)
            paths.append(path)
        return paths
