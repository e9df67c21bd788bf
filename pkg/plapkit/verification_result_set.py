#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import sys
import math
import logging
from collections import OrderedDict

import numpy as np
import pandas as pd
from tqdm import tqdm

from .errors import PlapkitError
from .inequality_processor import (InequalityProcessor, ThetaInputs, THETA_VARIANTS, appendix1_norm_partial_sums,
                                   appendix1_partial_sums, growth_bound_fit, monotone_quotient, random_sign_changing,
                                   scalar_log_inequality, theta, theta_prime, theta_ratio, theta_scale)
from .lattice import LatticeWindow, Sequence
from .nehari_processor import NehariProcessor
from .utils import decade_checkpoints

SUITES = OrderedDict([
    ('decomposition', ['decomposition']),
    ('inequalities', ['scalar_log', 'theta', 'theta_prime', 'theta_ratio', 'lemma22', 'corollary23',
                      'corollary23_remainder', 'monotone_quotient', 'embedding', 'growth_bound']),
    ('gradient', ['gradient_fd', 'gradient_duality']),
    ('projection', ['nehari_residual', 'nehari_ray', 'nehari_fiber_max', 'sign_changing_residual',
                    'sign_changing_start', 'sign_changing_fiber_max']),
])

CHECKS = [check for checks in SUITES.values() for check in checks]

EVEN_P_CHECKS = ('decomposition', 'theta', 'lemma22')


class VerificationResultSet:
    """
        Runs the numerical certificates in suites and collects one row per check.

        Every check evaluates a slack on a set of samples; the slack is shifted by the check tolerance so that a check
        passes exactly when its smallest slack is nonnegative. `argmin` is the index of the worst sample.

        :param coeff: the weights a, b, c
        :type coeff: CoefficientProfile
        :param params: the exponents p, q, r, zeta
        :type params: ProblemParams
        :param N: window radius of the sampled sequences (8 default)
        :type N: int
        :param samples: samples per randomized check (100 default)
        :type samples: int
        :param seed: seed of the sample streams (0 default)
        :type seed: int
        :param progress: show a tqdm progress bar (False default)
        :type progress: bool

        :Example:

        >>> import plapkit
        >>> vrs = plapkit.VerificationResultSet(plapkit.CoefficientProfile.constant(), plapkit.ProblemParams(2, 3))
        >>> vrs.process('gradient')
        >>> vrs.results.passed.all()
        True
    """

    COLUMNS = ['id', 'samples', 'min_slack', 'argmin', 'passed', 'p', 'q', 'r', 'zeta', 'N', 'seed']

    COUNTEREXAMPLE_COLUMNS = ['N', 'S_N', 'decreasing', 'difference_sum', 'site_sum', 'tail_bound', 'p', 'q', 'r']

    def __init__(self, coeff, params, N=8, samples=100, seed=0, progress=False):
        try:
            if samples < 1:
                raise ValueError('samples must be positive, got {}'.format(samples))
            self.coeff = coeff
            self.params = params
            self.window = LatticeWindow(N)
            self.samples = int(samples)
            self.seed = int(seed)
            self.progress = progress
            self.inequality = InequalityProcessor(coeff, params)
            self.nehari = NehariProcessor(coeff, params)
            self.results = pd.DataFrame(columns=self.COLUMNS)
        except ValueError as verr:
            logging.error("VerificationResultSet ValueError ->%s", verr)
            raise
        except:
            logging.error("Unexpected error on VerificationResultSet init: %s", sys.exc_info()[0])
            raise
        logging.debug("VerificationResultSet init")

    def checks(self, suite='all'):
        """
            Check ids of a suite. Checks that need an even p are left out when p is odd.

            :param suite: 'decomposition', 'inequalities', 'gradient', 'projection' or 'all'
            :type suite: str
            :rtype: list of str
        """
        if suite == 'all':
            ids = list(CHECKS)
        elif suite in SUITES:
            ids = list(SUITES[suite])
        else:
            raise ValueError('unknown suite {}'.format(suite))
        if not self.params.even_p:
            ids = [i for i in ids if i not in EVEN_P_CHECKS]
        return ids

    def _rng(self, check):
        return np.random.default_rng([self.seed, CHECKS.index(check)])

    def _random_u(self, rng):
        return random_sign_changing(self.window, rng)

    def _check_decomposition(self, rng):
        slacks = []
        for _ in range(self.samples):
            residuals = self.inequality.decomposition_residuals(self._random_u(rng), relative=True)
            slacks.append(1e-10 - max(abs(v) for v in residuals))
        return slacks

    def _check_scalar_log(self, rng):
        q, r = self.params.q, self.params.r
        taus = np.exp(rng.uniform(-math.log(1e3), math.log(1e3), self.samples))
        taus = taus[np.abs(taus - 1.0) >= 1e-3]
        # strict positivity away from tau = 1
        return [scalar_log_inequality(tau, q, r) for tau in taus]

    def _check_theta(self, rng):
        h = self.params.half_p
        slacks = []
        for s, t in rng.uniform(0.0, 3.0, (self.samples, 2)):
            for variant in THETA_VARIANTS:
                for i in range(h + 1):
                    for j in range(h + 1):
                        inputs = ThetaInputs(2 * h, i, j, s, t)
                        slacks.append(theta(inputs, variant) + 1e-12 * theta_scale(inputs, variant))
        return slacks

    def _check_theta_prime(self, rng):
        return [-abs(float(theta_prime(p, i, j))) for p in range(2, 13, 2)
                for i in range(p // 2 + 1) for j in range(p // 2 + 1)]

    def _check_theta_ratio(self, rng):
        slacks = []
        for p in range(2, 9, 2):
            for s1, s2, t1, t2 in rng.uniform(0.1, 3.0, (self.samples, 4)):
                for i in range(p // 2 + 1):
                    for j in range(p // 2 + 1):
                        scale = theta_scale(ThetaInputs(p, i, j, s2 / s1, t2 / t1))
                        slacks.append(theta_ratio(p, i, j, s1, s2, t1, t2) + 1e-12 * scale)
        return slacks

    def _check_lemma22(self, rng):
        slacks = []
        for _ in range(self.samples):
            u = self._random_u(rng)
            s, t = rng.uniform(0.0, 3.0, 2)
            slacks.append(self.inequality.lemma22_slack(u, s, t, relative=True) + 1e-9)
        return slacks

    def _check_corollary23(self, rng):
        slacks = []
        for _ in range(self.samples):
            u = self._random_u(rng)
            slacks.append(self.inequality.corollary23_slack(u, rng.uniform(0.0, 3.0), relative=True) + 1e-9)
        return slacks

    def _check_corollary23_remainder(self, rng):
        slacks = []
        for _ in range(self.samples):
            u = self._random_u(rng)
            t = rng.uniform(0.0, 3.0)
            slack = self.inequality.corollary23_slack(u, t)
            remainder = self.inequality.corollary23_remainder(u, t)
            scale = max(1.0, abs(self.inequality.energy(u).total), abs(self.inequality.energy(t * u).total))
            slacks.append(1e-9 - abs(slack - remainder) / scale)
        return slacks

    def _check_monotone_quotient(self, rng):
        slacks = []
        while len(slacks) < self.samples:
            a = rng.uniform(0.1, 5.0)
            if abs(a - 1.0) < 0.05:
                continue
            x1 = rng.uniform(0.1, 5.0)
            x2 = x1 + rng.uniform(0.1, 1.0)
            slacks.append(monotone_quotient(a, x1) - monotone_quotient(a, x2))
        return slacks

    def _check_embedding(self, rng):
        p = self.params.p
        slacks = []
        for _ in range(self.samples):
            u = self._random_u(rng)
            scale = max(1.0, self.inequality.norm_power(u) ** (1.0 / p))
            for kappa in (p, 2.0 * p, np.inf):
                slacks.append(self.inequality.embedding_slack(u, kappa) + 1e-12 * scale)
        return slacks

    def _check_growth_bound(self, rng):
        p = self.params.p
        epsilon = self.coeff.b0 / (p * self.coeff.c_bound(self.window))
        bound = growth_bound_fit(self.params, epsilon)
        return [bound.min_margin + 1e-12]

    def _check_gradient_fd(self, rng):
        slacks = []
        h = 1e-5
        for _ in range(self.samples):
            u = Sequence(self.window, rng.uniform(-2.0, 2.0, self.window.size))
            v = Sequence(self.window, rng.uniform(-1.0, 1.0, self.window.size))
            forward = self.inequality.energy(u + h * v).total
            backward = self.inequality.energy(u - h * v).total
            derivative = (forward - backward) / (2.0 * h)
            pairing = self.inequality.pairing(u, v)
            slacks.append(1e-6 - abs(derivative - pairing) / max(1.0, abs(pairing)))
        return slacks

    def _check_gradient_duality(self, rng):
        slacks = []
        for _ in range(self.samples):
            u = Sequence(self.window, rng.uniform(-2.0, 2.0, self.window.size))
            v = Sequence(self.window, rng.uniform(-1.0, 1.0, self.window.size))
            pairing = self.inequality.pairing(u, v)
            dual = float(np.dot(self.inequality.gradient(u).values, v.values))
            slacks.append(1e-10 - abs(dual - pairing) / max(1.0, abs(pairing)))
        return slacks

    def _check_nehari_residual(self, rng):
        tol = self.nehari.tol
        return [tol - self.nehari.project_nehari(self._random_u(rng)).residual for _ in range(self.samples)]

    def _check_nehari_ray(self, rng):
        slacks = []
        for _ in range(self.samples):
            u = self._random_u(rng)
            first = self.nehari.project_nehari(u).u
            second = self.nehari.project_nehari(rng.uniform(0.2, 5.0) * u).u
            scale = max(1.0, float(np.max(np.abs(first.values))))
            slacks.append(1e-8 - float(np.max(np.abs(first.values - second.values))) / scale)
        return slacks

    def _check_nehari_fiber_max(self, rng):
        return [1e-8 - self.nehari.fiber_max_check(self.nehari.project_nehari(self._random_u(rng)))
                for _ in range(self.samples)]

    def _check_sign_changing_residual(self, rng):
        tol = self.nehari.tol
        return [tol - max(self.nehari.project_sign_changing(self._random_u(rng)).residuals)
                for _ in range(self.samples)]

    def _check_sign_changing_start(self, rng):
        slacks = []
        for _ in range(self.samples):
            u = self._random_u(rng)
            first = self.nehari.project_sign_changing(u)
            lo, hi = first.box
            start = tuple(np.exp(rng.uniform(math.log(lo), math.log(hi), 2)))
            second = self.nehari.project_sign_changing(u, start=start)
            scale = max(1.0, abs(first.s0), abs(first.t0))
            slacks.append(1e-8 - max(abs(first.s0 - second.s0), abs(first.t0 - second.t0)) / scale)
        return slacks

    def _check_sign_changing_fiber_max(self, rng):
        return [1e-8 - self.nehari.fiber_max_check(self.nehari.project_sign_changing(self._random_u(rng)))
                for _ in range(self.samples)]

    def run_check(self, check):
        """
            Evaluates one check.

            :param check: a check id
            :type check: str
            :return: the row of the check
            :rtype: dict
        """
        if check not in CHECKS:
            raise ValueError('unknown check {}'.format(check))
        slacks = np.asarray(getattr(self, '_check_' + check)(self._rng(check)), dtype=float)
        k = int(np.argmin(slacks))
        min_slack = float(slacks[k])
        passed = bool(min_slack >= 0.0)
        if not passed:
            logging.warning("check %s failed: slack %s at sample %s", check, min_slack, k)
        p, q, r, zeta = self.params
        return OrderedDict([('id', check), ('samples', len(slacks)), ('min_slack', min_slack), ('argmin', k),
                            ('passed', passed), ('p', p), ('q', q), ('r', r), ('zeta', zeta),
                            ('N', self.window.radius), ('seed', self.seed)])

    def process(self, suite='all'):
        """
            Runs every check of the suite and stores the rows in `results`. A check that raises is recorded as failed
            with a NaN slack.

            :param suite: 'decomposition', 'inequalities', 'gradient', 'projection' or 'all'
            :type suite: str
        """
        rows = []
        for check in tqdm(self.checks(suite), desc=suite, disable=not self.progress):
            try:
                rows.append(self.run_check(check))
            except PlapkitError as err:
                logging.error("check %s raised %s: %s", check, type(err).__name__, err)
                p, q, r, zeta = self.params
                rows.append(OrderedDict([('id', check), ('samples', 0), ('min_slack', np.nan), ('argmin', -1),
                                         ('passed', False), ('p', p), ('q', q), ('r', r), ('zeta', zeta),
                                         ('N', self.window.radius), ('seed', self.seed)]))
        self.results = pd.DataFrame(rows, columns=self.COLUMNS)

    @property
    def passed(self):
        return bool(len(self.results)) and bool(self.results['passed'].all())

    @classmethod
    def counterexample(cls, series_params, N_max=10 ** 6, start=None):
        """
            The divergent series of the counterexample data at decade checkpoints, with the norm-defining partial sums
            next to it.

            :param series_params: p > 1, 1 < q <= 2, r >= 1
            :type series_params: SeriesParams
            :param N_max: last checkpoint (10**6 default)
            :type N_max: int
            :param start: (optional) first checkpoint, defaults to ceil(p+2)
            :type start: int
            :rtype: pandas.DataFrame
        """
        start = int(math.ceil(series_params.p + 2)) if start is None else int(start)
        checkpoints = decade_checkpoints(start, N_max)
        sums = appendix1_partial_sums(series_params, checkpoints)
        norms = appendix1_norm_partial_sums(series_params, checkpoints)
        decreasing = [True] + [bool(b < a) for a, b in zip(sums[:-1], sums[1:])]
        frame = pd.DataFrame({'N': checkpoints, 'S_N': sums, 'decreasing': decreasing,
                              'difference_sum': norms[:, 0], 'site_sum': norms[:, 1], 'tail_bound': norms[:, 2]})
        frame['p'], frame['q'], frame['r'] = series_params.p, series_params.q, series_params.r
        return frame[cls.COUNTEREXAMPLE_COLUMNS]

    def write_output(self, filename, frame=None):
        """
            Writes the results (or the given frame) as CSV with a header row.

            :param filename: the output path
            :type filename: str
        """
        frame = self.results if frame is None else frame
        try:
            frame.to_csv(path_or_buf=filename, index=False)
        except IOError as e:
            ierr = "({}): {}".format(e.errno, e.strerror)
            logging.error("VerificationResultSet write_output I/O error %s", ierr)
            raise
