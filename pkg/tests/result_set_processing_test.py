#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import os
import shutil
import tempfile
import unittest

import pandas as pd
import pandas_validator as pv

import plapkit
from plapkit.verification_result_set import CHECKS, EVEN_P_CHECKS, SUITES

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')


class VerificationDataFrameValidator(pv.DataFrameValidator):
    column_num = 11
    samples = pv.IntegerColumnValidator('samples', min_value=1)
    min_slack = pv.FloatColumnValidator('min_slack', min_value=0)
    N = pv.IntegerColumnValidator('N', min_value=1)


class CounterexampleDataFrameValidator(pv.DataFrameValidator):
    column_num = 9
    row_num = 6
    N = pv.IntegerColumnValidator('N', min_value=4, max_value=10 ** 5)
    site_sum = pv.FloatColumnValidator('site_sum', min_value=0)
    tail_bound = pv.FloatColumnValidator('tail_bound', min_value=0)


class SolveDataFrameValidator(pv.DataFrameValidator):
    column_num = 13
    row_num = 2
    energy = pv.FloatColumnValidator('energy', min_value=0)
    stationarity = pv.FloatColumnValidator('stationarity', min_value=0, max_value=1e-8)


class VerificationResultSetTest(unittest.TestCase):
    def setUp(self):
        self.coeff = plapkit.CoefficientProfile.constant()
        self.vrs = plapkit.VerificationResultSet(self.coeff, plapkit.ProblemParams(2, 3), N=4, samples=10, seed=2)
        self.folder = tempfile.mkdtemp()

    def tearDown(self):
        self.vrs = None
        shutil.rmtree(self.folder)

    def assert_suite_passes(self, vrs, suite):
        vrs.process(suite)
        self.assertEqual(list(vrs.results['id']), vrs.checks(suite))
        self.assertEqual(True, VerificationDataFrameValidator().is_valid(vrs.results))
        self.assertTrue(vrs.passed)

    def test_gradient_suite(self):
        self.assert_suite_passes(self.vrs, 'gradient')

    def test_inequalities_suite(self):
        self.assert_suite_passes(self.vrs, 'inequalities')

    def test_projection_suite(self):
        self.assert_suite_passes(self.vrs, 'projection')

    def test_decomposition_suite(self):
        vrs = plapkit.VerificationResultSet(self.coeff, plapkit.ProblemParams(4, 5), N=4, samples=10)
        self.assert_suite_passes(vrs, 'decomposition')

    def test_checks_of_odd_p(self):
        vrs = plapkit.VerificationResultSet(self.coeff, plapkit.ProblemParams(3, 4), N=4, samples=5)
        self.assertEqual(vrs.checks('decomposition'), [])
        self.assertEqual(len(vrs.checks()), len(CHECKS) - len(EVEN_P_CHECKS))
        self.assertEqual(self.vrs.checks(), CHECKS)
        self.assertEqual(self.vrs.checks('gradient'), SUITES['gradient'])
        with self.assertRaises(ValueError):
            self.vrs.checks('everything')
        with self.assertRaises(ValueError):
            self.vrs.run_check('no_such_check')

    def test_check_is_reproducible(self):
        first = self.vrs.run_check('gradient_fd')
        second = plapkit.VerificationResultSet(self.coeff, plapkit.ProblemParams(2, 3), N=4, samples=10,
                                               seed=2).run_check('gradient_fd')
        self.assertEqual(first, second)

    def test_counterexample(self):
        frame = plapkit.VerificationResultSet.counterexample(plapkit.SeriesParams(2, 2, 1), N_max=10 ** 5)
        self.assertEqual(list(frame['N']), [4, 10, 100, 1000, 10 ** 4, 10 ** 5])
        self.assertTrue(frame['decreasing'].all())
        self.assertEqual(True, CounterexampleDataFrameValidator().is_valid(frame))

    def test_write_output(self):
        self.vrs.process('gradient')
        path = os.path.join(self.folder, 'verify.csv')
        self.vrs.write_output(path)
        loaded = pd.read_csv(path)
        self.assertEqual(list(loaded.columns), plapkit.VerificationResultSet.COLUMNS)
        self.assertEqual(list(loaded['id']), SUITES['gradient'])


class SolveResultSetTest(unittest.TestCase):
    def setUp(self):
        config = plapkit.SolveConfig(N=6, starts=2, seed=3)
        self.params = plapkit.ProblemParams(2, 3, 1, 4)
        self.srs = plapkit.SolveResultSet(self.params, config)
        self.folder = tempfile.mkdtemp()

    def tearDown(self):
        self.srs = None
        shutil.rmtree(self.folder)

    def test_solve_both(self):
        self.srs.solve('both')
        frame = self.srs.results
        self.assertEqual(list(frame['mode']), ['ground', 'sign_changing'])
        self.assertEqual(True, SolveDataFrameValidator().is_valid(frame))
        self.assertTrue(self.srs.theorem_holds())
        self.assertTrue(self.srs.passed)

        paths = self.srs.write_minimizers(self.folder)
        self.assertEqual(len(paths), 2)
        u, header = plapkit.SequenceSeries().load(os.path.join(self.folder, 'minimizer_ground.tsv'))
        self.assertEqual(u, self.srs.minimizers['ground'].minimizer)
        self.assertEqual(header['mode'], 'ground')
        self.assertEqual(float(header['energy']), self.srs.minimizers['ground'].energy)
        self.assertAlmostEqual(float(header['t0']), 1.0, places=8)
        self.assertLessEqual(float(header['residual']), 1e-10)
        _, header = plapkit.SequenceSeries().load(os.path.join(self.folder, 'minimizer_sign_changing.tsv'))
        self.assertEqual(header['mode'], 'sign_changing')
        self.assertAlmostEqual(float(header['s0']), 1.0, places=8)
        self.assertAlmostEqual(float(header['t0']), 1.0, places=8)
        self.assertLessEqual(max(float(header['residual_plus']), float(header['residual_minus'])), 1e-10)

        path = os.path.join(self.folder, 'solve.csv')
        self.srs.write_output(path)
        self.assertEqual(list(pd.read_csv(path).columns), plapkit.SolveResultSet.SOLVE_COLUMNS)

    def test_theorem_needs_both_modes(self):
        self.srs.solve('ground')
        self.assertIsNone(self.srs.theorem_holds())
        with self.assertRaises(ValueError):
            self.srs.solve('nodal')

    def test_sweep(self):
        frame = self.srs.sweep('r', [1.0, 1.5])
        self.assertEqual(list(frame.columns), plapkit.SolveResultSet.SWEEP_COLUMNS)
        self.assertEqual(list(frame['value']), [1.0, 1.5])
        self.assertTrue(frame['converged'].all())
        self.assertTrue(frame['theorem_holds'].all())
        self.assertTrue((frame['ratio'] >= 2.0 - 1e-8).all())
        with self.assertRaises(ValueError):
            self.srs.sweep('b', [1.0])

    def test_unknown_profile(self):
        with self.assertRaises(ValueError):
            plapkit.SolveResultSet(self.params, profile='periodic')

    def test_overrides_on_polynomial_profile(self):
        overrides = plapkit.load_coefficient_file(os.path.join(DATA, 'coefficients.tsv'))
        srs = plapkit.SolveResultSet(self.params, plapkit.SolveConfig(N=6, starts=1), 'appendix1', overrides)
        coeff = srs.processor().coeff
        window = plapkit.LatticeWindow(6)
        self.assertEqual(coeff.b_values(window)[6], 3.0)
        self.assertEqual(coeff.c_values(window)[6 + 2], 2.0)
        self.assertEqual(coeff.c_values(window)[6 + 5], 25.0)


if __name__ == '__main__':
    unittest.main()
