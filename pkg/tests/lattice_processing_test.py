#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import os
import shutil
import tempfile
import unittest

import numpy as np
import pandas as pd
import pandas_validator as pv

import plapkit
from plapkit.errors import InvalidParams, NonPositiveCoefficient, WindowTooSmall
from plapkit.utils import binomial, decade_checkpoints, log_power, phi_p

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')


class SpikeDumpDataFrameValidator(pv.DataFrameValidator):
    column_num = 2
    row_num = 5
    index_column = pv.IntegerColumnValidator('index', min_value=-2, max_value=2)
    value = pv.FloatColumnValidator('value', min_value=0, max_value=2)


class LatticeProcessingTest(unittest.TestCase):
    def setUp(self):
        self.params = plapkit.ProblemParams(2, 3, 1, 4)
        self.coeff = plapkit.CoefficientProfile.constant()
        self.folder = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.folder)

    def test_window(self):
        window = plapkit.LatticeWindow(2)
        self.assertEqual(window.size, 5)
        self.assertEqual(list(window.indices), [-2, -1, 0, 1, 2])
        self.assertEqual(list(window.difference_indices), [-3, -2, -1, 0, 1, 2])
        with self.assertRaises(ValueError):
            plapkit.LatticeWindow(0)

    def test_sequence_is_frozen_and_finite(self):
        u = plapkit.Sequence(1, [1.0, 2.0, 3.0])
        with self.assertRaises(ValueError):
            u.values[0] = 5.0
        with self.assertRaises(ValueError):
            plapkit.Sequence(1, [1.0, np.nan, 3.0])
        with self.assertRaises(ValueError):
            plapkit.Sequence(1, [1.0, 2.0])
        self.assertEqual(u.at(5), 0.0)
        self.assertEqual((2.0 * u - u).values.tolist(), [1.0, 2.0, 3.0])

    def test_forward_difference(self):
        u = plapkit.Sequence(2, [0, 0, 1, 3, 2])
        du = plapkit.forward_difference(u)
        self.assertEqual(du.at(0), 2.0)
        self.assertEqual(du.at(1), -1.0)
        self.assertEqual(du.at(2), -2.0)
        self.assertTrue(plapkit.forward_difference(plapkit.Sequence.zeros(3)).is_zero())

    def test_forward_difference_spike(self):
        du = plapkit.forward_difference(plapkit.Sequence.spike(3, 1.5))
        self.assertEqual(du.at(-1), 1.5)
        self.assertEqual(du.at(0), -1.5)
        self.assertEqual(np.count_nonzero(du.values), 2)

    def test_sign_split(self):
        plus, minus = plapkit.sign_split(plapkit.Sequence(1, [1, -2, 0]))
        self.assertEqual(plus.values.tolist(), [1, 0, 0])
        self.assertEqual(minus.values.tolist(), [0, -2, 0])
        u = plapkit.Sequence(1, [0, -1, 3])
        plus, minus = plapkit.sign_split(u)
        self.assertEqual(plus + minus, u)
        dp = plapkit.forward_difference(plus).at(0)
        dm = plapkit.forward_difference(minus).at(0)
        self.assertEqual(dp * dm, 3.0)

    def test_norm_of_spike(self):
        u = plapkit.Sequence.spike(4, 2.0)
        self.assertEqual(plapkit.norm_p_power(u, self.coeff, self.params), 12.0)
        self.assertAlmostEqual(plapkit.weighted_norm_p(u, self.coeff, self.params), 12.0 ** 0.5, places=14)
        self.assertEqual(plapkit.norm_p_power(plapkit.Sequence.zeros(4), self.coeff, self.params), 0.0)

    def test_lp_norm(self):
        u = plapkit.Sequence(1, [3, 0, -4])
        self.assertEqual(plapkit.lp_norm(u, 2), 5.0)
        self.assertEqual(plapkit.lp_norm(u, np.inf), 4.0)

    def test_sign_change_count(self):
        self.assertEqual(plapkit.sign_change_count(plapkit.Sequence(1, [1, -1, 2])), 2)
        self.assertEqual(plapkit.sign_change_count(plapkit.Sequence(1, [1, 0, -1])), 1)
        self.assertEqual(plapkit.sign_change_count(plapkit.Sequence.zeros(1)), 0)
        u = plapkit.Sequence(2, [0.3, -1, 0, 2, -0.1])
        self.assertEqual(plapkit.sign_change_count(4.0 * u), plapkit.sign_change_count(-u))

    def test_params_validation(self):
        self.assertEqual(plapkit.ProblemParams(2, 3).zeta, 4.0)
        self.assertTrue(plapkit.ProblemParams(4, 5).even_p)
        self.assertFalse(plapkit.ProblemParams(3, 4).even_p)
        self.assertFalse(plapkit.ProblemParams(2.5, 4).even_p)
        for bad in ((1, 3), (2, 1.5), (2, 3, 0.5), (2, 3, 1, 3)):
            with self.assertRaises(InvalidParams):
                plapkit.ProblemParams(*bad)

    def test_appendix1_profile(self):
        u, coeff = plapkit.appendix1_profile(self.params, 10)
        self.assertEqual(u.at(3), 0.0)
        self.assertAlmostEqual(u.at(-5), 1.0 / (5 * np.log(5)), places=15)
        self.assertEqual(coeff.family, 'appendix1')
        self.assertTrue(coeff.satisfies_c1)
        self.assertFalse(coeff.satisfies_c2)
        self.assertEqual(coeff.c_bound(plapkit.LatticeWindow(10)), 100.0)
        with self.assertRaises(WindowTooSmall):
            plapkit.appendix1_profile(self.params, 3)

    def test_utils(self):
        self.assertEqual(binomial(4, 2), 6)
        self.assertEqual(binomial(3, -1), 0)
        self.assertEqual(binomial(2, 3), 0)
        self.assertEqual(phi_p(np.array([-2.0]), 3).tolist(), [-4.0])
        self.assertEqual(log_power(np.array([0.0, 1.0]), 3, 1).tolist(), [0.0, 0.0])
        self.assertEqual(decade_checkpoints(4, 10 ** 3), [4, 10, 100, 1000])

    def test_custom_profile_from_file(self):
        overrides = plapkit.load_coefficient_file(os.path.join(DATA, 'coefficients.tsv'))
        self.assertEqual(list(overrides.index), [-1, 0, 2])
        coeff = plapkit.CoefficientProfile.custom(overrides)
        window = plapkit.LatticeWindow(2)
        self.assertEqual(coeff.b_values(window).tolist(), [1.0, 1.0, 3.0, 1.0, 2.0])
        self.assertEqual(coeff.c_values(window).tolist(), [1.0, 1.0, 0.5, 1.0, 2.0])
        self.assertEqual(coeff.a_values(window).tolist(), [1.0, 1.0, 2.0, 1.0, 1.0, 1.5])
        self.assertEqual(coeff.b0, 1.0)
        self.assertEqual(coeff.c0, 2.0)

    def test_non_positive_coefficient(self):
        overrides = pd.DataFrame({'a': [1.0], 'b': [1.0], 'c': [-1.0]}, index=pd.Index([0], name='n'))
        coeff = plapkit.CoefficientProfile.custom(overrides)
        with self.assertRaises(NonPositiveCoefficient):
            coeff.check_positive(plapkit.LatticeWindow(2))
        with self.assertRaises(NonPositiveCoefficient):
            plapkit.CoefficientProfile.constant(b=0.0)

    def test_load_sequence_dump(self):
        u, header = plapkit.SequenceSeries().load(os.path.join(DATA, 'spike.tsv'))
        self.assertEqual(u, plapkit.Sequence.spike(2, 2.0))
        self.assertEqual(header['profile'], 'constant')
        validator = SpikeDumpDataFrameValidator()
        self.assertEqual(True, validator.is_valid(plapkit.SequenceSeries.frame(u)))

    def test_load_sequence_dump_wrong_format(self):
        self.assertIsNone(plapkit.SequenceSeries().load(os.path.join(DATA, 'spike_missing_site.tsv')))
        self.assertIsNone(plapkit.SequenceSeries().load(os.path.join(DATA, 'no_such_file.tsv')))

    def test_dump_then_load(self):
        rng = np.random.default_rng(7)
        u = plapkit.Sequence(6, rng.normal(size=13))
        path = os.path.join(self.folder, 'u.tsv')
        series = plapkit.SequenceSeries()
        series.dump(u, path, {'p': 2.0, 'profile': 'constant'})
        loaded, header = series.load(path)
        self.assertEqual(loaded, u)
        self.assertEqual(header['N'], '6')
        self.assertEqual(header['p'], '2.0')


if __name__ == '__main__':
    unittest.main()
