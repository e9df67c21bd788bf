#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import math
import unittest

import numpy as np
import pandas as pd

import plapkit
from plapkit.errors import NegativeScale, NonPositiveCoefficient, OddP
from plapkit.inequality_processor import random_sign_changing


class EnergyProcessingTest(unittest.TestCase):
    def setUp(self):
        self.coeff = plapkit.CoefficientProfile.constant()
        self.ep = plapkit.EnergyProcessor(self.coeff, plapkit.ProblemParams(2, 3, 1, 4))
        self.rng = np.random.default_rng(20240601)

    def tearDown(self):
        self.ep = None

    def random_pair(self, N):
        u = plapkit.Sequence(N, self.rng.uniform(-2.0, 2.0, 2 * N + 1))
        v = plapkit.Sequence(N, self.rng.uniform(-1.0, 1.0, 2 * N + 1))
        return u, v

    def test_energy_of_zero(self):
        report = self.ep.energy(plapkit.Sequence.zeros(4))
        self.assertEqual(report.total, 0.0)
        self.assertEqual(report.pairing_self, 0.0)

    def test_energy_of_spike(self):
        report = self.ep.energy(plapkit.Sequence.spike(4, 2.0))
        self.assertAlmostEqual(report.total, 6.0 + 8.0 / 9.0 - 8.0 / 3.0 * math.log(2.0), places=13)
        self.assertEqual(float("{0:.7f}".format(report.total)), 5.0404964)
        self.assertAlmostEqual(report.norm_term, 6.0, places=14)
        self.assertAlmostEqual(report.q_term, 8.0 / 9.0, places=14)
        self.assertAlmostEqual(report.log_term, 8.0 / 3.0 * math.log(2.0), places=14)
        self.assertAlmostEqual(report.pairing_self, 12.0 - 8.0 * math.log(2.0), places=13)

    def test_pairing_with_zero_direction(self):
        u, _ = self.random_pair(4)
        self.assertEqual(self.ep.pairing(u, plapkit.Sequence.zeros(4)), 0.0)

    def test_pairing_matches_finite_differences(self):
        h = 1e-5
        for N in (8, 32):
            for _ in range(20):
                u, v = self.random_pair(N)
                derivative = (self.ep.energy(u + h * v).total - self.ep.energy(u - h * v).total) / (2.0 * h)
                pairing = self.ep.pairing(u, v)
                self.assertLessEqual(abs(derivative - pairing) / max(1.0, abs(pairing)), 1e-6)

    def test_gradient_is_dual_to_pairing(self):
        for _ in range(10):
            u, v = self.random_pair(8)
            dual = float(np.dot(self.ep.gradient(u).values, v.values))
            self.assertAlmostEqual(dual, self.ep.pairing(u, v), delta=1e-10 * max(1.0, abs(dual)))
        self.assertTrue(self.ep.gradient(plapkit.Sequence.zeros(3)).is_zero())

    def test_fiber_g(self):
        u, _ = self.random_pair(6)
        self.assertEqual(self.ep.fiber_g(u, 0.0), 0.0)
        self.assertAlmostEqual(self.ep.fiber_g(u, 1.0), self.ep.pairing(u, u), delta=1e-10)
        self.assertAlmostEqual(self.ep.fiber_g(u, 1.7), self.ep.pairing(1.7 * u, 1.7 * u), delta=1e-9)
        with self.assertRaises(NegativeScale):
            self.ep.fiber_g(u, -1.0)

    def test_fiber_h(self):
        u = random_sign_changing(plapkit.LatticeWindow(6), self.rng)
        plus, minus = plapkit.sign_split(u)
        h1, h2 = self.ep.fiber_h(u, 1.0, 1.0)
        self.assertAlmostEqual(h1, self.ep.pairing(u, plus), delta=1e-10)
        self.assertAlmostEqual(h2, self.ep.pairing(u, minus), delta=1e-10)
        one_signed = plapkit.Sequence(3, np.abs(self.rng.normal(size=7)))
        self.assertEqual(self.ep.fiber_h(one_signed, 0.5, 2.0)[1], 0.0)

    def test_fiber_h_jacobian(self):
        u = random_sign_changing(plapkit.LatticeWindow(6), self.rng)
        s, t, h = 0.8, 1.3, 1e-6
        jacobian = self.ep.fiber_h_jacobian(u, s, t)
        ds = (np.array(self.ep.fiber_h(u, s + h, t)) - np.array(self.ep.fiber_h(u, s - h, t))) / (2.0 * h)
        dt = (np.array(self.ep.fiber_h(u, s, t + h)) - np.array(self.ep.fiber_h(u, s, t - h))) / (2.0 * h)
        numeric = np.column_stack([ds, dt])
        np.testing.assert_allclose(jacobian, numeric, rtol=1e-5, atol=1e-6)

    def test_fiber_energy_grid_and_line(self):
        u = random_sign_changing(plapkit.LatticeWindow(5), self.rng)
        axis = np.array([0.0, 0.5, 1.0, 2.5])
        grid = self.ep.fiber_energy_grid(u, axis, axis)
        for a, s in enumerate(axis):
            for b, t in enumerate(axis):
                self.assertAlmostEqual(grid[a, b], self.ep.fiber_energy(u, s, t), delta=1e-10)
        line = self.ep.fiber_energy_line(u, axis)
        for k, t in enumerate(axis):
            self.assertAlmostEqual(line[k], self.ep.energy(t * u).total, delta=1e-10)

    def test_decomposition_residuals(self):
        for p in (2, 4, 6):
            ep = plapkit.EnergyProcessor(self.coeff, plapkit.ProblemParams(p, p + 1))
            for _ in range(25):
                u = random_sign_changing(plapkit.LatticeWindow(8), self.rng, -1.5, 1.5)
                residuals = ep.decomposition_residuals(u, relative=True)
                self.assertLessEqual(max(abs(r) for r in residuals), 1e-10)

    def test_decomposition_one_signed(self):
        ep = plapkit.EnergyProcessor(self.coeff, plapkit.ProblemParams(4, 5))
        u = plapkit.Sequence(5, np.abs(self.rng.normal(size=11)))
        self.assertEqual(ep.cross_sums(u), (0.0, 0.0, 0.0))
        residuals = ep.decomposition_residuals(u, relative=True)
        self.assertLessEqual(max(abs(r) for r in residuals), 1e-12)

    def test_decomposition_needs_even_p(self):
        ep = plapkit.EnergyProcessor(self.coeff, plapkit.ProblemParams(3, 4))
        with self.assertRaises(OddP):
            ep.decomposition_residuals(plapkit.Sequence(1, [1, -1, 1]))

    def test_non_positive_coefficient(self):
        overrides = pd.DataFrame({'a': [1.0], 'b': [1.0], 'c': [-1.0]}, index=pd.Index([0], name='n'))
        ep = plapkit.EnergyProcessor(plapkit.CoefficientProfile.custom(overrides), plapkit.ProblemParams(2, 3))
        with self.assertRaises(NonPositiveCoefficient):
            ep.energy(plapkit.Sequence.spike(2, 1.0))

    def test_processor_type_checks(self):
        with self.assertRaises(ValueError):
            plapkit.EnergyProcessor('constant', plapkit.ProblemParams(2, 3))


if __name__ == '__main__':
    unittest.main()
