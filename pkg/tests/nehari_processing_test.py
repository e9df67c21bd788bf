#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import math
import unittest

import numpy as np

import plapkit
from plapkit.errors import BoxFailure, BracketFailure, OneSigned, ProjectionFailure, ZeroSequence
from plapkit.inequality_processor import random_sign_changing


class NehariProcessingTest(unittest.TestCase):
    def setUp(self):
        self.coeff = plapkit.CoefficientProfile.constant()
        self.params = plapkit.ProblemParams(2, 3, 1, 4)
        self.nep = plapkit.NehariProcessor(self.coeff, self.params)
        self.rng = np.random.default_rng(5)

    def tearDown(self):
        self.nep = None

    def double_spike(self, alpha, N=4):
        values = np.zeros(2 * N + 1)
        values[N] = alpha
        values[N + 1] = -alpha
        return plapkit.Sequence(N, values)

    def test_project_spike(self):
        point = self.nep.project_nehari(plapkit.Sequence.spike(4, 1.0))
        self.assertLessEqual(point.residual, 1e-10)
        self.assertAlmostEqual(point.t0 * math.log(point.t0), 3.0, places=9)
        self.assertAlmostEqual(point.energy, 0.5 * point.t0 ** 2 + point.t0 ** 3 / 9.0, places=9)
        self.assertEqual(point.scan_sign_changes, 1)

    def test_projection_is_ray_invariant(self):
        u = random_sign_changing(plapkit.LatticeWindow(5), self.rng)
        point = self.nep.project_nehari(u)
        scaled = self.nep.project_nehari(2.5 * u)
        self.assertAlmostEqual(scaled.t0 * 2.5, point.t0, delta=1e-9 * point.t0)
        np.testing.assert_allclose(scaled.u.values, point.u.values, rtol=1e-9, atol=1e-12)

    def test_projection_of_a_projected_point(self):
        point = self.nep.project_nehari(random_sign_changing(plapkit.LatticeWindow(5), self.rng))
        again = self.nep.project_nehari(point.u)
        self.assertAlmostEqual(again.t0, 1.0, delta=1e-9)

    def test_project_zero(self):
        with self.assertRaises(ZeroSequence):
            self.nep.project_nehari(plapkit.Sequence.zeros(3))

    def test_bracket_failure(self):
        nep = plapkit.NehariProcessor(self.coeff, self.params, bracket_cap=2.0)
        with self.assertRaises(BracketFailure):
            nep.project_nehari(plapkit.Sequence.spike(4, 1.0))

    def test_residual_above_tolerance(self):
        nep = plapkit.NehariProcessor(self.coeff, self.params, max_bisect=1)
        with self.assertRaises(ProjectionFailure):
            nep.project_nehari(plapkit.Sequence.spike(4, 1.0))
        nep = plapkit.NehariProcessor(self.coeff, self.params, max_newton=0, miranda_depth=2)
        with self.assertRaises(ProjectionFailure):
            nep.project_sign_changing(random_sign_changing(plapkit.LatticeWindow(4), self.rng))

    def test_subdivision_fallback(self):
        nep = plapkit.NehariProcessor(self.coeff, self.params, max_newton=0)
        point = nep.project_sign_changing(random_sign_changing(plapkit.LatticeWindow(4), self.rng))
        self.assertEqual(point.method, 'miranda')
        self.assertLessEqual(max(point.residuals), 1e-10)

    def test_nehari_fiber_maximum(self):
        point = self.nep.project_nehari(plapkit.Sequence.spike(4, 1.0))
        self.assertLessEqual(self.nep.fiber_max_check(point), 1e-10)
        point = self.nep.project_nehari(random_sign_changing(plapkit.LatticeWindow(5), self.rng))
        self.assertLessEqual(self.nep.fiber_max_check(point), 1e-10)

    def test_sign_changing_residuals(self):
        for _ in range(10):
            u = random_sign_changing(plapkit.LatticeWindow(6), self.rng)
            point = self.nep.project_sign_changing(u)
            self.assertLessEqual(max(point.residuals), 1e-10)
            self.assertGreater(point.s0, 0.0)
            self.assertGreater(point.t0, 0.0)
            self.assertIn(point.method, ('newton', 'miranda'))
            self.assertLess(point.box[0], point.box[1])

    def test_sign_changing_symmetric_double_spike(self):
        point = self.nep.project_sign_changing(self.double_spike(0.5))
        self.assertAlmostEqual(point.s0, point.t0, delta=1e-9 * point.s0)
        self.assertEqual(plapkit.sign_change_count(point.u), 1)

    def test_sign_changing_one_signed(self):
        with self.assertRaises(OneSigned):
            self.nep.project_sign_changing(plapkit.Sequence.spike(3, 1.0))

    def test_sign_changing_box_failure(self):
        nep = plapkit.NehariProcessor(self.coeff, self.params, bracket_cap=2.0)
        with self.assertRaises(BoxFailure):
            nep.project_sign_changing(self.double_spike(1.0))

    def test_sign_changing_of_a_projected_point(self):
        point = self.nep.project_sign_changing(random_sign_changing(plapkit.LatticeWindow(6), self.rng))
        again = self.nep.project_sign_changing(point.u)
        self.assertAlmostEqual(again.s0, 1.0, delta=1e-8)
        self.assertAlmostEqual(again.t0, 1.0, delta=1e-8)

    def test_sign_changing_root_is_unique(self):
        u = random_sign_changing(plapkit.LatticeWindow(6), self.rng)
        point = self.nep.project_sign_changing(u)
        for delta in self.rng.uniform(-0.3, 0.3, (8, 2)):
            start = (point.s0 * (1.0 + delta[0]), point.t0 * (1.0 + delta[1]))
            other = self.nep.project_sign_changing(u, start=start)
            self.assertAlmostEqual(other.s0, point.s0, delta=1e-8 * point.s0)
            self.assertAlmostEqual(other.t0, point.t0, delta=1e-8 * point.t0)

    def test_sign_changing_fiber_maximum(self):
        point = self.nep.project_sign_changing(random_sign_changing(plapkit.LatticeWindow(5), self.rng))
        self.assertLessEqual(self.nep.fiber_max_check(point), 1e-10)

    def test_rho_bound(self):
        rho, bound = self.nep.rho_bound(plapkit.LatticeWindow(8))
        self.assertAlmostEqual(rho, 1.256, places=2)
        self.assertEqual(bound.epsilon, 0.5)
        point = self.nep.project_nehari(plapkit.Sequence.spike(8, 1.0))
        self.assertGreaterEqual(plapkit.weighted_norm_p(point.u, self.coeff, self.params), rho)

    def test_energy_floors(self):
        floor = self.nep.ground_energy_floor(plapkit.LatticeWindow(8))
        self.assertGreater(floor, 0.0)
        self.assertLessEqual(floor, self.nep.project_nehari(plapkit.Sequence.spike(8, 1.0)).energy)
        for _ in range(5):
            point = self.nep.project_sign_changing(random_sign_changing(plapkit.LatticeWindow(6), self.rng))
            self.assertLessEqual(self.nep.split_energy_floor(point.u), point.energy)


if __name__ == '__main__':
    unittest.main()
