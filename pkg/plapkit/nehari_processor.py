#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import logging
from collections import namedtuple

import numpy as np
from scipy.optimize import bisect

from .energy_processor import EnergyProcessor
from .errors import BoxFailure, BracketFailure, OneSigned, ProjectionFailure, ZeroSequence
from .inequality_processor import growth_bound_fit
from .lattice import sign_split


class NehariPoint(namedtuple('NehariPoint', ['u', 't0', 'residual', 'energy', 'scan_sign_changes'])):
    """
        A projected point t0 * v on the Nehari set. `u` is the projected sequence, `residual` is
        \\|<I'(u), u>\\| / \\|u\\|^p and `scan_sign_changes` is the number of sign changes of the fiber derivative
        seen on the diagnostic scan (1 when the root is unique).
    """
    __slots__ = ()


class SignChangingPoint(namedtuple('SignChangingPoint', ['u', 's0', 't0', 'residuals', 'energy', 'box', 'method'])):
    """
        A projected point s0 * v+ + t0 * v- on the sign-changing Nehari set. `residuals` holds the normalized
        \\|h1\\| and \\|h2\\|, `box` the square (theta1, theta2) used for the search and `method` either 'newton' or
        'miranda'.
    """
    __slots__ = ()


class NehariProcessor(EnergyProcessor):
    """
        Projection onto the Nehari set (one scaling of the whole sequence) and onto the sign-changing Nehari set
        (independent scalings of the positive and negative parts).

        :param coeff: the weights a, b, c
        :type coeff: CoefficientProfile
        :param params: the exponents p, q, r, zeta
        :type params: ProblemParams
        :param tol: (optional) membership tolerance on the normalized residuals (1e-10 default)
        :type tol: float
        :param bracket_start: (optional) lower end of the initial scaling bracket (1e-6 default)
        :type bracket_start: float
        :param bracket_cap: (optional) largest scaling tried while expanding a bracket (2**60 default)
        :type bracket_cap: float
        :param max_newton: (optional) Newton iterations before falling back to subdivision (200 default)
        :type max_newton: int
        :param newton_damping: (optional) step reduction factor of the damped Newton method (0.5 default)
        :type newton_damping: float
        :param miranda_depth: (optional) subdivision depth of the fallback (60 default)
        :type miranda_depth: int
        :param scan_samples: (optional) points of the diagnostic sign scan (2001 default)
        :type scan_samples: int
        :param max_bisect: (optional) iterations of every scaling bisection (2000 default)
        :type max_bisect: int

        :Example:

        >>> import plapkit
        >>> nep = plapkit.NehariProcessor(plapkit.CoefficientProfile.constant(), plapkit.ProblemParams(2, 3, 1, 4))
        >>> point = nep.project_nehari(plapkit.Sequence.spike(8, 1.0))
        >>> point.residual <= 1e-10
        True
    """

    def __init__(self, coeff, params, tol=1e-10, bracket_start=1e-6, bracket_cap=2.0 ** 60, max_newton=200,
                 newton_damping=0.5, miranda_depth=60, scan_samples=2001, max_bisect=2000):
        super().__init__(coeff, params)
        self.tol = tol
        self.bracket_start = bracket_start
        self.bracket_cap = bracket_cap
        self.max_newton = max_newton
        self.newton_damping = newton_damping
        self.miranda_depth = miranda_depth
        self.scan_samples = scan_samples
        self.max_bisect = max_bisect
        logging.debug("NehariProcessor init")

    def _reduced_fiber(self, u):
        """
            g(t)/t^p = A - t^{q-p} r (S ln t + L) with A = \\|u\\|^p, S = sum c|u|^q and L = sum c|u|^q ln|u|.
        """
        p, q, r = self.params.p, self.params.q, self.params.r
        _, _, c = self.coefficients(u.window)
        big_a = self.norm_power(u)
        mag = np.abs(u.values)
        nz = mag > 0
        weights = c[nz] * mag[nz] ** q
        big_s = float(np.sum(weights))
        big_l = float(np.sum(weights * np.log(mag[nz])))

        def reduced(t):
            with np.errstate(over='ignore', invalid='ignore'):
                return big_a - np.power(t, q - p) * r * (big_s * np.log(t) + big_l)
        return reduced

    def nehari_sign_scan(self, u, t_max, samples=None):
        """
            Number of sign changes of the fiber derivative g on a log-spaced grid of [bracket_start, t_max].

            :rtype: int
        """
        samples = samples or self.scan_samples
        reduced = self._reduced_fiber(u)
        values = reduced(np.geomspace(min(self.bracket_start, t_max / 2.0), t_max, samples))
        signs = np.sign(values[np.isfinite(values) & (values != 0)])
        return int(np.count_nonzero(signs[1:] != signs[:-1]))

    def _fiber_bracket(self, reduced):
        lo, hi = self.bracket_start, 1.0
        while not reduced(lo) > 0:
            lo /= 2.0
            if lo < 1.0 / self.bracket_cap:
                raise BracketFailure('fiber derivative is not positive for small scalings')
        while not reduced(hi) < 0:
            hi *= 2.0
            logging.debug("fiber bracket expanded to %s", hi)
            if hi > self.bracket_cap:
                raise BracketFailure('fiber derivative stays nonnegative up to {}; the logarithmic term never '
                                     'dominates on this window'.format(self.bracket_cap))
        return lo, hi

    def project_nehari(self, u, tol=None):
        """
            Finds the unique t0 > 0 with <I'(t0 u), t0 u> = 0 by geometric bracket expansion followed by bisection.

            :param u: a nonzero sequence
            :type u: Sequence
            :param tol: (optional) residual tolerance, defaults to the processor tolerance
            :type tol: float
            :raises ProjectionFailure: when the residual of the projected point exceeds tol
            :rtype: NehariPoint
        """
        tol = self.tol if tol is None else tol
        if u.is_zero():
            raise ZeroSequence('cannot project the zero sequence onto the Nehari set')
        reduced = self._reduced_fiber(u)
        lo, hi = self._fiber_bracket(reduced)
        t0 = bisect(reduced, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps, maxiter=self.max_bisect,
                    disp=False)
        point = t0 * u
        residual = abs(self.pairing(point, point)) / self.norm_power(point)
        scan = self.nehari_sign_scan(u, 4.0 * hi)
        if not residual <= tol:
            raise ProjectionFailure('Nehari residual {} above tolerance {}'.format(residual, tol))
        if scan != 1:
            logging.warning("fiber derivative changed sign %s times on the scan", scan)
        return NehariPoint(point, float(t0), float(residual), self.energy(point).total, scan)

    def _normalized_h(self, u, s, t):
        plus, minus = sign_split(u)
        h1, h2 = self.fiber_h(u, s, t)
        return np.array([h1 / max(self.norm_power(s * plus), 1e-300), h2 / max(self.norm_power(t * minus), 1e-300)])

    def _diagonal_box(self, u):
        theta1 = 1.0
        while True:
            h1, h2 = self.fiber_h(u, theta1, theta1)
            if h1 > 0 and h2 > 0:
                break
            theta1 /= 2.0
            if theta1 < 1.0 / self.bracket_cap:
                raise BoxFailure('no diagonal point with h1 > 0 and h2 > 0')
        theta2 = 1.0
        while True:
            h1, h2 = self.fiber_h(u, theta2, theta2)
            if h1 < 0 and h2 < 0:
                break
            theta2 *= 2.0
            if theta2 > self.bracket_cap:
                raise BoxFailure('no diagonal point with h1 < 0 and h2 < 0 up to {}'.format(self.bracket_cap))
        return theta1, theta2

    def _newton(self, u, start, box, tol):
        x = np.array(start, dtype=float)
        residual = self._normalized_h(u, *x)
        for _ in range(self.max_newton):
            if np.all(np.abs(residual) <= tol):
                return x, residual
            h = np.array(self.fiber_h(u, *x))
            try:
                step = -np.linalg.solve(self.fiber_h_jacobian(u, *x), h)
            except np.linalg.LinAlgError:
                return None
            damping = 1.0
            while damping > 1e-12:
                trial = x + damping * step
                if box[0] < trial[0] < box[1] and box[0] < trial[1] < box[1]:
                    trial_residual = self._normalized_h(u, *trial)
                    if np.max(np.abs(trial_residual)) < np.max(np.abs(residual)):
                        x, residual = trial, trial_residual
                        break
                damping *= self.newton_damping
            else:
                return None
        if np.all(np.abs(residual) <= tol):
            return x, residual
        return None

    def _miranda(self, u, box):
        """
            Subdivision of the box that keeps, at every level, the half of the s-range on whose edges h1 changes
            sign once h2 is zeroed along t. h1 grows in t and h2 grows in s, so the corner signs of the diagonal box
            carry over to every kept cell.
        """
        lo, hi = box
        depth = self.miranda_depth
        xtol = 4.0 * np.finfo(float).eps * hi

        def t_of(s):
            return bisect(lambda t: self.fiber_h(u, s, t)[1], lo, hi, xtol=xtol, maxiter=depth, disp=False)

        def h1_on_curve(s):
            return self.fiber_h(u, s, t_of(s))[0]

        s0 = bisect(h1_on_curve, lo, hi, xtol=xtol, maxiter=depth, disp=False)
        return np.array([s0, t_of(s0)])

    def project_sign_changing(self, u, tol=None, start=None):
        """
            Finds the unique pair (s0, t0) with s0 u+ + t0 u- on the sign-changing Nehari set: a diagonal scan locates
            a box (theta1, theta2)^2 whose corners carry the Poincare-Miranda sign pattern, damped Newton solves
            (h1, h2) = 0 from the diagonal crossing (or from `start`), and subdivision takes over when Newton leaves
            the box or stalls.

            :param u: a sequence with u+ and u- both nonzero
            :type u: Sequence
            :param tol: (optional) residual tolerance, defaults to the processor tolerance
            :type tol: float
            :param start: (optional) initial (s, t) for Newton
            :type start: tuple
            :raises ProjectionFailure: when either residual exceeds tol
            :rtype: SignChangingPoint
        """
        tol = self.tol if tol is None else tol
        plus, minus = sign_split(u)
        if plus.is_zero() or minus.is_zero():
            raise OneSigned('u+ and u- must both be nonzero')
        box = self._diagonal_box(u)
        if start is None:
            reduced = self._reduced_fiber(u)
            crossing = bisect(reduced, box[0], box[1], xtol=1e-300, rtol=4.0 * np.finfo(float).eps,
                              maxiter=self.max_bisect, disp=False)
            start = (crossing, crossing)
        start = (min(max(start[0], box[0] * 1.0000001), box[1] * 0.9999999),
                 min(max(start[1], box[0] * 1.0000001), box[1] * 0.9999999))

        method = 'newton'
        solved = self._newton(u, start, box, tol)
        if solved is None:
            logging.debug("Newton left the box or stalled, falling back to subdivision")
            method = 'miranda'
            x = self._miranda(u, box)
            residual = self._normalized_h(u, *x)
            polished = self._newton(u, x, box, tol)
            if polished is not None:
                x, residual = polished
        else:
            x, residual = solved
        s0, t0 = float(x[0]), float(x[1])
        if not np.all(np.abs(residual) <= tol):
            raise ProjectionFailure('sign-changing residuals {} above tolerance {}'.format(residual, tol))
        point = s0 * plus + t0 * minus
        return SignChangingPoint(point, s0, t0, (float(abs(residual[0])), float(abs(residual[1]))),
                                 self.energy(point).total, box, method)

    def fiber_max_check(self, point, grid=None):
        """
            Largest value of the fiber energy over a grid of [0, 4] (t) or [0, 4]^2 (s, t) minus the energy of the
            point, relative to max(1, \\|I(point)\\|). The projected point maximizes its fiber, so the value is <= 0
            up to grid resolution.

            :param point: a projected point
            :type point: NehariPoint or SignChangingPoint
            :param grid: (optional) grid points per axis (401 for NehariPoint, 101 for SignChangingPoint)
            :type grid: int
            :rtype: float
        """
        scale = max(1.0, abs(point.energy))
        if isinstance(point, SignChangingPoint):
            axis = np.linspace(0.0, 4.0, grid or 101)
            values = self.fiber_energy_grid(point.u, axis, axis)
        else:
            axis = np.linspace(0.0, 4.0, grid or 401)
            values = self.fiber_energy_line(point.u, axis)
        return float((np.max(values) - point.energy) / scale)

    def rho_bound(self, window, sample_range=1e3):
        """
            Lower bound rho on the norm of every point of the Nehari sets,
            :math:`\\rho = ((p-1)b_0^{\\zeta/p} / (pc_0C_{\\varepsilon_3}))^{1/(\\zeta-p)}` with
            :math:`\\varepsilon_3 = b_0/(pc_0)` and :math:`C_{\\varepsilon_3}` from :func:`growth_bound_fit`.

            :param window: the window (c0 may depend on it)
            :type window: LatticeWindow
            :return: rho and the growth bound used
            :rtype: (float, EpsilonBound)
        """
        p, zeta = self.params.p, self.params.zeta
        b0, c0 = self.coeff.b0, self.coeff.c_bound(window)
        bound = growth_bound_fit(self.params, b0 / (p * c0), sample_range)
        rho = ((p - 1.0) * b0 ** (zeta / p) / (p * c0 * bound.C_epsilon)) ** (1.0 / (zeta - p))
        return float(rho), bound

    def ground_energy_floor(self, window, sample_range=1e3):
        """(1/p - 1/q) rho^p, a lower bound of I on the Nehari set."""
        rho, _ = self.rho_bound(window, sample_range)
        return (1.0 / self.params.p - 1.0 / self.params.q) * rho ** self.params.p

    def split_energy_floor(self, u):
        """(1/p - 1/q)(\\|u+\\|^p + \\|u-\\|^p), a lower bound of I(u) on the sign-changing Nehari set."""
        plus, minus = sign_split(u)
        return (1.0 / self.params.p - 1.0 / self.params.q) * (self.norm_power(plus) + self.norm_power(minus))
