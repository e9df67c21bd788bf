#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm

from .errors import NoConvergedStart, OneSignedSeed, PlapkitError, Stalled
from .lattice import LatticeWindow, Sequence, sign_change_count, sign_split
from .nehari_processor import NehariProcessor, SignChangingPoint

MODES = ('ground', 'sign_changing')

STEP_FLOOR = 1e-14

SUFFICIENT_DECREASE = 1e-4

ROUNDING = 64.0 * np.finfo(float).eps


class SolveConfig(namedtuple('SolveConfig', ['N', 'starts', 'max_iter', 'step0', 'tol_grad', 'tol_proj', 'seed',
                                             'workers', 'progress'])):
    """
        Settings of a multi-start descent.

        :param N: window radius (64 default)
        :type N: int
        :param starts: number of independent starts (16 default)
        :type starts: int
        :param max_iter: descent iterations per start (5000 default)
        :type max_iter: int
        :param step0: initial step; None picks 1e-2 \\|u\\| / max(1, \\|gradient\\|_inf) per start (None default)
        :type step0: float
        :param tol_grad: stationarity target (1e-8 default)
        :type tol_grad: float
        :param tol_proj: membership tolerance of the projections (1e-10 default)
        :type tol_proj: float
        :param seed: seed of the random start profiles (0 default)
        :type seed: int
        :param workers: threads running starts concurrently (1 default)
        :type workers: int
        :param progress: show a tqdm progress bar over starts (False default)
        :type progress: bool
    """
    __slots__ = ()

    def __new__(cls, N=64, starts=16, max_iter=5000, step0=None, tol_grad=1e-8, tol_proj=1e-10, seed=0, workers=1,
                progress=False):
        for name, value in (('N', N), ('starts', starts), ('max_iter', max_iter), ('tol_grad', tol_grad),
                            ('tol_proj', tol_proj), ('workers', workers)):
            if not value > 0:
                raise ValueError('{} must be positive, got {}'.format(name, value))
        if step0 is not None and not step0 > 0:
            raise ValueError('step0 must be positive, got {}'.format(step0))
        return super().__new__(cls, int(N), int(starts), int(max_iter), step0, float(tol_grad), float(tol_proj),
                               int(seed), int(workers), bool(progress))

    def replace(self, **kwargs):
        values = self._asdict()
        values.update(kwargs)
        return SolveConfig(**values)


class SolveResult(namedtuple('SolveResult', ['mode', 'minimizer', 'energy', 'stationarity', 'sign_changes',
                                             'iterations', 'converged', 'residual', 'start', 'diagnostics'])):
    """
        Outcome of a multi-start descent: the lowest-energy converged start together with the diagnostics of every
        start (one dict per start, in start order).
    """
    __slots__ = ()


class GroundStateProcessor(NehariProcessor):
    """
        Estimates the ground state level c* = inf I over the Nehari set and the sign-changing level m* = inf I over
        the sign-changing Nehari set by multi-start projected gradient descent: every start projects a seed profile
        onto the set, then repeats a gradient step on I, taken in the metric diag(a(n-1) + a(n) + b(n)), followed
        by re-projection until the gradient vanishes.

        :param coeff: the weights a, b, c
        :type coeff: CoefficientProfile
        :param params: the exponents p, q, r, zeta
        :type params: ProblemParams
        :param kwargs: projection settings passed to :class:`NehariProcessor`

        :Example:

        >>> import plapkit
        >>> gsp = plapkit.GroundStateProcessor(plapkit.CoefficientProfile.constant(), plapkit.ProblemParams(2, 3, 1, 4))
        >>> result = gsp.minimize_ground_state(plapkit.SolveConfig(N=16, starts=4))
        >>> result.energy > 0
        True
    """

    def __init__(self, coeff, params, **kwargs):
        super().__init__(coeff, params, **kwargs)
        logging.debug("GroundStateProcessor init")

    def stationarity_residual(self, u):
        """
            :math:`\\|gradient(u)\\|_{l^\\infty} / \\max(1, \\|u\\|^{p-1})`.

            :rtype: float
        """
        if u.is_zero():
            return 0.0
        return self._stationarity(u, self.gradient(u))

    def _stationarity(self, u, grad):
        scale = max(1.0, self.norm_power(u) ** ((self.params.p - 1.0) / self.params.p))
        return float(np.max(np.abs(grad.values))) / scale

    def _project(self, u, mode, tol, previous=None):
        if mode == 'ground':
            return self.project_nehari(u, tol)
        start = None if previous is None else (1.0, 1.0)
        return self.project_sign_changing(u, tol, start=start)

    @staticmethod
    def _residual(point):
        if isinstance(point, SignChangingPoint):
            return max(point.residuals)
        return point.residual

    def _direction(self, u, grad, mode):
        """
            The gradient in the metric diag(a(n-1) + a(n) + b(n)), made orthogonal to u (mode 'ground') or to u+ and
            u- (mode 'sign_changing'). The projections absorb any motion along those scalings.
        """
        a, b, _ = self.coefficients(u.window)
        values = grad.values / (a[:-1] + a[1:] + b)
        parts = [u] if mode == 'ground' else list(sign_split(u))
        for part in parts:
            norm = float(np.dot(part.values, part.values))
            if norm > 0:
                values = values - float(np.dot(values, part.values)) / norm * part.values
        return values

    def _rounding(self, u):
        """Size of the floating point error of I(u)."""
        report = self.energy(u)
        return ROUNDING * (abs(report.norm_term) + abs(report.q_term) + abs(report.log_term))

    def _descend(self, point, step, mode, tol, grad=None):
        """
            One projected gradient step with halving backtracking. A trial is accepted on sufficient decrease of
            the energy. Once the predicted decrease is lost in the rounding of I, a trial is accepted when the energy
            stays within that rounding and the gradient shrinks.

            :return: the new point, the accepted step and the gradient at the new point
            :rtype: (NehariPoint or SignChangingPoint, float, Sequence)
        """
        u = point.u
        grad = self.gradient(u) if grad is None else grad
        direction = self._direction(u, grad, mode)
        slope = float(np.dot(grad.values, direction))
        if not slope > 0:
            return point, step, grad
        noise = self._rounding(u)
        while step >= STEP_FLOOR:
            trial = Sequence(u.window, u.values - step * direction)
            try:
                if mode == 'sign_changing':
                    plus, minus = sign_split(trial)
                    if plus.is_zero() or minus.is_zero():
                        raise OneSignedSeed('step removed a sign')
                candidate = self._project(trial, mode, tol, previous=point)
                predicted = step * slope
                if SUFFICIENT_DECREASE * predicted > noise:
                    if candidate.energy <= point.energy - SUFFICIENT_DECREASE * predicted:
                        return candidate, step, self.gradient(candidate.u)
                elif candidate.energy <= point.energy + noise:
                    candidate_grad = self.gradient(candidate.u)
                    candidate_slope = float(np.dot(candidate_grad.values,
                                                   self._direction(candidate.u, candidate_grad, mode)))
                    if candidate_slope < slope:
                        return candidate, step, candidate_grad
            except PlapkitError as err:
                logging.debug("trial step %s rejected: %s", step, err)
            step *= 0.5
        raise Stalled('backtracking fell below the step floor {}'.format(STEP_FLOOR), step=step)

    def descent_step(self, u, step, mode='ground', tol=1e-10):
        """
            Returns the re-projection of u - step * d, with d the gradient of I in the coefficient metric, halving
            step until the energy does not increase (beyond the rounding of I).

            :param u: a point of the Nehari set (mode 'ground') or of the sign-changing Nehari set
            :type u: Sequence
            :param step: the trial step
            :type step: float
            :param mode: 'ground' or 'sign_changing'
            :type mode: str
            :param tol: membership tolerance of the re-projection
            :type tol: float
            :raises Stalled: when the step drops below 1e-14
            :rtype: Sequence
        """
        if mode not in MODES:
            raise ValueError('mode must be one of {}, got {}'.format(MODES, mode))
        if not np.any(self.gradient(u).values):
            return u
        point = self._project(u, mode, tol)
        point, _, _ = self._descend(point, step, mode, tol)
        return point.u

    def ground_seed(self, window, rng):
        """A unit Gaussian bump exp(-(n - n0)^2 / w^2) with random centre and width, or a unit spike."""
        n = window.indices
        half = max(1, window.radius // 2)
        centre = int(rng.integers(-half, half + 1))
        if rng.random() < 0.25:
            return Sequence.spike(window, 1.0, centre)
        width = rng.uniform(1.0, max(2.0, window.radius / 4.0))
        return Sequence(window, np.exp(-((n - centre) / width) ** 2))

    def sign_changing_seed(self, window, rng, attempts=10):
        """
            Difference of two unit Gaussian bumps of equal width at random centres at least one site apart.

            :raises OneSignedSeed: when every attempt yields a one-signed profile
        """
        n = window.indices
        half = max(1, window.radius // 2)
        for _ in range(attempts):
            separation = int(rng.integers(1, max(2, window.radius)))
            left = int(rng.integers(-half, max(-half + 1, half - separation + 1)))
            width = rng.uniform(0.75, max(1.5, separation / 2.0))
            values = np.exp(-((n - left) / width) ** 2) - np.exp(-((n - left - separation) / width) ** 2)
            if rng.random() < 0.5:
                values = -values
            seed = Sequence(window, values)
            plus, minus = sign_split(seed)
            if not plus.is_zero() and not minus.is_zero():
                return seed
            logging.debug("degenerate sign-changing seed resampled")
        raise OneSignedSeed('could not draw a sign-changing seed in {} attempts'.format(attempts))

    def _run_start(self, index, seed_u, mode, config):
        diagnostics = {'start': index, 'mode': mode, 'status': 'running', 'iterations': 0}
        try:
            point = self._project(seed_u, mode, config.tol_proj)
            u = point.u
            grad = self.gradient(u)
            step = config.step0
            if step is None:
                step = 1e-2 * self.norm_power(u) ** (1.0 / self.params.p) / \
                    max(1.0, float(np.max(np.abs(grad.values))))
            stationarity = self._stationarity(u, grad)
            iterations = 0
            while stationarity > config.tol_grad and iterations < config.max_iter:
                point, used, grad = self._descend(point, step, mode, config.tol_proj, grad)
                # grow only after a step accepted at its first trial
                step = 2.0 * used if used == step else used
                iterations += 1
                stationarity = self._stationarity(point.u, grad)
            residual = self._residual(point)
            changes = sign_change_count(point.u)
            converged = stationarity <= config.tol_grad and residual <= config.tol_proj
            status = 'converged' if converged else 'max_iter'
            if converged and mode == 'sign_changing' and changes != 1:
                converged = False
                status = 'sign_changes={}'.format(changes)
            diagnostics.update(status=status, iterations=iterations, energy=point.energy,
                               stationarity=stationarity, residual=residual)
            return SolveResult(mode, point.u, point.energy, stationarity, changes, iterations, converged, residual,
                               index, None), diagnostics
        except Stalled as err:
            diagnostics.update(status='stalled', detail=str(err))
        except PlapkitError as err:
            diagnostics.update(status='failed', detail='{}: {}'.format(type(err).__name__, err))
        logging.debug("start %s ended: %s", index, diagnostics['status'])
        return None, diagnostics

    def _seeds(self, mode, config, extra_seeds):
        window = LatticeWindow(config.N)
        streams = np.random.SeedSequence(config.seed).spawn(config.starts)
        seeds = []
        for k, stream in enumerate(streams):
            rng = np.random.default_rng(stream)
            if mode == 'ground':
                seeds.append(Sequence.spike(window, 1.0) if k == 0 else self.ground_seed(window, rng))
            else:
                seeds.append(self.sign_changing_seed(window, rng))
        for extra in extra_seeds or []:
            if extra.window != window:
                raise ValueError('extra seed lives on window {} instead of {}'.format(extra.window.radius, config.N))
            seeds.append(extra)
        return seeds

    def _minimize(self, mode, config, extra_seeds=None):
        seeds = self._seeds(mode, config, extra_seeds)
        jobs = list(range(len(seeds)))
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            outcomes = list(tqdm(executor.map(lambda k: self._run_start(k, seeds[k], mode, config), jobs),
                                 total=len(jobs), desc=mode, disable=not config.progress))
        diagnostics = [d for _, d in outcomes]
        converged = [r for r, _ in outcomes if r is not None and r.converged]
        if not converged:
            logging.error("no converged start for mode %s", mode)
            raise NoConvergedStart('none of the {} starts converged ({})'.format(
                len(jobs), ', '.join(d['status'] for d in diagnostics)), diagnostics)
        best = min(converged, key=lambda r: (r.energy, r.start))
        return best._replace(diagnostics=diagnostics)

    def minimize_ground_state(self, config=None, extra_seeds=None):
        """
            Multi-start projected descent on the Nehari set. Start 0 is the unit spike at the origin, the others are
            random bumps and spikes; `extra_seeds` are appended as further starts.

            :param config: solver settings
            :type config: SolveConfig
            :param extra_seeds: (optional) additional seed sequences on the window of radius config.N
            :type extra_seeds: list of Sequence
            :raises NoConvergedStart: when no start converges
            :rtype: SolveResult
        """
        return self._minimize('ground', config or SolveConfig(), extra_seeds)

    def minimize_sign_changing(self, config=None):
        """
            Multi-start projected descent on the sign-changing Nehari set from opposite-sign double bumps. A start
            counts as converged only when its limit changes sign exactly once.

            :param config: solver settings
            :type config: SolveConfig
            :raises NoConvergedStart: when no start converges
            :rtype: SolveResult
        """
        return self._minimize('sign_changing', config or SolveConfig())

    def split_projection(self, u, tol=None):
        """
            Projects u+ and u- separately onto the Nehari set. For u on the sign-changing Nehari set,
            I(u) >= I(s' u+) + I(t' u-), which is the route to m* >= 2 c*.

            :return: the two projected points and the sum of their energies
            :rtype: (NehariPoint, NehariPoint, float)
        """
        plus, minus = sign_split(u)
        point_plus = self.project_nehari(plus, tol)
        point_minus = self.project_nehari(minus, tol)
        return point_plus, point_minus, point_plus.energy + point_minus.energy
