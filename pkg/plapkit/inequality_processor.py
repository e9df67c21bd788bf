#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

"""
    Numerical certificates for the inequalities behind the variational argument: the scalar logarithmic inequality,
    the combinatorial quantity Theta and its siblings, the energy inequalities along fibers, the logarithmic growth
    bound and the divergent series of the counterexample data.
"""

import math
import logging
from collections import namedtuple
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .energy_processor import EnergyProcessor
from .errors import (DivisionByZeroScale, IndexOutOfRange, InvalidParams, MaximizationFailure, NegativeScale,
                     NonPositiveTau, OddP, WindowTooSmall)
from .lattice import Sequence, lp_norm, sign_split
from .utils import binomial, padded_difference

THETA_VARIANTS = ('full', 'even', 'single', 'half')


class ThetaInputs(namedtuple('ThetaInputs', ['p', 'i', 'j', 's', 't'])):
    """
        Arguments of Theta: an even p, indices 0 <= i, j <= p/2 and scalings s, t >= 0.
    """
    __slots__ = ()

    def __new__(cls, p, i, j, s, t):
        if p != int(p) or p < 2 or int(p) % 2:
            raise OddP('Theta needs an even p >= 2, got {}'.format(p))
        p, i, j = int(p), int(i), int(j)
        if not (0 <= i <= p // 2 and 0 <= j <= p // 2):
            raise IndexOutOfRange('indices must satisfy 0 <= i, j <= {}, got i={} j={}'.format(p // 2, i, j))
        if s < 0 or t < 0:
            raise NegativeScale('s and t must be >= 0, got s={} t={}'.format(s, t))
        return super().__new__(cls, p, i, j, float(s), float(t))


class EpsilonBound(namedtuple('EpsilonBound', ['epsilon', 'C_epsilon', 'zeta', 'maximizer', 'min_margin',
                                               'samples'])):
    """
        Constants of the growth bound
        :math:`|t|^{q-1}|\\ln|t|^r| \\leq \\varepsilon|t|^{p-1} + C_\\varepsilon|t|^{\\zeta-1}`
        (multiply by c(n) for the weighted form). `min_margin` is the smallest slack of the bound over the
        certification samples.
    """
    __slots__ = ()

    def holds(self, t, params):
        t = np.abs(np.asarray(t, dtype=float))
        lhs = t ** (params.q - 1.0) * np.abs(params.r * np.log(t))
        return lhs <= self.epsilon * t ** (params.p - 1.0) + self.C_epsilon * t ** (self.zeta - 1.0)


SeriesParams = namedtuple('SeriesParams', ['p', 'q', 'r'])


def scalar_log_inequality(tau, q, r):
    """
        :math:`r(1-\\tau^q) + q\\tau^q\\ln\\tau^r`, strictly positive for :math:`\\tau \\neq 1` and zero at 1.

        :param tau: tau > 0
        :type tau: float
        :param q: q > 1
        :type q: float
        :param r: r >= 1
        :type r: float
        :rtype: float
    """
    if tau <= 0:
        raise NonPositiveTau('tau must be > 0, got {}'.format(tau))
    tq = tau ** q
    return r * (1.0 - tq) + q * tq * r * math.log(tau)


def monotone_quotient(a, x):
    """
        :math:`f(x) = (1 - a^x)/x`, strictly decreasing on :math:`(0, \\infty)` for a > 0, a != 1.
    """
    if a <= 0 or x <= 0:
        raise ValueError('a and x must be > 0, got a={} x={}'.format(a, x))
    return -math.expm1(x * math.log(a)) / x


def _theta_terms(inputs, variant):
    """Positive terms, negative terms and denominator of the requested Theta variant."""
    if variant not in THETA_VARIANTS:
        raise ValueError('unknown Theta variant {}'.format(variant))
    p, i, j, s, t = inputs
    h = p // 2
    m = h - 1
    C = binomial
    sp, tp = s ** p, t ** p
    if variant == 'full':
        k = i + j
        positive = [2 * sp * C(m, i) * C(i, j), sp * C(m, i - 1) * C(i - 1, j),
                    2 * tp * C(m, i - 1) * C(i - 1, j - 1), tp * C(m, i - 1) * C(i - 1, j)]
        negative = [2 * s ** (p - k) * t ** k * C(h, i) * C(i, j)]
        return positive, negative, 2 * p
    if variant == 'even':
        positive = [sp * C(m, i), tp * C(m, i - 1)]
        negative = [s ** (p - 2 * i) * t ** (2 * i) * C(h, i)]
        return positive, negative, p
    if variant == 'single':
        positive = [2 * sp * C(m, i), sp * C(m, i - 1), tp * C(m, i - 1)]
        negative = [2 * s ** (p - i) * t ** i * C(h, i)]
        return positive, negative, 2 * p
    positive = [sp * C(m, j), 2 * tp * C(m, j - 1), tp * C(m, j)]
    negative = [2 * s ** (h - j) * t ** (h + j) * C(h, j)]
    return positive, negative, 2 * p


def theta(inputs, variant='full'):
    """
        The nonnegative combinatorial quantity controlling the binomial cross terms of the energy inequality.

        For m = p/2 - 1 and k = i + j the `full` variant reads

        .. math::

            \\Theta = \\frac{2s^pC_m^iC_i^j + s^pC_m^{i-1}C_{i-1}^j + 2t^pC_m^{i-1}C_{i-1}^{j-1}
            + t^pC_m^{i-1}C_{i-1}^j - 2s^{p-k}t^kC_{p/2}^iC_i^j}{2p}

        The variants `even`, `single` and `half` are its one-index siblings (indexed by i, i and j respectively).
        Binomials with an out of range lower index are 0.

        :param inputs: p, i, j, s, t
        :type inputs: ThetaInputs
        :param variant: one of 'full', 'even', 'single', 'half'
        :type variant: str
        :rtype: float

        :Example:

        >>> theta(ThetaInputs(4, 1, 0, 2.0, 1.0))
        2.125
    """
    positive, negative, denominator = _theta_terms(inputs, variant)
    return (math.fsum(positive) - math.fsum(negative)) / denominator


def theta_scale(inputs, variant='full'):
    """Magnitude of the largest term of Theta; nonnegativity is asserted against -1e-12 times this value."""
    positive, negative, denominator = _theta_terms(inputs, variant)
    return max([abs(v) for v in positive + negative] + [0.0]) / denominator


def theta_young(inputs):
    """
        Closed form of the `full` variant obtained from the weighted Young inequality,

        .. math::

            \\frac{C_{p/2}^iC_i^j}{p}\\left[\\frac{p-k}{p}s^p + \\frac{k}{p}t^p - s^{p-k}t^k\\right]

        which is visibly nonnegative.
    """
    p, i, j, s, t = inputs
    k = i + j
    return binomial(p // 2, i) * binomial(i, j) / p * ((p - k) / p * s ** p + k / p * t ** p - s ** (p - k) * t ** k)


def theta_prime(p, i, j):
    """
        The coefficient combination

        .. math::

            \\Theta' = \\frac{2C_{p/2}^iC_i^j - 2C_m^iC_i^j - C_m^{i-1}C_{i-1}^j - 2C_m^{i-1}C_{i-1}^{j-1}
            - C_m^{i-1}C_{i-1}^j}{2p}

        computed in exact rational arithmetic. It vanishes for every even p and every index pair.

        :rtype: fractions.Fraction
    """
    ThetaInputs(p, i, j, 0.0, 0.0)
    p, i, j = int(p), int(i), int(j)
    h, m, C = p // 2, p // 2 - 1, binomial
    numerator = 2 * C(h, i) * C(i, j) - 2 * C(m, i) * C(i, j) - C(m, i - 1) * C(i - 1, j) \
        - 2 * C(m, i - 1) * C(i - 1, j - 1) - C(m, i - 1) * C(i - 1, j)
    return Fraction(numerator, 2 * p)


def theta_ratio(p, i, j, s1, s2, t1, t2, variant='full'):
    """
        Theta evaluated at the ratios (s2/s1, t2/t1); this is the quantity driving uniqueness of the pair projection.

        :raises DivisionByZeroScale: when s1 or t1 is not positive
    """
    if s1 <= 0 or t1 <= 0:
        raise DivisionByZeroScale('s1 and t1 must be > 0, got s1={} t1={}'.format(s1, t1))
    return theta(ThetaInputs(p, i, j, s2 / s1, t2 / t1), variant)


def _growth_ratio(t, params, epsilon):
    p, q, r, zeta = params.p, params.q, params.r, params.zeta
    numerator = t ** (q - 1.0) * np.abs(r * np.log(t)) - epsilon * t ** (p - 1.0)
    return numerator / t ** (zeta - 1.0), numerator


def growth_bound_fit(params, epsilon, sample_range=1e3, samples=10 ** 5):
    """
        Computes :math:`C_\\varepsilon = \\max_{t>0} (t^{q-1}|\\ln t^r| - \\varepsilon t^{p-1})/t^{\\zeta-1}` over the
        points where the numerator is positive. A log-spaced grid on (0, sample_range] locates the maximum, a
        golden-section search on log t refines it and the bound is then certified on the grid.

        :param params: the problem exponents
        :type params: ProblemParams
        :param epsilon: epsilon > 0
        :type epsilon: float
        :param sample_range: upper end of the sampled range (1e3 default)
        :type sample_range: float
        :param samples: number of log-spaced samples (10**5 default)
        :type samples: int
        :rtype: EpsilonBound
    """
    if epsilon <= 0:
        raise ValueError('epsilon must be > 0, got {}'.format(epsilon))
    grid = np.geomspace(sample_range * 1e-12, sample_range, int(samples))
    ratio, numerator = _growth_ratio(grid, params, epsilon)
    ratio = np.where(numerator > 0, ratio, -np.inf)
    k = int(np.argmax(ratio))
    if not np.isfinite(ratio[k]):
        raise MaximizationFailure('growth numerator never positive on (0, {}]'.format(sample_range))
    if k == 0 or k == len(grid) - 1:
        raise MaximizationFailure('maximum of the growth ratio not bracketed on (0, {}] (grid index {})'.format(
            sample_range, k))

    best_t, best = grid[k], float(ratio[k])
    try:
        bracket = (math.log(grid[k - 1]), math.log(grid[k]), math.log(grid[k + 1]))
        result = minimize_scalar(lambda x: -_growth_ratio(math.exp(x), params, epsilon)[0], bracket=bracket,
                                 method='golden')
        if -result.fun > best:
            best_t, best = math.exp(result.x), float(-result.fun)
    except ValueError as verr:
        logging.debug("golden refinement skipped ->%s", verr)

    c_epsilon = best * (1.0 + 1e-12)
    t = np.abs(grid)
    margin = epsilon * t ** (params.p - 1.0) + c_epsilon * t ** (params.zeta - 1.0) \
        - t ** (params.q - 1.0) * np.abs(params.r * np.log(t))
    scale = np.maximum(1.0, epsilon * t ** (params.p - 1.0) + c_epsilon * t ** (params.zeta - 1.0))
    min_margin = float(np.min(margin / scale))
    if min_margin < -1e-12:
        raise MaximizationFailure('growth bound violated on the certification grid (margin {})'.format(min_margin))
    return EpsilonBound(float(epsilon), float(c_epsilon), params.zeta, float(best_t), min_margin, int(samples))


def _series_check(params, N):
    if not params.p > 1 or not 1 < params.q <= 2 or not params.r >= 1:
        raise InvalidParams('the divergent series needs p > 1, 1 < q <= 2 and r >= 1, got {}'.format(tuple(params)))
    first = int(math.ceil(params.p + 2))
    if N < first:
        raise WindowTooSmall('N={} is below p+2={}'.format(N, params.p + 2))
    return first


def appendix1_partial_sums(params, checkpoints):
    """
        Partial sums :math:`S_N = \\sum_{p+2 \\leq |n| \\leq N} c(n)|u(n)|^q\\ln|u(n)|^r` for u(n) = 1/(|n| ln|n|)
        and c(n) = |n|^{q-1}, at every N in checkpoints.

        :param params: anything with p, q, r attributes (ProblemParams or SeriesParams)
        :param checkpoints: increasing window radii
        :type checkpoints: list of int
        :rtype: numpy.ndarray
    """
    checkpoints = [int(N) for N in checkpoints]
    first = _series_check(params, min(checkpoints))
    n = np.arange(first, max(checkpoints) + 1, dtype=float)
    u = 1.0 / (n * np.log(n))
    terms = 2.0 * n ** (params.q - 1.0) * u ** params.q * params.r * np.log(u)
    cumulative = np.cumsum(terms)
    return np.array([cumulative[N - first] for N in checkpoints])


def appendix1_partial_sum(params, N):
    """
        :math:`S_N` for a single window radius. For 1 < q <= 2 it decreases strictly and without bound in N.

        :rtype: float
    """
    return float(appendix1_partial_sums(params, [N])[0])


def appendix1_norm_partial_sums(params, checkpoints):
    """
        Partial sums of the two series defining the norm of the counterexample data,
        :math:`\\sum a(n)|\\Delta u(n)|^p` and :math:`\\sum b(n)|u(n)|^p` over the window of radius N, together with
        the integral tail bound :math:`\\sum_{n>N} 2/(n(\\ln n)^p) \\leq 2/((p-1)(\\ln N)^{p-1})` of the b-series.

        :return: array of shape (len(checkpoints), 3): difference sum, site sum, tail bound
        :rtype: numpy.ndarray
    """
    checkpoints = [int(N) for N in checkpoints]
    first = _series_check(params, min(checkpoints))
    p = params.p
    n = np.arange(0, max(checkpoints) + 2, dtype=float)
    u = np.zeros_like(n)
    keep = n >= params.p + 2
    u[keep] = 1.0 / (n[keep] * np.log(n[keep]))
    weight = np.where(n >= p - 1.0, n ** (p - 1.0), 1.0)
    site = weight * u ** p
    site[1:] *= 2.0
    # the jump between n and n+1 appears at site n and, mirrored, at site -n-1 where a = a(n+1)
    jump = (weight[:-1] + weight[1:]) * np.abs(u[1:] - u[:-1]) ** p
    site_cum = np.cumsum(site)
    jump_cum = np.concatenate(([0.0], np.cumsum(jump)))
    rows = []
    for N in checkpoints:
        tail = 2.0 / ((p - 1.0) * math.log(N) ** (p - 1.0))
        boundary = (weight[N] + weight[N + 1]) * u[N] ** p
        rows.append((jump_cum[N] + boundary, site_cum[N], tail))
    logging.debug("appendix1 norm sums from site %s", first)
    return np.array(rows)


def random_sign_changing(window, rng, low=-2.0, high=2.0):
    """
        Sequence with entries i.i.d. uniform on [low, high]; if it happens to be one-signed a random half is negated.
    """
    values = rng.uniform(low, high, window.size)
    if not (np.any(values > 0) and np.any(values < 0)):
        half = window.size // 2
        if rng.random() < 0.5:
            values[:half] = -values[:half]
        else:
            values[half:] = -values[half:]
    return Sequence(window, values)


class InequalityProcessor(EnergyProcessor):
    """
        Slacks of the energy inequalities along fibers. Every slack is LHS - RHS of the corresponding inequality and is
        nonnegative up to rounding.

        :param coeff: the weights a, b, c
        :type coeff: CoefficientProfile
        :param params: the exponents p, q, r, zeta
        :type params: ProblemParams

        :Example:

        >>> ip = plapkit.InequalityProcessor(plapkit.CoefficientProfile.constant(), plapkit.ProblemParams(4, 5))
        >>> u = plapkit.Sequence(2, [0.5, -1.0, 2.0, -0.3, 1.2])
        >>> ip.lemma22_slack(u, 0.5, 2.0) >= 0
        True
    """

    def __init__(self, coeff, params):
        super().__init__(coeff, params)
        logging.debug("InequalityProcessor init")

    def theta_cross_term(self, u, s, t):
        """
            :math:`\\sum_n a(n)\\big|\\sum_{i=1}^{p/2-1}\\sum_{j=1}^{i-1} 2^{i-j}(\\Delta u^+)^{p-(i+j)}
            (\\Delta u^-)^{i+j}\\Theta(i, j; s, t)\\big|`, which vanishes for p <= 4.
        """
        self._require_even_p()
        a, _, _ = self.coefficients(u.window)
        p = self.params.half_p * 2
        plus, minus = sign_split(u)
        x, y = padded_difference(plus.values), padded_difference(minus.values)
        inner = np.zeros_like(x)
        for i in range(1, p // 2):
            for j in range(1, i):
                k = i + j
                inner = inner + 2 ** (i - j) * theta(ThetaInputs(p, i, j, s, t)) * x ** (p - k) * y ** k
        return float(np.sum(a * np.abs(inner)))

    def lemma22_slack(self, u, s, t, relative=False):
        """
            Slack of

            .. math::

                I(u) \\geq I(su^+ + tu^-) + \\frac{1-s^q}{q}\\langle I'(u),u^+\\rangle
                + \\frac{1-t^q}{q}\\langle I'(u),u^-\\rangle
                + \\left(\\frac{1-s^p}{p} - \\frac{1-s^q}{q}\\right)\\|u^+\\|^p
                + \\left(\\frac{1-t^p}{p} - \\frac{1-t^q}{q}\\right)\\|u^-\\|^p + \\Theta\\text{-term}

            for even p and s, t >= 0.

            :param relative: divide by the magnitude of the largest term
            :type relative: bool
            :rtype: float
        """
        self._require_even_p()
        if s < 0 or t < 0:
            raise NegativeScale('s and t must be >= 0, got s={} t={}'.format(s, t))
        p, q = self.params.p, self.params.q
        plus, minus = sign_split(u)
        lhs = self.energy(u).total
        terms = [self.fiber_energy(u, s, t),
                 (1.0 - s ** q) / q * self.pairing(u, plus),
                 (1.0 - t ** q) / q * self.pairing(u, minus),
                 ((1.0 - s ** p) / p - (1.0 - s ** q) / q) * self.norm_power(plus),
                 ((1.0 - t ** p) / p - (1.0 - t ** q) / q) * self.norm_power(minus),
                 self.theta_cross_term(u, s, t)]
        slack = lhs - math.fsum(terms)
        if relative:
            return slack / max([1.0, abs(lhs)] + [abs(v) for v in terms])
        return slack

    def equal_scaling_slack(self, u, t, relative=False):
        """
            Slack of the equal-scaling case of the fiber inequality (even p):
            :math:`I(u) \\geq I(tu) + \\frac{1-t^q}{q}\\langle I'(u),u\\rangle
            + (\\frac{1-t^p}{p} - \\frac{1-t^q}{q})(\\|u^+\\|^p + \\|u^-\\|^p)`.
        """
        self._require_even_p()
        if t < 0:
            raise NegativeScale('t must be >= 0, got {}'.format(t))
        p, q = self.params.p, self.params.q
        plus, minus = sign_split(u)
        lhs = self.energy(u).total
        terms = [self.energy(t * u).total,
                 (1.0 - t ** q) / q * self.pairing(u, u),
                 ((1.0 - t ** p) / p - (1.0 - t ** q) / q) * (self.norm_power(plus) + self.norm_power(minus))]
        slack = lhs - math.fsum(terms)
        if relative:
            return slack / max([1.0, abs(lhs)] + [abs(v) for v in terms])
        return slack

    def corollary23_slack(self, u, t, relative=False):
        """
            Slack of :math:`I(u) \\geq I(tu) + \\frac{1-t^q}{q}\\langle I'(u),u\\rangle
            + (\\frac{1-t^p}{p} - \\frac{1-t^q}{q})\\|u\\|^p`, valid for every p > 1.
        """
        if t < 0:
            raise NegativeScale('t must be >= 0, got {}'.format(t))
        p, q = self.params.p, self.params.q
        lhs = self.energy(u).total
        terms = [self.energy(t * u).total,
                 (1.0 - t ** q) / q * self.pairing(u, u),
                 ((1.0 - t ** p) / p - (1.0 - t ** q) / q) * self.norm_power(u)]
        slack = lhs - math.fsum(terms)
        if relative:
            return slack / max([1.0, abs(lhs)] + [abs(v) for v in terms])
        return slack

    def corollary23_remainder(self, u, t):
        """
            The exact value of :meth:`corollary23_slack`,
            :math:`\\frac{r(1-t^q) + qt^q\\ln t^r}{q^2}\\sum c(n)|u(n)|^q`.
        """
        if t < 0:
            raise NegativeScale('t must be >= 0, got {}'.format(t))
        q, r = self.params.q, self.params.r
        factor = r if t == 0 else scalar_log_inequality(t, q, r)
        return factor / q ** 2 * self.q_sum(u)

    def embedding_slack(self, u, kappa):
        """
            :math:`b_0^{-1/p}\\|u\\| - \\|u\\|_{l^\\kappa}` for :math:`\\kappa \\in [p, \\infty]`; nonnegative whenever
            b >= b0 on the window.
        """
        if kappa < self.params.p:
            raise ValueError('kappa must be >= p, got {}'.format(kappa))
        return self.coeff.b0 ** (-1.0 / self.params.p) * self.norm_power(u) ** (1.0 / self.params.p) - \
            lp_norm(u, kappa)
