#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import logging
from collections import namedtuple

import numpy as np

from .errors import NegativeScale, OddP
from .lattice import Sequence, sign_split
from .processor import Processor
from .utils import binomial, log_force, log_power, padded_difference, phi_p


class EnergyReport(namedtuple('EnergyReport', ['total', 'norm_term', 'q_term', 'log_term', 'pairing_self'])):
    """
        I(u) and its pieces: total = norm_term + q_term - log_term, together with <I'(u), u>.
    """
    __slots__ = ()

    COLUMNS = ['total', 'norm_term', 'q_term', 'log_term', 'pairing_self']

    def as_row(self):
        return dict(self._asdict())


class FiberPoint(namedtuple('FiberPoint', ['s', 't'])):
    """Scalings (s, t) applied to (u+, u-)."""
    __slots__ = ()

    def __new__(cls, s, t):
        if s < 0 or t < 0:
            raise NegativeScale('fiber scalings must be >= 0, got s={} t={}'.format(s, t))
        return super().__new__(cls, float(s), float(t))


class EnergyProcessor(Processor):
    """
        The energy functional

        .. math::

            I(u) = \\frac{1}{p}\\|u\\|^p + \\frac{r}{q^2}\\sum c(n)|u(n)|^q - \\frac{1}{q}\\sum c(n)|u(n)|^q\\ln|u(n)|^r

        with its derivative pairing, gradient and fiber maps. Every method is a pure function of its arguments.

        :param coeff: the weights a, b, c
        :type coeff: CoefficientProfile
        :param params: the exponents p, q, r, zeta
        :type params: ProblemParams

        :Example:

        >>> import plapkit
        >>> params = plapkit.ProblemParams(2, 3, 1, 4)
        >>> ep = plapkit.EnergyProcessor(plapkit.CoefficientProfile.constant(), params)
        >>> ep.energy(plapkit.Sequence.spike(2, 2.0)).total
        5.0404964...
    """

    def __init__(self, coeff, params):
        super().__init__(coeff, params)
        logging.debug("EnergyProcessor init")

    def norm_power(self, u):
        """:math:`\\|u\\|^p`."""
        a, b, _ = self.coefficients(u.window)
        p = self.params.p
        return float(np.sum(a * np.abs(padded_difference(u.values)) ** p) + np.sum(b * np.abs(u.values) ** p))

    def log_sum(self, u):
        """:math:`\\sum c(n)|u(n)|^q\\ln|u(n)|^r` with the zero-at-zero convention."""
        _, _, c = self.coefficients(u.window)
        return float(np.sum(c * log_power(u.values, self.params.q, self.params.r)))

    def q_sum(self, u):
        """:math:`\\sum c(n)|u(n)|^q`."""
        _, _, c = self.coefficients(u.window)
        return float(np.sum(c * np.abs(u.values) ** self.params.q))

    def energy(self, u):
        """
            Evaluates I(u).

            :param u: the sequence
            :type u: Sequence
            :return: the energy and its pieces
            :rtype: EnergyReport
        """
        p, q, r = self.params.p, self.params.q, self.params.r
        norm_p = self.norm_power(u)
        log_sum = self.log_sum(u)
        norm_term = norm_p / p
        q_term = r / q ** 2 * self.q_sum(u)
        log_term = log_sum / q
        return EnergyReport(norm_term + q_term - log_term, norm_term, q_term, log_term, norm_p - log_sum)

    def pairing(self, u, v):
        """
            The derivative pairing

            .. math::

                \\langle I'(u), v\\rangle = \\sum a(n)\\varphi_p(\\Delta u(n))\\Delta v(n) + b(n)\\varphi_p(u(n))v(n)
                - \\sum c(n)|u(n)|^{q-2}u(n)v(n)\\ln|u(n)|^r

            :param u: the base point
            :type u: Sequence
            :param v: the direction, on the same window
            :type v: Sequence
            :rtype: float
        """
        if u.window != v.window:
            raise ValueError('u and v must share a window')
        a, b, c = self.coefficients(u.window)
        p, q, r = self.params.p, self.params.q, self.params.r
        du, dv = padded_difference(u.values), padded_difference(v.values)
        return float(np.sum(a * phi_p(du, p) * dv) + np.sum(b * phi_p(u.values, p) * v.values)
                     - np.sum(c * log_force(u.values, q, r) * v.values))

    def gradient(self, u):
        """
            The residual of the difference equation at every window site,

            .. math::

                -\\Delta(a(n-1)\\varphi_p(\\Delta u(n-1))) + b(n)\\varphi_p(u(n)) - c(n)|u(n)|^{q-2}u(n)\\ln|u(n)|^r

            so that :math:`\\sum_n` gradient(u)(n) v(n) equals pairing(u, v).

            :rtype: Sequence
        """
        a, b, c = self.coefficients(u.window)
        p, q, r = self.params.p, self.params.q, self.params.r
        flux = a * phi_p(padded_difference(u.values), p)
        values = flux[:-1] - flux[1:] + b * phi_p(u.values, p) - c * log_force(u.values, q, r)
        return Sequence(u.window, values)

    def fiber_g(self, u, t):
        """
            :math:`g(t) = \\langle I'(tu), tu\\rangle = t^p\\|u\\|^p - \\sum c|tu|^q\\ln|tu|^r`.

            :param t: the scaling, >= 0
            :type t: float
        """
        if t < 0:
            raise NegativeScale('t must be >= 0, got {}'.format(t))
        if t == 0:
            return 0.0
        _, _, c = self.coefficients(u.window)
        return t ** self.params.p * self.norm_power(u) - \
            float(np.sum(c * log_power(t * u.values, self.params.q, self.params.r)))

    def fiber_h(self, u, s, t):
        """
            :math:`h_1 = \\langle I'(su^+ + tu^-), su^+\\rangle` and
            :math:`h_2 = \\langle I'(su^+ + tu^-), tu^-\\rangle`,
            evaluated directly as pairings of the composite.

            :rtype: (float, float)
        """
        FiberPoint(s, t)
        plus, minus = sign_split(u)
        w = s * plus + t * minus
        return self.pairing(w, s * plus), self.pairing(w, t * minus)

    def fiber_h_jacobian(self, u, s, t):
        """
            Jacobian of (h1, h2) with respect to (s, t) for s, t > 0. Where a composite difference vanishes and
            p < 2 the singular factor is replaced by 0.

            :rtype: numpy.ndarray
        """
        a, b, c = self.coefficients(u.window)
        p, q, r = self.params.p, self.params.q, self.params.r
        plus = np.maximum(u.values, 0.0)
        minus = np.minimum(u.values, 0.0)
        d_plus, d_minus = padded_difference(plus), padded_difference(minus)
        dw = s * d_plus + t * d_minus
        flux = a * phi_p(dw, p)
        stiff = np.zeros_like(dw)
        nz = dw != 0
        stiff[nz] = a[nz] * (p - 1.0) * np.abs(dw[nz]) ** (p - 2.0)
        b_plus = np.sum(b * np.abs(plus) ** p)
        b_minus = np.sum(b * np.abs(minus) ** p)

        def log_derivative(x, scale):
            return (q * np.sum(c * log_power(scale * x, q, r)) + r * np.sum(c * np.abs(scale * x) ** q)) / scale

        cross = np.sum(stiff * d_plus * d_minus)
        j11 = np.sum(flux * d_plus) + s * np.sum(stiff * d_plus ** 2) + p * s ** (p - 1.0) * b_plus \
            - log_derivative(plus, s)
        j12 = s * cross
        j21 = t * cross
        j22 = np.sum(flux * d_minus) + t * np.sum(stiff * d_minus ** 2) + p * t ** (p - 1.0) * b_minus \
            - log_derivative(minus, t)
        return np.array([[j11, j12], [j21, j22]])

    def fiber_energy(self, u, s, t):
        """:math:`I(su^+ + tu^-)`."""
        FiberPoint(s, t)
        plus, minus = sign_split(u)
        return self.energy(s * plus + t * minus).total

    def fiber_energy_grid(self, u, s_values, t_values):
        """
            :math:`I(su^+ + tu^-)` on the tensor grid s_values x t_values.

            :return: array of shape (len(s_values), len(t_values))
            :rtype: numpy.ndarray
        """
        a, b, c = self.coefficients(u.window)
        p, q, r = self.params.p, self.params.q, self.params.r
        s_values = np.asarray(s_values, dtype=float)[:, None, None]
        t_values = np.asarray(t_values, dtype=float)[None, :, None]
        plus = np.maximum(u.values, 0.0)
        minus = np.minimum(u.values, 0.0)
        w = s_values * plus + t_values * minus
        dw = s_values * padded_difference(plus) + t_values * padded_difference(minus)
        norm_p = np.sum(a * np.abs(dw) ** p, axis=-1) + np.sum(b * np.abs(w) ** p, axis=-1)
        q_sum = np.sum(c * np.abs(w) ** q, axis=-1)
        log_sum = np.sum(c * log_power(w, q, r), axis=-1)
        return norm_p / p + r / q ** 2 * q_sum - log_sum / q

    def fiber_energy_line(self, u, t_values):
        """:math:`I(tu)` for every t in t_values."""
        _, _, c = self.coefficients(u.window)
        p, q, r = self.params.p, self.params.q, self.params.r
        t_values = np.asarray(t_values, dtype=float)
        w = t_values[:, None] * u.values
        log_sum = np.sum(c * log_power(w, q, r), axis=-1)
        return np.abs(t_values) ** p * self.norm_power(u) / p + r / q ** 2 * np.abs(t_values) ** q * self.q_sum(u) \
            - log_sum / q

    def _require_even_p(self):
        if not self.params.even_p:
            raise OddP('p/2 must be a positive integer, got p={}'.format(self.params.p))

    def _cross(self, x, y, terms):
        """
            Site-wise :math:`\\sum_k coef_k x^{p-k} y^k` for the (coef, k) pairs in terms.
        """
        p = self.params.half_p * 2
        out = np.zeros_like(x)
        for coef, k in terms:
            if coef:
                out = out + coef * x ** (p - k) * y ** k
        return out

    def cross_sums(self, u):
        """
            The binomial cross sums between u+ and u- appearing in the decompositions of :math:`\\|u\\|^p`,
            :math:`\\langle I'(u), u^+\\rangle` and :math:`\\langle I'(u), u^-\\rangle` (p even only).

            :return: (norm cross sum, plus pairing cross sum, minus pairing cross sum)
            :rtype: (float, float, float)
        """
        self._require_even_p()
        a, _, _ = self.coefficients(u.window)
        h = self.params.half_p
        m = h - 1
        plus, minus = sign_split(u)
        x, y = padded_difference(plus.values), padded_difference(minus.values)
        C = binomial

        norm_inner = [(C(h, i) * C(i, j) * 2 ** (i - j), i + j) for i in range(1, h) for j in range(0, i + 1)]
        norm_outer = [(C(h, j) * 2 ** (h - j), h + j) for j in range(0, h)]
        plus_inner = [(C(m, i) * C(i, j) * 2 ** (i - j), i + j) for i in range(1, m + 1) for j in range(0, i + 1)]
        shared = [(C(m, i - 1) * C(i - 1, j) * 2 ** (i - 1 - j), i + j) for i in range(1, h + 1) for j in range(0, i)]
        minus_inner = [(C(m, i - 1) * C(i - 1, j - 1) * 2 ** (i - j), i + j)
                       for i in range(1, m + 1) for j in range(1, i + 1)]
        minus_outer = [(C(m, j - 1) * 2 ** (h - j), h + j) for j in range(1, m + 1)]

        def weighted(terms):
            return float(np.sum(a * np.abs(self._cross(x, y, terms))))

        norm_cross = weighted(norm_inner) + weighted(norm_outer)
        plus_cross = weighted(plus_inner) + weighted(shared)
        minus_cross = weighted(minus_inner) + weighted(minus_outer) + weighted(shared)
        return norm_cross, plus_cross, minus_cross

    def decomposition_residuals(self, u, relative=False):
        """
            Residuals of the three sign decompositions (p even):

            I(u) = I(u+) + I(u-) + (1/p) * norm cross sum,
            <I'(u), u+> = <I'(u+), u+> + plus cross sum,
            <I'(u), u-> = <I'(u-), u-> + minus cross sum.

            :param u: the sequence
            :type u: Sequence
            :param relative: divide each residual by the magnitude of the largest participating term
            :type relative: bool
            :return: (R0, R+, R-)
            :rtype: (float, float, float)
        """
        self._require_even_p()
        p = self.params.p
        plus, minus = sign_split(u)
        norm_cross, plus_cross, minus_cross = self.cross_sums(u)

        i_u = self.energy(u)
        i_plus = self.energy(plus)
        i_minus = self.energy(minus)
        pair_plus = self.pairing(u, plus)
        pair_minus = self.pairing(u, minus)
        self_plus = self.pairing(plus, plus)
        self_minus = self.pairing(minus, minus)

        residuals = (abs(i_u.total - i_plus.total - i_minus.total - norm_cross / p),
                     abs(pair_plus - self_plus - plus_cross),
                     abs(pair_minus - self_minus - minus_cross))
        if not relative:
            return residuals
        scales = (max(1.0, abs(i_u.norm_term), abs(i_u.q_term), abs(i_u.log_term), norm_cross / p),
                  max(1.0, abs(pair_plus), abs(self_plus), plus_cross, self.norm_power(u)),
                  max(1.0, abs(pair_minus), abs(self_minus), minus_cross, self.norm_power(u)))
        return tuple(res / scale for res, scale in zip(residuals, scales))
