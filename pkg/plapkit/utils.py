#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import sys
import logging

import numpy as np
import pandas as pd

from scipy.special import comb


def binomial(n, k):
    """
        Binomial coefficient :math:`C_n^k` with the convention :math:`C_n^k = 0` when :math:`k < 0`, :math:`k > n`
        or :math:`n < 0`.

        :param n: the upper index
        :type n: int
        :param k: the lower index
        :type k: int
        :return: the binomial coefficient
        :rtype: int
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return int(comb(n, k, exact=True))


def phi_p(x, p):
    """
        The p-Laplacian nonlinearity :math:`\\varphi_p(x) = |x|^{p-2}x`, continuously extended by 0 at x = 0.

        :param x: input values
        :type x: numpy.ndarray
        :param p: exponent p > 1
        :type p: float
        :return: the values of :math:`\\varphi_p`
        :rtype: numpy.ndarray
    """
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** (p - 1.0)


def log_power(x, q, r):
    """
        :math:`|x|^q \\ln|x|^r` evaluated elementwise, defined as 0 at x = 0.

        :param x: input values
        :type x: numpy.ndarray
        :param q: the power q
        :type q: float
        :param r: the logarithm weight r
        :type r: float
        :rtype: numpy.ndarray
    """
    x = np.abs(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    nz = x > 0
    out[nz] = x[nz] ** q * r * np.log(x[nz])
    return out


def log_force(x, q, r):
    """
        :math:`|x|^{q-2}x \\ln|x|^r` evaluated elementwise, defined as 0 at x = 0. This is the derivative factor of
        the logarithmic term paired against a direction.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.zeros_like(x)
    nz = ax > 0
    out[nz] = np.sign(x[nz]) * ax[nz] ** (q - 1.0) * r * np.log(ax[nz])
    return out


def padded_difference(values):
    """
        Forward differences of a window sequence with zero ghosts on both sides. For a window of radius N the result
        holds :math:`\\Delta u(n)` for n = -N-1, ..., N, i.e. 2N+2 entries.

        :param values: the 2N+1 window values
        :type values: numpy.ndarray
        :rtype: numpy.ndarray
    """
    return np.diff(np.concatenate(([0.0], np.asarray(values, dtype=float), [0.0])))


def relative_gap(a, b, scale=None):
    """
        Absolute difference of a and b divided by max(1e-300, scale) where scale defaults to max(|a|, |b|, 1).
    """
    if scale is None:
        scale = max(abs(a), abs(b), 1.0)
    return abs(a - b) / max(scale, 1e-300)


def geometric_grid(lower, upper, samples):
    """
        Log-spaced grid of `samples` points between lower and upper (both > 0, inclusive).
    """
    return np.geomspace(lower, upper, int(samples))


def decade_checkpoints(start, stop):
    """
        The checkpoints start, 10, 100, ... up to stop (inclusive), keeping only those >= start.

        :Example:

        >>> decade_checkpoints(4, 10**3)
        [4, 10, 100, 1000]
    """
    points = [int(start)]
    k = 10
    while k <= stop:
        if k > start:
            points.append(k)
        k *= 10
    if points[-1] != stop and stop > start:
        points.append(int(stop))
    return points


def load_coefficient_file(filename):
    """
       This method loads per-site coefficient overrides.

       The file is plain text with one site per line, comment lines start with '#':

      .. code-block:: text

         # n  a  b  c
         -1	2.0	1.0	1.0
         0	1.0	3.0	0.5

      :param filename: The path to load data from
      :type filename: str
      :return: data frame indexed by n with columns a, b, c
      :rtype: pandas.DataFrame
    """
    try:
        data_frame = pd.read_csv(filename, sep='\t', comment='#', header=None, names=['n', 'a', 'b', 'c'])
        data_frame = data_frame.dropna(how='all')
        if data_frame.isnull().values.any():
            raise ValueError('coefficient file {} has missing columns'.format(filename))
        data_frame['n'] = data_frame['n'].astype(int)
        if data_frame['n'].duplicated().any():
            raise ValueError('coefficient file {} lists a site twice'.format(filename))
        return data_frame.set_index('n').astype(float)
    except IOError as e:
        ierr = "({}): {}".format(e.errno, e.strerror)
        logging.error("load coefficient file, file not found, I/O error %s", ierr)
        raise
    except ValueError as verr:
        logging.error("load coefficient file ValueError ->%s", verr)
        raise
    except:
        logging.error("Unexpected error on load coefficient file: %s", sys.exc_info()[0])
        raise
