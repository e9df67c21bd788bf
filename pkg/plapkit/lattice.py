#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

"""
    Finite truncations of sequences on the integer lattice.

    A sequence lives on the symmetric window {-N, ..., N} and is taken to be zero outside of it. Forward differences
    therefore run over n = -N-1, ..., N so both boundary jumps are seen by the norm.
"""

import sys
import logging
from collections import namedtuple

import numpy as np
import pandas as pd

from .errors import InvalidParams, NonPositiveCoefficient, WindowTooSmall
from .utils import padded_difference


class LatticeWindow(namedtuple('LatticeWindow', ['radius'])):
    """
        The window {-N, ..., N} with zero ghost values at \\|n\\| > N.

        :param radius: N >= 1
        :type radius: int
    """
    __slots__ = ()

    def __new__(cls, radius):
        if int(radius) != radius or radius < 1:
            raise WindowTooSmall('window radius must be a positive integer, got {}'.format(radius))
        return super().__new__(cls, int(radius))

    @property
    def size(self):
        return 2 * self.radius + 1

    @property
    def indices(self):
        return np.arange(-self.radius, self.radius + 1)

    @property
    def difference_indices(self):
        """Sites n = -N-1, ..., N where a forward difference can be nonzero."""
        return np.arange(-self.radius - 1, self.radius + 1)

    def position(self, n):
        return int(n) + self.radius


class Sequence:
    """
        A real sequence on a :class:`LatticeWindow`. Values are copied on construction and frozen, so a Sequence can
        be shared between threads.

        :param window: the window (or its radius)
        :type window: LatticeWindow or int
        :param values: the 2N+1 values for n = -N, ..., N
        :type values: array-like

        :Example:

        >>> import plapkit
        >>> u = plapkit.Sequence(2, [0, 1, 3, 2, 0])
        >>> plapkit.forward_difference(u).values
        array([ 1.,  2., -1., -2.,  0.])
    """

    # numpy scalars defer to __rmul__
    __array_ufunc__ = None

    def __init__(self, window, values):
        if not isinstance(window, LatticeWindow):
            window = LatticeWindow(window)
        values = np.array(values, dtype=float)
        if values.shape != (window.size,):
            raise ValueError('expected {} values for window radius {}, got shape {}'.format(
                window.size, window.radius, values.shape))
        if not np.all(np.isfinite(values)):
            raise ValueError('sequence values must be finite')
        values.setflags(write=False)
        self._window = window
        self._values = values

    @classmethod
    def zeros(cls, window):
        if not isinstance(window, LatticeWindow):
            window = LatticeWindow(window)
        return cls(window, np.zeros(window.size))

    @classmethod
    def spike(cls, window, value, n=0):
        if not isinstance(window, LatticeWindow):
            window = LatticeWindow(window)
        values = np.zeros(window.size)
        values[window.position(n)] = value
        return cls(window, values)

    @classmethod
    def from_sites(cls, window, sites):
        """
            Builds a sequence from a mapping n -> value, every other site being zero.
        """
        if not isinstance(window, LatticeWindow):
            window = LatticeWindow(window)
        values = np.zeros(window.size)
        for n, v in sites.items():
            values[window.position(n)] = v
        return cls(window, values)

    @property
    def window(self):
        return self._window

    @property
    def values(self):
        return self._values

    @property
    def series(self):
        """The values as a pandas Series indexed by the lattice site n."""
        return pd.Series(self._values, index=pd.Index(self._window.indices, name='index'), name='value')

    def at(self, n):
        if abs(n) > self._window.radius:
            return 0.0
        return float(self._values[self._window.position(n)])

    def is_zero(self):
        return not np.any(self._values)

    def with_values(self, values):
        return Sequence(self._window, values)

    def _check_window(self, other):
        if other.window != self._window:
            raise ValueError('sequences live on different windows ({} and {})'.format(
                self._window.radius, other.window.radius))

    def __add__(self, other):
        self._check_window(other)
        return Sequence(self._window, self._values + other.values)

    def __sub__(self, other):
        self._check_window(other)
        return Sequence(self._window, self._values - other.values)

    def __mul__(self, scalar):
        return Sequence(self._window, float(scalar) * self._values)

    __rmul__ = __mul__

    def __neg__(self):
        return Sequence(self._window, -self._values)

    def __eq__(self, other):
        return isinstance(other, Sequence) and other.window == self._window and \
            np.array_equal(other.values, self._values)

    def __hash__(self):
        return hash((self._window, self._values.tobytes()))

    def __len__(self):
        return self._window.size

    def __repr__(self):
        return 'Sequence(radius={}, values={})'.format(self._window.radius, np.array2string(self._values))


class ProblemParams(namedtuple('ProblemParams', ['p', 'q', 'r', 'zeta'])):
    """
        Exponents of the problem: 1 < p < q < zeta and r >= 1.

        :param p: the p-Laplacian exponent
        :type p: float
        :param q: the power of the logarithmic nonlinearity
        :type q: float
        :param r: the weight inside the logarithm
        :type r: float
        :param zeta: auxiliary exponent of the growth bound
        :type zeta: float
    """
    __slots__ = ()

    def __new__(cls, p, q, r=1.0, zeta=None):
        p, q, r = float(p), float(q), float(r)
        zeta = q + 1.0 if zeta is None else float(zeta)
        if not 1.0 < p:
            raise InvalidParams('p must be > 1, got {}'.format(p))
        if not p < q:
            raise InvalidParams('q must be > p, got p={} q={}'.format(p, q))
        if not q < zeta:
            raise InvalidParams('zeta must be > q, got q={} zeta={}'.format(q, zeta))
        if not r >= 1.0:
            raise InvalidParams('r must be >= 1, got {}'.format(r))
        return super().__new__(cls, p, q, r, zeta)

    @property
    def even_p(self):
        """True iff p/2 is a positive integer."""
        half = self.p / 2.0
        return half == int(half) and half >= 1

    @property
    def half_p(self):
        return int(self.p // 2)

    def replace(self, **kwargs):
        values = self._asdict()
        values.update(kwargs)
        return ProblemParams(**values)


class CoefficientProfile:
    """
        The weights a(n), b(n), c(n) of the problem together with the constants b0 (lower bound of b) and c0 (upper
        bound of c).

        The callables must accept an integer numpy array and return an array of the same shape. `c0=None` means the
        supremum of c is not finite on the whole lattice; the bound on a window is then taken as the window maximum.

        :param a: n -> a(n)
        :param b: n -> b(n)
        :param c: n -> c(n)
        :param b0: lower bound of b
        :type b0: float
        :param c0: upper bound of c, or None
        :type c0: float
        :param family: one of 'constant', 'appendix1', 'custom'
        :type family: str
        :param satisfies_c1: whether the lattice family has b >= b0 > 0 with b(n) -> infinity
        :type satisfies_c1: bool
        :param satisfies_c2: whether the lattice family has c <= c0 and summable c
        :type satisfies_c2: bool
    """

    FAMILIES = ('constant', 'appendix1', 'custom')

    def __init__(self, a, b, c, b0, c0=None, family='custom', satisfies_c1=False, satisfies_c2=False):
        try:
            if family not in self.FAMILIES:
                raise ValueError('unknown coefficient family {}'.format(family))
            if b0 is None or b0 <= 0:
                raise NonPositiveCoefficient('b0 must be positive, got {}'.format(b0))
            if c0 is not None and c0 <= 0:
                raise NonPositiveCoefficient('c0 must be positive, got {}'.format(c0))
            self.a = a
            self.b = b
            self.c = c
            self.b0 = float(b0)
            self.c0 = None if c0 is None else float(c0)
            self.family = family
            self.satisfies_c1 = satisfies_c1
            self.satisfies_c2 = satisfies_c2
            logging.debug("CoefficientProfile init")
        except ValueError as verr:
            logging.error("CoefficientProfile ValueError ->%s", verr)
            raise
        except:
            logging.error("Unexpected error on CoefficientProfile init: %s", sys.exc_info()[0])
            raise

    @classmethod
    def constant(cls, a=1.0, b=1.0, c=1.0):
        """a, b, c constant. Legal on a window, but (C1) and (C2) fail on the whole lattice."""
        a, b, c = float(a), float(b), float(c)
        return cls(lambda n: np.full(np.shape(n), a),
                   lambda n: np.full(np.shape(n), b),
                   lambda n: np.full(np.shape(n), c),
                   b0=b, c0=c, family='constant')

    @classmethod
    def appendix1(cls, params):
        """
            The polynomial family a(n) = b(n) = \\|n\\|^{p-1} for \\|n\\| >= p-1 (else 1) and
            c(n) = \\|n\\|^{q-1} for \\|n\\| >= q-1 (else 1). b is bounded below by 1 and unbounded, c is unbounded.
        """
        p, q = params.p, params.q

        def ab(n):
            m = np.abs(np.asarray(n, dtype=float))
            return np.where(m >= p - 1.0, m ** (p - 1.0), 1.0)

        def c(n):
            m = np.abs(np.asarray(n, dtype=float))
            return np.where(m >= q - 1.0, m ** (q - 1.0), 1.0)

        return cls(ab, ab, c, b0=1.0, c0=None, family='appendix1', satisfies_c1=True, satisfies_c2=False)

    @classmethod
    def custom(cls, overrides, base=None):
        """
            Per-site overrides on top of a base family (constant ones by default).

            :param overrides: data frame indexed by n with columns a, b, c
                (see :func:`plapkit.utils.load_coefficient_file`)
            :type overrides: pandas.DataFrame
            :param base: the family supplying every site absent from overrides
            :type base: CoefficientProfile
        """
        base = base if base is not None else cls.constant()
        table = {int(n): (float(row['a']), float(row['b']), float(row['c'])) for n, row in overrides.iterrows()}

        def column(k, fallback):
            def f(n):
                n = np.asarray(n)
                out = np.array(fallback(n), dtype=float)
                flat = out.reshape(-1)
                for pos, site in enumerate(n.reshape(-1)):
                    if int(site) in table:
                        flat[pos] = table[int(site)][k]
                return out
            return f

        b_values = [v[1] for v in table.values()]
        c_values = [v[2] for v in table.values()]
        b0 = min([base.b0] + b_values)
        c0 = None if base.c0 is None else max([base.c0] + c_values)
        return cls(column(0, base.a), column(1, base.b), column(2, base.c), b0=b0, c0=c0, family='custom')

    @classmethod
    def from_tag(cls, tag, params, overrides=None):
        """
            Profile named by a family tag. With overrides, the listed sites replace the values of the family
            (the constant one for 'custom', which needs the overrides frame).

            :param tag: one of 'constant', 'appendix1', 'custom'
            :type tag: str
            :param params: the exponents (the appendix1 family depends on p and q)
            :type params: ProblemParams
            :param overrides: (optional) per-site coefficients
            :type overrides: pandas.DataFrame
            :rtype: CoefficientProfile
        """
        if tag in ('constant', 'custom'):
            base = cls.constant()
        elif tag == 'appendix1':
            base = cls.appendix1(params)
        else:
            raise ValueError('unknown coefficient family {}'.format(tag))
        if overrides is not None:
            return cls.custom(overrides, base=base)
        if tag == 'custom':
            raise ValueError('the custom profile needs a coefficient file')
        return base

    def a_values(self, window):
        """a(n) on n = -N-1, ..., N."""
        return np.asarray(self.a(window.difference_indices), dtype=float)

    def b_values(self, window):
        return np.asarray(self.b(window.indices), dtype=float)

    def c_values(self, window):
        return np.asarray(self.c(window.indices), dtype=float)

    def check_positive(self, window):
        for name, values in (('a', self.a_values(window)), ('b', self.b_values(window)),
                             ('c', self.c_values(window))):
            if not np.all(values > 0):
                raise NonPositiveCoefficient('{}(n) must be positive on the window of radius {}'.format(
                    name, window.radius))

    def c_bound(self, window):
        """c0, or the maximum of c on the window when the family has no finite supremum."""
        if self.c0 is not None:
            return self.c0
        return float(np.max(self.c_values(window)))

    def __repr__(self):
        return 'CoefficientProfile(family={}, b0={}, c0={})'.format(self.family, self.b0, self.c0)


def forward_difference(u):
    """
        :math:`\\Delta u(n) = u(n+1) - u(n)` on the window of u, with the zero ghost at N+1, so that
        :math:`\\Delta u(N) = -u(N)`. The extra difference :math:`\\Delta u(-N-1) = u(-N)` is taken into account by the
        norm routines.

        :param u: the sequence
        :type u: Sequence
        :rtype: Sequence
    """
    return Sequence(u.window, padded_difference(u.values)[1:])


def sign_split(u):
    """
        Returns (u+, u-) with u+ = max(u, 0) and u- = min(u, 0), so that u = u+ + u-.
    """
    return Sequence(u.window, np.maximum(u.values, 0.0)), Sequence(u.window, np.minimum(u.values, 0.0))


def norm_p_power(u, coeff, params):
    """
        :math:`\\|u\\|^p = \\sum a(n)|\\Delta u(n)|^p + b(n)|u(n)|^p`, with the difference sum over n = -N-1, ..., N.
    """
    window = u.window
    a, b = coeff.a_values(window), coeff.b_values(window)
    if not (np.all(a > 0) and np.all(b > 0)):
        raise NonPositiveCoefficient('a and b must be positive on the window of radius {}'.format(window.radius))
    p = params.p
    return float(np.sum(a * np.abs(padded_difference(u.values)) ** p) + np.sum(b * np.abs(u.values) ** p))


def weighted_norm_p(u, coeff, params):
    """
        The norm :math:`\\|u\\| = (\\sum_n a(n)|\\Delta u(n)|^p + b(n)|u(n)|^p)^{1/p}`.

        :param u: the sequence
        :type u: Sequence
        :param coeff: the coefficient profile
        :type coeff: CoefficientProfile
        :param params: the problem exponents
        :type params: ProblemParams
        :return: the norm, >= 0
        :rtype: float
    """
    return norm_p_power(u, coeff, params) ** (1.0 / params.p)


def lp_norm(u, kappa):
    """
        The :math:`l^\\kappa` norm of u over its window; kappa may be numpy.inf.
    """
    if kappa == np.inf:
        return float(np.max(np.abs(u.values)))
    if kappa < 1:
        raise ValueError('kappa must be >= 1, got {}'.format(kappa))
    return float(np.sum(np.abs(u.values) ** kappa) ** (1.0 / kappa))


def sign_change_count(u):
    """
        Number of transitions between consecutive nonzero entries of opposite sign, zeros skipped.

        :Example:

        >>> sign_change_count(Sequence(1, [1, 0, -1]))
        1
    """
    signs = np.sign(u.values[u.values != 0])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def appendix1_profile(params, N):
    """
        Truncation of the sequence u(n) = 1/(\\|n\\| ln\\|n\\|) for \\|n\\| >= p+2 (zero otherwise) together with its
        polynomial coefficient family. For 1 < q <= 2 the sequence has finite norm while its logarithmic series
        diverges to minus infinity.

        :param params: the problem exponents
        :type params: ProblemParams
        :param N: the window radius, N >= p+2
        :type N: int
        :return: the sequence and the coefficient profile
        :rtype: (Sequence, CoefficientProfile)
    """
    if N < params.p + 2:
        raise WindowTooSmall('window radius {} is below p+2={}'.format(N, params.p + 2))
    window = LatticeWindow(N)
    m = np.abs(window.indices).astype(float)
    values = np.zeros(window.size)
    keep = m >= params.p + 2
    values[keep] = 1.0 / (m[keep] * np.log(m[keep]))
    return Sequence(window, values), CoefficientProfile.appendix1(params)
