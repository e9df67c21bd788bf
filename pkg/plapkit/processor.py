#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

import sys
import logging

from .errors import NonPositiveCoefficient
from .lattice import CoefficientProfile, ProblemParams


class Processor:
    """
       This is the base Processor class. It binds a coefficient profile to the problem exponents and serves the
       coefficient arrays evaluated on a window:

       a on n = -N-1, ..., N (one site left of the window is needed by the differences)
       b, c on n = -N, ..., N

       Arrays are computed once per window radius and treated as read-only afterwards.

       :param coeff: the weights a, b, c
       :type coeff: CoefficientProfile
       :param params: the exponents p, q, r, zeta
       :type params: ProblemParams
    """

    def __init__(self, coeff, params):
        try:
            if not isinstance(coeff, CoefficientProfile):
                raise ValueError('coeff must be a CoefficientProfile, got {}'.format(type(coeff).__name__))
            if not isinstance(params, ProblemParams):
                raise ValueError('params must be ProblemParams, got {}'.format(type(params).__name__))
            self.coeff = coeff
            self.params = params
            self._arrays = {}

            logging.debug("Processor init")

        except ValueError as verr:
            logging.error("Processor ValueError ->%s", verr)
            raise

        except:
            logging.error("Unexpected error on Processor init: %s", sys.exc_info()[0])
            raise

    def coefficients(self, window):
        """
            The coefficient arrays (a, b, c) on the given window.

            :param window: the window
            :type window: LatticeWindow
            :return: a on the difference sites, b and c on the window sites
            :rtype: tuple of numpy.ndarray
        """
        arrays = self._arrays.get(window.radius)
        if arrays is None:
            a = self.coeff.a_values(window)
            b = self.coeff.b_values(window)
            c = self.coeff.c_values(window)
            for name, values in (('a', a), ('b', b), ('c', c)):
                if not (values > 0).all():
                    logging.error("non-positive coefficient %s on window %s", name, window.radius)
                    raise NonPositiveCoefficient('{}(n) must be positive on the window of radius {}'.format(
                        name, window.radius))
                values.setflags(write=False)
            arrays = (a, b, c)
            self._arrays[window.radius] = arrays
        return arrays
