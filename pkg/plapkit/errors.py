#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright 2024 plapkit project members. All rights reserved.
#
# Licensed under the MIT license. See file LICENSE for details.

"""
    Exceptions raised by plapkit. Every exception derives from :class:`PlapkitError` and from the closest builtin
    so callers may catch either.
"""


class PlapkitError(Exception):
    """Base class of every plapkit error."""


class InvalidParams(PlapkitError, ValueError):
    """Raised when exponents violate 1 < p < q < zeta or r >= 1."""


class NonPositiveCoefficient(PlapkitError, ValueError):
    pass


class WindowTooSmall(PlapkitError, ValueError):
    pass


class OddP(PlapkitError, ValueError):
    """Raised when an operation needs p/2 to be a positive integer."""


class IndexOutOfRange(PlapkitError, ValueError):
    pass


class NonPositiveTau(PlapkitError, ValueError):
    pass


class NegativeScale(PlapkitError, ValueError):
    pass


class DivisionByZeroScale(PlapkitError, ValueError):
    pass


class ZeroSequence(PlapkitError, ValueError):
    pass


class OneSigned(PlapkitError, ValueError):
    """Raised when a sign-changing operation receives a sequence with u+ or u- identically zero."""


class BracketFailure(PlapkitError, ArithmeticError):
    pass


class BoxFailure(PlapkitError, ArithmeticError):
    pass


class MaximizationFailure(PlapkitError, ArithmeticError):
    pass


class ProjectionFailure(PlapkitError, ArithmeticError):
    """Raised when a projection ends with a membership residual above its tolerance."""


class Stalled(PlapkitError, RuntimeError):
    """Raised by a descent step once the backtracked step falls below the floor."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class OneSignedSeed(PlapkitError, RuntimeError):
    pass


class NoConvergedStart(PlapkitError, RuntimeError):
    """
        Raised when none of the solver starts converged.

        :param diagnostics: one entry per start describing how it ended
        :type diagnostics: list of dict
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []
