"""The region S of graph-gadget signatures.

A signature sorted as a >= b >= c lies in S when c >= f(b), with
f(x) = (1 - x)(1 - exp(2x/(x - 1))) / 2.  The boundary is transcendental,
so membership is decided numerically with an explicit tolerance band.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import mpmath

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"

DEFAULT_PREC = 128
DEFAULT_TOL = 2.0 ** -64


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class RegionS:
    prec: int = DEFAULT_PREC
    tol: float = DEFAULT_TOL

    def f(self, x):
        with mpmath.workprec(self.prec):
            x = _mpf(x)
            if x >= 1:
                return mpmath.mpf(0)
            return (1 - x) * (1 - mpmath.exp(2 * x / (x - 1))) / 2

    def margin(self, s: Sequence) -> "mpmath.mpf":
        """c - f(b) for the entries sorted descending; positive inside."""
        with mpmath.workprec(self.prec):
            a, b, c = sorted((_mpf(x) for x in s), reverse=True)
            return c - self.f(b)

    def classify(self, s: Sequence) -> str:
        with mpmath.workprec(self.prec):
            m = self.margin(s)
            tol = _mpf(self.tol)
            if m >= tol:
                return INSIDE
            if abs(m) <= tol:
                return BOUNDARY
            return OUTSIDE

    def u(self):
        """Root of (1 - x)(1 + exp(2x/(x - 1)))/2 = x on [0, 1/2], by bisection."""
        with mpmath.workprec(self.prec):
            def g(x):
                return (1 - x) * (1 + mpmath.exp(2 * x / (x - 1))) / 2 - x
            lo, hi = mpmath.mpf(0), mpmath.mpf(1) / 2
            for _ in range(self.prec + 8):
                mid = (lo + hi) / 2
                if g(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            return (lo + hi) / 2

    def w(self):
        with mpmath.workprec(self.prec):
            u = self.u()
            return u / (1 - u)

    def boundary_point(self, x) -> Tuple:
        """(cosh x, x e^x, sinh x) / ((x + 1) e^x), a point of the boundary for x in [0, w]."""
        with mpmath.workprec(self.prec):
            x = _mpf(x)
            den = (x + 1) * mpmath.exp(x)
            return (mpmath.cosh(x) / den, x * mpmath.exp(x) / den, mpmath.sinh(x) / den)


def region_classify(s: Sequence, prec: int = DEFAULT_PREC, tol: float = DEFAULT_TOL) -> str:
    return RegionS(prec, tol).classify(s)
