"""Bracketed scalar root finding (Brent's method with a residual stop)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .core import ConvergenceError

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class Root:
    x: float
    fx: float
    low: float
    high: float
    iterations: int


def brent(
    f: Callable[[float], float],
    a: float,
    b: float,
    ftol: float,
    xtol: float = 0.0,
    maxiter: int = 200,
) -> Root:
    """Find a zero of ``f`` in the sign-change interval [a, b].

    Stops as soon as |f(x)| <= ftol, or when the enclosing bracket has
    shrunk to xtol plus a few ulps. With ftol=0 the second test is the
    only one, which polishes the root to full precision; callers then
    judge the returned residual themselves.
    """
    fa, fb = f(a), f(b)
    if abs(fa) <= ftol:
        return Root(a, fa, a, a, 0)
    if abs(fb) <= ftol:
        return Root(b, fb, b, b, 0)
    if fa * fb > 0:
        raise ValueError(f"f({a})={fa} and f({b})={fb} do not bracket a root")

    # b: best estimate, c: the other side of the bracket, a: previous b.
    c, fc = a, fa
    d = e = b - a
    for it in range(1, maxiter + 1):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb

        tol1 = 2.0 * _EPS * abs(b) + 0.5 * xtol
        m = 0.5 * (c - b)
        if abs(fb) <= ftol or fb == 0.0:
            return Root(b, fb, min(b, c), max(b, c), it)
        if abs(m) <= tol1:
            return Root(b, fb, min(b, c), max(b, c), it)

        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                # secant
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                # inverse quadratic interpolation
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m

        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, m)
        fb = f(b)

    raise ConvergenceError(f"no convergence after {maxiter} iterations (x={b!r}, f={fb!r})")
