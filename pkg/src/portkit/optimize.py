"""Scalar root finding and maximisation used by the allocation solver."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(fn: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-12, maxiter: int = 500):
    """Maximise a unimodal ``fn`` on ``[lo, hi]``; returns ``(x, fn(x), iterations)``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    it = 0
    while b - a > xtol * max(1.0, abs(a) + abs(b)) and it < maxiter:
        it += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fn(d)
    candidates = [(fn(lo), lo), (fc, c), (fd, d), (fn(hi), hi)]
    fx, x = max(candidates)
    return x, fx, it


def safeguarded_newton(
    fn: Callable[[float], float],
    dfn: Callable[[float], float],
    lo: float,
    hi: float,
    x0: float,
    xtol: float = 1e-15,
    maxiter: int = 200,
):
    """Newton iteration kept inside a sign-change bracket ``[lo, hi]``.

    Falls back to bisection whenever a Newton step leaves the bracket or
    fails to halve the bracket width.  Returns ``(root, iterations)``.
    """
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo, 0
    if fhi == 0:
        return hi, 0
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("safeguarded_newton needs a sign change on [lo, hi]")
    if flo > 0:
        lo, hi = hi, lo  # orient so fn(lo) < 0 < fn(hi)
    x = min(max(x0, min(lo, hi)), max(lo, hi))
    dx_old = abs(hi - lo)
    fx, dfx = fn(x), dfn(x)
    for it in range(1, maxiter + 1):
        if fx == 0:
            return x, it
        newton_ok = dfx != 0 and ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) < 0
        if newton_ok and abs(2.0 * fx) <= abs(dx_old * dfx):
            dx = fx / dfx
            x_new = x - dx
        else:
            dx = 0.5 * (hi - lo)
            x_new = lo + dx
        dx_old = abs(dx)
        x = x_new
        if abs(dx) <= xtol * max(1.0, abs(x)):
            return x, it
        fx, dfx = fn(x), dfn(x)
        if fx < 0:
            lo = x
        else:
            hi = x
    return x, maxiter
