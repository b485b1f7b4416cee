"""Fuzzy numbers with piecewise-linear membership and their credibility measure.

A fuzzy number is stored as its membership breakpoints ``(x_i, level_i)``.
Membership is linear between breakpoints and zero outside ``[x_0, x_n]``.
An end level above zero means the membership jumps there (degenerate
triangulars such as ``(a, a, c)``).

Credibility of an event ``A`` is the self-dual average of possibility and
necessity::

    Cr(A) = (Pos(A) + 1 - Pos(A^c)) / 2
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

_LEVEL_SNAP = 1e-12


@dataclass(frozen=True)
class Interval:
    """Interval of the real line; infinite ends are always open."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise DomainError("interval endpoints must not be NaN")
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    @property
    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, x: float) -> bool:
        above = x > self.lo or (x == self.lo and self.lo_closed)
        below = x < self.hi or (x == self.hi and self.hi_closed)
        return above and below

    def __repr__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo!r}, {self.hi!r}{right}"


def _merge(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    items = sorted(
        (iv for iv in intervals if not iv.is_empty),
        key=lambda iv: (iv.lo, not iv.lo_closed),
    )
    merged: list[Interval] = []
    for iv in items:
        if merged:
            prev = merged[-1]
            touches = iv.lo < prev.hi or (
                iv.lo == prev.hi and (prev.hi_closed or iv.lo_closed)
            )
            if touches:
                if iv.hi > prev.hi:
                    hi, hi_closed = iv.hi, iv.hi_closed
                elif iv.hi == prev.hi:
                    hi, hi_closed = prev.hi, prev.hi_closed or iv.hi_closed
                else:
                    hi, hi_closed = prev.hi, prev.hi_closed
                merged[-1] = Interval(prev.lo, hi, prev.lo_closed, hi_closed)
                continue
        merged.append(iv)
    return tuple(merged)


@dataclass(frozen=True)
class Event:
    """Finite union of disjoint intervals, kept sorted and merged."""

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _merge(self.intervals))

    @classmethod
    def of(cls, *intervals: Interval | tuple) -> "Event":
        return cls(tuple(iv if isinstance(iv, Interval) else Interval(*iv) for iv in intervals))

    @classmethod
    def empty(cls) -> "Event":
        return cls(())

    @classmethod
    def whole(cls) -> "Event":
        return cls((Interval(-math.inf, math.inf),))

    @classmethod
    def le(cls, x: float) -> "Event":
        return cls((Interval(-math.inf, x, False, True),))

    @classmethod
    def lt(cls, x: float) -> "Event":
        return cls((Interval(-math.inf, x, False, False),))

    @classmethod
    def ge(cls, x: float) -> "Event":
        return cls((Interval(x, math.inf, True, False),))

    @classmethod
    def gt(cls, x: float) -> "Event":
        return cls((Interval(x, math.inf, False, False),))

    @classmethod
    def closed(cls, *pairs: tuple[float, float]) -> "Event":
        return cls(tuple(Interval(lo, hi) for lo, hi in pairs))

    def complement(self) -> "Event":
        gaps = []
        lo, lo_closed = -math.inf, False
        for iv in self.intervals:
            gaps.append(Interval(lo, iv.lo, lo_closed, not iv.lo_closed))
            lo, lo_closed = iv.hi, not iv.hi_closed
        gaps.append(Interval(lo, math.inf, lo_closed, False))
        return Event(tuple(gaps))

    def union(self, other: "Event") -> "Event":
        return Event(self.intervals + other.intervals)

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals


@dataclass(frozen=True)
class FuzzyNumber:
    """Normal, quasi-concave fuzzy number with piecewise-linear membership."""

    xs: tuple[float, ...]
    levels: tuple[float, ...]

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        levels = [float(v) for v in self.levels]
        if not xs or len(xs) != len(levels):
            raise DomainError("need at least one breakpoint and one level per x")
        if not all(math.isfinite(x) for x in xs):
            raise DomainError("breakpoint positions must be finite")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("breakpoint positions must be strictly increasing")
        if any(not (0.0 <= v <= 1.0 + _LEVEL_SNAP) for v in levels):
            raise DomainError("membership levels must lie in [0, 1]")
        top = max(levels)
        if top < 1.0 - _LEVEL_SNAP:
            raise DomainError(f"membership is not normal (max level {top})")
        levels = [1.0 if v >= 1.0 - _LEVEL_SNAP else v for v in levels]
        p = levels.index(1.0)
        q = len(levels) - 1 - levels[::-1].index(1.0)
        rising = levels[: p + 1]
        falling = levels[q:]
        if (
            any(b < a for a, b in zip(rising, rising[1:]))
            or any(b > a for a, b in zip(falling, falling[1:]))
            or any(v != 1.0 for v in levels[p : q + 1])
        ):
            raise DomainError("membership is not quasi-concave")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "levels", tuple(levels))

    @classmethod
    def from_breakpoints(cls, pairs: Iterable[Sequence[float]]) -> "FuzzyNumber":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.levels))

    @property
    def support(self) -> tuple[float, float]:
        return self.xs[0], self.xs[-1]

    @cached_property
    def _peak(self) -> tuple[int, int]:
        p = self.levels.index(1.0)
        q = len(self.levels) - 1 - self.levels[::-1].index(1.0)
        return p, q

    @property
    def core(self) -> tuple[float, float]:
        """Closed interval where membership equals one."""
        p, q = self._peak
        return self.xs[p], self.xs[q]

    @property
    def is_point(self) -> bool:
        return len(self.xs) == 1

    @cached_property
    def _arrays(self):
        p, q = self._peak
        x = np.array(self.xs)
        lv = np.array(self.levels)
        return x, lv, x[: p + 1], lv[: p + 1], x[q:][::-1].copy(), lv[q:][::-1].copy()

    def membership(self, x):
        x_arr, lv = self._arrays[:2]
        x = np.asarray(x, dtype=float)
        out = np.interp(x, x_arr, lv)
        out = np.where((x < x_arr[0]) | (x > x_arr[-1]), 0.0, out)
        return float(out) if out.ndim == 0 else out

    def left_limit(self, x: float) -> float:
        if x <= self.xs[0] or x > self.xs[-1]:
            return 0.0
        return float(np.interp(x, self.xs, self.levels))

    def right_limit(self, x: float) -> float:
        if x < self.xs[0] or x >= self.xs[-1]:
            return 0.0
        return float(np.interp(x, self.xs, self.levels))

    def cut_bounds(self, alpha):
        """Vectorised alpha-cut endpoints; ``alpha = 0`` gives the support."""
        _, _, lx, ll, rx, rl = self._arrays
        alpha = np.asarray(alpha, dtype=float)
        return _branch_inverse(lx, ll, alpha), _branch_inverse(rx, rl, alpha)

    @cached_property
    def distribution_pieces(self):
        """Linear pieces ``(x0, x1, density)`` and atoms ``(x, mass)`` of Phi."""
        p, q = self._peak
        xs, lv = self.xs, self.levels
        pieces = []
        for i in range(p):
            d = 0.5 * (lv[i + 1] - lv[i]) / (xs[i + 1] - xs[i])
            pieces.append((xs[i], xs[i + 1], d))
        for i in range(q, len(xs) - 1):
            d = 0.5 * (lv[i] - lv[i + 1]) / (xs[i + 1] - xs[i])
            pieces.append((xs[i], xs[i + 1], d))
        atoms = {}
        for x, mass in ((xs[0], 0.5 * lv[0]), (xs[-1], 0.5 * lv[-1])):
            if mass > 0.0:
                atoms[x] = atoms.get(x, 0.0) + mass
        return tuple(pc for pc in pieces if pc[2] > 0.0), tuple(sorted(atoms.items()))


def _branch_inverse(bx, bl, alpha):
    # bl is nondecreasing and ends at 1; returns the first x with level >= alpha.
    j = np.searchsorted(bl, alpha, side="left")
    j = np.clip(j, 0, len(bl) - 1)
    jm = np.maximum(j - 1, 0)
    dl = bl[j] - bl[jm]
    safe = np.where(dl > 0.0, dl, 1.0)
    frac = np.where(dl > 0.0, (alpha - bl[jm]) / safe, 1.0)
    x = bx[jm] + frac * (bx[j] - bx[jm])
    return np.where(j == 0, bx[0], x)


def make_triangular(a: float, b: float, c: float) -> FuzzyNumber:
    """Triangular fuzzy number ``(a, b, c)``; ``a == b`` or ``b == c`` allowed."""
    if not (a <= b <= c):
        raise DomainError(f"triangular needs a <= b <= c, got ({a}, {b}, {c})")
    pts = []
    if a < b:
        pts.append((a, 0.0))
    pts.append((b, 1.0))
    if b < c:
        pts.append((c, 0.0))
    return FuzzyNumber.from_breakpoints(pts)


def make_trapezoidal(a: float, b: float, c: float, d: float) -> FuzzyNumber:
    if not (a <= b <= c <= d):
        raise DomainError(f"trapezoidal needs a <= b <= c <= d, got ({a}, {b}, {c}, {d})")
    pts = [(a, 0.0)] if a < b else []
    pts.append((b, 1.0))
    if c > b:
        pts.append((c, 1.0))
    if d > c:
        pts.append((d, 0.0))
    return FuzzyNumber.from_breakpoints(pts)


def make_point(c: float) -> FuzzyNumber:
    return FuzzyNumber((c,), (1.0,))


def membership_at(fv: FuzzyNumber, x):
    return fv.membership(x)


def alpha_cut(fv: FuzzyNumber, alpha: float) -> Interval:
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    lo, hi = fv.cut_bounds(alpha)
    return Interval(float(lo), float(hi))


def _sup_on(fv: FuzzyNumber, iv: Interval) -> float:
    if iv.is_empty:
        return 0.0
    core_lo, core_hi = fv.core
    meets_core = (iv.lo < core_hi or (iv.lo == core_hi and iv.lo_closed)) and (
        iv.hi > core_lo or (iv.hi == core_lo and iv.hi_closed)
    )
    if meets_core:
        return 1.0
    # Quasi-concavity: left of the core the sup sits at the right end, and vice versa.
    if iv.hi <= core_lo:
        return fv.membership(iv.hi) if iv.hi_closed else fv.left_limit(iv.hi)
    return fv.membership(iv.lo) if iv.lo_closed else fv.right_limit(iv.lo)


def possibility(fv: FuzzyNumber, ev: Event) -> float:
    return max((_sup_on(fv, iv) for iv in ev.intervals), default=0.0)


def necessity(fv: FuzzyNumber, ev: Event) -> float:
    return 1.0 - possibility(fv, ev.complement())


def credibility(fv: FuzzyNumber, ev: Event) -> float:
    value = 0.5 * (possibility(fv, ev) + necessity(fv, ev))
    return min(1.0, max(0.0, value))


def distribution(fv: FuzzyNumber, x: float) -> float:
    """Credibility distribution ``Phi(x) = Cr(xi <= x)``."""
    return credibility(fv, Event.le(x))


def shift_scale(fv: FuzzyNumber, a: float, b: float) -> FuzzyNumber:
    """Fuzzy number of ``a * xi + b``."""
    if a == 0:
        return make_point(b)
    pts = [(a * x + b, lv) for x, lv in fv.breakpoints]
    if a < 0:
        pts.reverse()
    return FuzzyNumber.from_breakpoints(pts)


def fuzzy_from_json(obj) -> FuzzyNumber:
    if not isinstance(obj, dict):
        raise DomainError("fuzzy number must be a JSON object")
    if "triangular" in obj:
        abc = obj["triangular"]
        if not isinstance(abc, (list, tuple)) or len(abc) != 3:
            raise DomainError("'triangular' needs exactly three numbers")
        return make_triangular(*(float(v) for v in abc))
    if "breakpoints" in obj:
        return FuzzyNumber.from_breakpoints(obj["breakpoints"])
    raise DomainError("fuzzy number needs a 'triangular' or 'breakpoints' key")


def fuzzy_to_json(fv: FuzzyNumber) -> dict:
    return {"breakpoints": [[x, lv] for x, lv in fv.breakpoints]}
