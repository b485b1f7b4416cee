"""Credibilistic expectations and moments.

Two backends are kept apart on purpose:

``choquet``
    The level-set integral
    ``Q(f) = int_0^inf Cr(f >= t) dt - int_-inf^0 Cr(f <= t) dt``.
    ``Cr(f >= t)`` is the credibility of ``{x : f(x) >= t}``; its possibility
    is ``sup{alpha : max f over the alpha-cut >= t}``, found by bisection on
    alpha, which is monotone because alpha-cuts are nested.

``distributional``
    The Stieltjes integral ``int f dPhi`` against the credibility
    distribution, which is piecewise linear with atoms at jump points.

They agree for monotone ``f`` and differ otherwise: for the symmetric
triangular ``(-1, 0, 1)`` the second moment is 1/6 under ``choquet`` and
1/3 under ``distributional``.  Only the distributional backend is additive.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Literal

import numpy as np

from .errors import DomainError
from .fuzzy import FuzzyNumber
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_pieces

Backend = Literal["choquet", "distributional"]
BACKENDS: tuple[str, ...] = ("choquet", "distributional")

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_SECTIONS = 32


def _int_power(d, k: int):
    # repeated squaring; numpy's generic pow is several times slower
    out = np.ones_like(d)
    base = d
    while k:
        if k & 1:
            out = out * base
        k >>= 1
        if k:
            base = base * base
    return out


@dataclass(frozen=True)
class Integrand:
    """Vectorised real function plus where its monotonicity may change.

    ``hints=None`` means nothing is known and interval extrema are found by
    dense sampling; ``hints=()`` declares the function monotone.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    hints: tuple[float, ...] | None = None
    name: str = "f"

    def __call__(self, x):
        return self.eval(x)

    @classmethod
    def identity(cls) -> "Integrand":
        return cls(lambda x: np.asarray(x, dtype=float), (), "x")

    @classmethod
    def constant(cls, c: float) -> "Integrand":
        return cls(lambda x: np.full(np.shape(x), float(c)), (), f"{c}")

    @classmethod
    def power(cls, center: float, k: int) -> "Integrand":
        """``(x - center) ** k``."""
        if k < 0:
            raise DomainError("power must be nonnegative")
        # the stationary point matters for odd powers too: near it the level
        # sets move like t**(1/k), which the quadrature must smooth out
        hints = (float(center),) if k >= 2 else ()
        return cls(lambda x: _int_power(np.asarray(x, dtype=float) - center, k), hints, f"(x-{center})^{k}")

    @classmethod
    def monotone(cls, f: Callable, name: str = "f") -> "Integrand":
        return cls(f, (), name)


def _as_integrand(f) -> Integrand:
    return f if isinstance(f, Integrand) else Integrand(f)


@dataclass(frozen=True)
class MomentSet:
    q: float
    v: float
    sk: float
    ku: float
    backend: str

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise DomainError(f"unknown backend {self.backend!r}")
        # Quadrature noise around an exact zero is clamped; real negatives are bugs.
        for name in ("v", "ku"):
            val = getattr(self, name)
            if val < 0:
                if val < -1e-12:
                    raise DomainError(f"{name} must be nonnegative, got {val}")
                object.__setattr__(self, name, 0.0)

    def to_json(self) -> dict:
        return asdict(self)


def _check_backend(backend: str):
    if backend not in BACKENDS:
        raise DomainError(f"backend must be one of {BACKENDS}, got {backend!r}")


# --- Choquet backend -----------------------------------------------------


def _interval_extrema(f: Integrand, lo: np.ndarray, hi: np.ndarray, samples: int = 32):
    if f.hints is not None:
        vals = [f(lo), f(hi)]
        fmin = np.minimum(vals[0], vals[1])
        fmax = np.maximum(vals[0], vals[1])
        for h in f.hints:
            inside = (lo <= h) & (h <= hi)
            if inside.any():
                fh = float(f(np.array(h)))
                fmin = np.where(inside, np.minimum(fmin, fh), fmin)
                fmax = np.where(inside, np.maximum(fmax, fh), fmax)
        return fmin, fmax
    grid = np.linspace(0.0, 1.0, samples + 1)
    span = hi - lo
    xs = lo[:, None] + span[:, None] * grid[None, :]
    vals = f(xs)
    return _refine(f, xs, vals, -1), _refine(f, xs, vals, +1)


def _refine(f: Integrand, xs, vals, sign):
    # Golden-section polish around the best sample of each row.
    rows = np.arange(xs.shape[0])
    j = np.argmax(sign * vals, axis=1)
    best = sign * vals[rows, j]
    a = xs[rows, np.maximum(j - 1, 0)]
    b = xs[rows, np.minimum(j + 1, xs.shape[1] - 1)]
    for _ in range(40):
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        left = sign * f(c) > sign * f(d)
        b = np.where(left, d, b)
        a = np.where(left, a, c)
    polished = sign * f(0.5 * (a + b))
    return sign * np.maximum(polished, best)


class _LevelSets:
    """Possibility and credibility of level sets ``{f >= t}``, ``{f <= t}``."""

    def __init__(self, fv: FuzzyNumber, f: Integrand, spec: QuadratureSpec):
        self.fv = fv
        self.f = f
        self.passes = -(-spec.bisection_steps // int(math.log2(_SECTIONS)))

    def extrema(self, alpha):
        lo, hi = self.fv.cut_bounds(alpha)
        return _interval_extrema(self.f, np.atleast_1d(lo), np.atleast_1d(hi))

    def _holds(self, alpha, t, kind):
        fmin, fmax = self.extrema(alpha)
        return np.select(
            [kind == 0, kind == 1, kind == 2],
            [fmax >= t, fmax > t, fmin <= t],
            fmin < t,
        )

    def possibilities(self, t, kind):
        """``sup{alpha : cond(alpha)}`` where cond is selected by ``kind``.

        kind 0: max f >= t, 1: max f > t, 2: min f <= t, 3: min f < t.

        Cuts are nested, so each condition holds on an initial segment of
        [0, 1].  Its end is located by multisection: every pass tests
        ``_SECTIONS - 1`` interior points at once, gaining five bits per
        (overhead-bound) vectorised call instead of one.
        """
        n = t.size
        out = np.zeros(n)
        at_top = self._holds(np.ones(n), t, kind)
        at_bottom = self._holds(np.zeros(n), t, kind)
        out[at_top] = 1.0
        active = np.flatnonzero(~at_top & at_bottom)
        if active.size:
            m = active.size
            ta = np.repeat(t[active], _SECTIONS - 1)
            ka = np.repeat(kind[active], _SECTIONS - 1)
            grid = np.arange(1, _SECTIONS) / _SECTIONS
            lo, hi = np.zeros(m), np.ones(m)
            rows = np.arange(m)
            for _ in range(self.passes):
                xs = lo[:, None] + (hi - lo)[:, None] * grid
                ok = self._holds(xs.ravel(), ta, ka).reshape(m, _SECTIONS - 1)
                first_fail = np.where(ok.all(axis=1), _SECTIONS - 1, np.argmin(ok, axis=1))
                new_lo = np.where(first_fail > 0, xs[rows, np.maximum(first_fail - 1, 0)], lo)
                new_hi = np.where(first_fail < _SECTIONS - 1, xs[rows, np.minimum(first_fail, _SECTIONS - 2)], hi)
                lo, hi = new_lo, new_hi
            out[active] = 0.5 * (lo + hi)
        return out

    def cr_ge(self, t):
        t = np.asarray(t, dtype=float)
        n = t.size
        pos = self.possibilities(np.concatenate([t, t]), np.repeat([0, 3], n))
        return 0.5 * (pos[:n] + 1.0 - pos[n:])

    def cr_le(self, t):
        t = np.asarray(t, dtype=float)
        n = t.size
        pos = self.possibilities(np.concatenate([t, t]), np.repeat([2, 1], n))
        return 0.5 * (pos[:n] + 1.0 - pos[n:])


def _pieces(lo, hi, candidates, critical, scale):
    eps = 1e-12 * scale
    pts = [lo] + [c for c in candidates if lo + eps < c < hi - eps] + [hi]
    pts = np.unique(pts)
    if critical is None:
        return pts, [True] * (len(pts) - 1)
    crit = np.asarray(critical, dtype=float)

    def near(v):
        return crit.size > 0 and bool(np.any(np.abs(crit - v) <= eps))

    return pts, [near(a) or near(b) for a, b in zip(pts[:-1], pts[1:])]


def _switch_values(fv: FuzzyNumber, f: Integrand, samples: int = 32) -> list[float]:
    """Values of ``f`` where ``f(left cut end) = f(right cut end)``.

    There the extremum over the cut swaps ends, which puts a kink into the
    level-set credibility at an otherwise unknown threshold.
    """
    levels = np.array(sorted(set(fv.levels) | {0.0, 1.0}))
    out = []
    for a0, a1 in zip(levels[:-1], levels[1:]):
        al = np.linspace(a0, a1, samples + 1)
        lo, hi = fv.cut_bounds(al)
        d = f(lo) - f(hi)
        idx = np.flatnonzero(d[:-1] * d[1:] < 0)
        if idx.size == 0:
            continue
        a, b = al[idx], al[idx + 1]
        da = d[idx]
        for _ in range(60):
            m = 0.5 * (a + b)
            lm, hm = fv.cut_bounds(m)
            dm = f(lm) - f(hm)
            left = np.sign(dm) == np.sign(da)
            a, da = np.where(left, m, a), np.where(left, dm, da)
            b = np.where(left, b, m)
        lm, _ = fv.cut_bounds(0.5 * (a + b))
        out.extend(float(v) for v in np.atleast_1d(f(lm)))
    return out


def choquet_expectation(fv: FuzzyNumber, f, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    f = _as_integrand(f)
    if fv.is_point:
        return float(f(np.array(fv.xs[0])))
    sets = _LevelSets(fv, f, spec)
    levels = np.array(sorted(set(fv.levels) | {0.0, 1.0}))
    lows, highs = sets.extrema(levels)
    m, big_m = float(lows[0]), float(highs[0])
    scale = max(abs(m), abs(big_m), 1e-300)
    if big_m - m <= 1e-15 * scale:
        return 0.5 * (m + big_m)

    x_lo, x_hi = fv.support
    if f.hints is None:
        critical = None
        hint_vals = []
    else:
        hint_vals = [float(f(np.array(h))) for h in f.hints if x_lo < h < x_hi]
        critical = hint_vals
        if f.hints:
            hint_vals = hint_vals + _switch_values(fv, f)
    candidates = list(lows) + list(highs) + hint_vals + [0.0]

    total = max(m, 0.0) - max(-big_m, 0.0)
    lo, hi = max(m, 0.0), max(big_m, 0.0)
    if hi > lo:
        pts, smooth = _pieces(lo, hi, candidates, critical, scale)
        total += integrate_pieces(sets.cr_ge, pts, smooth, spec).value
    lo, hi = min(m, 0.0), min(big_m, 0.0)
    if hi > lo:
        pts, smooth = _pieces(lo, hi, candidates, critical, scale)
        total -= integrate_pieces(sets.cr_le, pts, smooth, spec).value
    return total


def level_set_credibility(fv: FuzzyNumber, f, t, spec: QuadratureSpec = DEFAULT_SPEC):
    """``Cr(f(xi) >= t)`` for an array of thresholds."""
    return _LevelSets(fv, _as_integrand(f), spec).cr_ge(t)


# --- distributional backend ------------------------------------------------


def distributional_expectation(fv: FuzzyNumber, f, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    f = _as_integrand(f)
    pieces, atoms = fv.distribution_pieces
    total = sum(mass * float(f(np.array(x))) for x, mass in atoms)
    if not pieces:
        return total
    x_lo, x_hi = fv.support
    extra = [h for h in (f.hints or ()) if x_lo < h < x_hi]
    pts = np.unique(np.concatenate([fv.xs, extra]))
    mids = 0.5 * (pts[:-1] + pts[1:])
    dens = np.zeros(len(mids))
    for a, b, d in pieces:
        dens[(mids > a) & (mids < b)] = d
    return total + integrate_pieces(f, pts, None, spec, weights=dens).value


def expectation(fv: FuzzyNumber, f, backend: str = "choquet", spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    _check_backend(backend)
    if backend == "choquet":
        return choquet_expectation(fv, f, spec)
    return distributional_expectation(fv, f, spec)


# --- moments ---------------------------------------------------------------


def expected_value(fv: FuzzyNumber, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return choquet_expectation(fv, Integrand.identity(), spec)


def central_moment(
    fv: FuzzyNumber, k: int, backend: str = "choquet", spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    if k < 1:
        raise DomainError(f"moment order must be >= 1, got {k}")
    center = expectation(fv, Integrand.identity(), backend, spec)
    return expectation(fv, Integrand.power(center, k), backend, spec)


def skewness(fv: FuzzyNumber, backend: str = "choquet", spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return central_moment(fv, 3, backend, spec)


def kurtosis(fv: FuzzyNumber, backend: str = "choquet", spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return max(central_moment(fv, 4, backend, spec), 0.0)


def shifted_raw_moment(
    fv_xi: FuzzyNumber, shift: float, j: int, backend: str = "choquet", spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """``Q[(shift + xi) ** j]``."""
    if j < 1:
        raise DomainError(f"moment order must be >= 1, got {j}")
    return expectation(fv_xi, Integrand.power(-shift, j), backend, spec)


def moment_set(fv: FuzzyNumber, backend: str = "choquet", spec: QuadratureSpec = DEFAULT_SPEC) -> MomentSet:
    _check_backend(backend)
    q = expectation(fv, Integrand.identity(), backend, spec)
    v, sk, ku = (expectation(fv, Integrand.power(q, k), backend, spec) for k in (2, 3, 4))
    return MomentSet(q, v, sk, ku, backend)


# --- triangular closed forms -------------------------------------------------


def _spreads(a, b, c):
    if not (a <= b <= c):
        raise DomainError(f"triangular needs a <= b <= c, got ({a}, {b}, {c})")
    return max(b - a, c - b), min(b - a, c - b)


def triangular_variance(a: float, b: float, c: float) -> float:
    big, small = _spreads(a, b, c)
    if big == 0:
        return 0.0
    return (33 * big**3 + 21 * big**2 * small + 11 * big * small**2 - small**3) / (384 * big)


def triangular_kurtosis(a: float, b: float, c: float) -> float:
    big, d = _spreads(a, b, c)
    if big == 0:
        return 0.0
    num = (
        253 * big**5
        + 395 * big**4 * d
        + 290 * big**3 * d**2
        + 70 * big**2 * d**3
        + 17 * big * d**4
        - d**5
    )
    return num / (10240 * big)


def triangular_skewness(a: float, b: float, c: float) -> float:
    """Third central moment; odd in ``c + a - 2b`` so symmetric shapes give 0."""
    _spreads(a, b, c)
    return (c - a) ** 2 * (c + a - 2 * b) / 32


def printed_triangular_skewness(a: float, b: float, c: float) -> float:
    """The historical ``(c - a)^2 (c + a + 2b) / 32`` variant, kept for comparison.

    It is not translation invariant, so it disagrees with the quadrature
    value whenever the shape is shifted away from the origin.
    """
    _spreads(a, b, c)
    return (c - a) ** 2 * (c + a + 2 * b) / 32


def triangular_closed_moments(a: float, b: float, c: float) -> MomentSet:
    _spreads(a, b, c)
    return MomentSet(
        q=(a + 2 * b + c) / 4,
        v=triangular_variance(a, b, c),
        sk=triangular_skewness(a, b, c),
        ku=triangular_kurtosis(a, b, c),
        backend="choquet",
    )
