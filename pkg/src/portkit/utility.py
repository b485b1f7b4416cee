"""Utility families with analytic derivatives of any order and risk indices.

Normal forms (all increasing and concave on their domain):

=========  ==========================================  ======================
family     u(w)                                        domain
=========  ==========================================  ======================
crra       w**a / a,   a < 1, a != 0                   w > 0
cara       -exp(-lam w) / lam,   lam > 0               all w
hara       theta g/(1-g) (eta + w/g)**(1-g), theta > 0  eta + w/g > 0
linear     slope * w,   slope > 0                      all w
poly       sum c_i w**i                                user-given, finite
=========  ==========================================  ======================

The HARA scale ``g/(1-g)`` makes ``u'(w) = theta (eta + w/g)**(-g)`` so any
``theta > 0`` gives an increasing concave utility; the risk indices do not
depend on ``theta`` (``g = 1`` is the logarithmic member).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import CapabilityError, ConfigError, DomainError, SingularityError

FAMILIES = ("crra", "cara", "hara", "linear", "poly")


def _exp(x):
    return mpmath.exp(x) if isinstance(x, mpmath.mpf) else np.exp(x)


def _log(x):
    return mpmath.log(x) if isinstance(x, mpmath.mpf) else np.log(x)


def _falling(start: float, n: int) -> float:
    """``start * (start - 1) * ... * (start - n + 1)``."""
    out = 1.0
    for i in range(n):
        out *= start - i
    return out


@dataclass(frozen=True)
class UtilityFunction:
    family: str
    params: dict = field(default_factory=dict)
    domain: tuple[float, float] = (-math.inf, math.inf)
    max_order: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown utility family {self.family!r}")
        self._check_shape()

    # -- constructors --------------------------------------------------------

    @classmethod
    def crra(cls, a: float) -> "UtilityFunction":
        if not (a < 1 and a != 0):
            raise DomainError(f"CRRA needs a < 1 and a != 0, got {a}")
        return cls("crra", {"a": float(a)}, (0.0, math.inf))

    @classmethod
    def cara(cls, lam: float) -> "UtilityFunction":
        if not lam > 0:
            raise DomainError(f"CARA needs lambda > 0, got {lam}")
        return cls("cara", {"lambda": float(lam)})

    @classmethod
    def hara(cls, theta: float, eta: float, gamma: float) -> "UtilityFunction":
        if not theta > 0:
            raise DomainError(f"HARA needs theta > 0, got {theta}")
        if gamma == 0:
            raise DomainError("HARA needs gamma != 0")
        edge = -gamma * eta
        dom = (edge, math.inf) if gamma > 0 else (-math.inf, edge)
        return cls("hara", {"theta": float(theta), "eta": float(eta), "gamma": float(gamma)}, dom)

    @classmethod
    def linear(cls, slope: float = 1.0) -> "UtilityFunction":
        if not slope > 0:
            raise DomainError(f"linear utility needs slope > 0, got {slope}")
        return cls("linear", {"slope": float(slope)})

    @classmethod
    def polynomial(cls, coeffs, domain: tuple[float, float]) -> "UtilityFunction":
        lo, hi = domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError("polynomial utility needs a finite domain lo < hi")
        return cls("poly", {"coeffs": tuple(float(c) for c in coeffs)}, (float(lo), float(hi)))

    @classmethod
    def from_config(cls, cfg: dict) -> "UtilityFunction":
        if not isinstance(cfg, dict) or "family" not in cfg:
            raise ConfigError("utility config needs a 'family' key", "utility.family")
        fam = str(cfg["family"]).lower()
        need = {
            "crra": ("a",),
            "cara": ("lambda",),
            "hara": ("theta", "eta", "gamma"),
            "linear": ("slope",),
            "poly": ("coeffs", "domain"),
        }
        if fam not in need:
            raise ConfigError(f"unknown utility family {fam!r}", "utility.family")
        args = []
        for key in need[fam]:
            if key not in cfg:
                if fam == "linear":
                    args.append(1.0)
                    continue
                raise ConfigError(f"utility family {fam!r} needs key {key!r}", f"utility.{key}")
            args.append(cfg[key])
        try:
            if fam == "poly":
                return cls.polynomial(args[0], tuple(args[1]))
            return getattr(cls, fam)(*(float(a) for a in args))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad utility parameters: {exc}", "utility") from exc

    def to_config(self) -> dict:
        cfg = {"family": self.family, **self.params}
        if self.family == "poly":
            cfg["coeffs"] = list(self.params["coeffs"])
            cfg["domain"] = list(self.domain)
        return cfg

    # -- evaluation ----------------------------------------------------------

    def in_domain(self, w) -> bool:
        lo, hi = self.domain
        w = np.asarray(w, dtype=float)
        return bool(np.all((w > lo) & (w < hi)))

    def value(self, w):
        p = self.params
        if self.family == "crra":
            return w ** p["a"] / p["a"]
        if self.family == "cara":
            lam = p["lambda"]
            return -_exp(-lam * w) / lam
        if self.family == "hara":
            g = p["gamma"]
            z = p["eta"] + w / g
            if g == 1:
                return p["theta"] * _log(z)
            return p["theta"] * g / (1 - g) * z ** (1 - g)
        if self.family == "linear":
            return p["slope"] * w
        out = 0
        for c in reversed(p["coeffs"]):
            out = out * w + c
        return out

    def derivative(self, w, order: int):
        """Analytic ``order``-th derivative; works elementwise on arrays."""
        if order == 0:
            return self.value(w)
        p = self.params
        if self.family == "crra":
            a = p["a"]
            return _falling(a - 1, order - 1) * w ** (a - order)
        if self.family == "cara":
            lam = p["lambda"]
            return (-1) ** (order + 1) * lam ** (order - 1) * np.exp(-lam * w)
        if self.family == "hara":
            g = p["gamma"]
            z = p["eta"] + w / g
            return p["theta"] * _falling(-g, order - 1) * g ** (1 - order) * z ** (-g - order + 1)
        if self.family == "linear":
            w = np.asarray(w, dtype=float)
            return np.full_like(w, p["slope"] if order == 1 else 0.0)
        poly = np.polynomial.Polynomial(p["coeffs"]).deriv(order)
        return poly(w)

    def _grid(self, n: int = 1000) -> np.ndarray:
        lo, hi = self.domain
        if math.isinf(lo) and math.isinf(hi):
            return np.linspace(-10.0, 10.0, n)
        if math.isinf(hi):
            return lo + np.geomspace(1e-3, 1e3, n)
        if math.isinf(lo):
            return hi - np.geomspace(1e-3, 1e3, n)
        return np.linspace(lo, hi, n + 2)[1:-1]

    def _check_shape(self):
        grid = self._grid()
        with np.errstate(over="ignore", under="ignore"):
            d1 = np.asarray(self.derivative(grid, 1), dtype=float)
            d2 = np.asarray(self.derivative(grid, 2), dtype=float)
        finite = np.isfinite(d1) & np.isfinite(d2)
        if np.any(d1[finite] <= 0):
            raise DomainError(f"{self.family} utility is not increasing on its domain")
        if np.any(d2[finite] > 1e-12 * np.maximum(1.0, np.abs(d1[finite]))):
            raise DomainError(f"{self.family} utility is not concave on its domain")


def eval_derivative(u: UtilityFunction, w: float, order: int) -> float:
    if order < 0:
        raise DomainError(f"derivative order must be >= 0, got {order}")
    if u.max_order is not None and order > u.max_order:
        raise CapabilityError(f"{u.family} utility provides derivatives up to order {u.max_order}")
    if not u.in_domain(w):
        raise DomainError(f"w={w} is outside the {u.family} domain {u.domain}")
    return float(u.derivative(float(w), order))


def _ratio(u, w, top: int, name: str) -> float:
    den = eval_derivative(u, w, top - 1)
    if den == 0:
        raise SingularityError(f"{name} is undefined: derivative of order {top - 1} vanishes at w={w}")
    return -eval_derivative(u, w, top) / den + 0.0


def arrow_pratt(u: UtilityFunction, w: float) -> float:
    """Absolute risk aversion ``-u''/u'``."""
    return _ratio(u, w, 2, "absolute risk aversion")


def prudence(u: UtilityFunction, w: float) -> float:
    """``-u'''/u''``."""
    return _ratio(u, w, 3, "prudence")


def temperance(u: UtilityFunction, w: float) -> float:
    """``-u''''/u'''``."""
    return _ratio(u, w, 4, "temperance")


@dataclass(frozen=True)
class RiskIndices:
    """Risk attitudes at wealth ``evaluated_at``; ``None`` marks a singular index."""

    r: float
    p: float | None
    t: float | None
    evaluated_at: float

    def ratios(self) -> dict:
        """Compound ratios that enter the allocation formulas."""
        out = {}
        r, p, t = self.r, self.p, self.t
        if r:
            out["1/r"] = 1.0 / r
        if p is not None and r:
            out["p/r"] = p / r
            out["p/r^2"] = p / r**2
            out["p^2/r^3"] = p**2 / r**3
        if p and t is not None:
            out["t/p"] = t / p
            if r:
                out["t/(p r^3)"] = t / (p * r**3)
                out["t p/r^3"] = t * p / r**3
        return out


def risk_indices(u: UtilityFunction, w: float) -> RiskIndices:
    def attempt(fn):
        try:
            return fn(u, w)
        except SingularityError:
            return None

    r = arrow_pratt(u, w)
    return RiskIndices(r=r, p=attempt(prudence), t=attempt(temperance), evaluated_at=float(w))


def finite_difference_index_oracle(u: UtilityFunction, w: float, which: str, h: float = 1e-4) -> float:
    """Risk index from central differences of ``u`` itself, in 40-digit arithmetic.

    Uses the five-point stencils on ``w - 2h .. w + 2h``; independent of the
    analytic derivative code.
    """
    if which not in ("r", "p", "t"):
        raise DomainError(f"which must be 'r', 'p' or 't', got {which!r}")
    if not (u.in_domain(w - 2 * h) and u.in_domain(w + 2 * h)):
        raise DomainError(f"step h={h} leaves the domain {u.domain} around w={w}")
    with mpmath.workdps(40):
        W, H = mpmath.mpf(w), mpmath.mpf(h)
        um2, um1, u0, up1, up2 = (u.value(W + k * H) for k in (-2, -1, 0, 1, 2))
        d1 = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * H)
        d2 = (-up2 + 16 * up1 - 30 * u0 + 16 * um1 - um2) / (12 * H**2)
        d3 = (up2 - 2 * up1 + 2 * um1 - um2) / (2 * H**3)
        d4 = (up2 - 4 * up1 + 6 * u0 - 4 * um1 + um2) / H**4
        num, den = {"r": (d2, d1), "p": (d3, d2), "t": (d4, d3)}[which]
        if den == 0:
            raise SingularityError(f"finite-difference denominator vanishes for index {which!r}")
        return float(-num / den)
