"""One risky asset, one riskless asset: exact and small-risk allocations.

Wealth after investing ``alpha`` in the risky asset is ``w + alpha * x`` where
``x`` ranges over the excess return ``zeta``.  Total utility ``V(alpha)`` and
its derivative are Stieltjes integrals against the credibility distribution
of ``zeta``; the closed-form approximations take a :class:`MomentSet` and
:class:`RiskIndices` and never touch the integrals themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, ModelError, NumericFailure, SingularityError
from .fuzzy import FuzzyNumber, fuzzy_from_json, make_triangular, shift_scale
from .moments import (
    BACKENDS,
    Integrand,
    MomentSet,
    distributional_expectation,
    expected_value,
    moment_set,
    shifted_raw_moment,
    triangular_closed_moments,
    printed_triangular_skewness,
)
from .optimize import golden_section_max, safeguarded_newton
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .utility import RiskIndices, UtilityFunction, eval_derivative, risk_indices

WEALTH_MARGIN = 1e-9
STATIONARITY_RTOL = 1e-9


# --- problem ---------------------------------------------------------------


@dataclass(frozen=True)
class PortfolioProblem:
    w0: float
    r: float
    risky: FuzzyNumber

    @property
    def w(self) -> float:
        return self.w0 * (1.0 + self.r)

    @property
    def excess(self) -> FuzzyNumber:
        return excess_return(self)

    @classmethod
    def from_config(cls, cfg: dict) -> "PortfolioProblem":
        return cls(float(cfg["w0"]), float(cfg.get("r", 0.0)), fuzzy_from_json(cfg["risky"]))


def excess_return(problem: PortfolioProblem) -> FuzzyNumber:
    if problem.r == 0:
        return problem.risky
    return shift_scale(problem.risky, 1.0, -problem.r)


@dataclass(frozen=True)
class SmallRiskDecomposition:
    """``zeta = k * mu + xi`` with ``Q(xi) = 0``."""

    k: float
    mu: float
    xi: FuzzyNumber

    @property
    def kmu(self) -> float:
        return self.k * self.mu

    def zeta(self, k: float | None = None) -> FuzzyNumber:
        k = self.k if k is None else k
        return shift_scale(self.xi, 1.0, k * self.mu)


def _zero_drift_tol(zeta: FuzzyNumber) -> float:
    lo, hi = zeta.support
    return 1e-12 * max(abs(lo), abs(hi), 1e-300)


def decompose_small_risk(
    zeta: FuzzyNumber, spec: QuadratureSpec = DEFAULT_SPEC, allow_zero: bool = False
) -> SmallRiskDecomposition:
    """Split off the drift, taking ``mu := Q(zeta)`` so that ``k = 1``.

    With ``allow_zero`` a drift that vanishes to rounding is accepted and
    reported as ``k = 0`` (``mu`` is then set to 1 so it stays positive).
    """
    q = expected_value(zeta, spec)
    if abs(q) <= _zero_drift_tol(zeta):
        if allow_zero:
            return SmallRiskDecomposition(0.0, 1.0, zeta)
        raise ModelError(f"small-risk decomposition needs Q(zeta) > 0, got {q:.6g}")
    if q < 0:
        raise ModelError(f"small-risk decomposition needs Q(zeta) > 0, got {q:.6g}")
    return SmallRiskDecomposition(1.0, q, shift_scale(zeta, 1.0, -q))


# --- total utility ---------------------------------------------------------


def feasible_bracket(w: float, zeta: FuzzyNumber, u: UtilityFunction) -> tuple[float, float]:
    """Allocations keeping ``w + alpha x`` inside ``u``'s domain, less a safety margin.

    Ends may be infinite.
    """
    if not u.in_domain(w):
        raise DomainError(f"wealth w={w} is outside the {u.family} domain {u.domain}")
    dlo, dhi = u.domain
    wlo, whi = dlo + WEALTH_MARGIN, dhi - WEALTH_MARGIN
    lo, hi = -math.inf, math.inf
    for x in zeta.support:
        if x > 0:
            hi = min(hi, (whi - w) / x)
            lo = max(lo, (wlo - w) / x)
        elif x < 0:
            lo = max(lo, (whi - w) / x)
            hi = min(hi, (wlo - w) / x)
    return lo, hi


def _check_alpha(problem: PortfolioProblem, u: UtilityFunction, alpha: float, zeta: FuzzyNumber):
    w = problem.w
    for x in zeta.support:
        if not u.in_domain(w + alpha * x):
            raise DomainError(
                f"alpha={alpha} sends wealth at support endpoint x={x} to {w + alpha * x}, "
                f"outside the {u.family} domain {u.domain}"
            )


def _tight(spec: QuadratureSpec) -> QuadratureSpec:
    # V' is smooth on every distribution piece, so near machine accuracy is cheap
    return spec.with_tolerance(min(spec.abs_tol, spec.rel_tol, 1e-14))


def total_utility(
    problem: PortfolioProblem, u: UtilityFunction, alpha: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """``V(alpha) = int u(w + alpha x) dPhi(x)``."""
    zeta = problem.excess
    _check_alpha(problem, u, alpha, zeta)
    w = problem.w
    if alpha == 0:
        return float(u.value(w))
    f = Integrand.monotone(lambda x: u.value(w + alpha * x), "u(w+alpha x)")
    return distributional_expectation(zeta, f, _tight(spec))


def marginal_utility(
    problem: PortfolioProblem, u: UtilityFunction, alpha: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """``V'(alpha) = int x u'(w + alpha x) dPhi(x)``."""
    zeta = problem.excess
    _check_alpha(problem, u, alpha, zeta)
    w = problem.w
    f = Integrand(lambda x: x * u.derivative(w + alpha * x, 1), None, "x u'(w+alpha x)")
    return distributional_expectation(zeta, f, _tight(spec))


# --- exact maximiser -------------------------------------------------------


@dataclass(frozen=True)
class ExactAllocation:
    alpha: float
    derivative: float
    scale: float
    method: str
    iterations: int
    bracket: tuple[float, float]
    boundary: str | None = None

    @property
    def stationary(self) -> bool:
        return abs(self.derivative) <= STATIONARITY_RTOL * self.scale


def _default_bracket(problem, u, zeta) -> tuple[float, float]:
    lo, hi = feasible_bracket(problem.w, zeta, u)
    reach = max(abs(x) for x in zeta.support)
    if reach == 0:
        raise ModelError("the excess return is the constant 0, so every allocation is optimal")
    cap = 100.0 * max(1.0, abs(problem.w)) / reach
    return max(lo, -cap), min(hi, cap)


def _safe(dV, a):
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            d = dV(a)
    except NumericFailure:
        return None
    return d if math.isfinite(d) else None


def _walk_to_edge(dV, end: float, d0: float):
    """Step from 0 toward ``end`` until ``V'`` changes sign or stops being computable.

    Near a domain edge (or deep in an exponential tail) ``u'`` blows up and
    the quadrature can fail, so the first probe halves toward 0 until it
    succeeds and the walk then closes in on ``end``.  Returns the last
    computable point and ``V'`` there.
    """
    frac, d = 0.5, None
    while frac > 1e-18:
        d = _safe(dV, end * frac)
        if d is not None:
            break
        frac *= 0.5
    if d is None:
        return 0.0, d0
    last, dlast = end * frac, d
    gap = 1.0 - frac
    for k in range(1, 64):
        if dlast == 0.0 or np.sign(dlast) != np.sign(d0) or last == end:
            break
        a = end * (1.0 - gap * 0.5**k)
        d = _safe(dV, a)
        if d is None:
            break
        last, dlast = a, d
    return last, dlast


def exact_allocation(
    problem: PortfolioProblem,
    u: UtilityFunction,
    bracket: tuple[float, float] | None = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> ExactAllocation:
    """Maximise ``V`` over ``bracket`` (default: the feasible range, capped when unbounded).

    Root of ``V'`` by Brent's method when ``V'`` changes sign, otherwise a
    golden-section search on ``V``; a maximiser at a bracket end is flagged
    through ``boundary``.  When ``V'(0)`` vanishes to rounding, 0 is returned.
    """
    zeta = problem.excess
    if bracket is None:
        lo, hi = _default_bracket(problem, u, zeta)
    else:
        lo, hi = (float(b) for b in bracket)
        flo, fhi = feasible_bracket(problem.w, zeta, u)
        if not (lo < hi):
            raise DomainError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")
        if lo < flo or hi > fhi:
            raise DomainError(f"bracket ({lo}, {hi}) leaves the feasible range ({flo}, {fhi})")
    dV = lambda a: marginal_utility(problem, u, a, spec)

    if lo <= 0.0 <= hi:
        d0 = dV(0.0)
        scale = max(1.0, abs(d0))
        reach = max(abs(x) for x in zeta.support)
        if abs(d0) <= 1e-13 * abs(eval_derivative(u, problem.w, 1)) * reach:
            return ExactAllocation(0.0, d0, scale, "flat-at-zero", 0, (lo, hi))
        # concavity puts the maximiser on the side V'(0) points to
        if d0 > 0:
            a, da = 0.0, d0
            b, db = _walk_to_edge(dV, hi, d0)
        else:
            a, da = _walk_to_edge(dV, lo, d0)
            b, db = 0.0, d0
    else:
        a, b = lo, hi
        da, db = dV(a), dV(b)
        scale = max(1.0, abs(dV(0.5 * (lo + hi))))

    for end, d in ((a, da), (b, db)):
        if d == 0.0:
            return ExactAllocation(end, d, scale, "endpoint-root", 0, (lo, hi))
    if da > 0 > db:
        xtol = 1e-15 * max(1.0, abs(a), abs(b))
        alpha, res = brentq(dV, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500, full_output=True)
        d = dV(alpha)
        out = ExactAllocation(float(alpha), d, scale, "brentq", res.iterations, (lo, hi))
        if not out.stationary:
            raise NumericFailure(f"root of V' not stationary to tolerance at alpha={alpha}", alpha, abs(d))
        return out

    # No sign change: V is monotone on [a, b] and the maximum sits at an end.
    V = lambda x: total_utility(problem, u, x, spec)
    alpha, _, its = golden_section_max(V, a, b, xtol=1e-12)
    width = b - a
    boundary = None
    if alpha - a <= 1e-6 * width:
        alpha, boundary = a, "lower"
    elif b - alpha <= 1e-6 * width:
        alpha, boundary = b, "upper"
    return ExactAllocation(float(alpha), dV(alpha), scale, "golden", its, (lo, hi), boundary)


# --- truncated first-order condition ---------------------------------------


@dataclass(frozen=True)
class FocPolynomial:
    """``sum_j c_j alpha^j = 0``, ascending coefficients ``c_0..c_n``."""

    coefficients: tuple[float, ...]
    raw_moments: tuple[float, ...]
    root: float | None
    backend: str

    @property
    def flagged(self) -> bool:
        return self.root is None

    def __call__(self, alpha):
        return np.polynomial.polynomial.polyval(alpha, self.coefficients)


def nearest_real_root(coeffs: Sequence[float], lo: float = -math.inf, hi: float = math.inf) -> float | None:
    """Real root of the ascending-coefficient polynomial closest to 0 within ``[lo, hi]``.

    The range is split at the real critical points, and each monotone piece
    with a sign change is solved by safeguarded Newton started from its end
    nearest 0.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if c.size == 0 or c[0] == 0.0:
        return 0.0 if lo <= 0.0 <= hi else None
    if c.size == 1:
        return None
    bound = 1.0 + float(np.max(np.abs(c[:-1] / c[-1])))  # Cauchy bound on root size
    lo, hi = max(lo, -bound), min(hi, bound)
    if not lo < hi:
        return None
    P = np.polynomial.Polynomial(c)
    dP = P.deriv()
    crit = [z.real for z in dP.roots() if abs(z.imag) <= 1e-12 * max(1.0, abs(z)) and lo < z.real < hi]
    edges = sorted({lo, hi, *crit})
    if lo < 0.0 < hi:
        edges = sorted(set(edges) | {0.0})
    best = None
    absP = np.polynomial.Polynomial(np.abs(c))
    for z in crit:
        # even-multiplicity roots touch zero without a sign change
        if abs(P(z)) <= 64 * np.finfo(float).eps * absP(abs(z)) and (best is None or abs(z) < abs(best)):
            best = float(z)
    for a, b in zip(edges[:-1], edges[1:]):
        pa, pb = P(a), P(b)
        if pa * pb > 0:
            continue
        start = a if abs(a) <= abs(b) else b
        x, _ = safeguarded_newton(P, dP, a, b, start)
        if best is None or abs(x) < abs(best):
            best = float(x)
    return best


def foc_taylor_polynomial(
    problem: PortfolioProblem,
    u: UtilityFunction,
    n: int,
    backend: str = "distributional",
    spec: QuadratureSpec = DEFAULT_SPEC,
    decomposition: SmallRiskDecomposition | None = None,
) -> FocPolynomial:
    """Taylor-truncated first-order condition of degree ``n`` in ``alpha``.

    ``c_j = u^(j+1)(w) / j! * Q[(k mu + xi)^(j+1)]`` with the raw moments
    taken under ``backend``.
    """
    if n < 1:
        raise DomainError(f"truncation order must be >= 1, got {n}")
    w = problem.w
    derivs = [eval_derivative(u, w, j + 1) for j in range(n + 1)]
    dec = decomposition or decompose_small_risk(problem.excess, spec, allow_zero=True)
    raw = tuple(shifted_raw_moment(dec.xi, dec.kmu, j, backend, spec) for j in range(1, n + 2))
    coeffs = tuple(derivs[j] / math.factorial(j) * raw[j] for j in range(n + 1))
    lo, hi = feasible_bracket(w, problem.excess, u)
    return FocPolynomial(coeffs, raw, nearest_real_root(coeffs, lo, hi), backend)


# --- closed-form approximations --------------------------------------------

KURTOSIS_WEIGHTS = ("t*p", "t/p")


def _need(value, name: str) -> float:
    if value is None:
        raise SingularityError(f"{name} is singular at this wealth level")
    return value


def _check_order1(m: MomentSet, ind: RiskIndices):
    if m.v <= 0:
        raise SingularityError("approximation needs positive variance")
    if ind.r == 0:
        raise SingularityError("approximation needs nonzero risk aversion")


def approx_allocation_order1(m: MomentSet, ind: RiskIndices) -> float:
    """``Q / (r V)``."""
    _check_order1(m, ind)
    return m.q / (ind.r * m.v)


def approx_allocation_order2(m: MomentSet, ind: RiskIndices) -> float:
    """Order-1 value plus the prudence-skewness term ``p Sk Q^2 / (2 r^2 V^3)``."""
    _check_order1(m, ind)
    p = _need(ind.p, "prudence")
    return approx_allocation_order1(m, ind) + 0.5 * p / ind.r**2 * m.sk * m.q**2 / m.v**3


def order3_terms(
    m: MomentSet, ind: RiskIndices, kurtosis_weight: str = "t*p", skew_q_power: int = 3
) -> dict[str, float]:
    """The four cubic-in-drift corrections added on top of the order-2 value.

    ``kurtosis_weight`` picks ``t*p/r^3`` (the coefficient that comes out of
    expanding the first-order condition) or ``t/(p r^3)``; ``skew_q_power``
    is the power of ``Q`` in the squared-skewness term (3, or 1 to reproduce
    the dimensionally inconsistent variant).
    """
    _check_order1(m, ind)
    if kurtosis_weight not in KURTOSIS_WEIGHTS:
        raise DomainError(f"kurtosis_weight must be one of {KURTOSIS_WEIGHTS}")
    if skew_q_power not in (1, 3):
        raise DomainError("skew_q_power must be 1 or 3")
    r, q, v = ind.r, m.q, m.v
    p = _need(ind.p, "prudence")
    t = _need(ind.t, "temperance")
    if kurtosis_weight == "t*p":
        kw = t * p
    else:
        if p == 0:
            raise SingularityError("t/p weight needs nonzero prudence")
        kw = t / p
    q3 = q**3
    return {
        "variance": -q3 / (r * v**2),
        "skewness_squared": 0.5 * p**2 / r**3 * q**skew_q_power * m.sk**2 / v**5,
        "prudence": 1.5 * p / r**2 * q3 / v**2,
        "kurtosis": -kw / (6.0 * r**3) * q3 * m.ku / v**4,
    }


def approx_allocation_order3(
    m: MomentSet, ind: RiskIndices, kurtosis_weight: str = "t*p", skew_q_power: int = 3
) -> float:
    terms = order3_terms(m, ind, kurtosis_weight, skew_q_power)
    return approx_allocation_order2(m, ind) + math.fsum(terms.values())


@dataclass(frozen=True)
class HaraTriangular:
    value: float
    value_printed_skewness: float
    skewness: float
    printed_skewness: float


def hara_triangular_allocation(a: float, b: float, c: float, eta: float, gamma: float, w: float) -> HaraTriangular:
    """Order-2 allocation for HARA utility and a triangular excess return, in closed form.

    With ``z = eta + w/gamma``: ``z * 384 big e / D + (gamma+1)/(2 gamma) * z * 384^3 big^3 e^2 Sk / D^3``
    where ``D = 33 big^3 + 21 big^2 small + 11 big small^2 - small^3``.
    """
    if gamma == 0:
        raise DomainError("HARA needs gamma != 0")
    z = eta + w / gamma
    if z <= 0:
        raise DomainError(f"HARA needs eta + w/gamma > 0, got {z}")
    make_triangular(a, b, c)
    big, small = max(b - a, c - b), min(b - a, c - b)
    if big == 0:
        raise SingularityError("degenerate triangular has zero variance")
    e = (a + 2 * b + c) / 4
    D = 33 * big**3 + 21 * big**2 * small + 11 * big * small**2 - small**3
    lead = z * 384 * big * e / D
    tail = 0.5 * (gamma + 1) / gamma * z * 384**3 * big**3 * e**2 / D**3
    sk = triangular_closed_moments(a, b, c).sk
    sk_printed = printed_triangular_skewness(a, b, c)
    return HaraTriangular(lead + tail * sk, lead + tail * sk_printed, sk, sk_printed)


# --- reports ---------------------------------------------------------------


def _try(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except SingularityError:
        return None


def _approximations(m: MomentSet, ind: RiskIndices) -> dict:
    return {
        "alpha_1": _try(approx_allocation_order1, m, ind),
        "alpha_2": _try(approx_allocation_order2, m, ind),
        "alpha_3": _try(approx_allocation_order3, m, ind),
        "alpha_3_t_over_p": _try(approx_allocation_order3, m, ind, "t/p", 3),
        "alpha_3_t_over_p_q1": _try(approx_allocation_order3, m, ind, "t/p", 1),
    }


@dataclass
class AllocationReport:
    alpha_exact: float
    alpha_order: dict
    foc_roots: dict
    moments_used: MomentSet
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "alpha_exact": self.alpha_exact,
            "alpha_order": {str(k): v for k, v in self.alpha_order.items()},
            "foc_roots": {str(k): v for k, v in self.foc_roots.items()},
            "moments_used": self.moments_used.to_json(),
            "diagnostics": self.diagnostics,
        }


def solve(
    problem: PortfolioProblem,
    u: UtilityFunction,
    backend: str = "distributional",
    spec: QuadratureSpec = DEFAULT_SPEC,
    bracket: tuple[float, float] | None = None,
) -> AllocationReport:
    """Exact allocation plus every approximation, with both moment backends in diagnostics.

    Approximations whose index is singular are left out of ``alpha_order``
    and listed as ``None`` in the diagnostics.
    """
    if backend not in BACKENDS:
        raise DomainError(f"backend must be one of {BACKENDS}, got {backend!r}")
    zeta = problem.excess
    exact = exact_allocation(problem, u, bracket, spec)
    dec = decompose_small_risk(zeta, spec, allow_zero=True)
    ind = risk_indices(u, problem.w)
    per_backend = {}
    for b in BACKENDS:
        m = moment_set(zeta, b, spec)
        per_backend[b] = {"moments": m.to_json(), **_approximations(m, ind)}
    chosen = per_backend[backend]
    alpha_order = {n: chosen[f"alpha_{n}"] for n in (1, 2, 3) if chosen[f"alpha_{n}"] is not None}
    foc_roots = {}
    for n in (1, 2, 3):
        try:
            poly = foc_taylor_polynomial(problem, u, n, backend, spec, dec)
        except SingularityError:
            continue
        if poly.root is not None:
            foc_roots[n] = poly.root
    diagnostics = {
        "backend": backend,
        "w": problem.w,
        "kmu": dec.kmu,
        "indices": {"r": ind.r, "p": ind.p, "t": ind.t},
        "exact": {
            "method": exact.method,
            "iterations": exact.iterations,
            "derivative": exact.derivative,
            "stationarity_bound": STATIONARITY_RTOL * exact.scale,
            "bracket": list(exact.bracket),
            "boundary": exact.boundary,
        },
        "backends": per_backend,
        "quadrature": {"abs_tol": spec.abs_tol, "rel_tol": spec.rel_tol},
    }
    return AllocationReport(exact.alpha, alpha_order, foc_roots, MomentSet(**chosen["moments"]), diagnostics)


# --- k sweeps --------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    k: float
    kmu: float
    alpha_exact: float
    alpha_1: float | None
    alpha_2: float | None
    alpha_3: float | None
    err_1: float | None
    err_2: float | None
    err_3: float | None
    backend: str
    foc_root_3: float | None


SWEEP_FIELDS = tuple(SweepRow.__dataclass_fields__)


def sweep_row(
    problem: PortfolioProblem,
    u: UtilityFunction,
    dec: SmallRiskDecomposition,
    k: float,
    backends: Iterable[str],
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> list[SweepRow]:
    """Rows for the scenario ``zeta(k) = k mu + xi`` under each backend."""
    scenario = PortfolioProblem(problem.w, 0.0, dec.zeta(k))
    exact = exact_allocation(scenario, u, spec=spec)
    if exact.boundary is not None:
        raise ModelError(f"k={k}: optimum sits on the {exact.boundary} end of the feasible range")
    ind = risk_indices(u, scenario.w)
    sub = SmallRiskDecomposition(k, dec.mu, dec.xi)
    rows = []
    for b in backends:
        m = moment_set(scenario.risky, b, spec)
        approx = [_try(fn, m, ind) for fn in (approx_allocation_order1, approx_allocation_order2, approx_allocation_order3)]
        errs = [None if a is None else abs(exact.alpha - a) for a in approx]
        try:
            root = foc_taylor_polynomial(scenario, u, 3, b, spec, sub).root
        except SingularityError:
            root = None
        rows.append(SweepRow(k, k * dec.mu, exact.alpha, *approx, *errs, b, root))
    return rows


def sweep(
    problem: PortfolioProblem,
    u: UtilityFunction,
    ks: Sequence[float],
    backends: Iterable[str] = ("distributional",),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> list[SweepRow]:
    """Fixed-noise sweep: ``mu`` is the drift of the base problem, ``k`` scales it."""
    if len(ks) == 0:
        raise DomainError("sweep needs at least one k multiplier")
    if any(k <= 0 for k in ks):
        raise DomainError("k multipliers must be positive")
    backends = tuple(backends)
    dec = decompose_small_risk(problem.excess, spec)
    rows = []
    for k in sorted(ks):
        rows.extend(sweep_row(problem, u, dec, float(k), backends, spec))
    return rows


def error_slopes(rows: Sequence[SweepRow], backend: str) -> dict[int, float | None]:
    """Least-squares slope of ``log err_n`` against ``log k`` for each order."""
    sel = [r for r in rows if r.backend == backend]
    out = {}
    for n in (1, 2, 3):
        pts = [(r.k, getattr(r, f"err_{n}")) for r in sel]
        pts = [(k, e) for k, e in pts if e is not None and e > 0]
        if len(pts) < 2:
            out[n] = None
            continue
        x = np.log([k for k, _ in pts])
        y = np.log([e for _, e in pts])
        out[n] = float(np.polyfit(x, y, 1)[0])
    return out
