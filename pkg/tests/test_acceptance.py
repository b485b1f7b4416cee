"""Acceptance criteria, one test each.

Every test appends a ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line to ``REPORT`` before asserting; pytest prints the collected lines in the
terminal summary.  Run as a script to print them directly.
"""

import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from generators import random_event, random_fuzzy, random_triangular, random_utility  # noqa: E402
from oracles import tri_choquet_central  # noqa: E402
from portkit.fuzzy import make_triangular  # noqa: E402
from portkit.fuzzy import credibility, distribution  # noqa: E402
from portkit.moments import (  # noqa: E402
    MomentSet,
    central_moment,
    expectation,
    Integrand,
    printed_triangular_skewness,
    skewness,
    triangular_closed_moments,
)
from portkit.quadrature import DEFAULT_SPEC  # noqa: E402
from portkit.solver import (  # noqa: E402
    PortfolioProblem,
    approx_allocation_order3,
    decompose_small_risk,
    error_slopes,
    exact_allocation,
    feasible_bracket,
    foc_taylor_polynomial,
    order3_terms,
    sweep,
)
from portkit.utility import UtilityFunction, eval_derivative, finite_difference_index_oracle, risk_indices  # noqa: E402

REPORT: list[str] = []
ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"


def record(n: int, ok: bool, detail: str):
    REPORT.append(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def rel_err(got, want):
    return abs(got - want) / max(abs(want), 1e-300)


# --- 1 credibility engine --------------------------------------------------


def test_criterion_1_credibility_engine():
    rng = np.random.default_rng(1)
    worst_dual, mono_fail, cdf_fail = 0.0, 0, 0
    for _ in range(1000):
        fv = random_fuzzy(rng, jumps=True)
        a = random_event(rng, fv)
        b = a.union(random_event(rng, fv))
        ca = credibility(fv, a)
        worst_dual = max(worst_dual, abs(ca + credibility(fv, a.complement()) - 1.0))
        mono_fail += ca > credibility(fv, b) + 1e-12
    for _ in range(100):
        fv = random_fuzzy(rng, jumps=True)
        lo, hi = fv.support
        vals = np.array([distribution(fv, x) for x in np.linspace(lo - 1, hi + 1, 201)])
        cdf_fail += not (np.all(np.diff(vals) >= 0) and distribution(fv, lo - 1e-9) == 0.0 and distribution(fv, hi) == 1.0)
    ok = worst_dual <= 1e-12 and mono_fail == 0 and cdf_fail == 0
    record(1, ok, f"1000 pairs, max |Cr(A)+Cr(A^c)-1| = {worst_dual:.2e}, monotonicity violations {mono_fail}, "
                  f"distribution-function violations {cdf_fail}/100")


# --- 2 closed forms vs quadrature ------------------------------------------


def hand_variance(a, b, c):
    big, small = max(b - a, c - b), min(b - a, c - b)
    return (33 * big**3 + 21 * big**2 * small + 11 * big * small**2 - small**3) / (384 * big)


def hand_kurtosis(a, b, c):
    big, d = max(b - a, c - b), min(b - a, c - b)
    return (253 * big**5 + 395 * big**4 * d + 290 * big**3 * d**2 + 70 * big**2 * d**3 + 17 * big * d**4 - d**5) / (10240 * big)


def test_criterion_2_moment_closed_forms():
    rng = np.random.default_rng(2)
    shapes = [random_triangular(rng) for _ in range(50)]
    t0 = time.perf_counter()
    worst = {"q": 0.0, "v": 0.0, "ku": 0.0}
    for abc in shapes:
        fv = make_triangular(*abc)
        q = expectation(fv, Integrand.identity(), "choquet")
        v = expectation(fv, Integrand.power(q, 2), "choquet")
        ku = expectation(fv, Integrand.power(q, 4), "choquet")
        worst["q"] = max(worst["q"], abs(q - (abc[0] + 2 * abc[1] + abc[2]) / 4))
        worst["v"] = max(worst["v"], rel_err(v, hand_variance(*abc)))
        worst["ku"] = max(worst["ku"], rel_err(ku, hand_kurtosis(*abc)))
    elapsed = time.perf_counter() - t0
    ok = worst["q"] <= 1e-10 and worst["v"] <= 1e-6 and worst["ku"] <= 1e-6 and elapsed <= 10.0
    record(2, ok, f"50 triangulars, |dQ| {worst['q']:.1e}, rel dV {worst['v']:.1e}, rel dK {worst['ku']:.1e}, "
                  f"{elapsed:.1f} s")


# --- 3 skewness ------------------------------------------------------------

# Asymmetric shape away from the origin: the two skewness formulas part ways.
SHIFTED = (1.0, 1.2, 1.7)
PRINTED_SHIFTED = 0.07809375  # 0.7^2 * (1 + 1.7 + 2.4) / 32, pinned regression


def test_criterion_3_skewness():
    rng = np.random.default_rng(3)
    sym = max(abs(skewness(make_triangular(*random_triangular(rng, symmetric=True)))) for _ in range(20))
    oracle = tri_choquet_central(*SHIFTED, 3)
    printed = printed_triangular_skewness(*SHIFTED)
    gap = abs(printed - oracle)
    tol = max(DEFAULT_SPEC.abs_tol, DEFAULT_SPEC.rel_tol)
    shipped = max(
        abs(triangular_closed_moments(*abc).sk - tri_choquet_central(*abc, 3))
        for abc in [SHIFTED] + [random_triangular(rng) for _ in range(10)]
    )
    ok = sym <= 1e-8 and gap > 10 * tol and abs(printed - PRINTED_SHIFTED) <= 1e-15 and shipped <= 1e-8
    record(3, ok, f"symmetric max |Sk| {sym:.1e}; (c+a+2b) variant {printed:.6g} vs oracle {oracle:.6g} on {SHIFTED} "
                  f"(gap {gap:.3g} > {10 * tol:.0e}); shipped closed form max error {shipped:.1e}")


# --- 4 backend divergence --------------------------------------------------


def test_criterion_4_backend_divergence():
    xi = make_triangular(-1.0, 0.0, 1.0)
    cho = central_moment(xi, 2, "choquet")
    dist = central_moment(xi, 2, "distributional")
    ok = abs(cho - 1 / 6) <= 1e-8 and abs(dist - 1 / 3) <= 1e-8
    record(4, ok, f"Q[xi^2] choquet {cho:.12f} (1/6), distributional {dist:.12f} (1/3)")


# --- 5 risk indices --------------------------------------------------------


def test_criterion_5_risk_indices():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        u, w = random_utility(rng)
        ind = risk_indices(u, w)
        for name in ("r", "p", "t"):
            h = 1e-4 * max(1.0, abs(w))
            worst = max(worst, rel_err(getattr(ind, name), finite_difference_index_oracle(u, w, name, h)))
    a, w = 0.5, 2.0
    ratios = risk_indices(UtilityFunction.crra(a), w).ratios()
    want = {
        "1/r": w / (1 - a),
        "p/r^2": w * (2 - a) / (1 - a) ** 2,
        "p^2/r^3": w * (2 - a) ** 2 / (1 - a) ** 3,
        "t/p": (3 - a) / (2 - a),
        "t/(p r^3)": w**3 * (3 - a) / ((1 - a) ** 3 * (2 - a)),
    }
    ratio_err = max(rel_err(ratios[k], v) for k, v in want.items())
    ok = worst <= 1e-6 and ratio_err <= 1e-10
    record(5, ok, f"100 utilities, max rel error vs finite differences {worst:.1e}; CRRA ratio error {ratio_err:.1e}")


# --- 6 solver --------------------------------------------------------------


def test_criterion_6_solver():
    cases = [
        (UtilityFunction.cara(2.0), make_triangular(-0.04, 0.01, 0.06)),
        (UtilityFunction.crra(0.5), make_triangular(-0.04, 0.01, 0.06)),
        (UtilityFunction.hara(1.0, 0.0, 3.0), make_triangular(-0.02, 0.03, 0.08)),
        (UtilityFunction.crra(-2.0), make_triangular(-0.1, 0.02, 0.2)),
    ]
    stat = 0.0
    for u, risky in cases:
        ex = exact_allocation(PortfolioProblem(1.0, 0.0, risky), u)
        stat = max(stat, abs(ex.derivative) / ex.scale)
    foc, compared, flag_ok = 0.0, 0, True
    for u, risky in cases:
        p = PortfolioProblem(1.0, 0.0, risky)
        for backend in ("choquet", "distributional"):
            poly = foc_taylor_polynomial(p, u, 1, backend)
            q, v = poly.raw_moments
            linear = -eval_derivative(u, 1.0, 1) * q / (eval_derivative(u, 1.0, 2) * v)
            lo, hi = feasible_bracket(1.0, risky, u)
            if lo <= linear <= hi:
                foc = max(foc, abs(poly.root - linear))
                compared += 1
            else:
                flag_ok &= poly.flagged
    zeros = [
        exact_allocation(PortfolioProblem(1.0, 0.0, make_triangular(-s, 0.0, s)), u).alpha
        for s in (0.05, 1.0)
        for u, _ in cases
        if u.in_domain(1.0 - s)
    ]
    k0 = decompose_small_risk(make_triangular(-0.05, 0.0, 0.05), allow_zero=True).k
    ok = stat <= 1e-9 and foc <= 1e-12 and flag_ok and all(z == 0.0 for z in zeros) and k0 == 0.0
    record(6, ok, f"max |V'(a*)|/scale {stat:.1e}; n=1 root vs linear solution {foc:.1e} over {compared} "
                  f"(out-of-range solutions flagged: {flag_ok}); "
                  f"k=0 allocations {sorted(set(zeros))} over {len(zeros)} cases")


# --- 7 convergence ---------------------------------------------------------


def test_criterion_7_convergence():
    cfg = json.loads((CONFIGS / "base_cara.json").read_text())
    problem = PortfolioProblem(cfg["w0"], cfg["r"], make_triangular(*cfg["risky"]["triangular"]))
    u = UtilityFunction.cara(cfg["utility"]["lambda"])
    t0 = time.perf_counter()
    rows = sweep(problem, u, cfg["sweep"]["k"], ("distributional", "choquet"))
    elapsed = time.perf_counter() - t0
    dist = sorted((r for r in rows if r.backend == "distributional"), key=lambda r: r.k)
    s = error_slopes(rows, "distributional")
    ordered = all(r.err_3 <= r.err_2 <= r.err_1 for r in dist[:2])
    cho = error_slopes(rows, "choquet")
    ok = s[1] >= 1.8 and s[2] >= 2.7 and ordered and elapsed <= 30.0
    record(7, ok, f"distributional-moment slopes {s[1]:.3f}/{s[2]:.3f}/{s[3]:.3f}, "
                  f"err3<=err2<=err1 at two smallest k: {ordered}, {elapsed:.1f} s "
                  f"(choquet-moment slopes {cho[1]:.3f}/{cho[2]:.3f}/{cho[3]:.3f}, reported only)")


# --- 8 order-3 consistency -------------------------------------------------


def test_criterion_8_order3_crra_expansion():
    worst = 0.0
    for a, w in ((0.5, 1.0), (-2.0, 1.5), (0.3, 2.0)):
        m = MomentSet(0.011, 0.0021, 3.0e-5, 4.5e-5, "choquet")
        Q, V, Sk, K = m.q, m.v, m.sk, m.ku
        expansion = {
            "variance": -w / (1 - a) * Q**3 / V**2,
            "skewness_squared": 0.5 * (2 - a) ** 2 * w / (1 - a) ** 3 * Q**3 * Sk**2 / V**5,
            "prudence": 1.5 * w * (2 - a) / (1 - a) ** 2 * Q**3 / V**2,
            "kurtosis": -(1 / 6) * w**3 * (3 - a) / ((1 - a) ** 3 * (2 - a)) * Q**3 * K / V**4,
        }
        lower = w / (1 - a) * Q / V + 0.5 * w * (2 - a) / (1 - a) ** 2 * Sk * Q**2 / V**3
        ind = risk_indices(UtilityFunction.crra(a), w)
        terms = order3_terms(m, ind, "t/p", 3)
        worst = max(worst, *(rel_err(terms[k], v) for k, v in expansion.items()))
        total = approx_allocation_order3(m, ind, "t/p", 3)
        worst = max(worst, rel_err(total, lower + sum(expansion.values())))
    record(8, worst <= 1e-12, f"term-by-term and total max rel error {worst:.1e} over 3 CRRA parameterizations")


# --- 9 CLI -----------------------------------------------------------------


def portkit(*args):
    return subprocess.run([sys.executable, "-m", "portkit", *args], capture_output=True, text=True)


def test_criterion_9_cli():
    base = CONFIGS / "base_cara.json"
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        malformed = tmp / "bad.json"
        malformed.write_text("{")
        negative = tmp / "neg.json"
        cfg = json.loads(base.read_text())
        cfg["risky"] = {"triangular": [-0.06, -0.01, 0.04]}
        negative.write_text(json.dumps(cfg))
        codes = {
            "ok": portkit("sweep", "--config", str(base), "--csv", str(tmp / "a.csv"), "--seed", "5").returncode,
            "config": portkit("solve", "--config", str(malformed)).returncode,
            "numeric": portkit("sweep", "--config", str(negative), "--csv", str(tmp / "n.csv")).returncode,
        }
        portkit("sweep", "--config", str(base), "--csv", str(tmp / "b.csv"), "--seed", "5")
        same = (tmp / "a.csv").read_bytes() == (tmp / "b.csv").read_bytes()
    ok = codes == {"ok": 0, "config": 2, "numeric": 3} and same
    record(9, ok, f"exit codes {codes}, sweep CSV byte-identical across runs: {same}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in sorted(tests, key=lambda f: int(f.__name__.split("_")[2])):
        try:
            t()
        except AssertionError:
            pass
        except Exception as exc:  # a crash is a failure, not a skip
            REPORT.append(f"FAIL criterion {t.__name__.split('_')[2]}: {type(exc).__name__}: {exc}")
    print("\n".join(REPORT))
    sys.exit(0 if all(line.startswith("PASS") for line in REPORT) else 1)
