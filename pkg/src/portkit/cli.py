"""``portkit moments|indices|solve|sweep --config <path>``.

Exit codes: 0 success, 2 configuration error, 3 numerical or model failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .config import BACKEND_CHOICES, RunConfig, load_config
from .errors import ConfigError, PortkitError
from .fuzzy import FuzzyNumber
from .moments import moment_set, printed_triangular_skewness, triangular_closed_moments
from .solver import (
    SWEEP_FIELDS,
    SweepRow,
    decompose_small_risk,
    error_slopes,
    solve,
    sweep_row,
)
from .utility import risk_indices

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
SINGULAR = "singular"


# --- formatting ------------------------------------------------------------


def fmt_table(value) -> str:
    if value is None:
        return SINGULAR
    if isinstance(value, str):
        return value
    return f"{value:.6g}"


def fmt_csv(value) -> str:
    if value is None:
        return SINGULAR
    if isinstance(value, str):
        return value
    return f"{value:.17g}"


def render_table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(headers)] + [[fmt_table(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def sweep_csv_header() -> str:
    return ",".join(SWEEP_FIELDS) + "\n"


def sweep_csv_line(row: SweepRow) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(fmt_csv(getattr(row, f)) for f in SWEEP_FIELDS)
    return buf.getvalue()


def parse_sweep_csv(text: str) -> list[SweepRow]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != SWEEP_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        vals = {}
        for f in SWEEP_FIELDS:
            raw = rec[f]
            if f == "backend":
                vals[f] = raw
            else:
                vals[f] = None if raw == SINGULAR else float(raw)
        rows.append(SweepRow(**vals))
    return rows


def _triangular_params(fv: FuzzyNumber):
    if len(fv.xs) == 3 and tuple(fv.levels) == (0.0, 1.0, 0.0):
        return tuple(float(x) for x in fv.xs)
    return None


def _write_json(path: str | None, payload: dict):
    if path:
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# --- commands --------------------------------------------------------------


def cmd_moments(cfg: RunConfig, out) -> int:
    zeta = cfg.problem.excess
    rows, payload = [], {"backends": {}}
    quad = {}
    for b in cfg.backends():
        m = moment_set(zeta, b, cfg.quadrature)
        quad[b] = m
        payload["backends"][b] = m.to_json()
        rows.append([b, m.q, m.v, m.sk, m.ku])
    abc = _triangular_params(zeta)
    notes = []
    if abc is not None:
        closed = triangular_closed_moments(*abc)
        payload["closed_form"] = closed.to_json()
        payload["printed_skewness"] = printed_triangular_skewness(*abc)
        rows.append(["closed-form", closed.q, closed.v, closed.sk, closed.ku])
        if "choquet" in quad:
            m = quad["choquet"]
            diff = [m.q - closed.q, m.v - closed.v, m.sk - closed.sk, m.ku - closed.ku]
            payload["discrepancy"] = dict(zip(("q", "v", "sk", "ku"), diff))
            rows.append(["choquet - closed", *diff])
        notes.append(f"skewness by the non-translation-invariant formula: {fmt_table(payload['printed_skewness'])}")
    print(render_table(["source", "q", "v", "sk", "ku"], rows), file=out)
    for n in notes:
        print(n, file=out)
    return EXIT_OK


def cmd_indices(cfg: RunConfig, out) -> int:
    u = cfg.require_utility()
    w = cfg.problem.w
    ind = risk_indices(u, w)
    print(f"utility {u.family} {u.params} at w = {fmt_table(w)}", file=out)
    print(render_table(["r", "p", "t"], [[ind.r, ind.p, ind.t]]), file=out)
    ratios = ind.ratios()
    if ratios:
        print(render_table(list(ratios), [list(ratios.values())]), file=out)
    return EXIT_OK


def cmd_solve(cfg: RunConfig, out, json_path: str | None, seed: int) -> int:
    u = cfg.require_utility()
    backend = "distributional" if cfg.backend == "both" else cfg.backend
    rep = solve(cfg.problem, u, backend, cfg.quadrature)
    ex = rep.diagnostics["exact"]
    print(f"alpha_exact = {fmt_table(rep.alpha_exact)}  ({ex['method']}, {ex['iterations']} iterations, "
          f"V' = {ex['derivative']:.3g}, boundary = {ex['boundary']})", file=out)
    rows = []
    for b in cfg.backends():
        d = rep.diagnostics["backends"][b]
        rows.append([b, d["alpha_1"], d["alpha_2"], d["alpha_3"], d["alpha_3_t_over_p"], d["moments"]["sk"]])
    print(render_table(["backend", "alpha_1", "alpha_2", "alpha_3", "alpha_3[t/p]", "sk"], rows), file=out)
    if rep.foc_roots:
        print(render_table([f"foc_root_{n}" for n in rep.foc_roots], [list(rep.foc_roots.values())]), file=out)
    payload = rep.to_json()
    payload["seed"] = seed
    _write_json(json_path, payload)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, out, csv_path: str | None) -> int:
    u = cfg.require_utility()
    if not cfg.ks:
        raise ConfigError("sweep needs a non-empty 'sweep.k' list", "sweep.k")
    problem = cfg.problem
    try:
        sink = open(csv_path, "w", newline="") if csv_path else None
    except OSError as exc:
        raise ConfigError(f"cannot write CSV to {csv_path}: {exc.strerror}", "--csv") from exc
    rows: list[SweepRow] = []
    try:
        if sink:
            sink.write(sweep_csv_header())
        try:
            dec = decompose_small_risk(problem.excess, cfg.quadrature)
            for k in cfg.ks:
                new = sweep_row(problem, u, dec, k, cfg.backends(), cfg.quadrature)
                rows.extend(new)
                if sink:
                    sink.writelines(sweep_csv_line(r) for r in new)
        except (PortkitError, ArithmeticError, ValueError):
            if sink:
                sink.write("# aborted\n")
            raise
    finally:
        if sink:
            sink.close()
    if not sink:
        out.write(sweep_csv_header())
        out.writelines(sweep_csv_line(r) for r in rows)
    cols = ["k", "backend", "alpha_exact", "err_1", "err_2", "err_3"]
    print(render_table(cols, [[getattr(r, c) for c in cols] for r in rows]), file=out)
    for b in cfg.backends():
        s = error_slopes(rows, b)
        print(f"log-log error slopes [{b}]: " + ", ".join(f"order {n}: {fmt_table(v)}" for n, v in s.items()), file=out)
    return EXIT_OK


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="portkit", description="Credibilistic single-asset portfolio choice.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("moments", "expected value, variance, skewness, kurtosis of the excess return"),
        ("indices", "risk aversion, prudence and temperance at initial wealth"),
        ("solve", "exact optimal allocation and its small-risk approximations"),
        ("sweep", "approximation errors over a list of drift multipliers"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="problem config (JSON)")
        p.add_argument("--backend", choices=BACKEND_CHOICES, help="moment backend (overrides the config)")
        p.add_argument("--csv", help="CSV output path (sweep)")
        p.add_argument("--json", help="JSON output path (solve)")
        p.add_argument("--seed", type=int, default=0, help="recorded for reproducibility (default 0)")
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.backend:
            cfg = replace(cfg, backend=args.backend)
        if args.command == "moments":
            return cmd_moments(cfg, out)
        if args.command == "indices":
            return cmd_indices(cfg, out)
        if args.command == "solve":
            return cmd_solve(cfg, out, args.json or cfg.json_path, args.seed)
        return cmd_sweep(cfg, out, args.csv or cfg.csv_path)
    except ConfigError as exc:
        key = f" [{exc.key}]" if exc.key else ""
        print(f"portkit: config error{key}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PortkitError, ArithmeticError, ValueError) as exc:
        print(f"portkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
