"""Approximation error against the drift multiplier k, under both moment backends.

    python3 scripts/convergence_sweep.py [--config configs/base_cara.json] [--csv out.csv]
"""

import argparse
import sys
from pathlib import Path

from portkit.cli import render_table, sweep_csv_header, sweep_csv_line
from portkit.config import load_config
from portkit.solver import error_slopes, sweep

ROOT = Path(__file__).resolve().parent.parent


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "configs" / "base_cara.json"))
    ap.add_argument("--ks", type=float, nargs="+", help="override the config's k list")
    ap.add_argument("--csv", help="write rows here")
    args = ap.parse_args(argv)
    cfg = load_config(args.config)
    ks = args.ks or cfg.ks or (0.4, 0.2, 0.1, 0.05)
    backends = ("choquet", "distributional")
    rows = sweep(cfg.problem, cfg.require_utility(), ks, backends, cfg.quadrature)
    cols = ["k", "backend", "alpha_exact", "alpha_1", "alpha_3", "err_1", "err_2", "err_3", "foc_root_3"]
    print(render_table(cols, [[getattr(r, c) for c in cols] for r in rows]))
    for b in backends:
        s = error_slopes(rows, b)
        print(f"{b:>15}: log-log slopes " + "  ".join(f"order {n} {v:.3f}" for n, v in s.items()))
    if args.csv:
        Path(args.csv).write_text(sweep_csv_header() + "".join(sweep_csv_line(r) for r in rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
