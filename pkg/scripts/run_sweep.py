"""Run a sweep config and summarise how the ratio moves along each grid.

    python scripts/run_sweep.py scripts/configs/er_sizes.cfg -o er_sizes.csv
"""
import argparse
import sys
from collections import defaultdict

from graphsearch.experiments import load_config, run_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args()
    cfg = load_config(args.config)
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    try:
        rows = run_sweep(cfg, out)
    finally:
        if out is not sys.stdout:
            out.close()
    means = [r for r in rows if r.row == "mean"]
    by_s = defaultdict(list)
    for r in means:
        by_s[(r.s, r.k)].append(r)
    print("summary (mean over seeds):", file=sys.stderr)
    for r in means:
        print(f"  {r.graph:<28} s={r.s:<5} k={r.k:<5} t={r.strategy_length:<9.1f} "
              f"lb={r.lower_bound:<9.1f} ratio={r.ratio:.4f} peak={r.peak_searchers:.1f}", file=sys.stderr)
    if len(cfg.n) > 1:
        for (s, k), rs in sorted(by_s.items()):
            ratios = [r.ratio for r in rs]
            spread = (max(ratios) - min(ratios)) / min(ratios)
            print(f"  s={s} k={k}: ratio spread across n = {spread:.2%}", file=sys.stderr)
    by_graph = defaultdict(list)
    for r in means:
        by_graph[(r.graph, r.k)].append(r)
    for (graph, k), rs in by_graph.items():
        if len(rs) > 2:
            ratios = [r.ratio for r in sorted(rs, key=lambda r: r.s)]
            rises = sum(b > a for a, b in zip(ratios, ratios[1:]))
            print(f"  {graph} k={k}: first {ratios[0]:.4f} last {ratios[-1]:.4f}, "
                  f"{rises} rise(s) along the s-grid", file=sys.stderr)
    errors = [r for r in rows if r.error]
    for r in errors:
        print(f"  failed cell s={r.s} k={r.k} seed={r.seed}: {r.error}", file=sys.stderr)
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main())
