"""Paired PD / LA / ALNS comparison on seeded WD instances, with runtime scaling.

    python scripts/run_trends.py --instances 20 --n 100 --max-iter 200 --out results/trends
"""

import argparse
import json
from pathlib import Path

from oswvid.bench.trends import trend_experiment, write_trend_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--max-iter", type=int, default=200)
    ap.add_argument("--scale-n", type=int, default=400)
    ap.add_argument("--scale-instances", type=int, default=5)
    ap.add_argument("--out", type=Path, default=Path("results/trends"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    rep = trend_experiment(
        instances=args.instances, n=args.n, max_iter=args.max_iter,
        scale_n=args.scale_n, scale_instances=args.scale_instances,
        progress=lambda r: print(f"{r.algorithm:>4} n={r.n} seed={r.seed}: {len(r.front)} points, "
                                 f"min f2 {r.min_f2:.4f}, f1 extent {r.f1_extent:.4f}, {r.wall_time:.1f}s",
                                 flush=True),
    )
    write_trend_csv(rep, args.out / "runs.csv")
    summary = {
        "alns_lowest_f2_rate": rep.f2_win_rate(),
        "alns_widest_f1_extent_rate": rep.extent_win_rate(),
        "time_ratio_LA": rep.time_ratio("LA"),
        "time_ratio_ALNS": rep.time_ratio("ALNS"),
        "runs_with_hv_drop": len(rep.hv_drops()),
    }
    (args.out / "summary.json").write_text(json.dumps(summary, indent=1))
    print(json.dumps(summary, indent=1))


if __name__ == "__main__":
    main()
