"""RS and lambda sweeps for each algorithm on one generated instance.

    python scripts/run_sweeps.py --family wd --n 100 --max-iter 50 --out results/sweeps
"""

import argparse
from pathlib import Path

from oswvid.bench.experiments import sweep
from oswvid.bench.generator import GeneratorSpec, generate_instance
from oswvid.engine.algorithms import ALGORITHMS, RunConfig

RS_VALUES = [round(0.1 * k, 1) for k in range(10)]
LAMBDA_VALUES = [round(0.1 * k, 1) for k in range(11)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="wd")
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-iter", type=int, default=50)
    ap.add_argument("--algorithms", default=",".join(ALGORITHMS))
    ap.add_argument("--out", type=Path, default=Path("results/sweeps"))
    args = ap.parse_args()

    inst = generate_instance(GeneratorSpec(args.family, args.n, seed=args.seed))
    for algo in args.algorithms.upper().split(","):
        base = RunConfig.tuned(algo, max_iter=args.max_iter, seed=args.seed)
        for param, values in (("rs", RS_VALUES), ("lambda", LAMBDA_VALUES)):
            out = args.out / f"{inst.id}_{algo}_{param}"
            for rep in sweep(param, values, base, inst, out):
                s = rep.summary
                print(f"{algo:>4} {rep.label:<11} f1 min/avg/max {s['f1_min']:.4f}/{s['f1_avg']:.4f}/{s['f1_max']:.4f}"
                      f"  f2 {s['f2_min']:.4f}/{s['f2_avg']:.4f}/{s['f2_max']:.4f}", flush=True)


if __name__ == "__main__":
    main()
