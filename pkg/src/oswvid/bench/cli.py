"""Command line entry point: ``oswvid gen|run|sweep|suite``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..engine.algorithms import RunConfig
from ..model import load_instance, save_instance
from .experiments import run_cell, run_suite, sweep
from .generator import GeneratorSpec, generate_instance


def _pair(text: str) -> tuple[float, float]:
    parts = [float(x) for x in text.split(",")]
    if len(parts) == 1:
        return parts[0], parts[0]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    return parts[0], parts[1]


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", choices=["pd", "la", "alns"], required=True)
    p.add_argument("--instance", required=True, type=Path)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--rs", type=float, help="default: tuned value for the algorithm")
    p.add_argument("--lambda", dest="lam", type=float, help="default: tuned value for the algorithm")
    p.add_argument("--bmr", type=float, default=0.7)
    p.add_argument("--ns", type=int, default=100)
    p.add_argument("--nbest", type=int, default=50)
    p.add_argument("--na", type=int, default=100)
    p.add_argument("--literal-bmr", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, required=True)


def _config(args) -> RunConfig:
    overrides = dict(
        seed=args.seed, max_iter=args.max_iter, bmr=args.bmr, ns=args.ns,
        nbest=args.nbest, na=args.na, literal_bmr=args.literal_bmr,
    )
    if args.rs is not None:
        overrides["rs"] = args.rs
    if args.lam is not None:
        overrides["lam"] = args.lam
    return RunConfig.tuned(args.algo, **overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oswvid", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic instance")
    g.add_argument("--family", choices=["cd", "wd"], default="wd")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tp", type=_pair, default=(0.5, 0.9), help="LO,HI required-duration ratio")
    g.add_argument("--horizon", type=int, default=10800)
    g.add_argument("--density", type=float, default=1.0)
    g.add_argument("--out", type=Path, required=True)

    r = sub.add_parser("run", help="run one algorithm on one instance")
    _add_run_options(r)

    s = sub.add_parser("sweep", help="sweep RS or lambda")
    s.add_argument("--param", choices=["rs", "lambda"], required=True)
    s.add_argument("--values", type=_floats, required=True)
    _add_run_options(s)

    u = sub.add_parser("suite", help="run a suite described by a JSON file")
    u.add_argument("--config", type=Path, required=True)
    u.add_argument("--workers", type=int, default=1)
    return parser


def _load_suite(path: Path):
    """Suite file: ``{"instances": [...], "algorithms": [...], "seeds": [...], "out": DIR, ...}``.

    Instances are file paths or generator objects (``{"family", "n", "seed", ...}``).
    Remaining keys (``max_iter``, ``rs``, ``lam``...) override the tuned configs.
    """
    spec = json.loads(path.read_text())
    instances = []
    for item in spec["instances"]:
        if isinstance(item, str):
            p = Path(item)
            instances.append(load_instance(p if p.is_absolute() else path.parent / p))
        else:
            item = dict(item)
            gs = GeneratorSpec(
                family=item.pop("family", "WD"),
                n_targets=item.pop("n"),
                seed=item.pop("seed", 0),
                **{k: tuple(v) if isinstance(v, list) else v for k, v in item.items()},
            )
            instances.append(generate_instance(gs))
    overrides = {k: v for k, v in spec.items() if k not in ("instances", "algorithms", "seeds", "out")}
    configs = [
        RunConfig.tuned(algo, seed=seed, **overrides)
        for algo in spec.get("algorithms", ["PD", "LA", "ALNS"])
        for seed in spec.get("seeds", [0])
    ]
    out = Path(spec.get("out", "suite_out"))
    if not out.is_absolute():
        out = path.parent / out
    return configs, instances, out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        if args.command == "gen":
            spec = GeneratorSpec(
                family=args.family, n_targets=args.n, seed=args.seed, tp=args.tp,
                horizon=args.horizon, density=args.density,
            )
            save_instance(generate_instance(spec), args.out)
        elif args.command == "run":
            inst = load_instance(args.instance)
            rep = run_cell(inst, _config(args), args.out, workers=args.workers)
            print(f"{rep.algorithm} {rep.instance_id}: front of {len(rep.front)} in {rep.wall_time:.1f}s")
        elif args.command == "sweep":
            inst = load_instance(args.instance)
            reps = sweep(args.param, args.values, _config(args), inst, args.out, workers=args.workers)
            for rep in reps:
                s = rep.summary
                print(f"{rep.label}: f1 [{s['f1_min']:.4f}, {s['f1_max']:.4f}] f2 [{s['f2_min']:.4f}, {s['f2_max']:.4f}]")
        elif args.command == "suite":
            configs, instances, out = _load_suite(args.config)
            reps = run_suite(configs, instances, out, workers=args.workers)
            failed = [r for r in reps if r.error]
            print(f"{len(reps)} cells, {len(failed)} failed; results in {out}")
            if failed:
                return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"oswvid: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
