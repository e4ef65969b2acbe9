"""Command-line harness.

Subcommands: compute (one permanent/determinant), growth (trace ensembles),
verify (the check suite), ensemble (growth-rate dataset).  All randomness
flows from --seed; trial t uses stream t, so reruns are byte-identical.
Primary outputs (traces, CSV, reports) carry no timestamps; each command
also writes a manifest JSON holding the full configuration, the code
version, the output paths and the wall-clock time of the run.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .checks import (
    check_alon,
    check_growth_rate,
    check_littlewood_offord,
    check_maintain_grow_events,
    check_many_children,
    check_parent_child,
    check_second_moment,
    check_singularity,
    default_suite,
    suite_passed,
    summary_lines,
)
from .engines import determinant_exact, permanent_mod, permanent_naive, permanent_ryser
from .growth import ProcessConfig, run_growth, trace_header, trace_level_dicts
from .lattice import DEFAULT_MAX_N, build_lattice, dump_lattice_csv
from .matrices import CapError, SignMatrix, from_text, sample_sign_matrix
from .rng import RngStream

ENSEMBLE_MAX_N = 22


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("PERMLAB_THREADS", "1")))
    except ValueError:
        return 1


def _write_manifest(path: Path, subcommand: str, config: dict, seed: int | None,
                    outputs: list[str]) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": config,
        "seed": seed,
        "version": __version__,
        "outputs": outputs,
        "created": datetime.now(timezone.utc).isoformat(),
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _load_matrix(args) -> SignMatrix:
    if args.matrix is not None:
        return from_text(Path(args.matrix).read_text())
    if args.random is None:
        raise SystemExit("either a matrix file or --random N is required")
    return sample_sign_matrix(args.random, RngStream(args.seed, args.stream))


def cmd_compute(args) -> int:
    matrix = _load_matrix(args)
    if args.mod is not None:
        print(permanent_mod(matrix, args.mod))
        return 0
    if args.engine == "naive":
        per = permanent_naive(matrix)
    elif args.engine == "ryser":
        per = permanent_ryser(matrix)
    else:
        table = build_lattice(matrix, max_n=args.unsafe_max_n or DEFAULT_MAX_N)
        per = table.top_value()
        if args.dump_lattice:
            dump_lattice_csv(table, args.dump_lattice)
    print(per)
    if args.det:
        print(determinant_exact(matrix))
    return 0


def _growth_trial(payload: tuple) -> tuple[int, dict, list[dict], bool, dict]:
    seed, trial, n, cfg, max_n = payload
    stream = RngStream(seed, trial)
    matrix = sample_sign_matrix(n, stream)
    trace = run_growth(matrix, cfg, max_n=max_n)
    header = trace_header(trace, seed=seed, stream=trial)
    final = trace.final
    summary = {
        "trial": trial,
        "successful": int(trace.successful),
        "N_k1": final.tracked,
        "W_k1": final.potential,
        **{f"type_{t}": c for t, c in trace.step_type_counts().items()},
    }
    return trial, header, trace_level_dicts(trace), trace.successful, summary


def cmd_growth(args) -> int:
    cfg = ProcessConfig(eps=args.eps, eps_prime=args.eps_prime, c=args.c)
    max_n = args.unsafe_max_n or DEFAULT_MAX_N
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payloads = [(args.seed, t, args.n, cfg, max_n) for t in range(args.trials)]
    threads = _thread_count()
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_growth_trial, payloads))
    else:
        results = [_growth_trial(p) for p in payloads]
    results.sort(key=lambda r: r[0])

    summary_rows = []
    trace_paths = []
    for trial, header, levels, _ok, summary in results:
        path = out / f"trace_{trial:05d}.jsonl"
        with open(path, "w") as fh:
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for row in levels:
                fh.write(json.dumps(row, sort_keys=True) + "\n")
        trace_paths.append(str(path))
        summary_rows.append(summary)

    summary_path = out / "summary.csv"
    fields = ["trial", "successful", "N_k1", "W_k1",
              "type_I", "type_II", "type_III", "type_IV", "type_V"]
    with open(summary_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(summary_rows)

    _write_manifest(
        out / "manifest.json", "growth",
        {"n": args.n, "trials": args.trials, **cfg.describe(args.n)},
        args.seed, trace_paths + [str(summary_path)],
    )
    successes = sum(r["successful"] for r in summary_rows)
    print(f"{args.trials} runs, {successes} successful ({successes / args.trials:.3f})")
    return 0


_CHECK_BUILDERS = {
    "second_moment": lambda a, rng: check_second_moment(
        a.n or 3, mode=a.mode, trials=a.trials or 2000, rng=rng),
    "alon": lambda a, rng: check_alon(a.n or 3, trials=a.trials or 1000, rng=rng),
    "parent_child": lambda a, rng: check_parent_child(a.trials or 10_000, a.n or 10, rng=rng),
    "many_children": lambda a, rng: check_many_children(
        a.trials or 10_000, a.n or 14, a.i_size, rng=rng),
    "littlewood_offord": lambda a, rng: check_littlewood_offord(
        [1.0] * a.m, 1.0, x=a.x, mode=a.mode, trials=a.trials or 20_000, rng=rng),
    "growth_rate": lambda a, rng: check_growth_rate([a.n or 16], a.trials or 500, rng=rng),
    "singularity": lambda a, rng: check_singularity(
        a.n or 3, mode=a.mode, trials=a.trials or 2000, rng=rng),
    "maintain_grow": lambda a, rng: check_maintain_grow_events(
        a.n or 14, a.trials or 300, cfg=ProcessConfig(eps=0.3, c=0.5), rng=rng),
}


def cmd_verify(args) -> int:
    rng = RngStream(args.seed)
    if args.suite == "all":
        reports = default_suite(args.seed)
    elif args.suite in _CHECK_BUILDERS:
        reports = [_CHECK_BUILDERS[args.suite](args, rng)]
    else:
        raise SystemExit(
            f"unknown check {args.suite!r}; known: all, {', '.join(sorted(_CHECK_BUILDERS))}"
        )
    if args.out:
        out = Path(args.out)
        with open(out, "w") as fh:
            for r in reports:
                fh.write(r.to_json(stable=True) + "\n")
        _write_manifest(
            out.with_suffix(out.suffix + ".manifest.json"), "verify",
            {"suite": args.suite, "n": args.n, "trials": args.trials, "mode": args.mode},
            args.seed, [str(out)],
        )
    for line in summary_lines(reports):
        print(line)
    ok = suite_passed(reports)
    print("suite:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def _ensemble_trial(payload: tuple) -> tuple[int, int, str, str]:
    seed, n, trial, max_n = payload
    matrix = sample_sign_matrix(n, RngStream(seed, (n << 32) | trial))
    per = build_lattice(matrix, max_n=max_n).top_value()
    det = determinant_exact(matrix)
    per_log = "ZERO" if per == 0 else f"{math.log(abs(per)):.10g}"
    det_log = "ZERO" if det == 0 else f"{math.log(abs(det)):.10g}"
    return n, trial, per_log, det_log


def cmd_ensemble(args) -> int:
    n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    cap = args.unsafe_max_n or ENSEMBLE_MAX_N
    for n in n_list:
        if n > cap:
            raise SystemExit(
                f"ensemble is capped at n <= {cap}, got n={n}"
                " (raise with --unsafe-max-n at your own memory cost)"
            )
    payloads = [(args.seed, n, t, cap) for n in n_list for t in range(args.trials)]
    threads = _thread_count()
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_ensemble_trial, payloads))
    else:
        rows = [_ensemble_trial(p) for p in payloads]
    rows.sort(key=lambda r: (r[0], r[1]))
    out = Path(args.out)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "trial", "per_abs_log", "det_abs_log"])
        writer.writerows(rows)
    _write_manifest(
        out.with_suffix(out.suffix + ".manifest.json"), "ensemble",
        {"n_list": n_list, "trials": args.trials}, args.seed, [str(out)],
    )
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="permanent/determinant of one matrix")
    p.add_argument("matrix", nargs="?", help="matrix text file (omit with --random)")
    p.add_argument("--random", type=int, metavar="N", help="sample a random N x N matrix")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--engine", choices=["naive", "ryser", "lattice"], default="ryser")
    p.add_argument("--det", action="store_true", help="also print the determinant")
    p.add_argument("--mod", type=int, help="print the permanent residue mod M")
    p.add_argument("--dump-lattice", metavar="CSV", help="dump the minor lattice (engine=lattice, n <= 12)")
    p.add_argument("--unsafe-max-n", type=int, default=None, dest="unsafe_max_n",
                   help="raise the n <= 22 lattice cap (memory grows as 2**n)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("growth", help="growth-run ensemble with JSONL traces")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--eps-prime", type=float, default=None, dest="eps_prime")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--unsafe-max-n", type=int, default=None, dest="unsafe_max_n",
                   help="raise the n <= 22 lattice cap (memory grows as 2**n)")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--suite", default="all")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["exact", "monte_carlo"], default="exact")
    p.add_argument("--m", type=int, default=2, help="vector length for littlewood_offord")
    p.add_argument("--x", type=float, default=1.0, help="tail radius multiplier")
    p.add_argument("--i-size", type=int, default=6, dest="i_size")
    p.add_argument("--out", default=None, help="JSON-lines report file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ensemble", help="growth-rate dataset over several sizes")
    p.add_argument("--n-list", required=True, dest="n_list", help="comma-separated sizes")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--unsafe-max-n", type=int, default=None, dest="unsafe_max_n",
                   help="raise the n <= 22 lattice cap (memory grows as 2**n)")
    p.set_defaults(func=cmd_ensemble)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
