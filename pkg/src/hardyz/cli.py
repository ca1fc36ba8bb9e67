"""Command-line interface.

Subcommands: z, gram, table1, tableai, rsi, bench.  Every invocation that
writes files also writes a manifest JSON next to them carrying a shared
run id, the argv, the configuration snapshot and timestamps; re-running
with the manifest's parameters reproduces the numeric outputs bit for bit
(timing fields excluded).

Flat config files (`key = value`, `#` comments) are accepted via --config;
command-line flags override file values.  The worker cap falls back to the
Z_WORKERS environment variable.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
import uuid
from dataclasses import asdict

from . import __version__
from .bench import measure_omega, realized_saving
from .errors import NumericError, RangeError
from .hybrid import cutoffs, error_sweep, hybrid_z, practical_bound
from .newsum import z_newsum
from .presets import PRESETS, run_preset
from .rs import rs_z
from .rsi import rsi_asymptotic, rsi_numeric
from .theta import gram_point, theta


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def load_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _manifest(args, params: dict, outputs: list, started: float) -> dict:
    return {
        "run_id": uuid.uuid4().hex,
        "command_line": " ".join(sys.argv),
        "config": params,
        "software_version": __version__,
        "started_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "finished_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "outputs": outputs,
    }


def _write_manifest(path: str, manifest: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(args, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for k, v in payload.items():
            print(f"{k} = {v}")


def cmd_z(args) -> int:
    t = args.t
    try:
        if args.method == "rs":
            ev = rs_z(t, workers=args.workers)
            z = ev.z
            counts = {"rs_terms": ev.n_t}
            budget = ev.remainder_bound
        elif args.method == "newsum":
            z = z_newsum(t, k_policy=args.k_policy, workers=args.workers)
            counts = {}
            budget = float("nan")
        else:
            cfg = cutoffs(t, args.omega, args.rounding)
            ev = hybrid_z(t, config=cfg, workers=args.workers)
            z = ev.z
            counts = {"rs_terms": ev.rs_terms, "new_terms": ev.new_terms,
                      "transition_used": ev.transition_used}
            budget = ev.error_budget
    except (RangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    th = theta(t)
    payload = {
        "t": t,
        "method": args.method,
        "Z": z,
        "zeta_re": z * math.cos(th),
        "zeta_im": -z * math.sin(th),
        "error_budget": budget,
        **counts,
    }
    _emit(args, payload)
    return 0


def cmd_gram(args) -> int:
    if args.index is None and args.range is None:
        print("error: provide --index or --range", file=sys.stderr)
        return 2
    if args.index is not None:
        _emit(args, {"n": args.index, "gram_point": float(gram_point(args.index))})
        return 0
    n0, n1 = args.range
    import numpy as np

    ns = np.arange(n0, n1 + 1)
    ts = gram_point(ns)
    if args.json:
        for n, t in zip(ns, ts):
            print(json.dumps({"n": int(n), "gram_point": float(t)}))
    else:
        for n, t in zip(ns, ts):
            print(f"{n} {_fmt(float(t))}")
    return 0


def cmd_table1(args) -> int:
    started = time.time()
    start_gram = args.start_gram
    if start_gram is None:
        # first Gram index with g_n >= t_start
        n = int(math.ceil(theta(args.t_start) / math.pi))
        while gram_point(n) < args.t_start:
            n += 1
        start_gram = n
    stats, rec = error_sweep(start_gram, args.count, omega=args.omega,
                             rounding=args.rounding, workers=args.workers,
                             collect=True)
    params = {"start_gram": start_gram, "count": args.count, "omega": args.omega,
              "rounding": args.rounding}
    manifest = _manifest(args, params, [args.out] if args.out else [], started)
    if args.out:
        manifest_path = args.out + ".manifest.json"
        _write_manifest(manifest_path, manifest)
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(f"# run_id={manifest['run_id']} manifest={os.path.basename(manifest_path)}\n")
            w = csv.writer(fh)
            w.writerow(["gram_index", "t", "rs_tail", "new_series_value",
                        "transition_flag", "error", "bound", "error_hex"])
            for i in range(args.count):
                w.writerow([
                    int(rec.gram_index[i]), _fmt(float(rec.t[i])),
                    _fmt(float(rec.rs_tail[i])), _fmt(float(rec.new_series_value[i])),
                    int(rec.transition_flag[i]), _fmt(float(rec.error[i])),
                    _fmt(stats.bound), float(rec.error[i]).hex(),
                ])
            w.writerow(["stats", stats.count, stats.mean_abs_error,
                        stats.mean_exponent_s, stats.max_abs_error,
                        stats.max_at_gram, stats.bound, stats.violations])
    _emit(args, {"run_id": manifest["run_id"], **asdict(stats)})
    return 0


def cmd_tableai(args) -> int:
    try:
        res = run_preset(args.preset, workers=args.workers)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    _emit(args, asdict(res))
    return 0


def cmd_rsi(args) -> int:
    rows = []
    for t in args.t:
        n = rsi_numeric(t)
        a = rsi_asymptotic(t)
        rel = abs(n.value - a.value) / abs(n.value)
        rows.append({
            "t": t,
            "numeric_re": n.value.real, "numeric_im": n.value.imag,
            "asymptotic_re": a.value.real, "asymptotic_im": a.value.imag,
            "relative_error": rel, "numeric_est_err": n.est_err,
        })
    for row in rows:
        if args.json:
            print(json.dumps(row, sort_keys=True))
        else:
            print(f"t={row['t']:g}: numeric=({_fmt(row['numeric_re'])}, {_fmt(row['numeric_im'])}) "
                  f"asymptotic=({_fmt(row['asymptotic_re'])}, {_fmt(row['asymptotic_im'])}) "
                  f"relerr={row['relative_error']:.3e}")
    return 0


def cmd_bench(args) -> int:
    started = time.time()
    m = measure_omega(args.t, term_budget=args.budget, reps=args.reps)
    r = realized_saving(args.t, m)
    payload = {
        "omega": m.omega,
        "rs_ns_per_term": m.rs_ns_per_term,
        "new_ns_per_term": m.new_ns_per_term,
        "dispersion": m.dispersion,
        "reps": m.reps,
        "predicted_saving_pct": r.predicted_pct,
        "realized_saving_pct": r.realized_pct,
        "elapsed_s": time.time() - started,
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


# builtin defaults resolved after the config file (flag > file > builtin)
_DEFAULTS = {
    "z": {"omega": 1.0, "rounding": "nearest", "k_policy": "double_min"},
    "table1": {"omega": 1.0, "rounding": "floor_ceil", "count": 10000},
    "bench": {"budget": 1_000_000, "reps": 7},
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--workers", type=int, default=None,
                        help="worker cap (default: Z_WORKERS env or 1)")
    common.add_argument("--json", action="store_true", help="emit JSON lines")

    ap = argparse.ArgumentParser(prog="hardyz", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    z = sub.add_parser("z", parents=[common], help="evaluate Z(t)")
    z.add_argument("t", type=float)
    z.add_argument("--method", choices=["rs", "newsum", "hybrid"], default="rs")
    z.add_argument("--omega", type=float, default=None)
    z.add_argument("--rounding", choices=["floor_ceil", "nearest"], default=None)
    z.add_argument("--k-policy", choices=["double_min", "paper_0_35t"],
                   default=None, dest="k_policy")
    z.set_defaults(func=cmd_z)

    g = sub.add_parser("gram", parents=[common], help="Gram points")
    g.add_argument("--index", type=int)
    g.add_argument("--range", type=int, nargs=2, metavar=("N0", "N1"))
    g.set_defaults(func=cmd_gram)

    t1 = sub.add_parser("table1", parents=[common],
                        help="tail-vs-series error sweep over Gram points")
    t1.add_argument("--t-start", type=float, default=1.0e6, dest="t_start")
    t1.add_argument("--start-gram", type=int, default=None, dest="start_gram")
    t1.add_argument("--count", type=int, default=None)
    t1.add_argument("--omega", type=float, default=None)
    t1.add_argument("--rounding", choices=["floor_ceil", "nearest"], default=None)
    t1.add_argument("--out", help="CSV output path")
    t1.set_defaults(func=cmd_table1)

    ta = sub.add_parser("tableai", parents=[common], help="reference series evaluations")
    ta.add_argument("--preset", required=True)
    ta.set_defaults(func=cmd_tableai)

    ri = sub.add_parser("rsi", parents=[common], help="integral vs asymptotic comparison")
    ri.add_argument("--t", type=lambda s: [float(x) for x in s.split(",")],
                    default=[10.0, 20.0, 30.0, 40.0, 50.0])
    ri.set_defaults(func=cmd_rsi)

    be = sub.add_parser("bench", parents=[common], help="per-term cost ratio and savings")
    be.add_argument("--t", type=float, default=1.0e8)
    be.add_argument("--budget", type=int, default=None)
    be.add_argument("--reps", type=int, default=None)
    be.set_defaults(func=cmd_bench)
    return ap


_CASTS = {"omega": float, "count": int, "budget": int, "reps": int,
          "rounding": str, "k_policy": str}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    file_cfg = load_config(args.config) if args.config else {}
    if args.workers is None:
        args.workers = int(file_cfg.get("workers", os.environ.get("Z_WORKERS", "1")))
    for key, builtin in _DEFAULTS.get(args.command, {}).items():
        if getattr(args, key, None) is None:
            value = file_cfg.get(key, builtin)
            setattr(args, key, _CASTS[key](value))
    try:
        return args.func(args)
    except (RangeError, NumericError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
