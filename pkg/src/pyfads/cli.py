"""``pyfads`` command line: run a pipeline, sweep worker counts, make toy input."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import rio
from .bench import BenchError
from .fwk import load_config
from .fwk.errors import FrameworkError
from .hepmc import HepMCError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s}")
    return v


def _seed(s):
    v = int(s, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _worker_list(s):
    try:
        vals = [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad worker list {s!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("worker counts must be positive")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("worker counts must be strictly increasing")
    return vals


def build_parser():
    ap = argparse.ArgumentParser(prog="pyfads", description="Concurrent fast detector simulation.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="pipeline configuration (JSON)")
        p.add_argument("-input", metavar="PATH", help="HepMC2 input file (overrides the config)")
        p.add_argument("-nevents", type=_nonneg_int, default=0, metavar="N", help="events to process (0 = all)")
        p.add_argument("-seed", type=_seed, default=None, metavar="U64", help="global seed (default: from config)")
        p.add_argument("-log-level", dest="log_level", default="warning",
                       choices=["debug", "info", "warning", "error"])

    r = sub.add_parser("run", help="run a pipeline once")
    common(r)
    r.add_argument("-nworkers", type=_positive_int, default=1, metavar="N")
    r.add_argument("-output", metavar="PATH", help="rio output file")
    r.add_argument("--sequential", action="store_true", help="use the single-context event loop")
    r.add_argument("-stats-json", dest="stats_json", metavar="PATH", help=argparse.SUPPRESS)

    b = sub.add_parser("bench", help="sweep worker counts, write CSV and SVG plots")
    common(b)
    b.add_argument("-workers", type=_worker_list, default=[1, 2, 4], metavar="LIST")
    b.add_argument("-reps", type=_positive_int, default=3, metavar="N")
    b.add_argument("-csv", default="bench.csv", metavar="PATH")
    b.add_argument("-plots", default=None, metavar="DIR")
    b.add_argument("--no-warmup", dest="warmup", action="store_false", help=argparse.SUPPRESS)

    g = sub.add_parser("gen", help="write toy HepMC2 events")
    g.add_argument("output", help="output path (.gz for gzip)")
    g.add_argument("-nevents", type=_positive_int, default=100, metavar="N")
    g.add_argument("-seed", type=_seed, default=0, metavar="U64")

    p = sub.add_parser("plot", help="redraw bench plots from a CSV")
    p.add_argument("csv")
    p.add_argument("-plots", default=".", metavar="DIR")
    return ap


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def cmd_run(args, out=sys.stdout, err=sys.stderr):
    from .pipeline import run_config

    cfg = load_config(args.config)
    stats, services = run_config(
        cfg,
        input_path=args.input,
        n_events=args.nevents,
        n_workers=args.nworkers,
        output=args.output,
        seed=args.seed,
        log_level=args.log_level,
        sequential=args.sequential,
        log_stream=err,
    )
    mode = "sequential" if args.sequential else f"{args.nworkers} worker(s)"
    print(f"events processed: {stats.events_processed}", file=out)
    print(f"events skipped:   {stats.events_skipped}", file=out)
    print(f"mode:             {mode}", file=out)
    print(f"wall time:        {stats.wall_time:.3f} s", file=out)
    print(f"rate:             {stats.events_per_second:.1f} events/s", file=out)
    for tid, t in sorted(stats.per_task_time.items(), key=lambda kv: -kv[1]):
        print(f"  {tid:<24s} {t:9.3f} s", file=out)
    digest = None
    if args.output:
        digest = file_digest(args.output)
        print(f"output:           {args.output} sha256={digest}", file=out)
    if args.stats_json:
        Path(args.stats_json).write_text(json.dumps({
            "events": stats.events_processed,
            "skipped": stats.events_skipped,
            "wall_seconds": stats.wall_time,
            "events_per_second": stats.events_per_second,
            "n_workers": stats.n_workers,
            "digest": digest,
        }))
    return EXIT_OK


def cmd_gen(args, out=sys.stdout, err=sys.stderr):
    import gzip

    from .hepmc import write_events
    from .toygen import generate_events

    opener = gzip.open if args.output.endswith(".gz") else open
    with opener(args.output, "wt") as f:
        write_events(generate_events(args.nevents, args.seed), f)
    print(f"wrote {args.nevents} events to {args.output}", file=out)
    return EXIT_OK


def cmd_bench(args, out=sys.stdout, err=sys.stderr):
    from .bench import sweep

    return sweep(args, out, err)


def cmd_plot(args, out=sys.stdout, err=sys.stderr):
    from .bench import plot_csv

    for p in plot_csv(args.csv, args.plots):
        print(f"wrote {p}", file=out)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "bench": cmd_bench, "gen": cmd_gen, "plot": cmd_plot}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out, err)
    except (FrameworkError, HepMCError, rio.RioError, BenchError, ValueError) as exc:
        print(f"pyfads {args.command}: error: {exc}", file=err)
        return EXIT_FAIL
    except OSError as exc:
        where = f" {exc.filename}" if exc.filename else ""
        print(f"pyfads {args.command}: error:{where}: {exc.strerror or exc}", file=err)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
