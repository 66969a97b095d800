"""Worker-count sweep: throughput and peak memory per sweep point.

Every measurement is a fresh child process (``python -m pyfads run ...``) so
that its peak resident set size, taken from the kernel's accounting when the
child is reaped, covers exactly one run.
"""

from __future__ import annotations

import csv
import os
import statistics
import subprocess
import sys
import tempfile
import warnings
from dataclasses import astuple, dataclass
from pathlib import Path

CSV_HEADER = ("n_workers", "events_per_second", "max_rss_bytes", "wall_seconds", "events")


class BenchError(RuntimeError):
    """A sweep could not produce a trustworthy measurement."""


@dataclass
class BenchRow:
    n_workers: int
    events_per_second: float
    max_rss_bytes: int | None
    wall_seconds: float
    events: int


@dataclass
class ChildResult:
    returncode: int
    max_rss_bytes: int | None
    stats: dict
    stderr: str


def _rss_bytes(ru_maxrss):
    # Linux reports kilobytes, macOS bytes
    return int(ru_maxrss) if sys.platform == "darwin" else int(ru_maxrss) * 1024


def measure_child(cmd, env=None) -> ChildResult:
    """Run ``cmd`` to completion and report its peak RSS.

    Where ``os.wait4`` is unavailable the RSS is ``None`` and a warning is
    issued.
    """
    with tempfile.TemporaryFile() as errf:
        proc = subprocess.Popen(cmd, stdout=subprocess.DEVNULL, stderr=errf, env=env)
        if hasattr(os, "wait4"):
            _, status, usage = os.wait4(proc.pid, 0)
            proc.returncode = os.waitstatus_to_exitcode(status)
            rss = _rss_bytes(usage.ru_maxrss)
        else:
            warnings.warn("peak RSS is not available on this platform", RuntimeWarning, stacklevel=2)
            proc.wait()
            rss = None
        errf.seek(0)
        stderr = errf.read().decode(errors="replace")
    return ChildResult(proc.returncode, rss, {}, stderr)


def run_child(args, n_workers, workdir, tag):
    import json

    stats_path = Path(workdir) / f"stats-{tag}.json"
    out_path = Path(workdir) / f"out-{tag}.rio"
    cmd = [sys.executable, "-m", "pyfads", "run", str(args.config), "-nworkers", str(n_workers),
           "-output", str(out_path), "-stats-json", str(stats_path), "-log-level", args.log_level]
    if args.input:
        cmd += ["-input", str(args.input)]
    if args.nevents:
        cmd += ["-nevents", str(args.nevents)]
    if args.seed is not None:
        cmd += ["-seed", str(args.seed)]
    res = measure_child(cmd)
    if res.returncode != 0:
        raise BenchError(f"run with {n_workers} worker(s) failed:\n{res.stderr.strip()}")
    res.stats = json.loads(stats_path.read_text())
    return res


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv_header(f):
    f.write(",".join(CSV_HEADER) + "\n")
    f.flush()


def write_csv_row(f, row: BenchRow):
    f.write(",".join(_fmt(v) for v in astuple(row)) + "\n")
    f.flush()


def read_csv(path):
    rows = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        for rec in reader:
            n, rate, rss, wall, ev = rec
            rows.append(BenchRow(int(n), float(rate), int(rss) if rss else None, float(wall), int(ev)))
    return rows


def sweep(args, out, err):
    """Measure every worker count ``args.reps`` times after one discarded
    warm-up run, writing each CSV row as soon as it is known."""
    from .fwk import load_config
    from .pipeline import build

    build(load_config(args.config))  # fail fast, before any child is started
    rows, digests = [], {}
    csv_path = Path(args.csv)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory(prefix="pyfads-bench-") as workdir, open(csv_path, "w") as f:
        write_csv_header(f)
        for n in args.workers:
            if getattr(args, "warmup", True):
                run_child(args, n, workdir, f"{n}-warmup")
            reps = [run_child(args, n, workdir, f"{n}-{k}") for k in range(args.reps)]
            events = {r.stats["events"] for r in reps}
            if len(events) != 1:
                raise BenchError(f"event count changed between repetitions: {sorted(events)}")
            rss = [r.max_rss_bytes for r in reps]
            row = BenchRow(
                n,
                statistics.median(r.stats["events_per_second"] for r in reps),
                None if None in rss else int(statistics.median(rss)),
                statistics.median(r.stats["wall_seconds"] for r in reps),
                events.pop(),
            )
            write_csv_row(f, row)
            rows.append(row)
            digests[n] = sorted({r.stats["digest"] for r in reps})
            rss_txt = f"{row.max_rss_bytes / 2**20:.1f} MiB" if row.max_rss_bytes else "n/a"
            print(f"workers={n:<3d} rate={row.events_per_second:9.1f} ev/s  max_rss={rss_txt}", file=out)
    if len({r.events for r in rows}) > 1:
        raise BenchError("event counts differ between sweep points")
    all_digests = {d for ds in digests.values() for d in ds}
    audit_ok = len(all_digests) == 1
    audit_path = csv_path.with_suffix(".digests.txt")
    with open(audit_path, "w") as f:
        for n, ds in digests.items():
            f.write(f"{n} {' '.join(ds)}\n")
        f.write(f"identical {'yes' if audit_ok else 'no'}\n")
    print(f"determinism audit: {'identical' if audit_ok else 'MISMATCH'} output across sweep points", file=out)
    if args.plots:
        for p in plot_csv(csv_path, args.plots):
            print(f"wrote {p}", file=out)
    print(f"wrote {csv_path}", file=out)
    return 0 if audit_ok else 1


def plot_csv(csv_path, plot_dir):
    """Draw rate and memory versus workers as SVG.

    Output depends only on the CSV contents (fixed hash salt, no date).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = read_csv(csv_path)
    plot_dir = Path(plot_dir)
    plot_dir.mkdir(parents=True, exist_ok=True)
    xs = [r.n_workers for r in rows]
    specs = [
        ("rate_vs_workers.svg", [r.events_per_second for r in rows], "events / s", "Event processing rate"),
        ("memory_vs_workers.svg",
         [r.max_rss_bytes / 2**20 if r.max_rss_bytes is not None else float("nan") for r in rows],
         "max RSS [MiB]", "Memory usage"),
    ]
    paths = []
    with plt.rc_context({"svg.hashsalt": "pyfads", "svg.fonttype": "path"}):
        for name, ys, ylabel, title in specs:
            fig, ax = plt.subplots(figsize=(5, 3.5))
            ax.plot(xs, ys, marker="o")
            ax.set_xlabel("workers")
            ax.set_ylabel(ylabel)
            ax.set_title(title)
            ax.set_xticks(xs)
            ax.grid(True, alpha=0.3)
            fig.tight_layout()
            path = plot_dir / name
            fig.savefig(path, format="svg", metadata={"Date": None})
            plt.close(fig)
            paths.append(path)
    return paths
