"""Compare the compiled and pure-Python kernels on identical inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--csv out.csv]

For each kernel the best of ``--repeat`` timings is reported per backend,
together with the speed-up and a check that both backends returned the same
result.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import timeit

import numpy as np

from pyfads import kernels


def clustering_inputs(n_events, n_particles, seed=1):
    rng = np.random.default_rng(seed)
    events = []
    for _ in range(n_events):
        pt = rng.uniform(1, 100, n_particles)
        eta = rng.uniform(-3, 3, n_particles)
        phi = rng.uniform(-math.pi, math.pi, n_particles)
        px, py, pz = pt * np.cos(phi), pt * np.sin(phi), pt * np.sinh(eta)
        e = np.sqrt(px**2 + py**2 + pz**2 + 0.01)
        events.append(tuple(a.tolist() for a in (px, py, pz, e)))
    return events


def track_inputs(n, seed=2):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        pt, eta, phi = rng.uniform(0.3, 50), rng.uniform(-3, 3), rng.uniform(-math.pi, math.pi)
        out.append((0.0, 0.0, 0.0, pt * math.cos(phi), pt * math.sin(phi), pt * math.sinh(eta),
                    int(rng.choice([-1, 1])), 2.0, 1.15, 3.51))
    return out


def workloads():
    events = clustering_inputs(20, 40)
    tracks = track_inputs(2000)
    return {
        "cluster (20 events x 40 particles, anti-kt)": lambda k: [k.cluster(*ev, -1.0, 0.4) for ev in events],
        "helix_exit (2000 tracks)": lambda k: [k.helix_exit(*t) for t in tracks],
        "spin (200000 iterations)": lambda k: k.spin(200_000, 12345),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--csv", help="also write the table as CSV")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the Python backend is timed", file=sys.stderr)
    rows = []
    for name, fn in workloads().items():
        times, results = {}, {}
        for b in backends:
            mod = kernels.get_backend(b)
            results[b] = fn(mod)
            times[b] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        same = all(results[b] == results[backends[0]] for b in backends)
        speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
        rows.append((name, times.get("cython", float("nan")), times["python"], speedup, same))

    print(f"{'kernel':<44s} {'cython [s]':>11s} {'python [s]':>11s} {'speed-up':>9s}  identical")
    for name, tc, tp, sp, same in rows:
        print(f"{name:<44s} {tc:11.5f} {tp:11.5f} {sp:8.1f}x  {'yes' if same else 'NO'}")
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["kernel", "cython_seconds", "python_seconds", "speedup", "identical"])
            w.writerows(rows)
    return 0 if all(r[4] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
