"""Compare the compiled and numpy implementations of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Prints the median wall time per workload and backend, the speedup, and the
largest difference between the two backends' results.
"""
import argparse
import json
import math
import statistics
import time

from fourier_uncertainty import _backend

WORKLOADS = {
    # a_k for k = 1..50 at alpha = 2.5
    "power_cos x50": lambda: [
        _backend.power_cos_integral(2.5, math.pi * (2 * k - 1), 0.0, 0.5, 1e-15, 40)[0] for k in range(1, 51)
    ],
    # odd moments used by cosine-series kernels
    "xpow_cos x40": lambda: [
        _backend.xpow_cos_integral(q, 2 * math.pi * m, 0.0, 0.5, 1e-14, 40)[0]
        for q in (1.0, 2.5, 4.0, 6.0)
        for m in range(10)
    ],
    "xpow_sin x50": lambda: [
        _backend.xpow_sin_integral(2.0, math.pi * (2 * k - 1), 0.0, 0.5, 1e-15, 40)[0] for k in range(1, 51)
    ],
    # 1F2 partial sums in the double-precision regime
    "hyp1f2 x200": lambda: [
        _backend.hyp1f2_series(1.5 + 0.01 * i, 1.5, 2.5 + 0.01 * i, -(math.pi**2) / 16 * (1 + i % 5) ** 2, 100_000)[0]
        for i in range(200)
    ],
}


def run(repeat):
    rows = []
    backends = _backend.available()
    for name, fn in WORKLOADS.items():
        times, outs = {}, {}
        for b in backends:
            _backend.use(b)
            fn()
            samples = []
            for _ in range(repeat):
                t = time.perf_counter()
                outs[b] = fn()
                samples.append(time.perf_counter() - t)
            times[b] = statistics.median(samples)
        row = {"workload": name, **{f"{b}_s": times[b] for b in backends}}
        if len(backends) == 2:
            a, b = outs[backends[0]], outs[backends[1]]
            row["speedup"] = times["python"] / times["cython"]
            row["max_abs_diff"] = max(abs(x - y) for x, y in zip(a, b))
        rows.append(row)
    _backend.use(backends[0])
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json")
    args = ap.parse_args()
    rows = run(args.repeat)
    print(f"backends: {', '.join(_backend.available())}")
    for r in rows:
        line = f"{r['workload']:<16}"
        for k, v in r.items():
            if k.endswith("_s"):
                line += f"  {k[:-2]} {v * 1e3:9.2f} ms"
        if "speedup" in r:
            line += f"  speedup {r['speedup']:6.1f}x  max|diff| {r['max_abs_diff']:.1e}"
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
