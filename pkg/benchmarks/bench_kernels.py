"""Compare the compiled and pure-Python lifting kernels.

Only the dense lifting calls the kernels; min-distance lifting is pure Python.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

from divcw.engine import diverse_solve, kernels
from divcw.graph import gen_complete_bipartite, gen_path
from divcw.measures import divstar, divsum_as_venn
from divcw.problems import ds_core, vc_core

CASES = [
    ("path10 vc:6,ds:4 sum", gen_path(10), [(vc_core, 6), (ds_core, 4)], divsum_as_venn(2)),
    ("path9 vc:5 x3 star", gen_path(9), [(vc_core, 5)] * 3, divstar(3)),
    ("biclique3x4 vc:4,ds:3,vc:4 sum", gen_complete_bipartite(3, 4),
     [(vc_core, 4), (ds_core, 3), (vc_core, 4)], divsum_as_venn(3)),
]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':40s}" + "".join(f"{b:>12s}" for b in backends) + "   speedup")
    for label, D, makers, f in CASES:
        cores = [make(k, D) for make, k in makers]
        for name, job in [(label, lambda: diverse_solve(cores, f).best_value)]:
            row, values = [], set()
            for b in backends:
                kernels.use_backend(b)
                t, v = best_time(job, args.repeat)
                row.append(t)
                values.add(v)
            assert len(values) == 1, f"backends disagree on {name}"
            speed = f"{row[1] / row[0]:8.1f}x" if len(row) == 2 and row[0] > 0 else ""
            print(f"{name:40s}" + "".join(f"{t * 1000:10.1f}ms" for t in row) + f"  {speed}")
    kernels.use_backend(backends[0])


if __name__ == "__main__":
    main()
