#!/usr/bin/env python3
"""Compare the compiled kernel lane against the pure-numpy fallback.

Times the model right-hand side and short solves of each equation kind,
once per lane (lanes are fixed at import, so the other lane runs in a
subprocess).  Usage: python benchmarks/bench_backends.py
"""

import argparse
import os
import subprocess
import sys
import time


def run_cases(repeats: int):
    import wavesplit
    from wavesplit.families import ModelFamily
    from wavesplit.grid import PeriodicGrid
    from wavesplit.params import PhysParams
    from wavesplit.profiles import gaussian
    from wavesplit.solvers import ModelOperator, ib_solve, model_solve
    from wavesplit.spectral import transform

    grid = PeriodicGrid(64.0, 2048)
    params = PhysParams(0.04, 0.2)
    w0 = gaussian(grid)
    v0 = gaussian(grid, 0.5, 6.0)
    results = {}

    op = ModelOperator(grid, params, ModelFamily("CH"))
    wh = transform(w0)
    n_rhs = 2000
    best = min(
        _timeit(lambda: _burn_rhs(op, wh, n_rhs), repeats)
    )
    results[f"CH rhs x{n_rhs}"] = best

    for tag in ("CH", "KDV"):
        fam = ModelFamily(tag)
        best = min(_timeit(lambda: model_solve(w0, params, fam, t_end=2.0), repeats))
        results[f"{tag} solve t=2"] = best
    best = min(_timeit(lambda: ib_solve(w0, v0, params, t_end=2.0), repeats))
    results["IB solve t=2"] = best
    return wavesplit.BACKEND, results


def _burn_rhs(op, wh, n):
    for _ in range(n):
        op.rhs_hat(wh)


def _timeit(fn, repeats):
    out = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--lane", choices=("auto", "numpy"), default=None,
                        help=argparse.SUPPRESS)  # internal: subprocess mode
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if args.lane is not None:
        backend, results = run_cases(args.repeats)
        for name, best in results.items():
            print(f"{backend}\t{name}\t{best:.6f}")
        return

    rows = {}
    backends = []
    for lane in ("auto", "numpy"):
        env = dict(os.environ, WAVESPLIT_BACKEND=lane)
        proc = subprocess.run(
            [sys.executable, __file__, "--lane", lane, "--repeats", str(args.repeats)],
            env=env, capture_output=True, text=True, check=True,
        )
        for line in proc.stdout.splitlines():
            backend, name, best = line.split("\t")
            rows.setdefault(name, {})[backend] = float(best)
            if backend not in backends:
                backends.append(backend)
    if len(backends) == 1:
        print("compiled lane unavailable; only the numpy lane was timed\n")
    width = max(len(n) for n in rows)
    print(f"{'case'.ljust(width)}  " + "  ".join(f"{b:>10}" for b in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for name, per in rows.items():
        cells = "  ".join(f"{per.get(b, float('nan')):10.4f}" for b in backends)
        if len(backends) == 2 and backends[0] in per and backends[1] in per:
            cells += f"   {per[backends[1]] / per[backends[0]]:7.2f}x"
        print(f"{name.ljust(width)}  {cells}")


if __name__ == "__main__":
    main()
