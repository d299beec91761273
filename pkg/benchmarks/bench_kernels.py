"""Compare the compiled and NumPy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Times residual/Jacobian assembly, the block-tridiagonal solve and a full
radial solve for a few system sizes and grid lengths.
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from toda_ttstar.solver import AsymptoticData, GridSpec, SolverOptions, solve_radial_toda
from toda_ttstar.solver import kernels

CASES = [
    # (n, l, m, grid points)
    (1, 0, (-0.5, 0.5), 2000),
    (3, 0, (-0.9, -0.3, 0.3, 0.9), 2000),
    (4, 1, (0.0, -1.2, -0.4, 0.4, 1.2), 4000),
    (7, 0, (-1.4, -1.0, -0.6, -0.2, 0.2, 0.6, 1.0, 1.4), 4000),
]


def _best(fn, repeat: int) -> float:
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 1 << 16:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_case(n, l, m, points, backend, repeat):
    impl = kernels.get_backend(backend)
    grid = GridSpec(points=points)
    x = grid.nodes()
    h = grid.h
    e2x = np.exp(2.0 * x)
    rng = np.random.default_rng(0)
    w = np.ascontiguousarray(rng.normal(scale=0.3, size=(points, n + 1)))
    slopes = np.asarray(m, dtype=float)
    F, D = impl.assemble(w, e2x, h, kernels.NEUMANN, slopes)
    lower, upper = kernels.off_diagonals(points, h, kernels.NEUMANN)
    data = AsymptoticData(n, l, m)
    opts = SolverOptions(backend=backend)
    return {
        "assemble": _best(lambda: impl.assemble(w, e2x, h, kernels.NEUMANN, slopes), repeat),
        "block_solve": _best(lambda: impl.block_tridiag_solve(D, lower, upper, F), repeat),
        "full_solve": _best(lambda: solve_radial_toda(data, grid, opts), repeat),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write raw timings here")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; timing the fallback only", file=sys.stderr)

    rows = []
    for n, l, m, points in CASES:
        timings = {b: bench_case(n, l, m, points, b, args.repeat) for b in backends}
        rows.append({"n": n, "l": l, "points": points, "timings": timings})

    header = f"{'n':>2} {'pts':>5} {'kernel':<12}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for row in rows:
        for kernel in ("assemble", "block_solve", "full_solve"):
            cells = [row["timings"][b][kernel] for b in backends]
            line = f"{row['n']:>2} {row['points']:>5} {kernel:<12}" + "".join(f"{t * 1e3:>10.3f}ms" for t in cells)
            if len(cells) > 1:
                line += f"{cells[1] / cells[0]:>9.1f}x"
            print(line)

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
