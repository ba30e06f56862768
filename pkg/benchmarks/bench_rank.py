"""Compare the compiled and pure-Python rank kernels on Terracini matrices.

    python3 benchmarks/bench_rank.py [--repeat 3] [--json out.json]

Each case builds the double-point condition matrix of a Segre-Veronese
embedding at a critical secant order, then times both kernels on the same
reduced matrix. Ranks must agree; the script exits 1 otherwise.
"""

import argparse
import json
import random
import sys
import time

from secantcert import exact_linalg
from secantcert.exact_linalg import PrimeField, rank_mod_p, rank_mod_p_python
from secantcert.schemes import SchemeDescriptor
from secantcert.terracini import condition_matrix, critical_z
from secantcert.variety import BundleDegree, MultiProjectiveFormat, basis_size

CASES = [
    ((1, 1), (4, 2)),
    ((1, 1, 1), (3, 3, 2)),
    ((2, 1, 1), (3, 3, 2)),
    ((1, 1, 1, 1), (3, 3, 2, 2)),
    ((2, 2), (4, 3)),
]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)

    field = PrimeField()
    rows_out, ok = [], True
    print(f"compiled kernel available: {exact_linalg.BACKEND == 'cython'}")
    print(f"{'format':>12} {'degrees':>12} {'shape':>11} {'rank':>5} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for dims, degs in CASES:
        fmt, bundle = MultiProjectiveFormat(dims), BundleDegree(degs)
        z = critical_z(basis_size(fmt, bundle), fmt.ambient_dim)[1]
        m = condition_matrix(SchemeDescriptor.double_points(z), fmt, bundle, field, random.Random(0))
        r_py, t_py = best_of(lambda: rank_mod_p_python(m, field), args.repeat)
        if exact_linalg.BACKEND == "cython":
            r_c, t_c = best_of(lambda: rank_mod_p(m, field), args.repeat)
        else:
            r_c, t_c = r_py, float("nan")
        ok &= r_c == r_py
        shape = f"{len(m)}x{len(m[0])}"
        print(f"{str(dims):>12} {str(degs):>12} {shape:>11} {r_py:5d} {t_c:11.4f} {t_py:10.4f} {t_py / t_c:7.1f}x")
        rows_out.append({"format": list(dims), "degrees": list(degs), "z": z, "shape": shape,
                         "rank": r_py, "compiled_s": t_c, "python_s": t_py})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows_out, fh, indent=2)
    if not ok:
        print("rank mismatch between kernels", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
