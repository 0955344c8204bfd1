"""Compare the compiled and pure-Python kernel backends.

Micro level: graded multiplication / differentiation of dense random series.
Pipeline level: deriving the PDE system of the golden model, each backend in a
fresh interpreter (the backend is chosen once at import).

    python3 benchmarks/bench_kernels.py [--degree 8] [--repeat 5]
"""

from __future__ import annotations

import argparse
import itertools
import os
import random
import subprocess
import sys
import timeit

import gmpy2

from paracr._kernels import _pykernels

try:
    from paracr._kernels import _ckernels
except ImportError:
    _ckernels = None

BITS = 8


def dense_graded(nvars: int, degree: int, rng: random.Random) -> list:
    graded = [dict() for _ in range(degree + 1)]
    for exps in itertools.product(range(degree + 1), repeat=nvars):
        d = sum(exps)
        if d <= degree:
            key = sum(e << (BITS * i) for i, e in enumerate(exps))
            graded[d][key] = gmpy2.mpq(rng.randint(-9, 9) or 1, rng.randint(1, 5))
    return graded


PIPELINE = (
    "import time, paracr;"
    "from paracr.generators import named_model;"
    "from paracr.pde import derive_pde;"
    "M = named_model('golden', {degree});"
    "t = time.perf_counter();"
    "[derive_pde(M) for _ in range({repeat})];"
    "print(paracr.KERNEL_BACKEND, (time.perf_counter() - t) / {repeat})"
)


def pipeline_time(pure: bool, degree: int, repeat: int) -> tuple[str, float]:
    env = dict(os.environ)
    if pure:
        env["PARACR_PURE_PYTHON"] = "1"
    else:
        env.pop("PARACR_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", PIPELINE.format(degree=degree, repeat=repeat)],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.split()
    return out[0], float(out[1])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--degree", type=int, default=8)
    parser.add_argument("--nvars", type=int, default=5)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    rng = random.Random(0)
    a = dense_graded(args.nvars, args.degree, rng)
    b = dense_graded(args.nvars, args.degree, rng)
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled kernels not built; only the pure-Python backend is timed")
    else:
        same = _pykernels.mul_graded(a, b, args.degree) == _ckernels.mul_graded(a, b, args.degree)
        print(f"backends agree on the product: {same}")

    print(f"dense series: {args.nvars} variables, degree {args.degree}, "
          f"{sum(len(h) for h in a)} terms each")
    timings = {}
    for name, mod in backends:
        mul = min(timeit.repeat(lambda: mod.mul_graded(a, b, args.degree), number=1, repeat=args.repeat))
        dif = min(timeit.repeat(lambda: mod.diff_graded(a, 0), number=20, repeat=args.repeat)) / 20
        timings[name] = (mul, dif)
        print(f"  {name:7s} mul {mul * 1e3:9.2f} ms   diff {dif * 1e3:8.3f} ms")
    if len(timings) == 2:
        print(f"  speed-up mul x{timings['python'][0] / timings['cython'][0]:.2f}, "
              f"diff x{timings['python'][1] / timings['cython'][1]:.2f}")

    print(f"derive_pde on the golden model (truncation {args.degree}):")
    results = [pipeline_time(True, args.degree, args.repeat)]
    if _ckernels is not None:
        results.append(pipeline_time(False, args.degree, args.repeat))
    for name, seconds in results:
        print(f"  {name:7s} {seconds * 1e3:9.1f} ms")
    if len(results) == 2:
        print(f"  speed-up x{results[0][1] / results[1][1]:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
