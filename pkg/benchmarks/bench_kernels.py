"""Time the numba kernels against the pure-numpy fallback.

The backend is fixed at import time, so each one runs in its own
interpreter:

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, timeit
import numpy as np
from semiclassical import _kernels, GridConfig, eigenvalues_fd, make_catalog_potential

repeat = int(sys.argv[1])
n = 8000
diag = 2.0 + np.linspace(-1.0, 1.0, n) ** 2
off_sq = np.full(n - 1, 1.0)
pot = make_catalog_potential("poschl_teller", {"V0": 1.0, "alpha": 1.0})

cases = {
    "sturm_count n=8000": lambda: _kernels.sturm_count(diag, off_sq, 2.5),
    "bisect 10 lowest n=8000": lambda: _kernels.bisect_lowest(diag, off_sq, 10, 0.0, 7.0, 1e-14),
    "gauss_legendre n=512": lambda: _kernels.gauss_legendre(512),
    "oracle PT 10 levels": lambda: eigenvalues_fd(pot, 0.1, GridConfig(n_points=4000), 10),
}
out = {"numba": _kernels.NUMBA_AVAILABLE}
for name, fn in cases.items():
    fn()  # warm-up (and JIT compile)
    out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
print(json.dumps(out))
"""


def measure(no_numba, repeat):
    env = dict(os.environ)
    env.pop("SEMICLASSICAL_NO_NUMBA", None)
    if no_numba:
        env["SEMICLASSICAL_NO_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True,
                          text=True, check=True)
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    fast = measure(False, args.repeat)
    slow = measure(True, args.repeat)
    if not fast.pop("numba"):
        print("numba is not installed; both columns use numpy")
    slow.pop("numba")
    width = max(map(len, fast))
    print(f"{'kernel':<{width}}  {'numba [ms]':>11}  {'numpy [ms]':>11}  {'speed-up':>8}")
    for name in fast:
        a, b = fast[name] * 1e3, slow[name] * 1e3
        print(f"{name:<{width}}  {a:11.3f}  {b:11.3f}  {b / a:8.1f}x")


if __name__ == "__main__":
    main()
