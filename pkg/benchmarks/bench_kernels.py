"""Compare the compiled stencil kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 1001 10001 100001] [--repeat 7]

Prints the best-of-repeat time per call for each backend and the speedup.
"""
import argparse
import importlib
import timeit

import numpy as np

from diraczero.discrete import _kernels_py


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1001, 10001, 100001, 1000001])
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args(argv)

    try:
        compiled = importlib.import_module("diraczero.discrete._kernels")
    except ImportError:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation` first")
        return 1

    rng = np.random.default_rng(0)
    print(f"{'kernel':<12}{'n':>9}{'bc':>10}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>9}")
    for n in args.sizes:
        psi = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
        w = np.cosh(np.linspace(-5, 5, n))
        for periodic in (False, True):
            call = (psi, w, 10.0 / (n - 1), 0.3, 1.5, 2.5, periodic)
            assert np.allclose(compiled.apply_dirac(*call), _kernels_py.apply_dirac(*call), rtol=0, atol=1e-12)
            times = []
            for mod in (_kernels_py, compiled):
                number = max(1, 200_000 // n)
                best = min(timeit.repeat(lambda: mod.apply_dirac(*call), number=number, repeat=args.repeat))
                times.append(1e3 * best / number)
            bc = "periodic" if periodic else "dirichlet"
            print(f"{'apply_dirac':<12}{n:>9}{bc:>10}{times[0]:>14.4f}{times[1]:>14.4f}{times[0] / times[1]:>9.2f}")
        times = []
        for mod in (_kernels_py, compiled):
            number = max(1, 200_000 // n)
            times.append(1e3 * min(timeit.repeat(lambda: mod.row_norms(psi), number=number, repeat=args.repeat)) / number)
        print(f"{'row_norms':<12}{n:>9}{'':>10}{times[0]:>14.4f}{times[1]:>14.4f}{times[0] / times[1]:>9.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
