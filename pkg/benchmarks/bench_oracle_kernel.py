"""Time the oracle's orientation double sum: numba vs numpy.

    python3 benchmarks/bench_oracle_kernel.py [--orders 16 32 64] [--repeat 3]

The numba timing excludes the first (compiling) call.  Both backends must
agree to 1e-12 relative; the script exits non-zero otherwise.
"""

import argparse
import functools
import sys
import time

import numpy as np

from icec import _kernels
from icec.oracle import DipoleModel, orientation_nodes, rotate_components, B_COEFFS


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        times.append(time.perf_counter() - t0)
    return min(times), value


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--orders", type=int, nargs="+", default=[16, 32, 64])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    model = DipoleModel([0.3 + 0.1j, 1.0, -0.2j], [0.45 - 0.1j, 0.8, 0.15 + 0.3j], r=10.0)
    c = np.array(B_COEFFS) * model.c_s / model.r**3
    have_numba = _kernels.orientation_sum_numba is not None
    if have_numba:
        rot, w = orientation_nodes(2)
        a = rotate_components(model.d_capture[0], rot)
        _kernels.orientation_sum_numba(a, w, a, w, c)  # compile

    print(f"{'order':>5} {'nodes':>7} {'pairs':>10} {'numpy_s':>9} {'numba_s':>9} {'speedup':>8}")
    ok = True
    for order in args.orders:
        rot, w = orientation_nodes(order)
        a = rotate_components(model.d_capture[0], rot)
        b = rotate_components(model.d_ionize[0], rot)
        wb = 4 * np.pi * w
        t_np, v_np = best_of(functools.partial(_kernels.orientation_sum_numpy, a, w, b, wb, c), args.repeat)
        if have_numba:
            t_nb, v_nb = best_of(functools.partial(_kernels.orientation_sum_numba, a, w, b, wb, c), args.repeat)
            ok &= abs(v_nb / v_np - 1) <= 1e-12
            tail = f"{t_nb:9.4f} {t_np / t_nb:8.2f}"
        else:
            tail = f"{'n/a':>9} {'n/a':>8}"
        n = len(w)
        print(f"{order:5d} {n:7d} {n * n:10.3g} {t_np:9.4f} {tail}")
    if not ok:
        print("backends disagree", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
