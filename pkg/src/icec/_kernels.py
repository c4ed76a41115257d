"""Hot loops for the microscopic oracle.

``orientation_sum`` evaluates

    sum_i sum_j wa[i] * wb[j] * | sum_m c[m] * a[i, m] * conj(b[j, m]) |^2

over every pair of quadrature nodes.  The numba version is a plain double
loop; the numpy version works in row blocks.  Set ``ICEC_NO_NUMBA=1`` to
force the numpy path.  Both reduce per-row partial sums in a fixed order,
so each backend is bit-reproducible run to run.
"""

from __future__ import annotations

import os

import numpy as np

_BLOCK = 512


def orientation_sum_numpy(a, wa, b, wb, c):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    wa = np.asarray(wa, dtype=np.float64)
    wb = np.asarray(wb, dtype=np.float64)
    ac = a * np.asarray(c, dtype=np.float64)
    bh = b.conj().T
    rows = np.empty(a.shape[0])
    for start in range(0, a.shape[0], _BLOCK):
        t = ac[start : start + _BLOCK] @ bh
        rows[start : start + _BLOCK] = (t.real**2 + t.imag**2) @ wb
    return float(np.sum(wa * rows))


def _numba_available() -> bool:
    if os.environ.get("ICEC_NO_NUMBA", "").strip() not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


HAVE_NUMBA = _numba_available()

if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _orientation_rows(a, b, wb, c):
        na, nm = a.shape
        nb = b.shape[0]
        rows = np.empty(na)
        for i in range(na):
            acc = 0.0
            for j in range(nb):
                tr = 0.0
                ti = 0.0
                for m in range(nm):
                    # (x + iy) * conj(u + iv) = (xu + yv) + i(yu - xv)
                    x = a[i, m].real * c[m]
                    y = a[i, m].imag * c[m]
                    u = b[j, m].real
                    v = b[j, m].imag
                    tr += x * u + y * v
                    ti += y * u - x * v
                acc += wb[j] * (tr * tr + ti * ti)
            rows[i] = acc
        return rows

    def orientation_sum_numba(a, wa, b, wb, c):
        rows = _orientation_rows(
            np.ascontiguousarray(a, dtype=np.complex128),
            np.ascontiguousarray(b, dtype=np.complex128),
            np.ascontiguousarray(wb, dtype=np.float64),
            np.ascontiguousarray(c, dtype=np.float64),
        )
        return float(np.sum(np.asarray(wa, dtype=np.float64) * rows))

    orientation_sum = orientation_sum_numba
    BACKEND = "numba"
else:
    orientation_sum_numba = None
    orientation_sum = orientation_sum_numpy
    BACKEND = "numpy"
