"""Modular row reduction kernels.

The numba path is used unless ``HAIRYCALC_NO_NUMBA`` is set to a non-empty,
non-"0" value or numba cannot be imported.  Both paths take a dense int64
matrix with entries already reduced mod p (p < 2**31) and return its rank.
"""

import os

import numpy as np


def _numpy_rank_mod(a, p):
    a = a.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1:, c].copy()
        mask = below != 0
        if mask.any():
            a[r + 1:][mask] = (a[r + 1:][mask] - np.outer(below[mask], a[r]) % p) % p
        r += 1
    return r


def _make_numba_kernel():
    import numba as nb

    @nb.njit(cache=False)
    def _powmod(b, e, p):
        result = 1
        b = b % p
        while e > 0:
            if e & 1:
                result = (result * b) % p
            b = (b * b) % p
            e >>= 1
        return result

    @nb.njit(cache=False)
    def rank_mod(a_in, p):
        a = a_in.copy()
        rows, cols = a.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _powmod(a[r, c], p - 2, p)
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(r + 1, rows):
                f = a[i, c]
                if f != 0:
                    for j in range(c, cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            r += 1
        return r

    return rank_mod


def numba_disabled():
    flag = os.environ.get("HAIRYCALC_NO_NUMBA", "")
    return flag not in ("", "0")


_numba_kernel = None


def rank_mod(a, p, backend=None):
    """Rank of the int64 matrix ``a`` over GF(p).

    ``backend`` may be "numba", "numpy" or None (choose from the environment).
    """
    global _numba_kernel
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    if backend is None:
        backend = "numpy" if numba_disabled() else "numba"
    if backend == "numba":
        if _numba_kernel is None:
            try:
                _numba_kernel = _make_numba_kernel()
            except ImportError:
                _numba_kernel = False
        if _numba_kernel:
            return int(_numba_kernel(a, np.int64(p)))
    return _numpy_rank_mod(a, p)
