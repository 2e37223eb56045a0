"""Enumeration kernels over R = F_q[t]/(t^d).

Elements are encoded as integers ``sum(c_i * q**i)`` with ``c_i`` the
finite-field encodings of the coefficients. The hot loop (raising every
element of a large batch to a fixed power) has a numba implementation and a
vectorized numpy fallback. Set ``SPLITRED_NUMBA=0`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly when numba is installed
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def numba_enabled() -> bool:
    return _HAVE_NUMBA and os.environ.get("SPLITRED_NUMBA", "1") != "0"


def decode(idx: np.ndarray, q: int, d: int) -> np.ndarray:
    """(N,) encodings -> (N, d) coefficient matrix."""
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty((idx.shape[0], d), dtype=np.int32)
    rest = idx.copy()
    for i in range(d):
        out[:, i] = rest % q
        rest //= q
    return out


def encode(coeffs: np.ndarray, q: int) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.int64)
    d = coeffs.shape[1]
    out = np.zeros(coeffs.shape[0], dtype=np.int64)
    for i in range(d - 1, -1, -1):
        out = out * q + coeffs[:, i]
    return out


# -- numpy fallback ---------------------------------------------------------------
def _np_mul(A, B, add, mul):
    n, d = A.shape
    out = np.zeros_like(A)
    for i in range(d):
        ai = A[:, i]
        if not ai.any():
            continue
        for j in range(d - i):
            out[:, i + j] = add[out[:, i + j], mul[ai, B[:, j]]]
    return out


def _np_power(A, m, add, mul):
    n, d = A.shape
    result = np.zeros_like(A)
    result[:, 0] = 1
    base = A.copy()
    while m:
        if m & 1:
            result = _np_mul(result, base, add, mul)
        m >>= 1
        if m:
            base = _np_mul(base, base, add, mul)
    return result


def power_numpy(idx, m: int, q: int, d: int, add, mul) -> np.ndarray:
    A = decode(idx, q, d)
    return encode(_np_power(A, m, add, mul), q)


# -- numba ------------------------------------------------------------------------
if _HAVE_NUMBA:

    @numba.njit(cache=False)
    def _nb_mul_into(a, b, out, add, mul, d):
        for k in range(d):
            out[k] = 0
        for i in range(d):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(d - i):
                out[i + j] = add[out[i + j], mul[ai, b[j]]]

    @numba.njit(cache=False)
    def _nb_power_all(idx, m, q, d, add, mul):
        n = idx.shape[0]
        res = np.empty(n, dtype=np.int64)
        a = np.empty(d, dtype=np.int32)
        r = np.empty(d, dtype=np.int32)
        tmp = np.empty(d, dtype=np.int32)
        for t in range(n):
            x = idx[t]
            for i in range(d):
                a[i] = x % q
                x //= q
                r[i] = 0
            r[0] = 1
            e = m
            while e > 0:
                if e & 1:
                    _nb_mul_into(r, a, tmp, add, mul, d)
                    for i in range(d):
                        r[i] = tmp[i]
                e >>= 1
                if e > 0:
                    _nb_mul_into(a, a, tmp, add, mul, d)
                    for i in range(d):
                        a[i] = tmp[i]
            acc = 0
            for i in range(d - 1, -1, -1):
                acc = acc * q + r[i]
            res[t] = acc
        return res


def power_numba(idx, m: int, q: int, d: int, add, mul) -> np.ndarray:
    if not _HAVE_NUMBA:  # pragma: no cover
        raise RuntimeError("numba is not available")
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    return _nb_power_all(idx, np.int64(m), np.int64(q), np.int64(d), add, mul)


def power_all(idx, m: int, q: int, d: int, add, mul) -> np.ndarray:
    """x -> x^m for every encoded element in ``idx``."""
    if numba_enabled():
        return power_numba(idx, m, q, d, add, mul)
    return power_numpy(idx, m, q, d, add, mul)


def unit_indices(q: int, d: int) -> np.ndarray:
    """Encodings of all units of F_q[t]/(t^d) (nonzero constant term)."""
    allidx = np.arange(q**d, dtype=np.int64)
    return allidx[allidx % q != 0]


def principal_indices(q: int, d: int) -> np.ndarray:
    """Encodings of 1 + t*F_q[t]/(t^d)."""
    return np.arange(q ** (d - 1), dtype=np.int64) * q + 1
