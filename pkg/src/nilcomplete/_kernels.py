"""Fixed-width brute-force kernels used as independent oracles.

Each kernel has a numba ``@njit`` version and a pure-numpy version. The
numba path is used when numba imports and ``NILCOMPLETE_DISABLE_NUMBA`` is
unset (or ``0``); otherwise the numpy path is used. Both are exported under
explicit names for cross-checking and benchmarking.

All arithmetic is int64 modulo ``2**m`` with ``m <= 20``, so products of
two residues never overflow.
"""

from __future__ import annotations

import os

import numpy as np

MAX_KERNEL_BITS = 20

_disabled = os.environ.get("NILCOMPLETE_DISABLE_NUMBA", "0") not in ("", "0")

try:
    if _disabled:
        raise ImportError("numba disabled by NILCOMPLETE_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _check_bits(m: int):
    if not 1 <= m <= MAX_KERNEL_BITS:
        raise ValueError(f"kernel precision must be in 1..{MAX_KERNEL_BITS}")


# -- intertwiner search ----------------------------------------------------

def _intertwiners_numpy(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """All ``P`` (mod ``2**m``) with ``P @ a == b @ P``; rows are ``(p11, p12, p21, p22)``."""
    mod = 1 << m
    r = np.arange(mod, dtype=np.int64)
    p11, p12, p21, p22 = (g.ravel() for g in np.meshgrid(r, r, r, r, indexing="ij"))
    lhs = (
        p11 * a[0, 0] + p12 * a[1, 0],
        p11 * a[0, 1] + p12 * a[1, 1],
        p21 * a[0, 0] + p22 * a[1, 0],
        p21 * a[0, 1] + p22 * a[1, 1],
    )
    rhs = (
        b[0, 0] * p11 + b[0, 1] * p21,
        b[0, 0] * p12 + b[0, 1] * p22,
        b[1, 0] * p11 + b[1, 1] * p21,
        b[1, 0] * p12 + b[1, 1] * p22,
    )
    ok = np.ones(p11.shape, dtype=bool)
    for left, right in zip(lhs, rhs):
        ok &= (left - right) % mod == 0
    return np.stack([p11[ok], p12[ok], p21[ok], p22[ok]], axis=1)


def _intertwiners_loop(a, b, m):
    mod = 1 << m
    count = 0
    out = np.empty((mod * mod * 4, 4), dtype=np.int64)
    for p11 in range(mod):
        for p12 in range(mod):
            for p21 in range(mod):
                for p22 in range(mod):
                    if (p11 * a[0, 0] + p12 * a[1, 0] - b[0, 0] * p11 - b[0, 1] * p21) % mod:
                        continue
                    if (p11 * a[0, 1] + p12 * a[1, 1] - b[0, 0] * p12 - b[0, 1] * p22) % mod:
                        continue
                    if (p21 * a[0, 0] + p22 * a[1, 0] - b[1, 0] * p11 - b[1, 1] * p21) % mod:
                        continue
                    if (p21 * a[0, 1] + p22 * a[1, 1] - b[1, 0] * p12 - b[1, 1] * p22) % mod:
                        continue
                    if count == out.shape[0]:
                        bigger = np.empty((out.shape[0] * 2, 4), dtype=np.int64)
                        bigger[:count] = out
                        out = bigger
                    out[count, 0] = p11
                    out[count, 1] = p12
                    out[count, 2] = p21
                    out[count, 3] = p22
                    count += 1
    return out[:count]


# -- squares of units -------------------------------------------------------

def _unit_square_table_numpy(m: int) -> np.ndarray:
    """Boolean table over residues mod ``2**m``: is ``r`` the square of some odd residue."""
    mod = 1 << m
    odd = np.arange(1, mod, 2, dtype=np.int64)
    table = np.zeros(mod, dtype=bool)
    table[(odd * odd) % mod] = True
    return table


def _unit_square_table_loop(m):
    mod = 1 << m
    table = np.zeros(mod, dtype=np.bool_)
    for x in range(1, mod, 2):
        table[(x * x) % mod] = True
    return table


def _unit_roots_numpy(target: int, m: int) -> np.ndarray:
    """Odd ``x`` mod ``2**m`` with ``x*x == target (mod 2**m)``."""
    mod = 1 << m
    odd = np.arange(1, mod, 2, dtype=np.int64)
    return odd[(odd * odd - target) % mod == 0]


def _unit_roots_loop(target, m):
    mod = 1 << m
    out = np.empty(mod, dtype=np.int64)
    count = 0
    for x in range(1, mod, 2):
        if (x * x - target) % mod == 0:
            out[count] = x
            count += 1
    return out[:count]


if HAVE_NUMBA:
    _intertwiners_jit = njit(cache=True)(_intertwiners_loop)
    _unit_square_table_jit = njit(cache=True)(_unit_square_table_loop)
    _unit_roots_jit = njit(cache=True)(_unit_roots_loop)
else:
    _intertwiners_jit = _unit_square_table_jit = _unit_roots_jit = None


def intertwiners_numba(a, b, m: int) -> np.ndarray:
    _check_bits(m)
    if not HAVE_NUMBA:
        raise RuntimeError("numba path unavailable")
    return _intertwiners_jit(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), m)


def intertwiners_numpy(a, b, m: int) -> np.ndarray:
    _check_bits(m)
    if m > 6:
        raise ValueError("numpy intertwiner search materializes 2**(4m) rows; use m <= 6")
    return _intertwiners_numpy(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), m)


def unit_square_table_numba(m: int) -> np.ndarray:
    _check_bits(m)
    if not HAVE_NUMBA:
        raise RuntimeError("numba path unavailable")
    return _unit_square_table_jit(m)


def unit_square_table_numpy(m: int) -> np.ndarray:
    _check_bits(m)
    return _unit_square_table_numpy(m)


def unit_roots_numba(target: int, m: int) -> np.ndarray:
    _check_bits(m)
    if not HAVE_NUMBA:
        raise RuntimeError("numba path unavailable")
    return _unit_roots_jit(int(target) % (1 << m), m)


def unit_roots_numpy(target: int, m: int) -> np.ndarray:
    _check_bits(m)
    return _unit_roots_numpy(int(target) % (1 << m), m)


if HAVE_NUMBA:
    intertwiners = intertwiners_numba
    unit_square_table = unit_square_table_numba
    unit_roots = unit_roots_numba
else:
    intertwiners = intertwiners_numpy
    unit_square_table = unit_square_table_numpy
    unit_roots = unit_roots_numpy

BACKEND = "numba" if HAVE_NUMBA else "numpy"
