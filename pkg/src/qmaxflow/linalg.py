"""Rank, nullity and singular values over a prime field or complex doubles."""

from __future__ import annotations

import numpy as np

from .tensor import DEFAULT_PRIME


def rank_exact(m, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p by fraction-free elimination (first nonzero pivot)."""
    a = np.array(m, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    if a.size == 0:
        return 0
    a = a % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        below = a[r + 1:, c]
        hit = np.flatnonzero(below != 0)
        if hit.size:
            idx = r + 1 + hit
            a[idx] = (a[idx] * a[r, c] - np.multiply.outer(below[hit], a[r])) % p
        r += 1
    return r


def null_space_dim(m, p: int = DEFAULT_PRIME) -> int:
    a = np.asarray(m, dtype=object)
    return a.shape[1] - rank_exact(a, p)


def singular_values(m) -> np.ndarray:
    """Descending singular values (LAPACK SVD)."""
    a = np.asarray(m, dtype=np.complex128)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def rank_numeric(m, rtol: float = 1e-9) -> int:
    """Number of singular values above ``rtol`` times the largest."""
    if not 0 < rtol < 1:
        raise ValueError("rtol must lie in (0, 1)")
    s = singular_values(m)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))
