"""Dense exact linear algebra over the prime fields F_p.

Gaussian elimination on numpy int64 arrays with all arithmetic reduced
mod p.  p stays small (2, 3, 5, ...) so int64 never overflows.
"""

from __future__ import annotations

import numpy as np


def as_fp(matrix, p: int) -> np.ndarray:
    a = np.asarray(matrix, dtype=np.int64) % p
    if a.ndim != 2:
        a = a.reshape(a.shape[0], -1) if a.size else a.reshape(0, 0)
    return a


def rref(matrix, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over F_p; returns (R, pivot_columns)."""
    a = as_fp(matrix, p).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p) if p > 2 else 1
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(matrix, p: int) -> int:
    a = as_fp(matrix, p)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(matrix, p: int) -> np.ndarray:
    """Columns form a basis of {x : matrix @ x = 0 (mod p)}."""
    a = as_fp(matrix, p)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0 or a.size == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        basis[c, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-r[i, c]) % p
    return basis


def row_space_basis(matrix, p: int) -> np.ndarray:
    r, pivots = rref(matrix, p)
    return r[: len(pivots)]


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution x of a @ x = b (mod p), or None if inconsistent.

    b may be a vector or a matrix of stacked right-hand sides.
    """
    a = as_fp(a, p)
    b = np.asarray(b, dtype=np.int64) % p
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    aug = np.hstack([a, b])
    r, pivots = rref(aug, p)
    ncols = a.shape[1]
    if any(c >= ncols for c in pivots):
        return None
    x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, ncols:]
    return x[:, 0] if vector else x


def in_row_space(vec, basis_rref: np.ndarray, pivots: list[int], p: int) -> bool:
    v = np.asarray(vec, dtype=np.int64) % p
    for i, c in enumerate(pivots):
        if v[c]:
            v = (v - v[c] * basis_rref[i]) % p
    return not v.any()
