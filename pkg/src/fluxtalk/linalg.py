"""Small dense linear algebra: LU with partial pivoting.

The crosstalk matrices handled here are tiny (N <= 10), so a plain
elimination with row pivoting is plenty; we keep it explicit to control the
determinant floor and to report a condition estimate alongside every
inversion.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, SingularMatrixError


def lu_factor(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Factor a square matrix in place as P A = L U with partial pivoting.

    Returns (lu, piv, sign) where lu packs L (unit diagonal, below) and U
    (on and above the diagonal), piv is the pivot row chosen at each step,
    and sign is the permutation parity (+1/-1) for the determinant.
    """
    a = np.array(a, dtype=float)
    n, m = a.shape
    if n != m:
        raise DimensionError(f"matrix must be square, got {n}x{m}")
    piv = np.arange(n)
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            raise SingularMatrixError(f"zero pivot in column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            piv[[k, p]] = piv[[p, k]]
            sign = -sign
        a[k + 1:, k] /= a[k, k]
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, piv, sign


def lu_det(lu: np.ndarray, sign: int) -> float:
    return float(sign * np.prod(np.diag(lu)))


def lu_solve(lu: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b given the packed factorization of A."""
    b = np.asarray(b, dtype=float)
    n = lu.shape[0]
    if b.shape[0] != n:
        raise DimensionError(f"rhs length {b.shape[0]} != matrix size {n}")
    x = b[piv].astype(float, copy=True)
    for k in range(1, n):  # forward, unit-diagonal L
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):  # backward
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def invert(a: np.ndarray, det_floor: float = 1e-9) -> tuple[np.ndarray, float, float]:
    """Invert a small matrix; returns (inverse, |det|, cond_1).

    cond_1 is the 1-norm condition number computed from the explicit
    inverse. Raises SingularMatrixError when |det| <= det_floor.
    """
    a = np.asarray(a, dtype=float)
    try:
        lu, piv, sign = lu_factor(a)
    except SingularMatrixError:
        raise SingularMatrixError(
            f"matrix is singular (determinant below floor {det_floor:g})") from None
    det = lu_det(lu, sign)
    if abs(det) <= det_floor:
        raise SingularMatrixError(
            f"|det| = {abs(det):.3e} is at or below the floor {det_floor:g}")
    n = a.shape[0]
    inv = np.empty((n, n))
    eye = np.eye(n)
    for j in range(n):
        inv[:, j] = lu_solve(lu, piv, eye[:, j])
    norm = np.max(np.sum(np.abs(a), axis=0))
    inv_norm = np.max(np.sum(np.abs(inv), axis=0))
    return inv, abs(det), float(norm * inv_norm)


def solve(a: np.ndarray, b: np.ndarray, det_floor: float = 1e-9) -> np.ndarray:
    """Solve A x = b with the same pivoting/floor policy as invert()."""
    a = np.asarray(a, dtype=float)
    lu, piv, sign = lu_factor(a)
    if abs(lu_det(lu, sign)) <= det_floor:
        raise SingularMatrixError(
            f"|det| at or below the floor {det_floor:g}")
    return lu_solve(lu, piv, b)
