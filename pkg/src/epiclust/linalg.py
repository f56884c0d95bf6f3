"""Dense symmetric eigendecomposition via cyclic Jacobi rotations.

Sized for graph Laplacians of region-affinity graphs (tens of nodes), where
O(n^3) per sweep is negligible and the method is unconditionally stable and
fully deterministic. Eigenvalues come back ascending so that index 1 is the
algebraic-connectivity position by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class JacobiConvergenceError(RuntimeError):
    """Sweep budget exhausted before the off-diagonal mass vanished."""


def check_symmetric(a, tol: float = 1e-12) -> np.ndarray:
    """Return ``a`` as a float array, raising if it is not square symmetric."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    gap = float(np.abs(a - a.T).max(initial=0.0))
    if gap > tol * scale:
        raise ValueError(f"matrix is not symmetric: max |a - a.T| = {gap:.3e}")
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with orthonormal eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 100) -> EigenDecomposition:
    """Diagonalise a real symmetric matrix by cyclic Jacobi rotations.

    ``tol`` is relative: sweeps stop once the off-diagonal Frobenius norm
    falls below ``tol`` times the Frobenius norm of the input. Raises
    JacobiConvergenceError (reporting the residual) if ``max_sweeps`` cyclic
    passes are not enough.
    """
    a = check_symmetric(a)
    n = a.shape[0]
    w = (a + a.T) / 2.0
    v = np.eye(n)
    norm = float(np.linalg.norm(w))
    if n == 1 or norm == 0.0:
        return _sorted(np.diag(w).copy(), v)

    for _ in range(max_sweeps):
        if _offdiag_norm(w) <= tol * norm:
            return _sorted(np.diag(w).copy(), v)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                if abs(apq) < 1e-300:  # negligible; zeroing avoids overflow below
                    w[p, q] = w[q, p] = 0.0
                    continue
                # rotation angle that zeroes w[p, q]
                theta = (w[q, q] - w[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                _rotate(w, v, p, q, c, s)
    if _offdiag_norm(w) <= tol * norm:
        return _sorted(np.diag(w).copy(), v)
    raise JacobiConvergenceError(
        f"no convergence in {max_sweeps} sweeps; "
        f"residual off-diagonal norm {_offdiag_norm(w):.3e}"
    )


def _offdiag_norm(w) -> float:
    # summing only off-diagonal squares avoids the cancellation of
    # norm(w)^2 - norm(diag)^2
    off = w.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _rotate(w, v, p, q, c, s):
    # w <- J^T w J and v <- v J for the Givens rotation J in the (p, q) plane
    wp, wq = w[:, p].copy(), w[:, q].copy()
    w[:, p] = c * wp - s * wq
    w[:, q] = s * wp + c * wq
    wp, wq = w[p, :].copy(), w[q, :].copy()
    w[p, :] = c * wp - s * wq
    w[q, :] = s * wp + c * wq
    w[p, q] = 0.0
    w[q, p] = 0.0
    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq


def _sorted(eigenvalues, eigenvectors) -> EigenDecomposition:
    order = np.argsort(eigenvalues, kind="stable")
    vals = np.ascontiguousarray(eigenvalues[order])
    vecs = np.ascontiguousarray(eigenvectors[:, order])
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return EigenDecomposition(vals, vecs)
