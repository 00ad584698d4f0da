"""Dense symmetric eigenvalues by cyclic Jacobi rotations."""

from __future__ import annotations

import math

import numpy as np


def symmetric_eigenvalues(M, tol: float = 1e-12, max_sweeps: int = 100) -> list[float]:
    """All eigenvalues of a symmetric matrix, ascending.

    Cyclic Jacobi: sweep over every off-diagonal pair, annihilating it with a
    plane rotation, until the off-diagonal Frobenius norm drops below ``tol``
    (relative to the matrix norm when that exceeds one).
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-9):
        raise ValueError("matrix is not symmetric")
    A = (A + A.T) / 2
    d = A.shape[0]
    threshold = tol * max(1.0, float(np.linalg.norm(A)))

    for _ in range(max_sweeps):
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off < threshold:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    # rotation angle below double resolution
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = diff / (2.0 * apq)
                # t = sgn(θ)/(|θ| + sqrt(θ² + 1)), written to avoid squaring a huge θ
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- Jᵀ A J with J the (p, q) rotation
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
    return sorted(float(v) for v in np.diag(A))
