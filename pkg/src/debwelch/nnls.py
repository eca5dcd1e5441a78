"""Non-negative least squares via the Lawson-Hanson active-set method.

Works on the normal equations and warm-starts from the sign pattern of the
unconstrained solution, which collapses the usual one-variable-at-a-time
outer loop to a handful of solves when most coefficients are positive in
the optimum. Falls back to the textbook iteration otherwise.
"""

from __future__ import annotations

import numpy as np


def _solve_passive(AtA: np.ndarray, Atb: np.ndarray, passive: np.ndarray) -> np.ndarray:
    """Least-squares coefficients restricted to the passive set, zero elsewhere."""
    idx = np.flatnonzero(passive)
    sub = AtA[np.ix_(idx, idx)]
    try:
        z = np.linalg.solve(sub, Atb[idx])
    except np.linalg.LinAlgError:
        z, *_ = np.linalg.lstsq(sub, Atb[idx], rcond=None)
    full = np.zeros(AtA.shape[0])
    full[idx] = z
    return full


def _restrict_to_feasible(AtA, Atb, passive, x, max_inner):
    """Shrink the passive set until its restricted solution is positive.

    Standard inner loop: step from the feasible x toward the restricted
    solution z until the first coefficient hits zero, then drop from the
    passive set every coefficient pinned at zero with z <= 0.
    """
    for _ in range(max_inner):
        if not passive.any():
            return np.zeros_like(x), passive
        z = _solve_passive(AtA, Atb, passive)
        bad = passive & (z <= 0)
        if not bad.any():
            return z, passive
        ratios = x[bad] / (x[bad] - z[bad])
        alpha = min(float(np.min(ratios)), 1.0)
        x = x + alpha * (z - x)
        hit = np.zeros_like(passive)
        hit[bad] = x[bad] <= 1e-12 * np.max(np.abs(x), initial=1e-300)
        passive = passive & ~hit
        x[~passive] = 0.0
    raise RuntimeError("nnls inner loop failed to converge")


def nnls(A: np.ndarray, b: np.ndarray, max_iter: int | None = None, gram=None, cho_factor=None):
    """Minimize ||A x - b||_2 subject to x >= 0.

    ``gram`` may carry a precomputed (A^T A, A^T b) pair, and ``cho_factor``
    a Cholesky factor of A^T A to reuse for the unconstrained shortcut.

    Returns
    -------
    x : ndarray
        The non-negative solution.
    rss : float
        Residual sum of squares at the solution.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError(f"shape mismatch: A is {A.shape}, b is {b.shape}")
    if max_iter is None:
        max_iter = 3 * n + 10

    AtA, Atb = gram if gram is not None else (A.T @ A, A.T @ b)
    scale = max(np.max(np.abs(Atb), initial=0.0), np.max(np.abs(AtA), initial=0.0))
    tol = 100 * np.finfo(float).eps * max(scale, 1e-300)

    def rss(x):
        return float(np.sum((A @ x - b) ** 2))

    # unconstrained shortcut: a feasible unconstrained optimum is the answer
    if cho_factor is not None:
        from scipy.linalg import cho_solve

        x0 = cho_solve((cho_factor, True), Atb, check_finite=False)
    else:
        x0 = _solve_passive(AtA, Atb, np.ones(n, dtype=bool))
    if np.all(x0 >= 0):
        return x0, rss(x0)

    passive = x0 > 0
    x, passive = _restrict_to_feasible(AtA, Atb, passive, np.zeros(n), 3 * n + 10)

    best = rss(x)
    for _ in range(max_iter):
        grad = Atb - AtA @ x
        candidates = ~passive & (grad > tol)
        if not candidates.any():
            break
        j = int(np.argmax(np.where(candidates, grad, -np.inf)))
        passive = passive.copy()
        passive[j] = True
        x, passive = _restrict_to_feasible(AtA, Atb, passive, x, 3 * n + 10)
        now = rss(x)
        if now > best * (1 - 1e-12):
            break  # no real progress: degenerate system, avoid cycling
        best = now
    else:
        raise RuntimeError("nnls failed to converge")

    return x, rss(x)
