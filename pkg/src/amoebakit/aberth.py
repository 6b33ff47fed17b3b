"""Aberth-Ehrlich simultaneous root iteration.

Coefficient arrays are lowest degree first.  ``aberth`` handles one
polynomial and raises on non-convergence; ``aberth_batch`` runs many
polynomials of equal degree at once and reports a convergence mask instead.
"""

from __future__ import annotations

import numpy as np

__all__ = ["ConvergenceError", "aberth", "aberth_batch", "cauchy_bound", "newton_polish"]

MAX_ITER = 500
STEP_TOL = 1e-14


class ConvergenceError(RuntimeError):
    pass


def cauchy_bound(coeffs) -> np.ndarray:
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    lead = c[:, -1:]
    return 1.0 + np.max(np.abs(c[:, :-1] / lead), axis=1)


def _horner(c, z):
    # c: (B, d+1) lowest first, z: (B, d)
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for k in range(c.shape[1] - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k:k + 1]
    return p, dp


def aberth_batch(coeffs, max_iter: int = MAX_ITER, tol: float = STEP_TOL):
    """Roots of every row of ``coeffs`` (shape ``(B, d+1)``, leading entries nonzero).

    Returns ``(roots, converged)`` with ``roots`` of shape ``(B, d)``.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    nb, d1 = c.shape
    d = d1 - 1
    if d < 1:
        return np.zeros((nb, 0), dtype=complex), np.ones(nb, dtype=bool)
    if np.any(c[:, -1] == 0):
        raise ValueError("leading coefficient must be nonzero")
    c = c / c[:, -1:]
    if d == 1:
        return -c[:, :1], np.ones(nb, dtype=bool)
    bound = cauchy_bound(c)
    k = np.arange(d)
    # roots of unity on the Cauchy circle, rotated off the real axis
    z = bound[:, None] * np.exp(1j * (2 * np.pi * k / d + 0.4))[None, :]
    scale = np.abs(c)
    active = np.ones((nb, d), dtype=bool)
    eye = np.eye(d, dtype=bool)[None, :, :]
    for _ in range(max_iter):
        p, dp = _horner(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
            diff = z[:, :, None] - z[:, None, :]
            inv = np.where(eye, 0.0, 1.0 / np.where(eye, 1.0, diff))
            s = inv.sum(axis=2)
            step = w / (1.0 - w * s)
        step = np.where(np.isfinite(step), step, 0.0)
        # backward-error stop: |p(z)| at rounding level
        az = np.abs(z)
        absp = np.zeros_like(az)
        for j in range(d1 - 1, -1, -1):
            absp = absp * az + scale[:, j:j + 1]
        tiny = np.abs(p) <= 4 * np.finfo(float).eps * absp
        small = np.abs(step) <= tol * np.maximum(az, 1e-300)
        z = np.where(active, z - step, z)
        active &= ~(tiny | small)
        if not active.any():
            break
    converged = ~active.any(axis=1)
    return z, converged


def newton_polish(coeffs, roots, steps: int = 3) -> np.ndarray:
    """A few Newton steps on the original (unnormalized) coefficients."""
    c = np.asarray(coeffs, dtype=complex)
    z = np.array(roots, dtype=complex)
    for _ in range(steps):
        p = np.zeros_like(z)
        dp = np.zeros_like(z)
        for k in range(len(c) - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            dz = p / dp
        ok = np.isfinite(dz) & (np.abs(dz) < 1e-3 * np.maximum(np.abs(z), 1.0))
        z = np.where(ok, z - dz, z)
    return z


def aberth(coeffs, max_iter: int = MAX_ITER, tol: float = STEP_TOL) -> np.ndarray:
    """All complex roots of one polynomial (lowest degree first)."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if len(c) == 0:
        raise ValueError("zero polynomial has no finite root set")
    if len(c) == 1:
        return np.zeros(0, dtype=complex)
    roots, ok = aberth_batch(c[None, :], max_iter=max_iter, tol=tol)
    if not ok[0]:
        raise ConvergenceError(f"Aberth iteration did not converge in {max_iter} steps")
    return newton_polish(c, roots[0])
