"""Hermitian positive definite matrix kernel.

Everything downstream (spectral estimates, divergences, test statistics)
manipulates small Hermitian matrices, typically 2x2 to 5x5, in bulk.  This
module wraps the few LAPACK primitives we need behind a consistent error
surface and adds the one operation the statistics actually run on: the
eigenvalues of B^{-1} A for a Hermitian A against a Hermitian positive
definite B ("relative eigenvalues", real because the pencil is definite).

Positive definiteness is decided by a Cholesky attempt whose pivots must
clear tol * trace / r, i.e. a relative floor against the mean eigenvalue
scale, so the verdict is scale free.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import NotPositiveDefinite

DEFAULT_PD_TOL = 1e-12


def as_hermitian(a, tol: float = 1e-12) -> np.ndarray:
    """Validate near-Hermitian input and return its exact Hermitian part.

    Parameters
    ----------
    a : array_like, shape (r, r)
        Matrix expected to be Hermitian up to floating point drift.
    tol : float
        Maximum allowed relative asymmetry, measured as
        max|A - A^H| / max(1, max|A|).

    Returns
    -------
    ndarray
        (A + A^H) / 2, with exactly real diagonal.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    drift = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if drift > tol * scale:
        raise ValueError(
            f"matrix is not Hermitian: max asymmetry {drift:.3e} exceeds "
            f"tolerance {tol * scale:.3e}"
        )
    return (a + a.conj().T) / 2.0


def is_positive_definite(a, tol: float = DEFAULT_PD_TOL) -> bool:
    """True iff Cholesky succeeds with every pivot above tol * trace(a) / r."""
    a = np.asarray(a)
    r = a.shape[0]
    trace = float(np.trace(a).real)
    if trace <= 0.0:
        return False
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return False
    pivots = np.real(np.diagonal(chol)) ** 2
    return bool(np.all(pivots > tol * trace / r))


def logdet_pd(a) -> float:
    """log det A via Cholesky; raises NotPositiveDefinite if A is not HPD."""
    a = np.asarray(a)
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("log-determinant needs a positive definite matrix") from exc
    return float(2.0 * np.sum(np.log(np.real(np.diagonal(chol)))))


def inverse_pd(a) -> np.ndarray:
    """Inverse of a Hermitian positive definite matrix, re-symmetrized."""
    a = np.asarray(a)
    try:
        factor = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NotPositiveDefinite("inverse needs a positive definite matrix") from exc
    inv = scipy.linalg.cho_solve(factor, np.eye(a.shape[0], dtype=a.dtype), check_finite=False)
    return (inv + inv.conj().T) / 2.0


def relative_eigenvalues(a, b) -> np.ndarray:
    """Eigenvalues of B^{-1} A in ascending order.

    A must be Hermitian, B Hermitian positive definite.  The pencil is then
    congruent to an ordinary Hermitian problem, so the eigenvalues are real;
    they are nonnegative exactly when A is positive semidefinite.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    try:
        vals = scipy.linalg.eigh(a, b, eigvals_only=True, check_finite=False)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise NotPositiveDefinite("reference matrix is not positive definite") from exc
    return np.asarray(vals, dtype=float)


def relative_eigenvalues_stack(a_stack, b_stack) -> np.ndarray:
    """Relative eigenvalues for aligned stacks of matrices, batched.

    Same result as calling relative_eigenvalues per index, but reduces the
    pencil with one batched Cholesky + triangular congruence so per-frequency
    Python overhead disappears.  Every B in the stack must be positive
    definite; callers screen indices first.

    Returns an (t, r) float array, each row ascending.
    """
    a_stack = np.asarray(a_stack)
    b_stack = np.asarray(b_stack)
    if a_stack.shape != b_stack.shape:
        raise ValueError(f"shape mismatch: {a_stack.shape} vs {b_stack.shape}")
    try:
        chol = np.linalg.cholesky(b_stack)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("a reference matrix in the stack is not positive definite") from exc
    # C = L^{-1} A L^{-H} shares the pencil's eigenvalues and is Hermitian.
    half = np.linalg.solve(chol, a_stack)
    congruent = np.linalg.solve(chol, half.conj().transpose(0, 2, 1)).conj().transpose(0, 2, 1)
    congruent = (congruent + congruent.conj().transpose(0, 2, 1)) / 2.0
    return np.linalg.eigvalsh(congruent)
