"""Dense linear-algebra kernels used throughout the package.

Everything here is SVD- or Schur-based and tolerance-aware: ranks are
counted against a relative singular-value threshold, null/range bases are
orthonormal, and the Riccati solver returns the stabilizing solution via
the ordered Schur form of the Hamiltonian matrix (so it copes with
stabilizable-but-uncontrollable pairs, including B = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import (
    NoStabilizingSolutionError,
    NumericalFailureError,
    RankDeficiencyError,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "matrix_rank",
    "null_basis",
    "range_basis",
    "right_inverse",
    "eig_with_left",
    "min_singular_value",
    "solve_care",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every rank/zero decision.

    Parameters
    ----------
    rank_rel : float
        Relative singular-value threshold: sigma is counted toward the
        rank when sigma > rank_rel * sigma_max * max(rows, cols).
    pbh : float
        Absolute smallest-singular-value threshold certifying a rank
        drop in pencil evaluations (PBH tests, zero certificates).
    zero_match : float
        Absolute distance below which two complex zeros are considered
        the same zero.
    care_residual : float
        Relative residual bound accepted from the Riccati solver.
    """

    rank_rel: float = 1e-9
    pbh: float = 1e-7
    zero_match: float = 1e-6
    care_residual: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "pbh", "zero_match", "care_residual"):
            value = getattr(self, name)
            if not (value > 0.0):
                raise ValueError(f"tolerance {name!r} must be strictly positive, got {value}")


DEFAULT_TOL = Tolerances()


def as_matrix(a, name="matrix", dtype=float):
    """Validate and return ``a`` as a finite 2-D ndarray."""
    M = np.asarray(a, dtype=dtype)
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {M.shape}")
    if M.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    return M


def _svdvals(M):
    try:
        return np.linalg.svd(M, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD failed to converge: {exc}") from exc


def _rank_threshold(sigma, shape, tol):
    if sigma.size == 0:
        return 0.0
    return tol.rank_rel * sigma[0] * max(shape)


def matrix_rank(M, tol: Tolerances = DEFAULT_TOL) -> int:
    """Number of singular values above the relative threshold."""
    M = np.asarray(M)
    sigma = _svdvals(M)
    return int(np.count_nonzero(sigma > _rank_threshold(sigma, M.shape, tol)))


def null_basis(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the right null space of ``M``.

    Returns an array whose columns are orthonormal and satisfy
    ``M @ basis ~ 0``; the column count is ``cols - rank``. A full
    column-rank input yields a ``(cols, 0)`` array.
    """
    M = np.asarray(M)
    try:
        _, sigma, vh = np.linalg.svd(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD failed to converge: {exc}") from exc
    rank = int(np.count_nonzero(sigma > _rank_threshold(sigma, M.shape, tol)))
    return vh[rank:].conj().T


def range_basis(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column space of ``M`` (columns of the result)."""
    M = np.asarray(M)
    try:
        u, sigma, _ = np.linalg.svd(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD failed to converge: {exc}") from exc
    rank = int(np.count_nonzero(sigma > _rank_threshold(sigma, M.shape, tol)))
    return u[:, :rank]


def right_inverse(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Minimum-norm right inverse of a full row-rank matrix.

    Satisfies ``M @ right_inverse(M) = I``. Raises
    :class:`RankDeficiencyError` when ``M`` is row-rank deficient at the
    tolerance.
    """
    M = np.asarray(M, dtype=float)
    rows, _ = M.shape
    if matrix_rank(M, tol) < rows:
        raise RankDeficiencyError(
            f"matrix of shape {M.shape} is row-rank deficient; no right inverse"
        )
    # M^T (M M^T)^{-1}, computed through the SVD for conditioning.
    return np.linalg.pinv(M)


def eig_with_left(M):
    """Eigenvalues with unit-norm left and right eigenvectors.

    Returns ``(values, left, right)`` where ``left[:, k].T @ M ==
    values[k] * left[:, k].T`` and ``M @ right[:, k] == values[k] *
    right[:, k]`` (plain transpose, not conjugate transpose).
    """
    M = np.asarray(M, dtype=float)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"eigendecomposition needs a square matrix, got {M.shape}")
    try:
        values, vl, vr = scipy.linalg.eig(M, left=True, right=True)
    except Exception as exc:  # LinAlgError or LAPACK convergence failure
        raise NumericalFailureError(f"eigendecomposition failed: {exc}") from exc
    # scipy returns vl with vl[:,k]^H M = w[k] vl[:,k]^H; conjugate to get
    # the transpose convention used by the PBH tests.
    left = vl.conj()
    left = left / np.linalg.norm(left, axis=0)
    right = vr / np.linalg.norm(vr, axis=0)
    return values, left, right


def min_singular_value(M) -> float:
    """Smallest singular value of a real or complex matrix."""
    M = np.asarray(M)
    return float(_svdvals(M)[-1])


def solve_care(A, B, Q, R, tol: Tolerances = DEFAULT_TOL):
    """Stabilizing solution of the continuous algebraic Riccati equation.

    Solves ``A^T P + P A - P B R^{-1} B^T P + Q = 0`` for the symmetric
    positive-semidefinite ``P`` whose feedback ``K = R^{-1} B^T P``
    places all eigenvalues of ``A - B K`` in the open left half plane.

    The solution is extracted from the stable invariant subspace of the
    2n-by-2n Hamiltonian matrix via an ordered real Schur decomposition,
    which only needs (A, B) stabilizable, not controllable; ``B = 0``
    with ``A`` Hurwitz reduces to the Lyapunov case and is fine.

    Returns
    -------
    (P, K) : pair of ndarrays

    Raises
    ------
    NoStabilizingSolutionError
        If the stable subspace does not have dimension n (the pair is
        not stabilizable, or eigenvalues sit on the imaginary axis).
    NumericalFailureError
        If the Schur decomposition or the subspace solve breaks down.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    Q = as_matrix(Q, "Q")
    R = as_matrix(R, "R")
    n = A.shape[0]
    if A.shape != (n, n) or B.shape[0] != n or Q.shape != (n, n):
        raise ValueError("inconsistent CARE dimensions")
    mm = B.shape[1]
    if R.shape != (mm, mm):
        raise ValueError("R must be square with one row per input")

    try:
        G = B @ np.linalg.solve(R, B.T)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"R is singular: {exc}") from exc
    H = np.block([[A, -G], [-Q, -A.T]])
    try:
        _, U, sdim = scipy.linalg.schur(H, output="real", sort=lambda re, im: re < 0.0)
    except Exception as exc:
        raise NumericalFailureError(f"Schur decomposition of the Hamiltonian failed: {exc}") from exc
    if sdim != n:
        raise NoStabilizingSolutionError(
            f"stable invariant subspace has dimension {sdim}, expected {n}: "
            "the pair is not stabilizable (or has imaginary-axis modes)"
        )
    U11 = U[:n, :n]
    U21 = U[n:, :n]
    if matrix_rank(U11, tol) < n:
        raise NumericalFailureError("singular basis block while extracting the CARE solution")
    P = np.linalg.solve(U11.T, U21.T).T
    P = 0.5 * (P + P.T)
    K = np.linalg.solve(R, B.T @ P)

    residual = A.T @ P + P @ A - P @ G @ P + Q
    if np.linalg.norm(residual) > tol.care_residual * (1.0 + np.linalg.norm(P)):
        raise NumericalFailureError(
            f"CARE residual {np.linalg.norm(residual):.3e} exceeds the accepted bound"
        )
    closed_loop = np.linalg.eigvals(A - B @ K)
    if closed_loop.size and np.max(closed_loop.real) >= 0.0:
        raise NoStabilizingSolutionError(
            "computed feedback does not stabilize the pair "
            f"(max closed-loop real part {np.max(closed_loop.real):.3e})"
        )
    return P, K
