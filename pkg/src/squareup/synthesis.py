"""Output augmentation that squares up a fat plant into a minimum-phase one.

The pipeline works in an orthogonal coordinate change T whose leading m
rows span range(B):

    T R(s) blockdiag(T^T, I) = [ sI_m - A11   -A12          -B1 ]
                               [ -A21          sI_{n-m}-A22   0 ]
                               [ C11           C12            0 ]

Adding a pseudo-output row [C21, C22] with C21 the orthonormal complement
of C11's row space turns the rank of the augmented pencil into

    rank = 2m + rank(sI - A22_tilde + Bps2 C22),

so the augmented plant's zeros are the eigenvalues of
A22_tilde - Bps2 C22, where A22_tilde = A22 - A21 C1^{-1} [C12; 0] and
Bps2 = A21 C21^T. Uncontrollable modes of (A22_tilde, Bps2) are exactly
the plant's own transmission zeros: they cannot be moved, only inherited.
The controllable ones are pushed into the left half-plane with an LQR
gain, which is the returned C22.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    AssumptionError,
    NoStabilizingSolutionError,
    NumericalFailureError,
    UnstabilizableError,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    eig_with_left,
    matrix_rank,
    min_singular_value,
    null_basis,
    range_basis,
    right_inverse,
    solve_care,
)
from .statespace import (
    StateSpace,
    ZeroSet,
    check_assumptions,
    greedy_pair,
    transmission_zeros,
)

__all__ = [
    "TransformedSystem",
    "PseudoPair",
    "FixedModeReport",
    "SquareUpResult",
    "transform_to_controllable_coords",
    "choose_c21",
    "build_pseudo_pair",
    "detect_fixed_modes",
    "place_zeros_lqr",
    "assemble_augmentation",
    "square_up",
    "verify",
]

_ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class TransformedSystem:
    """Plant blocks in the coordinates where range(B) leads."""

    T: np.ndarray
    A11: np.ndarray
    A12: np.ndarray
    A21: np.ndarray
    A22: np.ndarray
    B1: np.ndarray
    C11: np.ndarray
    C12: np.ndarray


@dataclass(frozen=True)
class PseudoPair:
    """The state-feedback surrogate problem for zero placement."""

    C1: np.ndarray
    C1_inv: np.ndarray
    C21: np.ndarray
    C2_fixed: np.ndarray
    A22_tilde: np.ndarray
    Bps: np.ndarray
    Bps1: np.ndarray
    Bps2: np.ndarray


@dataclass(frozen=True)
class FixedModeReport:
    """Uncontrollable modes of the pseudo-pair and their zero matches."""

    modes: tuple
    left_vectors: tuple
    matches: tuple  # (mode, matched plant transmission zero or None)
    stabilizable: bool


@dataclass(frozen=True)
class SquareUpResult:
    Ca: np.ndarray
    C22: np.ndarray
    q_scale: float
    r_scale: float
    assumptions: object
    transformed: TransformedSystem
    pair: PseudoPair
    fixed_modes: FixedModeReport
    plant_zeros: ZeroSet
    augmented_zeros: ZeroSet
    minimum_phase: bool
    preserved: bool


def _sign_canonical_rows(T):
    """Flip row signs so each row's largest-magnitude entry is positive."""
    T = T.copy()
    for row in T:
        k = int(np.argmax(np.abs(row)))
        if row[k] < 0.0:
            row *= -1.0
    return T


def transform_to_controllable_coords(
    sys: StateSpace, tol: Tolerances = DEFAULT_TOL, basis=None
) -> TransformedSystem:
    """Orthogonal coordinate change separating range(B) from its complement.

    Builds T with the first m rows an orthonormal basis of range(B) and
    the remaining rows an orthonormal basis of the complement, so the
    transformed input matrix is [B1; 0] with B1 invertible. Pass
    ``basis`` to pin a specific T (it is validated, not trusted).
    """
    n, m = sys.n, sys.m
    if matrix_rank(sys.B, tol) < m:
        raise AssumptionError(
            "B is column-rank deficient; the coordinate change needs rank(B) = m",
            check_assumptions(sys, tol),
        )
    if basis is not None:
        T = as_matrix(basis, "basis")
        if T.shape != (n, n):
            raise ValueError(f"basis must be {n}x{n}, got {T.shape}")
        if np.linalg.norm(T @ T.T - np.eye(n)) > _ORTHOGONALITY_TOL:
            raise ValueError("basis is not orthogonal")
    else:
        Q1 = range_basis(sys.B, tol)
        Q2 = null_basis(sys.B.T, tol)
        T = _sign_canonical_rows(np.vstack([Q1.T, Q2.T]))

    At = T @ sys.A @ T.T
    Bt = T @ sys.B
    Ct = sys.C @ T.T
    if np.linalg.norm(Bt[m:, :]) > _ORTHOGONALITY_TOL * max(1.0, np.linalg.norm(sys.B)):
        raise ValueError("basis does not map range(B) onto the leading coordinates")
    return TransformedSystem(
        T=T,
        A11=At[:m, :m],
        A12=At[:m, m:],
        A21=At[m:, :m],
        A22=At[m:, m:],
        B1=Bt[:m, :],
        C11=Ct[:, :m],
        C12=Ct[:, m:],
    )


def choose_c21(C11, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal rows completing C11's row space to all of R^m.

    The result stacks under C11 into an invertible C1 = [C11; C21] and
    satisfies C11 C21^T = 0 and C21 C21^T = I.
    """
    C11 = as_matrix(C11, "C11")
    p, m = C11.shape
    if matrix_rank(C11, tol) < p:
        raise AssumptionError(
            "C11 is row-rank deficient, which means rank(C B) < p on the plant",
            report=None,
        )
    basis = null_basis(C11, tol)
    if basis.shape[1] != m - p:
        raise NumericalFailureError(
            f"null space of C11 has dimension {basis.shape[1]}, expected {m - p}"
        )
    return _sign_canonical_rows(basis.T)


def build_pseudo_pair(ts: TransformedSystem, C21, tol: Tolerances = DEFAULT_TOL) -> PseudoPair:
    """Assemble the pair (A22_tilde, Bps2) that carries the zero placement.

    C1^{-1} is formed as [C11_dagger, C21^T] with the minimum-norm right
    inverse, which makes the identity C1 C1^{-1} = I exact because
    C21 C11_dagger = 0 for that choice.
    """
    C21 = as_matrix(C21, "C21")
    p = ts.C11.shape[0]
    m = ts.C11.shape[1]
    q = ts.A22.shape[0]
    if C21.shape != (m - p, m):
        raise ValueError(f"C21 must be {(m - p, m)}, got {C21.shape}")
    C1 = np.vstack([ts.C11, C21])
    C1_inv = np.hstack([right_inverse(ts.C11, tol), C21.T])
    if np.linalg.norm(C1 @ C1_inv - np.eye(m)) > _ORTHOGONALITY_TOL * max(
        1.0, np.linalg.norm(C1)
    ):
        raise NumericalFailureError("C1 = [C11; C21] is numerically singular")
    C2_fixed = np.vstack([ts.C12, np.zeros((m - p, q))])
    Bps = ts.A21 @ C1_inv
    A22_tilde = ts.A22 - Bps @ C2_fixed
    return PseudoPair(
        C1=C1,
        C1_inv=C1_inv,
        C21=C21,
        C2_fixed=C2_fixed,
        A22_tilde=A22_tilde,
        Bps=Bps,
        Bps1=Bps[:, :p],
        Bps2=Bps[:, p:],
    )


def detect_fixed_modes(
    pp: PseudoPair, plant_zeros: ZeroSet | None = None, tol: Tolerances = DEFAULT_TOL
) -> FixedModeReport:
    """Uncontrollable modes of (A22_tilde, Bps2) via the left-vector PBH test.

    A mode is fixed when its left eigenvector w satisfies
    ``|| w^T [s I - A22_tilde, Bps2] || < tol.pbh``; for eigenvalues with
    multiplicity the per-vector test can miss defective structure, so
    those fall back to a full rank test on the PBH matrix. When
    ``plant_zeros`` is given, each fixed mode is matched against the
    plant's transmission zeros.
    """
    A = pp.A22_tilde
    B = pp.Bps2
    q = A.shape[0]
    values, left, _ = eig_with_left(A)

    modes, vectors = [], []
    seen = set()
    for k, lam in enumerate(values):
        multiplicity = int(np.sum(np.abs(values - lam) < tol.zero_match))
        if multiplicity > 1:
            key = (round(lam.real, 9), round(abs(lam.imag), 9))
            if key in seen:
                continue
            seen.add(key)
            pbh = np.hstack([lam * np.eye(q) - A, B]).astype(complex)
            defect = q - matrix_rank(pbh, tol)
            for _ in range(defect):
                modes.append(complex(lam))
                vectors.append(left[:, k])
                if lam.imag != 0.0:
                    modes.append(complex(lam.conjugate()))
                    vectors.append(left[:, k].conj())
        else:
            w = left[:, k]
            row = np.hstack([w @ (lam * np.eye(q) - A), w @ B])
            if np.linalg.norm(row) < tol.pbh:
                modes.append(complex(lam))
                vectors.append(w)

    order = sorted(range(len(modes)), key=lambda i: (modes[i].real, modes[i].imag))
    modes = [modes[i] for i in order]
    vectors = [vectors[i] for i in order]

    matches = []
    if plant_zeros is not None:
        targets = list(plant_zeros.transmission)
        pairs, unmatched, _ = greedy_pair(modes, targets, tol.zero_match)
        by_mode = {i: targets[j] for i, j in pairs}
        matches = [(modes[i], by_mode.get(i)) for i in range(len(modes))]
    else:
        matches = [(z, None) for z in modes]

    stabilizable = all(z.real < 0.0 for z in modes)
    return FixedModeReport(tuple(modes), tuple(vectors), tuple(matches), stabilizable)


def place_zeros_lqr(
    pp: PseudoPair, q_scale: float = 1.0, r_scale: float = 1.0, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """LQR gain C22 placing the controllable zeros strictly in the LHP.

    Solves the Riccati equation for (A22_tilde, Bps2) with Q = q_scale*I
    and R = r_scale*I and returns the feedback gain. Raises
    :class:`UnstabilizableError` naming the offending fixed modes when
    the pair cannot be stabilized (those modes are the plant's
    non-minimum-phase transmission zeros).
    """
    if q_scale <= 0.0 or r_scale <= 0.0:
        raise ValueError("q_scale and r_scale must be strictly positive")
    report = detect_fixed_modes(pp, None, tol)
    bad = [z for z in report.modes if z.real > -tol.pbh]
    if bad:
        raise UnstabilizableError(
            "fixed modes not strictly inside the left half-plane: "
            + ", ".join(f"{z:.6g}" for z in bad),
            bad,
        )
    q = pp.A22_tilde.shape[0]
    r = pp.Bps2.shape[1]
    try:
        _, K = solve_care(pp.A22_tilde, pp.Bps2, q_scale * np.eye(q), r_scale * np.eye(r), tol)
    except NoStabilizingSolutionError as exc:
        raise UnstabilizableError(
            f"Riccati solver found no stabilizing solution: {exc}", report.modes
        ) from exc
    closed = np.linalg.eigvals(pp.A22_tilde - pp.Bps2 @ K)
    if closed.size and np.max(closed.real) >= 0.0:
        raise NumericalFailureError("placed zeros are not strictly stable")
    return K


def assemble_augmentation(ts: TransformedSystem, C21, C22) -> np.ndarray:
    """Map the pseudo-output row block [C21, C22] back to plant coordinates."""
    C21 = np.asarray(C21, dtype=float)
    C22 = np.asarray(C22, dtype=float)
    if C21.shape[0] != C22.shape[0]:
        raise ValueError("C21 and C22 must have the same number of rows")
    return np.hstack([C21, C22]) @ ts.T


def square_up(
    sys: StateSpace,
    q_scale: float = 1.0,
    r_scale: float = 1.0,
    tol: Tolerances = DEFAULT_TOL,
    basis=None,
) -> SquareUpResult:
    """Full squaring-up pipeline: checks, transform, placement, verification.

    Returns the augmentation Ca (rows to stack under C) together with
    every intermediate artifact and a verification report on the
    augmented square plant {A, B, [C; Ca]}.

    Raises
    ------
    AssumptionError
        When one of the structural checks other than the zero check
        fails; the report rides on the exception.
    UnstabilizableError
        When the plant has transmission zeros not strictly inside the
        left half-plane; these are fixed modes no augmentation can move.
    """
    report = check_assumptions(sys, tol)
    structural = [name for name in report.failed() if name != "stable_zeros"]
    if structural:
        raise AssumptionError(
            "plant violates structural assumptions: " + ", ".join(structural), report
        )
    plant_zeros = transmission_zeros(sys, tol)
    if not report.stable_zeros.passed:
        bad = [z for z in plant_zeros.transmission if z.real > -tol.pbh]
        raise UnstabilizableError(
            "plant transmission zeros not strictly inside the left half-plane: "
            + ", ".join(f"{z:.6g}" for z in bad),
            bad,
        )

    ts = transform_to_controllable_coords(sys, tol, basis=basis)
    C21 = choose_c21(ts.C11, tol)
    pp = build_pseudo_pair(ts, C21, tol)
    fixed = detect_fixed_modes(pp, plant_zeros, tol)
    C22 = place_zeros_lqr(pp, q_scale, r_scale, tol)
    Ca = assemble_augmentation(ts, C21, C22)

    augmented_zeros, minimum_phase, preserved = verify(sys, Ca, tol)
    return SquareUpResult(
        Ca=Ca,
        C22=C22,
        q_scale=float(q_scale),
        r_scale=float(r_scale),
        assumptions=report,
        transformed=ts,
        pair=pp,
        fixed_modes=fixed,
        plant_zeros=plant_zeros,
        augmented_zeros=augmented_zeros,
        minimum_phase=minimum_phase,
        preserved=preserved,
    )


def verify(sys: StateSpace, Ca, tol: Tolerances = DEFAULT_TOL):
    """Independent check of an augmentation.

    Stacks ``Ca`` under the plant's C, recomputes the zero set of the
    square system from scratch, and reports
    ``(zeros, minimum_phase, preserved)`` where ``preserved`` says every
    plant transmission zero reappears in the augmented set.
    """
    Ca = as_matrix(Ca, "Ca")
    if Ca.shape[1] != sys.n:
        raise ValueError(f"Ca must have {sys.n} columns, got {Ca.shape[1]}")
    stacked = StateSpace(sys.A, sys.B, np.vstack([sys.C, Ca]))
    if stacked.p != stacked.m:
        raise ValueError(
            f"stacked output matrix has {stacked.p} rows for {stacked.m} inputs; not square"
        )
    aug = transmission_zeros(stacked, tol)
    minimum_phase = (not aug.degenerate) and all(z.real < 0.0 for z in aug.transmission)
    plant = transmission_zeros(sys, tol)
    _, unmatched, _ = greedy_pair(plant.transmission, aug.transmission, tol.zero_match)
    preserved = not unmatched
    return aug, minimum_phase, preserved
