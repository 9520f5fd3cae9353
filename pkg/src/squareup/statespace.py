"""State-space plant model, zero taxonomy, and structural assumption checks.

A plant here is a strictly proper triple {A, B, C}; the direct-feedthrough
term is fixed to zero by construction. Zeros are classified the standard
way: invariant zeros are the points where the Rosenbrock pencil

    R(s) = [ sI - A   -B ]
           [   C       0 ]

loses its normal rank; input/output decoupling zeros are the
uncontrollable/unobservable modes (PBH tests); transmission zeros are the
invariant zeros left after removing the decoupling ones.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import NumericalFailureError
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    eig_with_left,
    matrix_rank,
    min_singular_value,
)

__all__ = [
    "StateSpace",
    "ZeroSet",
    "AssumptionCheck",
    "AssumptionReport",
    "ZERO_CONVENTION",
    "rosenbrock",
    "rosenbrock_pencil",
    "input_decoupling_zeros",
    "output_decoupling_zeros",
    "invariant_zeros",
    "transmission_zeros",
    "check_assumptions",
    "greedy_pair",
    "subtract_matched",
]

# Documented reading of the minimum-phase prerequisite: a plant passes the
# zero check when every transmission zero it has lies strictly inside the
# open left half-plane; plants without transmission zeros pass vacuously.
# This is the reading under which the pseudo-pair downstream is guaranteed
# stabilizable.
ZERO_CONVENTION = (
    "stable_zeros passes when all existing transmission zeros have "
    "Re(s) < 0 strictly (zero-free plants pass vacuously)"
)

# Generalized eigenvalues beyond this magnitude are treated as the
# infinite eigenvalues every strictly proper pencil carries.
_INFINITE_CUTOFF = 1e8


@dataclass(frozen=True)
class StateSpace:
    """Strictly proper LTI plant {A, B, C} with n states, m inputs, p outputs."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        C = as_matrix(self.C, "C")
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise ValueError(f"B has {B.shape[0]} rows, expected {n}")
        if C.shape[1] != n:
            raise ValueError(f"C has {C.shape[1]} columns, expected {n}")
        for name, M in (("A", A), ("B", B), ("C", C)):
            M = M.copy()
            M.flags.writeable = False
            object.__setattr__(self, name, M)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    def is_fat(self) -> bool:
        return self.m > self.p

    def transposed(self) -> "StateSpace":
        """Dual plant {A^T, C^T, B^T}; swaps inputs and outputs.

        Invariant zeros are preserved, so a tall plant can be squared up
        by transposing, augmenting outputs, and transposing back.
        """
        return StateSpace(self.A.T, self.C.T, self.B.T)

    def __repr__(self):
        return f"StateSpace(n={self.n}, m={self.m}, p={self.p})"


@dataclass(frozen=True)
class ZeroSet:
    """Classified zeros of a plant; all entries are complex scalars."""

    input_decoupling: tuple = ()
    output_decoupling: tuple = ()
    invariant: tuple = ()
    transmission: tuple = ()
    degenerate: bool = False


@dataclass(frozen=True)
class AssumptionCheck:
    passed: bool
    diagnostic: float


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the six structural checks the pipeline relies on.

    fat:            more inputs than outputs and states to spare (n > m > p)
    strictly_proper: no direct feedthrough (guaranteed by construction)
    minimal:        controllable and observable (PBH over the spectrum)
    b_full_rank:    rank(B) = m
    cb_full_rank:   rank(C B) = p
    stable_zeros:   every transmission zero strictly in the left half-plane
    """

    fat: AssumptionCheck
    strictly_proper: AssumptionCheck
    minimal: AssumptionCheck
    b_full_rank: AssumptionCheck
    cb_full_rank: AssumptionCheck
    stable_zeros: AssumptionCheck
    zero_convention: str = field(default=ZERO_CONVENTION)

    _ORDER = ("fat", "strictly_proper", "minimal", "b_full_rank", "cb_full_rank", "stable_zeros")

    @property
    def overall_pass(self) -> bool:
        return all(getattr(self, name).passed for name in self._ORDER)

    def failed(self) -> list[str]:
        return [name for name in self._ORDER if not getattr(self, name).passed]


def rosenbrock(sys: StateSpace, s: complex) -> np.ndarray:
    """Rosenbrock pencil [[sI - A, -B], [C, 0]] evaluated at ``s``."""
    E, F = rosenbrock_pencil(sys)
    return complex(s) * E + F


def rosenbrock_pencil(sys: StateSpace):
    """Matrices (E, F) with R(s) = s E + F; E carries the identity block."""
    n, m, p = sys.n, sys.m, sys.p
    E = np.zeros((n + p, n + m))
    E[:n, :n] = np.eye(n)
    F = np.block([[-sys.A, -sys.B], [sys.C, np.zeros((p, m))]])
    return E, F


def _pbh_modes(A, side_matrix, stacked: bool, tol: Tolerances):
    """Eigenvalues of A whose PBH matrix drops rank (sigma_min below tol.pbh)."""
    values, _, _ = eig_with_left(A)
    n = A.shape[0]
    hits = []
    for lam in values:
        shifted = lam * np.eye(n) - A
        M = np.vstack([shifted, side_matrix]) if stacked else np.hstack([shifted, side_matrix])
        if min_singular_value(M) < tol.pbh:
            hits.append(complex(lam))
    return _sorted_zeros(hits)


def input_decoupling_zeros(sys: StateSpace, tol: Tolerances = DEFAULT_TOL):
    """Uncontrollable modes: eigenvalues where [sI - A, -B] loses rank."""
    return _pbh_modes(sys.A, -sys.B, stacked=False, tol=tol)


def output_decoupling_zeros(sys: StateSpace, tol: Tolerances = DEFAULT_TOL):
    """Unobservable modes: eigenvalues where [sI - A; C] loses rank."""
    return _pbh_modes(sys.A, sys.C, stacked=True, tol=tol)


def _sorted_zeros(zs):
    return tuple(sorted((complex(z) for z in zs), key=lambda z: (z.real, z.imag)))


def greedy_pair(xs, ys, tol_abs: float):
    """Greedily pair nearby entries of two complex sequences.

    Returns ``(pairs, unmatched_x, unmatched_y)`` where ``pairs`` holds
    ``(i, j)`` index pairs with ``|xs[i] - ys[j]| <= tol_abs``, matched
    closest-first; each element is used at most once.
    """
    xs = [complex(x) for x in xs]
    ys = [complex(y) for y in ys]
    candidates = sorted(
        ((abs(x - y), i, j) for i, x in enumerate(xs) for j, y in enumerate(ys)),
        key=lambda t: t[0],
    )
    used_x, used_y, pairs = set(), set(), []
    for dist, i, j in candidates:
        if dist > tol_abs:
            break
        if i in used_x or j in used_y:
            continue
        pairs.append((i, j))
        used_x.add(i)
        used_y.add(j)
    unmatched_x = [i for i in range(len(xs)) if i not in used_x]
    unmatched_y = [j for j in range(len(ys)) if j not in used_y]
    return pairs, unmatched_x, unmatched_y


def subtract_matched(values, removals, tol_abs: float):
    """Remove one element of ``values`` per element of ``removals`` (nearest-first)."""
    pairs, unmatched, _ = greedy_pair(values, removals, tol_abs)
    keep = {i for i in range(len(values))} - {i for i, _ in pairs}
    return [complex(values[i]) for i in sorted(keep)]


def _normal_rank(E, F, tol: Tolerances) -> int:
    # Probe the pencil at fixed quasi-random points; the rank for "almost
    # all s" is the maximum seen.
    rng = np.random.default_rng(0x5EED)
    best = 0
    for _ in range(3):
        s = complex(*rng.uniform(0.3, 2.0, size=2))
        best = max(best, matrix_rank(E * s + F, tol))
    return best


def _finite_candidates(a, b):
    try:
        lam = scipy.linalg.eigvals(a, b)
    except Exception as exc:
        raise NumericalFailureError(f"generalized eigenvalue solve failed: {exc}") from exc
    lam = lam[np.isfinite(lam)]
    return lam[np.abs(lam) < _INFINITE_CUTOFF]


def invariant_zeros(sys: StateSpace, tol: Tolerances = DEFAULT_TOL):
    """Invariant zeros of the plant and a degeneracy flag.

    The points where R(s) loses its normal rank. For a square pencil
    this is a single generalized eigenvalue problem; for a non-square
    pencil the rectangular dimension is compressed twice with
    independent random orthonormal matrices, and only eigenvalues that
    appear in both compressions *and* certify an actual rank drop
    (``sigma_min(R(s0)) < tol.pbh``) are kept. A pencil that is rank
    deficient for every s is reported as ``([], True)``.
    """
    E, F = rosenbrock_pencil(sys)
    rows, cols = E.shape
    if _normal_rank(E, F, tol) < min(rows, cols):
        return (), True

    rng = np.random.default_rng(0xC0FFEE)
    if rows == cols:
        candidate_sets = [_finite_candidates(-F, E)]
    else:
        candidate_sets = []
        for _ in range(2):
            if cols > rows:
                W = np.linalg.qr(rng.standard_normal((cols, rows)))[0]
                candidate_sets.append(_finite_candidates(-F @ W, E @ W))
            else:
                W = np.linalg.qr(rng.standard_normal((rows, cols)))[0]
                candidate_sets.append(_finite_candidates(-W.T @ F, W.T @ E))

    if len(candidate_sets) == 1:
        candidates = list(candidate_sets[0])
    else:
        pairs, _, _ = greedy_pair(candidate_sets[0], candidate_sets[1], tol.zero_match)
        candidates = [complex(candidate_sets[0][i]) for i, _ in pairs]

    certified = [z for z in candidates if min_singular_value(E * complex(z) + F) < tol.pbh]
    return _sorted_zeros(certified), False


def transmission_zeros(sys: StateSpace, tol: Tolerances = DEFAULT_TOL) -> ZeroSet:
    """Full zero classification of the plant.

    Transmission zeros are the invariant zeros minus the union of the
    decoupling zeros, matched within ``tol.zero_match``. Degenerate
    plants get an empty transmission list and a warning.
    """
    inv, degenerate = invariant_zeros(sys, tol)
    in_dec = input_decoupling_zeros(sys, tol)
    out_dec = output_decoupling_zeros(sys, tol)
    if degenerate:
        warnings.warn(
            "plant is degenerate (pencil rank deficient for all s); "
            "transmission zeros are undefined and reported empty",
            stacklevel=2,
        )
        return ZeroSet(in_dec, out_dec, (), (), True)
    # Union of the decoupling sets: modes in both count once.
    _, _, extra_out = greedy_pair(in_dec, out_dec, tol.zero_match)
    union = list(in_dec) + [out_dec[j] for j in extra_out]
    transmission = subtract_matched(list(inv), union, tol.zero_match)
    return ZeroSet(in_dec, out_dec, inv, _sorted_zeros(transmission), False)


def check_assumptions(sys: StateSpace, tol: Tolerances = DEFAULT_TOL) -> AssumptionReport:
    """Evaluate the six structural prerequisites of the squaring-up pipeline.

    Failures are report content, never exceptions. Diagnostics are the
    scalar each check thresholded: margin counts for the shape check,
    smallest PBH/singular values for the rank checks, and the largest
    zero real part for the minimum-phase check.
    """
    n, m, p = sys.n, sys.m, sys.p

    fat = AssumptionCheck(n > m > p >= 1, float(min(n - m, m - p)))
    strictly_proper = AssumptionCheck(True, 0.0)

    values, _, _ = eig_with_left(sys.A)
    worst = np.inf
    for lam in values:
        shifted = lam * np.eye(n) - sys.A
        worst = min(worst, min_singular_value(np.hstack([shifted, -sys.B])))
        worst = min(worst, min_singular_value(np.vstack([shifted, sys.C])))
    minimal = AssumptionCheck(bool(worst >= tol.pbh), float(worst))

    sigma_b = min_singular_value(sys.B)
    b_full_rank = AssumptionCheck(matrix_rank(sys.B, tol) == m, sigma_b)
    cb = sys.C @ sys.B
    cb_full_rank = AssumptionCheck(matrix_rank(cb, tol) == p, min_singular_value(cb))

    zs = transmission_zeros(sys, tol)
    if zs.degenerate:
        stable_zeros = AssumptionCheck(False, float("inf"))
    elif zs.transmission:
        worst_re = max(z.real for z in zs.transmission)
        stable_zeros = AssumptionCheck(bool(worst_re <= -tol.pbh), float(worst_re))
    else:
        stable_zeros = AssumptionCheck(True, float("-inf"))

    return AssumptionReport(fat, strictly_proper, minimal, b_full_rank, cb_full_rank, stable_zeros)
