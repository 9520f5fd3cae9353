"""Deterministic system generators and an independent zero-location oracle.

``random_system`` draws generic fat plants for property tests;
``plant_zero`` reverse-engineers a plant whose transmission zeros sit at
requested locations by constructing the transformed-coordinate blocks
directly and rotating them through a random orthogonal change of basis.
``zero_sweep_oracle`` locates zeros with nothing but a sigma_min grid
sweep plus Newton polish, so it shares no code path with the pencil
solver it is used to cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import GenerationError
from .linalg import DEFAULT_TOL, Tolerances, matrix_rank, min_singular_value
from .statespace import (
    StateSpace,
    check_assumptions,
    greedy_pair,
    rosenbrock_pencil,
    transmission_zeros,
)
from .synthesis import choose_c21

__all__ = ["GenSpec", "random_system", "plant_zero", "zero_sweep_oracle"]

_MAX_ATTEMPTS = 100


def _conjugate_closed(zs, tol_abs):
    pending = [complex(z) for z in zs if z.imag != 0.0]
    for z in pending:
        partner = min((abs(w - z.conjugate()) for w in pending), default=np.inf)
        if partner > tol_abs:
            return False
    return True


@dataclass(frozen=True)
class GenSpec:
    """Shape, seed, and optional planted zeros for a generated plant."""

    n: int
    m: int
    p: int
    seed: int = 0
    planted_zeros: tuple = ()
    stable_a: bool = True

    def __post_init__(self):
        if not (self.n > self.m > self.p >= 1):
            raise ValueError(f"need n > m > p >= 1, got n={self.n}, m={self.m}, p={self.p}")
        zs = tuple(complex(z) for z in self.planted_zeros)
        if not _conjugate_closed(zs, DEFAULT_TOL.zero_match):
            raise ValueError("planted_zeros must be closed under conjugation")
        # One state slot per zero; a conjugate pair lists both members.
        if len(zs) > self.n - self.m:
            raise ValueError(
                f"{len(zs)} planted zeros do not fit in n - m = {self.n - self.m} states"
            )
        object.__setattr__(self, "planted_zeros", zs)


def _stable_shift(A, rng, margin=0.5):
    worst = np.max(np.linalg.eigvals(A).real)
    if worst > -margin:
        A = A - (worst + margin + 0.5 * rng.uniform()) * np.eye(A.shape[0])
    return A


def random_system(spec: GenSpec, tol: Tolerances = DEFAULT_TOL) -> StateSpace:
    """Generic fat plant passing the structural checks, deterministic in the seed.

    Draws Gaussian A, B, C and retries with an incremented seed on the
    rare draw that fails a rank or minimality check.
    """
    if spec.planted_zeros:
        raise ValueError("random_system does not plant zeros; use plant_zero")
    for attempt in range(_MAX_ATTEMPTS):
        rng = np.random.default_rng(spec.seed + attempt)
        A = rng.standard_normal((spec.n, spec.n))
        if spec.stable_a:
            A = _stable_shift(A, rng)
        B = rng.standard_normal((spec.n, spec.m))
        C = rng.standard_normal((spec.p, spec.n))
        sys = StateSpace(A, B, C)
        report = check_assumptions(sys, tol)
        if not [name for name in report.failed() if name != "stable_zeros"]:
            return sys
    raise GenerationError(
        f"no structurally valid draw in {_MAX_ATTEMPTS} attempts from seed {spec.seed}"
    )


def _planted_blocks(zs):
    """Real block-diagonal matrix with the requested spectrum, plus block sizes."""
    blocks, sizes = [], []
    consumed = set()
    for i, z in enumerate(zs):
        if i in consumed:
            continue
        if z.imag == 0.0:
            blocks.append(np.array([[z.real]]))
            sizes.append(1)
        else:
            for j, w in enumerate(zs):
                if j != i and j not in consumed and abs(w - z.conjugate()) <= DEFAULT_TOL.zero_match:
                    consumed.add(j)
                    break
            else:
                raise ValueError(f"no conjugate partner for planted zero {z}")
            a, b = z.real, abs(z.imag)
            blocks.append(np.array([[a, b], [-b, a]]))
            sizes.append(2)
        consumed.add(i)
    k = sum(sizes)
    Lam = np.zeros((k, k))
    at = 0
    for blk in blocks:
        w = blk.shape[0]
        Lam[at : at + w, at : at + w] = blk
        at += w
    return Lam, k


def plant_zero(spec: GenSpec, tol: Tolerances = DEFAULT_TOL) -> StateSpace:
    """Plant whose transmission zeros include every requested location.

    Works backwards through the squaring-up algebra: in the transformed
    coordinates the plant's zeros are the uncontrollable modes of
    (A22_tilde, Bps2), so the planted blocks of A22_tilde get zero rows
    in Bps2 (making them uncontrollable there) while keeping nonzero
    rows in Bps1 (so the modes stay controllable from the full input,
    i.e. they are genuine transmission zeros rather than decoupling
    zeros). Every draw is certified before being returned: rank-drop of
    the Rosenbrock pencil at each planted point and membership in the
    computed transmission-zero set.
    """
    if not spec.planted_zeros:
        raise ValueError("plant_zero needs at least one planted zero; use random_system")
    n, m, p = spec.n, spec.m, spec.p
    q, r = n - m, m - p
    Lam, k = _planted_blocks(spec.planted_zeros)

    for attempt in range(_MAX_ATTEMPTS):
        rng = np.random.default_rng(spec.seed + attempt)
        C11 = rng.standard_normal((p, m))
        if matrix_rank(C11, tol) < p:
            continue
        C21 = choose_c21(C11, tol)
        C1 = np.vstack([C11, C21])
        C12 = rng.standard_normal((p, q))

        free = q - k
        S = rng.standard_normal((free, free))
        if free:
            S = _stable_shift(S, rng, margin=0.3)
            gap = min(abs(mu - z) for mu in np.linalg.eigvals(S) for z in spec.planted_zeros)
            if gap < 10.0 * tol.zero_match:
                continue
        A22_tilde = np.zeros((q, q))
        A22_tilde[:k, :k] = Lam
        if free:
            A22_tilde[k:, :k] = rng.standard_normal((free, k))
            A22_tilde[k:, k:] = S

        Bps1 = rng.standard_normal((q, p))
        Bps2 = np.zeros((q, r))
        if free:
            Bps2[k:, :] = rng.standard_normal((free, r))
        Bps = np.hstack([Bps1, Bps2])

        A21 = Bps @ C1
        A22 = A22_tilde + Bps1 @ C12
        A11 = rng.standard_normal((m, m))
        if spec.stable_a:
            A11 = _stable_shift(A11, rng)
        A12 = rng.standard_normal((m, q))
        B1 = rng.standard_normal((m, m))
        if min_singular_value(B1) < 1e-3:
            continue

        At = np.block([[A11, A12], [A21, A22]])
        Bt = np.vstack([B1, np.zeros((q, m))])
        Ct = np.hstack([C11, C12])
        T = np.linalg.qr(rng.standard_normal((n, n)))[0]
        sys = StateSpace(T.T @ At @ T, T.T @ Bt, Ct @ T)

        if not _certify_planted(sys, spec.planted_zeros, tol):
            continue
        return sys
    raise GenerationError(
        f"could not certify planted zeros {spec.planted_zeros} in {_MAX_ATTEMPTS} attempts"
    )


def _certify_planted(sys, zs, tol):
    E, F = rosenbrock_pencil(sys)
    for z in zs:
        if min_singular_value(complex(z) * E + F) >= tol.pbh:
            return False
    report = check_assumptions(sys, tol)
    if [name for name in report.failed() if name != "stable_zeros"]:
        return False
    found = transmission_zeros(sys, tol).transmission
    pairs, unmatched, _ = greedy_pair(zs, found, tol.zero_match)
    return not unmatched


def zero_sweep_oracle(
    sys: StateSpace,
    region=(-10.0, 10.0, -10.0, 10.0),
    grid=(200, 200),
    tol: Tolerances = DEFAULT_TOL,
) -> list:
    """Zero candidates from a brute-force sigma_min sweep of the pencil.

    Evaluates sigma_min(R(s)) on a rectangular grid over
    ``region = (re_min, re_max, im_min, im_max)``, polishes every local
    minimum with a Newton iteration on the smallest singular triple, and
    reports the polished points whose sigma_min certifies a rank drop.
    Intended purely as an independent cross-check of the pencil-based
    zero finder; zeros outside the region are invisible to it.
    """
    gx, gy = int(grid[0]), int(grid[1])
    if gx < 50 or gy < 50:
        raise ValueError(f"grid must be at least 50x50, got {gx}x{gy}")
    re0, re1, im0, im1 = map(float, region)
    E, F = rosenbrock_pencil(sys)
    xs = np.linspace(re0, re1, gx)
    ys = np.linspace(im0, im1, gy)
    S = (xs[:, None] + 1j * ys[None, :]).reshape(-1)
    stack = S[:, None, None] * E + F
    sigma = np.linalg.svd(stack, compute_uv=False)[:, -1].reshape(gx, gy)

    padded = np.full((gx + 2, gy + 2), np.inf)
    padded[1:-1, 1:-1] = sigma
    interior = padded[1:-1, 1:-1]
    is_min = np.ones_like(sigma, dtype=bool)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            is_min &= interior <= padded[1 + dx : gx + 1 + dx, 1 + dy : gy + 1 + dy]
    # Only minima that could plausibly polish down to a zero are worth refining.
    scale = max(1.0, float(np.linalg.norm(F)))
    candidates = [
        complex(xs[i], ys[j]) for i, j in zip(*np.nonzero(is_min & (sigma < 1e-2 * scale)))
    ]

    polished = []
    for s0 in candidates:
        z = _newton_polish(E, F, s0)
        if z is None:
            continue
        if min_singular_value(complex(z) * E + F) < tol.pbh:
            polished.append(z)
    # Two grid minima may polish into the same zero.
    unique = []
    for z in sorted(polished, key=lambda z: (z.real, z.imag)):
        if all(abs(z - u) > tol.zero_match for u in unique):
            unique.append(z)
    return unique


def _newton_polish(E, F, s, steps=25):
    """Newton iteration on u^H R(s) v, the smallest singular triple's residual."""
    z = complex(s)
    for _ in range(steps):
        u, sig, vh = np.linalg.svd(z * E + F)
        # For a rectangular pencil the trailing rows of vh span the null
        # space; the smallest singular value's vectors sit at len(sig) - 1.
        k = len(sig) - 1
        u_min = u[:, k]
        v_min = vh[k, :].conj()
        h = u_min.conj() @ ((z * E + F) @ v_min)
        dh = u_min.conj() @ (E @ v_min)
        if abs(dh) < 1e-14:
            return None
        step = h / dh
        z = z - step
        if abs(step) < 1e-13 * max(1.0, abs(z)):
            break
    if not np.isfinite(z.real) or not np.isfinite(z.imag):
        return None
    # Real-axis zeros of a real pencil pick up imaginary rounding noise.
    if abs(z.imag) < 1e-9:
        z = complex(z.real, 0.0)
    return z
