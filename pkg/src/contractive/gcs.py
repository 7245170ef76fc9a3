"""Seed states with vanishing first and second ladder moments.

A normalized |phi> with <phi|a|phi> = 0 and <phi|a^2|phi> = 0 stays a
minimum-structure wave packet under displacement: D(alpha)|phi> has equal
quadrature variances n_bar + 1/2 and zero covariance for every alpha. This
module solves for such seeds on a band of number states and provides the
exact three-spaced lattice family.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSpecError,
    InvalidSpecError,
    OutOfRangeError,
    SeedConditionError,
    TrivialStateError,
)
from .fock import FockVector

# A candidate seed qualifies when both ladder-moment residuals are below this.
SEED_RESIDUAL_TOL = 1e-8

# Relative determinant floor below which the 2x2 band system is treated as
# singular.
DEGENERATE_DET_TOL = 1e-12

# Residuals after a successful solve must come out at least this clean.
SOLVE_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class PhiSpec:
    """Band specification: support on |n> .. |N> with interior row fixed.

    `free` holds the chosen coefficients c_{n+1} .. c_{N-1}; the solver fills
    in the endpoints c_n and c_N.
    """

    n: int
    N: int
    free: tuple[complex, ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidSpecError(f"band start n must be >= 0, got {self.n}")
        if self.N < self.n + 3:
            raise InvalidSpecError(
                f"band end N must be >= n + 3, got n={self.n}, N={self.N}"
            )
        free = tuple(complex(c) for c in self.free)
        if len(free) != self.N - 1 - self.n:
            raise InvalidSpecError(
                f"need {self.N - 1 - self.n} interior coefficients "
                f"c_{self.n + 1}..c_{self.N - 1}, got {len(free)}"
            )
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in free):
            raise InvalidSpecError("interior coefficients must be finite")
        object.__setattr__(self, "free", free)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "free": [[c.real, c.imag] for c in self.free],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PhiSpec":
        free = tuple(complex(re, im) for re, im in data["free"])
        return cls(n=int(data["n"]), N=int(data["N"]), free=free)

    @classmethod
    def load(cls, path) -> "PhiSpec":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class PhiState:
    """Solved seed: normalized state plus its mean photon number."""

    state: FockVector
    n_bar: float


@dataclass(frozen=True)
class SeedCheck:
    ok: bool
    residual_a: float
    residual_a2: float


def ladder_moments(state: FockVector) -> tuple[complex, complex]:
    """(<a>, <a^2>) by direct index sums; exact at any cutoff."""
    c = state.amps
    m = np.arange(state.dim - 1)
    first = np.sum(np.conjugate(c[:-1]) * c[1:] * np.sqrt(m + 1.0))
    m2 = np.arange(state.dim - 2)
    second = np.sum(
        np.conjugate(c[:-2]) * c[2:] * np.sqrt((m2 + 1.0) * (m2 + 2.0))
    )
    return complex(first), complex(second)


def check_phi(state: FockVector, tol: float = SEED_RESIDUAL_TOL) -> SeedCheck:
    """Test the vanishing ladder-moment conditions on a normalized state."""
    first, second = ladder_moments(state.normalized())
    ra, ra2 = abs(first), abs(second)
    return SeedCheck(ok=(ra < tol and ra2 < tol), residual_a=ra, residual_a2=ra2)


def require_seed(state: FockVector, tol: float = SEED_RESIDUAL_TOL) -> None:
    result = check_phi(state, tol)
    if not result.ok:
        raise SeedConditionError(result.residual_a, result.residual_a2, tol)


def _fix_phase(amps: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real positive."""
    k = int(np.argmax(np.abs(amps)))
    pivot = amps[k]
    if pivot == 0:
        return amps
    return amps * (np.conjugate(pivot) / abs(pivot))


def _finish(amps: np.ndarray, dim: int | None) -> PhiState:
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise TrivialStateError("solved coefficients are identically zero")
    amps = _fix_phase(amps / norm)
    if dim is None:
        dim = amps.size
    if dim < amps.size:
        raise InvalidSpecError(
            f"dim {dim} cannot hold a band reaching level {amps.size - 1}"
        )
    padded = np.zeros(dim, dtype=complex)
    padded[: amps.size] = amps
    state = FockVector(padded)
    first, second = ladder_moments(state)
    if abs(first) >= SOLVE_RESIDUAL_TOL or abs(second) >= SOLVE_RESIDUAL_TOL:
        raise DegenerateSpecError(
            complex(abs(first) + abs(second)),
            "solution residuals too large; system is numerically degenerate",
        )
    n_bar = float(np.sum(np.arange(state.dim) * np.abs(state.amps) ** 2))
    return PhiState(state=state, n_bar=n_bar)


def solve_phi(spec: PhiSpec, dim: int | None = None) -> PhiState:
    """Complete a band of coefficients into a valid seed state.

    With the interior coefficients fixed, the two vanishing-moment conditions
    are linear in (conj(c_n), c_N); this solves that 2x2 system, normalizes,
    and fixes the global phase (largest entry real positive).
    """
    n, N = spec.n, spec.N
    c = np.zeros(N + 1, dtype=complex)
    c[n + 1:N] = spec.free

    mat = np.array([
        [c[n + 1] * np.sqrt(n + 1.0), np.conjugate(c[N - 1]) * np.sqrt(float(N))],
        [c[n + 2] * np.sqrt((n + 1.0) * (n + 2.0)),
         np.conjugate(c[N - 2]) * np.sqrt((N - 1.0) * float(N))],
    ])
    # Interior-only contributions to <a> and <a^2>; empty ranges sum to zero.
    ms = np.arange(n + 1, N - 1)
    rhs0 = np.sum(np.conjugate(c[ms]) * c[ms + 1] * np.sqrt(ms + 1.0)) if ms.size else 0.0
    ms2 = np.arange(n + 1, N - 2)
    rhs1 = np.sum(
        np.conjugate(c[ms2]) * c[ms2 + 2] * np.sqrt((ms2 + 1.0) * (ms2 + 2.0))
    ) if ms2.size else 0.0
    rhs = -np.array([rhs0, rhs1], dtype=complex)

    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    scale = np.max(np.abs(mat))
    if scale == 0.0 or abs(det) < DEGENERATE_DET_TOL * scale**2:
        raise DegenerateSpecError(det, "band system is singular for these coefficients")

    c[n] = np.conjugate((rhs[0] * mat[1, 1] - mat[0, 1] * rhs[1]) / det)
    c[N] = (mat[0, 0] * rhs[1] - rhs[0] * mat[1, 0]) / det
    # Zero amplitudes below the band are kept so level indices stay literal.
    return _finish(c, dim)


def solve_phi_n3(n: int, c1: complex, c2: complex, dim: int | None = None) -> PhiState:
    """Closed-form seed on the minimal band |n> .. |n+3>.

    c1 and c2 are the interior coefficients c_{n+1}, c_{n+2}. Degenerate when
    |c1| = |c2| (unless one of them is zero jointly with the cross term).
    """
    c1, c2 = complex(c1), complex(c2)
    delta = abs(c1) ** 2 - abs(c2) ** 2
    cross = np.conjugate(c1) * c2
    scale = max(abs(c1), abs(c2)) ** 2
    if scale == 0.0 or abs(delta) < DEGENERATE_DET_TOL * scale:
        raise DegenerateSpecError(
            complex(delta), "minimal band is degenerate (|c_{n+1}| = |c_{n+2}|)"
        )
    c = np.zeros(n + 4, dtype=complex)
    c[n] = np.conjugate(-cross * np.conjugate(c1) * np.sqrt(n + 2.0)
                        / (delta * np.sqrt(n + 1.0)))
    c[n + 1] = c1
    c[n + 2] = c2
    c[n + 3] = cross * c2 * np.sqrt(n + 2.0) / (delta * np.sqrt(n + 3.0))
    return _finish(c, dim)


def lattice_phi(weights, dim: int | None = None) -> PhiState:
    """Seed supported on every third level: sum_r sqrt(w_r) |3r>.

    Spacing three makes both ladder moments vanish identically, so any
    nonnegative weight vector works. n_bar ranges over [0, 3(s-1)] for s
    weights.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidSpecError("weights must be a non-empty 1-D sequence")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidSpecError("weights must be finite and nonnegative")
    total = w.sum()
    if total <= 0:
        raise TrivialStateError("lattice weights sum to zero")
    top = 3 * (w.size - 1)
    size = max(top + 1, 2)
    if dim is not None and dim < size:
        raise InvalidSpecError(f"dim {dim} cannot hold lattice level {top}")
    amps = np.zeros(dim if dim is not None else size, dtype=complex)
    amps[0:top + 1:3] = np.sqrt(w / total)
    state = FockVector(amps)
    n_bar = float(np.sum(np.arange(state.dim) * np.abs(state.amps) ** 2))
    return PhiState(state=state, n_bar=n_bar)


def lattice_phi_for_nbar(target: float, shells: int,
                         dim: int | None = None,
                         tol: float = 1e-9) -> PhiState:
    """Lattice seed with mean photon number tuned to a target.

    Bisects the mixing parameter q in weights (1-q, 0, .., 0, q), for which
    n_bar(q) = 3 * shells * q is monotone. Target must lie in [0, 3*shells].
    """
    if shells < 1:
        raise InvalidSpecError(f"shells must be >= 1, got {shells}")
    top_nbar = 3.0 * shells
    if not 0.0 <= target <= top_nbar:
        raise OutOfRangeError(
            f"target n_bar {target} outside attainable [0, {top_nbar}]"
        )

    def build(q: float) -> PhiState:
        w = np.zeros(shells + 1)
        w[0] = 1.0 - q
        w[-1] = q
        return lattice_phi(w, dim)

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        got = build(mid).n_bar
        if abs(got - target) < tol:
            return build(mid)
        if got < target:
            lo = mid
        else:
            hi = mid
    return build(0.5 * (lo + hi))
