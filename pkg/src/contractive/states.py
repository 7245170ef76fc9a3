"""State construction: displacement, squeezing, seeded families, wavefunctions.

Builders act in the truncated space and re-check truncation health of their
output, so a state returned from here is safe to feed into the moment and
dynamics layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import gcs
from .errors import InvalidParameterError, OutOfRangeError
from .fock import (
    TAIL_MASS_TOL,
    FockVector,
    build_operators,
    ensure_resolved,
    number_state,
)

# Default position grid for wavefunction work: wide enough for the moderate
# displacements and squeezings this toolkit targets.
GRID_POINTS = 2048
GRID_SPAN = 12.0


@dataclass(frozen=True)
class SqueezeParams:
    """Squeezing strength r >= 0 and phase theta (xi = r e^{i theta})."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.r) or not math.isfinite(self.theta):
            raise InvalidParameterError("squeeze parameters must be finite")
        if self.r < 0:
            raise OutOfRangeError(f"squeeze strength r must be >= 0, got {self.r}")

    @property
    def mu(self) -> float:
        return math.cosh(self.r)

    @property
    def nu(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta)) * math.sinh(self.r)

    @property
    def xi(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta)) * self.r


def displacement_operator(alpha: complex, dim: int) -> np.ndarray:
    """D(alpha) = exp(alpha a^dag - alpha* a) on the truncated space."""
    ops = build_operators(dim)
    gen = alpha * ops.adag - np.conjugate(alpha) * ops.a
    return expm(gen)


def squeeze_operator(params: SqueezeParams, dim: int) -> np.ndarray:
    """S(xi) = exp((xi* a^2 - xi a^dag^2)/2) on the truncated space."""
    ops = build_operators(dim)
    xi = params.xi
    gen = 0.5 * (np.conjugate(xi) * (ops.a @ ops.a) - xi * (ops.adag @ ops.adag))
    return expm(gen)


def displace(state: FockVector, alpha: complex,
             tail_tol: float = TAIL_MASS_TOL) -> FockVector:
    """Apply D(alpha); raises TruncationError if the result is under-resolved."""
    ensure_resolved(state, tail_tol)
    out = FockVector(displacement_operator(alpha, state.dim) @ state.amps)
    ensure_resolved(out, tail_tol)
    return out


def squeeze(state: FockVector, params: SqueezeParams,
            tail_tol: float = TAIL_MASS_TOL) -> FockVector:
    """Apply S(xi); raises TruncationError if the result is under-resolved."""
    ensure_resolved(state, tail_tol)
    out = FockVector(squeeze_operator(params, state.dim) @ state.amps)
    ensure_resolved(out, tail_tol)
    return out


def _auto_dim(top_level: int, alpha: complex, r: float) -> int:
    # Generous occupancy estimate: squeezing scales the band by e^{2r},
    # displacement adds ~|alpha|^2 photons.
    est = (top_level + 1) * math.exp(2 * r) + 2.0 * (abs(alpha) + 1.0) ** 2
    dim = max(64, int(math.ceil(4 * est)))
    return ((dim + 31) // 32) * 32


def make_scs(alpha: complex, params: SqueezeParams,
             dim: int | None = None,
             tail_tol: float = TAIL_MASS_TOL) -> FockVector:
    """Squeezed coherent state D(alpha) S(xi) |0>."""
    if dim is None:
        dim = _auto_dim(0, alpha, params.r)
    vac = number_state(0, dim)
    return displace(squeeze(vac, params, tail_tol), alpha, tail_tol)


def make_sgcs(alpha: complex, params: SqueezeParams, phi: FockVector,
              dim: int | None = None,
              tail_tol: float = TAIL_MASS_TOL,
              seed_tol: float = gcs.SEED_RESIDUAL_TOL) -> FockVector:
    """Squeezed generic coherent state D(alpha) S(xi) |phi>.

    The seed phi must satisfy the vanishing ladder-moment conditions
    <phi|a|phi> = 0 and <phi|a^2|phi> = 0; otherwise SeedConditionError.
    """
    gcs.require_seed(phi, seed_tol)
    top = int(np.max(np.nonzero(np.abs(phi.amps) > 1e-14)[0])) if phi.norm() else 0
    if dim is None:
        dim = _auto_dim(top, alpha, params.r)
    seed = phi.normalized().padded(max(dim, phi.dim))
    return displace(squeeze(seed, params, tail_tol), alpha, tail_tol)


def default_grid(points: int = GRID_POINTS, span: float = GRID_SPAN) -> np.ndarray:
    """Uniform position grid on [-span, span]."""
    return np.linspace(-span, span, points)


def hermite_basis(dim: int, grid: np.ndarray) -> np.ndarray:
    """Normalized Hermite-Gaussian functions <x|m>, shape (dim, len(grid)).

    Uses the stable three-term recurrence on the normalized functions
    phi_m = sqrt(2/m) x phi_{m-1} - sqrt((m-1)/m) phi_{m-2}, which avoids
    factorial overflow entirely.
    """
    grid = np.asarray(grid, dtype=float)
    basis = np.zeros((dim, grid.size))
    basis[0] = np.pi ** -0.25 * np.exp(-0.5 * grid**2)
    if dim > 1:
        basis[1] = np.sqrt(2.0) * grid * basis[0]
    for m in range(2, dim):
        basis[m] = (np.sqrt(2.0 / m) * grid * basis[m - 1]
                    - np.sqrt((m - 1) / m) * basis[m - 2])
    return basis


def wavefunction(state: FockVector, grid: np.ndarray | None = None) -> np.ndarray:
    """Position wavefunction <x|state> sampled on the grid."""
    if grid is None:
        grid = default_grid()
    basis = hermite_basis(state.dim, grid)
    return state.amps @ basis


def project_to_fock(values: np.ndarray, grid: np.ndarray, dim: int) -> FockVector:
    """Project a grid wavefunction onto number states by quadrature."""
    grid = np.asarray(grid, dtype=float)
    basis = hermite_basis(dim, grid)
    amps = np.trapezoid(basis * np.asarray(values)[None, :], grid, axis=1)
    return FockVector(amps).normalized()


def extremal_state(lam: complex, mean_x: float = 0.0, mean_p: float = 0.0,
                   grid: np.ndarray | None = None) -> np.ndarray:
    """Gaussian wavefunction annihilated by (Delta p - i lambda Delta x).

    Returns the complex values on the grid. Moments: var_x = 1/(2 Re lambda),
    var_p = |lambda|^2 / (2 Re lambda), cov = -Im lambda / Re lambda. Re lambda
    must be positive for normalizability.
    """
    lam = complex(lam)
    if not lam.real > 0:
        raise InvalidParameterError(f"Re lambda must be > 0, got {lam.real}")
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=float)
    dx = grid - mean_x
    return (lam.real / np.pi) ** 0.25 * np.exp(1j * mean_p * grid - 0.5 * lam * dx**2)


def extremal_fock(lam: complex, mean_x: float = 0.0, mean_p: float = 0.0,
                  dim: int = 64, grid: np.ndarray | None = None) -> FockVector:
    """Extremal Gaussian projected onto the truncated number basis."""
    if grid is None:
        grid = default_grid()
    values = extremal_state(lam, mean_x, mean_p, grid)
    state = project_to_fock(values, grid, dim)
    ensure_resolved(state)
    return state
