"""Dense truncated Fock space: states, ladder operators, expectation values.

Everything here is dimensionless (hbar = 1). Quadratures follow
x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)), so [x, p] = i on the
truncation-safe block (all rows/columns except the last).
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    OutOfRangeError,
    TrivialStateError,
    TruncationError,
)

# Default threshold on the probability weight sitting in the top decile of
# the ladder; states above it are rejected as under-resolved.
TAIL_MASS_TOL = 1e-8

# Expectation values of Hermitian operators must be real to this tolerance.
HERMITIAN_IMAG_TOL = 1e-10

OperatorMatrix = np.ndarray
"""Dense complex matrix acting on the truncated space (shape (dim, dim))."""


@dataclass(frozen=True)
class FockVector:
    """Normalized state vector over number states |0> .. |dim-1>."""

    amps: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amps, dtype=complex)
        if arr.ndim != 1:
            raise InvalidDimensionError(f"amplitudes must be 1-D, got shape {arr.shape}")
        if arr.size < 2:
            raise InvalidDimensionError(f"dim must be >= 2, got {arr.size}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            raise TrivialStateError("cannot normalize the zero vector")
        return FockVector(self.amps / n)

    def tail_mass(self) -> float:
        """Probability weight on the top decile of the ladder."""
        start = int(np.floor(0.9 * self.dim))
        return float(np.sum(np.abs(self.amps[start:]) ** 2))

    def padded(self, dim: int) -> "FockVector":
        """Embed into a larger space by appending zero amplitudes."""
        if dim < self.dim:
            raise InvalidDimensionError(
                f"cannot pad dim {self.dim} down to {dim}"
            )
        if dim == self.dim:
            return self
        out = np.zeros(dim, dtype=complex)
        out[: self.dim] = self.amps
        return FockVector(out)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": [float(v) for v in self.amps.real],
            "im": [float(v) for v in self.amps.imag],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FockVector":
        dim = int(data["dim"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
        if re.size != dim or im.size != dim:
            raise DimensionMismatchError(
                f"array lengths {re.size}/{im.size} do not match dim {dim}"
            )
        return cls(re + 1j * im)

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "FockVector":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class CutoffReport:
    """Truncation health of a state at its current cutoff."""

    tail_mass: float
    dim: int

    def ok(self, threshold: float = TAIL_MASS_TOL) -> bool:
        return self.tail_mass < threshold


class Operators(NamedTuple):
    a: OperatorMatrix
    adag: OperatorMatrix
    x: OperatorMatrix
    p: OperatorMatrix


def destroy(dim: int) -> OperatorMatrix:
    """Truncated annihilation operator, a[m-1, m] = sqrt(m)."""
    if dim < 2:
        raise InvalidDimensionError(f"dim must be >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def create(dim: int) -> OperatorMatrix:
    return destroy(dim).conj().T


def number(dim: int) -> OperatorMatrix:
    if dim < 2:
        raise InvalidDimensionError(f"dim must be >= 2, got {dim}")
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


@functools.lru_cache(maxsize=16)
def build_operators(dim: int) -> Operators:
    """Ladder and quadrature operators at the given cutoff (cached, read-only)."""
    a = destroy(dim)
    adag = a.conj().T
    x = (a + adag) / np.sqrt(2)
    p = (a - adag) / (1j * np.sqrt(2))
    for m in (a, adag, x, p):
        m.setflags(write=False)
    return Operators(a, adag, x, p)


def number_state(n: int, dim: int) -> FockVector:
    """Number state |n> at the given cutoff."""
    if not 0 <= n < dim:
        raise OutOfRangeError(f"level n={n} outside [0, {dim})")
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def random_state(dim: int, rng: np.random.Generator, occupied: int | None = None) -> FockVector:
    """Random normalized state with a Gaussian amplitude envelope.

    The envelope keeps the top decile of the ladder essentially empty so the
    state is safe against truncation artifacts. `occupied` sets the scale of
    the populated band (default dim // 5).
    """
    if occupied is None:
        occupied = max(2, dim // 5)
    m = np.arange(dim)
    envelope = np.exp(-((m / occupied) ** 2))
    amps = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) * envelope
    vec = FockVector(amps)
    return vec.normalized()


def expect(state: FockVector, op: OperatorMatrix) -> complex:
    """<state| op |state> as a complex number."""
    op = np.asarray(op)
    if op.shape != (state.dim, state.dim):
        raise DimensionMismatchError(
            f"operator shape {op.shape} does not match state dim {state.dim}"
        )
    return complex(np.vdot(state.amps, op @ state.amps))


def expect_hermitian(state: FockVector, op: OperatorMatrix,
                     imag_tol: float = HERMITIAN_IMAG_TOL) -> float:
    """Expectation of a Hermitian operator; rejects stray imaginary parts."""
    val = expect(state, op)
    if abs(val.imag) > imag_tol:
        raise ValueError(
            f"expectation has imaginary part {val.imag:.3e} beyond {imag_tol:.1e}; "
            "operator is not Hermitian or state is corrupted"
        )
    return val.real


def cutoff_report(state: FockVector) -> CutoffReport:
    return CutoffReport(tail_mass=state.tail_mass(), dim=state.dim)


def ensure_resolved(state: FockVector, threshold: float = TAIL_MASS_TOL) -> None:
    """Raise TruncationError if the state is under-resolved at its cutoff."""
    tail = state.tail_mass()
    if not tail < threshold:
        raise TruncationError(tail, threshold, state.dim)
