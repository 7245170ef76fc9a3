"""Exception types shared across the toolkit."""


class ContractiveError(Exception):
    """Base class for all toolkit errors."""


class InvalidDimensionError(ContractiveError):
    """Requested Fock-space dimension is too small or inconsistent."""


class DimensionMismatchError(ContractiveError):
    """Operands live in Fock spaces of different dimension."""


class TruncationError(ContractiveError):
    """State carries too much weight near the cutoff to be trusted."""

    def __init__(self, tail_mass: float, threshold: float, dim: int):
        self.tail_mass = tail_mass
        self.threshold = threshold
        self.dim = dim
        super().__init__(
            f"state under-resolved at dim={dim}: tail mass {tail_mass:.3e} "
            f"exceeds threshold {threshold:.3e}"
        )


class OutOfRangeError(ContractiveError):
    """A level index or parameter falls outside its admissible range."""


class InvalidSpecError(ContractiveError):
    """A state specification is structurally invalid."""


class DegenerateSpecError(ContractiveError):
    """The seed-construction system is singular for these coefficients."""

    def __init__(self, determinant: complex, message: str = ""):
        self.determinant = determinant
        text = message or "seed system is singular"
        super().__init__(f"{text} (|det| = {abs(determinant):.3e})")


class TrivialStateError(ContractiveError):
    """A construction produced the zero vector."""


class SeedConditionError(ContractiveError):
    """Seed state fails the vanishing first/second ladder-moment conditions."""

    def __init__(self, residual_a: float, residual_a2: float, tol: float):
        self.residual_a = residual_a
        self.residual_a2 = residual_a2
        self.tol = tol
        super().__init__(
            f"seed fails ladder-moment conditions: |<a>| = {residual_a:.3e}, "
            f"|<a^2>| = {residual_a2:.3e} (tol {tol:.1e})"
        )


class NotContractiveError(ContractiveError):
    """Requested a contraction window for a state with non-negative covariance."""


class InvalidParameterError(ContractiveError):
    """A physical parameter violates its constraint (e.g. non-positive mass)."""
