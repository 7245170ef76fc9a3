"""Quadrature statistics of truncated states and their classification.

Covariance is always the symmetrized second moment
cov = <x p + p x> - 2 <x><p>, the quantity that controls how the position
variance of a freely evolving packet initially grows or shrinks.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .fock import (
    HERMITIAN_IMAG_TOL,
    TAIL_MASS_TOL,
    FockVector,
    build_operators,
    ensure_resolved,
    expect_hermitian,
)
from .states import SqueezeParams

# Flags in classify() use this tolerance on variance/covariance comparisons.
CLASSIFY_TOL = 1e-7

# Allowed numerical slack on the uncertainty-relation invariant
# 4 var_x var_p - cov^2 >= 1.
ROBERTSON_SLACK = 1e-9


@dataclass(frozen=True)
class MomentSummary:
    """Second-moment data of a single-mode state (dimensionless, hbar = 1)."""

    var_x: float
    var_p: float
    cov: float
    n_bar: float
    uncertainty_product: float = field(init=False)

    def __post_init__(self):
        if not (self.var_x > 0 and self.var_p > 0):
            raise InvalidParameterError(
                f"variances must be positive, got ({self.var_x}, {self.var_p})"
            )
        if self.n_bar < -1e-12:
            raise InvalidParameterError(f"n_bar must be >= 0, got {self.n_bar}")
        margin = 4.0 * self.var_x * self.var_p - self.cov**2 - 1.0
        if margin < -ROBERTSON_SLACK:
            raise InvalidParameterError(
                "moments violate the uncertainty relation: "
                f"4 var_x var_p - cov^2 - 1 = {margin:.3e}"
            )
        object.__setattr__(
            self, "uncertainty_product", self.var_x * self.var_p
        )

    def to_json_dict(self) -> dict:
        return {
            "var_x": self.var_x,
            "var_p": self.var_p,
            "cov": self.cov,
            "n_bar": self.n_bar,
            "uncertainty_product": self.uncertainty_product,
        }


@dataclass(frozen=True)
class StateClass:
    """Qualitative flags derived from a MomentSummary."""

    is_squeezed: bool
    is_contractive: bool
    is_gcs: bool
    is_extremal: bool

    def to_json_dict(self) -> dict:
        return {
            "is_squeezed": self.is_squeezed,
            "is_contractive": self.is_contractive,
            "is_gcs": self.is_gcs,
            "is_extremal": self.is_extremal,
        }


@functools.lru_cache(maxsize=16)
def _second_moment_ops(dim: int):
    """Cached x^2, p^2, xp+px, a^dag a for a given truncation."""
    ops = build_operators(dim)
    x, p = ops.x, ops.p
    mats = (x @ x, p @ p, x @ p + p @ x, ops.adag @ ops.a)
    for m in mats:
        m.flags.writeable = False
    return mats


def summarize(state: FockVector, tail_tol: float = TAIL_MASS_TOL,
              imag_tol: float = HERMITIAN_IMAG_TOL) -> MomentSummary:
    """Means-subtracted quadrature moments of a tail-safe state."""
    ensure_resolved(state, tail_tol)
    state = state.normalized()
    ops = build_operators(state.dim)
    x2, p2, xp, num = _second_moment_ops(state.dim)

    mean_x = expect_hermitian(state, ops.x, imag_tol)
    mean_p = expect_hermitian(state, ops.p, imag_tol)
    xx = expect_hermitian(state, x2, imag_tol)
    pp = expect_hermitian(state, p2, imag_tol)
    xp_sym = expect_hermitian(state, xp, imag_tol)
    n_bar = expect_hermitian(state, num, imag_tol)

    return MomentSummary(
        var_x=xx - mean_x**2,
        var_p=pp - mean_p**2,
        cov=xp_sym - 2.0 * mean_x * mean_p,
        n_bar=max(n_bar, 0.0),
    )


def classify(summary: MomentSummary, tol: float = CLASSIFY_TOL) -> StateClass:
    """Flag squeezing, contractivity, balanced-moment (GCS) form, extremality."""
    saturation = 4.0 * summary.var_x * summary.var_p - 1.0
    return StateClass(
        is_squeezed=summary.var_x < summary.var_p - tol,
        is_contractive=summary.cov < -tol,
        is_gcs=(abs(summary.var_x - summary.var_p) < tol and abs(summary.cov) < tol),
        is_extremal=abs(summary.cov**2 - saturation) < tol,
    )


def scs_predicted_moments(params: SqueezeParams) -> MomentSummary:
    """Closed-form moments of D(alpha) S(xi) |0>; alpha drops out."""
    return sgcs_predicted_moments(0.0, params)


def sgcs_predicted_moments(n_bar: float, params: SqueezeParams) -> MomentSummary:
    """Closed-form moments of D(alpha) S(xi) |phi> for a seed with mean
    photon number n_bar.

    var_x = (n_bar + 1/2)(cosh 2r - cos theta sinh 2r)
    var_p = (n_bar + 1/2)(cosh 2r + cos theta sinh 2r)
    cov   = -(2 n_bar + 1) sin theta sinh 2r

    Note n_bar here is the seed's photon number, which the displacement and
    squeezing do not alter as a parameter of these formulas; the full state's
    own <a^dag a> is larger.
    """
    if n_bar < 0:
        raise InvalidParameterError(f"n_bar must be >= 0, got {n_bar}")
    r, theta = params.r, params.theta
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    weight = n_bar + 0.5
    var_x = weight * (ch - math.cos(theta) * sh)
    var_p = weight * (ch + math.cos(theta) * sh)
    cov = -(2 * n_bar + 1.0) * math.sin(theta) * sh

    # Internal consistency: cov must equal -sgn(sin theta) times the
    # saturation root sqrt(4 var_x var_p - (2 n_bar + 1)^2).
    root = math.sqrt(max(4.0 * var_x * var_p - (2 * n_bar + 1.0) ** 2, 0.0))
    expected = -math.copysign(root, math.sin(theta)) if math.sin(theta) != 0 else 0.0
    scale = max(1.0, abs(cov))
    if abs(cov - expected) > 1e-10 * scale:
        raise AssertionError(
            f"covariance identity violated: {cov} vs {expected}"
        )
    return MomentSummary(var_x=var_x, var_p=var_p, cov=cov, n_bar=n_bar)


def lambda_from_moments(summary: MomentSummary) -> complex:
    """Extremal-family parameter fitted from second moments.

    Re lambda = 1/(2 var_x); |Im lambda| = sqrt(4 var_x var_p - 1)/(2 var_x);
    the sign of Im lambda is -sign(cov). For states that actually saturate
    the uncertainty relation, (Delta p - i lambda Delta x) annihilates the
    state.
    """
    re = 1.0 / (2.0 * summary.var_x)
    sat = max(4.0 * summary.var_x * summary.var_p - 1.0, 0.0)
    im = -math.copysign(math.sqrt(sat) / (2.0 * summary.var_x), summary.cov)
    if summary.cov == 0.0:
        im = 0.0
    return complex(re, im)
