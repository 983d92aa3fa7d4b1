"""Shape-invariant nonlinear oscillators with position-dependent mass.

Each family pairs a mass law m(x) with the confining potential
V(x) = ½ m(x) α² x², factorized through the superpotential
W(x) = α x √(m(x)/2).  The partner potentials obey

    V₊(x; αₙ) = V₋(x; αₙ₊₁) + R(αₙ),    αₙ₊₁ = αₙ + η,

with a remainder R(αₙ) = αₙ₊₁ that is independent of x, so the whole
spectrum follows from summing remainders: Eₙ = E₀ + Σ_{i=0..n−1} R(α_i).
The closed forms below are hand-expanded; no symbolic differentiation
happens at runtime.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstraintViolatedError,
    InvalidLambdaError,
    NonPositiveAlphaError,
    NotABoundStateError,
    OutOfDomainError,
)


class Kind(enum.Enum):
    """The supported mass laws."""

    CASE1 = "case1"      # m(x) = 1/(1 + λx²)
    CASE2 = "case2"      # m(x) = (1 + x²/λ)⁻¹
    CASE3 = "case3"      # m(x) = 2/(1 − (λx)²)
    CONSTANT = "constant"  # m(x) = 1


@dataclass(frozen=True)
class MassProfile:
    """A mass law together with the open interval where it is positive."""

    kind: Kind
    lam: float
    lo: float
    hi: float

    def contains(self, x) -> bool:
        return bool(np.all((x > self.lo) & (x < self.hi)))


@dataclass(frozen=True)
class ShapeInvariantFamily:
    """A mass profile plus oscillator strength α and translation step η.

    The parameter chain is α_n = alpha0 + n·eta (n ≥ 0) and the remainder
    is always the next parameter in the chain.
    """

    profile: MassProfile
    alpha0: float
    eta: float
    remainder_is_next_alpha: bool = field(default=True)


@dataclass(frozen=True)
class SpectrumTable:
    """Ground energy plus the ordered levels up to some index.

    bound_count is None for families whose whole ladder is normalizable.
    """

    ground_energy: float
    entries: tuple
    bound_count: int | None


@dataclass(frozen=True)
class VonRoosOrdering:
    """Kinetic-term ordering exponents, constrained by a + b + c = -1."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a + self.b + self.c != -1.0:
            raise ConstraintViolatedError(
                f"ordering ({self.a}, {self.b}, {self.c}) violates a+b+c = -1"
            )


SYMMETRIC_ORDERING = VonRoosOrdering(0.0, -1.0, 0.0)


def make_family(kind: Kind, alpha: float, lam: float = 0.0) -> ShapeInvariantFamily:
    """Build a family from its kind, oscillator strength and deformation.

    The Constant kind ignores lam.  Case 2 and Case 3 reject lam = 0:
    for Case 2 the mass is undefined there (its constant-mass limit is
    lam → ∞), and for Case 3 the mass would be the constant 2, which is
    a plain harmonic oscillator better served by Kind.CONSTANT.
    """
    if not (alpha > 0) or not math.isfinite(alpha):
        raise NonPositiveAlphaError(f"alpha must be positive and finite, got {alpha}")
    if not math.isfinite(lam):
        raise InvalidLambdaError(f"lambda must be finite, got {lam}")

    if kind == Kind.CONSTANT:
        return ShapeInvariantFamily(
            MassProfile(kind, 0.0, -math.inf, math.inf), alpha, 0.0)
    if kind == Kind.CASE1:
        if lam < 0:
            edge = 1.0 / math.sqrt(-lam)
            profile = MassProfile(kind, lam, -edge, edge)
        else:
            profile = MassProfile(kind, lam, -math.inf, math.inf)
        return ShapeInvariantFamily(profile, alpha, -lam)
    if kind == Kind.CASE2:
        if lam == 0:
            raise InvalidLambdaError("Case 2 requires lambda != 0; "
                                     "its constant-mass limit is lambda -> inf")
        if lam < 0:
            edge = math.sqrt(-lam)
            profile = MassProfile(kind, lam, -edge, edge)
        else:
            profile = MassProfile(kind, lam, -math.inf, math.inf)
        return ShapeInvariantFamily(profile, alpha, -1.0 / lam)
    if kind == Kind.CASE3:
        if lam == 0:
            raise InvalidLambdaError("Case 3 requires lambda != 0; "
                                     "the lambda = 0 mass is the constant 2 "
                                     "(use Kind.CONSTANT for a harmonic oscillator)")
        edge = 1.0 / abs(lam)
        return ShapeInvariantFamily(
            MassProfile(kind, lam, -edge, edge), alpha, 0.5 * lam * lam)
    raise ValueError(f"unknown kind {kind!r}")


def _require_inside(profile: MassProfile, x) -> None:
    if not profile.contains(x):
        raise OutOfDomainError(
            f"x outside open domain ({profile.lo}, {profile.hi})")


def mass_at(profile: MassProfile, x):
    """m(x) for scalar or array x strictly inside the domain."""
    _require_inside(profile, x)
    lam = profile.lam
    if profile.kind == Kind.CASE1:
        return 1.0 / (1.0 + lam * np.square(x))
    if profile.kind == Kind.CASE2:
        return 1.0 / (1.0 + np.square(x) / lam)
    if profile.kind == Kind.CASE3:
        return 2.0 / (1.0 - np.square(lam * x))
    return np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0


def superpotential_at(family: ShapeInvariantFamily, alpha_n: float, x):
    """W(x; αₙ) = αₙ x √(m(x)/2).  Odd in x, and W/√(2m) = αₙx/2 exactly."""
    m = mass_at(family.profile, x)
    return alpha_n * x * np.sqrt(0.5 * m)


def potential_minus(family: ShapeInvariantFamily, alpha_n: float, x):
    """V₋(x; αₙ) = W² − (W/√(2m))′, expanded per family."""
    _require_inside(family.profile, x)
    lam = family.profile.lam
    a = alpha_n
    x2 = np.square(x)
    if family.profile.kind == Kind.CASE1:
        return 0.5 * a * a * x2 / (1.0 + lam * x2) - 0.5 * a
    if family.profile.kind == Kind.CASE2:
        return 0.5 * a * a * x2 / (1.0 + x2 / lam) - 0.5 * a
    if family.profile.kind == Kind.CASE3:
        return a * a * x2 / (1.0 - lam * lam * x2) - 0.5 * a
    return 0.5 * a * a * x2 - 0.5 * a


def potential_plus(family: ShapeInvariantFamily, alpha_n: float, x):
    """Partner potential V₊(x; αₙ); equals V₋(x; αₙ + η) + R(αₙ)."""
    _require_inside(family.profile, x)
    lam = family.profile.lam
    a = alpha_n
    x2 = np.square(x)
    if family.profile.kind == Kind.CASE1:
        return 0.5 * (a - lam) ** 2 * x2 / (1.0 + lam * x2) + 0.5 * (a - lam)
    if family.profile.kind == Kind.CASE2:
        b = a - 1.0 / lam
        return 0.5 * b * b * x2 / (1.0 + x2 / lam) + 0.5 * b
    if family.profile.kind == Kind.CASE3:
        b = a + 0.5 * lam * lam
        return b * b * x2 / (1.0 - lam * lam * x2) + 0.5 * a + 0.25 * lam * lam
    return 0.5 * a * a * x2 + 0.5 * a


def potential_full(family: ShapeInvariantFamily, x):
    """V(x) = ½ m(x) α² x², the confining potential of the Hamiltonian."""
    a = family.alpha0
    return 0.5 * mass_at(family.profile, x) * a * a * np.square(x)


def alpha_at(family: ShapeInvariantFamily, n: int) -> float:
    """α_n = alpha0 + n·eta."""
    return family.alpha0 + n * family.eta


def remainder(family: ShapeInvariantFamily, alpha_n: float) -> float:
    """R(αₙ) = αₙ + η, the constant by which the partners differ."""
    return alpha_n + family.eta


def unified_deformation(family: ShapeInvariantFamily) -> float:
    """The single deformation parameter q with Eₙ = α[(n+½) − q·n(n+1)/2].

    q = λ/α (Case 1), 1/(αλ) (Case 2), −λ²/(2α) (Case 3), 0 (Constant).
    """
    kind = family.profile.kind
    lam = family.profile.lam
    if kind == Kind.CASE1:
        return lam / family.alpha0
    if kind == Kind.CASE2:
        return 1.0 / (family.alpha0 * lam)
    if kind == Kind.CASE3:
        return -0.5 * lam * lam / family.alpha0
    return 0.0


def bound_state_count(family: ShapeInvariantFamily) -> int | None:
    """Number of normalizable levels, or None when the whole ladder is bound.

    For positive deformation the n-th state decays like x^(n - 1/q), so
    square integrability demands n < 1/q - 1/2.  Compact domains and
    Gaussian tails bind every level.
    """
    q = unified_deformation(family)
    if q > 0:
        return max(0, math.ceil(1.0 / q - 0.5))
    return None


def energy(family: ShapeInvariantFamily, n: int) -> float:
    """Closed-form level Eₙ; refuses indices past the bound-state cutoff."""
    if n < 0:
        raise ValueError(f"level index must be nonnegative, got {n}")
    count = bound_state_count(family)
    if count is not None and n >= count:
        raise NotABoundStateError(
            f"level {n} is not a bound state; this family binds "
            f"{count} levels (n = 0..{count - 1})")
    a = family.alpha0
    lam = family.profile.lam
    kind = family.profile.kind
    if kind == Kind.CASE1:
        return a * (n + 0.5) - 0.5 * lam * n * (n + 1)
    if kind == Kind.CASE2:
        return a * (n + 0.5) - 0.5 * n * (n + 1) / lam
    if kind == Kind.CASE3:
        return a * (n + 0.5) + 0.25 * lam * lam * n * (n + 1)
    return a * (n + 0.5)


def energy_via_recursion(family: ShapeInvariantFamily, n: int) -> float:
    """Eₙ = E₀ + Σ_{i=1..n} R(α_i), the ladder route to the same number."""
    if n < 0:
        raise ValueError(f"level index must be nonnegative, got {n}")
    count = bound_state_count(family)
    if count is not None and n >= count:
        raise NotABoundStateError(
            f"level {n} is not a bound state; this family binds "
            f"{count} levels (n = 0..{count - 1})")
    total = 0.5 * family.alpha0
    for k in range(n):
        total += remainder(family, alpha_at(family, k))
    return total


def ground_state_unnormalized(family: ShapeInvariantFamily, x):
    """The zero-mode exp(−∫√(2m) W dx), normalized to 1 at x = 0."""
    _require_inside(family.profile, x)
    a = family.alpha0
    lam = family.profile.lam
    kind = family.profile.kind
    x2 = np.square(x)
    if kind == Kind.CASE1:
        if lam == 0.0:
            return np.exp(-0.5 * a * x2)
        return np.power(1.0 + lam * x2, -0.5 * a / lam)
    if kind == Kind.CASE2:
        return np.power(1.0 + x2 / lam, -0.5 * a * lam)
    if kind == Kind.CASE3:
        return np.power(1.0 - lam * lam * x2, a / (lam * lam))
    return np.exp(-0.5 * a * x2)


def spectrum_table(family: ShapeInvariantFamily, n_max: int) -> SpectrumTable:
    """Levels 0..n_max from the closed forms."""
    entries = tuple((n, energy(family, n)) for n in range(n_max + 1))
    return SpectrumTable(entries[0][1], entries, bound_state_count(family))
