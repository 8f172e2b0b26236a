"""The named free-particle operators and their closed-form companions.

The momentum eigenvalue ``p`` that appears in the displacement and time
operators is a scalar parameter, not an operator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DomainError
from .grid import Grid, Wavefunction, expectation
from .operators import (
    LinearOperator,
    commutator,
    first_derivative,
    scale,
    second_derivative,
)

STANDARD = "standard"
PAPER_LITERAL = "paper_literal"
HEISENBERG_CONVENTIONS = (STANDARD, PAPER_LITERAL)


@dataclass(frozen=True)
class ParticleParams:
    m: float = 1.0
    p: float = 2.0
    v: Optional[float] = None
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")

    @classmethod
    def from_velocity(cls, m: float, v: float, hbar: float = 1.0) -> "ParticleParams":
        """Classical correspondence ``p = m v``."""
        return cls(m=m, p=m * v, v=v, hbar=hbar)

    def require_mass(self):
        if self.m == 0:
            raise DomainError("operator is undefined for zero mass")

    def require_momentum(self):
        if self.p == 0:
            raise DomainError("operator is undefined for zero momentum eigenvalue p")


def momentum_operator(grid: Grid, bc: str, params: ParticleParams = ParticleParams()) -> LinearOperator:
    """``-i hbar d/dx``."""
    return scale(first_derivative(grid, bc), -1j * params.hbar)


def kinetic_operator(grid: Grid, bc: str, params: ParticleParams) -> LinearOperator:
    """``-(hbar^2 / 2m) d^2/dx^2``."""
    params.require_mass()
    return scale(second_derivative(grid, bc), -(params.hbar**2) / (2 * params.m))


def velocity_operator(grid: Grid, bc: str, params: ParticleParams, branch: str = "minus") -> LinearOperator:
    """Square root of ``2 T / m``, built from the first derivative.

    The ``minus`` branch, ``-(i hbar / m) d/dx``, has plane waves of momentum
    ``p`` as eigenvectors with eigenvalue ``p/m``.
    """
    params.require_mass()
    if branch not in ("minus", "plus"):
        raise DomainError(f"branch must be 'minus' or 'plus', got {branch!r}")
    minus = scale(momentum_operator(grid, bc, params), 1 / params.m)
    return minus if branch == "minus" else scale(minus, -1)


def displacement_operator(grid: Grid, bc: str, params: ParticleParams) -> LinearOperator:
    """``-(hbar^2 / p^2) d^2/dx^2``; a plane wave of momentum p has eigenvalue 1."""
    params.require_momentum()
    return scale(second_derivative(grid, bc), -(params.hbar**2) / params.p**2)


def time_operator(grid: Grid, bc: str, params: ParticleParams) -> LinearOperator:
    """``(hbar m / (i p^2)) d/dx``, assembled as ``(m/p^2)`` times the momentum operator.

    Building it from the momentum operator keeps ``t = (m/p^2) p`` an exact
    entrywise identity, and makes ``m = 0`` give the exact zero matrix.
    """
    params.require_momentum()
    return scale(momentum_operator(grid, bc, params), params.m / params.p**2)


def expected_time_closed_form(params: ParticleParams, a: float, b: float) -> float:
    """``m (b - a) / p``, which equals ``(b - a) / v`` when ``p = m v``."""
    params.require_momentum()
    return params.m * (b - a) / params.p


def heisenberg_rate(
    A: LinearOperator,
    H: LinearOperator,
    psi: Wavefunction,
    convention: str = STANDARD,
    hbar: float = 1.0,
) -> complex:
    """Rate of change of ``<A>`` for a time-independent ``A``.

    ``standard`` is ``(i/hbar) <[H, A]>``; ``paper_literal`` is
    ``i hbar <[A, H]>``. The explicit time-derivative term is zero.
    """
    if convention not in HEISENBERG_CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}; expected one of {HEISENBERG_CONVENTIONS}")
    if A.time_dependent:
        raise DomainError("explicitly time-dependent operators are not supported")
    if convention == STANDARD:
        return (1j / hbar) * expectation(commutator(H, A), psi)
    return 1j * hbar * expectation(commutator(A, H), psi)
