"""Truncated harmonic-oscillator (Fock) algebra.

Ladder matrices are assembled in extended precision (``np.clongdouble``).
Products such as ``a^dag a`` or ``[a, a^dag]`` then land on integers once
rounded back to double, which float64 square roots cannot guarantee
(``sqrt(3)**2 != 3``). Use ``as_double`` to get a complex128 matrix.

States ``|n>`` with ``n > dim - 2`` are rejected wherever the truncation
edge would corrupt the result, because ``a^dag |dim-1>`` is cut to zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDomainError
from .grid import Grid, Wavefunction, normalize
from .operators import LinearOperator, adjoint, scale

BOUNDARY_DECAY = 1e-10
WIDE = np.longdouble


@dataclass(frozen=True)
class FockSpace:
    dim: int
    omega: float = 1.0
    m: float = 1.0
    hbar: float = 1.0
    p_eff: float = 1.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 3:
            raise DomainError(f"Fock space needs dim >= 3, got {self.dim}")
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if self.m == 0:
            raise DomainError("Fock space mass must be nonzero")
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")

    @property
    def max_level(self) -> int:
        """Highest level free of truncation artifacts."""
        return self.dim - 2

    def check_level(self, n: int):
        if int(n) != n or not 0 <= n <= self.max_level:
            raise DomainError(f"level n={n} outside 0..{self.max_level} for dim={self.dim}")


@dataclass(frozen=True)
class FockVector:
    space: FockSpace
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.clongdouble)
        if c.shape != (self.space.dim,):
            raise DomainError(f"expected {self.space.dim} coefficients, got shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def __matmul__(self, other: "FockVector") -> complex:
        return complex(np.vdot(self.coeffs, other.coeffs))


def basis(space: FockSpace, n: int) -> FockVector:
    if int(n) != n or not 0 <= n < space.dim:
        raise DomainError(f"basis index {n} outside 0..{space.dim - 1}")
    c = np.zeros(space.dim, dtype=np.clongdouble)
    c[n] = 1
    return FockVector(space, c)


def apply(op: LinearOperator, vec: FockVector) -> FockVector:
    return FockVector(vec.space, op.apply(vec.coeffs))


def as_double(op: LinearOperator) -> np.ndarray:
    return op.matrix.astype(np.complex128)


def lowering_matrix(space: FockSpace) -> LinearOperator:
    """``a|n> = sqrt(n) |n-1>``."""
    m = np.diag(np.sqrt(np.arange(1, space.dim, dtype=WIDE)), 1)
    return LinearOperator(m.astype(np.clongdouble))


def raising_matrix(space: FockSpace) -> LinearOperator:
    """``a^dag|n> = sqrt(n+1) |n+1>``; ``a^dag|dim-1>`` truncates to zero."""
    return adjoint(lowering_matrix(space))


def number_operator(space: FockSpace) -> LinearOperator:
    a = lowering_matrix(space)
    return LinearOperator(raising_matrix(space).matrix @ a.matrix)


def fock_identity(space: FockSpace) -> LinearOperator:
    return LinearOperator(np.eye(space.dim, dtype=np.clongdouble))


def momentum_prefactor(space: FockSpace) -> WIDE:
    """``sqrt(m hbar omega / 2)``; negative arguments are an error, not complex."""
    arg = WIDE(space.m) * WIDE(space.hbar) * WIDE(space.omega) / 2
    if arg <= 0:
        raise DomainError(
            f"m*hbar*omega/2 = {float(arg)} is not positive; the ladder momentum would be complex"
        )
    return np.sqrt(arg)


def momentum_ladder(space: FockSpace) -> LinearOperator:
    """``i sqrt(m hbar omega / 2) (a - a^dag)``."""
    c = momentum_prefactor(space)
    a, ad = lowering_matrix(space), raising_matrix(space)
    return LinearOperator(1j * c * (a.matrix - ad.matrix))


def _require_p_eff(space: FockSpace):
    if space.p_eff == 0:
        raise DomainError("time_ladder needs a nonzero p_eff")


def time_ladder(space: FockSpace) -> LinearOperator:
    """``(m / p_eff^2)`` times the ladder momentum."""
    _require_p_eff(space)
    return scale(momentum_ladder(space), WIDE(space.m) / WIDE(space.p_eff) ** 2)


def alpha(space: FockSpace) -> complex:
    """Scalar prefactor of ``(a - a^dag)`` in the ladder time operator."""
    _require_p_eff(space)
    return complex(1j * (WIDE(space.m) / WIDE(space.p_eff) ** 2) * momentum_prefactor(space))


def fock_expectation(op: LinearOperator, n: int, space: FockSpace) -> complex:
    """``<n|op|n>`` by direct indexing; ``n`` must avoid the truncation edge."""
    space.check_level(n)
    if op.dim != space.dim:
        raise DomainError(f"operator dimension {op.dim} does not match Fock dim {space.dim}")
    return complex(op.matrix[n, n])


def oscillator_eigenfunction(n: int, grid: Grid, space: FockSpace) -> Wavefunction:
    """Normalized Hermite function psi_n sampled on ``grid``.

    Uses the stable recurrence for normalized Hermite functions
    ``psi_{k+1} = sqrt(2/(k+1)) xi psi_k - sqrt(k/(k+1)) psi_{k-1}``
    with ``xi = sqrt(m omega / hbar) x``, then rescales by the quadrature norm.
    """
    space.check_level(n)
    if space.m <= 0:
        raise DomainError("oscillator eigenfunctions need positive mass")
    s = math.sqrt(space.m * space.omega / space.hbar)
    xi = s * grid.points
    prev = np.zeros_like(xi)
    cur = (s / math.sqrt(math.pi)) ** 0.5 * np.exp(-(xi**2) / 2)
    for k in range(n):
        prev, cur = cur, math.sqrt(2 / (k + 1)) * xi * cur - math.sqrt(k / (k + 1)) * prev
    edge = max(abs(cur[0]), abs(cur[-1]))
    if edge >= BOUNDARY_DECAY:
        raise InsufficientDomainError(
            f"psi_{n} is {edge:.3g} at the grid boundary (needs < {BOUNDARY_DECAY}); widen [{grid.a}, {grid.b}]"
        )
    return normalize(Wavefunction(grid, cur))


def jump_time_bound(delta_E: float, hbar: float = 1.0) -> float:
    """Smallest ``Delta t`` allowed by ``Delta E * Delta t >= hbar / 2``."""
    if not delta_E > 0:
        raise DomainError(f"delta_E must be positive, got {delta_E}")
    if not hbar > 0:
        raise DomainError(f"hbar must be positive, got {hbar}")
    return hbar / (2 * delta_E)


@dataclass(frozen=True)
class JumpCheck:
    ok: bool
    tau_J: float
    delta_t: float
    margin: float  # delta_t - tau_J; negative when the bound is violated

    def __bool__(self):
        return self.ok


def check_jump_inequality(tau_J: float, delta_t: float) -> JumpCheck:
    """Test ``tau_J <= delta_t`` (inclusive)."""
    if tau_J < 0:
        raise DomainError(f"tau_J must be nonnegative, got {tau_J}")
    if not delta_t > 0:
        raise DomainError(f"delta_t must be positive, got {delta_t}")
    return JumpCheck(tau_J <= delta_t, tau_J, delta_t, delta_t - tau_J)
