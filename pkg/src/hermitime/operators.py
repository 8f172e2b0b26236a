"""Dense matrix realizations of differential operators.

Every operator carries the grid it acts on and a boundary convention:

``periodic``
    indices wrap; requires a periodic grid. Central stencils become
    circulants, so the first derivative is exactly antisymmetric and any two
    stencil operators commute.
``dirichlet_vanishing``
    ghost samples just outside ``[a, b]`` are taken as zero. The matrix stays
    a truncated Toeplitz band and the first derivative remains antisymmetric.
``one_sided``
    second-order one-sided closures in the first and last rows. Not
    Hermitian, but accurate for functions that do not vanish at the ends;
    used for plane-wave expectations on closed intervals.

Operators built on a Fock basis have ``grid=None`` and ``bc=None``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DomainError, MismatchError
from .grid import UNNORMALIZED, Grid, Wavefunction, inner_product, norm

PERIODIC_BC = "periodic"
DIRICHLET = "dirichlet_vanishing"
ONE_SIDED = "one_sided"
BOUNDARY_CONDITIONS = (PERIODIC_BC, DIRICHLET, ONE_SIDED)


def _check_bc(grid: Grid, bc: str):
    if bc not in BOUNDARY_CONDITIONS:
        raise DomainError(f"unknown boundary convention {bc!r}; expected one of {BOUNDARY_CONDITIONS}")
    if (bc == PERIODIC_BC) != grid.periodic:
        raise MismatchError(f"boundary convention {bc!r} is incompatible with a {grid.topology} grid")


@dataclass(frozen=True, eq=False)
class LinearOperator:
    matrix: np.ndarray
    grid: Optional[Grid] = None
    bc: Optional[str] = None
    time_dependent: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if not np.iscomplexobj(m):
            m = m.astype(np.clongdouble if m.dtype == np.longdouble else np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"operator matrix must be square, got shape {m.shape}")
        if self.grid is not None:
            if m.shape[0] != self.grid.n:
                raise MismatchError(f"matrix dimension {m.shape[0]} does not match grid size {self.grid.n}")
            _check_bc(self.grid, self.bc)
        elif self.bc is not None:
            raise DomainError("a boundary convention needs a grid")
        if self.time_dependent:
            raise DomainError("explicitly time-dependent operators are not supported")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, psi):
        """Matrix-vector product. Wavefunctions in, wavefunctions out."""
        if isinstance(psi, Wavefunction):
            if self.grid is None or psi.grid != self.grid:
                raise MismatchError("wavefunction grid does not match operator grid")
            return Wavefunction(psi.grid, (self.matrix @ psi.values).astype(np.complex128), UNNORMALIZED)
        vec = np.asarray(psi)
        if vec.shape[0] != self.dim:
            raise MismatchError(f"vector of length {vec.shape[0]} for a {self.dim}-dim operator")
        return self.matrix @ vec

    def __matmul__(self, other):
        if isinstance(other, LinearOperator):
            return compose(self, other)
        return self.apply(other)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    def __rmul__(self, c):
        return scale(self, c)

    def _like(self, matrix) -> "LinearOperator":
        return LinearOperator(matrix, self.grid, self.bc)


def _check_compatible(A: LinearOperator, B: LinearOperator):
    if A.dim != B.dim:
        raise MismatchError(f"operator dimensions differ: {A.dim} vs {B.dim}")
    if A.grid != B.grid or A.bc != B.bc:
        raise MismatchError(f"operators live on different grids or boundary conventions: ({A.grid}, {A.bc}) vs ({B.grid}, {B.bc})")


def identity(grid: Grid, bc: str) -> LinearOperator:
    return LinearOperator(np.eye(grid.n), grid, bc)


def zero(grid: Grid, bc: str) -> LinearOperator:
    return LinearOperator(np.zeros((grid.n, grid.n)), grid, bc)


def position(grid: Grid, bc: str) -> LinearOperator:
    """Multiplication by x."""
    return LinearOperator(np.diag(grid.points), grid, bc)


def _band(n: int, offsets: dict, wrap: bool) -> np.ndarray:
    m = np.zeros((n, n))
    i = np.arange(n)
    for off, coef in offsets.items():
        j = i + off
        if wrap:
            m[i, j % n] += coef
        else:
            keep = (j >= 0) & (j < n)
            m[i[keep], j[keep]] += coef
    return m


def first_derivative(grid: Grid, bc: str) -> LinearOperator:
    """Central difference ``(f[i+1] - f[i-1]) / 2h``."""
    _check_bc(grid, bc)
    h = grid.h
    m = _band(grid.n, {1: 1 / (2 * h), -1: -1 / (2 * h)}, wrap=bc == PERIODIC_BC)
    if bc == ONE_SIDED:
        m[0, :3] = np.array([-3.0, 4.0, -1.0]) / (2 * h)
        m[-1, -3:] = np.array([1.0, -4.0, 3.0]) / (2 * h)
    return LinearOperator(m, grid, bc)


def second_derivative(grid: Grid, bc: str) -> LinearOperator:
    """Central difference ``(f[i+1] - 2 f[i] + f[i-1]) / h^2``."""
    _check_bc(grid, bc)
    h2 = grid.h**2
    m = _band(grid.n, {1: 1 / h2, 0: -2 / h2, -1: 1 / h2}, wrap=bc == PERIODIC_BC)
    if bc == ONE_SIDED:
        if grid.n < 4:
            raise DomainError("one-sided second derivative needs n >= 4")
        m[0, :4] = np.array([2.0, -5.0, 4.0, -1.0]) / h2
        m[-1, -4:] = np.array([-1.0, 4.0, -5.0, 2.0]) / h2
    return LinearOperator(m, grid, bc)


def _uniform_weights(grid: Optional[Grid]) -> bool:
    return grid is None or grid.periodic


def adjoint(op: LinearOperator) -> LinearOperator:
    """Adjoint with respect to the grid's quadrature inner product.

    With weights W this is ``W^-1 M^H W``; on periodic grids and Fock
    spaces the weights are uniform and it reduces to the conjugate transpose.
    """
    mh = op.matrix.conj().T
    if _uniform_weights(op.grid):
        return op._like(mh)
    w = op.grid.weights
    return op._like(mh * w[None, :] / w[:, None])


class HermiticityResidual(NamedTuple):
    probe: float  # max over pairs of |<Mf, g> - <f, Mg>| / (|f| |g|)
    matrix: float  # max |M - adjoint(M)|


def matrix_residual(op: LinearOperator) -> float:
    return float(np.max(np.abs(op.matrix - adjoint(op).matrix)))


def hermiticity_residual(op: LinearOperator, probes: Sequence[Wavefunction]) -> HermiticityResidual:
    if not probes:
        raise DomainError("hermiticity_residual needs at least one probe")
    images = [op.apply(f) for f in probes]
    norms = [norm(f) for f in probes]
    worst = 0.0
    for f, mf, nf in zip(probes, images, norms):
        for g, mg, ng in zip(probes, images, norms):
            r = abs(inner_product(mf, g) - inner_product(f, mg)) / (nf * ng)
            worst = max(worst, r)
    return HermiticityResidual(worst, matrix_residual(op))


def commutator(A: LinearOperator, B: LinearOperator) -> LinearOperator:
    _check_compatible(A, B)
    return A._like(A.matrix @ B.matrix - B.matrix @ A.matrix)


def scale(op: LinearOperator, c) -> LinearOperator:
    return op._like(c * op.matrix)


def add(A: LinearOperator, B: LinearOperator) -> LinearOperator:
    _check_compatible(A, B)
    return A._like(A.matrix + B.matrix)


def compose(A: LinearOperator, B: LinearOperator) -> LinearOperator:
    _check_compatible(A, B)
    return A._like(A.matrix @ B.matrix)
