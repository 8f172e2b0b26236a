"""Uniform 1D grids, sampled wavefunctions and quadrature.

Closed grids include both endpoints and integrate with the composite
trapezoidal rule. Periodic grids identify ``b`` with ``a`` and use uniform
weights, which is the trapezoidal rule for periodic integrands.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MismatchError, ZeroNormError

CLOSED = "closed"
PERIODIC = "periodic"
TOPOLOGIES = (CLOSED, PERIODIC)

UNIT_AMPLITUDE = "unit_amplitude"
L2_NORMALIZED = "l2_normalized"
# vectors that carry neither guarantee, e.g. the image of an operator
UNNORMALIZED = "unnormalized"
CONVENTIONS = (UNIT_AMPLITUDE, L2_NORMALIZED, UNNORMALIZED)

NORM_TOL = 1e-12


def _frozen(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    n: int
    topology: str = CLOSED
    points: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise DomainError(f"unknown topology {self.topology!r}; expected one of {TOPOLOGIES}")
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"grid needs n >= 3 points, got {self.n}")
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or self.b <= self.a:
            raise DomainError(f"grid needs finite b > a, got a={self.a}, b={self.b}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "n", int(self.n))
        h = self.h
        x = self.a + h * np.arange(self.n)
        w = np.full(self.n, h)
        if self.topology == CLOSED:
            x[-1] = self.b
            w[0] = w[-1] = h / 2
        object.__setattr__(self, "points", _frozen(x))
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def h(self) -> float:
        cells = self.n - 1 if self.topology == CLOSED else self.n
        return (self.b - self.a) / cells

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def periodic(self) -> bool:
        return self.topology == PERIODIC

    def refined(self) -> "Grid":
        """Grid on the same interval with half the spacing."""
        n = 2 * self.n - 1 if self.topology == CLOSED else 2 * self.n
        return Grid(self.a, self.b, n, self.topology)


def make_uniform_grid(a: float, b: float, n: int, topology: str = CLOSED) -> Grid:
    return Grid(a, b, n, topology)


@dataclass(frozen=True)
class PlaneWaveParams:
    """Free-particle state ``A exp(i(p x - E t)/hbar)``."""

    amplitude: complex = 1.0
    p: float = 0.0
    E: float = 0.0
    t: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class Wavefunction:
    grid: Grid
    values: np.ndarray
    convention: str = UNNORMALIZED

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise DomainError(f"unknown convention {self.convention!r}")
        vals = np.array(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n,):
            raise MismatchError(f"expected {self.grid.n} samples, got shape {vals.shape}")
        object.__setattr__(self, "values", _frozen(vals))
        if self.convention == L2_NORMALIZED:
            nrm = norm(self)
            if abs(nrm - 1.0) > NORM_TOL:
                raise DomainError(f"l2_normalized wavefunction has norm {nrm!r}")

    def __len__(self):
        return self.grid.n


def sample(grid: Grid, func, convention: str = UNNORMALIZED) -> Wavefunction:
    """Evaluate ``func`` at the grid points."""
    return Wavefunction(grid, func(grid.points), convention)


def sample_plane_wave(grid: Grid, params: PlaneWaveParams) -> Wavefunction:
    phase = (params.p * grid.points - params.E * params.t) / params.hbar
    values = params.amplitude * np.exp(1j * phase)
    conv = UNIT_AMPLITUDE if abs(params.amplitude) == 1 else UNNORMALIZED
    return Wavefunction(grid, values, conv)


def gaussian(grid: Grid, center: float = 0.0, width: float = 1.0, k: float = 0.0) -> Wavefunction:
    """Unnormalized Gaussian packet ``exp(-(x-c)^2 / (2 w^2) + i k x)``."""
    x = grid.points
    return Wavefunction(grid, np.exp(-((x - center) ** 2) / (2 * width**2) + 1j * k * x))


def _check_same_grid(f: Wavefunction, g: Wavefunction):
    if f.grid != g.grid:
        raise MismatchError(f"wavefunctions live on different grids: {f.grid} vs {g.grid}")


def inner_product(f: Wavefunction, g: Wavefunction) -> complex:
    """Quadrature approximation of the integral of conj(f) * g."""
    _check_same_grid(f, g)
    # real weights applied to each part separately keep <f,g> = conj(<g,f>) exact
    fr, fi, gr, gi = f.values.real, f.values.imag, g.values.real, g.values.imag
    w = f.grid.weights
    return complex(float(np.sum(w * (fr * gr + fi * gi))), float(np.sum(w * (fr * gi - fi * gr))))


def norm(psi: Wavefunction) -> float:
    return float(np.sqrt(np.sum(psi.grid.weights * np.abs(psi.values) ** 2)))


def normalize(psi: Wavefunction) -> Wavefunction:
    nrm = norm(psi)
    if nrm == 0 or not np.isfinite(nrm):
        raise ZeroNormError(f"cannot normalize a wavefunction with norm {nrm}")
    return Wavefunction(psi.grid, psi.values / nrm, L2_NORMALIZED)


def expectation(op, psi: Wavefunction) -> complex:
    """``<psi|op|psi>`` under psi's own convention; no renormalization."""
    return inner_product(psi, op.apply(psi))

