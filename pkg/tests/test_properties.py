"""Property tests for the invariants of the grid, operator and Fock layers."""
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hermitime.canonical import ParticleParams, expected_time_closed_form, kinetic_operator, momentum_operator, time_operator
from hermitime.fock import check_jump_inequality, jump_time_bound
from hermitime.grid import Grid, Wavefunction, inner_product, sample
from hermitime.operators import (
    LinearOperator,
    adjoint,
    commutator,
    first_derivative,
    hermiticity_residual,
    scale,
    second_derivative,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
nonzero = finite.filter(lambda x: abs(x) > 1e-3)
sizes = st.integers(3, 24)
topologies = st.sampled_from(["closed", "periodic"])


@st.composite
def grid_and_pair(draw):
    n = draw(sizes)
    a = draw(st.floats(-10, 10))
    length = draw(st.floats(0.1, 20))
    g = Grid(a, a + length, n, draw(topologies))
    vec = arrays(np.complex128, n, elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False))
    return g, Wavefunction(g, draw(vec)), Wavefunction(g, draw(vec))


@given(grid_and_pair())
def test_inner_product_conjugate_symmetry(data):
    _, f, g = data
    assert inner_product(f, g) == np.conj(inner_product(g, f))


@given(grid_and_pair())
def test_inner_product_positive(data):
    _, f, _ = data
    v = inner_product(f, f)
    assert v.imag == 0 and v.real >= 0


@given(st.floats(-5, 5), st.floats(0.1, 10), st.integers(3, 200), finite, finite)
def test_trapezoid_exact_for_linear(a, length, n, c0, c1):
    g = Grid(a, a + length, n)
    f = sample(g, lambda x: c0 + c1 * x)
    one = sample(g, np.ones_like)
    b = a + length
    exact = c0 * length + c1 * (b * b - a * a) / 2
    assert abs(inner_product(one, f) - exact) <= 1e-12 * (1 + abs(c0) * length + abs(c1) * (abs(a) + abs(b)) ** 2)


@settings(max_examples=50)
@given(st.integers(3, 40))
def test_periodic_stencils_symmetry(n):
    g = Grid(0, 1, n, "periodic")
    D, D2 = first_derivative(g, "periodic").matrix, second_derivative(g, "periodic").matrix
    assert np.array_equal(D, -D.T) and np.array_equal(D2, D2.T)
    assert np.all(D.imag == 0) and np.all(D2.imag == 0)


@settings(max_examples=50)
@given(st.integers(3, 16), st.sampled_from(["periodic", "dirichlet_vanishing", "one_sided"]), st.integers(0, 2**32 - 1))
def test_adjoint_quadrature_identity(n, bc, seed):
    if bc == "one_sided":
        n = max(n, 4)
    g = Grid(-1, 2, n, "periodic" if bc == "periodic" else "closed")
    rng = np.random.default_rng(seed)
    M = LinearOperator(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), g, bc)
    f = Wavefunction(g, rng.normal(size=n) + 1j * rng.normal(size=n))
    h = Wavefunction(g, rng.normal(size=n) + 1j * rng.normal(size=n))
    assert abs(inner_product(adjoint(M).apply(f), h) - inner_product(f, M.apply(h))) <= 1e-12


@settings(max_examples=50)
@given(st.integers(3, 12), st.integers(0, 2**32 - 1))
def test_commutator_antisymmetry(n, seed):
    rng = np.random.default_rng(seed)
    g = Grid(0, 1, n)
    A = LinearOperator(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), g, "dirichlet_vanishing")
    B = LinearOperator(rng.normal(size=(n, n)), g, "dirichlet_vanishing")
    assert np.array_equal(commutator(A, B).matrix, -commutator(B, A).matrix)


@settings(max_examples=30)
@given(st.integers(3, 20), st.integers(0, 2**32 - 1))
def test_hermitian_constructions_on_periodic_grids(n, seed):
    rng = np.random.default_rng(seed)
    g = Grid(0, 1, n, "periodic")
    S = rng.normal(size=(n, n))
    probes = [Wavefunction(g, rng.normal(size=n) + 1j * rng.normal(size=n)) for _ in range(3)]
    for M in (S + S.T, 1j * (S - S.T)):
        assert hermiticity_residual(LinearOperator(M, g, "periodic"), probes).probe <= 1e-12


@settings(max_examples=40)
@given(st.integers(4, 64), finite, nonzero, st.floats(0.1, 10))
def test_time_equals_scaled_momentum(n, m, p, hbar):
    g = Grid(0, 1, n, "periodic")
    params = ParticleParams(m=m, p=p, hbar=hbar)
    T = time_operator(g, "periodic", params)
    assert np.array_equal(T.matrix, scale(momentum_operator(g, "periodic", params), m / p**2).matrix)


dyadic = st.integers(-3, 3).map(lambda e: 2.0**e)


@settings(max_examples=30)
@given(st.sampled_from([8, 16, 32, 64, 128, 256]), dyadic, dyadic, st.integers(-3, 3))
def test_time_kinetic_commute_exactly_on_dyadic_data(n, m, p, e):
    g = Grid(0, 2.0**e, n, "periodic")
    params = ParticleParams(m=m, p=p)
    C = commutator(time_operator(g, "periodic", params), kinetic_operator(g, "periodic", params))
    assert np.max(np.abs(C.matrix)) == 0


@settings(max_examples=30)
@given(st.integers(4, 128), nonzero, nonzero, st.floats(0.1, 10))
def test_time_kinetic_commute_to_rounding(n, m, p, length):
    g = Grid(0, length, n, "periodic")
    params = ParticleParams(m=m, p=p)
    T, K = time_operator(g, "periodic", params), kinetic_operator(g, "periodic", params)
    scale_ = np.max(np.abs(T.matrix)) * np.max(np.abs(K.matrix))
    assert np.max(np.abs(commutator(T, K).matrix)) <= 1e-14 * scale_


@given(nonzero, nonzero, finite, st.floats(1e-3, 1e3))
def test_sign_law(m, v, a, length):
    params = ParticleParams.from_velocity(m, v)
    t = expected_time_closed_form(params, a, a + length)
    assert math.copysign(1, t) == math.copysign(1, v)
    assert math.copysign(1, t) == math.copysign(1, m / params.p)


@given(nonzero, st.floats(0.1, 1e3), st.floats(1.5, 100))
def test_closed_form_linear_in_length(m, length, factor):
    params = ParticleParams(m=m, p=1.7)
    t1 = expected_time_closed_form(params, 0, length)
    t2 = expected_time_closed_form(params, 0, factor * length)
    assert math.isclose(t2, factor * t1, rel_tol=1e-12)
    assert abs(t2) > abs(t1)


@given(st.floats(1e-6, 1e6), st.floats(1e-3, 1e3), st.floats(0, 4))
def test_jump_bound_consistency(dE, hbar, f):
    bound = jump_time_bound(dE, hbar)
    assert dE * bound >= hbar / 2 * (1 - 1e-15)
    assert check_jump_inequality(f * bound, bound).ok == (f * bound <= bound)
