"""The named experiments. Each runner fills an ``ExperimentReport``."""
from __future__ import annotations

import logging
import math
import time

import numpy as np

from .canonical import (
    PAPER_LITERAL,
    STANDARD,
    ParticleParams,
    displacement_operator,
    expected_time_closed_form,
    heisenberg_rate,
    kinetic_operator,
    momentum_operator,
    time_operator,
)
from .config import EXPERIMENTS, ExperimentConfig
from .errors import HermitimeError
from .fock import (
    FockSpace,
    alpha,
    as_double,
    check_jump_inequality,
    fock_expectation,
    jump_time_bound,
    lowering_matrix,
    momentum_ladder,
    number_operator,
    oscillator_eigenfunction,
    raising_matrix,
    time_ladder,
)
from .grid import (
    PERIODIC,
    Grid,
    PlaneWaveParams,
    Wavefunction,
    expectation,
    gaussian,
    normalize,
    sample_plane_wave,
)
from .operators import (
    DIRICHLET,
    ONE_SIDED,
    PERIODIC_BC,
    adjoint,
    commutator,
    hermiticity_residual,
    position,
)
from .report import ExperimentReport

log = logging.getLogger(__name__)

OPERATOR_BUILDERS = {
    "time": time_operator,
    "momentum": momentum_operator,
    "kinetic": kinetic_operator,
    "displacement": displacement_operator,
}


def fit_order(hs, errors):
    """Slope of log(error) against log(h); None if any error is zero."""
    hs, errors = np.asarray(hs, float), np.asarray(errors, float)
    if np.any(errors <= 0):
        return None
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])


def _params(cfg: ExperimentConfig, **over) -> ParticleParams:
    kw = dict(m=cfg.m, p=cfg.p, v=cfg.v, hbar=cfg.hbar)
    kw.update(over)
    return ParticleParams(**kw)


def _expectation_bc(grid: Grid) -> str:
    """Plane waves do not vanish at the ends, so closed grids use one-sided closures."""
    return PERIODIC_BC if grid.periodic else ONE_SIDED


def _plane(grid: Grid, p: float, hbar: float) -> Wavefunction:
    return sample_plane_wave(grid, PlaneWaveParams(amplitude=1.0, p=p, hbar=hbar))


def _shifted_hermite(grid: Grid, k: int, scale: float) -> Wavefunction:
    """Hermite function psi_k centred on the grid midpoint, width ~ 1/scale."""
    mid = 0.5 * (grid.a + grid.b)
    local = Grid(grid.a - mid, grid.b - mid, grid.n, grid.topology)
    psi = oscillator_eigenfunction(k, local, FockSpace(dim=k + 3, omega=scale**2))
    return Wavefunction(grid, psi.values)


def hermiticity_probes(grid: Grid) -> list:
    """Plane waves (periodic only), Gaussians and Hermite functions.

    Gaussians and Hermite functions are narrow enough to vanish at the
    interval ends to below 1e-10.
    """
    L, mid = grid.length, 0.5 * (grid.a + grid.b)
    probes = []
    if grid.periodic:
        probes += [_plane(grid, 2 * math.pi * k / L, 1.0) for k in (1, 2, 3)]
    w = L / 32
    probes += [
        gaussian(grid, mid - 0.1 * L, w),
        gaussian(grid, mid, 0.75 * w, k=2 * math.pi * 4 / L),
        gaussian(grid, mid + 0.15 * L, w),
    ]
    probes += [_shifted_hermite(grid, k, 16 / L) for k in (0, 1, 2)]
    return probes


def run_hermiticity(cfg: ExperimentConfig, rep: ExperimentReport):
    params = _params(cfg)
    pgrid = Grid(cfg.a, cfg.b, cfg.n, PERIODIC)
    probes = hermiticity_probes(pgrid)
    tol = cfg.tolerance("periodic_residual")
    matrix_res = {}
    for name, build in OPERATOR_BUILDERS.items():
        r = hermiticity_residual(build(pgrid, PERIODIC_BC, params), probes)
        rep.check(f"periodic.{name}.residual", r.probe, 0.0, tol, provenance="exact hermiticity")
        matrix_res[f"periodic.{name}"] = r.matrix

    closed = {}
    for n in (cfg.n, 2 * cfg.n):
        g = Grid(cfg.a, cfg.b, n)
        cprobes = hermiticity_probes(g)
        for name, build in OPERATOR_BUILDERS.items():
            r = hermiticity_residual(build(g, DIRICHLET, params), cprobes)
            closed.setdefault(name, []).append(r.probe)
            matrix_res[f"closed[n={n}].{name}"] = r.matrix
    r1, r2 = closed["time"]
    ratio = r1 / r2 if r2 > 0 else math.inf
    rep.check("closed.time.decay_ratio", ratio, cfg.tolerance("closed_decay_ratio"), 0.0,
              relation="ge", provenance="second-order decay when n doubles")
    rep.values["closed_residuals"] = {"n": [cfg.n, 2 * cfg.n], **closed}
    rep.values["matrix_residuals"] = matrix_res

    # boundary terms with wide, non-vanishing probes: refine h vs. grow the domain at fixed h
    mid, L = 0.5 * (cfg.a + cfg.b), cfg.b - cfg.a
    T = OPERATOR_BUILDERS["time"]
    wide = lambda g: [gaussian(g, mid + s * L, L / 8) for s in (-0.05, 0.0, 0.1)]  # noqa: E731
    g0 = Grid(cfg.a, cfg.b, cfg.n)
    g_fine = Grid(cfg.a, cfg.b, 2 * cfg.n - 1)
    g_big = Grid(mid - L, mid + L, 2 * cfg.n - 1)
    rep.values["wide_probe_residuals"] = {
        "base": hermiticity_residual(T(g0, DIRICHLET, params), wide(g0)).probe,
        "half_spacing": hermiticity_residual(T(g_fine, DIRICHLET, params), wide(g_fine)).probe,
        "double_domain": hermiticity_residual(T(g_big, DIRICHLET, params), wide(g_big)).probe,
    }


def _correspondence_point(grid: Grid, params: ParticleParams) -> complex:
    T = time_operator(grid, _expectation_bc(grid), params)
    return expectation(T, _plane(grid, params.p, params.hbar))


def run_correspondence(cfg: ExperimentConfig, rep: ExperimentReport):
    params = _params(cfg)
    ref = expected_time_closed_form(params, cfg.a, cfg.b)
    levels = [cfg.n // 2**k for k in range(cfg.refinements, -1, -1)]
    rows = []
    for n in levels:
        g = Grid(cfg.a, cfg.b, n, cfg.topology)
        z = _correspondence_point(g, params)
        rows.append({"n": n, "h": g.h, "re": z.real, "im": z.imag, "error": abs(z - ref)})
    z = complex(rows[-1]["re"], rows[-1]["im"])
    tol = cfg.tolerance("expectation")
    rep.check("time_expectation.re", z.real, ref, tol, provenance="m*(b-a)/p")
    rep.check("time_expectation.im", z.imag, 0.0, tol, provenance="real expectation")
    order = fit_order([r["h"] for r in rows], [r["error"] for r in rows])
    rep.check("convergence_order", order if order is not None else math.nan, 2.0, cfg.tolerance("order"),
              provenance="second-order stencil")
    rep.values["refinement_table"] = rows
    if cfg.v:
        rep.values["classical_time"] = (cfg.b - cfg.a) / cfg.v


def _displacement_point(grid: Grid, params: ParticleParams) -> complex:
    D = displacement_operator(grid, _expectation_bc(grid), params)
    return expectation(D, _plane(grid, params.p, params.hbar))


def run_displacement(cfg: ExperimentConfig, rep: ExperimentReport):
    params = _params(cfg)
    g = Grid(cfg.a, cfg.b, cfg.n, cfg.topology)
    ref = g.length
    z1 = _displacement_point(g, params)
    z2 = _displacement_point(g.refined(), params)
    tol = cfg.tolerance("expectation")
    rep.check("displacement_expectation.re", z1.real, ref, tol, provenance="b-a (unit amplitude)")
    rep.check("displacement_expectation.im", z1.imag, 0.0, tol, provenance="real expectation")
    e1, e2 = abs(z1 - ref), abs(z2 - ref)
    gain = e1 / e2 if e2 > 0 else math.inf
    rep.check("refinement_gain", gain, 4.0, cfg.tolerance("refinement_gain"), provenance="h^2 error: 4x per halving")
    rep.values["refined"] = {"n": g.refined().n, "re": z2.real, "im": z2.imag, "error": e2}


def flow_states(grid: Grid) -> list:
    L, mid = grid.length, 0.5 * (grid.a + grid.b)
    states = [
        _plane(grid, 2 * math.pi / L, 1.0),
        _plane(grid, 2 * math.pi * 3 / L, 1.0),
        gaussian(grid, mid, L / 16),
        gaussian(grid, mid - 0.1 * L, L / 20, k=2 * math.pi * 5 / L),
    ]
    states.append(Wavefunction(grid, states[0].values + 0.5 * states[2].values))
    return [normalize(s) for s in states]


def run_heisenberg_flow(cfg: ExperimentConfig, rep: ExperimentReport):
    params = _params(cfg)
    g = Grid(cfg.a, cfg.b, cfg.n, PERIODIC)
    T = time_operator(g, PERIODIC_BC, params)
    H = kinetic_operator(g, PERIODIC_BC, params)
    C = commutator(T, H)
    rep.check("commutator.max_norm", float(np.max(np.abs(C.matrix))), 0.0, cfg.tolerance("commutator"),
              provenance="commuting circulants")
    rates = {STANDARD: [], PAPER_LITERAL: []}
    for psi in flow_states(g):
        for conv in rates:
            rates[conv].append(heisenberg_rate(T, H, psi, conv, hbar=cfg.hbar))
    for conv, vals in rates.items():
        rep.check(f"rate.{conv}.max_abs", max(abs(z) for z in vals), 0.0, cfg.tolerance("rate"),
                  provenance="constant flow of time")
    rep.values["rates"] = {k: [complex(z) for z in v] for k, v in rates.items()}

    # Ehrenfest cross-check on a closed grid: d<x>/dt = <p>/m
    gc = Grid(cfg.a, cfg.b, cfg.n)
    L, mid = gc.length, 0.5 * (gc.a + gc.b)
    psi = normalize(gaussian(gc, mid, L / 20, k=2 * math.pi * 2 / L))
    Hc = kinetic_operator(gc, DIRICHLET, params)
    X = position(gc, DIRICHLET)
    ref = expectation(momentum_operator(gc, DIRICHLET, params), psi) / params.m
    std = heisenberg_rate(X, Hc, psi, STANDARD, hbar=cfg.hbar)
    lit = heisenberg_rate(X, Hc, psi, PAPER_LITERAL, hbar=cfg.hbar)
    tol = cfg.tolerance("ehrenfest")
    rep.check("ehrenfest.standard.re", std.real, ref.real, tol, provenance="<p>/m")
    rep.check("ehrenfest.standard.im", std.imag, ref.imag, tol, provenance="<p>/m")
    rep.values["ehrenfest"] = {
        "momentum_over_mass": ref,
        "standard": std,
        "paper_literal": lit,
        "literal_over_standard": lit / std if std != 0 else None,
    }


def _steps_against(seq, direction) -> int:
    """Number of consecutive steps that fail to move strictly in ``direction``."""
    d = np.diff(np.asarray(seq, float)) * direction
    return int(np.sum(d <= 0))


def run_free_particle_divergence(cfg: ExperimentConfig, rep: ExperimentReport):
    params = _params(cfg)
    slope_ref = params.m / params.p
    direction = math.copysign(1.0, slope_ref)
    L0 = cfg.b - cfg.a
    lengths = [L0 * 2**k for k in range(cfg.doublings)]
    closed_form, raw, extrap = [], [], []
    for L in lengths:
        g = Grid(cfg.a, cfg.a + L, cfg.n)
        q1 = _correspondence_point(g, params)
        q2 = _correspondence_point(g.refined(), params)
        closed_form.append(expected_time_closed_form(params, cfg.a, cfg.a + L))
        raw.append(q2.real)
        # Richardson: cancel the h^2 term of the central stencil
        extrap.append(((4 * q2 - q1) / 3).real)
    for label, seq in (("closed_form", closed_form), ("quadrature", raw), ("extrapolated", extrap)):
        rep.check(f"{label}.non_monotone_steps", _steps_against(seq, direction), 0, 0.0,
                  provenance="unbounded monotone growth")
    tol = cfg.tolerance("slope")
    for label, seq in (("closed_form", closed_form), ("extrapolated", extrap)):
        slope = float(np.polyfit(lengths, seq, 1)[0])
        rep.check(f"{label}.slope_relative_error", abs(slope - slope_ref) / abs(slope_ref), 0.0, tol,
                  provenance="slope m/p")
    rep.values["table"] = {"length": lengths, "closed_form": closed_form, "quadrature": raw,
                           "extrapolated": extrap}
    rep.values["slope_reference"] = slope_ref


def run_massless(cfg: ExperimentConfig, rep: ExperimentReport):
    params = _params(cfg, m=0.0)
    g = Grid(cfg.a, cfg.b, cfg.n, cfg.topology)
    T = time_operator(g, _expectation_bc(g), params)
    rep.check("time_operator.max_abs_entry", float(np.max(np.abs(T.matrix))), 0.0, 0.0, provenance="exact zero")
    states = {"plane_wave": _plane(g, cfg.p, cfg.hbar), "gaussian": gaussian(g, 0.5 * (g.a + g.b), g.length / 10)}
    for label, psi in states.items():
        z = expectation(T, psi)
        rep.check(f"time_expectation[{label}].re", z.real, 0.0, 0.0, provenance="exact zero")
        rep.check(f"time_expectation[{label}].im", z.imag, 0.0, 0.0, provenance="exact zero")
    rep.check("closed_form", expected_time_closed_form(params, cfg.a, cfg.b), 0.0, 0.0, provenance="m*(b-a)/p, m=0")


NEGATIVE_MASSES = (-2.0, -1.0, -0.5)


def run_negative_mass(cfg: ExperimentConfig, rep: ExperimentReport):
    masses = sorted(set(NEGATIVE_MASSES) | ({cfg.m} if cfg.m is not None and cfg.m != 0 else set()))
    speed = abs(cfg.v)
    g = Grid(cfg.a, cfg.b, cfg.n)
    table = []
    for m in masses + [1.0]:
        for v in (speed, -speed):
            params = ParticleParams.from_velocity(m, v, cfg.hbar)
            t = expected_time_closed_form(params, cfg.a, cfg.b)
            law = math.copysign(1.0, v) * math.copysign(1.0, cfg.b - cfg.a)
            table.append({"m": m, "v": v, "p": params.p, "t": t})
            rep.check(f"sign[m={m:g},v={v:g}]", math.copysign(1.0, t), law, 0.0, provenance="sign(v)*sign(b-a)")
            if m < 0 and v > 0:
                classical = (cfg.b - cfg.a) / v
                rep.check(f"closed_form[m={m:g},v={v:g}]", t, classical, cfg.tolerance("closed_form"),
                          provenance="(b-a)/v")
                z = _correspondence_point(g, params)
                rep.check(f"time_expectation[m={m:g},v={v:g}].re", z.real, classical, cfg.tolerance("expectation"),
                          provenance="(b-a)/v")
    rep.values["sign_table"] = table


def run_oscillator_expectation(cfg: ExperimentConfig, rep: ExperimentReport):
    space = FockSpace(cfg.dim, cfg.omega, cfg.m, cfg.hbar, cfg.p_eff)
    T, P = time_ladder(space), momentum_ladder(space)
    levels = range(space.max_level + 1)
    diag_t = max(abs(fock_expectation(T, n, space)) for n in levels)
    diag_p = max(abs(fock_expectation(P, n, space)) for n in levels)
    rep.check("time_ladder.max_abs_diagonal", diag_t, 0.0, 0.0, provenance="orthogonality of |n>, |n+-1>")
    rep.check("momentum_ladder.max_abs_diagonal", diag_p, 0.0, 0.0, provenance="orthogonality of |n>, |n+-1>")
    rep.check("time_ladder.adjoint_deviation", float(np.max(np.abs(T.matrix - adjoint(T).matrix))), 0.0, 0.0,
              provenance="exact hermiticity")
    C = as_double(commutator(lowering_matrix(space), raising_matrix(space)))
    lead = C[:-1, :-1] - np.eye(space.dim - 1)
    rep.check("ladder_commutator.leading_block_deviation", float(np.max(np.abs(lead))), 0.0, 0.0,
              provenance="[a, a^dag] = 1")
    rep.check("ladder_commutator.last_diagonal", C[-1, -1].real, 1 - space.dim, 0.0, provenance="1 - dim (truncation)")
    N = as_double(number_operator(space)).diagonal().real
    rep.check("number_operator.max_deviation", float(np.max(np.abs(N - np.arange(space.dim)))), 0.0, 0.0,
              provenance="a^dag a |n> = n |n>")

    g = Grid(cfg.a, cfg.b, cfg.n)
    Pg = momentum_operator(g, DIRICHLET, ParticleParams(m=cfg.m, p=1.0, hbar=cfg.hbar))
    tol = cfg.tolerance("grid_momentum")
    for k in range(min(5, space.max_level) + 1):
        psi = oscillator_eigenfunction(k, g, space)
        z = expectation(Pg, psi)
        fock_side = abs(fock_expectation(P, k, space))
        rep.check(f"grid_momentum[n={k}]", abs(z), fock_side, tol, provenance="Fock-side exact zero")
    rep.values["alpha"] = alpha(space)


def run_jump_time(cfg: ExperimentConfig, rep: ExperimentReport):
    rep.check("bound[dE=1,hbar=1]", jump_time_bound(1.0, 1.0), 0.5, 0.0, provenance="hbar/(2 dE)")
    dE = cfg.hbar * cfg.omega
    bound = jump_time_bound(dE, cfg.hbar)
    ref = 1 / (2 * cfg.omega)
    rep.check("bound[dE=hbar*omega]", bound, ref, cfg.tolerance("bound") * abs(ref), provenance="1/(2 omega)")
    dts = [bound, 1.0, 10 * bound, 1e-6, 1e6]
    misses = sum(not check_jump_inequality(0.0, dt) for dt in dts)
    rep.check("instantaneous_jump.failures", misses, 0, 0.0, provenance="tau_J = 0 satisfies tau_J <= dt")
    rep.check("boundary_case.passes", float(bool(check_jump_inequality(bound, bound))), 1.0, 0.0,
              provenance="inclusive inequality")
    rep.check("violation_detected", float(not check_jump_inequality(1.5 * bound, bound)), 1.0, 0.0,
              provenance="tau_J > dt fails")
    scan = []
    for f in (0.0, 0.25, 0.5, 1.0, 1.5, 2.0):
        c = check_jump_inequality(f * bound, bound)
        scan.append({"tau_J": c.tau_J, "delta_t": c.delta_t, "ok": c.ok, "margin": c.margin})
    rep.values["tau_scan"] = scan
    rep.values["delta_E"] = dE


def run_convergence_study(cfg: ExperimentConfig, rep: ExperimentReport):
    params = _params(cfg)
    t_ref = expected_time_closed_form(params, cfg.a, cfg.b)
    d_ref = cfg.b - cfg.a
    rows = []
    for k in range(cfg.refinements + 1):
        g = Grid(cfg.a, cfg.b, (cfg.n - 1) * 2**k + 1)
        t = _correspondence_point(g, params)
        d = _displacement_point(g, params)
        herm = hermiticity_residual(time_operator(g, DIRICHLET, params), hermiticity_probes(g)).probe
        rows.append({"n": g.n, "h": g.h, "time_error": abs(t - t_ref), "displacement_error": abs(d - d_ref),
                     "closed_hermiticity_residual": herm})
    hs = [r["h"] for r in rows]
    tol = cfg.tolerance("order")
    for label in ("time", "displacement"):
        order = fit_order(hs, [r[f"{label}_error"] for r in rows])
        rep.check(f"{label}.order", order if order is not None else math.nan, 2.0, tol,
                  provenance="second-order stencil")
    rep.values["table"] = rows
    rep.values["closed_hermiticity_order"] = fit_order(hs, [r["closed_hermiticity_residual"] for r in rows])


RUNNERS = {
    "hermiticity": run_hermiticity,
    "correspondence": run_correspondence,
    "displacement": run_displacement,
    "heisenberg_flow": run_heisenberg_flow,
    "free_particle_divergence": run_free_particle_divergence,
    "massless": run_massless,
    "negative_mass": run_negative_mass,
    "oscillator_expectation": run_oscillator_expectation,
    "jump_time": run_jump_time,
    "convergence_study": run_convergence_study,
}
assert set(RUNNERS) == set(EXPERIMENTS)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    cfg = config.resolved()
    rep = ExperimentReport(cfg.experiment, cfg.inputs())
    start = time.perf_counter()
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            RUNNERS[cfg.experiment](cfg, rep)
    except (HermitimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
        log.error("%s failed: %s", cfg.experiment, rep.error)
    rep.wall_time = time.perf_counter() - start
    log.info("%s finished in %.3f s", cfg.experiment, rep.wall_time)
    return rep
