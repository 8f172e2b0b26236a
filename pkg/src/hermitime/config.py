"""Experiment configuration: registry metadata, validation and parsing.

Config files are flat ``key=value`` lines. ``#`` starts a comment. Optional
``[grid]``, ``[particle]``, ``[fock]``, ``[scan]``, ``[tolerance]`` and
``[output]`` headers group keys; a key under a header must belong to it.
Tolerance overrides are written ``tol.<name>=value`` or ``<name>=value``
inside ``[tolerance]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Mapping, Optional

from .errors import ConfigError

GROUP_KEYS = {
    "grid": ("a", "b", "n", "topology"),
    "particle": ("m", "p", "v", "hbar"),
    "fock": ("dim", "omega", "p_eff"),
    "scan": ("doublings", "refinements"),
    "output": ("format",),
}
KEY_GROUP = {k: g for g, keys in GROUP_KEYS.items() for k in keys}
INT_KEYS = {"n", "dim", "doublings", "refinements"}
STR_KEYS = {"topology", "format"}
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ExperimentInfo:
    name: str
    summary: str
    equations: str
    groups: tuple
    defaults: Mapping
    tolerances: Mapping
    min_n: int = 3


EXPERIMENTS = {
    info.name: info
    for info in [
        ExperimentInfo(
            "hermiticity",
            "adjoint residuals of time/momentum/kinetic/displacement operators, periodic and vanishing-boundary grids",
            "Eq. 6",
            ("grid", "particle"),
            dict(a=-8.0, b=8.0, n=256, m=1.0, p=2.0, hbar=1.0),
            dict(periodic_residual=1e-12, closed_decay_ratio=3.5),
            min_n=16,
        ),
        ExperimentInfo(
            "correspondence",
            "quadrature <t> on a plane wave against m(b-a)/p, with convergence order",
            "Eq. 7",
            ("grid", "particle", "scan"),
            dict(a=0.0, b=4.0, n=512, topology="closed", m=1.0, p=2.0, hbar=1.0, refinements=3),
            dict(expectation=1e-3, order=0.2),
            min_n=16,
        ),
        ExperimentInfo(
            "displacement",
            "quadrature <D> on a unit-amplitude plane wave against b-a",
            "Eq. 4",
            ("grid", "particle"),
            dict(a=0.0, b=1.0, n=256, topology="periodic", p=2 * math.pi, hbar=1.0),
            dict(expectation=1e-3, refinement_gain=0.5),
            min_n=8,
        ),
        ExperimentInfo(
            "heisenberg_flow",
            "rate of change of <t> under the free Hamiltonian, both commutator conventions",
            "Eqs. 8-10",
            ("grid", "particle"),
            dict(a=0.0, b=1.0, n=256, topology="periodic", m=1.0, p=2.0, hbar=1.0),
            dict(commutator=1e-13, rate=1e-12, ehrenfest=1e-10),
            min_n=16,
        ),
        ExperimentInfo(
            "free_particle_divergence",
            "<t> over doubling intervals: monotone, linear growth with slope m/p",
            "Eq. 11",
            ("grid", "particle", "scan"),
            dict(a=0.0, b=1.0, n=1024, m=1.0, p=1.0, hbar=1.0, doublings=6),
            dict(slope=1e-6),
            min_n=16,
        ),
        ExperimentInfo(
            "massless",
            "time operator and <t> for zero mass: exact zero",
            "Eq. 12",
            ("grid", "particle"),
            dict(a=0.0, b=4.0, n=64, m=0.0, p=1.0, hbar=1.0),
            dict(),
        ),
        ExperimentInfo(
            "negative_mass",
            "sign table of m(b-a)/p over negative masses and both velocity signs",
            "Eq. 13",
            ("grid", "particle"),
            dict(a=0.0, b=4.0, n=512, v=2.0, hbar=1.0),
            dict(closed_form=1e-12, expectation=1e-3),
            min_n=16,
        ),
        ExperimentInfo(
            "oscillator_expectation",
            "<n|t|n> in a truncated Fock basis, ladder algebra, and grid/Fock momentum cross-check",
            "Eqs. 14-16",
            ("grid", "particle", "fock"),
            dict(a=-12.0, b=12.0, n=2048, m=1.0, hbar=1.0, dim=32, omega=1.0, p_eff=1.0),
            dict(grid_momentum=1e-8),
            min_n=16,
        ),
        ExperimentInfo(
            "jump_time",
            "energy-time bound on the jump time and the tau_J <= dt check",
            "Eqs. 17-18",
            ("particle", "fock"),
            dict(hbar=1.0, omega=1.0),
            dict(bound=1e-15),
        ),
        ExperimentInfo(
            "convergence_study",
            "error-vs-h tables for <t> and <D> with fitted orders; vanishing-boundary hermiticity table",
            "Eqs. 4, 6, 7",
            ("grid", "particle", "scan"),
            dict(a=0.0, b=4.0, n=64, m=1.0, p=2.0, hbar=1.0, refinements=4),
            dict(order=0.2),
            min_n=16,
        ),
    ]
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    a: Optional[float] = None
    b: Optional[float] = None
    n: Optional[int] = None
    topology: Optional[str] = None
    m: Optional[float] = None
    p: Optional[float] = None
    v: Optional[float] = None
    hbar: Optional[float] = None
    dim: Optional[int] = None
    omega: Optional[float] = None
    p_eff: Optional[float] = None
    doublings: Optional[int] = None
    refinements: Optional[int] = None
    tolerances: Mapping = field(default_factory=dict)
    format: str = "csv"

    @property
    def info(self) -> ExperimentInfo:
        return EXPERIMENTS[self.experiment]

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, self.info.tolerances[name])

    def resolved(self) -> "ExperimentConfig":
        """Copy with every unset parameter replaced by the experiment default."""
        updates = {k: v for k, v in self.info.defaults.items() if getattr(self, k) is None}
        if "grid" in self.info.groups and self.topology is None and "topology" not in updates:
            updates["topology"] = "closed"
        return replace(self, **updates)

    def inputs(self) -> dict:
        """Parameters the experiment reads, for echoing in reports."""
        keys = [k for g in self.info.groups for k in GROUP_KEYS[g]]
        out = {k: getattr(self, k) for k in keys if getattr(self, k) is not None}
        out["tolerances"] = {k: self.tolerance(k) for k in self.info.tolerances}
        return out


CONFIG_FIELDS = {f.name for f in fields(ExperimentConfig)} - {"tolerances", "experiment"}


def _convert(key: str, raw: str, line=None):
    raw = raw.strip()
    if key in STR_KEYS:
        return raw
    try:
        if key in INT_KEYS:
            return int(raw)
        val = float(raw)
    except ValueError:
        kind = "an integer" if key in INT_KEYS else "a number"
        raise ConfigError(f"{key} must be {kind}, got {raw!r}", line=line, key=key) from None
    if not math.isfinite(val):
        raise ConfigError(f"{key} must be finite, got {raw!r}", line=line, key=key)
    return val


def parse_pairs(source: str) -> dict:
    """Parse config text into ``{key: (raw_value, line_number)}``."""
    pairs = {}
    section = None
    for lineno, line in enumerate(source.splitlines(), 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if text.startswith("[") and text.endswith("]"):
            section = text[1:-1].strip()
            if section not in GROUP_KEYS and section != "tolerance":
                raise ConfigError(f"unknown section [{section}]", line=lineno)
            continue
        if "=" not in text:
            raise ConfigError(f"expected key=value, got {text!r}", line=lineno)
        key, value = (s.strip() for s in text.split("=", 1))
        if not key:
            raise ConfigError("empty key", line=lineno)
        if section == "tolerance":
            key = "tol." + key
        elif section is not None and KEY_GROUP.get(key) != section:
            raise ConfigError(f"key {key!r} does not belong in section [{section}]", line=lineno, key=key)
        if key in pairs:
            raise ConfigError(f"duplicate key {key!r} (first set on line {pairs[key][1]})", line=lineno, key=key)
        pairs[key] = (value, lineno)
    return pairs


def build_config(pairs: Mapping) -> ExperimentConfig:
    """Validate parsed pairs. Values may be ``(raw, line)`` tuples or plain strings."""
    norm = {k: (v if isinstance(v, tuple) else (v, None)) for k, v in pairs.items()}
    if "experiment" not in norm:
        raise ConfigError("missing required key 'experiment'", key="experiment")
    name, name_line = norm.pop("experiment")
    name = name.strip()
    if name not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {name!r}; valid experiments: {', '.join(EXPERIMENTS)}",
            line=name_line, key="experiment",
        )
    info = EXPERIMENTS[name]
    kwargs, tols = {}, {}
    for key, (raw, line) in norm.items():
        if key.startswith("tol."):
            tname = key[4:]
            if tname not in info.tolerances:
                valid = ", ".join(info.tolerances) or "none"
                raise ConfigError(f"unknown tolerance {tname!r} for {name}; valid: {valid}", line=line, key=key)
            val = _convert(key, raw, line)
            if not val > 0:
                raise ConfigError(f"tolerance {tname} must be strictly positive, got {val}", line=line, key=key)
            tols[tname] = val
        elif key in CONFIG_FIELDS:
            kwargs[key] = _convert(key, raw, line)
        else:
            raise ConfigError(f"unknown key {key!r}", line=line, key=key)
    cfg = ExperimentConfig(experiment=name, tolerances=tols, **kwargs)
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    info = cfg.info
    r = cfg.resolved()
    if r.format not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {r.format!r}", key="format")
    if "grid" in info.groups:
        if r.topology is not None and r.topology not in ("closed", "periodic"):
            raise ConfigError(f"topology must be closed or periodic, got {r.topology!r}", key="topology")
        if r.n < info.min_n:
            raise ConfigError(
                f"n={r.n} is too small for {info.name}; minimum is {info.min_n} (refinement headroom)",
                key="n",
            )
        if not r.b > r.a:
            raise ConfigError(f"grid needs b > a, got a={r.a}, b={r.b}", key="b")
    if "particle" in info.groups and r.hbar is not None and not r.hbar > 0:
        raise ConfigError(f"hbar must be positive, got {r.hbar}", key="hbar")
    if "fock" in info.groups:
        if r.dim is not None and r.dim < 3:
            raise ConfigError(f"dim must be >= 3, got {r.dim}", key="dim")
        if r.omega is not None and not r.omega > 0:
            raise ConfigError(f"omega must be positive, got {r.omega}", key="omega")
    for key in ("doublings", "refinements"):
        val = getattr(r, key)
        if val is not None and val < 2:
            raise ConfigError(f"{key} must be >= 2 to fit a trend, got {val}", key=key)
    _experiment_rules(r)


def _experiment_rules(r: ExperimentConfig) -> None:
    name = r.experiment
    if name in ("hermiticity", "correspondence", "heisenberg_flow", "free_particle_divergence",
                "convergence_study") and r.m == 0:
        raise ConfigError(f"{name} needs a nonzero mass m", key="m")
    if name in ("hermiticity", "correspondence", "displacement", "heisenberg_flow", "free_particle_divergence",
                "massless", "convergence_study") and r.p == 0:
        raise ConfigError(f"{name} needs a nonzero momentum eigenvalue p", key="p")
    if name == "massless" and r.m != 0:
        raise ConfigError(f"massless needs m=0, got m={r.m}", key="m")
    if name == "negative_mass" and (r.v is None or r.v == 0):
        raise ConfigError("negative_mass needs a nonzero velocity v", key="v")
    if name == "oscillator_expectation":
        if not r.m > 0:
            raise ConfigError(f"oscillator_expectation needs positive mass, got m={r.m}", key="m")
        if r.p_eff == 0:
            raise ConfigError("p_eff must be nonzero", key="p_eff")
    if name == "correspondence" and r.n // 2**r.refinements < 8:
        raise ConfigError(
            f"n={r.n} leaves fewer than 8 points after {r.refinements} coarsenings", key="n"
        )
    if name == "heisenberg_flow" and r.topology != "periodic":
        raise ConfigError("heisenberg_flow runs on a periodic grid", key="topology")


def parse_config(source: str, overrides: Optional[Mapping] = None) -> ExperimentConfig:
    """Parse config text; ``overrides`` (e.g. from CLI flags) win over file values."""
    pairs = parse_pairs(source)
    for key, value in (overrides or {}).items():
        pairs[key] = (str(value), None)
    return build_config(pairs)
