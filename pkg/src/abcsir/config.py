"""Scenario configuration: defaults, JSON ingestion, validation.

An empty JSON object loads the default scenario: a 10x10 grid of 1 km^2
cells homogeneously filled with 50 susceptibles per cell, 7 infected seeded
in the lower-left cell (43 susceptibles remain there), 20 days of horizon,
and order 0.95. Every field can be overridden; omitted fields keep defaults.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .fracops import FractionalSetup
from .model import ModelParams
from .spatial import Grid2D

# the fractional family is open at 1; a request for the classical limit is
# served by this surrogate order and recorded in run summaries
ALPHA_ONE_SURROGATE = 0.999


@dataclass(frozen=True)
class InitialOverride:
    """Rectangular patch of initial densities, 1-based inclusive cells."""

    region: tuple[int, int, int, int]  # (x_min, y_min, x_max, y_max)
    s: float
    i: float
    r: float


@dataclass(frozen=True)
class FBSSettings:
    delta: float = 0.001      # relative-change tolerance of the sweep test
    omega: float = 0.5        # relaxation factor of the control update
    max_iter: int = 100
    initial_control: float = 0.0


@dataclass(frozen=True)
class OutputSettings:
    snapshot_times: tuple[float, ...] = (5.0, 10.0, 15.0, 20.0)
    directory: str = "out"


@dataclass(frozen=True)
class SolverGuards:
    """Magnitude and positivity guards of the explicit marchers.

    state_bound caps compartment densities (beyond it the explicit step is
    declared unstable). adjoint_bound only guards against overflow: adjoint
    magnitudes legitimately reach exp(growth-rate x horizon) scales.
    positivity_budget is the clipped-mass fraction of the initial population
    above which a forward run is rejected.
    """

    state_bound: float = 1e6
    adjoint_bound: float = 1e250
    positivity_budget: float = 0.001
    memory_window: int | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    alpha: float = 0.95
    alpha_requested: float | None = None
    nx: int = 10
    ny: int = 10
    h: float = 1.0
    t_final: float = 20.0
    tau: float = 0.005
    params: ModelParams = field(default_factory=ModelParams)
    initial_default: tuple[float, float, float] = (50.0, 0.0, 0.0)
    initial_overrides: tuple[InitialOverride, ...] = (
        InitialOverride(region=(1, 1, 1, 1), s=43.0, i=7.0, r=0.0),
    )
    control_enabled: bool = True
    fbs: FBSSettings = field(default_factory=FBSSettings)
    outputs: OutputSettings = field(default_factory=OutputSettings)
    guards: SolverGuards = field(default_factory=SolverGuards)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.tau > 0.0:
            raise ConfigError("tau must be > 0")
        if self.params.lambda_max > 0.0:
            bound = self.h * self.h / (4.0 * self.params.lambda_max)
            if self.tau > bound + 1e-12:
                raise ConfigError(
                    f"tau={self.tau} violates the diffusion stability bound "
                    f"h^2/(4 max lambda) = {bound:.6g}"
                )
        steps = self.t_final / self.tau
        if abs(steps - round(steps)) > 1e-8 * max(1.0, steps):
            raise ConfigError(
                f"t_final/tau = {steps} is not an integer step count"
            )
        if any(v < 0 for v in self.initial_default):
            raise ConfigError("initial densities must be nonnegative")
        for ov in self.initial_overrides:
            x1, y1, x2, y2 = ov.region
            if not (1 <= x1 <= x2 <= self.nx and 1 <= y1 <= y2 <= self.ny):
                raise ConfigError(f"override region {ov.region} outside the grid")
            if min(ov.s, ov.i, ov.r) < 0:
                raise ConfigError("override densities must be nonnegative")
        if not 0.0 <= self.fbs.initial_control <= 1.0:
            raise ConfigError("initial control must lie in [0, 1]")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.tau))

    def build_grid(self) -> Grid2D:
        return Grid2D(self.nx, self.ny, self.h)

    def build_setup(self) -> FractionalSetup:
        return FractionalSetup(self.alpha, self.tau, self.n_steps)

    def initial_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Initial (S, I, R) value arrays of shape (ny, nx)."""
        shape = (self.ny, self.nx)
        s0, i0, r0 = self.initial_default
        s = np.full(shape, s0)
        i = np.full(shape, i0)
        r = np.full(shape, r0)
        for ov in self.initial_overrides:
            x1, y1, x2, y2 = ov.region
            sl = (slice(y1 - 1, y2), slice(x1 - 1, x2))
            s[sl] = ov.s
            i[sl] = ov.i
            r[sl] = ov.r
        return s, i, r


def _take(section: dict, key: str, default):
    return section[key] if key in section else default


def _require_keys(section: dict, allowed: set, where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")


def load_config(text: str) -> ScenarioConfig:
    """Parse a UTF-8 JSON document into a validated ScenarioConfig.

    A requested alpha of exactly 1.0 is served by the surrogate order
    0.999 (the fractional family is open at 1); the original request is
    kept in alpha_requested and echoed in run summaries.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    _require_keys(
        doc,
        {"alpha", "alpha_requested", "grid", "time", "params", "initial",
         "control_enabled", "fbs", "outputs", "guards"},
        "config root",
    )

    defaults = ScenarioConfig.__dataclass_fields__

    alpha = float(_take(doc, "alpha", defaults["alpha"].default))
    alpha_requested = doc.get("alpha_requested")
    if alpha == 1.0:
        alpha_requested = 1.0
        alpha = ALPHA_ONE_SURROGATE

    grid_sec = doc.get("grid", {})
    _require_keys(grid_sec, {"nx", "ny", "h"}, "grid")
    time_sec = doc.get("time", {})
    _require_keys(time_sec, {"t_final", "tau"}, "time")

    params_sec = doc.get("params", {})
    _require_keys(
        params_sec,
        {"mu", "d", "beta", "r", "lambda_s", "lambda_i", "lambda_r", "theta"},
        "params",
    )
    params = ModelParams(**{k: float(v) for k, v in params_sec.items()})

    init_sec = doc.get("initial", {})
    _require_keys(init_sec, {"default", "overrides"}, "initial")
    if "default" in init_sec:
        d0 = init_sec["default"]
        _require_keys(d0, {"s", "i", "r"}, "initial.default")
        initial_default = (
            float(_take(d0, "s", 50.0)),
            float(_take(d0, "i", 0.0)),
            float(_take(d0, "r", 0.0)),
        )
    else:
        initial_default = defaults["initial_default"].default
    if "overrides" in init_sec:
        overrides = []
        for ov in init_sec["overrides"]:
            _require_keys(ov, {"region", "s", "i", "r"}, "initial.overrides[]")
            region = tuple(int(v) for v in ov["region"])
            if len(region) != 4:
                raise ConfigError(f"override region must have 4 entries, got {region}")
            overrides.append(
                InitialOverride(
                    region=region,
                    s=float(_take(ov, "s", initial_default[0])),
                    i=float(_take(ov, "i", initial_default[1])),
                    r=float(_take(ov, "r", initial_default[2])),
                )
            )
        initial_overrides = tuple(overrides)
    else:
        initial_overrides = defaults["initial_overrides"].default

    fbs_sec = doc.get("fbs", {})
    _require_keys(fbs_sec, {"delta", "omega", "max_iter", "initial_control"}, "fbs")
    fbs = FBSSettings(
        delta=float(_take(fbs_sec, "delta", 0.001)),
        omega=float(_take(fbs_sec, "omega", 0.5)),
        max_iter=int(_take(fbs_sec, "max_iter", 100)),
        initial_control=float(_take(fbs_sec, "initial_control", 0.0)),
    )

    out_sec = doc.get("outputs", {})
    _require_keys(out_sec, {"snapshot_times", "directory"}, "outputs")
    outputs = OutputSettings(
        snapshot_times=tuple(
            float(v) for v in _take(out_sec, "snapshot_times", (5.0, 10.0, 15.0, 20.0))
        ),
        directory=str(_take(out_sec, "directory", "out")),
    )

    guard_sec = doc.get("guards", {})
    _require_keys(
        guard_sec,
        {"state_bound", "adjoint_bound", "positivity_budget", "memory_window"},
        "guards",
    )
    window = _take(guard_sec, "memory_window", None)
    guards = SolverGuards(
        state_bound=float(_take(guard_sec, "state_bound", 1e6)),
        adjoint_bound=float(_take(guard_sec, "adjoint_bound", 1e250)),
        positivity_budget=float(_take(guard_sec, "positivity_budget", 0.001)),
        memory_window=None if window is None else int(window),
    )

    try:
        return ScenarioConfig(
            alpha=alpha,
            alpha_requested=None if alpha_requested is None else float(alpha_requested),
            nx=int(_take(grid_sec, "nx", 10)),
            ny=int(_take(grid_sec, "ny", 10)),
            h=float(_take(grid_sec, "h", 1.0)),
            t_final=float(_take(time_sec, "t_final", 20.0)),
            tau=float(_take(time_sec, "tau", 0.005)),
            params=params,
            initial_default=initial_default,
            initial_overrides=initial_overrides,
            control_enabled=bool(_take(doc, "control_enabled", True)),
            fbs=fbs,
            outputs=outputs,
            guards=guards,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """Plain-JSON representation; load_config(json.dumps(...)) round-trips."""
    return {
        "alpha": cfg.alpha,
        "alpha_requested": cfg.alpha_requested,
        "grid": {"nx": cfg.nx, "ny": cfg.ny, "h": cfg.h},
        "time": {"t_final": cfg.t_final, "tau": cfg.tau},
        "params": dataclasses.asdict(cfg.params),
        "initial": {
            "default": {
                "s": cfg.initial_default[0],
                "i": cfg.initial_default[1],
                "r": cfg.initial_default[2],
            },
            "overrides": [
                {"region": list(ov.region), "s": ov.s, "i": ov.i, "r": ov.r}
                for ov in cfg.initial_overrides
            ],
        },
        "control_enabled": cfg.control_enabled,
        "fbs": dataclasses.asdict(cfg.fbs),
        "outputs": {
            "snapshot_times": list(cfg.outputs.snapshot_times),
            "directory": cfg.outputs.directory,
        },
        "guards": dataclasses.asdict(cfg.guards),
    }


def config_to_json(cfg: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True)
