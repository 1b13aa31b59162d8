"""Time-history containers shared by the state, adjoint, and control solvers.

The fractional operators are non-local in time, so every solver keeps the
full history: arrays of shape (n_steps + 1, ny, nx) indexed by time step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fracops import FractionalSetup
from .model import SIRState
from .spatial import Field, Grid2D


@dataclass
class StateTrajectory:
    """Full (S, I, R) history of one forward solve."""

    grid: Grid2D
    setup: FractionalSetup
    S: np.ndarray
    I: np.ndarray
    R: np.ndarray
    clipped_mass: float = 0.0
    n_filled: int = 0

    @classmethod
    def allocate(cls, grid: Grid2D, setup: FractionalSetup, s0, i0, r0):
        m = setup.n_steps
        traj = cls(
            grid=grid,
            setup=setup,
            S=np.zeros((m + 1, grid.ny, grid.nx)),
            I=np.zeros((m + 1, grid.ny, grid.nx)),
            R=np.zeros((m + 1, grid.ny, grid.nx)),
        )
        traj.S[0] = s0
        traj.I[0] = i0
        traj.R[0] = r0
        traj.n_filled = 1
        return traj

    def state_at(self, n: int) -> SIRState:
        return SIRState(
            S=Field(self.grid, self.S[n].copy()),
            I=Field(self.grid, self.I[n].copy()),
            R=Field(self.grid, self.R[n].copy()),
        )

    @property
    def initial_population(self) -> float:
        return float(
            (self.S[0] + self.I[0] + self.R[0]).sum() * self.grid.cell_area
        )

    def total_population(self, n: int) -> float:
        return float((self.S[n] + self.I[n] + self.R[n]).sum() * self.grid.cell_area)


@dataclass
class AdjointTrajectory:
    """Adjoint fields over the full time grid; index 0 is t = 0."""

    grid: Grid2D
    setup: FractionalSetup
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray


@dataclass
class ControlTrajectory:
    """Vaccination rate over the full time grid, clamped to [0, 1]."""

    grid: Grid2D
    u: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.ndim != 3 or self.u.shape[1:] != self.grid.shape:
            raise DomainError(
                f"control shape {self.u.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.u)):
            raise DomainError("control values must be finite")
        if self.u.min() < 0.0 or self.u.max() > 1.0:
            raise DomainError("control values must lie in [0, 1]")

    @classmethod
    def constant(cls, grid: Grid2D, n_steps: int, value: float = 0.0):
        return cls(grid, np.full((n_steps + 1, grid.ny, grid.nx), float(value)))

    @property
    def n_steps(self) -> int:
        return self.u.shape[0] - 1


@dataclass
class SweepIterate:
    """One forward-backward iterate: the seven compared quantities."""

    S: np.ndarray
    I: np.ndarray
    R: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    u: np.ndarray
    tau: float
    cell_area: float

    _NAMES = ("S", "I", "R", "p1", "p2", "p3", "u")

    def arrays(self):
        return tuple(getattr(self, name) for name in self._NAMES)

    @classmethod
    def zeros_like(cls, other: "SweepIterate") -> "SweepIterate":
        return cls(
            *(np.zeros_like(a) for a in other.arrays()),
            tau=other.tau,
            cell_area=other.cell_area,
        )


@dataclass
class SweepReport:
    """Outcome of one forward-backward sweep."""

    iterations: int
    j_history: list
    j_final: float
    converged: bool
    clipped_mass: float
    test_history: list = field(default_factory=list)
    # soft diagnostic: sweeps are not guaranteed monotone; a violation
    # flags the run for step-size review rather than failing it
    j_nonincreasing_within_tol: bool = True
    control: ControlTrajectory | None = None
    state: StateTrajectory | None = None
    adjoint: AdjointTrajectory | None = None

    def to_json_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "j_history": [list(j) for j in self.j_history],
            "j_final": self.j_final,
            "converged": self.converged,
            "clipped_mass": self.clipped_mass,
            "test_history": list(self.test_history),
            "j_nonincreasing_within_tol": self.j_nonincreasing_within_tol,
        }
