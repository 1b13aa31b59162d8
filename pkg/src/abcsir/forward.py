"""Explicit fractional-time marcher for the reaction-diffusion state system.

Each step solves the scalar relation

    (B/((1-a) tau)) [ w1 (y^n - y^{n-1}) + H^n ] = lambda Lap y^{n-1} + f(y^{n-1}, u^{n-1})

per cell and component, where H^n is the memory sum over all past increments
weighted by the lag kernel. The right-hand side is explicit and the unknown
enters linearly, so the update is a single vector operation per component;
the memory sum is a BLAS matrix-vector product against the stored increment
history (O(n) work at step n, O(m^2) for a full solve).

Negative values produced by the explicit step are clipped to zero and the
clipped mass is accounted; a run whose cumulative clipped mass exceeds the
configured fraction of the initial population is rejected.
"""

from __future__ import annotations

import math

import numpy as np

from .config import ScenarioConfig
from .errors import DomainError, InstabilityError, PositivityBudgetError
from .fracops import FractionalSetup
from .model import ModelParams, SIRState, reaction_terms
from .spatial import Field, Grid2D, laplacian_array
from .trajectories import ControlTrajectory, StateTrajectory


def fractional_stiffness_ratio(config: ScenarioConfig) -> float:
    """Stability indicator of the explicit fractional step.

    The operator responds to a source jump with the step-size-independent
    factor (1 - alpha)/B(alpha); against a linearized modulus k (reaction
    plus diffusion stencil) the marching recursion carries an oscillatory
    root that leaves the unit circle when roughly (1 - alpha) k / B > 1,
    which is also where the continuous resolvent loses positivity. Ratios
    above ~1 diverge at every step size; clipping cannot bound them.
    """
    s0, i0, r0 = config.initial_arrays()
    p = config.params
    peak_density = float(np.max(s0 + i0 + r0))
    # dominant local moduli: infection pressure, vital/vaccination drain,
    # and the extreme 5-point stencil mode
    k = p.beta * peak_density + p.d + p.r + 1.0 + 8.0 * p.lambda_max / config.h ** 2
    alpha = config.alpha
    b = (1.0 - alpha) + alpha / math.gamma(alpha)
    return (1.0 - alpha) * k / b


class _Marcher:
    """Shared explicit stepper over flat (n_cells,) component vectors."""

    def __init__(self, grid: Grid2D, setup: FractionalSetup, n_components: int,
                 memory_window: int | None = None):
        self.grid = grid
        self.setup = setup
        m = setup.n_steps
        nc = grid.n_cells
        # reversed-time increment store: row m-1-k holds y^{k+1} - y^k, so
        # the memory sum at step n is a contiguous matrix-vector product
        self.rdiffs = [np.zeros((m, nc)) for _ in range(n_components)]
        self.window = memory_window

    def memory_sum(self, comp: int, n: int) -> np.ndarray:
        m = self.setup.n_steps
        jmax = n if self.window is None else min(n, self.window)
        if jmax < 2:
            return 0.0
        w = self.setup.lag_weights[2 : jmax + 1]
        seg = self.rdiffs[comp][m + 1 - n : m + jmax - n]
        return w @ seg

    def advance(self, comp: int, n: int, prev_flat: np.ndarray,
                rhs_flat: np.ndarray) -> np.ndarray:
        s = self.setup
        incr = (s.step_scale * rhs_flat - self.memory_sum(comp, n)) / s.lag_weights[1]
        return prev_flat + incr

    def record(self, comp: int, n: int, prev_flat: np.ndarray,
               new_flat: np.ndarray) -> None:
        m = self.setup.n_steps
        self.rdiffs[comp][m - n] = new_flat - prev_flat


def _clip_negative(flat: np.ndarray, cell_area: float) -> tuple[np.ndarray, float]:
    neg = flat < 0.0
    if not neg.any():
        return flat, 0.0
    clipped = -flat[neg].sum() * cell_area
    flat = flat.copy()
    flat[neg] = 0.0
    return flat, clipped


def step_forward(history: StateTrajectory, u_now: Field, p: ModelParams,
                 n: int) -> SIRState:
    """Advance a stored trajectory by one step (states 0..n-1 -> state n).

    Reference entry point over the trajectory container; solve_forward runs
    the same arithmetic against an incremental increment store. Clipping is
    applied; the clipped mass is added to history.clipped_mass.
    """
    if not 1 <= n <= history.setup.n_steps:
        raise DomainError(f"step index {n} outside 1..{history.setup.n_steps}")
    if history.n_filled < n:
        raise DomainError(f"history holds {history.n_filled} states, need {n}")
    setup = history.setup
    grid = history.grid
    h = grid.h
    w = setup.lag_weights

    new_vals = []
    clipped = 0.0
    lam = (p.lambda_s, p.lambda_i, p.lambda_r)
    f_parts = reaction_terms(
        history.S[n - 1], history.I[n - 1], history.R[n - 1], u_now.values, p
    )
    for comp, arr in enumerate((history.S, history.I, history.R)):
        diffs = np.diff(arr[:n], axis=0)  # (n-1, ny, nx)
        if n >= 2:
            mem = np.tensordot(w[2 : n + 1], diffs[n - 2 :: -1], axes=(0, 0))
        else:
            mem = 0.0
        rhs = lam[comp] * laplacian_array(arr[n - 1], h) + f_parts[comp]
        new = arr[n - 1] + (setup.step_scale * rhs - mem) / w[1]
        flat, c = _clip_negative(new.ravel(), grid.cell_area)
        clipped += c
        new_vals.append(flat.reshape(grid.shape))
    history.clipped_mass += clipped
    return SIRState(
        S=Field(grid, new_vals[0]),
        I=Field(grid, new_vals[1]),
        R=Field(grid, new_vals[2]),
    )


def solve_forward(config: ScenarioConfig, control: ControlTrajectory,
                  grid: Grid2D | None = None,
                  setup: FractionalSetup | None = None) -> StateTrajectory:
    """March the state system over the full horizon for a given control.

    Deterministic for fixed inputs. Raises InstabilityError when any density
    exceeds the state bound (the explicit step size is too large for the
    reaction rates) and PositivityBudgetError when cumulative clipped mass
    exceeds the configured fraction of the initial population.
    """
    grid = grid or config.build_grid()
    setup = setup or config.build_setup()
    m = setup.n_steps
    if control.n_steps != m or control.grid.shape != grid.shape:
        raise DomainError("control grid/time shape does not match the scenario")

    s0, i0, r0 = config.initial_arrays()
    traj = StateTrajectory.allocate(grid, setup, s0, i0, r0)
    marcher = _Marcher(grid, setup, 3, config.guards.memory_window)
    p = config.params
    lam = (p.lambda_s, p.lambda_i, p.lambda_r)
    h = grid.h
    area = grid.cell_area
    budget = config.guards.positivity_budget * traj.initial_population
    bound = config.guards.state_bound

    comps = (traj.S, traj.I, traj.R)
    flats = [c_.reshape(m + 1, grid.n_cells) for c_ in comps]
    u_flat = control.u.reshape(m + 1, grid.n_cells)

    for n in range(1, m + 1):
        prev = [fl[n - 1] for fl in flats]
        sv, iv, rv = (x.reshape(grid.shape) for x in prev)
        f_s, f_i, f_r = reaction_terms(
            sv, iv, rv, u_flat[n - 1].reshape(grid.shape), p
        )
        rhs = (
            lam[0] * laplacian_array(sv, h) + f_s,
            lam[1] * laplacian_array(iv, h) + f_i,
            lam[2] * laplacian_array(rv, h) + f_r,
        )
        for comp in range(3):
            new = marcher.advance(comp, n, prev[comp], rhs[comp].ravel())
            new, clipped = _clip_negative(new, area)
            traj.clipped_mass += clipped
            peak = np.abs(new).max()
            if not np.isfinite(peak) or peak > bound:
                raise InstabilityError(
                    f"state magnitude {peak:.3g} exceeded bound {bound:.3g} "
                    f"at step {n} (t = {n * setup.tau:.4g})",
                    step=n,
                )
            flats[comp][n] = new
            marcher.record(comp, n, prev[comp], new)
        if traj.clipped_mass > budget:
            raise PositivityBudgetError(
                f"clipped mass {traj.clipped_mass:.4g} exceeded budget "
                f"{budget:.4g} at step {n}",
                step=n,
                clipped_mass=traj.clipped_mass,
            )
        traj.n_filled = n + 1
    return traj
