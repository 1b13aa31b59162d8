"""Backward-in-time adjoint solve via the reversed-time fractional system.

Substituting q(s) = p(T - s) turns the terminal-value adjoint problem into a
well-posed forward fractional parabolic system

    D^alpha q = lambda Lap q + F^T(T - s) q + src(T - s),   q(0) = (0, I(T), 0),

with src = (0, I(t), 0) the observation source and F the reaction Jacobian
along the stored state/control. In the classical limit this reproduces
-p_t - lambda Lap p - F^T p = src. The same explicit marcher as the state
solve is used; the magnitude bound here is only an overflow guard, because
adjoint fields legitimately grow like exp(epidemic-growth-rate x window)
wherever the stored state holds a fresh susceptible pool.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, InstabilityError
from .forward import _Marcher
from .model import ModelParams
from .spatial import laplacian_array
from .trajectories import AdjointTrajectory, ControlTrajectory, StateTrajectory


def solve_adjoint(traj: StateTrajectory, control: ControlTrajectory,
                  p: ModelParams, magnitude_bound: float = 1e250,
                  memory_window: int | None = None) -> AdjointTrajectory:
    """Solve the adjoint system backward in time along a stored trajectory."""
    setup = traj.setup
    grid = traj.grid
    m = setup.n_steps
    if traj.n_filled != m + 1:
        raise DomainError("state trajectory is incomplete")
    if control.n_steps != m or control.grid.shape != grid.shape:
        raise DomainError("control grid/time shape does not match the trajectory")

    nc = grid.n_cells
    h = grid.h
    q1 = np.zeros((m + 1, nc))
    q2 = np.zeros((m + 1, nc))
    q3 = np.zeros((m + 1, nc))
    # Terminal data, normalized by the memory-kernel mass. Fractional
    # integration by parts pairs the terminal value against
    # (B/(1-a)) int_0^T E_a(-g (T-t)^a) dt of the sensitivity, a kernel
    # average whose mass exceeds one for a < 1; dividing by that mass makes
    # the pairing represent the terminal objective term (mass -> 1 and the
    # classical terminal condition reappear as a -> 1). Validated end to end
    # by the finite-difference gradient check.
    kernel_mass = setup.derivative_coef * float(setup.lag_weights[1:].sum())
    q2[0] = traj.I[m].ravel() / kernel_mass

    marcher = _Marcher(grid, setup, 3, memory_window)
    lam = (p.lambda_s, p.lambda_i, p.lambda_r)

    for n in range(1, m + 1):
        idx = m - n + 1  # state/control time index at s_{n-1}
        sv = traj.S[idx].ravel()
        iv = traj.I[idx].ravel()
        uv = control.u[idx].ravel()
        a1, a2, a3 = q1[n - 1], q2[n - 1], q3[n - 1]

        lap = tuple(
            laplacian_array(a.reshape(grid.shape), h).ravel()
            for a in (a1, a2, a3)
        )
        beta_i = p.beta * iv
        beta_s = p.beta * sv
        coupled = (
            (p.mu - beta_i - p.d - uv) * a1 + beta_i * a2 + uv * a3,
            (-beta_s + p.mu) * a1 + (beta_s - p.d - p.r) * a2 + p.r * a3 + iv,
            p.mu * a1 - p.d * a3,
        )
        for comp, (q, lp, cp) in enumerate(zip((q1, q2, q3), lap, coupled)):
            new = marcher.advance(comp, n, q[n - 1], lam[comp] * lp + cp)
            peak = np.abs(new).max()
            if not np.isfinite(peak) or peak > magnitude_bound:
                raise InstabilityError(
                    f"adjoint magnitude {peak:.3g} exceeded bound "
                    f"{magnitude_bound:.3g} at reversed step {n}",
                    step=n,
                )
            q[n] = new
            marcher.record(comp, n, q[n - 1], new)

    shape = (m + 1, grid.ny, grid.nx)
    return AdjointTrajectory(
        grid=grid,
        setup=setup,
        p1=q1[::-1].reshape(shape).copy(),
        p2=q2[::-1].reshape(shape).copy(),
        p3=q3[::-1].reshape(shape).copy(),
    )
