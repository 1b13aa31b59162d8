"""Epidemic parameters, reaction terms, and the control-system matrices.

The compartment densities S, I, R evolve cell-locally (mass action) apart
from diffusion, under vaccination that moves susceptibles directly to the
recovered class at rate u(t, x) in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .spatial import Field


@dataclass(frozen=True)
class ModelParams:
    """Epidemiological and diffusion constants, plus the control weight.

    Units: rates are per day; beta is per (people/km^2) per day; diffusion
    coefficients are km^2/day; theta is dimensionless.
    """

    mu: float = 0.02       # birth rate
    d: float = 0.03        # natural death rate
    beta: float = 0.9      # transmission rate
    r: float = 0.04        # recovery rate
    lambda_s: float = 0.6  # diffusion of susceptibles
    lambda_i: float = 0.6  # diffusion of infected
    lambda_r: float = 0.6  # diffusion of recovered
    theta: float = 1.0     # control weight in the objective

    def __post_init__(self):
        for name in ("mu", "d", "beta", "r", "lambda_s", "lambda_i", "lambda_r", "theta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be a finite nonnegative number, got {v!r}")
        if self.beta <= 0.0:
            raise DomainError("beta must be > 0")
        if self.theta <= 0.0:
            raise DomainError("theta must be > 0")

    @property
    def lambda_max(self) -> float:
        return max(self.lambda_s, self.lambda_i, self.lambda_r)


@dataclass
class SIRState:
    """Compartment densities (people/km^2) at one time instant."""

    S: Field
    I: Field
    R: Field

    @property
    def total_population(self) -> float:
        from .spatial import integrate_field

        return (
            integrate_field(self.S) + integrate_field(self.I) + integrate_field(self.R)
        )


def reaction_terms(s, i, rec, u, p: ModelParams):
    """Cell-local reaction rates (f_S, f_I, f_R); accepts scalars or arrays.

    f_S = mu (s+i+rec) - beta s i - d s - u s
    f_I = beta s i - (d + r) i
    f_R = r i - d rec + u s

    Their sum is (mu - d)(s+i+rec): infection, recovery, and vaccination only
    move mass between compartments.
    """
    n = s + i + rec
    infection = p.beta * s * i
    f_s = p.mu * n - infection - p.d * s - u * s
    f_i = infection - (p.d + p.r) * i
    f_r = p.r * i - p.d * rec + u * s
    return f_s, f_i, f_r


def reaction_jacobian(s: float, i: float, u: float, p: ModelParams) -> np.ndarray:
    """State Jacobian of the reaction terms at (s, i, *, u).

    [[mu - beta i - d - u, -beta s + mu, mu ],
     [beta i,               beta s - d - r, 0 ],
     [u,                    r,             -d ]]
    """
    return np.array(
        [
            [p.mu - p.beta * i - p.d - u, -p.beta * s + p.mu, p.mu],
            [p.beta * i, p.beta * s - p.d - p.r, 0.0],
            [u, p.r, -p.d],
        ]
    )


def vaccination_direction(s):
    """Direction in which the control enters the dynamics: (-s, 0, s).

    Components sum to zero: vaccination conserves population.
    """
    zero = s * 0.0
    return (-s, zero, s)


def observation_matrix() -> np.ndarray:
    """Selector of the infected compartment, diag(0, 1, 0); idempotent."""
    return np.diag([0.0, 1.0, 0.0])
