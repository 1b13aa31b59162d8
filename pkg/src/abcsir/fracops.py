"""Discrete fractional-time operators with a Mittag-Leffler memory kernel.

The derivative acts on samples of a function reconstructed piecewise-linearly
on a uniform time grid. The kernel integral over each interval is evaluated
exactly through the identity

    int_0^x E_alpha(-g s^alpha) ds = x E_{alpha,2}(-g x^alpha),

so all discretization error lives in the linear reconstruction. Because that
integral depends only on the lag t_n - t_k, the full weight table w[n][k] is
Toeplitz and is stored as a single lag vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .special import gamma, mittag_leffler

_WEIGHT_CACHE: dict[tuple[float, float, int], np.ndarray] = {}


def _validate_order(alpha: float) -> None:
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha)) or not 0.0 < alpha < 1.0:
        raise DomainError(f"fractional order must lie in (0, 1), got {alpha!r}")


def kernel_weights(alpha: float, tau: float, n_steps: int) -> np.ndarray:
    """Exact per-interval kernel integrals, as a lag vector.

    Returns w of shape (n_steps + 1,) with w[0] = 0 and

        w[j] = int_{t_{j-1}}^{t_j} E_alpha(-g s^alpha) ds
             = t_j E_{alpha,2}(-g t_j^alpha) - t_{j-1} E_{alpha,2}(-g t_{j-1}^alpha).

    The dense table of the derivative stencil is w[n][k] = w[n - k]
    (see FractionalSetup.weight_row).
    """
    _validate_order(alpha)
    if not tau > 0.0:
        raise DomainError(f"tau must be > 0, got {tau!r}")
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps!r}")
    key = (float(alpha), float(tau), int(n_steps))
    cached = _WEIGHT_CACHE.get(key)
    if cached is not None:
        return cached
    g = alpha / (1.0 - alpha)
    t = tau * np.arange(n_steps + 1, dtype=float)
    anti = np.empty(n_steps + 1, dtype=float)
    anti[0] = 0.0
    for j in range(1, n_steps + 1):
        anti[j] = t[j] * mittag_leffler(alpha, 2.0, -g * t[j] ** alpha)
    w = np.empty(n_steps + 1, dtype=float)
    w[0] = 0.0
    w[1:] = np.diff(anti)
    w.flags.writeable = False
    _WEIGHT_CACHE[key] = w
    return w


@dataclass(frozen=True)
class FractionalSetup:
    """Order-dependent constants and memory weights for one time grid."""

    alpha: float
    tau: float
    n_steps: int
    gamma_coef: float = field(init=False)
    b_alpha: float = field(init=False)
    lag_weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        _validate_order(self.alpha)
        object.__setattr__(self, "gamma_coef", self.alpha / (1.0 - self.alpha))
        object.__setattr__(
            self, "b_alpha", (1.0 - self.alpha) + self.alpha / gamma(self.alpha)
        )
        object.__setattr__(
            self, "lag_weights", kernel_weights(self.alpha, self.tau, self.n_steps)
        )

    @property
    def derivative_coef(self) -> float:
        """Prefactor B(alpha)/(1 - alpha) of the discrete derivative."""
        return self.b_alpha / (1.0 - self.alpha)

    @property
    def step_scale(self) -> float:
        """(1 - alpha) tau / B(alpha): response of one step to a unit source."""
        return (1.0 - self.alpha) * self.tau / self.b_alpha

    @property
    def t_grid(self) -> np.ndarray:
        return self.tau * np.arange(self.n_steps + 1, dtype=float)

    def weight(self, n: int, k: int) -> float:
        """Dense-table entry w[n][k] for 0 <= k < n <= n_steps."""
        if not 0 <= k < n <= self.n_steps:
            raise DomainError(f"weight indices out of range: n={n}, k={k}")
        return float(self.lag_weights[n - k])

    def weight_row(self, n: int) -> np.ndarray:
        """All weights w[n][k], k = 0..n-1 (most recent history last)."""
        if not 1 <= n <= self.n_steps:
            raise DomainError(f"weight row out of range: n={n}")
        return self.lag_weights[1 : n + 1][::-1].copy()


def _check_samples(samples, setup: FractionalSetup) -> np.ndarray:
    y = np.asarray(samples, dtype=float)
    if y.ndim != 1 or y.shape[0] != setup.n_steps + 1:
        raise DomainError(
            f"expected {setup.n_steps + 1} samples, got shape {y.shape}"
        )
    if not np.all(np.isfinite(y)):
        raise DomainError("samples must be finite")
    return y


def abc_derivative(samples, setup: FractionalSetup) -> np.ndarray:
    """Discrete fractional derivative of a sampled function.

    d[n] = (B/(1-alpha)) sum_{k<n} ((y_{k+1}-y_k)/tau) w[n][k], d[0] = 0.
    Exact for piecewise-linear input. The base point carries no history,
    hence the zero convention at n = 0.
    """
    y = _check_samples(samples, setup)
    diffs = np.diff(y)
    w = setup.lag_weights
    m = setup.n_steps
    conv = np.convolve(diffs, w[1:])[:m]
    out = np.empty(m + 1, dtype=float)
    out[0] = 0.0
    out[1:] = setup.derivative_coef * conv / setup.tau
    return out


def abc_derivative_backward(samples, setup: FractionalSetup) -> np.ndarray:
    """Backward (terminal-anchored) fractional derivative.

    Realized by time reversal: the backward derivative at t equals the
    forward derivative of s -> y(T - s) evaluated at s = T - t (the chain
    rule supplies the sign, so this tends to -y'(t) as alpha -> 1).
    """
    y = _check_samples(samples, setup)
    return abc_derivative(y[::-1], setup)[::-1]


def ab_integral(samples, setup: FractionalSetup) -> np.ndarray:
    """Discrete fractional integral (instantaneous + power-kernel parts).

    I[n] = ((1-alpha)/B) y_n + (alpha/(B Gamma(alpha))) Q_n with Q_n the
    product-trapezoid value of int_0^{t_n} y(s) (t_n - s)^{alpha-1} ds:
    piecewise-linear y against exactly integrated power-kernel moments.
    """
    y = _check_samples(samples, setup)
    a = setup.alpha
    m = setup.n_steps
    tau = setup.tau
    j = np.arange(m + 1, dtype=float)
    pow_a = j ** a
    pow_a1 = j ** (1.0 + a)
    # per-lag moments of the kernel against 1 and the local slope
    m0 = np.zeros(m + 1)
    m1 = np.zeros(m + 1)
    m0[1:] = tau ** a * np.diff(pow_a) / a
    m1[1:] = tau ** (1.0 + a) * (
        j[1:] * np.diff(pow_a) / a - np.diff(pow_a1) / (1.0 + a)
    )
    diffs = np.diff(y)
    q = np.zeros(m + 1)
    q[1:] = (
        np.convolve(y[:-1], m0[1:])[:m]
        + np.convolve(diffs, m1[1:])[:m] / tau
    )
    return (1.0 - a) / setup.b_alpha * y + a / (setup.b_alpha * gamma(a)) * q


def abc_linear_ode_solution(alpha: float, a: float, c0: float, t: float) -> float:
    """Closed-form solution of the scalar fractional decay problem.

    Solves D^alpha c = -a c, c(0) = c0:

        c(t) = c0 * (B/(B + (1-alpha) a)) * E_alpha(-(alpha a/(B + (1-alpha) a)) t^alpha)

    (one spectral mode with zero forcing). Note c(0+) != c0 for a > 0: the
    operator's instantaneous response rescales the initial value.
    """
    _validate_order(alpha)
    if not (math.isfinite(a) and a >= 0.0):
        raise DomainError(f"decay rate must be >= 0, got {a!r}")
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"time must be >= 0, got {t!r}")
    b = (1.0 - alpha) + alpha / gamma(alpha)
    den = b + (1.0 - alpha) * a
    return c0 * (b / den) * mittag_leffler(alpha, 1.0, -(alpha * a / den) * t ** alpha)


def duality_residual(y, v, setup: FractionalSetup) -> float:
    """Defect of the discrete integration-by-parts identity.

    The forward and backward derivatives are adjoint up to two memory-kernel
    boundary terms:

        int_0^T (D y) v dt = int_0^T y (D_T v) dt
            + (B/(1-alpha)) v(T) int_0^T y(t) E_alpha(-g (T-t)^alpha) dt
            - (B/(1-alpha)) y(0) int_0^T v(t) E_alpha(-g t^alpha) dt.

    All integrals are discretized with the trapezoid rule and the derivatives
    with the discrete operators above; the returned |LHS - RHS| is pure
    discretization error and vanishes under time refinement.
    """
    y = _check_samples(y, setup)
    v = _check_samples(v, setup)
    tau = setup.tau
    t = setup.t_grid
    g = setup.gamma_coef
    a = setup.alpha

    kern = np.array([mittag_leffler(a, 1.0, -g * s ** a) for s in t])
    lhs = np.trapezoid(abc_derivative(y, setup) * v, dx=tau)
    rhs = (
        np.trapezoid(y * abc_derivative_backward(v, setup), dx=tau)
        + setup.derivative_coef * v[-1] * np.trapezoid(y * kern[::-1], dx=tau)
        - setup.derivative_coef * y[0] * np.trapezoid(v * kern, dx=tau)
    )
    return abs(lhs - rhs)
