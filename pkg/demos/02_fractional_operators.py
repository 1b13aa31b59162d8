"""Discrete fractional calculus: exactness, inversion, and duality.

Three quick experiments with the discrete operators:

  1. the derivative is exact on affine inputs (the kernel is integrated
     exactly per interval, so only the piecewise-linear reconstruction can
     introduce error);
  2. the fractional integral inverts the derivative, with first-order
     convergence under time refinement;
  3. integration by parts holds between the forward and backward operators
     up to two memory boundary terms, with a residual that is pure
     discretization error.

Run:  python3 demos/02_fractional_operators.py
"""

import numpy as np

from abcsir import (
    FractionalSetup,
    ab_integral,
    abc_derivative,
    abc_linear_ode_solution,
    duality_residual,
    mittag_leffler,
)

print("1. exactness on affine inputs")
for alpha in (0.5, 0.9):
    setup = FractionalSetup(alpha, 0.05, 100)
    t = setup.t_grid
    got = abc_derivative(2.0 + 3.0 * t, setup)
    want = np.array([
        setup.derivative_coef * 3.0 * tn
        * mittag_leffler(alpha, 2.0, -setup.gamma_coef * tn ** alpha)
        if tn > 0 else 0.0
        for tn in t
    ])
    print(f"   order {alpha}: max defect {np.abs(got - want).max():.2e}")

print("2. integral inverts derivative (defect under refinement)")
for m in (100, 200, 400, 800):
    setup = FractionalSetup(0.7, 1.0 / m, m)
    y = np.sin(2.0 * setup.t_grid) + 0.3
    recovered = ab_integral(abc_derivative(y, setup), setup)
    print(f"   m={m:4d}: {np.abs(recovered - (y - y[0])).max():.3e}")

print("3. integration-by-parts residual, sin/cos pair at order 0.7")
prev = None
for m in (125, 250, 500, 1000):
    setup = FractionalSetup(0.7, 1.0 / m, m)
    r = duality_residual(np.sin(setup.t_grid), np.cos(setup.t_grid), setup)
    note = f" (ratio {prev / r:.2f})" if prev else ""
    print(f"   m={m:4d}: {r:.3e}{note}")
    prev = r

print("4. scalar decay law vs the classical exponential")
print("   t     order 0.9     order 0.999   exp(-0.03 t)")
for t in (1.0, 5.0, 10.0, 20.0):
    v9 = abc_linear_ode_solution(0.9, 0.03, 1.0, t)
    v999 = abc_linear_ode_solution(0.999, 0.03, 1.0, t)
    print(f"   {t:4.1f}  {v9:.6f}     {v999:.6f}     {np.exp(-0.03 * t):.6f}")
print("   the fractional solution drops instantly, then outlives the exponential")
