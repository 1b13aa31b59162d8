"""The memory kernel of the fractional operator, explored numerically.

The whole solver rests on the two-parameter function

    E_{a,xi}(z) = sum_k z^k / Gamma(k a + xi),

which interpolates between exp (a = 1) and much heavier-tailed relaxation.
This script plots the relaxation family E_{a,1}(-t), checks the classical
identities, and shows how the per-interval memory weights of the discrete
derivative decay: the heavier the tail, the more the past matters.

Run:  python3 demos/01_mittag_leffler_kernel.py
"""

import math
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from abcsir import kernel_weights, mittag_leffler, mittag_leffler_many

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# sanity anchors: the classical members of the family
print("E_{1,1}(1)   =", mittag_leffler(1.0, 1.0, 1.0), " (e =", math.e, ")")
print("E_{2,1}(-4)  =", mittag_leffler(2.0, 1.0, -4.0), " (cos 2 =", math.cos(2.0), ")")
print("E_{1/2}(-1)  =", mittag_leffler(0.5, 1.0, -1.0), " (e*erfc(1) = 0.427583...)")

t = np.linspace(0.0, 30.0, 400)
fig, axes = plt.subplots(1, 2, figsize=(11, 4))
for alpha in (0.5, 0.7, 0.9, 0.95, 1.0):
    values = mittag_leffler_many(alpha, 1.0, -t)
    axes[0].plot(t, values, label=f"order {alpha}")
axes[0].set_yscale("log")
axes[0].set_xlabel("t")
axes[0].set_ylabel(r"$E_{\alpha,1}(-t)$")
axes[0].set_title("Relaxation family: exponential vs heavy tails")
axes[0].legend()

# discrete memory weights: integral of the kernel over each past interval
tau, m = 0.05, 200
for alpha in (0.7, 0.9, 0.95):
    w = kernel_weights(alpha, tau, m)
    axes[1].plot(np.arange(1, m + 1) * tau, w[1:] / tau, label=f"order {alpha}")
axes[1].set_yscale("log")
axes[1].set_xlabel("lag (days)")
axes[1].set_ylabel("interval-averaged kernel")
axes[1].set_title("Memory weights of the discrete derivative")
axes[1].legend()
fig.tight_layout()
fig.savefig(OUT / "mittag_leffler_kernel.png", dpi=130)
print("wrote", OUT / "mittag_leffler_kernel.png")
