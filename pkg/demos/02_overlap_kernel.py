"""The ball-overlap smoothing kernel.

The kernel value at x is the exact fraction of the radius-L ball that
survives translation by x.  It is 1 at the identity, decays linearly along
geodesics, and vanishes outside the double ball.  Its worst single-generator
deficit eps controls both the pointwise bound 1 - K(x) <= len(x) * eps and
the l2 smoothing error.
"""

import numpy as np

from spectrunc import (
    FreeAbelian,
    Heisenberg,
    fejer_apply,
    fejer_kernel,
    l2_norm,
    random_element,
    word_length,
)

z1 = FreeAbelian(1)
print("Kernel on Z at L=3 (exact rationals):")
kern = fejer_kernel(z1, 3)
for k in range(0, 8):
    print(f"  K({k:+d}) = {kern((k,))}")
print(f"  worst generator deficit eps = {kern.folner_epsilon}")

print()
h3 = Heisenberg()
kern = fejer_kernel(h3, 2)
print(f"Kernel on Heisenberg at L=2: eps = {kern.folner_epsilon}")
worst_slack = min(
    word_length(h3, x) * kern.folner_epsilon - (1 - v)
    for x, v in kern.values.items()
    if x != h3.identity()
)
print(f"  tightest slack in 1 - K(x) <= len(x) * eps: {worst_slack}")

print()
print("Smoothing a random element on the plane (L=4):")
z2 = FreeAbelian(2)
rng = np.random.default_rng(0)
f = random_element(z2, 5, rng)
smoothed = fejer_apply(f, 4)
eps = float(fejer_kernel(z2, 4).folner_epsilon)
err_sq = l2_norm(f - smoothed) ** 2
mass = sum(
    word_length(z2, g) ** 2 * abs(complex(v)) ** 2
    for g, v in f.items()
    if g != z2.identity()
)
print(f"  ||f - Kf||^2 = {err_sq:.6f}")
print(f"  eps * weighted mass = {eps * mass:.6f}  (the guaranteed ceiling)")
