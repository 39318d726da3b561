"""Seeded samplers for the measures used throughout the package.

Each sampler is deterministic given a seed and extends prefix-stably:
drawing more samples reproduces the shorter run sample-for-sample.
"""

import numpy as np

from conclab.discrete import uniform_cube
from conclab.samplers import (
    sample_cone_lp,
    sample_finite,
    sample_gaussian,
    sample_grassmann,
    sample_pgen,
    sample_sphere,
    sample_stiefel,
)

N = 50000

# ---------------------------------------------------------------------
# 1. standard Gaussian with reproducibility and prefix stability
z = sample_gaussian(4, N, seed=0).data
z2 = sample_gaussian(4, N + 1000, seed=0).data
print("gaussian mean/var:", np.round(z.mean(), 4), np.round(z.var(), 4))
print("prefix stable:", np.array_equal(z, z2[:N]))

# ---------------------------------------------------------------------
# 2. p-generalized Gaussian, normalized so E|X|^p = 1 (hand-rolled
#    gamma sampling underneath)
for p in (2.0, 3.0, 4.0):
    x = sample_pgen(p, 1, N, seed=1).data.ravel()
    print("p=%.0f: E|X|^p = %.4f" % (p, np.mean(np.abs(x) ** p)))

# ---------------------------------------------------------------------
# 3. uniform sphere and lp cone measure: both land exactly on their
#    unit spheres, and n E[theta_1^2] = 1 on the round sphere
n = 6
th = sample_sphere(n, N, seed=2).data
print("sphere: max | |theta|-1 | = %.1e,  n E[theta_1^2] = %.4f"
      % (np.max(np.abs(np.linalg.norm(th, axis=1) - 1.0)),
         n * np.mean(th[:, 0] ** 2)))
c = sample_cone_lp(3.0, n, 1000, seed=3).data
print("cone p=3: max | |theta|_3 - 1 | = %.1e"
      % np.max(np.abs(np.sum(np.abs(c) ** 3, axis=1) ** (1 / 3) - 1.0)))

# ---------------------------------------------------------------------
# 4. Haar frames and projections: orthonormal columns on the Stiefel
#    manifold, rank-k projections on the Grassmann manifold
nk = (5, 2)
A = sample_stiefel(*nk, 1, seed=4).data[0].reshape(nk)
print("Stiefel A'A =\n", np.round(A.T @ A, 12))
P = sample_grassmann(5, 2, 1, seed=5).data[0].reshape(5, 5)
print("Grassmann: P=P' %s, P^2=P %s, tr P = %.0f"
      % (np.allclose(P, P.T), np.allclose(P @ P, P), np.trace(P)))

# ---------------------------------------------------------------------
# 5. finite product measures via alias sampling
sp = uniform_cube(2)
b = sample_finite(sp, N, seed=6).data
print("cube frequencies:", np.round([np.mean((b[:, 0] == s) & (b[:, 1] == t))
      for s in (-1.0, 1.0) for t in (-1.0, 1.0)], 3))
