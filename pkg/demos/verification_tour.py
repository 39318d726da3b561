"""Verification machinery: checking the bounds against actual measures.

Monte Carlo tail checks with exact binomial confidence bounds, exhaustive
checks on small hypercubes, moment-growth verification, entropy-ratio
search for the discrete log-Sobolev constant, and automatic level
coefficients.
"""

import numpy as np

from conclab.bounds import LevelCoefficients, exp_moment_certificate, setting_catalog
from conclab.discrete import dependence_profile, dlsi_constant, ising_space, uniform_cube
from conclab.samplers import sample_gaussian
from conclab.verify import (
    discrete_level_coefficients,
    empirical_tail,
    verify_dlsi,
    verify_exp_moment,
    verify_moment_recursion,
    verify_tail,
)

# ---------------------------------------------------------------------
# 1. Monte Carlo tail verification: the empirical tail is inflated to an
#    exact Clopper-Pearson upper confidence bound before comparison
n = 15
a = np.zeros(n); a[0] = 1.0
batch = sample_gaussian(n, 50000, seed=0)
s = setting_catalog("gaussian", d=1)
report = verify_tail(batch, lambda x: float(a @ x), s,
                     LevelCoefficients([1.0]), np.arange(0.0, 4.1, 0.5), 0.01)
print(report.to_csv())
print("passed:", report.passed)

# the confidence machinery on its own
frac, ucb = empirical_tail(batch.data[:, 0], 2.0, 0.01)
print("P(|Z|>=2): empirical %.4f, 99%% upper bound %.4f" % (frac, ucb))

# ---------------------------------------------------------------------
# 2. exhaustive verification on a hypercube: tails and moment growth are
#    computed exactly, no sampling error
sp = uniform_cube(8)
rng = np.random.default_rng(1)
A = rng.standard_normal((8, 8)); A = (A + A.T) / 2.0
np.fill_diagonal(A, 0.0)
f = lambda x: float(x @ A @ x)
K = discrete_level_coefficients(f, sp, 2)
print("\nauto level coefficients:", np.round(K.K, 3))
s2 = setting_catalog("independent_bounded", d=2)
print("exact tail check:",
      verify_tail(sp, f, s2, K, np.linspace(0.0, 60.0, 20), 0.01).passed)
print("exact moment growth check:",
      verify_moment_recursion(sp, f, s2, K, [2.0, 4.0, 8.0]).passed)

# ---------------------------------------------------------------------
# 3. exponential-moment certificate, verified by exact integration of a
#    normalized quadratic
scale = 1.0 / max(K.K)
fn = lambda x: scale * f(x)
cert = exp_moment_certificate(s2, discrete_level_coefficients(fn, sp, 2))
value, ok = verify_exp_moment(sp, fn, cert)
print("exact integral of exp(c|f - Ef|): %.4f (<= 2: %s)" % (value, ok))

# ---------------------------------------------------------------------
# 4. entropy-ratio search: the best log-Sobolev ratio found on the
#    two-point space is 1, and a weakly dependent Ising chain stays
#    below its closed-form constant
best, ok = verify_dlsi(uniform_cube(1), 1.0, search_budget=4, seed=2)
print("\ntwo-point space: best ratio %.6f, claim holds: %s" % (best, ok))
chain = ising_space(3, [(0, 1, 1.0), (1, 2, 1.0)], beta=0.2)
sigma2, _ = dlsi_constant(dependence_profile(chain))
best, ok = verify_dlsi(chain, sigma2, search_budget=2, seed=3)
print("Ising chain: best ratio %.4f <= sigma^2 %.4f: %s" % (best, sigma2, ok))
