"""Polynomials and intrinsic derivatives on embedded manifolds.

Evaluates sparse multivariate polynomials, differentiates them exactly,
projects gradients onto tangent spaces, and forms the intrinsic sphere
Hessian, cross-checked by finite differences.
"""

import numpy as np

from conclab.calculus import (
    Grassmann,
    PolyFunction,
    Sphere,
    Stiefel,
    derivative_tensor,
    intrinsic_gradient,
    sphere_hessian,
)
from conclab.samplers import sample_grassmann, sample_sphere, sample_stiefel
from conclab.verify import finite_difference_suite

# ---------------------------------------------------------------------
# 1. sparse polynomials: exact evaluation and exact derivative tensors
f = PolyFunction(3, {(1, 1, 0): 2.0, (0, 0, 3): 1.0})   # 2 x1 x2 + x3^3
x = np.array([1.0, 2.0, 0.5])
print("f(x) =", f.eval(x), " grad =", f.gradient(x))
print("third derivative in x3 only:", derivative_tensor(f, 3, x).array[2, 2, 2])

# ---------------------------------------------------------------------
# 2. the intrinsic gradient is the tangential part of the ambient one;
#    on the sphere it always contracts the Euclidean length
g = PolyFunction.linear([1.0, 0.0, 0.0])
theta = np.array([0.0, 1.0, 0.0])
print("\nsphere gradient of <e1, theta> at e2:",
      intrinsic_gradient(Sphere(3), g, theta))
pts = sample_sphere(3, 200, seed=0).data
contracts = all(
    np.linalg.norm(intrinsic_gradient(Sphere(3), g, p))
    <= np.linalg.norm(g.gradient(p)) + 1e-12
    for p in pts
)
print("gradient contraction on 200 random points:", contracts)

# ---------------------------------------------------------------------
# 3. the intrinsic sphere Hessian: for a linear function it is -f P
#    (pure curvature), and |theta|^2/2 is intrinsically flat
H = sphere_hessian(g, theta).array
print("\nsphere Hessian of a linear function at e2:\n", np.round(H, 12))
q = PolyFunction.quadratic_form(np.eye(3) / 2.0)
print("Hessian of |theta|^2/2 vanishes:",
      np.allclose(sphere_hessian(q, theta).array, 0.0))

# ---------------------------------------------------------------------
# 4. finite-difference validation across manifolds
rng = np.random.default_rng(1)
A = rng.standard_normal((4, 4))
fq = PolyFunction.quadratic_form((A + A.T) / 2.0)
print("\nmax FD error on the sphere (incl. Hessian): %.1e"
      % finite_difference_suite(fq, Sphere(4), sample_sphere(4, 10, seed=2).data))
fs = PolyFunction.linear(rng.standard_normal(8))
print("max FD error on Stiefel(4,2): %.1e"
      % finite_difference_suite(fs, Stiefel(4, 2),
                                sample_stiefel(4, 2, 10, seed=3).data))
fg = PolyFunction.linear(rng.standard_normal(16))
print("max FD error on Grassmann(4,2): %.1e"
      % finite_difference_suite(fg, Grassmann(4, 2),
                                sample_grassmann(4, 2, 10, seed=4).data))
