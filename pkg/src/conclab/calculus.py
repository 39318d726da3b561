"""Polynomial test functions and intrinsic first/second-order calculus.

Polynomials in n variables carry exact symbolic derivatives, so derivative
tensors of any order are available in closed form.  Manifold descriptors
(Euclidean space, unit sphere, l_p sphere, Stiefel, Grassmann) supply
tangent-space projections; intrinsic gradients are projected Euclidean
gradients.  On the sphere the intrinsic Hessian and iterated spherical
partial derivatives D_{i1..ij} are computed exactly via the 0-homogeneous
extension G(x) = g(x/|x|) of each level function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .tensor import SymTensor

__all__ = [
    "PolyFunction",
    "Euclidean",
    "Sphere",
    "LpSphere",
    "Stiefel",
    "Grassmann",
    "derivative_tensor",
    "tangent_project",
    "intrinsic_gradient",
    "sphere_hessian",
    "spherical_partial",
    "spherical_derivative_tensor",
]

_ONMANIFOLD_TOL = 1e-8


class PolyFunction:
    """Multivariate polynomial in canonical merged-monomial form.

    monomials maps exponent multi-indices (tuples of n nonnegative ints)
    to real coefficients; no two monomials share an index and zero
    coefficients are dropped.
    """

    def __init__(self, nvars, monomials):
        self.nvars = int(nvars)
        merged = {}
        items = monomials.items() if isinstance(monomials, dict) else monomials
        for exps, coef in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError("exponent multi-index length must equal nvars")
            if any(e < 0 for e in exps):
                raise ValueError("exponents must be nonnegative")
            merged[exps] = merged.get(exps, 0.0) + float(coef)
        self.monomials = {e: c for e, c in merged.items() if c != 0.0}

    @property
    def degree(self):
        if not self.monomials:
            return 0
        return max(sum(e) for e in self.monomials)

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        x = np.asarray(x, dtype=float).ravel()
        if x.shape != (self.nvars,):
            raise ValueError("point length must equal nvars")
        total = 0.0
        for exps, coef in self.monomials.items():
            term = coef
            for xi, e in zip(x, exps):
                if e:
                    term *= xi ** e
            total += term
        return float(total)

    def partial(self, i):
        """Exact partial derivative with respect to variable i."""
        out = {}
        for exps, coef in self.monomials.items():
            e = exps[i]
            if e == 0:
                continue
            new = list(exps)
            new[i] = e - 1
            key = tuple(new)
            out[key] = out.get(key, 0.0) + coef * e
        return PolyFunction(self.nvars, out)

    def gradient(self, x):
        return np.array([self.partial(i).eval(x) for i in range(self.nvars)])

    def __add__(self, other):
        items = list(self.monomials.items()) + list(other.monomials.items())
        return PolyFunction(self.nvars, items)

    def scale(self, a):
        return PolyFunction(self.nvars, {e: a * c for e, c in self.monomials.items()})

    def to_json(self):
        return json.dumps(
            {
                "nvars": self.nvars,
                "monomials": [
                    {"exps": list(e), "coef": c} for e, c in sorted(self.monomials.items())
                ],
            }
        )

    @staticmethod
    def from_json(s):
        obj = json.loads(s) if isinstance(s, str) else s
        return PolyFunction(
            obj["nvars"], [(m["exps"], m["coef"]) for m in obj["monomials"]]
        )

    @staticmethod
    def linear(a):
        a = np.asarray(a, dtype=float)
        n = a.size
        mono = {}
        for i in range(n):
            e = [0] * n
            e[i] = 1
            mono[tuple(e)] = a[i]
        return PolyFunction(n, mono)

    @staticmethod
    def quadratic_form(A):
        """x^T A x for a square matrix A."""
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        mono = {}
        for i in range(n):
            for j in range(n):
                if A[i, j] == 0:
                    continue
                e = [0] * n
                e[i] += 1
                e[j] += 1
                key = tuple(e)
                mono[key] = mono.get(key, 0.0) + A[i, j]
        return PolyFunction(n, mono)


def derivative_tensor(f, j, x):
    """Exact j-fold partial-derivative tensor of f at x, as a SymTensor."""
    if j < 1:
        raise ValueError("derivative order must be >= 1")
    x = np.asarray(x, dtype=float).ravel()
    if x.shape != (f.nvars,):
        raise ValueError("point length must equal nvars")
    n = f.nvars
    cache = {(): f}

    def diff(idx):
        if idx in cache:
            return cache[idx]
        g = diff(idx[:-1]).partial(idx[-1])
        cache[idx] = g
        return g

    entries = np.zeros((n,) * j)
    for idx in np.ndindex(*(n,) * j):
        entries[idx] = diff(tuple(sorted(idx))).eval(x)
    return SymTensor(j, n, entries, symmetrize=False)


# ---------------------------------------------------------------------------
# manifold descriptors


@dataclass(frozen=True)
class Euclidean:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def ambient_dim(self):
        return self.n

    def on_manifold(self, x):
        return np.asarray(x).ravel().size == self.n

    def tangent_project(self, point, ambient):
        return np.asarray(ambient, dtype=float)


@dataclass(frozen=True)
class Sphere:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("sphere needs n >= 2")

    @property
    def ambient_dim(self):
        return self.n

    def on_manifold(self, theta):
        theta = np.asarray(theta, dtype=float).ravel()
        return theta.size == self.n and abs(np.linalg.norm(theta) - 1.0) <= _ONMANIFOLD_TOL

    def tangent_project(self, theta, v):
        theta = np.asarray(theta, dtype=float).ravel()
        if not self.on_manifold(theta):
            raise ValueError("point is not on the unit sphere")
        v = np.asarray(v, dtype=float).ravel()
        return v - (v @ theta) * theta


@dataclass(frozen=True)
class LpSphere:
    n: int
    p: float

    def __post_init__(self):
        if self.n < 2 or self.p < 2:
            raise ValueError("l_p sphere needs n >= 2 and p >= 2")

    @property
    def ambient_dim(self):
        return self.n

    def on_manifold(self, theta):
        theta = np.asarray(theta, dtype=float).ravel()
        lp = np.sum(np.abs(theta) ** self.p) ** (1.0 / self.p)
        return theta.size == self.n and abs(lp - 1.0) <= _ONMANIFOLD_TOL

    def tangent_project(self, theta, v):
        theta = np.asarray(theta, dtype=float).ravel()
        if not self.on_manifold(theta):
            raise ValueError("point is not on the l_p sphere")
        v = np.asarray(v, dtype=float).ravel()
        # normal direction is theta^{p-1} entrywise (signed power)
        w = np.sign(theta) * np.abs(theta) ** (self.p - 1.0)
        return v - ((v @ w) / (w @ w)) * w


@dataclass(frozen=True)
class Stiefel:
    n: int
    k: int

    def __post_init__(self):
        if not (1 <= self.k < self.n) or self.n < 3:
            raise ValueError("Stiefel needs 1 <= k < n and n >= 3")

    @property
    def ambient_dim(self):
        return self.n * self.k

    def _mat(self, x):
        return np.asarray(x, dtype=float).reshape(self.n, self.k)

    def on_manifold(self, A):
        A = self._mat(A)
        return np.max(np.abs(A.T @ A - np.eye(self.k))) <= _ONMANIFOLD_TOL

    def tangent_project(self, A, M):
        A = self._mat(A)
        if not self.on_manifold(A):
            raise ValueError("point is not on the Stiefel manifold")
        M = self._mat(M)
        sym = (A.T @ M + M.T @ A) / 2.0
        return M - A @ sym


@dataclass(frozen=True)
class Grassmann:
    n: int
    k: int

    def __post_init__(self):
        if not (1 <= self.k < self.n) or self.n < 3:
            raise ValueError("Grassmann needs 1 <= k < n and n >= 3")

    @property
    def ambient_dim(self):
        return self.n * self.n

    def _mat(self, x):
        return np.asarray(x, dtype=float).reshape(self.n, self.n)

    def on_manifold(self, P):
        P = self._mat(P)
        ok_sym = np.max(np.abs(P - P.T)) <= _ONMANIFOLD_TOL
        ok_idem = np.max(np.abs(P @ P - P)) <= _ONMANIFOLD_TOL
        ok_rank = abs(np.trace(P) - self.k) <= _ONMANIFOLD_TOL
        return ok_sym and ok_idem and ok_rank

    def tangent_project(self, P, M):
        P = self._mat(P)
        if not self.on_manifold(P):
            raise ValueError("point is not on the Grassmann manifold")
        M = self._mat(M)
        M = (M + M.T) / 2.0
        return P @ M + M @ P - 2.0 * P @ M @ P


def tangent_project(m, point, ambient):
    """Project an ambient vector/matrix onto the tangent space at point."""
    return m.tangent_project(point, ambient)


def intrinsic_gradient(m, f, point):
    """Tangent projection of the Euclidean gradient of f at the point."""
    x = np.asarray(point, dtype=float)
    g = f.gradient(x.ravel())
    out = m.tangent_project(point, g.reshape(x.shape) if x.ndim > 1 else g)
    return np.asarray(out)


def sphere_hessian(f, theta):
    """Intrinsic spherical Hessian P_{theta-perp} B P_{theta-perp}.

    B = f''(theta) - <theta, grad f(theta)> I and P_{theta-perp} is the
    orthogonal projection onto the tangent space.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    n = theta.size
    if abs(np.linalg.norm(theta) - 1.0) > _ONMANIFOLD_TOL:
        raise ValueError("point is not on the unit sphere")
    H = derivative_tensor(f, 2, theta).array
    g = f.gradient(theta)
    B = H - (theta @ g) * np.eye(n)
    P = np.eye(n) - np.outer(theta, theta)
    return SymTensor(2, n, P @ B @ P, symmetrize=False)


# ---------------------------------------------------------------------------
# spherical partial derivatives via 0-homogeneous extension
#
# Each level function is a dict {beta: c} denoting sum c x^beta |x|^{-|beta|},
# the 0-homogeneous extension of its sphere restriction.  Differentiating a
# term and re-homogenizing (value-preserving on the sphere) gives the clean
# recursion below, so iterated D operators stay exact rational expressions.


def _homogenized(f):
    return {tuple(e): c for e, c in f.monomials.items()}


def _spherical_diff(terms, k):
    out = {}
    for beta, c in terms.items():
        deg = sum(beta)
        if beta[k] > 0:
            new = list(beta)
            new[k] -= 1
            key = tuple(new)
            out[key] = out.get(key, 0.0) + c * beta[k]
        new = list(beta)
        new[k] += 1
        key = tuple(new)
        out[key] = out.get(key, 0.0) - c * deg
    return {e: c for e, c in out.items() if c != 0.0}


def _eval_terms(terms, theta):
    total = 0.0
    for beta, c in terms.items():
        term = c
        for xi, e in zip(theta, beta):
            if e:
                term *= xi ** e
        total += term
    return total


def spherical_partial(f, indices, theta):
    """Iterated spherical partial derivative D_{i1..ij} f(theta).

    Each level applies the Euclidean derivative of the 0-homogeneous
    extension of the current level function and evaluates on the sphere.
    Note D_{ij} differs from D_{ji} in general.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if abs(np.linalg.norm(theta) - 1.0) > _ONMANIFOLD_TOL:
        raise ValueError("point is not on the unit sphere")
    if len(indices) < 1:
        raise ValueError("need at least one index")
    terms = _homogenized(f)
    for k in indices:
        terms = _spherical_diff(terms, k)
    return float(_eval_terms(terms, theta))


def spherical_derivative_tensor(f, j, theta):
    """All index tuples of D^(j) f(theta), as an unsymmetrized array."""
    theta = np.asarray(theta, dtype=float).ravel()
    n = theta.size
    cache = {(): _homogenized(f)}

    def level(idx):
        if idx in cache:
            return cache[idx]
        t = _spherical_diff(level(idx[:-1]), idx[-1])
        cache[idx] = t
        return t

    out = np.zeros((n,) * j)
    for idx in np.ndindex(*(n,) * j):
        out[idx] = _eval_terms(level(tuple(idx)), theta)
    return out
