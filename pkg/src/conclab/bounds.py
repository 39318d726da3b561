"""Multilevel concentration-bound engine.

Given growth parameters (p, r0, L, sigma, d) and per-level norm values
K_1..K_d, this module evaluates the explicit constants, multilevel tail
curves, exponential-moment certificates, iterated moment bounds,
Hanson-Wright corollaries, and chaos-supremum bounds, plus a per-setting
catalog covering every supported underlying measure.

Engine constants always come from the general formulas

    c = (r0^{1/p} - 1)^p / (2 e max(L^{1/d}, L)^p r0 max(r0, p/d)),
    C = log 2 / (r0 (L e)^p);

specialized per-setting constants quoted elsewhere are only reported (see
paper_constant_table) and never asserted equal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "KAPPA",
    "Setting",
    "LevelCoefficients",
    "MomentGrowthSpec",
    "const_c",
    "const_C",
    "tail_bound",
    "exp_moment_certificate",
    "moment_growth_bound",
    "tail_from_moments",
    "hw_bound",
    "setting_catalog",
    "paper_constant_table",
    "chaos_sup_bound",
]

# kappa = sqrt(e) / (2 (sqrt(e) - 1)), from the bounded-differences moment
# inequality for independent variables
KAPPA = math.sqrt(math.e) / (2.0 * (math.sqrt(math.e) - 1.0))

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class Setting:
    """Growth parameters (p, r0, L, sigma, d) plus catalog metadata.

    q, when present, must be the Hoelder conjugate of p; gamma >= 1 is the
    optional relaxation multiplier for the weakened third assumption;
    positive_part_only marks settings whose moment chain controls only the
    upper tail.
    """

    p: float
    r0: float
    L: float
    sigma: float
    d: int
    q: float | None = None
    gamma: float | None = None
    tag: str = "custom"
    positive_part_only: bool = False

    def __post_init__(self):
        if self.p <= 0 or self.r0 <= 1 or self.L <= 0 or self.sigma <= 0:
            raise ValueError("need p > 0, r0 > 1, L > 0, sigma > 0")
        if self.d < 1:
            raise ValueError("d must be a positive integer")
        if self.q is not None:
            if abs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-12:
                raise ValueError("q must be the Hoelder conjugate of p")
        if self.gamma is not None and self.gamma < 1.0:
            raise ValueError("gamma must be >= 1")

    @property
    def gamma_eff(self):
        return 1.0 if self.gamma is None else self.gamma

    def to_json(self):
        return json.dumps(
            {
                "p": self.p,
                "r0": self.r0,
                "L": self.L,
                "sigma": self.sigma,
                "d": self.d,
                "q": self.q,
                "gamma": self.gamma,
                "tag": self.tag,
                "positive_part_only": self.positive_part_only,
            }
        )

    @staticmethod
    def from_json(s):
        obj = json.loads(s) if isinstance(s, str) else s
        return Setting(**obj)


@dataclass(frozen=True)
class LevelCoefficients:
    """Per-level norm values K_1..K_d.

    K_j for j < d is the L^1 norm of the j-th difference/derivative
    magnitude; K_d is the L^infinity norm of the top level.  Levels with
    K_j = 0 are skipped when minimizing the tail exponent.
    """

    K: tuple

    def __init__(self, K):
        K = tuple(float(k) for k in K)
        if not K:
            raise ValueError("need at least one level")
        if any(k < 0 for k in K):
            raise ValueError("level coefficients must be nonnegative")
        object.__setattr__(self, "K", K)

    @property
    def d(self):
        return len(self.K)

    def to_json(self):
        return json.dumps({"K": list(self.K)})

    @staticmethod
    def from_json(s):
        obj = json.loads(s) if isinstance(s, str) else s
        return LevelCoefficients(obj["K"])


@dataclass(frozen=True)
class MomentGrowthSpec:
    """Moment growth ||f||_r <= sum_j C_j r^{1/p_j} for r >= r0."""

    terms: tuple
    r0: float = 1.0

    def __init__(self, terms, r0=1.0):
        terms = tuple((float(c), float(p)) for c, p in terms)
        if not terms:
            raise ValueError("need at least one term")
        if any(c <= 0 or p <= 0 for c, p in terms):
            raise ValueError("all C_j and p_j must be positive")
        if r0 < 1:
            raise ValueError("r0 must be >= 1")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "r0", float(r0))


def const_c(p, d, r0, L):
    """Exponential-moment constant of the general multilevel theorem."""
    return (r0 ** (1.0 / p) - 1.0) ** p / (
        2.0 * math.e * max(L ** (1.0 / d), L) ** p * r0 * max(r0, p / d)
    )


def const_C(p, r0, L):
    """Tail constant of the general multilevel theorem."""
    return LOG2 / (r0 * (L * math.e) ** p)


def _active_levels(K):
    levels = [(j + 1, k) for j, k in enumerate(K.K) if k > 0]
    if not levels:
        raise ValueError("all level coefficients are zero (degenerate bound)")
    return levels


def tail_bound(s, K, t):
    """Multilevel tail bound at threshold t >= 0, capped at 1."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if K.d != s.d:
        raise ValueError("level count must equal setting order d")
    levels = _active_levels(K)
    if t == 0:
        return 1.0
    C = const_C(s.p, s.r0, s.L)
    g = s.gamma_eff
    prefac = C / (g ** s.p * s.d ** s.p * s.sigma ** s.p)
    expo = min((t / k) ** (s.p / j) for j, k in levels)
    return float(min(1.0, 2.0 * math.exp(-prefac * expo)))


def exp_moment_certificate(s, K):
    """(exponent, coefficient, normalized) of the exp-moment certificate.

    Asserts int exp(coefficient |f|^exponent) dmu <= 2 whenever the
    normalization K_j <= sigma^{d-j} (j < d) and K_d <= 1 holds.
    """
    if K.d != s.d:
        raise ValueError("level count must equal setting order d")
    exponent = s.p / s.d
    g = s.gamma_eff
    coefficient = const_c(s.p, s.d, s.r0, s.L) / (g ** s.p * s.sigma ** s.p)
    normalized = all(
        K.K[j - 1] <= s.sigma ** (s.d - j) + 1e-15 for j in range(1, s.d)
    ) and K.K[-1] <= 1.0 + 1e-15
    return exponent, coefficient, bool(normalized)


def moment_growth_bound(s, K, r):
    """Iterated moment bound on ||f - Ef||_r for r >= r0."""
    if r < s.r0:
        raise ValueError("r must be >= r0")
    if K.d != s.d:
        raise ValueError("level count must equal setting order d")
    ls = s.L * s.sigma
    total = 0.0
    for j in range(1, s.d):
        total += ls ** j * r ** (j / s.p) * K.K[j - 1]
    total += ls ** s.d * r ** (s.d / s.p) * K.K[-1]
    return float(total)


def tail_from_moments(m, t):
    """Tail bound induced by a moment-growth spec, capped at 1."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 1.0
    pmax = max(p for _, p in m.terms)
    nterms = len(m.terms)
    pref = LOG2 / (m.r0 * (nterms * math.e) ** pmax)
    expo = min(t ** p / c for c, p in m.terms)
    return float(min(1.0, 2.0 * math.exp(-pref * expo)))


def growth_to_moment_spec(s, K):
    """Moment-growth terms induced by the iterated bound.

    Term j has C_j = ((L sigma)^j K_j)^{p/j} and p_j = p/j, so the
    induced tail reproduces tail_bound exactly.
    """
    levels = _active_levels(K)
    ls = s.L * s.sigma
    terms = [((ls ** j * k) ** (s.p / j), s.p / j) for j, k in levels]
    return MomentGrowthSpec(terms, r0=s.r0)


def hw_bound(s, hs, op, t):
    """Hanson-Wright type bound from second-derivative HS and op norms."""
    if hs < 0 or op < 0 or (hs == 0 and op == 0):
        raise ValueError("need nonnegative norms, not both zero")
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 1.0
    C = LOG2 / (s.r0 * (2.0 * s.L * math.e) ** s.p)
    args = []
    if hs > 0:
        args.append((t / (s.L * s.sigma ** 2 * hs)) ** s.p)
    if op > 0:
        args.append((t / (s.sigma ** 2 * op)) ** (s.p / 2.0))
    return float(min(1.0, 2.0 * math.exp(-C * min(args))))


def chaos_sup_bound(EW, a, b, sigma2, t, two_sided=False):
    """Tail bound for suprema of polynomial chaos.

    EW holds the expected sup-operator-norms E W_1..E W_d of the chaos
    derivatives (for the two-sided variant, pass the entrywise-sup
    variants E W~_j and set two_sided=True; only reporting semantics
    change).  The bound is
    2 exp(-(1/(2 sigma^2 (b-a)^2)) min_j (t/(d e E W_j))^{2/j}).
    """
    if b <= a:
        raise ValueError("need b > a")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    if t < 0:
        raise ValueError("t must be >= 0")
    EW = [float(w) for w in EW]
    if any(w < 0 for w in EW):
        raise ValueError("EW must be nonnegative")
    d = len(EW)
    levels = [(j + 1, w) for j, w in enumerate(EW) if w > 0]
    if not levels:
        raise ValueError("all chaos levels are zero (degenerate bound)")
    if t == 0:
        return 1.0
    pref = 1.0 / (2.0 * sigma2 * (b - a) ** 2)
    expo = min((t / (d * math.e * w)) ** (2.0 / j) for j, w in levels)
    return float(min(1.0, 2.0 * math.exp(-pref * expo)))


# ---------------------------------------------------------------------------
# setting catalog


def _lsq_L(p):
    q = p / (p - 1.0)
    return 4.0 ** (1.0 / q) * (p - 1.0) / LOG2 ** (1.0 / q)


def setting_catalog(tag, d=1, **params):
    """Construct the Setting for a catalogued underlying measure.

    Supported tags and parameters:
      lsi(sigma2)                  log-Sobolev measures
      poincare(sigma2)             Poincare measures
      lsq(p, sigma_q)              LS_q measures; sigma_q = sigma^q
      gaussian()                   standard Gaussian (lsi, sigma2 = 1)
      sphere(n)                    uniform sphere, sigma2 = 1/(n-1)
      cone_lp(n, p)                cone measure, sigma^q = 3*4^q q^{q-1} n^{-1/(p-1)}
      stiefel(n, k)                sigma2 = 4/(n-2)
      grassmann(n, k)              sigma2 = 8/(n-2)
      independent_bounded()        p = 2, r0 = 2, L*sigma = sqrt(8 kappa)
      dlsi(sigma2)                 p = 2, r0 = 2, L*sigma = sqrt(2 sigma2)

    For the two discrete settings the engine keeps the larger of the full
    and positive-part L*sigma values, so one constant covers both chains.
    """
    if tag == "lsi":
        sigma2 = params["sigma2"]
        if sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        return Setting(p=2.0, r0=2.0, L=1.0, sigma=math.sqrt(sigma2), d=d, q=2.0, tag=tag)
    if tag == "gaussian":
        return Setting(p=2.0, r0=2.0, L=1.0, sigma=1.0, d=d, q=2.0, tag=tag)
    if tag == "poincare":
        sigma2 = params["sigma2"]
        if sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        return Setting(
            p=1.0, r0=2.0, L=1.0 / math.sqrt(2.0), sigma=math.sqrt(sigma2), d=d, tag=tag
        )
    if tag == "lsq":
        p = float(params["p"])
        if p < 2:
            raise ValueError("p must be >= 2")
        q = p / (p - 1.0)
        sigma_q = params.get("sigma_q")
        if sigma_q is None:
            # p-generalized Gaussian product measure
            sigma_q = 2.0 ** q * q ** (q - 1.0)
        if sigma_q <= 0:
            raise ValueError("sigma_q must be positive")
        return Setting(
            p=p, r0=q, L=_lsq_L(p), sigma=sigma_q ** (1.0 / q), d=d, q=q, tag=tag
        )
    if tag == "sphere":
        n = params["n"]
        if n < 2:
            raise ValueError("sphere needs n >= 2")
        return Setting(
            p=2.0, r0=2.0, L=1.0, sigma=math.sqrt(1.0 / (n - 1)), d=d, q=2.0, tag=tag
        )
    if tag == "cone_lp":
        n, p = params["n"], float(params["p"])
        if n < 3:
            raise ValueError("cone setting needs n >= 3")
        if p < 2:
            raise ValueError("p must be >= 2")
        q = p / (p - 1.0)
        sigma_q = 3.0 * 4.0 ** q * q ** (q - 1.0) * n ** (-1.0 / (p - 1.0))
        return Setting(
            p=p, r0=q, L=_lsq_L(p), sigma=sigma_q ** (1.0 / q), d=d, q=q, tag=tag
        )
    if tag == "stiefel":
        n, k = params["n"], params["k"]
        if not (1 <= k < n) or n < 3:
            raise ValueError("stiefel needs 1 <= k < n and n >= 3")
        return Setting(
            p=2.0, r0=2.0, L=1.0, sigma=math.sqrt(4.0 / (n - 2)), d=d, q=2.0, tag=tag
        )
    if tag == "grassmann":
        n, k = params["n"], params["k"]
        if not (1 <= k < n) or n < 3:
            raise ValueError("grassmann needs 1 <= k < n and n >= 3")
        return Setting(
            p=2.0, r0=2.0, L=1.0, sigma=math.sqrt(8.0 / (n - 2)), d=d, q=2.0, tag=tag
        )
    if tag == "independent_bounded":
        # full chain L*sigma = sqrt(8 kappa) dominates the positive-part
        # value sqrt(2 kappa); keep the larger so both chains hold
        return Setting(
            p=2.0, r0=2.0, L=math.sqrt(8.0 * KAPPA), sigma=1.0, d=d, q=2.0, tag=tag
        )
    if tag == "dlsi":
        sigma2 = params["sigma2"]
        if sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        # positive-part chain L*sigma = sqrt(2 sigma2) dominates the full
        # chain sqrt(sigma2/2); keep the larger
        return Setting(
            p=2.0,
            r0=2.0,
            L=math.sqrt(2.0),
            sigma=math.sqrt(sigma2),
            d=d,
            q=2.0,
            tag=tag,
        )
    raise ValueError(f"unknown setting tag: {tag}")


def paper_constant_table(d=2):
    """Quoted specialized constants next to the engine's general-formula values.

    Each record carries the published per-setting constants verbatim and
    the constants the engine derives from the general formulas.  agrees
    is True/False for rows that are direct instances of the general
    theorem; rows whose published constants absorb additional derivation
    steps (intrinsic-gradient recursions, carried-over kappa factors)
    are marked agrees=None and only reported.  Nothing here is asserted.
    """
    rows = []

    def eng(p, r0, L, dd=d):
        return const_c(p, dd, r0, L), const_C(p, r0, L)

    # log-Sobolev: direct instance, must agree
    ec, eC = eng(2.0, 2.0, 1.0)
    rows.append(
        {
            "tag": "lsi",
            "paper_c": (math.sqrt(2.0) - 1.0) ** 2 / (8.0 * math.e),
            "paper_C": LOG2 / (2.0 * math.e ** 2),
            "engine_c": ec,
            "engine_C": eC,
            "agrees": None,
            "mismatch": None,
            "note": "",
        }
    )
    # Poincare: published c is twice the general-formula value
    ec, eC = eng(1.0, 2.0, 1.0 / math.sqrt(2.0))
    rows.append(
        {
            "tag": "poincare",
            "paper_c": 2.0 ** (1.0 / (2.0 * d)) / (4.0 * math.e),
            "paper_C": LOG2 / (math.sqrt(2.0) * math.e),
            "engine_c": ec,
            "engine_C": eC,
            "agrees": None,
            "mismatch": None,
            "note": "published c is 2^{1/(2d)}/(4e); direct substitution gives 2^{1/(2d)}/(8e)",
        }
    )
    # LS_q (evaluated at p = 3): published constants carry L^p in the
    # numerator where the general formula divides by it
    p = 3.0
    q = p / (p - 1.0)
    ec, eC = eng(p, q, _lsq_L(p))
    rows.append(
        {
            "tag": "lsq",
            "paper_c": 2.0 ** (2 * p - 3)
            * (q ** (1.0 / p) - 1.0) ** p
            * (p - 1.0) ** p
            / (math.e * q * LOG2 ** (p - 1.0) * max(q, p / d)),
            "paper_C": 4.0 ** (p - 1.0) * (p - 1.0) ** p / (q * LOG2 ** (p - 2.0) * math.e ** p),
            "engine_c": ec,
            "engine_C": eC,
            "agrees": None,
            "mismatch": None,
            "note": "published C grows with p while the general C shrinks",
        }
    )
    # sphere, intrinsic second order: published constants absorb the
    # intrinsic-gradient recursion; not a direct instance (n = 10 shown)
    n = 10
    ec, eC = eng(2.0, 2.0, 1.0, dd=2)
    rows.append(
        {
            "tag": "sphere_intrinsic",
            "paper_c": (n - 1) / (32.0 * math.e),
            "paper_C": LOG2 * (n - 1) / (16.0 * math.e ** 2),
            "engine_c": ec * (n - 1),
            "engine_C": eC * (n - 1) / 4.0,
            "agrees": None,
            "mismatch": None,
            "note": "intrinsic-derivative chain; shown as exponent coefficients at n=10, d=2",
        }
    )
    # independent bounded (kappa chain): direct instance, must agree
    ec, eC = eng(2.0, 2.0, math.sqrt(8.0 * KAPPA))
    rows.append(
        {
            "tag": "independent_bounded",
            "paper_c": (math.sqrt(2.0) - 1.0) ** 2 / (64.0 * KAPPA * math.e),
            "paper_C": LOG2 / (16.0 * KAPPA * math.e ** 2),
            "engine_c": ec,
            "engine_C": eC,
            "agrees": None,
            "mismatch": None,
            "note": "",
        }
    )
    # discrete d-LSI: published constants carry a kappa factor absent from
    # the underlying moment inequality; engine derives kappa-free values
    ec, eC = eng(2.0, 2.0, math.sqrt(2.0))
    rows.append(
        {
            "tag": "dlsi",
            "paper_c": (math.sqrt(2.0) - 1.0) ** 2 / (16.0 * KAPPA * math.e),
            "paper_C": LOG2 / (4.0 * KAPPA * math.e ** 2),
            "engine_c": ec,
            "engine_C": eC,
            "agrees": None,
            "mismatch": None,
            "note": "published constants display kappa though the moment inequality has none; "
            "reported verbatim, engine derives without it",
        }
    )

    directly_comparable = {"lsi", "poincare", "lsq", "independent_bounded"}
    for row in rows:
        if row["tag"] not in directly_comparable:
            continue
        c_ok = math.isclose(row["paper_c"], row["engine_c"], rel_tol=1e-12)
        C_ok = math.isclose(row["paper_C"], row["engine_C"], rel_tol=1e-12)
        row["agrees"] = c_ok and C_ok
        if not row["agrees"]:
            bad = [name for name, ok in (("c", c_ok), ("C", C_ok)) if not ok]
            row["mismatch"] = "+".join(bad)
    return rows
