"""Closed-form and quadrature evaluation of the deterministic limit quantities.

Three ingredients are needed by the simulation diagnostics:

* ``mp_closed_form(p)`` -- the p-th absolute moment of the standard normal,
  ``2^{p/2} Gamma((p+1)/2) / sqrt(pi)``, evaluated in log space so it stays
  accurate up to p = 50.

* ``LimitSpace`` -- the deterministic limit of the rescaled walk paths: the
  unit interval carrying the metric ``sigma * M_p^{1/p} * sqrt(|t - s|)``.

* ``bivariate_gaussian_abs_moment(p, cov)`` -- ``E|eta1 * eta2|^p`` for a
  centered bivariate Gaussian, the limit of coordinate-pair moments.  The
  2-D integral is collapsed, after a Cholesky-type factorization
  ``eta1 = a z1``, ``eta2 = b z1 + c z2``, to a single half-line integral

      E = a^p c^p (2^p / pi) Gamma((p+1)/2) *
          integral_0^inf u^{(p-1)/2} e^{-u} 1F1(-p/2; 1/2; -kappa u) du,

  with ``kappa = b^2/c^2``, because the inner Gaussian absolute moment of
  ``N(mu, c^2)`` is a confluent hypergeometric function of ``mu^2`` and the
  substitution ``z1 = sqrt(2u)`` turns the outer integrand into an entire
  function of u times the exact weight ``u^{(p-1)/2} e^{-u}``.  Generalized
  Gauss-Laguerre quadrature on that weight converges spectrally, which a
  plain tensorized Gauss-Hermite rule does not (the kink of ``|.|^p`` at 0
  caps it near 1e-3 absolute error for p = 1 regardless of order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, hyp1f1, hyp2f1, roots_genlaguerre

from .errors import ConfigurationError

__all__ = [
    "CovarianceMatrix2",
    "LimitSpace",
    "bivariate_gaussian_abs_moment",
    "bivariate_moment_mc_oracle",
    "limit_distance",
    "mp_closed_form",
]

_LOG_2 = math.log(2.0)
_LOG_SQRT_PI = 0.5 * math.log(math.pi)

# Quadrature order is generous: the integrand is entire, so 200 nodes give
# machine precision; the cost is one cached root computation per p.
_QUAD_ORDER = 200

# Beyond this ratio kappa = s12^2/det the hypergeometric factor develops a
# boundary layer of width 1/kappa near u = 0 that the Laguerre nodes miss;
# switch to the exact 2F1 form of the same integral there.
_KAPPA_SWITCH = 40.0

# Rank deficiency threshold: det < 1e-12 * s11 * s22 routes to the 1-D
# reduction eta2 = (s12/s11) eta1.
_RANK1_TOL = 1e-12


def mp_closed_form(p: float) -> float:
    """p-th absolute moment of the standard normal distribution.

    Computed as ``exp(p/2 log 2 + lgamma((p+1)/2) - log sqrt(pi))`` so that
    no intermediate Gamma value overflows for p up to 50 and beyond.
    """
    p = float(p)
    if not math.isfinite(p) or p < 0.0:
        raise ConfigurationError(f"moment order must be finite and >= 0, got {p}")
    return math.exp(0.5 * p * _LOG_2 + gammaln(0.5 * (p + 1.0)) - _LOG_SQRT_PI)


@dataclass(frozen=True)
class LimitSpace:
    """The deterministic limit space: [0, 1] with sigma * M_p^{1/p} * sqrt|t-s|.

    ``m_p`` is cached at construction; ``modulus`` is the metric scale factor
    sigma * m_p^{1/p}.
    """

    sigma: float
    p: float
    m_p: float = field(default=float("nan"))

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ConfigurationError(f"sigma must be positive, got {self.sigma}")
        if not (math.isfinite(self.p) and self.p >= 1.0):
            raise ConfigurationError(f"p must be >= 1, got {self.p}")
        if math.isnan(self.m_p):
            object.__setattr__(self, "m_p", mp_closed_form(self.p))

    @property
    def modulus(self) -> float:
        """Scale factor of the limit metric: sigma * m_p^{1/p}."""
        return self.sigma * self.m_p ** (1.0 / self.p)

    def distance(self, t: float, s: float) -> float:
        return limit_distance(t, s, self)


def limit_distance(t: float, s: float, space: LimitSpace) -> float:
    """Limit metric sigma * M_p^{1/p} * sqrt(|t - s|) on the unit interval."""
    t = float(t)
    s = float(s)
    if not (0.0 <= t <= 1.0 and 0.0 <= s <= 1.0):
        raise ConfigurationError(f"times must lie in [0, 1], got t={t}, s={s}")
    return space.modulus * math.sqrt(abs(t - s))


@dataclass(frozen=True)
class CovarianceMatrix2:
    """Symmetric 2x2 covariance matrix given by its three free entries."""

    s11: float
    s12: float
    s22: float

    def __post_init__(self) -> None:
        for name in ("s11", "s12", "s22"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"covariance entry {name} must be finite")
        if self.s11 < 0.0 or self.s22 < 0.0 or self.det < -1e-12:
            raise ConfigurationError(
                f"covariance matrix [[{self.s11}, {self.s12}], [{self.s12}, {self.s22}]] "
                "is not positive semidefinite"
            )

    @property
    def det(self) -> float:
        return self.s11 * self.s22 - self.s12 * self.s12

    @classmethod
    def from_correlation(cls, rho: float, variance: float = 1.0) -> "CovarianceMatrix2":
        """Equal-variance matrix variance * [[1, rho], [rho, 1]]."""
        if abs(rho) > 1.0:
            raise ConfigurationError(f"correlation must lie in [-1, 1], got {rho}")
        return cls(variance, rho * variance, variance)

    def as_array(self) -> np.ndarray:
        return np.array([[self.s11, self.s12], [self.s12, self.s22]])


@lru_cache(maxsize=64)
def _genlaguerre_rule(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    return roots_genlaguerre(_QUAD_ORDER, alpha)


def _factorize(cov: CovarianceMatrix2) -> tuple[float, float, float]:
    """Cholesky-type factorization: eta1 = a z1, eta2 = b z1 + c z2."""
    a = math.sqrt(cov.s11)
    b = cov.s12 / a
    c = math.sqrt(max(cov.det, 0.0) / cov.s11)
    return a, b, c


def bivariate_gaussian_abs_moment(p: float, cov: CovarianceMatrix2) -> float:
    """E|eta1 * eta2|^p for (eta1, eta2) ~ N(0, cov).

    Generalized Gauss-Laguerre quadrature on the half-line form described in
    the module docstring; rank-one matrices reduce to a 1-D rule, and the
    near-degenerate boundary layer (kappa > 40) uses the exact Gauss
    hypergeometric evaluation of the same integral.
    """
    p = float(p)
    if not math.isfinite(p) or p < 1.0:
        raise ConfigurationError(f"p must be >= 1, got {p}")
    if cov.s11 <= 0.0 or cov.s22 <= 0.0:
        # PSD forces s12 = 0, so one factor is almost surely zero.
        return 0.0
    if cov.det < _RANK1_TOL * cov.s11 * cov.s22:
        # eta2 = (s12/s11) eta1, so E|eta1 eta2|^p = |s12|^p E|Z|^{2p}; the
        # remaining 1-D integral is evaluated by the same Laguerre rule.
        alpha = (2.0 * p - 1.0) / 2.0
        _, w = _genlaguerre_rule(alpha)
        gauss_2p = (2.0**p / math.sqrt(math.pi)) * float(np.sum(w))
        return abs(cov.s12) ** p * gauss_2p

    a, b, c = _factorize(cov)
    kappa = (b * b) / (c * c)
    log_pref = p * (math.log(a) + math.log(c)) + p * _LOG_2 - math.log(math.pi)
    if kappa <= _KAPPA_SWITCH:
        u, w = _genlaguerre_rule((p - 1.0) / 2.0)
        series = float(np.sum(w * hyp1f1(-0.5 * p, 0.5, -kappa * u)))
        return math.exp(log_pref + gammaln(0.5 * (p + 1.0))) * series
    hyp = float(hyp2f1(-0.5 * p, 0.5 * (p + 1.0), 0.5, -kappa))
    return math.exp(log_pref + 2.0 * gammaln(0.5 * (p + 1.0))) * hyp


def bivariate_moment_mc_oracle(
    p: float,
    cov: CovarianceMatrix2,
    reps: int,
    seed: int,
    chunk: int = 1_000_000,
) -> tuple[float, float]:
    """Monte Carlo estimate of E|eta1 * eta2|^p with its standard error.

    Independent of the quadrature path: samples (eta1, eta2) through the
    factorized representation and averages |eta1 * eta2|^p directly.
    Deterministic for a fixed seed (fixed chunking, Philox stream).
    """
    p = float(p)
    if not math.isfinite(p) or p < 0.0:
        raise ConfigurationError(f"p must be >= 0, got {p}")
    if reps < 10_000:
        raise ConfigurationError(f"reps must be >= 10000, got {reps}")
    if cov.s11 <= 0.0 or cov.s22 <= 0.0:
        return 0.0, 0.0
    a, b, c = _factorize(cov)

    rng = np.random.Generator(np.random.Philox(key=seed & 0xFFFFFFFFFFFFFFFF))
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < reps:
        size = min(chunk, reps - done)
        z1 = rng.standard_normal(size)
        z2 = rng.standard_normal(size)
        vals = np.abs((a * z1) * (b * z1 + c * z2)) ** p
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        done += size
    mean = total / reps
    var = max(total_sq / reps - mean * mean, 0.0) * reps / (reps - 1)
    return mean, math.sqrt(var / reps)
