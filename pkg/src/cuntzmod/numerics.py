"""Floating-point confirmations of the analytic limits.

Everything here consumes exact rationals (weights, coefficients) and
converts to double precision at the boundary; no exact arithmetic happens
inside summation loops.

* ``dixmier_limit``: (s-1) * sum_{|k|<=K} (1+k^2)^(-s/2), tail-corrected by
  2 int_K^inf (1+x^2)^(-s/2) dx, extrapolated linearly in (s-1) to s=1;
  the limit is 2 (2*tau(f) for a weighted variant).
* ``beta_constant``: C_s = int (1+x^2)^(-s) dx = sqrt(pi) Gamma(s-1/2)/Gamma(s).
* ``sf_integral``: the Laplace-transformed spectral-flow integral reduced
  over the diagonalised perturbation X = sum_j c_j Q_j (orthogonal
  projections over F with weights w_j = tau(Q_j)):

      sf = 1/C_{1/2+r} * int_0^1 sum_j c_j w_j
                          sum_{k in Z} (1+(k+t c_j)^2)^(-1/2-r) dt.

  The reduction holds because D + tX has eigenvalue k + t c_j on the
  (Q_j, degree-k) block with tau_delta-weight tau(Q_j), the complement of
  sum Q_j contributes nothing, and the trace-split lemma evaluates each
  block weight; in the K -> infinity limit the t-integral telescopes to
  sum_j c_j w_j exactly, independently of r > 0.
* ``eta_numeric``: eta_eps(D) vanishes because sum_k k e^(-t k^2) = 0 by
  the k <-> -k symmetry; the truncated sum is evaluated and must stay
  below 1e-14 before 0.0 is returned.

Summation order is fixed (numpy sums over an ascending k grid, fsum for
the eta cancellation), so identical configs reproduce identical doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, UsageError

QUADRATURES = ("midpoint", "adaptive")


@dataclass(frozen=True)
class SummationConfig:
    cutoff: int = 10_000
    tail_correction: bool = True
    quadrature: str = "adaptive"
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.cutoff < 1:
            raise UsageError(f"cutoff must be >= 1, got {self.cutoff}")
        if self.quadrature not in QUADRATURES:
            raise UsageError(f"quadrature must be one of {QUADRATURES}")
        if not self.tolerance > 0:
            raise UsageError("tolerance must be positive")


@dataclass(frozen=True)
class ProjectionPerturbation:
    """Diagonalised perturbation data: X = sum_j c_j Q_j with pairwise
    orthogonal projections Q_j over F, stored as (c_j, tau(Q_j)) pairs."""

    terms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        clean = []
        for c, w in self.terms:
            c = Fraction(c)
            w = Fraction(w)
            if c == 0:
                raise UsageError("perturbation coefficients must be nonzero")
            if not 0 < w <= 1:
                raise UsageError(f"projection weight {w} outside (0, 1]")
            clean.append((c, w))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[Fraction, Fraction]]) -> "ProjectionPerturbation":
        return cls(tuple(pairs))

    def zeroth_moment(self) -> Fraction:
        """sum_j c_j w_j; equals the exact spectral flow for u_{mu,nu} data."""
        return sum((c * w for c, w in self.terms), Fraction(0))


def beta_constant(s: float) -> float:
    """C_s = int_-inf^inf (1+x^2)^(-s) dx via log-gamma."""
    if s <= 0.5:
        raise DomainError(f"C_s diverges for s <= 1/2, got s={s}")
    return math.exp(0.5 * math.log(math.pi) + math.lgamma(s - 0.5) - math.lgamma(s))


def _tail_integral(lower: float, expo: float, panels: int = 256) -> float:
    """int_lower^inf (1+y^2)^(-expo) dy with y = lower/u, evaluated by a
    weighted midpoint rule that integrates the endpoint factor u^(2e-2)
    exactly on each panel (the rest is smooth and nearly constant, so this
    stays accurate down to expo -> 1/2 where generic adaptive quadrature on
    the unbounded interval breaks down)."""
    if expo <= 0.5:
        raise DomainError(f"tail integral diverges for exponent {expo} <= 1/2")
    if lower <= 0.0:
        raise DomainError(f"tail integral needs a positive lower bound, got {lower}")
    p = 2.0 * expo - 1.0
    edges = np.linspace(0.0, 1.0, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    smooth = lower * (mids * mids + lower * lower) ** (-expo)
    weights = (edges[1:] ** p - edges[:-1] ** p) / p
    return float(np.dot(smooth, weights))


def lattice_sum(shift: float, expo: float, cfg: SummationConfig) -> float:
    """sum_{k in Z} (1+(k+shift)^2)^(-expo), truncated at |k| <= cutoff with
    midpoint-consistent integral tails when tail_correction is on."""
    k = np.arange(-cfg.cutoff, cfg.cutoff + 1, dtype=np.float64)
    total = float(np.sum((1.0 + (k + shift) ** 2) ** (-expo)))
    if cfg.tail_correction:
        half = cfg.cutoff + 0.5
        total += _tail_integral(half + shift, expo)
        total += _tail_integral(half - shift, expo)
    return total


def dixmier_limit(n: int, s_schedule: Sequence[float], cfg: SummationConfig, weight=1) -> float:
    """Extrapolate (s-1) tau_delta(pi(f) (1+D^2)^(-s/2)) to s = 1.

    ``weight`` is tau(f); the limit is 2*weight.  A single-element schedule
    returns the un-extrapolated value at that s."""
    if n < 2:
        raise UsageError(f"need n >= 2, got {n}")
    schedule = [float(s) for s in s_schedule]
    if not schedule:
        raise UsageError("empty s schedule")
    for s in schedule:
        if not 1.0 < s <= 2.0:
            raise DomainError(f"dixmier_limit needs s in (1, 2], got {s}")
    if cfg.cutoff < 1000:
        raise DomainError("dixmier_limit needs cutoff >= 1000")
    w = float(weight)
    k = np.arange(-cfg.cutoff, cfg.cutoff + 1, dtype=np.float64)
    base = 1.0 + k * k
    values = []
    for s in schedule:
        total = float(np.sum(base ** (-s / 2.0)))
        if cfg.tail_correction:
            total += 2.0 * _tail_integral(float(cfg.cutoff), s / 2.0)
        values.append((s - 1.0) * total * w)
    if len(values) == 1:
        return values[0]
    x = np.array([s - 1.0 for s in schedule])
    y = np.array(values)
    slope_intercept = np.polyfit(x, y, 1)
    return float(slope_intercept[1])


def sf_integral(x: ProjectionPerturbation, r: float, cfg: SummationConfig) -> float:
    """The reduced spectral-flow integral at exponent 1/2 + r; converges to
    the exact flow as cutoff -> infinity for every fixed r > 0."""
    if not isinstance(x, ProjectionPerturbation):
        x = ProjectionPerturbation.from_pairs(x)
    if not x.terms:
        raise UsageError("empty perturbation")
    if not r > 0:
        raise DomainError(f"sf_integral needs r > 0, got {r}")
    expo = 0.5 + r
    data = [(float(c), float(w)) for c, w in x.terms]
    largest = max(abs(c) for c, _ in data)
    if cfg.tail_correction and cfg.cutoff <= largest:
        raise DomainError(
            f"cutoff {cfg.cutoff} must exceed the largest coefficient {largest} "
            "for the shifted tail corrections to make sense"
        )

    def integrand(t: float) -> float:
        return sum(c * w * lattice_sum(t * c, expo, cfg) for c, w in data)

    if cfg.quadrature == "adaptive":
        value, _err = integrate.quad(integrand, 0.0, 1.0, epsabs=cfg.tolerance, limit=200)
    else:
        value = _midpoint_refine(integrand, cfg.tolerance)
    return value / beta_constant(expo)


def _midpoint_refine(fn, tolerance: float, start_panels: int = 64, max_panels: int = 4096) -> float:
    panels = start_panels
    previous = None
    while True:
        nodes = (np.arange(panels) + 0.5) / panels
        value = float(np.sum([fn(float(t)) for t in nodes])) / panels
        if previous is not None and abs(value - previous) < tolerance:
            return value
        if panels >= max_panels:
            return value
        previous = value
        panels *= 2


def symmetric_heat_sum(t: float, cutoff: int) -> float:
    """sum_{|k|<=K} k e^(-t k^2); identically zero by symmetry.  Summed with
    fsum over exactly paired magnitudes, so the float result is exact."""
    return math.fsum(k * math.exp(-t * k * k) for k in range(-cutoff, cutoff + 1))


def one_sided_heat_sum(t: float, cutoff: int) -> float:
    """sum_{k=1}^K k e^(-t k^2), the nonzero control for the eta check."""
    return math.fsum(k * math.exp(-t * k * k) for k in range(1, cutoff + 1))


def eta_numeric(epsilon: float, cfg: SummationConfig) -> float:
    """eta_epsilon(D) = (1/sqrt pi) int_eps^inf tau_delta(D e^(-t D^2)) t^(-1/2) dt.

    The integrand vanishes identically (symmetric integer spectrum); the
    truncated inner sum is evaluated at a spread of t >= epsilon and must
    stay below 1e-14 before 0.0 is returned."""
    if not epsilon > 0:
        raise DomainError(f"eta_numeric needs epsilon > 0, got {epsilon}")
    probes = sorted({epsilon, 2.0 * epsilon, max(1.0, epsilon), max(10.0, epsilon)})
    for t in probes:
        inner = symmetric_heat_sum(t, cfg.cutoff)
        if abs(inner) >= 1e-14:
            raise ArithmeticError(
                f"heat sum asymmetry {inner} at t={t}; spectral symmetry violated"
            )
    return 0.0
