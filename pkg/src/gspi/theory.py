"""Closed-form predictions for SPI/GSPI feature vectors of random graphs.

Everything here is about a fixed source node ``s``:

* ``spi_expected_bounds`` -- bracket on the expected number of nodes at
  distance ``d`` from ``s`` in G(n, c0/n), from first-order path sums.
* ``one_cluster_d2_prediction`` -- at distance 2 in G(n, p1) the number of
  shortest paths of a node is modelled as Bin(round(n p1), p1).
* ``two_cluster_d2_prediction`` -- in the planted partition model the same
  count is a two-component normal mixture, one component for targets in the
  source's block and one for targets in the other block.
* ``inclusion_exclusion_estimate`` -- ``1 - exp(-sum P[E_i])`` for the union
  of independent events, with a computable error envelope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import NamedTuple, Sequence

import numpy as np

THEOREM1_C0_MIN = 2.0 + math.sqrt(3.0)


# --- SPI expectation ---------------------------------------------------------

@dataclass(frozen=True)
class SpiExpectationBounds:
    d: int
    base: float
    lower: float
    upper: float

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack


def spi_expected_bounds(n: int, c0: float, d: int) -> SpiExpectationBounds:
    """Bounds on E[#nodes at distance d from s] in G(n, c0/n).

    ``base = (n p1)^d - (n p1)^(d-1)``; the band is
    ``base * (1 - 1/(c0-1)^2) .. base * (1 + c0/(c0-1)^2)``.

    Only meaningful for small constant ``d`` with ``c0**d`` well below ``n``:
    the first-order path sum ignores that a node can only be reached once, so
    once ``c0**d`` approaches ``n`` the true mean falls far below ``base``.
    """
    if c0 <= 2:
        raise ValueError("c0 must exceed 2")
    if d < 1:
        raise ValueError("d must be >= 1")
    p1 = c0 / n
    a = (n * p1) ** d
    b = (n * p1) ** (d - 1)
    base = a - b
    return SpiExpectationBounds(d, base, base * (1 - 1 / (c0 - 1) ** 2),
                                base * (1 + c0 / (c0 - 1) ** 2))


def theorem1_factor(c0: float) -> float:
    """Relative half-width ``2/(c0-1)`` within which the expected SPI vectors
    of the one- and two-cluster models agree; valid for c0 >= 2 + sqrt(3)."""
    if c0 < THEOREM1_C0_MIN:
        raise ValueError(f"c0={c0} below the validity threshold 2+sqrt(3)")
    return 2.0 / (c0 - 1.0)


# --- distance-2 path-count distributions ------------------------------------

def _binom_logpmf(x: int, trials: int, p: float) -> float:
    if x < 0 or x > trials:
        return -math.inf
    if p == 0.0:
        return 0.0 if x == 0 else -math.inf
    if p == 1.0:
        return 0.0 if x == trials else -math.inf
    return (math.lgamma(trials + 1) - math.lgamma(x + 1) - math.lgamma(trials - x + 1)
            + x * math.log(p) + (trials - x) * math.log1p(-p))


@dataclass(frozen=True)
class BinomialLaw:
    trials: int
    success: float
    scale: float

    def pmf(self, x: int) -> float:
        return math.exp(_binom_logpmf(x, self.trials, self.success))

    @property
    def mean(self) -> float:
        return self.trials * self.success

    @property
    def mode(self) -> int:
        return int(math.floor((self.trials + 1) * self.success)) if self.success < 1 else self.trials

    def histogram(self, x_max: int | None = None) -> np.ndarray:
        """``scale * pmf(x)`` for x = 0 .. x_max (default: all ``trials``)."""
        top = self.trials if x_max is None else x_max
        return np.array([self.scale * self.pmf(x) for x in range(top + 1)])


def one_cluster_d2_prediction(n: int, p1: float) -> BinomialLaw:
    """Expected number of distance-2 nodes with x shortest paths, up to ``scale``.

    ``trials = round(n p1)`` and ``scale = (n p1)^2 - n p1``.
    """
    if n * p1 < 1:
        raise ValueError("need n * p1 >= 1")
    c = n * p1
    return BinomialLaw(int(round(c)), p1, c * c - c)


def _bucket(dist: NormalDist, x: np.ndarray) -> np.ndarray:
    if dist.stdev == 0:
        return ((x - 0.5 <= dist.mean) & (dist.mean < x + 0.5)).astype(float)
    return np.array([dist.cdf(v + 0.5) - dist.cdf(v - 0.5) for v in x])


@dataclass(frozen=True)
class MixtureModel:
    """Two-component normal mixture for distance-2 path counts.

    The "plus" component covers targets in the source's own block, the
    "minus" component targets in the other block. ``size_plus`` and
    ``size_minus`` are the expected numbers of such targets.
    """

    n: int
    p2: float
    q2: float
    mean_plus: float
    mean_minus: float
    var_plus: float
    var_minus: float
    size_plus: float
    size_minus: float

    @property
    def weight_plus(self) -> float:
        total = self.size_plus + self.size_minus
        return self.size_plus / total if total > 0 else 0.5

    @property
    def weight_minus(self) -> float:
        return 1.0 - self.weight_plus

    @property
    def peak_gap(self) -> float:
        return self.mean_plus - self.mean_minus

    def component(self, which: str) -> NormalDist:
        if which == "plus":
            return NormalDist(self.mean_plus, math.sqrt(self.var_plus))
        return NormalDist(self.mean_minus, math.sqrt(self.var_minus))

    def density(self, x) -> np.ndarray:
        """Normalized mixture mass of the unit bucket around each integer x."""
        x = np.asarray(x, dtype=float)
        return (self.weight_plus * _bucket(self.component("plus"), x)
                + self.weight_minus * _bucket(self.component("minus"), x))

    def histogram(self, x_max: int = 20) -> np.ndarray:
        """Predicted number of distance-2 nodes with x shortest paths, x = 0 .. x_max."""
        x = np.arange(x_max + 1)
        return (self.size_plus + self.size_minus) * self.density(x)


def two_cluster_d2_prediction(n: int, p2: float, q2: float) -> MixtureModel:
    """Mixture prediction for a source in a planted partition graph.

    A target in the source's block has Bin(n p2/2, p2) + Bin(n q2/2, q2)
    shortest paths of length 2, a target in the other block
    Bin(n p2/2, q2) + Bin(n q2/2, p2); each sum is replaced by a normal with
    the summed binomial mean and variance. Expected block sizes at distance 2
    use the exponential union estimate ``1 - exp(-S)`` of the chance that at
    least one length-2 path exists, minus the chance of a direct edge.
    """
    if not 0.0 < q2 <= p2 < 1.0:
        raise ValueError("need 0 < q2 <= p2 < 1")
    h = n / 2.0
    mean_plus = h * p2 * p2 + h * q2 * q2
    mean_minus = n * p2 * q2
    var_plus = h * p2 * p2 * (1 - p2) + h * q2 * q2 * (1 - q2)
    var_minus = h * p2 * q2 * (1 - q2) + h * q2 * p2 * (1 - p2)
    reach_plus = -math.expm1(-mean_plus)
    reach_minus = -math.expm1(-mean_minus)
    size_plus = max(0.0, h * (reach_plus - p2))
    size_minus = max(0.0, h * (reach_minus - q2))
    return MixtureModel(n, p2, q2, mean_plus, mean_minus, var_plus, var_minus, size_plus, size_minus)


class PeakSeparation(NamedTuple):
    gap: float
    relative: float


def peak_separation(n: int, p1: float, alpha0: float) -> PeakSeparation:
    """Asymptotic gap ``2 n alpha0^2 p1^2`` between the two mixture peaks and
    the lower bound ``2 alpha0^2`` on the gap relative to the lower peak."""
    if not 0.0 <= alpha0 < 1.0:
        raise ValueError("alpha0 must lie in [0, 1)")
    return PeakSeparation(2.0 * n * alpha0 ** 2 * p1 ** 2, 2.0 * alpha0 ** 2)


# --- shape helpers -----------------------------------------------------------

def smooth(values: Sequence[float], radius: int = 1) -> np.ndarray:
    """Moving average over ``x - radius .. x + radius``, truncated at the ends."""
    v = np.asarray(values, dtype=float)
    out = np.empty_like(v)
    for i in range(len(v)):
        lo, hi = max(0, i - radius), min(len(v), i + radius + 1)
        out[i] = v[lo:hi].mean()
    return out


def local_maxima(values: Sequence[float]) -> list[int]:
    """Indices of local maxima; a plateau counts once (at its left end).

    Points beyond either end count as -inf, so a decreasing start is a maximum.
    """
    v = list(values)
    peaks = []
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and v[j + 1] == v[i]:
            j += 1
        left = v[i - 1] if i > 0 else -math.inf
        right = v[j + 1] if j + 1 < len(v) else -math.inf
        if v[i] > left and v[i] > right:
            peaks.append(i)
        i = j + 1
    return peaks


# --- inclusion-exclusion -----------------------------------------------------

@dataclass(frozen=True)
class InclusionExclusionEstimate:
    approx: float
    q_bound: float
    epsilon: float
    count: int

    def contains(self, value: float) -> bool:
        return self.approx - self.q_bound <= value <= self.approx + self.q_bound


def _q_bound(l: int, eps: float) -> float:
    # sum_{k<=l+1} (l eps)^k / k! - (1 + eps)^l, expanded term by term so that
    # the k = 0, 1 terms cancel exactly and every remaining term is >= 0
    total = 0.0
    for k in range(2, l + 1):
        coef = Fraction(l ** k, math.factorial(k)) - math.comb(l, k)
        total += float(coef) * eps ** k
    total += (l * eps) ** (l + 1) / math.factorial(l + 1)
    return total


def inclusion_exclusion_estimate(probs: Sequence[float]) -> InclusionExclusionEstimate:
    """Exponential estimate of P[E_1 or ... or E_l] for independent events.

    The exact union probability lies within ``approx +- q_bound`` where
    ``q_bound = sum_{k=0}^{l+1} (l eps)^k / k! - (1 + eps)^l`` and
    ``eps = max P[E_i]``.
    """
    p = [float(x) for x in probs]
    if any(not 0.0 <= x <= 1.0 for x in p):
        raise ValueError("probabilities must lie in [0, 1]")
    if not p:
        return InclusionExclusionEstimate(0.0, 0.0, 0.0, 0)
    eps = max(p)
    approx = -math.expm1(-math.fsum(p))
    return InclusionExclusionEstimate(approx, _q_bound(len(p), eps), eps, len(p))


def exact_union_independent(probs: Sequence[float]) -> float:
    """1 - prod(1 - p_i), computed in log space."""
    if any(x >= 1.0 for x in probs):
        return 1.0
    return -math.expm1(math.fsum(math.log1p(-x) for x in probs))


def lemma1_fuzz(cases: int, seed=0, max_events: int = 20, max_eps: float = 0.3) -> dict:
    """Check the envelope on random independent-event lists; returns counts."""
    from .graph import make_rng
    rng = make_rng(seed)
    violations = 0
    worst = 0.0
    for i in range(cases):
        l = int(rng.integers(1, max_events + 1))
        eps = float(rng.uniform(0.0, max_eps))
        # every fourth case puts all events at eps, where the envelope is tightest
        probs = [eps] * l if i % 4 == 3 else rng.uniform(0.0, eps, size=l).tolist()
        est = inclusion_exclusion_estimate(probs)
        exact = exact_union_independent(probs)
        if not est.contains(exact):
            violations += 1
        if est.q_bound > 0:
            worst = max(worst, abs(exact - est.approx) / est.q_bound)
    return {"cases": cases, "violations": violations, "max_error_over_bound": worst}
