"""Occupancy probabilities and the many-balls limit.

P_c, the stationary probability of finding exactly c balls in the first h
slots, has an exact product form; its consecutive ratio locates the most
likely c.  Scaling c = lambda*b, h = mu*b and fixing E = q^-b (the
probability of an all-heads step) gives closed forms for mu(lambda), its
inverse lambda(mu), and the limiting ball density d lambda / d mu.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .chain import CoinConfig
from .errors import DomainError
from .series import sn


def prob_exactly(b: int, h: int, c: int, q: Fraction) -> Fraction:
    """Stationary probability of exactly c balls among positions [0, h).

    Exact product form: s_b * q^-((b-c)(h-c)) * s_h / (s_c s_{h-c} s_{b-c})
    with s_n = (1-q^-1)...(1-q^-n).
    """
    if not 0 <= c <= min(h, b):
        raise DomainError(f"need 0 <= c <= min(h, b), got c={c}, h={h}, b={b}")
    q = Fraction(q)
    return (
        sn(b, q)
        * q ** -((b - c) * (h - c))
        * sn(h, q)
        / (sn(c, q) * sn(h - c, q))
        / sn(b - c, q)
    )


def prob_ratio(b: int, h: int, c: int, q: Fraction) -> Fraction:
    """P_c / P_{c-1} in closed form: (q^c-1)^-1 (q^h - q^(c-1)) (q^(b-c+1)-1)."""
    if not 1 <= c <= min(h, b):
        raise DomainError(f"need 1 <= c <= min(h, b), got c={c}")
    q = Fraction(q)
    return (q**h - q ** (c - 1)) * (q ** (b - c + 1) - 1) / (q**c - 1)


def most_likely_count(b: int, h: int, q: Fraction) -> int:
    """The c maximizing P_c, located where the consecutive ratio crosses
    from above 1 to below; a ratio exactly 1 resolves to the smaller c."""
    c = 0
    while c + 1 <= min(h, b) and prob_ratio(b, h, c + 1, q) > 1:
        c += 1
    return c


def argmax_prob_direct(b: int, h: int, q: Fraction) -> int:
    """Independent check: evaluate every P_c and take the first maximum."""
    best_c, best = 0, prob_exactly(b, h, 0, q)
    for c in range(1, min(h, b) + 1):
        value = prob_exactly(b, h, c, q)
        if value > best:
            best_c, best = c, value
    return best_c


def _check_e(e: float) -> None:
    if not 0 < e < 1:
        raise DomainError(f"E must lie in (0, 1), got {e}")


def mu_of_lambda(e: float, lam: float) -> float:
    """How far out (in units of b) the first lambda*b balls reach."""
    _check_e(e)
    if not 0 < lam < 1:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    return lam + math.log((1 - e) / (1 - e ** (1 - lam))) / math.log(1 / e)


def lambda_of_mu(e: float, mu: float) -> float:
    """Fraction of balls among the first mu*b positions."""
    _check_e(e)
    if mu < 0:
        raise DomainError(f"mu must be nonnegative, got {mu}")
    return mu - math.log(1 + e ** (1 - mu) - e) / math.log(1 / e)


def ball_density(e: float, mu: float) -> float:
    """Limiting occupancy probability at position mu*b:
    (1-E) / (1 + E^(1-mu) - E); equals 1-E at mu = 0."""
    _check_e(e)
    if mu < 0:
        raise DomainError(f"mu must be nonnegative, got {mu}")
    # grouping the exponential with -E makes the mu=0 denominator exactly 1
    return (1 - e) / (1 + (e ** (1 - mu) - e))


def density_curve(
    e: float, mu_max: float, step: float
) -> list[tuple[float, float]]:
    """Sampled (mu, density) rows for plotting; row 0 is (0, 1-E)."""
    if step <= 0:
        raise DomainError("step must be positive")
    rows = []
    n = int(math.floor(mu_max / step + 1e-9))
    for i in range(n + 1):
        mu = i * step
        rows.append((mu, ball_density(e, mu)))
    return rows


@dataclass(frozen=True)
class DensityComparison:
    mu: float
    empirical: float
    predicted: float

    @property
    def absdiff(self) -> float:
        return abs(self.empirical - self.predicted)


def coin_for_limit(balls: int, e: float) -> CoinConfig:
    """The coin matching an all-heads probability of E at this ball count:
    p(heads) = E^(1/b), approximated by a nearby exact rational."""
    _check_e(e)
    heads = Fraction(e ** (1.0 / balls)).limit_denominator(10**12)
    return CoinConfig(1 / heads)


def empirical_density(
    balls: int,
    e: float,
    mu_max: float,
    steps: int,
    burnin: int,
    seed: int,
    buckets_per_unit: Optional[int] = None,
) -> list[DensityComparison]:
    """Simulate the plain chain at q = E^(-1/b) and compare per-position
    occupancy frequencies with the closed-form density.

    Positions are grouped into floor(mu * buckets_per_unit) buckets; the
    default of b buckets per unit compares single positions.
    """
    _check_e(e)
    if not 0 <= burnin <= steps:
        raise DomainError("need 0 <= burnin <= steps")
    if buckets_per_unit is None:
        buckets_per_unit = balls
    rng = np.random.default_rng(seed)
    heads = e ** (1.0 / balls)
    log_heads = math.log(heads)
    hmax = int(math.ceil(mu_max * balls))
    occupancy = np.zeros(hmax, dtype=np.int64)
    state = np.arange(balls, dtype=np.int64)
    samples = 0
    for step in range(steps):
        u = rng.random()
        # number of leading heads: P(k >= j) = heads^j
        k = balls if u <= 0.0 else min(balls, int(math.log(u) / log_heads))
        if k >= balls:
            state = state + 1
        else:
            # tails on flip k+1 moves the (k+1)-th last ball to the front
            keep = np.delete(state, balls - 1 - k) + 1
            state = np.concatenate(([0], keep))
        if step >= burnin:
            occupancy[state[state < hmax]] += 1
            samples += 1

    bucket_sums: dict[int, list[float]] = {}
    for h in range(hmax):
        mu = h / balls
        bucket = int(mu * buckets_per_unit)
        bucket_sums.setdefault(bucket, []).append(h)
    rows = []
    for bucket in sorted(bucket_sums):
        members = bucket_sums[bucket]
        emp = float(sum(occupancy[h] for h in members)) / (samples * len(members))
        mus = [h / balls for h in members]
        pred = sum(ball_density(e, m) for m in mus) / len(members)
        rows.append(
            DensityComparison(
                mu=sum(mus) / len(mus), empirical=emp, predicted=pred
            )
        )
    return rows
