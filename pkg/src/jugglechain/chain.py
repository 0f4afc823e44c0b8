"""The backward Markov chain on plain juggling states.

One step from a b-ball state: flip a coin with p(heads) = 1/q at most b
times, stopping at the first tails.  All heads: shift the state up one,
leaving a - in front.  Tails on flip i: move the i-th last x to the front
(remove it, shift everything else up one, occupy position 0).  The
outcomes are exactly the digraph predecessors of the state.

The stationary distribution assigns a state weight
prefactor * q^-inversions with prefactor = (1-q^-1)...(1-q^-b), and both
the transition law and stationarity are verified with exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol

from .series import sn
from .states import (
    JugglingState,
    inversions,
    prepend_empty,
    states_up_to_inversions,
)


class FlipSource(Protocol):
    def heads(self, probability: Fraction) -> bool: ...


@dataclass(frozen=True)
class CoinConfig:
    """An exact rational q > 1; the coin shows heads with probability 1/q."""

    q: Fraction

    def __post_init__(self) -> None:
        q = Fraction(self.q)
        object.__setattr__(self, "q", q)
        if q <= 1:
            raise ValueError("q must exceed 1")

    @property
    def heads_probability(self) -> Fraction:
        return 1 / self.q


@dataclass(frozen=True)
class TransitionDist:
    """A finite exact distribution over states."""

    entries: tuple[tuple[object, Fraction], ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries, key=lambda e: str(e[0])))
        object.__setattr__(self, "entries", entries)
        states = [s for s, _ in entries]
        if len(set(map(str, states))) != len(states):
            raise ValueError("duplicate states in distribution")
        total = sum((p for _, p in entries), Fraction(0))
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if any(p <= 0 for _, p in entries):
            raise ValueError("probabilities must be positive")

    def probability(self, state: object) -> Fraction:
        for s, p in self.entries:
            if s == state:
                return p
        return Fraction(0)

    def support(self) -> tuple[object, ...]:
        return tuple(s for s, _ in self.entries)

    def as_dict(self) -> dict:
        return dict(self.entries)


def move_to_front(state: JugglingState, index_from_front: int) -> JugglingState:
    """Remove the j-th x (1-indexed from the front), shift the rest up one,
    and occupy position 0."""
    removed = state.positions[index_from_front - 1]
    rest = [p + 1 for p in state.positions if p != removed]
    return JugglingState(tuple(sorted([0] + rest)))


def backward_step(
    state: JugglingState, coin: CoinConfig, rng: FlipSource
) -> tuple[JugglingState, int]:
    """One sampled step; returns (new state, number of flips used)."""
    b = state.balls
    p = coin.heads_probability
    for i in range(1, b + 1):
        if not rng.heads(p):  # tails on flip i: move the i-th last x
            return move_to_front(state, b - i + 1), i
    return prepend_empty(state), b


def backward_dist(state: JugglingState, coin: CoinConfig) -> TransitionDist:
    """The exact one-step law: b+1 outcomes.

    Moving the j-th x (from the front) has probability (1 - 1/q) q^(j-b);
    the all-heads shift has probability q^-b.
    """
    q = coin.q
    b = state.balls
    entries = [(prepend_empty(state), q ** -b)]
    for j in range(1, b + 1):
        entries.append((move_to_front(state, j), (1 - 1 / q) * q ** (j - b)))
    return TransitionDist(tuple(entries))


def stationary_weight(state: JugglingState, coin: CoinConfig) -> Fraction:
    return sn(state.balls, coin.q) * coin.q ** -inversions(state)


def verify_stationarity(state: JugglingState, coin: CoinConfig) -> bool:
    """Exact balance check: the stationary weight of `state` must equal the
    weight flowing into it from its digraph successors in one step.

    A successor is `state` after a t-throw; its backward step recovers
    `state` by moving its j-th x when t lies strictly between the j-th and
    (j+1)-th x positions.  Each group j contributes a geometric sum over t
    with ratio 1/q, finite for j < b and an exact closed-form tail for
    j = b, so the infinite successor sum is evaluated exactly.
    """
    q = coin.q
    b = state.balls
    pi = stationary_weight(state, coin)
    if not state.occupied(0):
        # Unique successor: the one-beat shift down; it recovers the state
        # via its all-heads branch.
        successor = JugglingState(tuple(p - 1 for p in state.positions))
        inflow = stationary_weight(successor, coin) * q ** -b
        return inflow == pi

    # A successor after a t-throw has inversion count inversions(state)
    # + t - b, so pi(successor) = prefactor * q^-(inv + t - b); factor out
    # prefactor * q^(b - inv) and accumulate the geometric t-sums.
    prefactor = sn(b, q)
    lam = state.positions
    lhs = Fraction(0)
    for j in range(1, b + 1):
        lo = lam[j - 1]
        move_prob = (1 - 1 / q) * q ** (j - b)
        if j < b:
            hi = lam[j]
            if hi - lo < 2:
                continue
            # sum of q^-t over t in [lo+1, hi-1]
            geo = (q ** -(lo + 1) - q ** -hi) / (1 - 1 / q)
        else:
            # closed-form infinite tail: sum of q^-t over t > lo
            geo = q ** -(lo + 1) / (1 - 1 / q)
        lhs += move_prob * geo
    lhs *= prefactor * q ** (b - inversions(state))
    return lhs == pi


@dataclass(frozen=True)
class Histogram:
    """Empirical visit counts from a simulated trajectory."""

    counts: tuple[tuple[JugglingState, int], ...]
    samples: int
    seed: int

    def as_dict(self) -> dict[JugglingState, int]:
        return dict(self.counts)


def simulate(
    start: JugglingState,
    coin: CoinConfig,
    steps: int,
    burnin: int,
    rng,
    on_state=None,
) -> Histogram:
    """Run the chain and tally post-burn-in states (one sample per step).

    `on_state`, when given, receives every visited state in order (burn-in
    included), for trajectory dumps.
    """
    if not 0 <= burnin <= steps:
        raise ValueError("need 0 <= burnin <= steps")
    counts: dict[JugglingState, int] = {}
    state = start
    seed = getattr(rng, "seed", -1)
    for step in range(steps):
        state, _ = backward_step(state, coin, rng)
        if on_state is not None:
            on_state(state)
        if step >= burnin:
            counts[state] = counts.get(state, 0) + 1
    ordered = tuple(sorted(counts.items(), key=lambda kv: str(kv[0])))
    return Histogram(counts=ordered, samples=steps - burnin, seed=seed)


def tv_distance(
    hist: Histogram, coin: CoinConfig, balls: int, max_inversions: int = 10
) -> float:
    """Total-variation distance between the empirical measure and the
    stationary law.

    The comparison set is every state with inversion count at most
    `max_inversions` plus every visited state; the stationary mass outside
    that set is accounted exactly (the empirical measure is zero there).
    """
    empirical = hist.as_dict()
    comparison = set(states_up_to_inversions(balls, max_inversions))
    comparison.update(empirical)
    n = hist.samples
    covered = Fraction(0)
    diff = Fraction(0)
    for state in comparison:
        weight = stationary_weight(state, coin)
        covered += weight
        emp = Fraction(empirical.get(state, 0), n)
        diff += abs(emp - weight)
    remainder = 1 - covered  # stationary mass never compared, empirical 0
    return float((diff + remainder) / 2)


def exact_distribution_restricted(
    coin: CoinConfig, balls: int, max_inversions: int
) -> list[tuple[JugglingState, Fraction]]:
    """Stationary weights of all states up to an inversion cap."""
    return [
        (s, stationary_weight(s, coin))
        for s in states_up_to_inversions(balls, max_inversions)
    ]
