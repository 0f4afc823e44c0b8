"""The backward Markov chain on labeled (flag) states, and its digraph.

Forward edges from a label-initial state: pick up the front label and walk
East over the shifted word; at an empty cell we may drop the carried label
and stop, at a strictly larger label we may exchange (drop the carried
label there, pick up the larger one) and keep walking.  The set of drop
positions along a walk is the transition's throw set.

Backward step: hold an empty, point at the rightmost label, and sweep
left.  At each stop (a label strictly smaller than the held item, empties
counting as +infinity) flip a coin with p(heads) = 1/q: tails exchanges
the held item with the pointed label.  The sweep only stops at labels
strictly smaller than the held item, so with repeated labels equal ones
are passed over, which is what makes the all-equal case collapse to the
plain chain.  Falling off the left end drops the held item in front.

The stationary weight of a state is prefactor * q^-inversions, where the
prefactor multiplies (1-q^-1)...(1-q^-k) over the groups of equal labels
(sizes k): all labels distinct gives (1-1/q)^b, a single group gives the
plain-chain prefactor.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chain import CoinConfig, FlipSource, TransitionDist
from .errors import CapTooSmall
from .series import sn
from .states import Cell, FlagState, flag_inversions, trim_cells


def label_groups(labels: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """The label multiset as (label, multiplicity) pairs, ascending."""
    groups = []
    for lab in sorted(labels):
        if groups and groups[-1][0] == lab:
            groups[-1] = (lab, groups[-1][1] + 1)
        else:
            groups.append((lab, 1))
    return tuple(groups)


def group_prefactor(labels: Sequence[int], q: Fraction) -> Fraction:
    """Product over groups of equal labels of (1-q^-1)...(1-q^-size)."""
    out = Fraction(1)
    for _, size in label_groups(labels):
        out *= sn(size, Fraction(q))
    return out


@dataclass(frozen=True)
class FlagTransition:
    target: FlagState
    drops: frozenset[int]  # positions where a label was put down


def flag_forward_edges(state: FlagState, max_drop: int) -> list[FlagTransition]:
    """All outgoing transitions whose drops stay at positions <= max_drop.

    An empty-initial state has the unique edge deleting its leading empty.
    Drops happen at strictly increasing positions along a walk, so capping
    the final drop caps them all.
    """
    cells = state.cells
    if cells[0] is None:
        return [FlagTransition(FlagState(cells[1:]), frozenset())]

    word = cells[1:]
    results: list[FlagTransition] = []

    def walk(pos: int, carried: int, current: tuple[Cell, ...], drops: tuple[int, ...]):
        if pos > max_drop:
            return
        cell = current[pos] if pos < len(current) else None
        if cell is None:
            dropped = list(current) + [None] * max(0, pos + 1 - len(current))
            dropped[pos] = carried
            results.append(
                FlagTransition(
                    FlagState(trim_cells(dropped)), frozenset(drops + (pos,))
                )
            )
            walk(pos + 1, carried, current, drops)
        else:
            if cell > carried:
                swapped = current[:pos] + (carried,) + current[pos + 1 :]
                walk(pos + 1, cell, swapped, drops + (pos,))
            walk(pos + 1, carried, current, drops)

    walk(0, cells[0], word, ())
    results.sort(key=lambda tr: (sorted(tr.drops), str(tr.target)))
    return results


def _next_stop(cells: Sequence[Cell], held: Cell, start: int) -> int:
    """First index strictly left of `start` bearing a label smaller than the
    held item (held empty = +infinity stops at every label), or -1."""
    for i in range(start - 1, -1, -1):
        c = cells[i]
        if c is not None and (held is None or c < held):
            return i
    return -1


def flag_backward_step(
    state: FlagState, coin: CoinConfig, rng: FlipSource
) -> FlagState:
    """One sampled backward step."""
    cells = list(state.cells)
    held: Cell = None
    ptr = len(cells) - 1  # rightmost cell bears a label
    while ptr >= 0:
        if not rng.heads(coin.heads_probability):
            held, cells[ptr] = cells[ptr], held
        ptr = _next_stop(cells, held, ptr)
    return FlagState(trim_cells([held] + cells))


def flag_backward_dist(state: FlagState, coin: CoinConfig) -> TransitionDist:
    """The exact one-step law, by enumerating every flip sequence.

    The held item strictly decreases at each tails, so at most one flip
    happens per label and the tree has at most 2^b leaves; equal outcomes
    are merged.
    """
    heads_p = coin.heads_probability
    outcomes: dict[FlagState, Fraction] = {}

    def finish(cells: tuple[Cell, ...], held: Cell, prob: Fraction) -> None:
        out = FlagState(trim_cells((held,) + cells))
        outcomes[out] = outcomes.get(out, Fraction(0)) + prob

    def explore(cells: tuple[Cell, ...], held: Cell, ptr: int, prob: Fraction) -> None:
        # heads: leave the pointed label
        nxt = _next_stop(cells, held, ptr)
        if nxt < 0:
            finish(cells, held, prob * heads_p)
        else:
            explore(cells, held, nxt, prob * heads_p)
        # tails: exchange held and pointed
        swapped = cells[:ptr] + (held,) + cells[ptr + 1 :]
        new_held = cells[ptr]
        nxt = _next_stop(swapped, new_held, ptr)
        if nxt < 0:
            finish(swapped, new_held, prob * (1 - heads_p))
        else:
            explore(swapped, new_held, nxt, prob * (1 - heads_p))

    explore(state.cells, None, len(state.cells) - 1, Fraction(1))
    return TransitionDist(tuple(outcomes.items()))


def flag_stationary_weight(state: FlagState, coin: CoinConfig) -> Fraction:
    return group_prefactor(state.labels, coin.q) * coin.q ** -flag_inversions(state)


@dataclass(frozen=True)
class StationarityBracket:
    """Result of a truncated balance check: the inflow is known to lie in
    [partial_sum, partial_sum + tail_bound]."""

    expected: Fraction
    partial_sum: Fraction
    tail_bound: Fraction

    @property
    def ok(self) -> bool:
        return self.partial_sum <= self.expected <= self.partial_sum + self.tail_bound


def flag_stationarity_tail_bound(
    state: FlagState, coin: CoinConfig, drop_cap: int
) -> Fraction:
    """Exact upper bound on the balance inflow omitted by capping drops.

    Every omitted successor comes from a walk whose final drop lands at a
    position p > drop_cap; such a target keeps at most b-1 other labels
    left of p, hence has at least p - b + 1 inversions, so its weight is
    at most prefactor * q^(b-1-p).  At most 2^(b-1) walks end at any given
    p (a walk is determined by its exchange subset and final drop), and
    each backward probability is at most 1.  Summing the geometric series
    over p > drop_cap gives the bound.
    """
    q = coin.q
    b = state.balls
    prefactor = group_prefactor(state.labels, q)
    per_position = 2 ** (b - 1) * prefactor * q ** (b - 1)
    return per_position * q ** -(drop_cap + 1) / (1 - 1 / q)


def verify_flag_stationarity(
    state: FlagState,
    coin: CoinConfig,
    drop_cap: int,
    tolerance: Fraction = Fraction(1, 1024),
) -> StationarityBracket:
    """Bracketed balance check at `state`.

    Sums weight * backward-probability over all forward successors whose
    drops fit under drop_cap, exactly; the omitted far-drop successors are
    covered by an exact geometric tail bound.  Raises CapTooSmall when the
    tail bound is not below tolerance * weight(state).
    """
    pi = flag_stationary_weight(state, coin)
    if state.cells[0] is None:
        # Unique predecessor-in-chain situation: only the leading-empty
        # deletion points here, via its all-heads branch.  Exact, no tail.
        successor = FlagState(state.cells[1:])
        inflow = flag_stationary_weight(successor, coin) * flag_backward_dist(
            successor, coin
        ).probability(state)
        return StationarityBracket(
            expected=pi, partial_sum=inflow, tail_bound=Fraction(0)
        )

    last_label = len(state.cells) - 1
    if drop_cap < last_label + state.balls:
        raise ValueError("drop_cap must be at least last label position + b")
    targets = {tr.target for tr in flag_forward_edges(state, drop_cap)}
    partial = Fraction(0)
    for target in sorted(targets, key=str):
        prob = flag_backward_dist(target, coin).probability(state)
        if prob:
            partial += flag_stationary_weight(target, coin) * prob
    tail = flag_stationarity_tail_bound(state, coin, drop_cap)
    if tail >= pi * tolerance:
        raise CapTooSmall(
            f"tail bound {tail} is not below {tolerance} * weight {pi}"
        )
    return StationarityBracket(expected=pi, partial_sum=partial, tail_bound=tail)


def flag_from_plain(positions: Sequence[int], label: int = 1) -> FlagState:
    """The all-equal-labels flag state occupying the given positions."""
    cells: list[Cell] = [None] * (max(positions) + 1)
    for p in positions:
        cells[p] = label
    return FlagState(tuple(cells))
