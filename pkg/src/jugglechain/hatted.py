"""One-coin decomposition of the flag chain via hatted intermediate states.

A hatted state is a flag state with one marked cell; the mark may also sit
on the first implicit empty just past the last label (hat == len(cells)),
which is the entry point of every backward traversal.  Reading a hatted
state as a snapshot of the flag chain's backward sweep: cells right of the
hat are already finalized, cells left of it are untouched, and the hatted
cell holds the item currently being carried.

Backward step (normative; each step flips at most one coin):
  * unhatted u         -> hat the implicit empty at len(u), probability 1;
  * hat at 0           -> remove the hat, cells unchanged, probability 1;
  * hat at i > 0       -> let a be the hatted value and c its left
    neighbor.  If c is a label strictly smaller than a (empty = +infinity)
    flip: with probability 1 - 1/q move only the hat onto c, with
    probability 1/q swap the two cells, the hat traveling with a.
    Otherwise swap deterministically.

Composing steps from an unhatted state until the next unhatted state
reproduces the flag chain's one-step law exactly; that equality is the
contract this module is tested against.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .chain import CoinConfig, FlipSource, TransitionDist
from .errors import NonTermination
from .flagchain import flag_forward_edges
from .states import Cell, FlagState, render_flag, trim_cells


@dataclass(frozen=True)
class HattedState:
    """A flag word plus the hat position.

    Cells are stored trimmed (last stored cell bears a label); hat may be
    len(cells), marking the implicit empty just past the last label.
    """

    cells: tuple[Cell, ...]
    hat: int

    def __post_init__(self) -> None:
        cells = tuple(self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells or cells[-1] is None:
            raise ValueError("cells must be trimmed and end with a label")
        if any(c is not None and c <= 0 for c in cells):
            raise ValueError("labels must be positive integers")
        if not 0 <= self.hat <= len(cells):
            raise ValueError("hat must sit on a cell or just past the last label")

    @property
    def hatted_value(self) -> Cell:
        return None if self.hat == len(self.cells) else self.cells[self.hat]

    def word(self) -> str:
        tokens = ["-" if c is None else str(c) for c in self.cells]
        if self.hat == len(tokens):
            tokens.append("-")
        tokens[self.hat] += "^"
        return " ".join(tokens)

    def __str__(self) -> str:
        return self.word()


MixedState = Union[FlagState, HattedState]


def _make_hatted(cells: tuple[Cell, ...], hat: int) -> HattedState:
    trimmed = trim_cells(cells)
    if hat > len(trimmed):
        raise ValueError(f"hat {hat} beyond trimmed word {render_flag(trimmed)}")
    return HattedState(trimmed, hat)


def _swapped(cells: tuple[Cell, ...], i: int) -> tuple[Cell, ...]:
    """Exchange cells i and i+1, materializing the implicit empty when
    i + 1 == len(cells)."""
    padded = cells + (None,) if i + 1 == len(cells) else cells
    out = list(padded)
    out[i], out[i + 1] = out[i + 1], out[i]
    return tuple(out)


def hatted_backward_dist(state: MixedState, coin: CoinConfig) -> TransitionDist:
    """The exact one-step law of the backward chain (1 or 2 outcomes)."""
    one = Fraction(1)
    if isinstance(state, FlagState):
        return TransitionDist(((HattedState(state.cells, len(state.cells)), one),))

    cells, i = state.cells, state.hat
    if i == 0:
        return TransitionDist(((FlagState(cells), one),))

    a = state.hatted_value
    c = cells[i - 1]
    swap_outcome = _make_hatted(_swapped(cells, i - 1), i - 1)
    if c is not None and (a is None or c < a):
        hat_only = _make_hatted(cells, i - 1)
        heads = coin.heads_probability
        return TransitionDist(((hat_only, 1 - heads), (swap_outcome, heads)))
    # equal labels or an empty to the left: the exchange is forced (for
    # equal cells the swapped word coincides with the unswapped one)
    return TransitionDist(((swap_outcome, one),))


def hatted_backward_step(
    state: MixedState, coin: CoinConfig, rng: FlipSource
) -> MixedState:
    """One sampled step; flips a coin only on two-outcome branches (heads
    moves the hatted label, tails moves only the hat)."""
    if isinstance(state, FlagState):
        return HattedState(state.cells, len(state.cells))
    cells, i = state.cells, state.hat
    if i == 0:
        return FlagState(cells)
    a = state.hatted_value
    c = cells[i - 1]
    if c is not None and (a is None or c < a):
        if rng.heads(coin.heads_probability):
            return _make_hatted(_swapped(cells, i - 1), i - 1)
        return _make_hatted(cells, i - 1)
    return _make_hatted(_swapped(cells, i - 1), i - 1)


def composed_backward_dist(
    state: FlagState, coin: CoinConfig, step_budget: int | None = None
) -> TransitionDist:
    """Start at an unhatted state, run the hatted chain backward, and stop
    at the next unhatted state; the stopped law must equal the flag
    chain's one-step law.

    Each step moves the hat one cell left, so every branch takes exactly
    len(cells) + 2 steps; exceeding the budget signals a convention bug.
    """
    if step_budget is None:
        step_budget = len(state.cells) + 4
    outcomes: dict[FlagState, Fraction] = {}
    frontier: list[tuple[MixedState, Fraction, int]] = [(state, Fraction(1), 0)]
    while frontier:
        current, prob, steps = frontier.pop()
        if steps > step_budget:
            raise NonTermination(f"branch exceeded {step_budget} steps")
        for nxt, p in hatted_backward_dist(current, coin).entries:
            if isinstance(nxt, FlagState):
                outcomes[nxt] = outcomes.get(nxt, Fraction(0)) + prob * p
            else:
                frontier.append((nxt, prob * p, steps + 1))
    return TransitionDist(tuple(outcomes.items()))


def hatted_forward_edges(state: MixedState) -> list[MixedState]:
    """Outgoing edges of the forward digraph (the reverse of the backward
    chain's support).

    From an unhatted state: hat position 0.  From a hatted state: remove
    the hat when it sits just past the last label; otherwise always swap
    the hatted cell one step right (the hat traveling with it), and
    additionally jump the hat one step right with cells fixed when the
    hatted cell is a label and the next cell is strictly larger (empty
    counting as +infinity).
    """
    if isinstance(state, FlagState):
        return [HattedState(state.cells, 0)]
    cells, i = state.cells, state.hat
    if i == len(cells):
        return [FlagState(cells)]
    edges: list[MixedState] = []
    a = cells[i]
    nxt = cells[i + 1] if i + 1 < len(cells) else None
    if a is not None and (nxt is None or a < nxt):
        edges.append(_make_hatted(cells, i + 1))
    edges.append(_make_hatted(_swapped(cells, i), i + 1))
    return edges


def hatted_path_exists(
    source: FlagState, target: FlagState, max_extent: int
) -> bool:
    """Is there a directed path source -> ... -> target through hatted
    states only?

    The hat moves strictly right along any such path, so the search is
    finite once words longer than max_extent are pruned.
    """
    goal = HattedState(target.cells, len(target.cells))
    start = HattedState(source.cells, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if current == goal:
            return True
        for nxt in hatted_forward_edges(current):
            if isinstance(nxt, FlagState):
                continue  # paths must stay inside hatted states
            if len(nxt.cells) > max_extent or nxt in seen:
                continue
            seen.add(nxt)
            queue.append(nxt)
    return False


def path_equivalence_check(
    source: FlagState, target: FlagState, max_drop: int
) -> tuple[bool, bool]:
    """(flag digraph has edge source -> target, hatted path exists); the
    two verdicts should always agree."""
    flag_edge = any(
        tr.target == target for tr in flag_forward_edges(source, max_drop)
    )
    return flag_edge, hatted_path_exists(source, target, max_drop + 2)
