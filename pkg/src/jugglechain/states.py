"""Juggling states: plain (indistinguishable balls) and labeled variants.

A plain state is a finite set of b distinct natural positions, read as a
semi-infinite word over {x, -} with the trailing -s implicit: position p
carries an x iff p is in the set.  A labeled ("flag") state replaces the
xs by labels drawn from a fixed multiset; it is stored as the word of its
cells with trailing empties trimmed, so the last stored cell always bears
a label.

Inversion counts treat an empty cell as +infinity, and equal labels never
invert.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import IllegalThrow, ParseError

Cell = Optional[int]  # None is an empty cell ("-"); labels are positive ints


@dataclass(frozen=True)
class JugglingState:
    """b strictly increasing natural positions (where the xs sit)."""

    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        pos = tuple(self.positions)
        object.__setattr__(self, "positions", pos)
        if any(p < 0 for p in pos):
            raise ValueError("positions must be naturals")
        if any(a >= b for a, b in zip(pos, pos[1:])):
            raise ValueError("positions must be strictly increasing")

    @property
    def balls(self) -> int:
        return len(self.positions)

    def occupied(self, position: int) -> bool:
        return position in self.positions

    def word(self) -> str:
        """Render as an x/- word with trailing -s trimmed."""
        if not self.positions:
            return ""
        top = self.positions[-1]
        return "".join("x" if p in set(self.positions) else "-" for p in range(top + 1))

    def __str__(self) -> str:
        return self.word()


def ground_state(balls: int) -> JugglingState:
    """The state x^b: every ball lands on one of the next b beats."""
    return JugglingState(tuple(range(balls)))


def parse_state(text: str) -> JugglingState:
    """Parse an x/- word ('x' marks an occupied position)."""
    if not text:
        raise ParseError("empty state")
    positions = []
    for i, ch in enumerate(text):
        if ch == "x":
            positions.append(i)
        elif ch != "-":
            raise ParseError(f"bad character {ch!r} in state {text!r}")
    return JugglingState(tuple(positions))


def inversions(state: JugglingState) -> int:
    """Number of (-, x) pairs with the - strictly left of the x.

    Equals sum over j of (position of the j-th x) - (j - 1).
    """
    return sum(p - j for j, p in enumerate(state.positions))


def prepend_empty(state: JugglingState) -> JugglingState:
    """Shift every position up by one, putting a - in front."""
    return JugglingState(tuple(p + 1 for p in state.positions))


def throw_state(state: JugglingState, throw: int) -> JugglingState:
    """Advance one beat: the front ball (if any) is rethrown to land
    `throw` beats later.

    A state with an empty first cell admits only throw 0.  Any two of
    (source, target, throw) determine the third.
    """
    if throw < 0:
        raise IllegalThrow(f"negative throw {throw}")
    if not state.occupied(0):
        if throw != 0:
            raise IllegalThrow("nonzero throw from a state with no ball to throw")
        return JugglingState(tuple(p - 1 for p in state.positions))
    if throw == 0:
        raise IllegalThrow("throw 0 requires an empty first cell")
    shifted = [p - 1 for p in state.positions if p != 0]
    landing = throw - 1
    if landing in shifted:
        raise IllegalThrow(f"landing cell {landing} already occupied")
    return JugglingState(tuple(sorted(shifted + [landing])))


def recover_throw(source: JugglingState, target: JugglingState) -> Optional[int]:
    """The throw labeling the edge source -> target, or None if no edge."""
    if not source.occupied(0):
        if target.positions == tuple(p - 1 for p in source.positions):
            return 0
        return None
    shifted = {p - 1 for p in source.positions if p != 0}
    extra = set(target.positions) - shifted
    if len(extra) == 1 and shifted <= set(target.positions):
        return extra.pop() + 1
    return None


def forward_edges(
    state: JugglingState, max_throw: int
) -> list[tuple[int, JugglingState]]:
    """All legal (throw, target) pairs with throw <= max_throw, ascending."""
    if not state.occupied(0):
        return [(0, throw_state(state, 0))] if max_throw >= 0 else []
    edges = []
    for t in range(1, max_throw + 1):
        try:
            edges.append((t, throw_state(state, t)))
        except IllegalThrow:
            continue
    return edges


# ---------------------------------------------------------------------------
# Labeled (flag) states


@dataclass(frozen=True)
class FlagState:
    """A word of cells, each empty or bearing a label from a fixed multiset.

    Trailing empties are not stored: the last cell always bears a label.
    With all labels equal this is equivalent to a plain JugglingState; with
    labels 1..b all distinct it carries full flag information.
    """

    cells: tuple[Cell, ...]

    def __post_init__(self) -> None:
        cells = tuple(self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells or cells[-1] is None:
            raise ValueError("flag state must end with a label")
        if any(c is not None and c <= 0 for c in cells):
            raise ValueError("labels must be positive integers")

    @property
    def labels(self) -> tuple[int, ...]:
        """The label multiset, sorted ascending."""
        return tuple(sorted(c for c in self.cells if c is not None))

    @property
    def balls(self) -> int:
        return sum(1 for c in self.cells if c is not None)

    def word(self) -> str:
        return render_flag(self.cells)

    def __str__(self) -> str:
        return self.word()


def render_flag(cells: Sequence[Cell]) -> str:
    """Cells as text: contiguous digits when every label is < 10, else
    space-separated decimal tokens.  '-' marks an empty cell."""
    if any(c is not None and c >= 10 for c in cells):
        return " ".join("-" if c is None else str(c) for c in cells)
    return "".join("-" if c is None else str(c) for c in cells)


def parse_flag_state(text: str) -> FlagState:
    """Parse flag-state text (either format produced by render_flag)."""
    if not text:
        raise ParseError("empty flag state")
    cells: list[Cell] = []
    tokens = text.split() if " " in text.strip() else list(text.strip())
    for tok in tokens:
        if tok == "-":
            cells.append(None)
        elif tok.isdigit() and int(tok) > 0:
            cells.append(int(tok))
        else:
            raise ParseError(f"bad token {tok!r} in flag state {text!r}")
    try:
        return FlagState(tuple(cells))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def flag_inversions(state: FlagState) -> int:
    """Inversions of a labeled word: pairs (i < j) whose values are out of
    order, with empty = +infinity.  Equal labels do not invert."""
    return word_inversions(state.cells)


def word_inversions(cells: Sequence[Cell]) -> int:
    total = 0
    for i in range(len(cells)):
        left = cells[i]
        for j in range(i + 1, len(cells)):
            right = cells[j]
            if right is None:
                continue  # empty on the right never inverts
            if left is None or left > right:
                total += 1
    return total


def erase_labels(state: FlagState) -> JugglingState:
    """Forget labels, keeping only the occupied positions."""
    return JugglingState(
        tuple(i for i, c in enumerate(state.cells) if c is not None)
    )


def flag_from_parts(positions: Sequence[int], labels_in_order: Sequence[int]) -> FlagState:
    """Build a flag state from occupied positions and their labels read
    left to right."""
    cells: list[Cell] = [None] * (max(positions) + 1) if positions else []
    for pos, lab in zip(sorted(positions), labels_in_order):
        cells[pos] = lab
    return FlagState(tuple(cells))


def trim_cells(cells: Sequence[Cell]) -> tuple[Cell, ...]:
    """Drop trailing empty cells."""
    out = list(cells)
    while out and out[-1] is None:
        out.pop()
    return tuple(out)


# ---------------------------------------------------------------------------
# Enumeration helpers

def states_with_inversions(balls: int, count: int) -> Iterator[JugglingState]:
    """All b-ball states with inversion count exactly `count`.

    States correspond to weakly increasing gap vectors (a partition with at
    most b parts summing to `count`): position_j = gap_j + j.
    """
    def gaps(remaining: int, slots: int, minimum: int) -> Iterator[tuple[int, ...]]:
        if slots == 0:
            if remaining == 0:
                yield ()
            return
        if slots == 1:
            if remaining >= minimum:
                yield (remaining,)
            return
        for first in range(minimum, remaining + 1):
            for rest in gaps(remaining - first, slots - 1, first):
                yield (first,) + rest

    for gap in gaps(count, balls, 0):
        yield JugglingState(tuple(g + j for j, g in enumerate(gap)))


def states_up_to_inversions(balls: int, max_count: int) -> Iterator[JugglingState]:
    for k in range(max_count + 1):
        yield from states_with_inversions(balls, k)


def state_count_by_inversions(balls: int, count: int) -> int:
    """Number of b-ball states with the given inversion count."""
    return sum(1 for _ in states_with_inversions(balls, count))


def distinct_permutations(items: Sequence[int]) -> Iterator[tuple[int, ...]]:
    seen = set()
    for perm in itertools.permutations(items):
        if perm not in seen:
            seen.add(perm)
            yield perm


def flag_states_with_inversions(labels: Sequence[int], count: int) -> Iterator[FlagState]:
    """All flag states over the label multiset with inversion count exactly
    `count`.

    The count splits as (plain inversions of the occupied positions)
    + (inversions among the label word), so enumerate plain states first
    and fill in label arrangements.
    """
    labels = tuple(sorted(labels))
    b = len(labels)
    arrangements: dict[int, list[tuple[int, ...]]] = {}
    for perm in distinct_permutations(labels):
        inv = word_inversions(perm)
        arrangements.setdefault(inv, []).append(perm)
    for plain_inv in range(count + 1):
        fills = arrangements.get(count - plain_inv)
        if not fills:
            continue
        for state in states_with_inversions(b, plain_inv):
            for fill in fills:
                yield flag_from_parts(state.positions, fill)


def flag_states_up_to_inversions(labels: Sequence[int], max_count: int) -> Iterator[FlagState]:
    for k in range(max_count + 1):
        yield from flag_states_with_inversions(labels, k)


# ---------------------------------------------------------------------------
# Window duality

def window_states(balls: int, window: int) -> list[JugglingState]:
    """All b-ball states with every x in [0, window)."""
    return [
        JugglingState(combo)
        for combo in itertools.combinations(range(window), balls)
    ]


def window_dual(state: JugglingState, window: int) -> JugglingState:
    """Reverse the length-`window` word and exchange xs and -s."""
    occupied = set(state.positions)
    if occupied and max(occupied) >= window:
        raise ValueError("state does not fit in the window")
    dual = tuple(
        sorted(window - 1 - p for p in range(window) if p not in occupied)
    )
    return JugglingState(dual)


def window_edges(balls: int, window: int) -> set[tuple[JugglingState, JugglingState]]:
    """Edges of the bounded digraph: throws <= window between window states."""
    edges = set()
    for state in window_states(balls, window):
        for _, target in forward_edges(state, window):
            edges.add((state, target))
    return edges


def window_duality_holds(balls: int, window: int) -> bool:
    """Check that the dual map carries edges of the (b, n) digraph onto the
    reversed edges of the (n-b, n) digraph, bijectively."""
    forward = window_edges(balls, window)
    mapped = {
        (window_dual(tgt, window), window_dual(src, window)) for src, tgt in forward
    }
    return mapped == window_edges(window - balls, window)
