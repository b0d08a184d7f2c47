"""Decision tables generated exactly from their published definitions.

Both tables here are fully determined by small rules, so they are
reconstructed in code rather than shipped as data files.  Values and
decisions are dictionary-encoded in order of first appearance, matching what
the CSV loader would produce from the canonical files.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .table import DecisionTable

__all__ = ["GENERATED_TABLES", "balance_scale", "generated_table", "tic_tac_toe"]


@lru_cache(maxsize=None)
def balance_scale() -> DecisionTable:
    """The 625-row balance-scale table.

    Attributes are left weight, left distance, right weight and right
    distance, each ranging over 1..5, enumerated with the rightmost varying
    fastest.  The scale tips toward the larger weight-times-distance
    product.  Decisions follow first appearance: balanced 0, right 1,
    left 2.
    """
    rows = []
    decisions = []
    for lw in range(1, 6):
        for ld in range(1, 6):
            for rw in range(1, 6):
                for rd in range(1, 6):
                    left, right = lw * ld, rw * rd
                    rows.append((lw, ld, rw, rd))
                    if left == right:
                        decisions.append(0)
                    elif right > left:
                        decisions.append(1)
                    else:
                        decisions.append(2)
    names = ("left-weight", "left-distance", "right-weight", "right-distance")
    return DecisionTable(names, np.array(rows), np.array(decisions))


_LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)
_X, _O, _BLANK = 0, 1, 2


def _winner(board: tuple[int, ...]) -> int:
    for a, b, c in _LINES:
        if board[a] != _BLANK and board[a] == board[b] == board[c]:
            return board[a]
    return _BLANK


@lru_cache(maxsize=None)
def tic_tac_toe() -> DecisionTable:
    """The 958 final tic-tac-toe boards, classified as "x wins" or not.

    Boards reachable by legal play (x moves first) that are over — someone
    has three in a row, or the grid is full.  Squares read left to right,
    top to bottom, encoded x 0, o 1, blank 2; decision 0 when x has won and
    1 otherwise.  Positive rows come first, each block sorted by encoding.
    """
    terminals: set[tuple[int, ...]] = set()
    seen: set[tuple[int, ...]] = set()

    def play(board: tuple[int, ...], player: int) -> None:
        for square in range(9):
            if board[square] != _BLANK:
                continue
            after = board[:square] + (player,) + board[square + 1:]
            if after in seen:
                continue
            seen.add(after)
            if _winner(after) != _BLANK or _BLANK not in after:
                terminals.add(after)
            else:
                play(after, _O if player == _X else _X)

    play((_BLANK,) * 9, _X)
    positive = sorted(b for b in terminals if _winner(b) == _X)
    negative = sorted(b for b in terminals if _winner(b) != _X)
    names = tuple(
        f"{row}-{col}"
        for row in ("top", "middle", "bottom")
        for col in ("left", "middle", "right")
    )
    values = np.array(positive + negative)
    decisions = np.array([0] * len(positive) + [1] * len(negative))
    return DecisionTable(names, values, decisions)


GENERATED_TABLES = {
    "balance-scale": balance_scale,
    "tic-tac-toe": tic_tac_toe,
}


def generated_table(name: str) -> DecisionTable:
    try:
        factory = GENERATED_TABLES[name]
    except KeyError:
        options = ", ".join(sorted(GENERATED_TABLES))
        raise ValueError(f"unknown generated table {name!r}; options: {options}")
    return factory()
