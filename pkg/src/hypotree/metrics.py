"""Tree metrics: depth, realizable node count, simulation, validation.

Depth counts the queries (Working nodes) on a longest root-to-terminal path.
A node is realizable when some base-table row together with some truthful
choice of counterexamples reaches it, which is exactly when the subtable of
rows matching its path equations is nonempty; the builder records those row
counts, so counting is a single pass.

Simulation replays one row through the tree.  At a hypothesis node whose
hypothesis the row falsifies, a strategy picks which truthful counterexample
to answer; validation can exhaustively enumerate those choices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .table import ConstraintError, DecisionTable, EquationSystem
from .builder import TERMINAL, DecisionTree
from .queries import Answer, Hypothesis

__all__ = [
    "ComputationState",
    "StrategyError",
    "ValidationReport",
    "depth",
    "first_counterexample",
    "realizable_count",
    "simulate",
    "validate",
]


class StrategyError(ValueError):
    """A strategy returned an answer that is not a truthful counterexample."""


@dataclass(frozen=True)
class ComputationState:
    """Where a simulated computation stands: current node and accepted equations."""

    node: int
    system: EquationSystem


Strategy = Callable[[ComputationState, Hypothesis, Sequence[int]], Answer]


def _check_pair(table: DecisionTable, tree: DecisionTree) -> None:
    if tree.base is table:
        return
    if not (
        np.array_equal(tree.base.values, table.values)
        and np.array_equal(tree.base.decisions, table.decisions)
    ):
        raise ConstraintError("tree was built for a different table")


def depth(tree: DecisionTree) -> int:
    """Maximum number of queries on any root-to-terminal path."""
    kinds = tree.kinds
    first = tree.first_children
    counts = tree.child_counts
    qdepth = np.zeros(tree.node_count, dtype=np.int64)
    for node in np.flatnonzero(kinds != TERMINAL):
        f = first[node]
        qdepth[f : f + counts[node]] = qdepth[node] + 1
    return int(qdepth[kinds == TERMINAL].max(initial=0))


def realizable_count(table: DecisionTable, tree: DecisionTree) -> int:
    """Number of nodes whose path subtable is nonempty."""
    _check_pair(table, tree)
    return int(np.count_nonzero(tree.path_row_counts > 0))


def first_counterexample(
    state: ComputationState, hypothesis: Hypothesis, row: Sequence[int]
) -> Answer:
    """Default strategy: the first truthful counterexample in answer order."""
    for i, delta in enumerate(hypothesis.values):
        if row[i] != delta:
            return Answer(EquationSystem([(i, int(row[i]))]))
    raise StrategyError("row satisfies the hypothesis; no counterexample exists")


def simulate(
    table: DecisionTable,
    tree: DecisionTree,
    row: Sequence[int],
    strategy: Strategy | None = None,
) -> int:
    """Decision the tree computes for ``row`` under the given strategy."""
    _check_pair(table, tree)
    values = tuple(int(v) for v in row)
    if len(values) != table.n:
        raise ConstraintError(f"row has {len(values)} values for {table.n} attributes")
    if strategy is None:
        strategy = first_counterexample
    node = 0
    system = EquationSystem()
    while not tree.is_terminal(node):
        edges = tree.child_edges(node)
        if edges[0][1] is not None:  # attribute query
            attr = edges[0][1]
            matches = [c for c, _, v in edges if v == values[attr]]
            if not matches:
                raise ConstraintError(
                    f"value {values[attr]} of attribute {attr} is outside the table"
                )
            node = matches[0]
            system = system.union(EquationSystem([(attr, values[attr])]))
            continue
        hypothesis = Hypothesis(edges[0][2])
        if hypothesis.values == values:
            node = edges[0][0]
            system = system.union(hypothesis.system())
            continue
        answer = strategy(ComputationState(node, system), hypothesis, values)
        items = answer.system.items()
        if len(items) != 1:
            raise StrategyError("counterexample answers carry exactly one equation")
        attr, value = items[0]
        if values[attr] != value or hypothesis.values[attr] == value:
            raise StrategyError(
                f"answer {attr}={value} is not a truthful counterexample"
            )
        node = next(c for c, i, v in edges[1:] if i == attr and v == value)
        system = system.union(answer.system)
    return tree.decision(node)


def _count_paths(tree: DecisionTree, values: tuple[int, ...], bound: int) -> int:
    """Number of distinct truthful computation paths for one row, capped."""
    paths = 0
    stack = [0]
    while stack:
        node = stack.pop()
        if tree.is_terminal(node):
            paths += 1
            if paths > bound:
                return paths
            continue
        edges = tree.child_edges(node)
        if edges[0][1] is not None:
            attr = edges[0][1]
            stack.extend(c for c, _, v in edges if v == values[attr])
        elif edges[0][2] == values:
            stack.append(edges[0][0])
        else:
            stack.extend(c for c, i, v in edges[1:] if values[i] == v)
    return paths


def _truthful_terminals(
    tree: DecisionTree, values: tuple[int, ...], visited: set[int]
) -> list[int]:
    """Terminals reachable for a row under every counterexample strategy."""
    terminals = []
    stack = [0]
    while stack:
        node = stack.pop()
        visited.add(node)
        if tree.is_terminal(node):
            terminals.append(node)
            continue
        edges = tree.child_edges(node)
        if edges[0][1] is not None:
            attr = edges[0][1]
            stack.extend(c for c, _, v in edges if v == values[attr])
        elif edges[0][2] == values:
            stack.append(edges[0][0])
        else:
            stack.extend(c for c, i, v in edges[1:] if values[i] == v)
    return terminals


@dataclass
class ValidationReport:
    """Outcome of validate(): one violation per line, plus what actually ran."""

    violations: list[str] = field(default_factory=list)
    simulation_ran: bool = False
    rows_simulated: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def render(self) -> str:
        if not self.ok:
            return "\n".join(self.violations)
        if self.simulation_ran:
            return f"ok: structural checks and {self.rows_simulated}-row simulation passed"
        return "ok: structural checks passed; simulation skipped (too many paths)"


def validate(
    table: DecisionTable,
    tree: DecisionTree,
    *,
    simulation_bound: int = 10**6,
) -> ValidationReport:
    """Check terminal labels against recomputed path subtables, then simulate.

    Structural checks always run: a terminal with a nonempty path subtable
    must carry its rows' single shared decision, an empty one must carry 0.
    Exhaustive per-row simulation runs only while the number of computation
    paths for every row stays within ``simulation_bound``; past the bound the
    report notes that only the structural checks ran.
    """
    _check_pair(table, tree)
    report = ValidationReport()
    values = table.values
    stack: list[tuple[int, np.ndarray]] = [
        (0, np.arange(table.n_rows, dtype=np.int64))
    ]
    while stack:
        node, rows = stack.pop()
        if tree.n_rows_at(node) != len(rows):
            report.violations.append(
                f"node {node}: recorded subtable size {tree.n_rows_at(node)} "
                f"differs from recomputed {len(rows)}"
            )
        if tree.is_terminal(node):
            got = tree.decision(node)
            if len(rows) == 0:
                if got != 0:
                    report.violations.append(
                        f"node {node}: empty-subtable terminal labeled {got}, expected 0"
                    )
            else:
                decs = np.unique(table.decisions[rows])
                if len(decs) > 1:
                    report.violations.append(
                        f"node {node}: terminal subtable is not degenerate"
                    )
                elif got != int(decs[0]):
                    report.violations.append(
                        f"node {node}: terminal labeled {got}, "
                        f"but its subtable decides {int(decs[0])}"
                    )
            continue
        for child, attr, payload in tree.child_edges(node):
            if attr is None:
                sub = rows[(values[rows] == np.asarray(payload)).all(axis=1)]
            else:
                sub = rows[values[rows, attr] == payload]
            stack.append((child, sub))

    within_bound = all(
        _count_paths(tree, tuple(map(int, values[r])), simulation_bound)
        <= simulation_bound
        for r in range(table.n_rows)
    )
    if within_bound:
        report.simulation_ran = True
        visited: set[int] = set()
        for r in range(table.n_rows):
            row = tuple(int(v) for v in values[r])
            expected = int(table.decisions[r])
            for terminal in _truthful_terminals(tree, row, visited):
                got = tree.decision(terminal)
                if got != expected:
                    report.violations.append(
                        f"row {r}: a computation reaches terminal {terminal} "
                        f"deciding {got}, expected {expected}"
                    )
            report.rows_simulated += 1
    return report
