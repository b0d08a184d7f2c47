"""Decision rules read off complete tree paths.

A complete path runs from the root to a terminal and accepts at least one
base-table row.  Its premise is the union of the equation systems on its
edges, with equations of a final hypothesis-holds edge that literally repeat
earlier edges dropped before the union.  The rule concludes the terminal's
decision; its coverage is the number of rows accepted.

Per-row quality takes the best over all paths accepting the row: minimum
premise length and maximum coverage.  Table-level figures average those
per-row optima over all rows.  ``derive_rules`` materializes every rule;
``rule_stats`` streams the same walk and keeps only the per-row optima,
which is what the experiment harness uses on hypothesis-type trees whose
path counts run into the millions.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .table import ConstraintError, DecisionTable, EquationSystem
from .builder import DecisionTree
from .metrics import _check_pair

__all__ = [
    "CompletePath",
    "DecisionRule",
    "RuleSet",
    "RuleStats",
    "complete_paths",
    "derive_rules",
    "reduce_system",
    "render_rule",
    "rule_stats",
    "rules_to_csv",
]


@dataclass(frozen=True)
class DecisionRule:
    """Premise equations, concluded decision, and rows covered in the table."""

    premise: EquationSystem
    decision: int
    coverage: int

    @property
    def length(self) -> int:
        return len(self.premise)


@dataclass(frozen=True)
class CompletePath:
    """Edge systems from root to terminal, with the accepted rows."""

    edges: tuple[EquationSystem, ...]
    terminal: int
    decision: int
    rows: np.ndarray


def complete_paths(table: DecisionTable, tree: DecisionTree) -> Iterator[CompletePath]:
    """Root-to-terminal paths accepting at least one row, left to right."""
    _check_pair(table, tree)
    values = table.values
    stack: list[tuple[int, np.ndarray, tuple[EquationSystem, ...]]] = [
        (0, np.arange(table.n_rows, dtype=np.int64), ())
    ]
    while stack:
        node, rows, edges = stack.pop()
        if len(rows) == 0:
            continue
        if tree.is_terminal(node):
            yield CompletePath(edges, node, tree.decision(node), rows)
            continue
        children = []
        for child, attr, payload in tree.child_edges(node):
            if attr is None:
                sub = rows[(values[rows] == np.asarray(payload)).all(axis=1)]
                system = EquationSystem(enumerate(payload))
            else:
                sub = rows[values[rows, attr] == payload]
                system = EquationSystem([(attr, payload)])
            children.append((child, sub, edges + (system,)))
        stack.extend(reversed(children))


def reduce_system(path: CompletePath) -> EquationSystem:
    """Premise of a path: union of its edge systems, final hypothesis reduced.

    Single-equation edges are kept verbatim.  When the final edge carries a
    multi-equation hypothesis system, equations already present in the union
    of the earlier edges are dropped from it; only literal duplicates are
    removable, so the result equals the plain union.
    """
    if not path.edges:
        return EquationSystem()
    earlier = EquationSystem()
    for system in path.edges[:-1]:
        earlier = earlier.union(system)
    last = path.edges[-1]
    if len(last) > 1:
        last = EquationSystem(
            pair for pair in last.items() if pair not in earlier
        )
    return earlier.union(last)


@dataclass
class RuleStats:
    """Per-row optima over all rules covering each row, plus their means."""

    row_lengths: np.ndarray
    row_coverages: np.ndarray

    @property
    def average_length(self) -> float:
        return float(self.row_lengths.mean())

    @property
    def average_coverage(self) -> float:
        return float(self.row_coverages.mean())


@dataclass
class RuleSet(RuleStats):
    rules: list[DecisionRule]


def _finish_stats(
    table: DecisionTable, lengths: np.ndarray, coverages: np.ndarray
) -> None:
    if table.n_rows and int(coverages.min()) == 0:
        raise ConstraintError("some rows are not covered by any complete path")


def derive_rules(table: DecisionTable, tree: DecisionTree) -> RuleSet:
    """One rule per complete path, with per-row optima over covering rules."""
    lengths = np.full(table.n_rows, np.iinfo(np.int64).max, dtype=np.int64)
    coverages = np.zeros(table.n_rows, dtype=np.int64)
    rules = []
    for path in complete_paths(table, tree):
        premise = reduce_system(path)
        rule = DecisionRule(premise, path.decision, int(len(path.rows)))
        rules.append(rule)
        np.minimum.at(lengths, path.rows, rule.length)
        np.maximum.at(coverages, path.rows, rule.coverage)
    _finish_stats(table, lengths, coverages)
    return RuleSet(row_lengths=lengths, row_coverages=coverages, rules=rules)


def rule_stats(table: DecisionTable, tree: DecisionTree) -> RuleStats:
    """Per-row rule optima without materializing the rules.

    A path's premise length is the number of its single-equation edges (all
    on distinct attributes once empty paths are pruned), or the full
    attribute count when the path ends by confirming a hypothesis, whose
    system mentions every attribute.
    """
    _check_pair(table, tree)
    values = table.values
    lengths = np.full(table.n_rows, np.iinfo(np.int64).max, dtype=np.int64)
    coverages = np.zeros(table.n_rows, dtype=np.int64)
    stack: list[tuple[int, np.ndarray, int, bool]] = [
        (0, np.arange(table.n_rows, dtype=np.int64), 0, False)
    ]
    while stack:
        node, rows, singles, via_hypothesis = stack.pop()
        if len(rows) == 0:
            continue
        if tree.is_terminal(node):
            length = table.n if via_hypothesis else singles
            lengths[rows] = np.minimum(lengths[rows], length)
            coverages[rows] = np.maximum(coverages[rows], len(rows))
            continue
        for child, attr, payload in tree.child_edges(node):
            if attr is None:
                sub = rows[(values[rows] == np.asarray(payload)).all(axis=1)]
                stack.append((child, sub, singles, True))
            else:
                sub = rows[values[rows, attr] == payload]
                stack.append((child, sub, singles + 1, via_hypothesis))
    _finish_stats(table, lengths, coverages)
    return RuleStats(row_lengths=lengths, row_coverages=coverages)


def render_rule(rule: DecisionRule, names: Sequence[str]) -> str:
    """Human-readable form, e.g. ``(f2=1) ∧ (f7=0) → 3 [len=2, cov=41]``."""
    if len(rule.premise):
        premise = " ∧ ".join(f"({names[a]}={v})" for a, v in rule.premise)
    else:
        premise = "true"
    return f"{premise} → {rule.decision} [len={rule.length}, cov={rule.coverage}]"


def rules_to_csv(rules: Sequence[DecisionRule], names: Sequence[str]) -> str:
    """CSV with columns premise, decision, length, coverage."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["premise", "decision", "length", "coverage"])
    for rule in rules:
        if len(rule.premise):
            premise = " ∧ ".join(f"{names[a]}={v}" for a, v in rule.premise)
        else:
            premise = "true"
        writer.writerow([premise, rule.decision, rule.length, rule.coverage])
    return out.getvalue()
