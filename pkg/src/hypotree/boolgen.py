"""Random Boolean functions and their full-truth-table decision tables.

A function of n variables is stored as the tuple of its 2**n values in
ascending order of the integer encoding of the argument vector, with x1 the
most significant bit.  ``table_of`` turns one into a decision table whose
rows enumerate {0,1}^n in that same order, so every possible hypothesis is a
row of the table.

Generation is reproducible: function ``index`` of a suite draws from a PCG64
stream seeded with ``(seed, n, index)``, so any single function can be
recreated without generating its predecessors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .table import DecisionTable

__all__ = [
    "BoolSuiteSpec",
    "BooleanFunction",
    "function_suite",
    "parse_suite_spec",
    "random_function",
    "table_of",
]

MAX_VARIABLES = 16


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_VARIABLES:
        raise ValueError(f"number of variables must be in 1..{MAX_VARIABLES}, got {n}")


@dataclass(frozen=True)
class BooleanFunction:
    """Truth table of a Boolean function of ``n`` variables."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_n(self.n)
        if len(self.bits) != 1 << self.n:
            raise ValueError(
                f"expected {1 << self.n} truth-table bits, got {len(self.bits)}"
            )
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("truth-table bits must be 0 or 1")

    def __call__(self, assignment: tuple[int, ...]) -> int:
        index = 0
        for bit in assignment:
            index = index << 1 | bit
        return self.bits[index]


def random_function(n: int, seed: int, index: int = 0) -> BooleanFunction:
    """Function ``index`` of the suite identified by ``(n, seed)``."""
    _check_n(n)
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be nonnegative")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, n, index))))
    bits = rng.integers(0, 2, size=1 << n, dtype=np.uint8)
    return BooleanFunction(n, tuple(int(b) for b in bits))


def function_suite(n: int, count: int, seed: int) -> list[BooleanFunction]:
    if count < 1:
        raise ValueError(f"suite size must be positive, got {count}")
    return [random_function(n, seed, index) for index in range(count)]


def table_of(f: BooleanFunction) -> DecisionTable:
    """Decision table with one row per argument vector, x1 the high bit."""
    n = f.n
    codes = np.arange(1 << n, dtype=np.int64)
    values = np.stack([(codes >> (n - 1 - j)) & 1 for j in range(n)], axis=1)
    names = tuple(f"x{j + 1}" for j in range(n))
    return DecisionTable(names, values, np.asarray(f.bits, dtype=np.int64))


@dataclass(frozen=True)
class BoolSuiteSpec:
    """A reproducible family of random Boolean functions."""

    n: int
    count: int = 100
    seed: int = 42

    def __post_init__(self) -> None:
        _check_n(self.n)
        if self.count < 1:
            raise ValueError(f"suite size must be positive, got {self.count}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")

    @property
    def display(self) -> str:
        return f"bool:n={self.n},count={self.count},seed={self.seed}"

    @cached_property
    def functions(self) -> tuple[BooleanFunction, ...]:
        return tuple(function_suite(self.n, self.count, self.seed))


_PAIR = re.compile(r"(n|count|seed)=(\d+)$")


def parse_suite_spec(text: str) -> BoolSuiteSpec:
    """Parse ``bool:n=4,count=100,seed=42``; count and seed are optional."""
    if not text.startswith("bool:"):
        raise ValueError(f"not a Boolean-suite source: {text!r}")
    fields: dict[str, int] = {}
    for token in text[len("bool:"):].split(","):
        match = _PAIR.match(token.strip())
        if match is None:
            raise ValueError(
                f"bad suite parameter {token!r} in {text!r}; "
                "expected n=, count= or seed="
            )
        key = match.group(1)
        if key in fields:
            raise ValueError(f"duplicate suite parameter {key!r} in {text!r}")
        fields[key] = int(match.group(2))
    if "n" not in fields:
        raise ValueError(f"suite source {text!r} must set n=")
    return BoolSuiteSpec(**fields)
