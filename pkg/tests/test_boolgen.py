"""Random Boolean functions: reproducibility, encoding, truth-table tables."""

import hashlib
import itertools

import pytest

from hypotree import (
    BoolSuiteSpec,
    BooleanFunction,
    build_tree,
    function_suite,
    is_proper,
    parse_suite_spec,
    random_function,
    table_of,
)
from hypotree.boolgen import MAX_VARIABLES
from hypotree.queries import Hypothesis

# Frozen outputs of the seeded generator; these must never change, or
# published experiment results stop being reproducible.
BITS_N3_S42_I0 = (0, 1, 0, 1, 0, 0, 0, 0)
SUITE_N4_DIGEST = "278f08e4382e6fcba0017376546b0e661c9577b171295be0237430d4edf4d6bd"
SUITE_N4_FIRST = (1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 0, 0)


def suite_digest(functions) -> str:
    blob = "".join("".join(map(str, f.bits)) for f in functions).encode()
    return hashlib.sha256(blob).hexdigest()


class TestGeneration:
    def test_pinned_function(self):
        assert random_function(3, 42, 0).bits == BITS_N3_S42_I0
        assert random_function(3, 42, 0) == random_function(3, 42, 0)

    def test_pinned_suite_digest(self):
        spec = BoolSuiteSpec(4)
        assert spec.functions[0].bits == SUITE_N4_FIRST
        assert suite_digest(spec.functions) == SUITE_N4_DIGEST
        assert suite_digest(function_suite(4, 100, 42)) == SUITE_N4_DIGEST

    def test_index_addressable_without_predecessors(self):
        suite = function_suite(5, 10, 42)
        assert random_function(5, 42, 7) == suite[7]

    def test_different_parameters_differ(self):
        assert random_function(4, 42, 0) != random_function(4, 42, 1)
        assert random_function(4, 42, 0) != random_function(4, 43, 0)

    def test_validation(self):
        with pytest.raises(ValueError):
            random_function(0, 42)
        with pytest.raises(ValueError):
            random_function(MAX_VARIABLES + 1, 42)
        with pytest.raises(ValueError):
            random_function(3, -1)
        with pytest.raises(ValueError):
            function_suite(3, 0, 42)


class TestBooleanFunction:
    def test_call_uses_x1_as_high_bit(self):
        f = BooleanFunction(2, (0, 1, 1, 0))  # xor
        assert f((0, 0)) == 0
        assert f((0, 1)) == 1
        assert f((1, 0)) == 1
        assert f((1, 1)) == 0

    def test_bit_validation(self):
        with pytest.raises(ValueError):
            BooleanFunction(2, (0, 1, 0))  # wrong length
        with pytest.raises(ValueError):
            BooleanFunction(1, (0, 2))  # non-binary
        with pytest.raises(ValueError):
            BooleanFunction(0, ())


class TestTableOf:
    def test_rows_enumerate_grid_in_msb_order(self):
        f = BooleanFunction(2, (0, 1, 1, 0))
        t = table_of(f)
        assert t.attribute_names == ("x1", "x2")
        assert [tuple(r) for r in t.values] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert list(t.decisions) == [0, 1, 1, 0]

    def test_decisions_match_function(self):
        f = random_function(4, 42, 3)
        t = table_of(f)
        for row in range(t.n_rows):
            assert int(t.decisions[row]) == f(t.row_values(row))

    def test_every_hypothesis_is_proper(self):
        t = table_of(random_function(3, 42, 2))
        for values in itertools.product((0, 1), repeat=3):
            assert is_proper(Hypothesis(values), t)

    def test_majority_and_constant(self):
        maj = BooleanFunction(
            3, tuple(int(bin(i).count("1") >= 2) for i in range(8))
        )
        t = table_of(maj)
        assert int(t.decisions[0b110]) == 1
        assert int(t.decisions[0b100]) == 0

        const = BooleanFunction(2, (1, 1, 1, 1))
        tree = build_tree(table_of(const), 3, "me")
        assert tree.serialize() == "0 T 1\n"


class TestSuiteSpec:
    def test_display_and_defaults(self):
        assert BoolSuiteSpec(4).display == "bool:n=4,count=100,seed=42"
        assert BoolSuiteSpec(6, count=2, seed=0).display == "bool:n=6,count=2,seed=0"
        assert len(BoolSuiteSpec(3, count=5).functions) == 5

    def test_parse_round_trip(self):
        assert parse_suite_spec("bool:n=4") == BoolSuiteSpec(4)
        assert parse_suite_spec("bool:n=5,count=3,seed=7") == BoolSuiteSpec(5, 3, 7)
        assert parse_suite_spec("bool: n=2, count=1") == BoolSuiteSpec(2, 1)
        spec = BoolSuiteSpec(4, 9, 1)
        assert parse_suite_spec(spec.display) == spec

    @pytest.mark.parametrize(
        "text",
        [
            "n=4",  # missing prefix
            "bool:count=5",  # missing n
            "bool:n=4,n=5",  # duplicate
            "bool:n=4,depth=2",  # unknown key
            "bool:n=",  # missing value
            "bool:n=-3",  # negative
            "bool:n=0",  # out of range
            "bool:n=17",
            "bool:n=4,count=0",
        ],
    )
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            parse_suite_spec(text)
