"""Design-file round trips, display rendering, and row validation."""

from fractions import Fraction

import pytest

from oamix import Kind, read_design, write_design
from oamix.errors import (
    BadPwoValue,
    InconsistentPwoRow,
    MalformedHeader,
    RowLengthMismatch,
)
from oamix.io import format_value, round_half_up


def test_format_value_rational():
    assert format_value(Fraction(1, 3), None) == "1/3"
    assert format_value(Fraction(2), None) == "2"


def test_format_value_decimals():
    assert format_value(Fraction(1, 3), 2) == "0.33"
    assert format_value(Fraction(2, 3), 2) == "0.67"
    assert format_value(Fraction(1000, 3), 1) == "333.3"
    assert format_value(Fraction(500, 3), 1) == "166.7"
    # exact integers print bare, matching the reference tables
    assert format_value(Fraction(0), 2) == "0"
    assert format_value(Fraction(500), 1) == "500"
    assert format_value(Fraction(3, 4), 2) == "0.75"


def test_round_half_up_at_ties():
    assert round_half_up(Fraction(3, 4), 1) == Fraction(8, 10)
    assert round_half_up(Fraction(665, 1000), 2) == Fraction(67, 100)


def test_write_table2_run_rational(table2):
    text = write_design(table2)
    assert "1/3,1/3,0,1,0,0,2/3" in text.splitlines()


def test_write_table5_run_display(table5):
    text = write_design(table5, decimals=1)
    assert "166.7,0,166.7,0,1,0,333.3" in text.splitlines()


def test_write_table1_display_matches_reference_tokens(table1):
    lines = write_design(table1, decimals=2).splitlines()
    assert lines[0] == "x1,x2,x3,z12,z13,z23"
    assert "0.33,0.67,0,1,0,0" in lines
    assert "1,0,0,0,0,0" in lines


def test_round_trip_all_reference_designs(table1, table2, table3, table5):
    for d in (table1, table2, table3, table5):
        assert read_design(write_design(d)) == d


def test_round_trip_unexpanded_designs():
    from oamix import project_columns, simplex_centroid, simplex_lattice

    for d in (simplex_lattice(3, 2), project_columns(simplex_centroid(4), {4})):
        assert read_design(write_design(d)) == d


def test_read_decimal_tokens_are_exact_decimals():
    d = read_design("x1,x2,x3\n0.33,0.33,0.34\n")
    assert d.runs[0].point.values == (
        Fraction(33, 100),
        Fraction(33, 100),
        Fraction(34, 100),
    )
    assert d.kind is Kind.PROPORTION


def test_read_rederives_orderings(table2):
    again = read_design(write_design(table2))
    assert all(r.ordering == s.ordering for r, s in zip(again.runs, table2.runs))


def test_read_masking_violation():
    text = "x1,x2,x3,z12,z13,z23\n0,1/2,1/2,1,0,1\n"
    with pytest.raises(InconsistentPwoRow):
        read_design(text)


def test_read_missing_sign_for_active_pair():
    text = "x1,x2,x3,z12,z13,z23\n1/2,1/2,0,0,0,0\n"
    with pytest.raises(InconsistentPwoRow):
        read_design(text)


def test_read_nontransitive_row():
    text = "x1,x2,x3,z12,z13,z23\n1/3,1/3,1/3,1,-1,1\n"
    with pytest.raises(InconsistentPwoRow):
        read_design(text)


def test_read_bad_sign_value():
    text = "x1,x2,x3,z12,z13,z23\n1/3,1/3,1/3,2,1,1\n"
    with pytest.raises(BadPwoValue):
        read_design(text)


def test_read_row_length_mismatch():
    text = "x1,x2,x3\n1,0\n"
    with pytest.raises(RowLengthMismatch):
        read_design(text)


def test_read_malformed_headers():
    for header in (
        "b1,b2",
        "x1,x3",
        "x1,x2,z13,z12",
        "x1,x2,A,junk",
        "a1,a2,a3",  # amount designs carry the A column
        "",
    ):
        with pytest.raises(MalformedHeader):
            read_design(header + "\n")


def test_amount_read_recomputes_totals(table5):
    again = read_design(write_design(table5))
    for run in again.runs:
        assert run.amount == sum(run.point.values, Fraction(0))
