import itertools

import pytest
from hypothesis import given, settings, strategies as st

from lsys_model.ca import (
    History,
    RuleTable,
    RuleTableError,
    axis_check,
    ca_evolve,
    ca_step,
    gol_table,
)
from lsys_model.laws import fib_laws
from lsys_model.symbols import render_symbols

LAWS = fib_laws()
TABLE = gol_table()

rows16 = st.text(alphabet="01", min_size=16, max_size=16)


def test_gol_table_entries():
    assert TABLE.entries == {
        "000": "0",
        "001": "0",
        "010": "0",
        "011": "1",
        "100": "0",
        "101": "1",
        "110": "1",
        "111": "1",
    }
    assert TABLE["010"] == "0"
    assert TABLE[("1", "1", "1")] == "1"


def test_gol_table_is_majority_rule_232():
    oracle = sum(int(out) * 2 ** int(eta, 2) for eta, out in TABLE.entries.items())
    assert TABLE.rule_number == oracle == 232
    assert RuleTable.from_rule_number(232) == TABLE
    for bits in itertools.product("01", repeat=3):
        majority = "1" if bits.count("1") >= 2 else "0"
        assert TABLE["".join(bits)] == majority


def test_rule_table_validation():
    with pytest.raises(RuleTableError):
        RuleTable.from_entries({"000": 0, "001": 1})
    with pytest.raises(RuleTableError):
        RuleTable.from_rule_number(256)
    with pytest.raises(RuleTableError):
        RuleTable(outputs=(0, 1, 2, 0, 0, 0, 0, 0))
    with pytest.raises(RuleTableError):
        TABLE["01"]


def test_step_examples():
    assert ca_step(TABLE, "010") == ("0", "0", "0")
    assert render_symbols(ca_step(TABLE, "0000")) == "0000"
    assert render_symbols(ca_step(TABLE, "1111")) == "1111"
    assert render_symbols(ca_step(TABLE, "01")) == "10"


def test_step_rejects_bad_input():
    with pytest.raises(RuleTableError):
        ca_step(TABLE, "012")
    with pytest.raises(RuleTableError):
        ca_step(TABLE, "")
    with pytest.raises(RuleTableError):
        ca_step(TABLE, "010", boundary="fixed")


def test_evolve_examples():
    assert ca_evolve(TABLE, "010", 1).rendered() == ["010", "000"]
    assert ca_evolve(TABLE, "0110", 3).rendered() == ["0110"] * 4
    history = ca_evolve(TABLE, "0110", 0)
    assert history.rendered() == ["0110"]
    assert history.boundary == "periodic"
    with pytest.raises(ValueError):
        ca_evolve(TABLE, "0110", -1)


@pytest.mark.parametrize("initial", ["", [], "0120"])
def test_evolve_rejects_bad_rows_even_without_steps(initial):
    with pytest.raises(RuleTableError):
        ca_evolve(TABLE, initial, 0)


def test_evolve_checks_boundary_without_steps():
    with pytest.raises(RuleTableError):
        ca_evolve(TABLE, "0110", 0, boundary="fixed")


def test_other_rule_numbers_run():
    # Rule 204 is the identity.
    assert ca_evolve(RuleTable.from_rule_number(204), "10110", 2).rendered() == ["10110"] * 3


@settings(max_examples=100)
@given(rows16)
def test_majority_keeps_length_and_quiet_neighbourhoods(row):
    nxt = render_symbols(ca_step(TABLE, row))
    assert len(nxt) == len(row)
    n = len(row)
    for i in range(n):
        neighbourhood = row[i - 1] + row[i] + row[(i + 1) % n]
        assert nxt[i] == TABLE[neighbourhood]
        if neighbourhood == "000":
            assert nxt[i] == "0"


def test_axis_check_rows_and_columns():
    ok = History(rows=(("0", "1"), ("1", "0")))
    assert axis_check(LAWS, ok, "x").ok
    assert axis_check(LAWS, ok, "y").ok

    rows_bad = History(rows=(("0", "0"), ("1", "1")))
    verdict = axis_check(LAWS, rows_bad, "x")
    assert [(v.coordinates, render_symbols(v.gram)) for v in verdict.violations] == [((0, 0), "00")]

    cols_bad = History(rows=(("0", "1"), ("0", "1")))
    verdict = axis_check(LAWS, cols_bad, "y")
    assert [(v.coordinates, render_symbols(v.gram)) for v in verdict.violations] == [((0, 0), "00")]
    assert verdict.violations[0].to_record() == {"position": 0, "gram": "00", "law": "First Law", "row": 0, "column": 0}


def test_axis_check_rejects_bad_axis_and_empty_history():
    with pytest.raises(ValueError):
        axis_check(LAWS, History(rows=(("0",),)), "z")
    with pytest.raises(ValueError):
        axis_check(LAWS, History(rows=()), "x")


def test_history_columns_and_text():
    history = ca_evolve(TABLE, "01", 1)
    assert history.columns() == [("0", "1"), ("1", "0")]
    assert history.to_text() == "01\n10\n"
