import pytest

from lcsq import fixtures


@pytest.mark.parametrize("name", fixtures.SUITES)
def test_every_row_cites_a_source(name):
    rows = fixtures.load(name)
    assert rows
    assert all(r["citation"].strip() for r in rows)


def test_table_sizes():
    assert len(fixtures.load("table1")) == 16
    assert {r["k"] for r in fixtures.load("table2")} == {"2", "3", "4", "5"}


def test_appendix_has_no_unknown_cells():
    for name in ("appendix-n3", "appendix-n5n6n7"):
        for r in fixtures.load(name):
            assert r["z3_count"].isdigit()
            cell = fixtures.parse_cell(r["cell"])
            assert len(cell) == int(r["n"]) and sum(cell) == int(r["total"])


def test_unknown_table():
    with pytest.raises(KeyError):
        fixtures.load("table9")
    with pytest.raises(KeyError):
        fixtures.cite("nothing")
