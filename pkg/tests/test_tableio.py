import numpy as np
import pytest

from krawpoly.errors import InputError
from krawpoly.tableio import Table, TableRow, format_float


def sample_table(family="P"):
    deg = (lambda a, b: (a, b)) if family != "W" else (lambda a, b: None)
    rows = [
        TableRow(deg(0, 0), (0, 0), 1.0, "raising"),
        TableRow(deg(1, 0), (0, 1), -0.1 + 0.2, "raising"),
        TableRow(deg(0, 1), (1, 0), 1 / 3, "oracle"),
    ]
    return Table(family, 2, 1, np.eye(3) * 0.1 + np.eye(3) * 0.9, "0.1.0", rows, ["a note"])


def test_format_float_roundtrip():
    for x in (0.1 + 0.2, 1 / 3, -1e-300, 12345.678):
        assert float(format_float(x)) == x


@pytest.mark.parametrize("family", ["P", "W"])
def test_csv_roundtrip(family):
    t = sample_table(family)
    text = t.to_csv()
    back = Table.from_csv(text)
    assert back.rows == t.rows
    assert back.notes == t.notes
    assert np.array_equal(back.rotation, t.rotation)
    assert back.to_csv() == text
    header = [line for line in text.splitlines() if not line.startswith("#")][0]
    assert header == ",".join(t.columns())


def test_json_roundtrip_with_nan():
    t = sample_table()
    t.rows.append(TableRow((1, 0), (1, 0), float("nan"), "oracle"))
    text = t.to_json()
    assert "NaN" not in text
    back = Table.from_json(text)
    assert back.rows[:3] == t.rows[:3]
    assert np.isnan(back.rows[3].value)
    assert back.to_json() == text


def test_bad_csv():
    with pytest.raises(InputError):
        Table.from_csv("m1,i1\n")
    text = sample_table().to_csv().replace("m1,m2", "a,b")
    with pytest.raises(InputError):
        Table.from_csv(text)
