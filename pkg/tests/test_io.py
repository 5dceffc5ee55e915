from fractions import Fraction

import numpy as np
import pytest

from ordertypes import io
from ordertypes.errors import CollinearTriple, InvalidInput
from ordertypes.geometry import validate
from ordertypes.lll import PairFunction
from ordertypes.predicates import PredicateTable, phi_encode, psi_encode
from ordertypes.ramsey import PairColoring, PointColoring


def test_points_round_trip(tmp_path):
    P = validate([(0, 0), (Fraction(1, 3), 2), (2, Fraction(-5, 7))])
    text = io.format_points(P, ["hello"])
    assert text.startswith("# hello\n")
    assert "1/3 2" in text
    assert io.parse_points(text) == P
    path = tmp_path / "p.pts"
    io.write_text(text, path)
    assert io.read_points(path) == P


def test_points_parse_errors(tmp_path):
    with pytest.raises(InvalidInput):
        io.parse_points("0 0\n1\n")
    with pytest.raises(InvalidInput):
        io.parse_points("0 zero\n")
    with pytest.raises(CollinearTriple):
        io.parse_points("0 0\n1 1\n2 2\n")
    with pytest.raises(InvalidInput):
        io.read_points(tmp_path / "missing.pts")
    assert io.parse_number("-3/6") == Fraction(-1, 2)
    assert io.format_number(Fraction(4, 2)) == "2"


def test_table_round_trip():
    P = validate([(0, 0), (1, 3), (2, 1), (4, 0)])
    for T in (psi_encode(P), phi_encode(P)):
        text = io.format_table(T)
        assert io.parse_table(text) == T
    assert io.format_table(psi_encode(validate([(0, 1), (1, 0), (2, 0)]))).splitlines()[:3] == [
        "3 2 0 1",
        "1 2 0",
        "1 3 0",
    ]


def test_table_parse_errors():
    with pytest.raises(InvalidInput):
        io.parse_table("")
    with pytest.raises(InvalidInput):
        io.parse_table("2 2 0\n1 2 0\n2 1 0\n")
    with pytest.raises(InvalidInput):
        io.parse_table("2 2 0 1\n1 2 0\n")
    with pytest.raises(InvalidInput):
        io.parse_table("2 2 0 1\n1 1 0\n2 1 0\n")


def test_colorings_round_trip():
    c = PairColoring(4, 3, (0, 1, 2, 2, 1, 0))
    assert io.parse_pair_coloring(io.format_pair_coloring(c)) == c
    pc = PointColoring(3, 2, (1, 0, 1))
    assert io.parse_point_coloring(io.format_point_coloring(pc)) == pc
    with pytest.raises(InvalidInput):
        io.parse_point_coloring("3 2\n1 0\n2 1\n")
    with pytest.raises(InvalidInput):
        io.parse_pair_coloring("3 2\n1 2 0\n")


def test_pair_function_round_trip():
    f = PairFunction(3, 4, np.array([[0, 1, 2], [3, 0, 1], [2, 2, 0]]))
    assert io.parse_pair_function(io.format_pair_function(f)) == f
    with pytest.raises(InvalidInput):
        io.parse_pair_function("2 2\n1 2 0\n1 2 1\n")


def test_write_text_none_is_noop(tmp_path):
    io.write_text("x", None)
    assert list(tmp_path.iterdir()) == []


def test_table_with_string_labels():
    T = PredicateTable.from_values(2, ["a", "b"], {(0, 1): "b", (1, 0): "a"})
    assert io.parse_table(io.format_table(T)) == T
