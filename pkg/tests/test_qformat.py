"""Rational literal round-tripping for the file formats."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from incilab.qformat import qparse, qstr


def test_qstr_forms():
    assert qstr(Fraction(3, 4)) == "3/4"
    assert qstr(Fraction(5)) == "5"
    assert qstr(Fraction(-7, 2)) == "-7/2"
    assert qstr(Fraction(0)) == "0"
    assert qstr(Fraction(2, -4)) == "-1/2"


def test_qparse_accepts_well_formed():
    assert qparse("3/4") == Fraction(3, 4)
    assert qparse("-7/2") == Fraction(-7, 2)
    assert qparse("0") == 0
    assert qparse("4/2") == 2  # reducible is tolerated on input


@pytest.mark.parametrize(
    "bad",
    ["", "3.5", "+3", " 3", "3 ", "1/0", "1/-2", "03", "3/", "/4", "1e3", "nan", None, 7],
)
def test_qparse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        qparse(bad)


@given(st.fractions())
def test_round_trip(q):
    assert qparse(qstr(q)) == q
