from fractions import Fraction

import pytest

from porism import arrfile
from porism.arrfile import ArrangementFile, FormatError, parse, serialize
from porism.poncelet import ValidationFailed


def test_number_round_trip():
    cases = [
        3,
        -7,
        Fraction(1, 20),
        Fraction(-21, 20),
        0.1,
        -2.5e-13,
        1.0,
        complex(1.5, -2.25),
    ]
    for x in cases:
        tok = arrfile.format_number(x)
        back = arrfile.parse_number(tok)
        assert back == x
        assert type(back) in (int, Fraction, float, complex)


def test_file_round_trip_bit_exact():
    af = ArrangementFile(
        conics=(("C1", (Fraction(1, 20), 0, Fraction(21, 20),
                        Fraction(1, 8), 0, -1)),
                ("C2", (1, 0, 1, 0, 0, -1))),
        lines=(("T1", (-0.12, -0.9927738916792685, 1.0)),),
        metadata=(("period", "4"), ("parameter", "1/20")),
    )
    text = serialize(af)
    again = parse(text)
    assert again == af
    assert serialize(again) == text


def test_parse_rejects_malformed():
    with pytest.raises(FormatError):
        parse("conic C1 1 2 3\n")
    with pytest.raises(FormatError):
        parse("frobnicate x 1 2 3\n")
    with pytest.raises(FormatError):
        parse("meta onlykey\n")


def test_comments_and_blank_lines_ignored():
    text = "# hello\n\nmeta period 4   # trailing\nconic C1 1 0 1 0 0 -1\n"
    af = parse(text)
    assert af.meta("period") == "4"
    assert len(af.conics) == 1


def test_pair_file_round_trip(pair4, transverse4):
    af = arrfile.pair_to_file(pair4, transverse=transverse4,
                              origin_q=Fraction(3, 25))
    text = serialize(af)
    again = parse(text)
    assert again == af
    assert again.meta("period") == "4"
    assert again.meta("parameter") == "1/20"
    # conics stored exactly
    named = dict(again.conics)
    assert named["C1"][0] == Fraction(1, 20)
    assert len(again.lines) == 4 + 4  # bitangents + transverse


def test_file_to_pair_revalidates(pair4, transverse4):
    af = arrfile.pair_to_file(pair4, transverse=transverse4)
    pair = arrfile.file_to_pair(af)
    assert pair.period == 4
    assert pair.bitangent_pairing == pair4.bitangent_pairing


def test_file_to_pair_detects_corruption(pair4):
    af = arrfile.pair_to_file(pair4)
    named = dict(af.conics)
    bad = tuple(c + Fraction(1, 10000) if i == 0 else c
                for i, c in enumerate(named["C1"]))
    corrupted = ArrangementFile(
        conics=(("C1", bad), ("C2", named["C2"])),
        lines=af.lines,
        metadata=af.metadata,
    )
    with pytest.raises(ValidationFailed):
        arrfile.file_to_pair(corrupted)


def test_missing_sections_rejected():
    af = ArrangementFile(conics=(("C1", (1, 0, 1, 0, 0, -1)),),
                         metadata=(("period", "4"),))
    with pytest.raises(FormatError):
        arrfile.file_to_pair(af)
    af2 = ArrangementFile(conics=(("C1", (1, 0, 1, 0, 0, -1)),
                                  ("C2", (1, 0, 2, 0, 0, -1))))
    with pytest.raises(FormatError):
        arrfile.file_to_pair(af2)
