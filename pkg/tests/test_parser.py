import re

import pytest
from hypothesis import given, settings, strategies as st

from pst2svg import (
    Cartesian, Dimension, NodeRef, Offset, ParseError, PNode, Polar, PsCCurve, PsLine, PsSet,
    parse_dimension, parse_document, parse_point,
)
from pst2svg.parser import DimensionError

from conftest import wrap


def kinds(picture):
    return [type(c).__name__ for c in picture.commands]


def test_source_document_structure(document):
    assert document.unit == Dimension(0.5, "cm")
    assert len(document.pictures) == 3
    for pic in document.pictures:
        assert pic.bbox_lo == (-5, -5) and pic.bbox_hi == (5, 5)
        assert pic.unit == Dimension(0.5, "cm")


def test_picture_two_interleaving(document, source_text):
    pic = document.pictures[1]
    # order as written, one entry per command occurrence in the source
    body = source_text.split("\\begin{pspicture}")[2]
    written = re.findall(r"\\(psline|pnode|psccurve)", body.split("\\end{pspicture}")[0])
    names = {"psline": "PsLine", "pnode": "PNode", "psccurve": "PsCCurve"}
    assert kinds(pic) == [names[w] for w in written]
    assert kinds(pic).count("PsLine") == 5
    assert kinds(pic).count("PNode") == 8
    curve = pic.commands[-1]
    assert isinstance(curve, PsCCurve)
    assert [p.name for p in curve.points] == list("AEBCGDF")


def test_commands_carry_source_lines(document, source_text):
    lines = source_text.split("\n")
    for pic in document.pictures:
        previous = 0
        for cmd in pic.commands:
            assert cmd.line >= previous
            previous = cmd.line
            keyword = {"PsLine": "\\psline", "PsCCurve": "\\psccurve", "PNode": "\\pnode"}[type(cmd).__name__]
            assert keyword in lines[cmd.line - 1]


def test_linewidth_option_kept_raw(document):
    line = document.pictures[0].commands[0]
    assert line.options.entries == (("linewidth", "2pt"),)
    assert line.points == (Cartesian(0, 0), Polar(5, 90))


def test_empty_input():
    with pytest.raises(ParseError, match="missing \\\\begin\\{document\\}") as info:
        parse_document("")
    assert (info.value.line, info.value.column) == (1, 1)


def test_empty_document_defaults_to_one_cm():
    doc = parse_document("\\begin{document}\\end{document}")
    assert doc.pictures == ()
    assert doc.unit == Dimension(1, "cm")


def test_preamble_is_skipped_with_warning():
    doc = parse_document("\\documentclass{article}\n\\usepackage{pstricks}\n"
                         "\\begin{document}\\end{document}")
    assert len(doc.warnings) == 2
    assert "\\documentclass" in doc.warnings[0]


def test_text_after_end_document_is_ignored():
    doc = parse_document("\\begin{document}\\end{document}{} trailing \\foo")
    assert doc.pictures == ()


def test_comments_are_stripped():
    doc = parse_document(wrap("\\begin{pspicture}(-5,-5)(5,5) % \\bogus\n"
                              "\\psline(0,0)(1,1)% (2,2)\n\\end{pspicture}"))
    assert doc.pictures[0].commands[0].points == (Cartesian(0, 0), Cartesian(1, 1))


def test_single_corner_bbox_starts_at_origin():
    doc = parse_document(wrap("\\begin{pspicture}(4,3)\\end{pspicture}"))
    assert doc.pictures[0].bbox_lo == (0, 0)
    assert doc.pictures[0].bbox_hi == (4, 3)


def test_picture_level_psset():
    doc = parse_document(wrap("\\begin{pspicture}(-1,-1)(1,1)\\psset{linewidth=1pt}"
                              "\\psline(0,0)(1,1)\\end{pspicture}"))
    assert isinstance(doc.pictures[0].commands[0], PsSet)


def test_document_psset_applies_to_following_pictures():
    doc = parse_document("\\begin{document}\\begin{pspicture}(1,1)\\end{pspicture}"
                         "\\psset{unit=2mm}\\begin{pspicture}(1,1)\\end{pspicture}\\end{document}")
    assert [p.unit for p in doc.pictures] == [Dimension(1, "cm"), Dimension(2, "mm")]
    assert doc.unit == Dimension(2, "mm")


# --- points ---

@pytest.mark.parametrize("text, expected", [
    ("(6;330)", Polar(6, 330)),
    ("(0,0)", Cartesian(0, 0)),
    ("([nodesep=6,angle=30]V)", Offset(30, 6, "V")),
    ("([angle=30,nodesep=6]V)", Offset(30, 6, "V")),
    ("(H1)", NodeRef("H1")),
    ("( -1.5 , .25 )", Cartesian(-1.5, 0.25)),
    ("(+2.;-90)", Polar(2, -90)),
])
def test_parse_point(text, expected):
    assert parse_point(text) == expected


@pytest.mark.parametrize("text, message", [
    ("(5)", "bare number is not a node name"),
    ("([angle=30]V)", "missing the 'nodesep' key"),
    ("([nodesep=3]V)", "missing the 'angle' key"),
    ("([angle=30,nodesep=3,foo=1]V)", "unexpected key 'foo'"),
    ("([angle=x,nodesep=3]V)", "expected a number"),
    ("(1,a)", "expected a number"),
    ("(1,2", "unclosed"),
    ("(1 2)", "expected ',' or ';'"),
    ("(1e5,2)", "expected ',' or ';'"),
    ("([angle=1,angle=2]V)", "duplicate option key"),
])
def test_parse_point_errors(text, message):
    with pytest.raises(ParseError, match=re.escape(message)):
        parse_point(text)


# --- dimensions ---

@pytest.mark.parametrize("raw, expected", [
    ("0.5cm", Dimension(0.5, "cm")),
    ("2pt", Dimension(2, "pt")),
    ("1in", Dimension(1, "in")),
    (" 3 mm ", Dimension(3, "mm")),
    ("-1cm", Dimension(-1, "cm")),
])
def test_parse_dimension(raw, expected):
    assert parse_dimension(raw) == expected


@pytest.mark.parametrize("raw, message", [
    ("3", "missing unit tag"),
    ("3px", "unknown unit tag"),
    ("cm", "malformed"),
    ("", "malformed"),
])
def test_parse_dimension_errors(raw, message):
    with pytest.raises(DimensionError, match=message):
        parse_dimension(raw)


# --- document errors ---

@pytest.mark.parametrize("body, message, line", [
    ("\\begin{pspicture}(-1,-1)(1,1)\n\\newpage\n\\end{pspicture}", "\\newpage inside pspicture", 4),
    ("\\begin{pspicture}(-1,-1)(1,1)\n\\psline(0,0)", "needs at least 2 points", 4),
    ("\\begin{pspicture}(-1,-1)(1,1)\n\\psccurve(0,0)(1,1)\n\\end{pspicture}", "needs at least 3", 4),
    ("\\begin{pspicture}(-1,-1)(1,1)\n\\psrotate(0,0)\n\\end{pspicture}", "unknown command \\psrotate", 4),
    ("\\begin{pspicture}(-1,-1)(1,1)\n", "\\end{document} while pspicture is open", 5),
    ("\\end{pspicture}", "without matching \\begin", 3),
    ("\\begin{pspicture}(-1,-1)(1,1)\n\\psline[linewidth](0,0)(1,1)", "expected key=value", 4),
    ("\\begin{pspicture}(-1,-1)(1,1)\n\\psline[linewidth=2](0,0)(1,1)", "missing unit tag", 4),
    ("\\begin{pspicture}(1,1)(-1,-1)\\end{pspicture}", "empty pspicture bounding box", 3),
    ("\\begin{pspicture}(-1,-1)(1,1)\\begin{center}\\end{center}\\end{pspicture}", "nested", 3),
    ("\\psline(0,0)(1,1)", "outside a pspicture", 3),
    ("\\rput(0,0){x}", "unknown command \\rput", 3),
    ("hello", "unexpected text", 3),
])
def test_document_errors(body, message, line):
    with pytest.raises(ParseError) as info:
        parse_document(wrap(body))
    assert message in info.value.message
    assert info.value.line == line


def test_missing_end_document():
    with pytest.raises(ParseError, match="missing \\\\end\\{document\\}"):
        parse_document("\\begin{document}\n\\psset{unit=1cm}\n")


def test_unclosed_picture_at_end_of_input():
    with pytest.raises(ParseError, match="pspicture is never closed") as info:
        parse_document("\\begin{document}\n\\begin{pspicture}(1,1)\n\\psline(0,0)(1,1)\n")
    assert info.value.line == 2


def test_newpage_error_position():
    text = wrap("\\begin{pspicture}(-1,-1)(1,1)\n  \\newpage\n\\end{pspicture}")
    with pytest.raises(ParseError) as info:
        parse_document(text)
    assert (info.value.line, info.value.column) == (4, 3)
    assert info.value.snippet == "\\newpage"


def test_lenient_mode_skips_unknown_commands():
    text = wrap("\\rput(0,0){x}\n\\begin{pspicture}(-1,-1)(1,1)\n\\pscircle[fillstyle=solid](0,0){1}\n"
                "\\psline(0,0)(1,1)\nstray\n\\end{pspicture}\n\\begin{center}x\\end{center}")
    doc = parse_document(text, strict=False)
    assert [type(c) for c in doc.pictures[0].commands] == [PsLine]
    assert len(doc.warnings) == 4
    with pytest.raises(ParseError):
        parse_document(text)


def test_lenient_mode_still_rejects_structural_errors():
    with pytest.raises(ParseError):
        parse_document(wrap("\\begin{pspicture}(-1,-1)(1,1)\\newpage\\end{pspicture}"), strict=False)


def test_unknown_option_key_is_a_warning_even_when_strict():
    doc = parse_document(wrap("\\begin{pspicture}(-1,-1)(1,1)\n"
                              "\\psline[linecolor=red,linewidth=1pt](0,0)(1,1)\\end{pspicture}"))
    assert len(doc.warnings) == 1
    assert "linecolor" in doc.warnings[0]
    assert doc.warnings[0].startswith("4:")


def test_parse_is_deterministic(source_text):
    a, b = parse_document(source_text), parse_document(source_text)
    assert a == b
    assert [[c.line for c in p.commands] for p in a.pictures] == \
           [[c.line for c in p.commands] for p in b.pictures]


def _check_error_locality(text, err):
    lines = text.split("\n")
    assert 1 <= err.line <= len(lines)
    line = lines[err.line - 1]
    assert 1 <= err.column <= max(1, len(line) + 1)
    assert err.snippet in line
    if err.snippet:
        assert line[err.column - 1:].startswith(err.snippet)


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_error_locality_under_mutation(source_text, data):
    text = source_text
    for _ in range(data.draw(st.integers(1, 3))):
        i = data.draw(st.integers(0, len(text)))
        if data.draw(st.booleans()) and i < len(text):
            j = data.draw(st.integers(i, min(len(text), i + 8)))
            text = text[:i] + text[j:]
        else:
            text = text[:i] + data.draw(st.sampled_from(list("()[]{},;=\\%5A \n") + ["\\newpage"])) + text[i:]
    try:
        parse_document(text)
    except ParseError as err:
        _check_error_locality(text, err)
