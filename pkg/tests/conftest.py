from pathlib import Path

import pytest

from pst2svg import parse_document, resolve_document

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"
SOURCE_PATH = DATA / "paper.tex"


@pytest.fixture(scope="session")
def source_text():
    return SOURCE_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def document(source_text):
    return parse_document(source_text)


@pytest.fixture(scope="session")
def resolved(document):
    return resolve_document(document)


def picture_source(text, k):
    """Raw text of the k-th (1-based) pspicture environment."""
    start = -1
    for _ in range(k):
        start = text.index("\\begin{pspicture}", start + 1)
    end = text.index("\\end{pspicture}", start) + len("\\end{pspicture}")
    return text[start:end]


def wrap(body, unit="0.5cm"):
    return f"\\begin{{document}}\n\\psset{{unit={unit}}}\n{body}\n\\end{{document}}\n"


# criterion number -> (title, passed); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}")
