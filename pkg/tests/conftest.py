from __future__ import annotations

from importlib import resources

import pytest

from ptgsynth.geometry import Polyhedron, Region, Signature
from ptgsynth.parser import parse_constraint, parse_model

FIXTURES = resources.files("ptgsynth") / "fixtures"


def load(name: str):
    return parse_model((FIXTURES / f"{name}.ptg").read_text(encoding="utf-8"))


def poly(text: str, sig: Signature) -> Polyhedron:
    """Parse a single conjunction; ``true`` gives the universe, ``false`` the empty set."""
    r = parse_constraint(text, sig)
    if r.is_empty():
        return Polyhedron.empty(sig)
    assert len(r) == 1, text
    return r.disjuncts[0]


def region(text: str, sig: Signature) -> Region:
    return parse_constraint(text, sig)


@pytest.fixture
def coffee_bounded():
    return load("coffee_bounded")


@pytest.fixture
def coffee_unbounded():
    return load("coffee_unbounded")


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
