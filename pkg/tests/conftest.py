from __future__ import annotations

from pathlib import Path

import pytest

from invcheck.frontend import parse_program

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

FOO_INVARIANTS = (
    "orig(r) == 0 ==> return == 0",
    "return == 0 ==> orig(r) == 0",
    "return >= orig(r)",
)


def load(name: str):
    return parse_program((CORPUS / f"{name}.mc").read_text())


@pytest.fixture(scope="session")
def foo():
    return load("foo")


@pytest.fixture(scope="session")
def ident():
    return load("id")
