import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from loopplex import LoopTable, builtin, enumerate_loops


@pytest.fixture(scope="session")
def fig1() -> LoopTable:
    return builtin("fig1")


@pytest.fixture(scope="session")
def fig2() -> LoopTable:
    return builtin("fig2")


@pytest.fixture(scope="session")
def small_loops() -> list[LoopTable]:
    """Every loop (normalized table) of order up to 5: 63 in total."""
    out = []
    for n in range(1, 6):
        out.extend(enumerate_loops(n))
    return out


@pytest.fixture(scope="session")
def order5_classes() -> list[LoopTable]:
    return list(enumerate_loops(5, up_to_iso=True))


@pytest.fixture(scope="session")
def group_catalog() -> list[tuple[str, LoopTable]]:
    """All groups of order at most 8, one per isomorphism class."""
    names = [
        "cyclic(1)", "cyclic(2)", "cyclic(3)", "cyclic(4)", "klein4",
        "cyclic(5)", "cyclic(6)", "sym3", "cyclic(7)", "cyclic(8)",
        "abelian(2,4)", "elementary_abelian(2,3)", "dihedral(4)",
        "quaternion8",
    ]
    return [(name, builtin(name)) for name in names]
