from __future__ import annotations

import pytest

from plap.fixtures import load_fixture
from plap.linalg import ExactMatrix

# Reference matrices are written in this edge order; the canonical order is lexicographic.
DISPLAY_EDGES_K = ["ab", "bc", "ac", "ad", "bd"]
DISPLAY_EDGES_L = ["xy", "yz", "xz"]


def M(rows) -> ExactMatrix:
    return ExactMatrix(rows)


def permute(m: ExactMatrix, names: list[str], order: list[str], rows=True, cols=True) -> ExactMatrix:
    """Re-express ``m`` (indexed by ``names``) in the basis order ``order``."""
    idx = [names.index(n) for n in order]
    out = m[idx, :] if rows else m
    return out[:, idx] if cols else out


@pytest.fixture(scope="session")
def fix1():
    return load_fixture("fig2-KL")


@pytest.fixture(scope="session")
def fix2():
    return load_fixture("fig3-KpLp")


@pytest.fixture(scope="session")
def fix3():
    return load_fixture("fig5-composition")
