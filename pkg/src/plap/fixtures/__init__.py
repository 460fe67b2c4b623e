"""Small worked examples shipped with the package.

``fig2-KL``
    A four-vertex graph K mapped onto a filled triangle L (d and b both go to y).
``fig3-KpLp``
    The same map into the hollow triangle.
``fig5-composition``
    Two weight preserving maps f: K -> L, g: L -> M whose composite gf is not.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..errors import ValidationError

FIXTURES = ("fig2-KL", "fig3-KpLp", "fig5-composition")


def list_fixtures() -> list[str]:
    return list(FIXTURES)


def fixture_dir(name: str) -> Path:
    if name not in FIXTURES:
        raise ValidationError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return Path(str(resources.files(__name__).joinpath(name)))


def fixture_files(name: str) -> list[str]:
    return sorted(p.stem for p in fixture_dir(name).glob("*.json"))


def load_fixture(name: str) -> dict:
    """All complexes and maps of a fixture, keyed by file stem (e.g. ``K``, ``L``, ``map``)."""
    from ..io import load_complex, load_map

    out = {}
    for path in sorted(fixture_dir(name).glob("*.json")):
        text = path.read_text()
        out[path.stem] = load_map(path) if '"vertex_map"' in text else load_complex(path)
    return out
