"""Reading complex and map files, including the built-in fixtures."""
from __future__ import annotations

import json
from pathlib import Path

from .complex import SimplicialComplex, SimplicialMap, parse_complex, validate_map
from .errors import ParseError, ValidationError
from .fixtures import fixture_dir

FIXTURE_PREFIX = "fixture:"


def resolve(ref: str, default_file: str = "map.json") -> Path:
    """A filesystem path, or ``fixture:NAME[/FILE]`` for a shipped fixture (``.json`` optional)."""
    if ref.startswith(FIXTURE_PREFIX):
        name, _, rest = ref[len(FIXTURE_PREFIX):].partition("/")
        base = fixture_dir(name)
        fname = rest or default_file
        if not fname.endswith(".json"):
            fname += ".json"
        path = base / fname
        if not path.is_file():
            raise ValidationError(f"fixture {name!r} has no file {fname!r}")
        return path
    return Path(ref)


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except FileNotFoundError:
        raise ValidationError(f"file not found: {path}") from None
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def load_complex(ref: str | Path) -> SimplicialComplex:
    path = resolve(ref, "K.json") if isinstance(ref, str) else ref
    try:
        return parse_complex(_read(path))
    except (ParseError, ValidationError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def load_map(ref: str | Path, validate: bool = True) -> SimplicialMap:
    """Load a map file; its domain and codomain paths are relative to the map file."""
    path = resolve(ref) if isinstance(ref, str) else ref
    try:
        obj = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: map file must hold a JSON object")
    for key in ("domain", "codomain", "vertex_map"):
        if key not in obj:
            raise ParseError(f"{path}: map file is missing the {key!r} field")
    vmap = obj["vertex_map"]
    if not isinstance(vmap, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in vmap.items()):
        raise ParseError(f"{path}: 'vertex_map' must map labels to labels")
    domain = load_complex(path.parent / obj["domain"])
    codomain = load_complex(path.parent / obj["codomain"])
    f = SimplicialMap(domain, codomain, vmap)
    if validate:
        validate_map(f)
    return f
