"""Weighted simplicial complexes and simplicial maps.

Vertices are string labels; their position in ``SimplicialComplex.vertices``
is the total order that orients every simplex.  A simplex is a strictly
increasing tuple of vertex indices, and within each dimension simplices are
kept in lexicographic order, which fixes the canonical ordered basis of each
chain group.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import MapError, ParseError, ValidationError

Simplex = tuple[int, ...]


def parse_weight(value) -> Fraction:
    """Weights are JSON numbers (floats taken at their exact binary value) or ``"p/q"`` strings."""
    if isinstance(value, bool):
        raise ParseError(f"weight must be a number or a 'p/q' string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad weight {value!r}") from exc
    raise ParseError(f"weight must be a number or a 'p/q' string, got {value!r}")


def format_weight(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


class SimplicialComplex:
    """Face-closed, positively weighted simplicial complex on ordered vertices."""

    __slots__ = ("vertices", "simplices", "weights", "_index", "_vindex", "_hash")

    def __init__(self, vertices: Sequence[str], weights: Mapping[Simplex, Fraction]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("duplicate vertex labels")
        if not self.vertices:
            raise ValidationError("a simplicial complex needs at least one vertex")
        nv = len(self.vertices)
        by_dim: dict[int, list[Simplex]] = {}
        clean: dict[Simplex, Fraction] = {}
        for s, w in weights.items():
            s = tuple(s)
            if not s:
                raise ValidationError("empty simplex")
            if any(not 0 <= v < nv for v in s):
                raise ValidationError(f"simplex {s} refers to an unknown vertex")
            if any(b <= a for a, b in zip(s, s[1:])):
                raise ValidationError(f"simplex {s} is not strictly increasing")
            w = Fraction(w)
            if w <= 0:
                raise ValidationError(f"simplex {self._labels(s)} has non-positive weight {w}")
            clean[s] = w
            by_dim.setdefault(len(s) - 1, []).append(s)
        for s in clean:
            for k in range(1, len(s)):
                for face in itertools.combinations(s, k):
                    if face not in clean:
                        raise ValidationError(
                            f"not face-closed: {self._labels(face)} is a face of {self._labels(s)} but is not listed"
                        )
        for v in range(nv):
            if (v,) not in clean:
                raise ValidationError(f"vertex {self.vertices[v]!r} has no 0-simplex entry")
        top = max(by_dim) if by_dim else 0
        self.simplices: tuple[tuple[Simplex, ...], ...] = tuple(
            tuple(sorted(by_dim.get(q, ()))) for q in range(top + 1)
        )
        self.weights: dict[Simplex, Fraction] = clean
        self._index = tuple({s: i for i, s in enumerate(level)} for level in self.simplices)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._hash = None

    def _labels(self, s: Iterable[int]) -> str:
        return "".join(self.vertices[v] for v in s) if all(len(self.vertices[v]) == 1 for v in s) else "-".join(
            self.vertices[v] for v in s
        )

    @classmethod
    def from_labels(cls, vertices: Sequence[str], simplices: Mapping[Sequence[str] | str, object]) -> SimplicialComplex:
        """Build from label tuples, e.g. ``{("a",): 1, ("a", "b"): "3/2"}``.

        A string key is split into single-character labels (``"ab"`` is the
        edge ``a``-``b``); vertex order inside a key is irrelevant.
        """
        index = {v: i for i, v in enumerate(vertices)}
        weights: dict[Simplex, Fraction] = {}
        for labels, w in simplices.items():
            labels = tuple(labels)
            try:
                s = tuple(sorted(index[v] for v in labels))
            except KeyError as exc:
                raise ValidationError(f"simplex {labels} uses unknown vertex {exc.args[0]!r}") from None
            if len(set(s)) != len(s):
                raise ValidationError(f"simplex {labels} repeats a vertex")
            if s in weights:
                raise ValidationError(f"simplex {labels} listed twice")
            weights[s] = parse_weight(w) if not isinstance(w, Fraction) else w
        return cls(vertices, weights)

    # -- queries ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def n(self, q: int) -> int:
        """Number of q-simplices (0 outside the range of dimensions)."""
        return len(self.simplices[q]) if 0 <= q < len(self.simplices) else 0

    def simplices_of(self, q: int) -> tuple[Simplex, ...]:
        return self.simplices[q] if 0 <= q < len(self.simplices) else ()

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][s]

    def vertex_index(self, label: str) -> int:
        return self._vindex[label]

    def __contains__(self, s) -> bool:
        return tuple(s) in self.weights

    def weight(self, s: Simplex) -> Fraction:
        return self.weights[s]

    def weights_of(self, q: int) -> list[Fraction]:
        return [self.weights[s] for s in self.simplices_of(q)]

    def labels(self, s: Simplex) -> tuple[str, ...]:
        return tuple(self.vertices[v] for v in s)

    def name(self, s: Simplex) -> str:
        return self._labels(s)

    def all_simplices(self) -> Iterable[Simplex]:
        for level in self.simplices:
            yield from level

    def _key(self):
        return (self.vertices, tuple(sorted(self.weights.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        counts = ", ".join(f"n{q}={len(level)}" for q, level in enumerate(self.simplices))
        return f"SimplicialComplex(vertices={list(self.vertices)}, {counts})"

    # -- derived complexes -----------------------------------------------

    def subcomplex(self, keep: Iterable[Simplex]) -> SimplicialComplex:
        """The subcomplex spanned by ``keep`` and all their faces, weights inherited."""
        chosen: set[Simplex] = set()
        for s in keep:
            for k in range(1, len(s) + 1):
                chosen.update(itertools.combinations(s, k))
        used = sorted({v for s in chosen for v in s})
        relabel = {old: new for new, old in enumerate(used)}
        weights = {tuple(relabel[v] for v in s): self.weights[s] for s in chosen}
        return SimplicialComplex([self.vertices[v] for v in used], weights)

    def reweighted(self, weights: Mapping[Simplex, Fraction]) -> SimplicialComplex:
        new = dict(self.weights)
        new.update(weights)
        return SimplicialComplex(self.vertices, new)


# -- serialization ----------------------------------------------------------


def complex_to_dict(K: SimplicialComplex) -> dict:
    return {
        "vertices": list(K.vertices),
        "simplices": [
            {"verts": list(K.labels(s)), "weight": format_weight(K.weights[s])} for s in K.all_simplices()
        ],
    }


def serialize_complex(K: SimplicialComplex) -> str:
    return json.dumps(complex_to_dict(K))


def complex_from_dict(obj) -> SimplicialComplex:
    if not isinstance(obj, dict):
        raise ParseError("complex file must hold a JSON object")
    try:
        vertices = obj["vertices"]
        entries = obj["simplices"]
    except KeyError as exc:
        raise ParseError(f"complex file is missing the {exc.args[0]!r} field") from None
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise ParseError("'vertices' must be a list of strings")
    if not isinstance(entries, list):
        raise ParseError("'simplices' must be a list")
    known = set(vertices)
    simplices: dict[tuple[str, ...], Fraction] = {}
    for entry in entries:
        if not isinstance(entry, dict) or "verts" not in entry or "weight" not in entry:
            raise ParseError(f"simplex entry {entry!r} needs 'verts' and 'weight'")
        verts = entry["verts"]
        if not isinstance(verts, list) or not verts or not all(isinstance(v, str) for v in verts):
            raise ParseError(f"'verts' must be a non-empty list of labels, got {verts!r}")
        for v in verts:
            if v not in known:
                raise ValidationError(f"simplex {verts} uses unknown vertex {v!r}")
        simplices[tuple(verts)] = parse_weight(entry["weight"])
    return SimplicialComplex.from_labels(vertices, simplices)


def parse_complex(text: str) -> SimplicialComplex:
    """Parse and validate a complex file (see README for the format)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return complex_from_dict(obj)


# -- simplicial maps ----------------------------------------------------------


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map between two complexes; see :func:`validate_map`."""

    domain: SimplicialComplex
    codomain: SimplicialComplex
    vertex_map: Mapping[str, str]
    _images: tuple = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", dict(self.vertex_map))
        missing = [v for v in self.domain.vertices if v not in self.vertex_map]
        if missing:
            raise MapError(f"vertex map is not total: no image for {missing}")
        bad = [v for v in self.vertex_map.values() if v not in self.codomain._vindex]
        if bad:
            raise MapError(f"vertex map targets unknown codomain vertices {sorted(set(bad))}")
        idx = tuple(self.codomain.vertex_index(self.vertex_map[v]) for v in self.domain.vertices)
        object.__setattr__(self, "_images", idx)

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, tuple(sorted(self.vertex_map.items()))))

    def vertex_image(self, v: int) -> int:
        return self._images[v]

    def image_vertices(self, s: Simplex) -> tuple[int, ...]:
        """Images of the vertices of ``s`` in order, possibly with repeats."""
        return tuple(self._images[v] for v in s)

    def image(self, s: Simplex) -> Simplex:
        """The image simplex f(s) as a sorted vertex set."""
        return tuple(sorted(set(self.image_vertices(s))))


def validate_map(f: SimplicialMap) -> None:
    """Raise :class:`MapError` naming the first simplex whose image is not in the codomain."""
    for s in f.domain.all_simplices():
        t = f.image(s)
        if t not in f.codomain:
            raise MapError(
                f"simplex {f.domain.name(s)} maps to {{{', '.join(f.codomain.labels(t))}}}, "
                "which is not a simplex of the codomain"
            )


def identity_map(K: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(K, K, {v: v for v in K.vertices})


def image_complex(f: SimplicialMap) -> tuple[SimplicialComplex, SimplicialMap]:
    """Im(f) with pushed-forward weights, and f corestricted onto it.

    A simplex of Im(f) of dimension q weighs the sum of the weights of its
    q-dimensional preimages; the corestriction is therefore weight preserving.
    """
    validate_map(f)
    L = f.codomain
    pushed: dict[Simplex, Fraction] = {}
    for s in f.domain.all_simplices():
        t = f.image(s)
        if len(t) == len(s):
            pushed[t] = pushed.get(t, Fraction(0)) + f.domain.weights[s]
    used = sorted({v for t in pushed for v in t})
    relabel = {old: new for new, old in enumerate(used)}
    im = SimplicialComplex([L.vertices[v] for v in used], {tuple(relabel[v] for v in t): w for t, w in pushed.items()})
    return im, SimplicialMap(f.domain, im, dict(f.vertex_map))


def collapse_map(K: SimplicialComplex, partition: Sequence[Sequence[str]], seed: int | None = None,
                 labels: Sequence[str] | None = None) -> SimplicialMap:
    """Collapse each block of ``partition`` to one vertex.

    The codomain is the image complex with pushed-forward weights, so the
    result is weight preserving in every dimension.  Blocks are labelled by
    ``labels`` or by joining their members with ``+``.  Without a seed the new
    vertices are ordered by their first member's position in K; with a seed
    the order is a random permutation, which exercises orientation signs.
    """
    blocks = [list(b) for b in partition]
    members = [v for b in blocks for v in b]
    if sorted(members) != sorted(K.vertices) or len(set(members)) != len(members):
        raise ValidationError("partition must cover every vertex exactly once")
    pos = {v: i for i, v in enumerate(K.vertices)}
    blocks = [sorted(b, key=pos.__getitem__) for b in blocks]
    if labels is None:
        names = ["+".join(b) for b in blocks]
    else:
        names = list(labels)
        if len(names) != len(blocks) or len(set(names)) != len(names):
            raise ValidationError("need one distinct label per block")
    order = sorted(range(len(blocks)), key=lambda i: pos[blocks[i][0]])
    if seed is not None:
        random.Random(seed).shuffle(order)
    vmap = {v: names[i] for i, b in enumerate(blocks) for v in b}
    ordered = [names[i] for i in order]
    vidx = {name: i for i, name in enumerate(ordered)}
    # every image simplex has a preimage of its own dimension (pick one vertex
    # per block), so pushing same-dimension preimages covers all of Im(f)
    pushed: dict[Simplex, Fraction] = {}
    for s in K.all_simplices():
        t = tuple(sorted({vidx[vmap[K.vertices[v]]] for v in s}))
        if len(t) == len(s):
            pushed[t] = pushed.get(t, Fraction(0)) + K.weights[s]
    L = SimplicialComplex(ordered, pushed)
    return SimplicialMap(K, L, vmap)


def random_partition(K: SimplicialComplex, n_blocks: int, rng: random.Random) -> list[list[str]]:
    """Random surjective assignment of K's vertices to ``n_blocks`` nonempty blocks."""
    verts = list(K.vertices)
    n_blocks = max(1, min(n_blocks, len(verts)))
    rng.shuffle(verts)
    blocks = [[v] for v in verts[:n_blocks]]
    for v in verts[n_blocks:]:
        blocks[rng.randrange(n_blocks)].append(v)
    return blocks


def _random_weight(rng: random.Random, weight_range: tuple[int, int], denominators: Sequence[int]) -> Fraction:
    lo, hi = weight_range
    den = rng.choice(denominators)
    return Fraction(rng.randint(max(1, lo * den), hi * den), den)


def random_complex(n_vertices: int, max_dim: int, density: float, seed: int,
                   weight_range: tuple[int, int] = (1, 3), denominators: Sequence[int] = (1, 2, 3),
                   labels: Sequence[str] | None = None) -> SimplicialComplex:
    """Random face-closed complex, deterministic per seed.

    Each edge is present with probability ``density``; each higher simplex
    whose facets are all present is added with the same probability, up to
    ``max_dim``.  Weights are random rationals with numerators/denominators
    drawn so that values lie in ``weight_range``.
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = random.Random(seed)
    if labels is None:
        labels = [f"v{i}" for i in range(n_vertices)]
    present: set[Simplex] = {(i,) for i in range(n_vertices)}
    for k in range(1, max_dim + 1):
        for s in itertools.combinations(range(n_vertices), k + 1):
            if all(face in present for face in itertools.combinations(s, k)) and rng.random() < density:
                present.add(s)
    weights = {s: _random_weight(rng, weight_range, denominators) for s in sorted(present)}
    return SimplicialComplex(list(labels), weights)


def random_collapse(seed: int, max_vertices: int = 8, max_dim: int = 3) -> SimplicialMap:
    """A random complex collapsed along a random partition (weight preserving by construction)."""
    rng = random.Random(seed)
    n = rng.randint(2, max_vertices)
    K = random_complex(n, max_dim, rng.uniform(0.3, 0.9), seed)
    return collapse_map(K, random_partition(K, rng.randint(1, n), rng), seed=rng.randrange(1 << 30))
