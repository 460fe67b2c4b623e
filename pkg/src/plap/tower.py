"""Towers of simplicial maps and monotonicity of persistent eigenvalues."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chains import check_weight_preserving, induced_chain_map
from .complex import SimplicialComplex, SimplicialMap, collapse_map, random_complex, random_partition
from .errors import MapError
from .linalg import is_psd_exact
from .persistent import laplacian_report, weighted_symmetric_form

DEFAULT_TOL = 1e-9


def compose(f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """``g o f``.  Weight preservation of the result is not assumed; check it separately."""
    if f.codomain != g.domain:
        raise MapError("cannot compose: codomain of the first map differs from the domain of the second")
    return SimplicialMap(f.domain, g.codomain, {v: g.vertex_map[f.vertex_map[v]] for v in f.domain.vertices})


def is_weight_preserving(f: SimplicialMap) -> bool:
    return check_weight_preserving(f).ok


def is_inclusion(f: SimplicialMap) -> bool:
    """Injective on vertices and weight preserving on every simplex (structural test)."""
    images = list(f.vertex_map.values())
    if len(set(images)) != len(images):
        return False
    return all(f.codomain.weights[f.image(s)] == w for s, w in f.domain.weights.items())


def is_surjective(f: SimplicialMap) -> bool:
    """Every simplex of the codomain is the image of a simplex of the same dimension."""
    return all(
        len(induced_chain_map(f, q).hit) == f.codomain.n(q) for q in range(f.codomain.dim + 1)
    )


@dataclass
class Tower:
    """Complexes K_0..K_m with maps f_i: K_{i-1} -> K_i."""

    maps: list[SimplicialMap]
    wp: list[bool] = field(init=False)

    def __post_init__(self):
        for a, b in zip(self.maps, self.maps[1:]):
            if a.codomain != b.domain:
                raise MapError("consecutive maps do not compose")
        self.wp = [is_weight_preserving(f) for f in self.maps]

    @property
    def complexes(self) -> list[SimplicialComplex]:
        if not self.maps:
            return []
        return [self.maps[0].domain] + [f.codomain for f in self.maps]

    def __len__(self) -> int:
        return len(self.maps)

    def composite(self, i: int, j: int) -> SimplicialMap:
        """K_i -> K_j for i < j."""
        g = self.maps[i]
        for h in self.maps[i + 1:j]:
            g = compose(g, h)
        return g


# -- generators ----------------------------------------------------------------


def random_filtration(seed: int, n_vertices: int = 6, max_dim: int = 2, steps: int = 2,
                      density: float = 0.7) -> Tower:
    """Nested subcomplexes of a random complex, joined by inclusions."""
    rng = random.Random(seed)
    top = random_complex(n_vertices, max_dim, density, seed)
    # entry time of a simplex is at least that of its faces
    times: dict[tuple, float] = {}
    for s in sorted(top.all_simplices(), key=len):
        faces = [s[:i] + s[i + 1:] for i in range(len(s))] if len(s) > 1 else []
        times[s] = max([rng.random()] + [times[t] for t in faces])
    cuts = sorted(rng.random() for _ in range(steps)) + [1.0]
    first = min(times.values())
    levels = []
    for c in cuts:
        keep = [s for s, t in times.items() if t <= max(c, first)]
        levels.append(top.subcomplex(keep))
    maps = [SimplicialMap(a, b, {v: v for v in a.vertices}) for a, b in zip(levels, levels[1:])]
    return Tower(maps)


def random_collapse_tower(seed: int, n_vertices: int = 7, max_dim: int = 2, steps: int = 2,
                          density: float = 0.7) -> Tower:
    """Successive vertex collapses of a random complex; every map and composite is weight preserving."""
    rng = random.Random(seed)
    K = random_complex(n_vertices, max_dim, density, seed)
    maps = []
    for step in range(steps):
        n = len(K.vertices)
        blocks = rng.randint(max(1, n - 2), n) if n > 1 else 1
        f = collapse_map(K, random_partition(K, blocks, rng), seed=rng.randrange(1 << 30))
        maps.append(f)
        K = f.codomain
    return Tower(maps)


def _random_extension(L: SimplicialComplex, rng: random.Random, extra_dims: Sequence[int] = (1, 2)) -> SimplicialComplex:
    """L plus randomly chosen new simplices (with all faces present), L's weights kept."""
    weights = dict(L.weights)
    n = len(L.vertices)
    for k in sorted(extra_dims):
        for s in itertools.combinations(range(n), k + 1):
            if s in weights:
                continue
            if all(t in weights for t in itertools.combinations(s, k)) and rng.random() < 0.6:
                weights[s] = Fraction(rng.randint(1, 4), rng.choice((1, 2)))
    return SimplicialComplex(L.vertices, weights)


def collapse_then_inclusion(seed: int, n_vertices: int = 6, density: float = 0.6) -> Tower:
    """A collapse K -> L followed by an inclusion L -> M that adds edges and triangles.

    Such towers are where padded up eigenvalues can fail to be monotone.
    """
    rng = random.Random(seed)
    K = random_complex(n_vertices, 2, density, seed)
    n = len(K.vertices)
    f = collapse_map(K, random_partition(K, max(1, n - 1), rng))
    M = _random_extension(f.codomain, rng)
    g = SimplicialMap(f.codomain, M, {v: v for v in f.codomain.vertices})
    return Tower([f, g])


# -- monotonicity ---------------------------------------------------------------


@dataclass
class Comparison:
    k: int
    larger: float
    smaller: float
    ok: bool

    def to_json(self) -> dict:
        return {"k": self.k, "lhs": self.larger, "rhs": self.smaller, "ok": self.ok}


@dataclass
class Verdict:
    theorem: str
    status: str  # "pass", "fail" or "skipped: <reason>"
    comparisons: list[Comparison] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "status": self.status, "comparisons": [c.to_json() for c in self.comparisons]}


def _compare(theorem: str, big: Sequence[float], small: Sequence[float], upto: int, tol: float) -> Verdict:
    comps = [Comparison(k + 1, big[k], small[k], big[k] >= small[k] - tol) for k in range(upto)]
    return Verdict(theorem, "pass" if all(c.ok for c in comps) else "fail", comps)


def _merge(theorem: str, *parts: Verdict) -> Verdict:
    comps = [c for p in parts for c in p.comparisons]
    return Verdict(theorem, "fail" if any(p.failed for p in parts) else "pass", comps)


@dataclass
class TripleReport:
    index: int
    q: int
    spectra: dict[str, list[float]]
    verdicts: list[Verdict]
    padded_up_violation: bool

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "q": self.q,
            "spectra": self.spectra,
            "verdicts": [v.to_json() for v in self.verdicts],
            "padded_up_violation": self.padded_up_violation,
        }


@dataclass
class MonotonicityReport:
    q: int
    triples: list[TripleReport]

    @property
    def ok(self) -> bool:
        return not any(v.failed for t in self.triples for v in t.verdicts)

    def verdict(self, theorem: str) -> list[Verdict]:
        return [v for t in self.triples for v in t.verdicts if v.theorem == theorem]

    @property
    def padded_up_violation(self) -> bool:
        return any(t.padded_up_violation for t in self.triples)

    def to_json(self) -> dict:
        return {"q": self.q, "ok": self.ok, "triples": [t.to_json() for t in self.triples]}

    def rows(self) -> list[dict]:
        """Flat rows (one per verdict) for CSV output."""
        out = []
        for t in self.triples:
            for v in t.verdicts:
                out.append({
                    "index": t.index,
                    "q": t.q,
                    "theorem": v.theorem,
                    "status": v.status,
                    "comparisons": len(v.comparisons),
                    "min_gap": min((c.larger - c.smaller for c in v.comparisons), default=""),
                })
        return out


THEOREMS = ("inclusion-up", "down", "ess-up", "surjective-down")


def _triple(f: SimplicialMap, g: SimplicialMap, index: int, q: int, tol: float) -> TripleReport:
    gf = compose(f, g)
    wp = {name: check_weight_preserving(m, q).ok for name, m in (("f", f), ("g", g), ("gf", gf))}
    reports = {}
    for name, m in (("KL", f), ("LM", g), ("KM", gf)):
        if wp[{"KL": "f", "LM": "g", "KM": "gf"}[name]]:
            reports[name] = laplacian_report(m, q, spectra=True)
    spectra = {f"{kind}:{name}": list(r.spectra[kind]) for name, r in reports.items() for kind in ("up", "down", "ess-up")}
    verdicts = []
    missing = [n for n, ok in wp.items() if not ok]
    skip = f"skipped: {', '.join(missing)} not weight preserving" if missing else None

    # inclusions: padded up eigenvalues, k up to n_q^K
    if skip:
        verdicts.append(Verdict("inclusion-up", skip))
    elif not (is_inclusion(f) and is_inclusion(g)):
        verdicts.append(Verdict("inclusion-up", "skipped: maps are not both inclusions"))
    else:
        up = {n: r.spectra["up"] for n, r in reports.items()}
        nk = f.domain.n(q)
        verdicts.append(_merge("inclusion-up", _compare("", up["KM"], up["LM"], nk, tol),
                               _compare("", up["KM"], up["KL"], nk, tol)))

    # down eigenvalues, k up to dim Im((g f)_q)
    if skip:
        verdicts.append(Verdict("down", skip))
    else:
        down = {n: r.spectra["down"] for n, r in reports.items()}
        n = reports["KM"].n
        verdicts.append(_merge("down", _compare("", down["KM"], down["LM"], n, tol),
                               _compare("", down["KM"], down["KL"], n, tol)))

    # essential up eigenvalues, k up to dim g_q f_q(ker d_q^K)
    if skip:
        verdicts.append(Verdict("ess-up", skip))
    else:
        ess = {n: r.spectra["ess-up"] for n, r in reports.items()}
        verdicts.append(_compare("ess-up", ess["KM"], ess["LM"], reports["KM"].n_p, tol))

    # surjective maps: Delta_down^{K,M} - Delta_down^{L,M} is PSD (exact test)
    if skip:
        verdicts.append(Verdict("surjective-down", skip))
    elif not (is_surjective(f) and is_surjective(g)):
        verdicts.append(Verdict("surjective-down", "skipped: maps are not both surjective"))
    else:
        km, lm = reports["KM"], reports["LM"]
        diff = weighted_symmetric_form(km.down.matrix - lm.down.matrix, km.image_weights)
        verdicts.append(Verdict("surjective-down", "pass" if is_psd_exact(diff) else "fail"))

    violation = False
    if not skip:
        up_km, up_lm = reports["KM"].spectra["up"], reports["LM"].spectra["up"]
        n = reports["KM"].n
        violation = any(up_km[k] < up_lm[k] - tol for k in range(n))
    return TripleReport(index, q, spectra, verdicts, violation)


def monotonicity_report(tower: Tower, q: int, tol: float = DEFAULT_TOL) -> MonotonicityReport:
    """Check every applicable monotonicity statement on each adjacent triple K_i -> K_{i+1} -> K_{i+2}."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    triples = [_triple(f, g, i, q, tol) for i, (f, g) in enumerate(zip(tower.maps, tower.maps[1:]))]
    return MonotonicityReport(q, triples)


def find_padded_up_violation(seeds: Sequence[int], q: int = 1, tol: float = DEFAULT_TOL):
    """First generated collapse-then-inclusion tower whose padded up eigenvalues break monotonicity.

    Returns ``(seed, tower, report)`` or ``None``.
    """
    for seed in seeds:
        tower = collapse_then_inclusion(seed)
        report = monotonicity_report(tower, q, tol)
        if report.padded_up_violation:
            return seed, tower, report
    return None


__all__ = [
    "Comparison",
    "MonotonicityReport",
    "THEOREMS",
    "Tower",
    "TripleReport",
    "Verdict",
    "collapse_then_inclusion",
    "compose",
    "find_padded_up_violation",
    "is_inclusion",
    "is_surjective",
    "is_weight_preserving",
    "monotonicity_report",
    "random_collapse_tower",
    "random_filtration",
]
