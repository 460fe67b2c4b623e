"""Chain-level matrices in the canonical simplex bases.

Inner products on chains are ``<[s], [s]> = 1 / w(s)``, so with ``B`` the
boundary matrix and ``W_q`` the weight diagonal the adjoint of the boundary
is ``W_{q+1} B^T W_q^{-1}``; all Laplacians below use that convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from gmpy2 import mpq

from .complex import Simplex, SimplicialComplex, SimplicialMap
from .errors import WeightPreservationError
from .linalg import ExactMatrix

Which = Literal["up", "down", "full"]


@lru_cache(maxsize=1024)
def boundary_matrix(K: SimplicialComplex, q: int) -> ExactMatrix:
    """Signed incidence matrix of shape ``n_{q-1} x n_q``; ``q = 0`` gives ``0 x n_0``."""
    if q < 0:
        raise ValueError("q must be non-negative")
    cols = K.n(q)
    if q == 0:
        return ExactMatrix.zeros(0, cols)
    rows = K.n(q - 1)
    data = [[mpq(0)] * cols for _ in range(rows)]
    for j, s in enumerate(K.simplices_of(q)):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            data[K.index(face)][j] = mpq(-1 if i % 2 else 1)
    return ExactMatrix(data, shape=(rows, cols))


@lru_cache(maxsize=1024)
def weight_matrix(K: SimplicialComplex, q: int) -> ExactMatrix:
    return ExactMatrix.diag(K.weights_of(q))


def _inverse_diag(d: ExactMatrix) -> ExactMatrix:
    return ExactMatrix.diag([1 / x for x in d.diagonal()])


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries) increasingly."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class ChainMapMatrix:
    """Matrix of f_q plus, per domain simplex, its target row and sign (``None``/0 if killed)."""

    matrix: ExactMatrix
    targets: tuple[int | None, ...]
    signs: tuple[int, ...]

    @property
    def hit(self) -> tuple[int, ...]:
        """Codomain simplex indices in Im(f_q), ascending."""
        return tuple(sorted({t for t in self.targets if t is not None}))


@lru_cache(maxsize=1024)
def induced_chain_map(f: SimplicialMap, q: int) -> ChainMapMatrix:
    K, L = f.domain, f.codomain
    rows, cols = L.n(q), K.n(q)
    data = [[mpq(0)] * cols for _ in range(rows)]
    targets: list[int | None] = []
    signs: list[int] = []
    for j, s in enumerate(K.simplices_of(q)):
        img = f.image_vertices(s)
        if len(set(img)) < len(img):
            targets.append(None)
            signs.append(0)
            continue
        sign = permutation_sign(img)
        i = L.index(tuple(sorted(img)))
        data[i][j] = mpq(sign)
        targets.append(i)
        signs.append(sign)
    return ChainMapMatrix(ExactMatrix(data, shape=(rows, cols)), tuple(targets), tuple(signs))


@dataclass(frozen=True)
class WeightViolation:
    q: int
    simplex: tuple[str, ...]
    codomain_weight: Fraction
    pushed_weight: Fraction

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "simplex": list(self.simplex),
            "codomain_weight": _fmt(self.codomain_weight),
            "preimage_sum": _fmt(self.pushed_weight),
        }


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class WeightReport:
    dimensions: tuple[int, ...]
    violations: tuple[WeightViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "weight_preserving": self.ok,
            "dimensions": list(self.dimensions),
            "violations": [v.to_json() for v in self.violations],
        }


def check_weight_preserving(f: SimplicialMap, q: int | None = None) -> WeightReport:
    """Compare each hit simplex's weight with the sum over its preimages (exact)."""
    dims = range(f.domain.dim + 1) if q is None else [q]
    violations = []
    for d in dims:
        cm = induced_chain_map(f, d)
        sums: dict[int, Fraction] = {}
        for s, t in zip(f.domain.simplices_of(d), cm.targets):
            if t is not None:
                sums[t] = sums.get(t, Fraction(0)) + f.domain.weights[s]
        for t in sorted(sums):
            tau = f.codomain.simplices_of(d)[t]
            wl = f.codomain.weights[tau]
            if wl != sums[t]:
                violations.append(WeightViolation(d, f.codomain.labels(tau), wl, sums[t]))
    return WeightReport(tuple(dims), tuple(violations))


def require_weight_preserving(f: SimplicialMap, q: int) -> None:
    report = check_weight_preserving(f, q)
    if not report.ok:
        v = report.violations[0]
        raise WeightPreservationError(
            f"map is not weight preserving in dimension {q}: {'-'.join(v.simplex)} "
            f"has weight {_fmt(v.codomain_weight)} but its preimages sum to {_fmt(v.pushed_weight)}; "
            "reweight the codomain with the pushed-forward weights (image_complex) to compute Betti numbers"
        )


@lru_cache(maxsize=1024)
def adjoint_boundary(K: SimplicialComplex, q: int) -> ExactMatrix:
    """Matrix of the adjoint of the q-th boundary, ``C_{q-1} -> C_q``."""
    b = boundary_matrix(K, q)
    return weight_matrix(K, q) @ b.T @ _inverse_diag(weight_matrix(K, q - 1)) if q > 0 else ExactMatrix.zeros(K.n(0), 0)


@lru_cache(maxsize=1024)
def combinatorial_laplacian(K: SimplicialComplex, q: int, which: Which = "full") -> ExactMatrix:
    """Up, down or full combinatorial Laplacian of K in degree q (canonical basis)."""
    n = K.n(q)
    if which == "up":
        if K.n(q + 1) == 0:
            return ExactMatrix.zeros(n, n)
        return boundary_matrix(K, q + 1) @ adjoint_boundary(K, q + 1)
    if which == "down":
        if q == 0 or n == 0:
            return ExactMatrix.zeros(n, n)
        return adjoint_boundary(K, q) @ boundary_matrix(K, q)
    if which == "full":
        return combinatorial_laplacian(K, q, "up") + combinatorial_laplacian(K, q, "down")
    raise ValueError(f"unknown Laplacian part {which!r}")


@dataclass(frozen=True)
class BasisDecomposition:
    """Bases J (of ker(f_q)^perp) and B (of ker f_q) for one degree q.

    ``matrix`` has the J columns first, then the B columns, in the canonical
    basis of C_q(K).  ``hit`` lists the codomain simplices of Im(f_q) in
    canonical order and ``image_weights`` their weights.
    """

    q: int
    hit: tuple[int, ...]
    representatives: tuple[tuple[int, ...], ...]
    killed: tuple[int, ...]
    matrix: ExactMatrix
    image_weights: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.hit)

    @property
    def J(self) -> ExactMatrix:
        return self.matrix[:, : self.n]

    @property
    def B(self) -> ExactMatrix:
        return self.matrix[:, self.n:]

    @property
    def W_image(self) -> ExactMatrix:
        return ExactMatrix.diag(self.image_weights)


@lru_cache(maxsize=1024)
def basis_decomposition(f: SimplicialMap, q: int) -> BasisDecomposition:
    """Build J, B, the change of basis matrix and W_Im(f_q).

    Within each preimage group the lexicographically smallest simplex serves
    as the reference in the difference vectors of B.
    """
    require_weight_preserving(f, q)
    K = f.domain
    nk = K.n(q)
    cm = induced_chain_map(f, q)
    groups: dict[int, list[int]] = {}
    killed = []
    for j, t in enumerate(cm.targets):
        if t is None:
            killed.append(j)
        else:
            groups.setdefault(t, []).append(j)
    hit = tuple(sorted(groups))
    simplices = K.simplices_of(q)
    j_cols, b_cols = [], []
    for t in hit:
        members = groups[t]
        col = [mpq(0)] * nk
        for j in members:
            col[j] = mpq(cm.signs[j]) * mpq(K.weights[simplices[j]])
        j_cols.append(col)
        first = members[0]
        for j in members[1:]:
            col = [mpq(0)] * nk
            col[first] = mpq(cm.signs[first])
            col[j] = mpq(-cm.signs[j])
            b_cols.append(col)
    for j in killed:
        col = [mpq(0)] * nk
        col[j] = mpq(1)
        b_cols.append(col)
    L = f.codomain
    weights = tuple(L.weights[L.simplices_of(q)[t]] for t in hit)
    return BasisDecomposition(
        q=q,
        hit=hit,
        representatives=tuple(tuple(groups[t]) for t in hit),
        killed=tuple(killed),
        matrix=ExactMatrix.from_columns(j_cols + b_cols, nk),
        image_weights=weights,
    )


def weighted_inner(u, v, weights) -> mpq:
    """``<u, v> = sum u_i v_i / w_i``."""
    return sum((mpq(a) * mpq(b) / mpq(w) for a, b, w in zip(u, v, weights)), mpq(0))


def simplex_names(K: SimplicialComplex, q: int, indices=None) -> list[str]:
    level = K.simplices_of(q)
    idx = range(len(level)) if indices is None else indices
    return [K.name(level[i]) for i in idx]


def hit_simplices(f: SimplicialMap, q: int) -> tuple[Simplex, ...]:
    level = f.codomain.simplices_of(q)
    return tuple(level[t] for t in induced_chain_map(f, q).hit)
