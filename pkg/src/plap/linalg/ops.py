"""Backend-dispatching linear algebra.

Every function accepts either an :class:`ExactMatrix` (exact rationals) or a
2-D ``numpy.ndarray`` of floats and returns a result of the same kind.  The
exact backend is authoritative for ranks, kernels and pseudoinverses; the
float backend uses an SVD with a relative singular value threshold.
"""
from __future__ import annotations

from typing import Sequence, Union

import numpy as np
from gmpy2 import mpq

from .exact import ExactMatrix, to_rational

Matrix = Union[ExactMatrix, np.ndarray]


def _is_exact(a) -> bool:
    return isinstance(a, ExactMatrix)


def _as_float(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-D array")
    return a


def default_rcond(shape: tuple[int, int]) -> float:
    return max(shape) * np.finfo(float).eps


def _svd_rank(s: np.ndarray, shape: tuple[int, int], rcond: float | None) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    rc = default_rcond(shape) if rcond is None else rcond
    return int(np.sum(s > rc * s[0]))


def zeros_like_shape(a: Matrix, rows: int, cols: int) -> Matrix:
    return ExactMatrix.zeros(rows, cols) if _is_exact(a) else np.zeros((rows, cols))


def identity_like(a: Matrix, n: int) -> Matrix:
    return ExactMatrix.identity(n) if _is_exact(a) else np.eye(n)


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    if _is_exact(blocks[0]):
        return ExactMatrix.hstack(blocks)
    return np.hstack(blocks)


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    if _is_exact(blocks[0]):
        return ExactMatrix.vstack(blocks)
    return np.vstack(blocks)


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    if _is_exact(a):
        return ExactMatrix.block_diag(a, b)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]))
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def inverse(a: Matrix) -> Matrix:
    if _is_exact(a):
        return a.inverse()
    return np.linalg.inv(_as_float(a))


def rank(a: Matrix, rcond: float | None = None) -> int:
    """Exact rank (row reduction) or SVD-threshold rank for floats."""
    if _is_exact(a):
        return len(a.rref()[1])
    a = _as_float(a)
    if a.size == 0:
        return 0
    return _svd_rank(np.linalg.svd(a, compute_uv=False), a.shape, rcond)


def kernel_basis(a: Matrix, rcond: float | None = None) -> Matrix:
    """Columns spanning ``ker(a)``.

    The exact basis is read off the reduced row echelon form: one column per
    free variable, with a 1 in that variable's slot.  The float basis is the
    trailing right singular vectors and is orthonormal.
    """
    if _is_exact(a):
        red, pivots = a.rref()
        n = a.cols
        free = [j for j in range(n) if j not in set(pivots)]
        cols = []
        for f in free:
            v = [mpq(0)] * n
            v[f] = mpq(1)
            for r, p in enumerate(pivots):
                v[p] = -red[r, f]
            cols.append(v)
        return ExactMatrix.from_columns(cols, n)
    a = _as_float(a)
    n = a.shape[1]
    if a.shape[0] == 0 or a.size == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(a)
    r = _svd_rank(s, a.shape, rcond)
    return vt[r:].T.copy()


def pseudoinverse(a: Matrix, rcond: float | None = None) -> Matrix:
    """Moore-Penrose pseudoinverse.

    Exact backend: full-rank factorisation ``A = F G`` with ``F`` the pivot
    columns of ``A`` and ``G`` the nonzero rows of its RREF, then
    ``A+ = G^T (G G^T)^-1 (F^T F)^-1 F^T``.
    """
    if _is_exact(a):
        red, pivots = a.rref()
        r = len(pivots)
        if r == 0:
            return ExactMatrix.zeros(a.cols, a.rows)
        f = a[:, pivots]
        g = red[:r, :]
        return g.T @ (g @ g.T).inverse() @ (f.T @ f).inverse() @ f.T
    a = _as_float(a)
    m, n = a.shape
    if a.size == 0:
        return np.zeros((n, m))
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    r = _svd_rank(s, a.shape, rcond)
    return (vt[:r].T / s[:r]) @ u[:, :r].T


def schur_complement(m: Matrix, d: int, rcond: float | None = None) -> Matrix:
    """Generalised Schur complement ``A - B D+ C`` of the trailing ``d x d`` block.

    For floats the rank cut-off of ``D+`` is relative to ``||M||_2``.
    """
    n = m.shape[0]
    if m.shape[0] != m.shape[1]:
        raise ValueError("Schur complement of a non-square matrix")
    if not 0 <= d <= n:
        raise ValueError(f"trailing block size {d} outside [0, {n}]")
    k = n - d
    a = m[:k, :k]
    if d == 0:
        return a
    b, c, dd = m[:k, k:], m[k:, :k], m[k:, k:]
    if _is_exact(m):
        return a - b @ pseudoinverse(dd) @ c
    # threshold against the whole matrix so a numerically zero D is not inverted
    m = _as_float(m)
    u, s, vt = np.linalg.svd(dd, full_matrices=False)
    ref = np.linalg.norm(m, 2)
    rc = default_rcond(m.shape) if rcond is None else rcond
    r = int(np.sum(s > rc * ref)) if ref > 0 else 0
    return a - b @ ((vt[:r].T / s[:r]) @ u[:, :r].T) @ c


def _weights_exact(weights) -> list[mpq]:
    if isinstance(weights, ExactMatrix):
        weights = weights.diagonal()
    w = [to_rational(x) for x in weights]
    if any(x <= 0 for x in w):
        raise ValueError("weights must be positive")
    return w


def weighted_gram_schmidt(vectors: Sequence[Sequence], weights: Sequence) -> tuple[list[list[mpq]], list[int]]:
    """Exact unnormalised Gram-Schmidt under ``<e_i, e_j> = delta_ij / w_i``.

    Returns the orthogonal vectors that survived and the indices of the input
    vectors they came from (vectors dependent on earlier ones are dropped).
    """
    inv_w = [1 / x for x in weights]
    basis: list[list[mpq]] = []
    norms: list[mpq] = []
    kept: list[int] = []
    for idx, vec in enumerate(vectors):
        v = [to_rational(x) for x in vec]
        for b, nb in zip(basis, norms):
            coeff = sum((x * y * iw for x, y, iw in zip(v, b, inv_w)), mpq(0)) / nb
            if coeff:
                v = [x - coeff * y for x, y in zip(v, b)]
        nv = sum((x * x * iw for x, iw in zip(v, inv_w)), mpq(0))
        if nv:
            basis.append(v)
            norms.append(nv)
            kept.append(idx)
    return basis, kept


def weighted_complement_basis(v: Matrix, weights, rcond: float | None = None) -> Matrix:
    """Columns spanning the weighted orthogonal complement of ``span(v)``.

    ``weights`` is the diagonal ``w`` of the inner product
    ``<e_i, e_j> = delta_ij / w_i``.  The exact result is deterministic:
    Gram-Schmidt of ``v``'s columns followed by the canonical basis vectors,
    keeping the nonzero residuals of the latter.  Raises ``ValueError`` when
    the columns of ``v`` are dependent.
    """
    if _is_exact(v):
        n = v.rows
        w = _weights_exact(weights)
        if len(w) != n:
            raise ValueError("weights do not match the ambient dimension")
        given = v.columns()
        canon = [[mpq(int(i == j)) for i in range(n)] for j in range(n)]
        basis, kept = weighted_gram_schmidt(given + canon, w)
        if kept[: len(given)] != list(range(len(given))):
            raise ValueError("columns of V are linearly dependent")
        return ExactMatrix.from_columns(basis[len(given):], n)
    v = _as_float(v)
    n = v.shape[0]
    w = np.asarray([float(x) for x in (weights.diagonal() if _is_exact(weights) else weights)])
    if v.shape[1] and rank(v, rcond) < v.shape[1]:
        raise ValueError("columns of V are linearly dependent")
    if v.shape[1] == 0:
        return np.eye(n)
    return kernel_basis((v / w[:, None]).T, rcond)


def is_psd_exact(s: ExactMatrix) -> bool:
    """Exact positive semidefiniteness test for a symmetric rational matrix.

    Symmetric elimination: a negative pivot, or a zero pivot with a nonzero
    row, certifies indefiniteness.
    """
    if not s.is_symmetric():
        raise ValueError("PSD test needs a symmetric matrix")
    m = [list(r) for r in s._data]
    n = s.rows
    active = list(range(n))
    while active:
        k = max(active, key=lambda i: m[i][i])
        if m[k][k] < 0:
            return False
        if m[k][k] == 0:
            return all(m[i][j] == 0 for i in active for j in active)
        active.remove(k)
        piv = m[k][k]
        for i in active:
            if m[i][k]:
                f = m[i][k] / piv
                for j in active:
                    m[i][j] -= f * m[k][j]
    return True


def is_psd_float(s: np.ndarray, tol: float = 1e-9) -> bool:
    s = _as_float(s)
    if s.size == 0:
        return True
    return float(np.linalg.eigvalsh((s + s.T) / 2).min()) >= -tol


def same_column_space(a: ExactMatrix, b: ExactMatrix) -> bool:
    """Exact subspace equality via ranks of the augmented matrix."""
    if a.rows != b.rows:
        return False
    ra, rb = rank(a), rank(b)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(ExactMatrix.hstack([a, b])) == ra
