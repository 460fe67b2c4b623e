"""Persistent Laplacians of a weight preserving simplicial map f: K -> L.

All matrices are expressed in the canonical basis of Im(f_q), i.e. the
q-simplices of L hit by f (ascending canonical order).  The down part is the
Schur complement of the down Laplacian of K, written in the basis J u B of
C_q(K) and transported to Im(f_q) by the weight diagonal; the up part is the
Schur complement of the up Laplacian of L onto f_q(ker d_q^K), zero-padded to
Im(f_q).  Everything is exact unless ``backend="float"`` is requested.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .chains import basis_decomposition, combinatorial_laplacian, induced_chain_map
from .complex import SimplicialMap
from .errors import InvariantError
from .linalg import (
    ExactMatrix,
    Spectrum,
    block_diag,
    hstack,
    inverse,
    kernel_basis,
    rank,
    schur_complement,
    symmetric_spectrum,
    to_rational,
    weighted_complement_basis,
    zeros_like_shape,
)

Backend = Literal["exact", "float"]
SpectrumKind = Literal["up", "down", "full", "ess-up"]


def _convert(m: ExactMatrix, backend: Backend):
    if backend == "exact":
        return m
    if backend == "float":
        return m.to_float()
    raise ValueError(f"unknown backend {backend!r}")


@dataclass(frozen=True)
class DownPath:
    matrix: object
    N: object
    X: object
    Y: object
    Z: object
    T: object
    weights: tuple
    hit: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.hit)


@dataclass(frozen=True)
class UpPath:
    matrix: object
    R1: object
    R2: object
    Q: object
    E: object
    F: object
    G: object
    H: object
    sch_q: object

    @property
    def n_p(self) -> int:
        return self.R1.shape[1]


def down_persistent_laplacian(f: SimplicialMap, q: int, backend: Backend = "exact",
                              rcond: float | None = None) -> DownPath:
    """Down persistent Laplacian ``W (X - Y T+ Z) W^-1`` with its intermediate blocks."""
    decomp = basis_decomposition(f, q)
    n, nk = decomp.n, f.domain.n(q)
    m = _convert(decomp.matrix, backend)
    lap = _convert(combinatorial_laplacian(f.domain, q, "down"), backend)
    big_n = inverse(m) @ lap @ m if nk else m
    w = _convert(decomp.W_image, backend)
    w_inv = _convert(ExactMatrix.diag([1 / x for x in decomp.image_weights]), backend)
    sch = schur_complement(big_n, nk - n, rcond)
    return DownPath(
        matrix=w @ sch @ w_inv,
        N=big_n,
        X=big_n[:n, :n],
        Y=big_n[:n, n:],
        Z=big_n[n:, :n],
        T=big_n[n:, n:],
        weights=decomp.image_weights,
        hit=decomp.hit,
    )


def up_persistent_laplacian(f: SimplicialMap, q: int, backend: Backend = "exact", rcond: float | None = None,
                            complement=None, down: DownPath | None = None) -> UpPath:
    """Up persistent Laplacian ``R pad(E - F H+ G) R^-1`` with its intermediate blocks.

    ``R1`` spans ker of the down persistent Laplacian, which equals
    f_q(ker d_q^K), so the kernel of the boundary is never formed.  ``R2``
    defaults to the deterministic weighted complement; pass ``complement`` to
    use another basis of the same complement (the result does not change).
    """
    if down is None:
        down = down_persistent_laplacian(f, q, backend, rcond)
    L = f.codomain
    n, nl = down.n, L.n(q)
    weights = down.weights
    r1 = kernel_basis(down.matrix, rcond)
    r2 = weighted_complement_basis(r1, weights, rcond) if complement is None else complement
    if r2.shape != (n, n - r1.shape[1]):
        raise ValueError(f"complement basis has shape {r2.shape}, expected {(n, n - r1.shape[1])}")
    n_p = r1.shape[1]
    r = hstack([r1, r2]) if n else zeros_like_shape(r1, 0, 0)
    # embed R into C_q(L) and extend by the canonical vectors of the simplices missed by f_q
    missed = [i for i in range(nl) if i not in set(down.hit)]
    cols = []
    for j in range(n):
        col = [0] * nl
        for a, i in enumerate(down.hit):
            col[i] = r[a, j]
        cols.append(col)
    for i in missed:
        col = [0] * nl
        col[i] = 1
        cols.append(col)
    if backend == "exact":
        m_l = ExactMatrix.from_columns(cols, nl)
    else:
        m_l = np.array(cols, dtype=float).T.reshape(nl, nl)
    lap = _convert(combinatorial_laplacian(L, q, "up"), backend)
    big_q = inverse(m_l) @ lap @ m_l if nl else m_l
    sch = schur_complement(big_q, nl - n_p, rcond)
    pad = block_diag(sch, zeros_like_shape(sch, n - n_p, n - n_p))
    matrix = r @ pad @ inverse(r) if n else pad
    return UpPath(
        matrix=matrix,
        R1=r1,
        R2=r2,
        Q=big_q,
        E=big_q[:n_p, :n_p],
        F=big_q[:n_p, n_p:],
        G=big_q[n_p:, :n_p],
        H=big_q[n_p:, n_p:],
        sch_q=sch,
    )


def persistent_laplacian(f: SimplicialMap, q: int, backend: Backend = "exact", rcond: float | None = None):
    """Full persistent Laplacian, the sum of the down and up parts."""
    down = down_persistent_laplacian(f, q, backend, rcond)
    up = up_persistent_laplacian(f, q, backend, rcond, down=down)
    return down.matrix + up.matrix


def persistent_betti(f: SimplicialMap, q: int) -> int:
    """Persistent Betti number as the exact nullity of the persistent Laplacian."""
    lap = persistent_laplacian(f, q, "exact")
    return lap.cols - rank(lap)


def essential_up_laplacian(f: SimplicialMap, q: int) -> ExactMatrix:
    """The unpadded Schur block on f_q(ker d_q^K), in the basis R1."""
    return up_persistent_laplacian(f, q).sch_q


# -- spectra ------------------------------------------------------------------


def _inverse_weights(weights) -> ExactMatrix:
    return ExactMatrix.diag([1 / to_rational(w) for w in weights])


def weighted_symmetric_form(a: ExactMatrix, weights) -> ExactMatrix:
    """``W^-1 A``; it is symmetric exactly when A is self-adjoint for ``<e_i, e_i> = 1/w_i``."""
    return _inverse_weights(weights) @ a


def symmetrize(a: ExactMatrix, weights) -> np.ndarray:
    """Float matrix of ``W^-1/2 A W^1/2``, built from the exact symmetric form so it is symmetric bit for bit."""
    form = weighted_symmetric_form(a, weights)
    if not form.is_symmetric():
        raise InvariantError("operator is not self-adjoint for the weighted inner product")
    s = np.sqrt(np.array([float(w) for w in weights], dtype=float))
    return form.to_float() * np.outer(s, s)


def symmetrize_in_basis(a: ExactMatrix, basis: ExactMatrix, weights) -> np.ndarray:
    """Symmetric float matrix similar to ``a``, an operator written in a non-orthogonal ``basis``.

    With Gram matrix ``G = basis^T W^-1 basis = C C^T`` the form ``G a`` is
    symmetric and ``C^-1 (G a) C^-T`` has the eigenvalues of ``a``.
    """
    if a.rows == 0:
        return np.zeros((0, 0))
    gram = basis.T @ _inverse_weights(weights) @ basis
    form = gram @ a
    if not form.is_symmetric():
        raise InvariantError("Schur block is not self-adjoint for the induced inner product")
    c = np.linalg.cholesky(gram.to_float())
    c_inv = np.linalg.inv(c)
    s = c_inv @ form.to_float() @ c_inv.T
    return (s + s.T) / 2.0


def spectrum(f: SimplicialMap, q: int, which: SpectrumKind = "full", tol: float = 1e-9) -> Spectrum:
    """Eigenvalues (ascending) of a persistent Laplacian part, computed after exact construction."""
    down = down_persistent_laplacian(f, q)
    if which == "down":
        return symmetric_spectrum(symmetrize(down.matrix, down.weights), tol)
    up = up_persistent_laplacian(f, q, down=down)
    if which == "up":
        return symmetric_spectrum(symmetrize(up.matrix, down.weights), tol)
    if which == "full":
        return symmetric_spectrum(symmetrize(down.matrix + up.matrix, down.weights), tol)
    if which == "ess-up":
        return symmetric_spectrum(symmetrize_in_basis(up.sch_q, up.R1, down.weights), tol)
    raise ValueError(f"unknown spectrum kind {which!r}")


# -- report -------------------------------------------------------------------


def _matrix_json(m):
    if isinstance(m, ExactMatrix):
        return m.to_json()
    return np.asarray(m, dtype=float).tolist()


@dataclass
class LaplacianReport:
    q: int
    image_simplices: list[str]
    image_weights: tuple
    down: DownPath
    up: UpPath
    spectra: dict[str, Spectrum] = field(default_factory=dict)

    @property
    def full(self):
        return self.down.matrix + self.up.matrix

    @property
    def n(self) -> int:
        return self.down.n

    @property
    def n_p(self) -> int:
        return self.up.n_p

    @property
    def nullity(self) -> int:
        return self.n - rank(self.full)

    def matrix(self, which: str):
        return {"down": self.down.matrix, "up": self.up.matrix, "full": self.full, "ess-up": self.up.sch_q}[which]

    def to_json(self, intermediates: bool = True) -> dict:
        out = {
            "q": self.q,
            "n": self.n,
            "n_p": self.n_p,
            "nullity": self.nullity,
            "basis": self.image_simplices,
            "image_weights": [str(w) for w in self.image_weights],
            "down": _matrix_json(self.down.matrix),
            "up": _matrix_json(self.up.matrix),
            "full": _matrix_json(self.full),
        }
        if intermediates:
            out["intermediates"] = {
                name: _matrix_json(getattr(path, attr))
                for name, path, attr in [
                    ("N", self.down, "N"), ("X", self.down, "X"), ("Y", self.down, "Y"),
                    ("Z", self.down, "Z"), ("T", self.down, "T"), ("R1", self.up, "R1"),
                    ("R2", self.up, "R2"), ("Q", self.up, "Q"), ("E", self.up, "E"),
                    ("F", self.up, "F"), ("G", self.up, "G"), ("H", self.up, "H"),
                    ("SchQ", self.up, "sch_q"),
                ]
            }
        if self.spectra:
            out["spectra"] = {k: v.to_json() for k, v in self.spectra.items()}
        return out


def laplacian_report(f: SimplicialMap, q: int, backend: Backend = "exact", rcond: float | None = None,
                     spectra: bool = False) -> LaplacianReport:
    down = down_persistent_laplacian(f, q, backend, rcond)
    up = up_persistent_laplacian(f, q, backend, rcond, down=down)
    names = [f.codomain.name(f.codomain.simplices_of(q)[t]) for t in down.hit]
    report = LaplacianReport(q, names, down.weights, down, up)
    if spectra:
        if backend != "exact":
            raise ValueError("spectra are computed from the exact matrices")
        report.spectra = {
            "down": symmetric_spectrum(symmetrize(down.matrix, down.weights)),
            "up": symmetric_spectrum(symmetrize(up.matrix, down.weights)),
            "full": symmetric_spectrum(symmetrize(report.full, down.weights)),
            "ess-up": symmetric_spectrum(symmetrize_in_basis(up.sch_q, up.R1, down.weights)),
        }
    return report


def image_dimension(f: SimplicialMap, q: int) -> int:
    return len(induced_chain_map(f, q).hit)
