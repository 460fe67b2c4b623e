"""Brute-force cross-checks, written against raw boundary and chain-map matrices.

Nothing here touches the J/B basis, the kernel of the down persistent
Laplacian or the padded Schur blocks used in :mod:`plap.persistent`, so
agreement between the two is independent evidence.
"""
from __future__ import annotations

from dataclasses import dataclass

from .chains import boundary_matrix, induced_chain_map
from .complex import SimplicialComplex, SimplicialMap
from .linalg import ExactMatrix, kernel_basis, rank, to_rational


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of Q^ambient given by independent columns."""

    ambient: int
    matrix: ExactMatrix

    def __post_init__(self):
        if self.matrix.rows != self.ambient:
            raise ValueError(f"basis has {self.matrix.rows} rows, ambient dimension is {self.ambient}")
        if rank(self.matrix) != self.matrix.cols:
            raise ValueError("basis columns are dependent")

    @classmethod
    def span(cls, m: ExactMatrix) -> SubspaceBasis:
        """Independent columns of ``m`` (its pivot columns) spanning the same space."""
        pivots = m.rref()[1] if m.cols else []
        return cls(m.rows, m[:, list(pivots)])

    @property
    def dim(self) -> int:
        return self.matrix.cols

    def __add__(self, other: SubspaceBasis) -> SubspaceBasis:
        return SubspaceBasis.span(ExactMatrix.hstack([self.matrix, other.matrix]))

    def intersection_dim(self, other: SubspaceBasis) -> int:
        return self.dim + other.dim - (self + other).dim

    def same_as(self, other: SubspaceBasis) -> bool:
        return self.dim == other.dim == (self + other).dim


def _diag_inv(weights) -> ExactMatrix:
    return ExactMatrix.diag([1 / to_rational(w) for w in weights])


def _gram(basis: ExactMatrix, weights) -> ExactMatrix:
    return basis.T @ _diag_inv(weights) @ basis


def classical_betti(K: SimplicialComplex, q: int) -> int:
    """n_q - rank d_q - rank d_{q+1}."""
    return K.n(q) - rank(boundary_matrix(K, q)) - rank(boundary_matrix(K, q + 1))


def cycle_image(f: SimplicialMap, q: int) -> SubspaceBasis:
    """f_q(ker d_q^K) inside C_q(L)."""
    z = kernel_basis(boundary_matrix(f.domain, q))
    return SubspaceBasis.span(induced_chain_map(f, q).matrix @ z)


def oracle_persistent_betti(f: SimplicialMap, q: int) -> int:
    """dim f_q(ker d_q) - dim(Im d_{q+1}^L intersected with it); weights are never read."""
    cycles = cycle_image(f, q)
    boundaries = SubspaceBasis.span(boundary_matrix(f.codomain, q + 1))
    return cycles.dim - cycles.intersection_dim(boundaries)


# -- Schur restriction of g g* computed straight from g^-1(W) -------------------


@dataclass(frozen=True)
class DirectRestriction:
    """``g_W g_W*`` in the basis of W, plus the preimage basis it came from."""

    matrix: ExactMatrix
    preimage: ExactMatrix
    basis: ExactMatrix
    weights: tuple

    def ambient(self) -> ExactMatrix:
        """The operator on the whole codomain, zero on the orthogonal complement of W."""
        b = self.basis
        if b.cols == 0:
            return ExactMatrix.zeros(b.rows, b.rows)
        coords = _gram(b, self.weights).inverse() @ b.T @ _diag_inv(self.weights)
        return b @ self.matrix @ coords


def schur_restriction_direct(g: ExactMatrix, W: ExactMatrix, domain_weights=None,
                             codomain_weights=None) -> DirectRestriction:
    """Matrix of ``g_W g_W*`` where ``g_W`` is g restricted to ``g^-1(W)`` with values in W.

    ``g`` maps a space with inner product ``<e_i, e_i> = 1/domain_weights[i]``
    to one with ``<e_i, e_i> = 1/codomain_weights[i]``; ``W`` holds independent
    columns.  The result is expressed in the basis ``W``.
    """
    m, p = g.shape
    if W.rows != m:
        raise ValueError(f"subspace lives in dimension {W.rows}, map has codomain dimension {m}")
    dw = [1] * p if domain_weights is None else list(domain_weights)
    cw = [1] * m if codomain_weights is None else list(codomain_weights)
    if len(dw) != p or len(cw) != m:
        raise ValueError("weight vectors do not match the map's dimensions")
    k = W.cols
    if rank(W) != k:
        raise ValueError("subspace basis columns are dependent")
    if k == 0:
        return DirectRestriction(ExactMatrix.zeros(0, 0), ExactMatrix.zeros(p, 0), W, tuple(cw))
    proj = W @ _gram(W, cw).inverse() @ W.T @ _diag_inv(cw)
    u = kernel_basis((ExactMatrix.identity(m) - proj) @ g) if p else ExactMatrix.zeros(0, 0)
    if u.cols == 0:
        return DirectRestriction(ExactMatrix.zeros(k, k), u, W, tuple(cw))
    image = g @ u
    coords = (W.T @ W).inverse() @ W.T @ image
    if W @ coords != image:
        raise ArithmeticError("preimage does not map into W")
    g_u = _gram(u, dw)
    g_w = _gram(W, cw)
    adjoint = g_u.inverse() @ coords.T @ g_w
    return DirectRestriction(coords @ adjoint, u, W, tuple(cw))


def _adjoint_boundary(K: SimplicialComplex, q: int) -> ExactMatrix:
    b = boundary_matrix(K, q)
    return ExactMatrix.diag(K.weights_of(q)) @ b.T @ _diag_inv(K.weights_of(q - 1))


def _hit(f: SimplicialMap, q: int) -> list[int]:
    return sorted({t for t in induced_chain_map(f, q).targets if t is not None})


def down_via_direct_restriction(f: SimplicialMap, q: int) -> ExactMatrix:
    """``f^ Sch(Delta_down^K, ker(f_q)^perp) f^-1`` on Im(f_q), canonical basis.

    Delta_down^K = h h* with h the adjoint boundary ``C_{q-1} -> C_q``, so the
    Schur restriction is built directly from ``h^-1(ker(f_q)^perp)``.
    """
    K = f.domain
    hit = _hit(f, q)
    n = len(hit)
    if n == 0 or q == 0:
        return ExactMatrix.zeros(n, n)
    fmat = induced_chain_map(f, q).matrix[hit, :]
    # ker(f_q)^perp = W_q Im(f_q^T) for <x, y> = x^T W^-1 y
    perp = ExactMatrix.diag(K.weights_of(q)) @ fmat.T
    res = schur_restriction_direct(_adjoint_boundary(K, q), perp, K.weights_of(q - 1), K.weights_of(q))
    fhat = fmat @ perp
    return fhat @ res.matrix @ fhat.inverse()


def up_via_direct_restriction(f: SimplicialMap, q: int) -> ExactMatrix:
    """``Sch(Delta_up^L, f_q(ker d_q^K))`` padded by zero on the rest of Im(f_q), canonical basis."""
    L = f.codomain
    hit = _hit(f, q)
    n = len(hit)
    if n == 0:
        return ExactMatrix.zeros(0, 0)
    cycles = cycle_image(f, q).matrix
    res = schur_restriction_direct(boundary_matrix(L, q + 1), cycles, L.weights_of(q + 1), L.weights_of(q))
    return res.ambient()[hit, hit]


def essential_up_direct(f: SimplicialMap, q: int, basis: ExactMatrix | None = None) -> ExactMatrix:
    """The unpadded block ``Sch(Delta_up^L, f_q(ker d_q^K))`` in ``basis`` (Im(f_q) coordinates)."""
    L = f.codomain
    hit = _hit(f, q)
    if basis is None:
        full = cycle_image(f, q).matrix
    else:
        rows = [[0] * basis.cols for _ in range(L.n(q))]
        for a, i in enumerate(hit):
            rows[i] = list(basis.row(a))
        full = ExactMatrix(rows, shape=(L.n(q), basis.cols))
    return schur_restriction_direct(boundary_matrix(L, q + 1), full, L.weights_of(q + 1), L.weights_of(q)).matrix


# -- cochain formulation -----------------------------------------------------------


@dataclass(frozen=True)
class CochainCheck:
    q: int
    up: bool
    down: bool
    full: bool
    chain_up: ExactMatrix
    chain_down: ExactMatrix
    cochain_up: ExactMatrix
    cochain_down: ExactMatrix

    @property
    def ok(self) -> bool:
        return self.up and self.down and self.full

    def to_json(self) -> dict:
        return {"q": self.q, "up": self.up, "down": self.down, "full": self.full, "pass": self.ok}


def _cochain_adjoint(a: ExactMatrix, src_weights, dst_weights) -> ExactMatrix:
    """Adjoint of ``a: C^src -> C^dst`` for cochain Grams ``diag(w)``: ``G_src^-1 a^T G_dst``."""
    return _diag_inv(src_weights) @ a.T @ ExactMatrix.diag(dst_weights)


def _recip(weights) -> list:
    # cochain Gram diag(w) is "<e_i, e_i> = 1/w'" with w' = 1/w
    return [1 / to_rational(w) for w in weights]


def cochain_laplacians(f: SimplicialMap, q: int) -> tuple[ExactMatrix, ExactMatrix]:
    """Cochain-side (up, down) persistent Laplacians on ker(f^q)^perp.

    Cochains carry the inner product ``<chi_s, chi_s> = w(s)``, the
    coboundary is ``d^T`` and ``f^q = [f_q]^T``.  ker(f^q)^perp is spanned by
    the cochains chi_t of the hit simplices, which is the basis used for the
    returned matrices.
    """
    K, L = f.domain, f.codomain
    hit = _hit(f, q)
    n = len(hit)
    if n == 0:
        return ExactMatrix.zeros(0, 0), ExactMatrix.zeros(0, 0)
    fq = induced_chain_map(f, q).matrix.T  # f^q : C^q_L -> C^q_K

    # up: (delta_q^L)* restricted to the cochains it sends into (f^q)*(ker (delta_{q-1}^K)*)
    delta_l = boundary_matrix(L, q + 1).T
    delta_l_adj = _cochain_adjoint(delta_l, L.weights_of(q), L.weights_of(q + 1))
    if q > 0:
        delta_k_adj = _cochain_adjoint(boundary_matrix(K, q).T, K.weights_of(q - 1), K.weights_of(q))
        cocycles = kernel_basis(delta_k_adj)
    else:
        cocycles = ExactMatrix.identity(K.n(q))
    target = SubspaceBasis.span(_cochain_adjoint(fq, L.weights_of(q), K.weights_of(q)) @ cocycles).matrix
    res = schur_restriction_direct(delta_l_adj, target, _recip(L.weights_of(q + 1)), _recip(L.weights_of(q)))
    up = res.ambient()[hit, hit]

    # down: delta_{q-1}^K restricted to the cochains it sends into Im(f^q); in the
    # bases chi_t (t hit) and f^q(chi_t) the isometry f^q is the identity matrix
    if q == 0:
        return up, ExactMatrix.zeros(n, n)
    down = schur_restriction_direct(
        boundary_matrix(K, q).T, fq[:, hit], _recip(K.weights_of(q - 1)), _recip(K.weights_of(q))
    ).matrix
    return up, down


def cochain_duality_check(f: SimplicialMap, q: int) -> CochainCheck:
    """Check ``j^ Delta_chain = Delta_cochain j^`` exactly, for up, down and full.

    ``j`` sends a chain c to ``<c, .>``; on canonical bases it is ``W^-1``, so
    on Im(f_q) the identity reads ``Delta_cochain = W^-1 Delta_chain W``.
    """
    from .persistent import down_persistent_laplacian, up_persistent_laplacian

    down = down_persistent_laplacian(f, q)
    up = up_persistent_laplacian(f, q, down=down)
    co_up, co_down = cochain_laplacians(f, q)
    w = ExactMatrix.diag(down.weights)
    w_inv = _diag_inv(down.weights)
    up_ok = w_inv @ up.matrix @ w == co_up
    down_ok = w_inv @ down.matrix @ w == co_down
    full_ok = w_inv @ (up.matrix + down.matrix) @ w == co_up + co_down
    return CochainCheck(q, up_ok, down_ok, full_ok, up.matrix, down.matrix, co_up, co_down)
