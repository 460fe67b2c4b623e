from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from conftest import M, DISPLAY_EDGES_K, DISPLAY_EDGES_L, permute
from plap.chains import (
    adjoint_boundary,
    basis_decomposition,
    boundary_matrix,
    check_weight_preserving,
    combinatorial_laplacian,
    induced_chain_map,
    permutation_sign,
    require_weight_preserving,
    simplex_names,
    weight_matrix,
    weighted_inner,
)
from plap.complex import SimplicialComplex, SimplicialMap, identity_map, random_collapse, random_complex
from plap.errors import WeightPreservationError
from plap.linalg import ExactMatrix, is_psd_exact, kernel_basis, rank, symmetric_spectrum
from plap.oracle import classical_betti
from plap.persistent import symmetrize


def edges(K) -> list[str]:
    return simplex_names(K, 1)


# -- boundaries and weights -------------------------------------------------------------


def test_boundary_of_example_domain(fix1):
    K = fix1["K"]
    b = permute(boundary_matrix(K, 1), edges(K), DISPLAY_EDGES_K, rows=False)
    # rows a, b, c, d; columns ab, bc, ac, ad, bd
    assert b == M([
        [-1, 0, -1, -1, 0],
        [1, -1, 0, 0, -1],
        [0, 1, 1, 0, 0],
        [0, 0, 0, 1, 1],
    ])


def test_boundary_of_triangle(fix1):
    L = fix1["L"]
    b = permute(boundary_matrix(L, 2), edges(L), DISPLAY_EDGES_L, cols=False)
    assert b == M([[1], [1], [-1]])


def test_boundary_in_degree_zero_is_empty(fix1):
    assert boundary_matrix(fix1["K"], 0).shape == (0, 4)


@pytest.mark.parametrize("seed", range(15))
def test_boundary_of_boundary_vanishes(seed):
    K = random_complex(7, 3, 0.7, seed)
    for q in range(1, K.dim):
        assert (boundary_matrix(K, q) @ boundary_matrix(K, q + 1)).is_zero()


def test_weight_matrices_of_example_codomain(fix1):
    L = fix1["L"]
    assert permute(weight_matrix(L, 1), edges(L), DISPLAY_EDGES_L) == ExactMatrix.diag([2, 1, 1])
    assert weight_matrix(L, 0) == ExactMatrix.diag([1, 2, 1])


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([2, 0, 1]) == 1


# -- induced chain maps ----------------------------------------------------------------


def test_induced_chain_map_of_example(fix1):
    f = fix1["map"]
    cm = induced_chain_map(f, 1)
    m = permute(cm.matrix, edges(f.codomain), DISPLAY_EDGES_L, cols=False)
    m = permute(m, edges(f.domain), DISPLAY_EDGES_K, rows=False)
    assert m == M([[1, 0, 0, 1, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]])
    assert cm.targets[edges(f.domain).index("bd")] is None


def test_identity_chain_map_is_identity():
    K = random_complex(5, 2, 0.8, 4)
    for q in range(K.dim + 1):
        assert induced_chain_map(identity_map(K), q).matrix == ExactMatrix.identity(K.n(q))


def test_reversed_edge_picks_up_a_sign():
    K = SimplicialComplex.from_labels("ab", {"a": 1, "b": 1, "ab": 1})
    f = SimplicialMap(K, K, {"a": "b", "b": "a"})
    assert induced_chain_map(f, 1).matrix == M([[-1]])
    assert induced_chain_map(f, 0).matrix == M([[0, 1], [1, 0]])


@pytest.mark.parametrize("seed", range(25))
def test_chain_map_commutes_with_boundary(seed):
    f = random_collapse(seed)
    for q in range(1, f.domain.dim + 1):
        lhs = induced_chain_map(f, q - 1).matrix @ boundary_matrix(f.domain, q)
        rhs = boundary_matrix(f.codomain, q) @ induced_chain_map(f, q).matrix
        assert lhs == rhs


# -- weight preservation ---------------------------------------------------------------


def test_example_map_is_weight_preserving(fix1):
    assert check_weight_preserving(fix1["map"]).ok


def test_composite_violates_only_at_xy(fix3):
    report = check_weight_preserving(fix3["gf"], 1)
    assert not report.ok
    (v,) = report.violations
    assert v.simplex == ("x", "y")
    assert (v.codomain_weight, v.pushed_weight) == (2, 1)
    assert report.to_json()["violations"][0]["preimage_sum"] == "1"


def test_identity_is_weight_preserving():
    assert check_weight_preserving(identity_map(random_complex(6, 3, 0.6, 8))).ok


def test_violation_raises_with_reweighting_hint(fix3):
    with pytest.raises(WeightPreservationError, match="reweight"):
        require_weight_preserving(fix3["gf"], 1)
    with pytest.raises(WeightPreservationError):
        basis_decomposition(fix3["gf"], 1)


# -- combinatorial Laplacians -----------------------------------------------------------


def test_up_laplacian_of_example_codomain(fix1):
    L = fix1["L"]
    up = permute(combinatorial_laplacian(L, 1, "up"), edges(L), DISPLAY_EDGES_L)
    h = Fraction(1, 2)
    assert up == M([[h, 1, -1], [h, 1, -1], [-h, -1, 1]])


def test_down_laplacian_of_example_domain(fix1):
    K = fix1["K"]
    down = permute(combinatorial_laplacian(K, 1, "down"), edges(K), DISPLAY_EDGES_K)
    assert down.is_symmetric()
    assert down.diagonal() == [2] * 5
    assert down[4, 0] == -1  # bd against ab
    assert down == M([
        [2, -1, 1, 1, -1],
        [-1, 2, 1, 0, 1],
        [1, 1, 2, 1, 0],
        [1, 0, 1, 2, 1],
        [-1, 1, 0, 1, 2],
    ])


def test_down_laplacian_in_degree_zero_is_zero(fix1):
    assert combinatorial_laplacian(fix1["K"], 0, "down").is_zero()


def test_unknown_part_is_rejected(fix1):
    with pytest.raises(ValueError):
        combinatorial_laplacian(fix1["K"], 1, "sideways")


def test_adjoint_boundary_is_weighted_adjoint(fix1):
    L = fix1["L"]
    d, a = boundary_matrix(L, 2), adjoint_boundary(L, 2)
    w1, w2 = L.weights_of(1), L.weights_of(2)
    x, y = M([[1], [2], [3]]), M([[5]])
    assert weighted_inner((d @ y).col(0), x.col(0), w1) == weighted_inner(y.col(0), (a @ x).col(0), w2)


@pytest.mark.parametrize("seed", range(15))
def test_laplacians_symmetrize_to_psd(seed):
    K = random_complex(6, 3, 0.7, seed)
    for q in range(K.dim + 1):
        lap = combinatorial_laplacian(K, q)
        s = symmetrize(lap, K.weights_of(q))
        assert np.allclose(s, s.T)
        assert min(symmetric_spectrum(s), default=0.0) >= -1e-9


@pytest.mark.parametrize("seed", range(20))
def test_nullity_is_classical_betti(seed):
    K = random_complex(6, 3, 0.6, seed)
    for q in range(K.dim + 1):
        lap = combinatorial_laplacian(K, q)
        assert lap.cols - rank(lap) == classical_betti(K, q)


def test_weighted_form_is_psd_exactly(fix1):
    L = fix1["L"]
    form = ExactMatrix.diag([1 / w for w in L.weights_of(1)]) @ combinatorial_laplacian(L, 1)
    assert form.is_symmetric() and is_psd_exact(form)


# -- the J/B decomposition -------------------------------------------------------------


def test_decomposition_of_example_in_degree_one(fix1):
    f = fix1["map"]
    bd = basis_decomposition(f, 1)
    K = f.domain
    names = edges(K)
    cols = permute(bd.matrix, names, DISPLAY_EDGES_K, cols=False)
    col = lambda **kw: [kw.get(n, 0) for n in DISPLAY_EDGES_K]
    J = [list(cols.col(j)) for j in range(bd.n)]
    B = [list(cols.col(j)) for j in range(bd.n, cols.cols)]
    # J in canonical order of the hit simplices xy, xz, yz
    assert J == [col(ab=1, ad=1), col(ac=1), col(bc=1)]
    assert B == [col(ab=1, ad=-1), col(bd=1)]
    assert simplex_names(f.codomain, 1, bd.hit) == ["xy", "xz", "yz"]
    assert bd.image_weights == (2, 1, 1)


def test_decomposition_of_example_in_degree_zero(fix1):
    bd = basis_decomposition(fix1["map"], 0)
    assert [list(bd.J.col(j)) for j in range(3)] == [[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0]]
    assert [list(bd.B.col(j)) for j in range(bd.B.cols)] == [[0, 1, 0, -1]]


def test_decomposition_of_identity_is_weight_matrix():
    K = random_complex(5, 2, 0.8, 6)
    for q in range(K.dim + 1):
        bd = basis_decomposition(identity_map(K), q)
        assert bd.matrix == weight_matrix(K, q)
        assert bd.B.cols == 0


@pytest.mark.parametrize("seed", range(20))
def test_j_columns_are_orthogonal_isometric_images(seed):
    f = random_collapse(seed)
    K = f.domain
    for q in range(K.dim + 1):
        bd = basis_decomposition(f, q)
        w = K.weights_of(q)
        J, B = bd.J, bd.B
        assert rank(bd.matrix) == K.n(q)
        cm = induced_chain_map(f, q).matrix
        assert (cm @ B).is_zero()
        for i in range(J.cols):
            assert weighted_inner(J.col(i), J.col(i), w) == bd.image_weights[i]
            for j in range(i + 1, J.cols):
                assert weighted_inner(J.col(i), J.col(j), w) == 0
            for j in range(B.cols):
                assert weighted_inner(J.col(i), B.col(j), w) == 0
        image = cm @ J
        hit = ExactMatrix.zeros(f.codomain.n(q), 0) if not bd.n else ExactMatrix.hstack(
            [ExactMatrix.from_columns([[bd.image_weights[i] if r == t else 0 for r in range(f.codomain.n(q))]], f.codomain.n(q))
             for i, t in enumerate(bd.hit)]
        )
        assert image == hit


def test_kernel_of_chain_map_is_spanned_by_b(fix1):
    bd = basis_decomposition(fix1["map"], 1)
    k = kernel_basis(induced_chain_map(fix1["map"], 1).matrix)
    assert rank(ExactMatrix.hstack([k, bd.B])) == k.cols == bd.B.cols
