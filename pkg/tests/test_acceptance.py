"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from conftest import M, DISPLAY_EDGES_L, permute
from plap.chains import check_weight_preserving, combinatorial_laplacian, simplex_names
from plap.complex import identity_map, random_collapse, random_complex
from plap.linalg import kernel_basis, rank, same_column_space, symmetric_spectrum
from plap.linalg.schur_checks import verify_schur_properties
from plap.oracle import classical_betti, cochain_duality_check, oracle_persistent_betti
from plap.persistent import (
    down_persistent_laplacian,
    laplacian_report,
    persistent_betti,
    persistent_laplacian,
    spectrum,
    symmetrize,
    symmetrize_in_basis,
    up_persistent_laplacian,
)
from plap.tower import find_padded_up_violation, monotonicity_report, random_collapse_tower, random_filtration

h = Fraction(1, 2)
N_ORDER = [0, 2, 1, 3, 4]


def verdict(capsys, number: int, title: str, ok: bool, detail: str = "") -> None:
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
    assert ok, detail


def display_order(f, m, q=1):
    names = simplex_names(f.codomain, q, down_persistent_laplacian(f, q).hit)
    return permute(m, names, DISPLAY_EDGES_L)


def test_criterion_01_golden_example(fix1, capsys):
    f = fix1["map"]
    down = down_persistent_laplacian(f, 1)
    up = up_persistent_laplacian(f, 1, down=down)
    full = down.matrix + up.matrix
    checks = {
        "N": down.N[N_ORDER, N_ORDER] == M([
            [3, -h, 1, 0, 0], [-1, 2, 1, -1, 1], [2, 1, 2, 0, 0], [0, -h, 0, 1, -1], [0, 1, 0, -2, 2],
        ]),
        "down": display_order(f, down.matrix) == M([[3, -1, 2], [-h, Fraction(3, 2), 1], [1, 1, 2]]),
        "up": display_order(f, up.matrix) == M([[h, 1, -1], [h, 1, -1], [-h, -1, 1]]),
        "full": display_order(f, full) == M([[Fraction(7, 2), 0, 1], [0, Fraction(5, 2), 0], [h, 0, 3]]),
        "det": full.det() == 25,
        "nullity": full.cols - rank(full) == 0,
        "SchQ": up.sch_q == M([[Fraction(5, 2)]]),
    }
    bad = [k for k, ok in checks.items() if not ok]
    verdict(capsys, 1, "exact golden matrices of the two-edge-collapse example", not bad,
            f"mismatch: {bad}" if bad else "N, down, up, full, det, nullity, SchQ")


def test_criterion_02_golden_hollow_triangle(fix1, fix2, capsys):
    f = fix2["map"]
    full = persistent_laplacian(f, 1)
    same = full == down_persistent_laplacian(fix1["map"], 1).matrix
    nullity = full.cols - rank(full)
    k = permute(kernel_basis(full), simplex_names(f.codomain, 1, down_persistent_laplacian(f, 1).hit),
                DISPLAY_EDGES_L, cols=False)
    spanned = same_column_space(k, M([[1], [1], [-1]]))
    verdict(capsys, 2, "hollow-triangle example keeps one cycle", same and nullity == 1 and spanned,
            f"equals down={same}, nullity={nullity}, kernel (1,1,-1)={spanned}")


def test_criterion_03_composition_not_weight_preserving(fix3, capsys):
    f_ok = check_weight_preserving(fix3["f"]).ok
    g_ok = check_weight_preserving(fix3["g"]).ok
    report = check_weight_preserving(fix3["gf"], 1)
    found = [("".join(v.simplex), str(v.codomain_weight), str(v.pushed_weight)) for v in report.violations]
    ok = f_ok and g_ok and found == [("xy", "2", "1")]
    verdict(capsys, 3, "f and g weight preserving, g.f not, single edge violation", ok,
            f"f={f_ok}, g={g_ok}, edge violations={found}")


def test_criterion_04_betti_equals_oracle(capsys):
    cases = failures = 0
    for seed in range(200):
        f = random_collapse(seed, max_vertices=8, max_dim=3)
        for q in (0, 1, 2):
            cases += 1
            if persistent_betti(f, q) != oracle_persistent_betti(f, q):
                failures += 1
    verdict(capsys, 4, "nullity equals homology-rank persistent Betti", failures == 0,
            f"200 maps, {cases} cases, {failures} failures")


def test_criterion_05_identity_maps(capsys):
    failures = 0
    for seed in range(100):
        K = random_complex(6, 3, 0.6, seed)
        f = identity_map(K)
        for q in range(K.dim + 1):
            down = down_persistent_laplacian(f, q)
            up = up_persistent_laplacian(f, q, down=down)
            lap = down.matrix + up.matrix
            if (down.matrix != combinatorial_laplacian(K, q, "down")
                    or up.matrix != combinatorial_laplacian(K, q, "up")
                    or lap.cols - rank(lap) != classical_betti(K, q)):
                failures += 1
    verdict(capsys, 5, "identity maps give combinatorial Laplacians and classical Betti", failures == 0,
            f"100 complexes, {failures} failures")


def test_criterion_06_schur_identities(capsys):
    bad = [s for s in range(100) if not verify_schur_properties(s).ok]
    verdict(capsys, 6, "Schur complement identities, exact", not bad, f"100 seeds, failing seeds {bad}")


def test_criterion_07_cochain_duality(fix1, fix2, fix3, capsys):
    maps = [fix1["map"], fix2["map"], fix3["f"], fix3["g"]] + [random_collapse(s) for s in range(50)]
    failures = checked = 0
    for f in maps:
        for q in range(f.domain.dim + 1):
            checked += 1
            if not cochain_duality_check(f, q).ok:
                failures += 1
    verdict(capsys, 7, "chain and cochain persistent Laplacians agree", failures == 0,
            f"{len(maps)} maps, {checked} degrees, {failures} failures")


def test_criterion_08_monotonicity(capsys):
    counts = {"inclusion-up": 0, "down": 0, "ess-up": 0, "surjective-down": 0}
    failed = []
    for seed in range(100):
        for q in (0, 1):
            for kind, tower in (("filtration", random_filtration(seed)), ("collapse", random_collapse_tower(seed))):
                report = monotonicity_report(tower, q)
                for t in report.triples:
                    for v in t.verdicts:
                        if v.status == "pass":
                            counts[v.theorem] += 1
                        elif v.failed:
                            failed.append((kind, seed, q, v.theorem))
    found = find_padded_up_violation(range(100))
    enough = counts["inclusion-up"] >= 100 and counts["ess-up"] >= 100 and counts["surjective-down"] >= 100
    ok = not failed and enough and found is not None and found[2].ok
    detail = f"passing verdicts {counts}, failures {failed[:5]}, padded up counterexample seed " \
             f"{None if found is None else found[0]}"
    verdict(capsys, 8, "eigenvalue monotonicity along towers", ok, detail)


def test_criterion_09_spectrum_cross_check(fix1, capsys):
    f = fix1["map"]
    eig = spectrum(f, 1, "full").eigenvalues
    det = float(persistent_laplacian(f, 1).det())
    close = np.allclose(eig, [2.5, 2.5, 4.0], rtol=1e-9, atol=0)
    product = abs(np.prod(eig) - det) <= 1e-9 * abs(det)
    verdict(capsys, 9, "full spectrum of the worked example", close and product,
            f"eigenvalues {[float(x) for x in eig]}, product {float(np.prod(eig))!r} vs det {det}")


def test_criterion_10_self_adjoint_and_psd(fix1, fix2, fix3, capsys):
    maps = [fix1["map"], fix2["map"], fix3["f"], fix3["g"]]
    maps += [random_collapse(s) for s in range(100)]
    maps += [identity_map(random_complex(6, 3, 0.6, s)) for s in range(20)]
    worst = 0.0
    problems = []
    count = 0
    for i, f in enumerate(maps):
        for q in range(f.domain.dim + 1):
            rep = laplacian_report(f, q)
            mats = {w: symmetrize(rep.matrix(w), rep.image_weights) for w in ("down", "up", "full")}
            mats["ess-up"] = symmetrize_in_basis(rep.up.sch_q, rep.up.R1, rep.image_weights)
            for which, s in mats.items():
                count += 1
                if which != "ess-up" and not np.array_equal(s, s.T):
                    problems.append((i, q, which, "asymmetric"))
                low = min(symmetric_spectrum(s), default=0.0)
                worst = min(worst, low)
                if low < -1e-9:
                    problems.append((i, q, which, low))
    verdict(capsys, 10, "Laplacians self-adjoint and positive semidefinite", not problems,
            f"{count} matrices, lowest eigenvalue {worst:.3g}, problems {problems[:5]}")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q"]))
