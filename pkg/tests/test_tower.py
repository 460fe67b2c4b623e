from __future__ import annotations

import pytest

from plap.chains import check_weight_preserving
from plap.complex import SimplicialComplex, SimplicialMap, identity_map
from plap.errors import MapError
from plap.tower import (
    THEOREMS,
    Tower,
    collapse_then_inclusion,
    compose,
    find_padded_up_violation,
    is_inclusion,
    is_surjective,
    is_weight_preserving,
    monotonicity_report,
    random_collapse_tower,
    random_filtration,
)


def test_composition_of_example_maps(fix3):
    f, g = fix3["f"], fix3["g"]
    gf = compose(f, g)
    assert gf.vertex_map == fix3["gf"].vertex_map
    assert is_weight_preserving(f) and is_weight_preserving(g)
    assert not is_weight_preserving(gf)
    (v,) = check_weight_preserving(gf, 1).violations
    assert v.simplex == ("x", "y")


def test_compose_with_identity(fix1):
    f = fix1["map"]
    assert compose(identity_map(f.domain), f).vertex_map == f.vertex_map
    assert compose(f, identity_map(f.codomain)).vertex_map == f.vertex_map


def test_compose_rejects_mismatched_maps(fix1, fix3):
    with pytest.raises(MapError):
        compose(fix1["map"], fix3["g"])
    with pytest.raises(MapError):
        Tower([fix1["map"], fix3["g"]])


@pytest.mark.parametrize("seed", range(10))
def test_two_collapses_compose_to_a_weight_preserving_map(seed):
    tower = random_collapse_tower(seed)
    assert all(tower.wp)
    assert is_weight_preserving(tower.composite(0, 2))
    assert all(is_surjective(f) for f in tower.maps)


def test_map_predicates(fix1):
    K = SimplicialComplex.from_labels("ab", {"a": 1, "b": 1, "ab": 1})
    L = SimplicialComplex.from_labels("abc", {"a": 1, "b": 1, "c": 1, "ab": 1, "bc": 1})
    inc = SimplicialMap(K, L, {"a": "a", "b": "b"})
    assert is_inclusion(inc) and not is_surjective(inc)
    assert is_surjective(fix1["map"]) is False  # the triangle xyz has no preimage
    assert not is_inclusion(fix1["map"])


@pytest.mark.parametrize("seed", range(10))
def test_filtration_maps_are_inclusions(seed):
    tower = random_filtration(seed)
    assert len(tower) == 2 and len(tower.complexes) == 3
    assert all(is_inclusion(f) for f in tower.maps)


@pytest.mark.parametrize("seed", range(25))
@pytest.mark.parametrize("q", [0, 1])
def test_filtrations_are_monotone(seed, q):
    report = monotonicity_report(random_filtration(seed), q)
    assert report.ok, report.to_json()
    (inc,) = report.verdict("inclusion-up")
    assert inc.status == "pass"


@pytest.mark.parametrize("seed", range(25))
@pytest.mark.parametrize("q", [0, 1])
def test_collapse_towers_are_monotone(seed, q):
    report = monotonicity_report(random_collapse_tower(seed), q)
    assert report.ok, report.to_json()
    assert all(v.status == "pass" for v in report.verdict("ess-up"))
    assert all(v.status == "pass" for v in report.verdict("surjective-down"))


def test_single_map_tower_has_no_triples(fix1):
    report = monotonicity_report(Tower([fix1["map"]]), 1)
    assert report.triples == [] and report.ok


def test_non_weight_preserving_composite_skips_every_theorem(fix3):
    report = monotonicity_report(Tower([fix3["f"], fix3["g"]]), 1)
    (triple,) = report.triples
    assert [v.theorem for v in triple.verdicts] == list(THEOREMS)
    assert all(v.status.startswith("skipped") and "gf" in v.status for v in triple.verdicts)
    assert report.ok


def test_padded_up_eigenvalues_can_decrease():
    found = find_padded_up_violation(range(60))
    assert found is not None
    seed, tower, report = found
    assert report.padded_up_violation
    # essential eigenvalues stay monotone on the same instance
    assert all(v.status == "pass" for v in report.verdict("ess-up"))
    assert report.ok


def test_collapse_then_inclusion_is_deterministic():
    a, b = collapse_then_inclusion(5), collapse_then_inclusion(5)
    assert a.complexes == b.complexes


def test_report_rows_and_json():
    report = monotonicity_report(random_collapse_tower(3), 1)
    rows = report.rows()
    assert {r["theorem"] for r in rows} == set(THEOREMS)
    out = report.to_json()
    assert out["ok"] is True and out["q"] == 1


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        monotonicity_report(random_collapse_tower(0), 1, tol=0)
