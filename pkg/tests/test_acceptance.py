"""Acceptance criteria 1-11, each at its stated tolerance (all exact except the soft encoding bound).

Each test records one pass/fail line that pytest prints in an
"acceptance criteria" section at the end of the run.
"""

from __future__ import annotations

import time

import pytest

from polydist import verify


@pytest.fixture(scope="module")
def knapsack_claims():
    start = time.perf_counter()
    claims = verify.knapsack_suite(max_d=4, seed=verify.DEFAULT_SEED, random_count=verify.RANDOM_INSTANCES)
    return claims, time.perf_counter() - start


@pytest.fixture(scope="module")
def cyclic():
    return verify.cyclic_silo_suite((1, 2))


@pytest.fixture(scope="module")
def reduction():
    return verify.reduction_suite(include_gadget=True)


def only(claims, criterion):
    return [c for c in claims if c.criterion == criterion]


def test_family_size():
    # exhaustive d in 2..4 with entries in [1,5] and even sum, plus the seeded random instances
    family = verify.knapsack_family()
    assert len(family) == 12 + 63 + 313 + 50


def test_criterion_01_partition_equivalence(knapsack_claims, report):
    claims, elapsed = knapsack_claims
    assert report(1, only(claims, 1), f"{elapsed:.0f}s for criteria 1-3 and 9")
    assert elapsed < 300


def test_criterion_02_monotone_equivalence(knapsack_claims, report):
    claims, _ = knapsack_claims
    assert report(2, only(claims, 2))


def test_criterion_03_gadget_structure(knapsack_claims, report):
    claims, _ = knapsack_claims
    assert report(3, only(claims, 3))


def test_criterion_04_truncation_generating_function(report):
    claims = verify.truncation_suite(verify.DEFAULT_SEED)
    assert len(claims) == 20
    assert report(4, claims)


def test_criterion_05_silo_closed_form_and_isomorphism(report):
    claims = verify.silo_suite(max_d=5)
    dims = {name.split()[0] for name, _, _ in verify.silo_fixtures(5)}
    assert {"cube3", "cube4", "cube5"} <= dims
    assert report(5, claims)


def test_criterion_06_silo_graph_paths(report):
    claims = verify.silo_graph_suite(max_d=10)
    assert len(claims) == 4 * 8
    assert report(6, claims)


def test_criterion_07_cyclic_silo_distances(cyclic, report):
    claims, _ = cyclic
    assert report(7, claims)


def test_criterion_08_diameter_formula(reduction, report):
    claims, _ = reduction
    formula = [c for c in claims if c.name == "diam(Q) = d_P(u,v) + K"]
    assert [c.got for c in formula] == ["75", "147"]
    assert report(8, claims)


def test_criterion_09_threshold_identity(knapsack_claims, report):
    claims, _ = knapsack_claims
    assert report(9, only(claims, 9))


@pytest.mark.xfail(strict=True, reason="a box has parallel facets, so no simple lift has a unique top vertex")
def test_criterion_10_rock_extension_on_boxes(report):
    claims = verify.rock_suite(include_nondegenerate=False)
    note = "boxes admit no simple rock extension with a unique apex (see README); nondegenerate fixtures pass"
    assert report(10, claims, note)


def test_criterion_10_rock_extension_nondegenerate():
    claims = []
    for name, P, ball in verify.nondegenerate_rock_fixtures():
        claims += verify.rock_claims(name, P, ball)
    assert claims and all(c.ok for c in claims)


def test_criterion_11_encoding_growth(cyclic, reduction, report):
    records = cyclic[1] + reduction[1]
    assert len(records) == 6
    assert report(11, verify.encoding_suite(records, constant=64))
