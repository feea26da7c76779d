import json
from pathlib import Path

import pytest

from reslat.algebra import build_from_tables, check_axioms, is_commutative, is_idempotent, is_integral
from reslat.enumeration import MAX_ENUM_SIZE, _span_rows, enumerate_algebras, generate_candidate_spans
from reslat.errors import BudgetExceeded
from reslat.fixtures import load_fixture_algebra, load_fixture_span
from reslat.morphisms import Span, are_isomorphic
from reslat.search import FOUND, NONE_UP_TO_BOUND, VarietyConstraints, search_amalgam

import oracles

FROZEN = json.loads((Path(__file__).parent / "data" / "enumeration_counts.json").read_text())["counts"]


def _count(n, flags=None):
    return sum(1 for _ in enumerate_algebras(n, flags))


def test_frozen_counts():
    for flag, row in FROZEN.items():
        for n, want in row.items():
            assert _count(int(n), None if flag == "none" else flag) == want


@pytest.mark.parametrize("n", [2, 3])
def test_live_oracle_agrees_up_to_isomorphism(n):
    ours = list(enumerate_algebras(n))
    ref = [build_from_tables(n, leq, t, u) for leq, t, u in oracles.naive_algebras(n)]
    assert len(ours) == len(ref)
    for r in ref:
        assert sum(are_isomorphic(r, a) is not None for a in ours) == 1


def test_counts_beyond_the_oracle():
    assert [_count(n) for n in (1, 2, 3, 4, 5)] == [1, 1, 3, 20, 149]
    assert [_count(n, "commutative") for n in (1, 2, 3, 4, 5)] == [1, 1, 3, 16, 100]
    assert [_count(n, "integral") for n in (1, 2, 3, 4, 5)] == [1, 1, 2, 9, 49]
    assert _count(5, "idempotent") == 32


def test_members_satisfy_their_variety_and_are_pairwise_distinct():
    algs = list(enumerate_algebras(4))
    assert all(check_axioms(a).passed for a in algs)
    for i, a in enumerate(algs):
        for b in algs[i + 1:]:
            assert are_isomorphic(a, b) is None
    assert all(is_idempotent(a) for a in enumerate_algebras(4, "idempotent"))
    assert all(is_commutative(a) for a in enumerate_algebras(4, "commutative"))
    assert all(is_integral(a) for a in enumerate_algebras(4, "integral"))


def test_small_sizes_and_known_members():
    [one] = enumerate_algebras(1)
    assert one.size == 1 and one.name == "R1.1"
    chain = load_fixture_algebra("fig1_A")
    assert any(are_isomorphic(chain, a) for a in enumerate_algebras(3, "idempotent"))
    assert any(are_isomorphic(load_fixture_algebra("fig1_B"), a) for a in enumerate_algebras(5, "idempotent"))


def test_workers_and_budget():
    names = [a.name for a in enumerate_algebras(4)]
    assert [a for a in enumerate_algebras(4, workers=2)] == list(enumerate_algebras(4))
    assert names == [f"R4.{k}" for k in range(1, 21)]
    with pytest.raises(BudgetExceeded):
        list(enumerate_algebras(4, budget=10))
    with pytest.raises(BudgetExceeded):
        list(enumerate_algebras(MAX_ENUM_SIZE + 1))
    with pytest.raises(ValueError):
        list(enumerate_algebras(0))


def test_span_hunt_small_apex_has_no_candidates():
    for leg_max, spans in ((2, 1), (3, 10)):
        res = generate_candidate_spans(1, leg_max, search_bound=6)
        assert res["complete"] and res["processed"] == spans and res["candidates"] == []


def test_span_hunt_candidates_at_leg_size_four_are_bound_effects():
    res = generate_candidate_spans(1, 4, search_bound=6, limit=60)
    assert not res["complete"] and res["processed"] == 60
    rows = {(k[0], k[1], tuple(k[2]), k[3], tuple(k[4])): s for k, s in _span_rows(1, 4, VarietyConstraints(), 10**6)}
    assert res["candidates"]
    for c in res["candidates"][:3]:
        span = rows[(c["apex"], c["left"], tuple(c["phi_B"]), c["right"], tuple(c["phi_C"]))]
        out = search_amalgam(span, max_size=span.left.size * span.right.size)
        assert out.status == FOUND


def test_span_hunt_resume_matches_a_fresh_run(tmp_path):
    fresh = generate_candidate_spans(1, 4, search_bound=5, limit=40)
    path = tmp_path / "hunt.jsonl"
    first = generate_candidate_spans(1, 4, search_bound=5, limit=15, report_path=path)
    second = generate_candidate_spans(1, 4, search_bound=5, limit=25, report_path=path)
    assert first["processed"] + second["processed"] == 40
    assert second["candidates"] == fresh["candidates"]
    with pytest.raises(ValueError):
        generate_candidate_spans(1, 4, search_bound=6, report_path=path)
    with pytest.raises(ValueError):
        generate_candidate_spans(2, 2)


def test_fig1_span_is_in_the_hunt_stream():
    b, c = load_fixture_algebra("fig1_B"), load_fixture_algebra("fig1_C")
    hit = None
    for key, span in _span_rows(3, 5, VarietyConstraints(), 10**6):
        if span.apex.size != 3 or span.left.size != 5 or span.right.size != 5:
            continue
        if are_isomorphic(span.left, c) and are_isomorphic(span.right, b):
            fixed = load_fixture_span("fig1")
            iso_b, iso_c = are_isomorphic(b, span.right), are_isomorphic(c, span.left)
            if list(span.phi_B.map) == [iso_c(v) for v in fixed.phi_C.map] and list(span.phi_C.map) == [
                iso_b(v) for v in fixed.phi_B.map
            ]:
                hit = (key, span)
                break
    assert hit is not None
    assert search_amalgam(hit[1], max_size=6).status == NONE_UP_TO_BOUND
