import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reslat import lattice as lat
from reslat.algebra import (
    PartialAlgebraSpec,
    build_from_tables,
    check_axioms,
    is_central_element,
    is_commutative,
    is_cyclic,
    is_involutive,
    is_odd,
    predicate_profile,
    raw_algebra,
    trivial_algebra,
)
from reslat.errors import InconsistentSpec, NoZeroConstant, NotALattice, NotAMonoid, NotResiduated, ReslatError
from reslat.fixtures import load_fixture_algebra

from helpers import residuation_holds

CHAIN3 = lat.transitive_closure(3, [(0, 1), (1, 2)])
DIAMOND = lat.transitive_closure(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def test_three_chain_with_meet_as_product():
    meet = [[min(i, j) for j in range(3)] for i in range(3)]
    a = build_from_tables(3, CHAIN3, meet, 2)
    assert check_axioms(a).passed
    assert a.lres[2][1] == 1 and a.lres[1][0] == 0 and a.lres[0][0] == 2
    assert predicate_profile(a) == {
        "commutative": True, "idempotent": True, "integral": True, "distributive": True,
    }


def test_error_order():
    with pytest.raises(ValueError):
        build_from_tables(3, CHAIN3, [[0]], 1)
    v = lat.transitive_closure(3, [(0, 1), (0, 2)])
    with pytest.raises(NotALattice):
        build_from_tables(3, v, [[0, 0, 0], [0, 1, 2], [0, 2, 2]], 1)
    # (2*0)*2 = 1*2 = 2 but 2*(0*2) = 2*0 = 1
    with pytest.raises(NotAMonoid):
        build_from_tables(3, CHAIN3, [[0, 0, 0], [0, 1, 2], [1, 2, 0]], 1)
    # monoid on the chain that does not preserve joins: bottom is not absorbing
    with pytest.raises(NotResiduated):
        build_from_tables(3, CHAIN3, [[0, 0, 2], [0, 1, 2], [2, 2, 2]], 1)


def test_check_axioms_reports_each_failure_once():
    a = raw_algebra(3, CHAIN3, [[0, 0, 2], [0, 1, 2], [2, 2, 2]], 1)
    names = check_axioms(a).names()
    assert names and len(names) == len(set(names))
    assert "left-residual" in names or "right-residual" in names


def test_pointed_predicates_need_zero():
    a = load_fixture_algebra("fig1_A")
    with pytest.raises(NoZeroConstant):
        is_involutive(a)
    b = a.with_zero(1)
    assert is_odd(b) and is_cyclic(b) and is_involutive(b)
    assert not is_involutive(a.with_zero(0))


def test_fig2_is_odd_cyclic_involutive():
    for n in ("fig2_A", "fig2_B", "fig2_C"):
        a = load_fixture_algebra(n)
        assert is_odd(a) and is_cyclic(a) and is_involutive(a)


def test_fig2_C_cb_is_neither_central_nor_idempotent():
    c = load_fixture_algebra("fig2_C")
    cb = c.index("cb")
    assert not is_central_element(c, cb)
    assert c.prod[cb][cb] == c.index("bot")
    assert not is_commutative(c)


def test_trivial_algebra():
    t = trivial_algebra()
    assert t.size == 1 and check_axioms(t).passed
    assert trivial_algebra(pointed=True).pointed


def test_partial_spec_conflicting_constraints():
    with pytest.raises(InconsistentSpec):
        PartialAlgebraSpec(size=3, leq=CHAIN3, unit=1, product_constraints=((2, 2, 2), (2, 2, 1)))


def test_permuted_algebra_is_still_residuated():
    a = load_fixture_algebra("fig1_B")
    b = a.permuted((4, 3, 2, 1, 0))
    assert check_axioms(b).passed and residuation_holds(b)
    assert b.label(b.unit) == "1"


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_random_tables_are_rejected_or_fully_residuated(data):
    """Whatever build_from_tables accepts satisfies every axiom and the adjunction."""
    leq = data.draw(st.sampled_from([CHAIN3, DIAMOND, lat.transitive_closure(4, [(0, 1), (1, 2), (2, 3)])]))
    n = len(leq)
    unit = data.draw(st.integers(0, n - 1))
    table = [[data.draw(st.integers(0, n - 1)) for _ in range(n)] for _ in range(n)]
    for x in range(n):
        table[unit][x] = table[x][unit] = x
    try:
        a = build_from_tables(n, leq, table, unit)
    except ReslatError:
        assert not check_axioms(raw_algebra(n, leq, table, unit)).passed
        return
    assert check_axioms(a).passed and residuation_holds(a)
