import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from helpers import random_zone, zones
from tbacheck.model import Atom, Transition
from tbacheck.zone import (
    INF, LE_ZERO, BoundOverflow, Zone, bound, bound_add, canonical, decode, edge_profile, fire,
    orders_clocks,
)


def mk(n, *constraints):
    """Zone over n clocks from (i, j, value, strict) triples; None if empty."""
    return Zone.universe(n).constrain((i, j, bound(c, s)) for i, j, c, s in constraints)


def g(*atoms):
    return tuple(Atom(*a) for a in atoms)


def test_bound_order_and_addition():
    assert bound(1, True) < bound(1) < bound(2, True)
    assert decode(bound(-3, True)) == (-3, True)
    assert decode(INF) is None
    assert bound_add(bound(1), bound(2)) == bound(3)
    assert bound_add(bound(1, True), bound(2)) == bound(3, True)
    assert bound_add(INF, bound(0)) == INF
    with pytest.raises(BoundOverflow):
        bound_add(INF - 3, INF - 3)


def test_contradictory_interval_is_empty():
    d = 2
    m = [LE_ZERO, bound(-2), bound(1), LE_ZERO]
    assert canonical(d, m) is None


def test_canonical_derives_upper_bound():
    # x - y <= 0 and y <= 3 imply x <= 3
    z = mk(2, (1, 2, 0, False), (2, 0, 3, False))
    assert z[1, 0] == bound(3)
    assert canonical(z.dim, z.m) == z


def test_canonical_matches_sampled_valuations():
    z = mk(2, (1, 2, 0, False), (2, 0, 3, False))
    grid = [Fraction(k, 2) for k in range(0, 10)]
    for x in grid:
        for y in grid:
            assert z.contains_point((x, y)) == (x <= y and y <= 3)


def test_up_from_origin():
    z = Zone.origin(2).up()
    assert z == mk(2, (1, 2, 0, False), (2, 1, 0, False))


def test_up_upward_closed_is_fixed():
    z = mk(1, (0, 1, -1, False))
    assert z.up() == z


def test_up_keeps_differences():
    z = mk(2, (1, 0, 0, False), (2, 0, 1, False), (0, 2, -1, False)).up()
    for x, y in [(0, 1), (Fraction(5, 2), Fraction(7, 2))]:
        assert z.contains_point((x, y))
    assert not z.contains_point((1, 1))
    assert z.describe(["x", "y"]) == "y>=1 & x-y<=-1 & y-x<=1"


def test_and_guard():
    diag = Zone.origin(2).up()
    z = diag.and_guard(g((1, "<=", 1), (2, ">=", 1)))
    assert z == mk(2, (1, 0, 1, False), (0, 1, -1, False), (2, 0, 1, False), (0, 2, -1, False))
    assert diag.and_guard(()) == diag
    assert mk(1, (0, 1, -2, False)).and_guard(g((1, "<", 2))) is None


def test_reset():
    diag = Zone.origin(2).up()
    assert diag.reset({1}) == mk(2, (1, 0, 0, False))
    assert diag.reset(()) == diag
    point = mk(2, (1, 0, 1, False), (0, 1, -1, False), (2, 0, 2, False), (0, 2, -2, False))
    assert point.reset({2}) == mk(2, (1, 0, 1, False), (0, 1, -1, False), (2, 0, 0, False))


def test_extrapolation_single_clock():
    assert mk(1, (0, 1, -5, False)).extrapolate(2) == mk(1, (0, 1, -2, True))
    small = mk(2, (1, 0, 2, False), (0, 2, -1, True))
    assert small.extrapolate(2) is small


def test_fire_on_first_fixture():
    a_to_b = Transition("a", "b", g((1, ">=", 1)))
    b_to_a = Transition("b", "a", g((1, "<=", 1)), frozenset({1}))
    z1 = fire(Zone.origin(1), a_to_b, 1)
    assert z1 == mk(1, (0, 1, -1, False))
    assert fire(z1, b_to_a, 1) == Zone.origin(1)
    assert fire(Zone.origin(1), Transition("a", "b", g((1, "<", 0))), 1) is None


def test_edge_profiles():
    state1 = Zone.origin(2).up().reset({1})  # 0 = x <= y
    p = edge_profile(state1, Transition("1", "0", g((2, "=", 0))))
    assert p.zero_checked == {1, 2}
    p = edge_profile(Zone.origin(1), Transition("a", "b", g((1, ">=", 1))))
    assert (p.lower1, p.bounded, p.zero_checked) == ({1}, set(), set())
    p = edge_profile(Zone.origin(2), Transition("a", "b", reset=frozenset({2})))
    assert p.bounded == p.zero_checked == p.lower1 == frozenset()
    assert p.reset == {2}
    assert edge_profile(Zone.origin(1), Transition("a", "b", g((1, "<", 0)))) is None


def test_orders_clocks():
    assert orders_clocks(mk(2, (1, 0, 0, False)))
    assert not orders_clocks(Zone.universe(2))


def test_describe():
    assert Zone.universe(2).describe(["x", "y"]) == "true"
    assert Zone.origin(1).describe(["x"]) == "x=0"
    assert mk(1, (0, 1, -1, True), (1, 0, 3, True)).describe(["x"]) == "x>1 & x<3"


# -- properties -------------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(zones())
def test_canonical_idempotent(z):
    assert canonical(z.dim, z.m) == z


@settings(max_examples=300, deadline=None)
@given(zones())
def test_operations_keep_canonical_form(z):
    for w in (z.up(), z.reset({1}), z.extrapolate(2), z.and_guard(g((1, "<=", 2))) or z):
        assert canonical(w.dim, w.m) == w


@settings(max_examples=300, deadline=None)
@given(zones())
def test_extrapolation_idempotent_and_extensive(z):
    for M in range(0, 4):
        a = z.extrapolate(M)
        assert a.extrapolate(M) == a
        assert z <= a


@settings(max_examples=200, deadline=None)
@given(zones(max_clocks=2), zones(max_clocks=2))
def test_fire_monotone(z1, z2):
    if z1.dim != z2.dim:
        return
    # meet of two zones is below both
    lo = z1.constrain((i, j, z2[i, j]) for i in range(z1.dim) for j in range(z1.dim) if i != j)
    if lo is None:
        return
    t = Transition("p", "q", g((1, ">=", 1)), frozenset({z1.dim - 1}))
    a, b = fire(lo, t, 2), fire(z1, t, 2)
    if a is not None:
        assert b is not None and a <= b


def test_random_zone_suite():
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randint(1, 3)
        z = random_zone(rng, n, 2)
        assert canonical(z.dim, z.m) == z
        assert z.extrapolate(2).extrapolate(2) == z.extrapolate(2)
