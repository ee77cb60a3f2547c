"""Shared generators for the test modules."""

import os
import random

from hypothesis import strategies as st

from tbacheck.generators import fixture, gen_An, gen_fischer, random_tba
from tbacheck.oracle import (
    closure_sets, enumerate_regions, included, intersects, region_constraints, zone_constraints,
)
from tbacheck.zone import INF, Zone, bound, canonical

SEED = int(os.environ.get("TBA_CHECK_SEED", "20111"))


def corpus(count, seed=SEED, **caps):
    rng = random.Random(seed)
    return [random_tba(rng, **caps) for _ in range(count)]


def random_zone(rng, n, M):
    """A nonempty canonical zone over ``n`` clocks with constants near ``M``."""
    d = n + 1
    while True:
        m = [INF] * (d * d)
        for i in range(d):
            m[i * d + i] = bound(0)
            m[i] = bound(0)
        for _ in range(rng.randint(1, 2 * n + 1)):
            i, j = rng.sample(range(d), 2)
            b = bound(rng.randint(-(M + 2), M + 3), rng.random() < 0.5)
            m[i * d + j] = min(m[i * d + j], b)
        z = canonical(d, m)
        if z is not None:
            return z


@st.composite
def zones(draw, max_clocks=3, max_const=4):
    n = draw(st.integers(1, max_clocks))
    d = n + 1
    m = [INF] * (d * d)
    for i in range(d):
        m[i * d + i] = bound(0)
        m[i] = bound(0)
    picks = draw(st.lists(
        st.tuples(st.integers(0, n), st.integers(0, n), st.integers(-max_const, max_const), st.booleans()),
        max_size=2 * d,
    ))
    for i, j, c, strict in picks:
        if i != j:
            m[i * d + j] = min(m[i * d + j], bound(c, strict))
    z = canonical(d, m)
    if z is None:
        return Zone.origin(n)
    return z


def named_models():
    """Every hand-picked model the invariant suites walk over."""
    out = {name: fixture(name) for name in ("a1", "a2", "a3")}
    for n in range(2, 7):
        out[f"A{n}"] = gen_An(n, 1)
    out["A3_d2"] = gen_An(3, 2)
    for n in (2, 3):
        for v in ("mutex", "liveness"):
            out[f"fischer{n}_{v}"] = gen_fischer(n, v)
    return out


def chain_holds(z, M, mode="closed"):
    """Closure_d(z) inside approx(z), and approx(z) inside Closure(z)."""
    n = z.clocks
    zc = zone_constraints(z)
    dreg, reg = closure_sets(z, M, mode)
    approx = zone_constraints(z.extrapolate(M))
    # every d-region in the closure lies inside the extrapolated zone ...
    for d in dreg:
        if not included(n, d.constraints(M, mode), approx):
            return False
    # ... and the extrapolated zone is covered by regions of the plain closure:
    # each region meeting it must meet the zone itself
    for r in enumerate_regions(n, M):
        rc = region_constraints(r, M)
        if intersects(n, approx, rc) and r not in reg:
            return False
    return all(intersects(n, zc, region_constraints(r, M)) for r in reg)
