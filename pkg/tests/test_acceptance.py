"""Acceptance criteria, one test each.

Every test prints a ``CRITERION n: PASS|FAIL`` line.  Run the module directly
(``python3 tests/test_acceptance.py``) to get just those lines.
"""

import random
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import SEED, chain_holds, corpus, named_models, random_zone  # noqa: E402
from tbacheck.emptiness import CHECKERS, check_optimized  # noqa: E402
from tbacheck.generators import fixture, gen_An, gen_fischer  # noqa: E402
from tbacheck.graph import (  # noqa: E402
    GuessingZoneGraph, Semantics, ZoneGraph, count_nodes, guess_respects_order,
)
from tbacheck.model import Atom, Transition, snz_transform  # noqa: E402
from tbacheck.oracle import rg_check  # noqa: E402
from tbacheck.witness import InvalidWitness, validate  # noqa: E402
from tbacheck.zone import canonical, fire  # noqa: E402


def criterion_1():
    start = time.perf_counter()
    expected = {"a1": True, "a2": False, "a3": True}
    wrong = []
    for name, want in expected.items():
        a = fixture(name)
        got = {algo: check(a).nonempty for algo, check in CHECKERS.items()}
        got["oracle"] = rg_check(a).nonempty
        wrong += [f"{name}/{algo}" for algo, v in got.items() if v != want]
    elapsed = time.perf_counter() - start
    return not wrong and elapsed < 1.0, f"wrong={wrong or 'none'} time={elapsed:.2f}s (limit 1s)"


def criterion_2():
    start = time.perf_counter()
    zg, b2, per_state = [], [], 0
    for n in range(2, 9):
        a = gen_An(n, 1)
        g = ZoneGraph(Semantics(a))
        zg.append(g.explore())
        states = Counter(node.state for node in g.store.nodes)
        per_state = max(per_state, max(states.values()))
        b2.append(count_nodes(snz_transform(a), "zg", where=lambda node: node.state == "b2"))
    diffs = [y - x for x, y in zip(zg, zg[1:])]
    affine = max(diffs) - min(diffs) <= 2  # every difference within +-1 of a common value
    blowup = all(b2[n - 2] >= 2 ** (n - 1) for n in range(2, 9))
    elapsed = time.perf_counter() - start
    ok = affine and blowup and elapsed < 30
    detail = (f"ZG sizes {zg} differences {diffs} affine={affine} "
              f"(at most {per_state} zones per state); "
              f"SNZ b2 zones {b2} >= 2^(n-1): {blowup}; time={elapsed:.1f}s")
    return ok, detail


def _size_bound_models():
    models = {f"fixture {n}": fixture(n) for n in ("a1", "a2", "a3")}
    for n in range(2, 7):
        for d in (1, 2):
            models[f"A{n} d={d}"] = gen_An(n, d)
    for n in (2, 3):
        for v in ("mutex", "liveness"):
            models[f"fischer{n} {v}"] = gen_fischer(n, v)
    return models


def criterion_3():
    bad, worst = [], 0.0
    for name, a in _size_bound_models().items():
        sem = Semantics(a)
        nz, ng = ZoneGraph(sem).explore(), GuessingZoneGraph(sem).explore()
        worst = max(worst, ng / (nz * (a.n_clocks + 1)))
        if ng > nz * (a.n_clocks + 1):
            bad.append(f"{name}: {ng} > {nz}*{a.n_clocks + 1}")
    return not bad, f"violations={bad or 'none'}; largest ratio |GZG|/(|ZG|(|X|+1)) = {worst:.3f}"


def criterion_4(count=500):
    start = time.perf_counter()
    disagreements = []
    nonempty = 0
    for k, a in enumerate(corpus(count, max_states=4, max_clocks=3, max_const=2, max_transitions=8)):
        expected = rg_check(a).nonempty
        nonempty += expected
        for algo, check in CHECKERS.items():
            if check(a).nonempty != expected:
                disagreements.append((k, algo))
    elapsed = time.perf_counter() - start
    ok = not disagreements and elapsed < 300
    return ok, (f"{count} automata (seed {SEED}), {nonempty} nonempty, "
                f"disagreements={disagreements or 0}, time={elapsed:.1f}s (limit 300s)")


def criterion_5():
    problems, notes = [], []
    models = {f"fischer{n}_{v}": gen_fischer(n, v) for n in (2, 3) for v in ("mutex", "liveness")}
    for n in range(2, 9):
        models[f"A{n}"] = gen_An(n, 1)
    for name, a in models.items():
        v = check_optimized(a)
        if v.stats.gzg_nodes_expanded != 0:
            problems.append(f"{name} expanded {v.stats.gzg_nodes_expanded} GZG nodes")
        if name.endswith("mutex"):
            zg = count_nodes(a, "zg")
            notes.append(f"{name}: visited {v.stats.nodes_visited} / ZG {zg}")
            if v.nonempty or v.stats.nodes_visited != zg:
                problems.append(f"{name}: verdict {v}, visited {v.stats.nodes_visited} vs ZG {zg}")
    return not problems, f"problems={problems or 'none'}; " + "; ".join(notes)


def _random_transition(rng, n, M):
    guard = tuple(Atom(rng.randint(1, n), rng.choice(["<", "<=", "=", ">=", ">"]), rng.randint(0, M))
                  for _ in range(rng.randint(0, 2)))
    reset = frozenset(x for x in range(1, n + 1) if rng.random() < 0.3)
    return Transition("p", "q", guard, reset)


def criterion_6():
    start = time.perf_counter()
    rng = random.Random(SEED)
    fails = []
    # (a) zone algebra on 1000 random zones
    for _ in range(1000):
        n, M = rng.randint(1, 3), rng.randint(0, 3)
        z = random_zone(rng, n, M)
        if canonical(z.dim, z.m) != z:
            fails.append("canonical")
        if z.extrapolate(M).extrapolate(M) != z.extrapolate(M):
            fails.append("approx")
        sub = z.constrain([(rng.randint(1, n), 0, rng.randint(0, 2 * M + 3))]) or z
        t = _random_transition(rng, n, M)
        small, big = fire(sub, t, M), fire(z, t, M)
        if small is not None and (big is None or not small <= big):
            fails.append("fire monotone")
    # (b) and (c) over every reachable symbolic node of the test models
    nodes = 0
    for name, a in named_models().items():
        sem = Semantics(a)
        zg, gzg = ZoneGraph(sem), GuessingZoneGraph(sem)
        zg.explore()
        gzg.explore()
        for node in zg.store.nodes:
            nodes += 1
            if not node.zone.orders_clocks():
                fails.append(f"orders_clocks {name}")
        for node in gzg.store.nodes:
            nodes += 1
            if not node.zone.orders_clocks():
                fails.append(f"orders_clocks {name}")
            if not guess_respects_order(node):
                fails.append(f"guess order {name}")
    # (d) closure chain on 200 zones at |X| <= 3, M <= 2
    for _ in range(200):
        n, M = rng.randint(1, 3), rng.randint(0, 2)
        if not chain_holds(random_zone(rng, n, M), M):
            fails.append("closure chain")
    elapsed = time.perf_counter() - start
    ok = not fails and elapsed < 120
    return ok, f"failures={fails[:5] or 'none'} over {nodes} symbolic nodes; time={elapsed:.1f}s (limit 120s)"


def criterion_7(count=500):
    checked, bad = 0, []
    models = list(named_models().items()) + [(f"corpus#{k}", a) for k, a in enumerate(corpus(count))]
    for name, a in models:
        for algo, check in CHECKERS.items():
            v = check(a)
            if not v.nonempty:
                continue
            checked += 1
            try:
                validate(v)
            except InvalidWitness as e:
                bad.append(f"{name}/{algo}: {e}")
    return not bad and checked > 0, f"{checked} lassos replayed, invalid={bad[:3] or 0}"


CRITERIA = {
    1: ("fixture verdicts", criterion_1),
    2: ("exponential-vs-linear blowup", criterion_2),
    3: ("GZG size bound", criterion_3),
    4: ("oracle equivalence", criterion_4),
    5: ("zero-cost non-Zenoness", criterion_5),
    6: ("structural invariants", criterion_6),
    7: ("witness validity", criterion_7),
}


def _line(n):
    title, fn = CRITERIA[n]
    ok, detail = fn()
    return ok, f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {title} | {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, line = _line(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_line(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
