"""Model families: the A_n blowup chain, Fischer's protocol, and random desk-scale automata."""

from __future__ import annotations

import random
from importlib import resources
from typing import Optional

from .model import TBA, Atom, ModelError, Transition, product
from .syntax import parse_tba

FIXTURES = ("a1", "a2", "a3")


def fixture(name: str) -> TBA:
    """One of the bundled example automata ``a1``, ``a2``, ``a3``."""
    if name not in FIXTURES:
        raise ModelError(f"unknown fixture {name!r}")
    text = resources.files("tbacheck.fixtures").joinpath(f"{name}.tba").read_text()
    return parse_tba(text, name)


def fixture_source(name: str) -> str:
    if name not in FIXTURES:
        raise ModelError(f"unknown fixture {name!r}")
    return resources.files("tbacheck.fixtures").joinpath(f"{name}.tba").read_text()


def gen_An(n: int, d: int = 1) -> TBA:
    """The chain R_n V_n ... R_2 V_2 over clocks y, x_1..x_n.

    R_k resets x_k, x_{k-1}, ..., x_1 and then y one transition at a time;
    V_k loops between b^k and the accepting a^k, entering a^k under y <= d
    and resetting x_1..x_{k-1} on the way back.
    """
    if n < 2:
        raise ModelError("gen_An needs n >= 2")
    if d < 1:
        raise ModelError("gen_An needs d >= 1")
    clocks = ("y",) + tuple(f"x{i}" for i in range(1, n + 1))
    y = 1

    def x(i: int) -> int:
        return i + 1

    states: list[str] = []
    accepting: list[str] = []
    trans: list[Transition] = []
    prev_exit: Optional[str] = None
    for k in range(n, 1, -1):
        chain = [f"c{k}_{j}" for j in range(k + 1)] + [f"c{k}_y"]
        states.extend(chain)
        if prev_exit is not None:
            trans.append(Transition(prev_exit, chain[0]))
        for j in range(k):
            trans.append(Transition(chain[j], chain[j + 1], reset=frozenset({x(k - j)})))
        trans.append(Transition(chain[k], chain[k + 1], reset=frozenset({y})))
        b, a = f"b{k}", f"a{k}"
        states += [b, a]
        accepting.append(a)
        trans.append(Transition(chain[k + 1], b))
        trans.append(Transition(b, a, guard=(Atom(y, "<=", d),)))
        trans.append(Transition(a, b, reset=frozenset(x(i) for i in range(1, k))))
        prev_exit = b
    return TBA(tuple(states), states[0], clocks, tuple(trans), frozenset(accepting), f"A{n}_d{d}")


def _fischer_process(i: int) -> TBA:
    c = "x%d" % i
    return TBA(
        states=("A", "req", "wait", "cs"),
        init="A",
        clocks=(c,),
        transitions=(
            Transition("A", "req", (), frozenset({1}), f"read0_{i}"),
            Transition("req", "wait", (Atom(1, "<=", 1),), frozenset({1}), f"write_{i}"),
            Transition("wait", "req", (), frozenset({1}), f"retry_{i}"),
            Transition("wait", "cs", (Atom(1, ">", 1),), frozenset(), f"enter_{i}"),
            Transition("cs", "A", (), frozenset(), f"exit_{i}"),
        ),
        accepting=frozenset(),
        name=f"P{i}",
    )


def _fischer_id(n: int) -> TBA:
    """The shared ``id`` variable as a process whose state is the variable's value."""
    values = tuple(f"id{v}" for v in range(n + 1))
    trans = []
    for i in range(1, n + 1):
        trans.append(Transition("id0", "id0", label=f"read0_{i}"))
        trans.append(Transition("id0", "id0", label=f"retry_{i}"))
        trans.append(Transition(f"id{i}", f"id{i}", label=f"enter_{i}"))
        for v in range(n + 1):
            trans.append(Transition(f"id{v}", f"id{i}", label=f"write_{i}"))
            trans.append(Transition(f"id{v}", "id0", label=f"exit_{i}"))
    return TBA(values, "id0", (), tuple(trans), frozenset(), "id")


def _mutex_monitor(n: int) -> TBA:
    trans = []
    for i in range(1, n + 1):
        trans.append(Transition("free", "busy", label=f"enter_{i}"))
        trans.append(Transition("busy", "bad", label=f"enter_{i}"))
        trans.append(Transition("busy", "free", label=f"exit_{i}"))
    trans.append(Transition("bad", "bad"))
    return TBA(("free", "busy", "bad"), "free", (), tuple(trans), frozenset({"bad"}), "mutex")


def _liveness_monitor() -> TBA:
    # accepts runs in which process 1 is eventually never critical
    return TBA(
        ("watch", "starved"),
        "watch",
        (),
        (
            Transition("watch", "watch", label="enter_1"),
            Transition("watch", "starved"),
        ),
        frozenset({"starved"}),
        "liveness",
    )


def gen_fischer(n: int, variant: str = "mutex") -> TBA:
    """Fischer's protocol for ``n`` processes composed with a property monitor.

    Each process reads ``id == 0``, must write its own id within 1 time unit,
    and may enter once strictly more than 1 time unit has passed since the
    write, provided ``id`` still holds its number.  ``mutex`` accepts iff two
    processes can be critical together; ``liveness`` accepts runs where
    process 1 is eventually never critical.
    """
    if n < 2:
        raise ModelError("gen_fischer needs n >= 2")
    if variant == "mutex":
        monitor = _mutex_monitor(n)
    elif variant == "liveness":
        monitor = _liveness_monitor()
    else:
        raise ModelError(f"unknown Fischer variant {variant!r}")
    procs = [_fischer_process(i) for i in range(1, n + 1)]
    net = procs + [_fischer_id(n), monitor]
    return product(net, len(net) - 1, f"fischer{n}_{variant}")


def random_tba(rng: random.Random, max_states: int = 4, max_clocks: int = 3,
               max_const: int = 2, max_transitions: int = 8) -> TBA:
    """A random automaton for cross-checking against the region oracle.

    Guards lean towards small constants and equalities with 0 so that zero
    checks and blocking clocks show up often.
    """
    n_states = rng.randint(1, max_states)
    n_clocks = rng.randint(1, max_clocks)
    states = tuple(f"q{i}" for i in range(n_states))
    clocks = tuple("xyz"[i] if max_clocks <= 3 else f"c{i}" for i in range(n_clocks))
    rels = ("<", "<=", "=", ">=", ">")
    trans = []
    for _ in range(rng.randint(1, max_transitions)):
        src = rng.choice(states)
        dst = rng.choice(states)
        guard = []
        for _ in range(rng.choice((0, 0, 1, 1, 2))):
            c = rng.randint(1, n_clocks)
            rel = rng.choice(rels)
            k = rng.choice((0, 0, 1, 2)) if max_const >= 2 else rng.randint(0, max_const)
            guard.append(Atom(c, rel, min(k, max_const)))
        reset = frozenset(c for c in range(1, n_clocks + 1) if rng.random() < 0.35)
        trans.append(Transition(src, dst, tuple(guard), reset))
    accepting = frozenset(q for q in states if rng.random() < 0.5) or frozenset({rng.choice(states)})
    return TBA(states, states[0], clocks, tuple(trans), accepting)
