"""Timed Büchi automata: data model, network product and the strongly non-Zeno transformation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

RELATIONS = ("<", "<=", "=", ">=", ">")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    """``clock rel const``; ``clock`` is the 1-based clock index."""

    clock: int
    rel: str
    const: int

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ModelError(f"unknown relation {self.rel!r}")
        if self.const < 0:
            raise ModelError(f"negative constant {self.const}")
        if self.clock < 1:
            raise ModelError(f"clock index must be >= 1, got {self.clock}")


@dataclass(frozen=True)
class Transition:
    src: str
    dst: str
    guard: tuple[Atom, ...] = ()
    reset: frozenset[int] = frozenset()
    label: Optional[str] = None


@dataclass(frozen=True)
class TBA:
    states: tuple[str, ...]
    init: str
    clocks: tuple[str, ...]
    transitions: tuple[Transition, ...]
    accepting: frozenset[str]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.states:
            raise ModelError("no states declared")
        if len(set(self.states)) != len(self.states):
            raise ModelError("duplicate state names")
        if len(set(self.clocks)) != len(self.clocks):
            raise ModelError("duplicate clock names")
        known = set(self.states)
        if self.init not in known:
            raise ModelError(f"unknown initial state {self.init}")
        for q in self.accepting:
            if q not in known:
                raise ModelError(f"unknown accepting state {q}")
        n = len(self.clocks)
        for t in self.transitions:
            for q in (t.src, t.dst):
                if q not in known:
                    raise ModelError(f"unknown state {q}")
            for a in t.guard:
                if a.clock > n:
                    raise ModelError(f"unknown clock index {a.clock}")
            for x in t.reset:
                if not 1 <= x <= n:
                    raise ModelError(f"unknown clock index {x}")

    @property
    def n_clocks(self) -> int:
        return len(self.clocks)

    def clock_index(self, name: str) -> int:
        try:
            return self.clocks.index(name) + 1
        except ValueError:
            raise ModelError(f"unknown clock {name}") from None

    def clock_name(self, index: int) -> str:
        return self.clocks[index - 1]

    def outgoing(self) -> dict[str, list[int]]:
        """Transition indices grouped by source state, in declaration order."""
        out: dict[str, list[int]] = {q: [] for q in self.states}
        for k, t in enumerate(self.transitions):
            out[t.src].append(k)
        return out


def max_constant(a: TBA) -> int:
    """Largest constant in any guard; 0 for guard-free automata."""
    return max((atom.const for t in a.transitions for atom in t.guard), default=0)


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    k = 1
    while name in taken:
        name = f"{base}{k}"
        k += 1
    return name


def snz_transform(a: TBA) -> TBA:
    """Strongly non-Zeno version of ``a``.

    Every accepting ``q`` is split into an accepting copy ``q_1``, reachable
    only when the fresh clock has run for a full time unit (and which resets
    it), and a non-accepting copy ``q_2`` that owns the outgoing transitions.
    ``q_1`` falls through to ``q_2`` silently.
    """
    z_name = fresh_name("z", a.clocks)
    clocks = a.clocks + (z_name,)
    z = len(clocks)
    taken = set(a.states)
    one: dict[str, str] = {}
    two: dict[str, str] = {}
    for q in a.states:
        if q in a.accepting:
            one[q] = fresh_name(f"{q}_1", taken)
            taken.add(one[q])
            two[q] = fresh_name(f"{q}_2", taken)
            taken.add(two[q])

    def out_name(q: str) -> str:
        return two.get(q, q)

    states: list[str] = []
    for q in a.states:
        if q in a.accepting:
            states.extend((one[q], two[q]))
        else:
            states.append(q)

    transitions: list[Transition] = []
    for t in a.transitions:
        src = out_name(t.src)
        if t.dst in a.accepting:
            transitions.append(
                Transition(src, one[t.dst], t.guard + (Atom(z, ">=", 1),), t.reset | {z}, t.label)
            )
            transitions.append(Transition(src, two[t.dst], t.guard, t.reset, t.label))
        else:
            transitions.append(Transition(src, t.dst, t.guard, t.reset, t.label))
    for q in a.states:
        if q in a.accepting:
            transitions.append(Transition(one[q], two[q]))

    return TBA(
        states=tuple(states),
        init=out_name(a.init),
        clocks=clocks,
        transitions=tuple(transitions),
        accepting=frozenset(one.values()),
        name=f"snz({a.name})" if a.name else "snz",
    )


def _remap(t: Transition, clock_map: Sequence[int]) -> tuple[tuple[Atom, ...], frozenset[int]]:
    guard = tuple(Atom(clock_map[g.clock], g.rel, g.const) for g in t.guard)
    reset = frozenset(clock_map[x] for x in t.reset)
    return guard, reset


def product(processes: Sequence[TBA], accepting_component: int, name: str = "") -> TBA:
    """Synchronous product of a network.

    Clock names are global.  A labelled transition fires jointly with one
    transition carrying the same label in every process that uses the label;
    unlabelled transitions interleave.  Only discretely reachable composite
    states are built.  A composite state accepts when the local state of
    ``processes[accepting_component]`` does.
    """
    if not processes:
        raise ModelError("empty network")
    if not 0 <= accepting_component < len(processes):
        raise ModelError(
            f"accepting component {accepting_component} out of range for {len(processes)} processes"
        )
    if len(processes) == 1:
        p = processes[0]
        return TBA(p.states, p.init, p.clocks, p.transitions, p.accepting, name or p.name)

    clocks: list[str] = []
    for p in processes:
        for c in p.clocks:
            if c not in clocks:
                clocks.append(c)
    clock_maps = [[0] + [clocks.index(c) + 1 for c in p.clocks] for p in processes]

    # local moves: per process, per state, unlabelled list and label -> list
    local = []
    declaring: dict[str, list[int]] = {}
    for k, p in enumerate(processes):
        table: dict[str, dict[Optional[str], list]] = {q: {} for q in p.states}
        for t in p.transitions:
            guard, reset = _remap(t, clock_maps[k])
            table[t.src].setdefault(t.label, []).append((guard, reset, t.dst))
            if t.label is not None and k not in declaring.setdefault(t.label, []):
                declaring[t.label].append(k)
        local.append(table)
    labels = list(declaring)

    def cname(qs: tuple[str, ...]) -> str:
        return ".".join(qs)

    init = tuple(p.init for p in processes)
    seen = {init: cname(init)}
    names = {seen[init]}
    order = [init]
    transitions: list[Transition] = []
    frontier = [init]
    while frontier:
        qs = frontier.pop(0)
        moves = []
        for k, q in enumerate(qs):
            for guard, reset, dst in local[k][q].get(None, ()):
                nxt = qs[:k] + (dst,) + qs[k + 1 :]
                moves.append((guard, reset, nxt, None))
        for lab in labels:
            parts = declaring[lab]
            options = [local[k][qs[k]].get(lab, []) for k in parts]
            if not all(options):
                continue
            for combo in itertools.product(*options):
                nxt = list(qs)
                guard: tuple[Atom, ...] = ()
                reset: frozenset[int] = frozenset()
                for k, (g, r, dst) in zip(parts, combo):
                    nxt[k] = dst
                    guard += g
                    reset |= r
                moves.append((guard, reset, tuple(nxt), lab))
        for guard, reset, nxt, lab in moves:
            if nxt not in seen:
                seen[nxt] = cname(nxt)
                if seen[nxt] in names:
                    raise ModelError(f"composite state name clash: {seen[nxt]}")
                names.add(seen[nxt])
                order.append(nxt)
                frontier.append(nxt)
            transitions.append(Transition(seen[qs], seen[nxt], guard, reset, lab))

    acc_proc = processes[accepting_component]
    accepting = frozenset(seen[qs] for qs in order if qs[accepting_component] in acc_proc.accepting)
    return TBA(
        states=tuple(seen[qs] for qs in order),
        init=seen[init],
        clocks=tuple(clocks),
        transitions=tuple(transitions),
        accepting=accepting,
        name=name,
    )
