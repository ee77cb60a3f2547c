"""Replay of symbolic lassos.

The validator recomputes every edge from the zone primitives instead of
trusting the profiles the search recorded, then checks the facts the
reported rule depends on.
"""

from __future__ import annotations

from .emptiness import Lasso, Verdict
from .model import max_constant
from .zone import INF, LE_ZERO, LT_ZERO, Zone, le


class InvalidWitness(AssertionError):
    pass


def _slice(z: Zone, t):
    return z.up().and_guard(t.guard)


def _step(lasso: Lasso, M: int, src, label, dst) -> dict:
    """Check one edge and return the clock facts it contributes."""
    a = lasso.automaton
    if label is None:
        if lasso.kind != "gzg":
            raise InvalidWitness("tau edge in a zone-graph lasso")
        if (src.state, src.zone) != (dst.state, dst.zone):
            raise InvalidWitness("tau edge changes state or zone")
        if not src.guess or dst.guess:
            raise InvalidWitness("tau edge must go from a nonempty guess to the empty one")
        return {"bounded": set(), "reset": set(), "lower1": set(), "zero": set()}
    t = a.transitions[label]
    if t.src != src.state or t.dst != dst.state:
        raise InvalidWitness(f"transition {label} does not join {src.state} and {dst.state}")
    sliced = _slice(src.zone, t)
    if sliced is None:
        raise InvalidWitness(f"transition {label} is disabled from {src.zone}")
    if sliced.reset(t.reset).extrapolate(M) != dst.zone:
        raise InvalidWitness(f"successor zone mismatch on transition {label}")
    d = sliced.dim
    if lasso.kind == "gzg":
        strictly_positive = [(0, x, LT_ZERO) for x in range(1, d) if x not in src.guess]
        if sliced.constrain(strictly_positive) is None:
            raise InvalidWitness(f"transition {label} needs a clock outside the guess to be 0")
        if dst.guess != src.guess | t.reset:
            raise InvalidWitness("guess not updated by the reset set")
    return {
        "bounded": {x for x in range(1, d) if sliced[x, 0] < INF},
        "reset": set(t.reset),
        "lower1": {x for x in range(1, d) if sliced[0, x] <= le(-1)},
        "zero": {x for x in range(1, d) if sliced[x, 0] <= LE_ZERO},
    }


def validate(verdict: Verdict) -> None:
    """Raise :class:`InvalidWitness` unless the lasso of a NonEmpty verdict holds up."""
    if not verdict.nonempty:
        raise InvalidWitness("Empty verdicts carry no witness")
    lasso = verdict.witness
    if lasso is None:
        raise InvalidWitness("missing witness")
    a = lasso.automaton
    M = max_constant(a)
    stem, cycle = lasso.stem, lasso.cycle
    if len(stem) != len(lasso.stem_labels) + 1 or len(cycle) != len(lasso.cycle_labels) + 1:
        raise InvalidWitness("label count does not match node count")
    if len(cycle) < 2:
        raise InvalidWitness("cycle has no edge")
    first = stem[0]
    if first.state != a.init or first.zone != Zone.origin(a.n_clocks):
        raise InvalidWitness("stem does not start at the initial node")
    if lasso.kind == "gzg" and first.guess != frozenset(range(1, a.n_clocks + 1)):
        raise InvalidWitness("initial guess is not the full clock set")
    if stem[-1] != cycle[0] or cycle[0] != cycle[-1]:
        raise InvalidWitness("cycle does not close on the stem's last node")

    for i, label in enumerate(lasso.stem_labels):
        _step(lasso, M, stem[i], label, stem[i + 1])
    facts = [_step(lasso, M, cycle[i], label, cycle[i + 1]) for i, label in enumerate(lasso.cycle_labels)]

    bounded = set().union(*(f["bounded"] for f in facts))
    reset = set().union(*(f["reset"] for f in facts))
    lower1 = set().union(*(f["lower1"] for f in facts))
    zero = set().union(*(f["zero"] for f in facts))

    if not any(n.state in a.accepting for n in cycle):
        raise InvalidWitness("cycle has no accepting node")
    rule = verdict.rule
    if rule == "gzg_clear":
        if lasso.kind != "gzg" or not any(not n.guess for n in cycle):
            raise InvalidWitness("cycle has no clear node")
        if not bounded <= reset:
            raise InvalidWitness(f"clocks {sorted(bounded - reset)} bounded but never reset")
    elif rule == "zero_check_free":
        if zero:
            raise InvalidWitness("cycle contains a zero check")
        if not bounded <= reset:
            raise InvalidWitness(f"clocks {sorted(bounded - reset)} bounded but never reset")
    elif rule == "lower_bound":
        if not lower1 & reset:
            raise InvalidWitness("no clock is both reset and forced to at least 1 on the cycle")
    elif rule == "snz":
        # the transform's extra clock must be forced to 1 before every accepting visit
        z = a.n_clocks
        if z not in lower1 or z not in reset:
            raise InvalidWitness("cycle does not let the non-Zeno clock reach 1")
    else:
        raise InvalidWitness(f"unknown rule {rule!r}")
