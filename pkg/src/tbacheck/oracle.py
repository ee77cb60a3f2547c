"""Region-graph decision procedure and region bookkeeping for cross-checking.

Everything here is exact and brute force, so it is capped at three clocks
and maximal constant 2.  Intersections with zones go through a small
difference-constraint solver of its own (bounds are ``(value, closed)``
pairs) rather than through the DBM code it is meant to check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .emptiness import Verdict
from .model import TBA, max_constant
from .zone import INF, Zone

MAX_CLOCKS = 3
MAX_CONSTANT = 2


class CapExceeded(ValueError):
    pass


def _check_caps(n: int, M: int):
    if n > MAX_CLOCKS or M > MAX_CONSTANT:
        raise CapExceeded(
            f"region oracle is limited to {MAX_CLOCKS} clocks and constants <= {MAX_CONSTANT} "
            f"(got {n} clocks, M={M})"
        )


@dataclass(frozen=True)
class Region:
    """``ints[i]`` is the integer part of clock ``i+1`` or ``None`` above M.

    ``fracs[i]`` ranks the fractional part: 0 when it is zero, 1..K ordering
    the nonzero ones (equal ranks mean equal fractional parts), ``None`` above M.
    """

    ints: tuple
    fracs: tuple

    def __str__(self) -> str:
        parts = []
        for i, (k, f) in enumerate(zip(self.ints, self.fracs), start=1):
            if k is None:
                parts.append(f"x{i}>M")
            elif f == 0:
                parts.append(f"x{i}={k}")
            else:
                parts.append(f"{k}<x{i}<{k + 1}[{f}]")
        return " ".join(parts) or "()"


def _normalise(ints: Sequence, fracs: Sequence) -> Region:
    """Make nonzero fractional ranks dense again (1..K)."""
    present = sorted({f for f in fracs if f})
    dense = {f: r for r, f in enumerate(present, start=1)}
    return Region(tuple(ints), tuple(None if f is None else (dense[f] if f else 0) for f in fracs))


def _weak_orders(items: list) -> Iterator[dict]:
    """All ways to rank ``items`` with ties allowed, ranks dense from 1."""
    n = len(items)
    if n == 0:
        yield {}
        return
    for ranks in itertools.product(range(1, n + 1), repeat=n):
        used = set(ranks)
        if used == set(range(1, len(used) + 1)):
            yield dict(zip(items, ranks))


def enumerate_regions(n: int, M: int) -> list[Region]:
    _check_caps(n, M)
    per_clock = [None] + [(k, True) for k in range(M + 1)] + [(k, False) for k in range(M)]
    out = []
    for choice in itertools.product(per_clock, repeat=n):
        frac_clocks = [i for i, c in enumerate(choice) if c is not None and not c[1]]
        for order in _weak_orders(frac_clocks):
            ints, fracs = [], []
            for i, c in enumerate(choice):
                if c is None:
                    ints.append(None)
                    fracs.append(None)
                else:
                    ints.append(c[0])
                    fracs.append(0 if c[1] else order[i])
            out.append(Region(tuple(ints), tuple(fracs)))
    return out


def region_of(values: Sequence, M: int) -> Region:
    vals = [Fraction(v) for v in values]
    if any(v < 0 for v in vals):
        raise ValueError("clock values must be nonnegative")
    ints, raw = [], []
    for v in vals:
        if v > M:
            ints.append(None)
            raw.append(None)
        else:
            k = v.numerator // v.denominator
            ints.append(k)
            raw.append(v - k)
    distinct = sorted({f for f in raw if f})
    rank = {f: r for r, f in enumerate(distinct, start=1)}
    return Region(tuple(ints), tuple(None if f is None else (rank[f] if f else 0) for f in raw))


def representative(r: Region, M: int) -> tuple[Fraction, ...]:
    n = len(r.ints)
    step = Fraction(1, n + 1)
    return tuple(
        Fraction(M + 1) if k is None else k + f * step for k, f in zip(r.ints, r.fracs)
    )


# -- time successors, guards, resets ----------------------------------------


def _next_delay(r: Region, M: int) -> Optional[Region]:
    ints, fracs = list(r.ints), list(r.fracs)
    if all(k is None for k in ints):
        return None
    zero = [i for i, f in enumerate(fracs) if f == 0]
    if zero:
        for i in range(len(ints)):
            if fracs[i] is not None and fracs[i] > 0:
                fracs[i] += 1
        for i in zero:
            if ints[i] == M:
                ints[i] = None
                fracs[i] = None
            else:
                fracs[i] = 1
        return _normalise(ints, fracs)
    top = max(f for f in fracs if f is not None)
    for i, f in enumerate(fracs):
        if f == top:
            ints[i] += 1
            fracs[i] = 0
    return _normalise(ints, fracs)


def delay_closure(r: Region, M: int) -> list[Region]:
    """``r`` followed by every region reachable from it by letting time pass."""
    chain = [r]
    while True:
        nxt = _next_delay(chain[-1], M)
        if nxt is None:
            return chain
        chain.append(nxt)


def satisfies(r: Region, atom) -> bool:
    k, f = r.ints[atom.clock - 1], r.fracs[atom.clock - 1]
    c, rel = atom.const, atom.rel
    if k is None:
        return rel in (">", ">=")
    if f == 0:
        return {"<": k < c, "<=": k <= c, "=": k == c, ">=": k >= c, ">": k > c}[rel]
    # value strictly between k and k+1
    if rel in ("<", "<="):
        return k + 1 <= c
    if rel == "=":
        return False
    return k >= c


def reset_region(r: Region, clocks) -> Region:
    ints, fracs = list(r.ints), list(r.fracs)
    for x in clocks:
        ints[x - 1] = 0
        fracs[x - 1] = 0
    return _normalise(ints, fracs)


def rg_successors(q: str, r: Region, a: TBA, M: Optional[int] = None) -> list:
    M = max_constant(a) if M is None else M
    _check_caps(a.n_clocks, M)
    out = []
    seen = set()
    for k, t in enumerate(a.transitions):
        if t.src != q:
            continue
        for r2 in delay_closure(r, M):
            if all(satisfies(r2, g) for g in t.guard):
                succ = (t.dst, reset_region(r2, t.reset))
                if (k, succ) not in seen:
                    seen.add((k, succ))
                    out.append((t, succ))
    return out


# -- emptiness ----------------------------------------------------------------


def region_graph(a: TBA) -> tuple[list, dict]:
    """Reachable region graph with delay steps kept as separate edges.

    A node's successors are its immediate time successor (same state) and
    the discrete moves enabled in the node's own region.  Keeping delays
    explicit means every region a run passes through is a node, which is
    what the per-clock progress condition has to look at.
    """
    M = max_constant(a)
    _check_caps(a.n_clocks, M)
    out_of = a.outgoing()
    init = (a.init, Region((0,) * a.n_clocks, (0,) * a.n_clocks))
    nodes = [init]
    index = {init: 0}
    succ: dict[int, set] = {}

    def intern(node) -> int:
        j = index.get(node)
        if j is None:
            j = index[node] = len(nodes)
            nodes.append(node)
        return j

    i = 0
    while i < len(nodes):
        q, r = nodes[i]
        out = set()
        later = _next_delay(r, M)
        if later is not None:
            out.add(intern((q, later)))
        for k in out_of[q]:
            t = a.transitions[k]
            if all(satisfies(r, g) for g in t.guard):
                out.add(intern((t.dst, reset_region(r, t.reset))))
        succ[i] = out
        i += 1
    return nodes, succ


def _sccs(vertices: set, succ: dict) -> list[set]:
    """Tarjan's algorithm, iterative, on the subgraph induced by ``vertices``."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out = []
    counter = 0
    for s in sorted(vertices):
        if s in index:
            continue
        work = [(s, iter(sorted(succ[s] & vertices)))]
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on_stack.add(s)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(succ[w] & vertices))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def _progressive_set(nodes, succ, comp: set, a: TBA, M: int) -> bool:
    """Search ``comp`` for a strongly connected, accepting node set meeting the per-clock condition."""
    work = [comp]
    while work:
        c = work.pop()
        for s in _sccs(c, succ):
            if len(s) == 1:
                v = next(iter(s))
                if v not in succ[v]:
                    continue
            if not any(nodes[v][0] in a.accepting for v in s):
                continue
            drop = set()
            for x in range(a.n_clocks):
                regions = [nodes[v][1] for v in s]
                if all(r.ints[x] is None for r in regions):
                    continue
                has_zero = any(r.ints[x] == 0 and r.fracs[x] == 0 for r in regions)
                has_pos = any(r.ints[x] is None or r.ints[x] > 0 or r.fracs[x] > 0 for r in regions)
                if has_zero and has_pos:
                    continue
                # this clock can only ever settle above M
                drop |= {v for v in s if nodes[v][1].ints[x] is not None}
            if not drop:
                return True
            rest = s - drop
            if rest:
                work.append(rest)
    return False


def rg_check(a: TBA) -> Verdict:
    nodes, succ = region_graph(a)
    M = max_constant(a)
    found = _progressive_set(nodes, succ, set(range(len(nodes))), a, M)
    return Verdict(found, "region" if found else None)


# -- zones versus regions ---------------------------------------------------------

# a bound is (value, closed): x_i - x_j <= value when closed, < value otherwise


def _badd(a, b):
    return (a[0] + b[0], a[1] and b[1])


def _feasible(n: int, constraints) -> bool:
    """Satisfiability of ``x_i - x_j (<|<=) c`` constraints over clocks 1..n and x_0 = 0."""
    d = n + 1
    m = [[None] * d for _ in range(d)]
    for i in range(d):
        m[i][i] = (0, True)
    for i, j, b in constraints:
        if m[i][j] is None or b < m[i][j]:
            m[i][j] = b
    for k in range(d):
        for i in range(d):
            if m[i][k] is None:
                continue
            for j in range(d):
                if m[k][j] is None:
                    continue
                s = _badd(m[i][k], m[k][j])
                if m[i][j] is None or s < m[i][j]:
                    m[i][j] = s
    return all(m[i][i] >= (0, True) for i in range(d))


def zone_constraints(z: Zone) -> list:
    """Read a DBM as constraint triples (the matrix layout is the only thing shared)."""
    d = z.dim
    out = []
    for i in range(d):
        for j in range(d):
            b = z.m[i * d + j]
            if i != j and b < INF:
                out.append((i, j, (b >> 1, bool(b & 1))))
    return out


def region_constraints(r: Region, M: int) -> list:
    out = []
    for i, (k, f) in enumerate(zip(r.ints, r.fracs), start=1):
        if k is None:
            out.append((0, i, (-M, False)))
        elif f == 0:
            out += [(i, 0, (k, True)), (0, i, (-k, True))]
        else:
            out += [(i, 0, (k + 1, False)), (0, i, (-k, False))]
    n = len(r.ints)
    for i in range(n):
        for j in range(n):
            if i == j or not r.fracs[i] or not r.fracs[j]:
                continue
            gap = r.ints[i] - r.ints[j]
            if r.fracs[i] < r.fracs[j]:
                out.append((i + 1, j + 1, (gap, False)))
            elif r.fracs[i] == r.fracs[j]:
                out.append((i + 1, j + 1, (gap, True)))
    return out


def _diagonal_classes(M: int, mode: str) -> list:
    """Constraint sets splitting ``x - y`` into the classes a d-region fixes."""
    if mode == "closed":
        # compare x - y with every integer in [-M, M] using <, = and >
        out = [[(1, 0, (-M, False))]]
        for c in range(-M, M + 1):
            out.append([(1, 0, (c, True)), (0, 1, (-c, True))])
            if c < M:
                out.append([(0, 1, (-c, False)), (1, 0, (c + 1, False))])
        out.append([(0, 1, (-M, False))])
        return out
    if mode == "sparse":
        # only x - y <= c for integers c strictly between -M and M
        cuts = list(range(-M + 1, M))
        if not cuts:
            return [[]]
        out = [[(1, 0, (cuts[0], True))]]
        for lo, hi in zip(cuts, cuts[1:]):
            out.append([(0, 1, (-lo, False)), (1, 0, (hi, True))])
        out.append([(0, 1, (-cuts[-1], False))])
        return out
    raise ValueError(f"unknown diagonal mode {mode!r}")


@dataclass(frozen=True)
class DRegion:
    region: Region
    diagonals: tuple  # class index of x_i - x_j for each pair i < j

    def constraints(self, M: int, mode: str) -> list:
        out = region_constraints(self.region, M)
        classes = _diagonal_classes(M, mode)
        pairs = itertools.combinations(range(1, len(self.region.ints) + 1), 2)
        for (i, j), c in zip(pairs, self.diagonals):
            # class constraints are written for x_1 - x_0; relabel onto x_i - x_j
            for a, b, bd in classes[c]:
                out.append((i if a == 1 else j, j if b == 0 else i, bd))
        return out


def intersects(n: int, *systems) -> bool:
    return _feasible(n, [c for s in systems for c in s])


def included(n: int, inner: list, outer: list) -> bool:
    """Is the convex set ``inner`` inside the zone given by ``outer`` constraints?"""
    for i, j, (v, closed) in outer:
        # negation of x_i - x_j (<=|<) v is x_j - x_i (<|<=) -v
        if _feasible(n, inner + [(j, i, (-v, not closed))]):
            return False
    return True


def closure_sets(z: Zone, M: int, diagonals: str = "closed") -> tuple[set, set]:
    """Regions and d-regions meeting ``z``.

    ``diagonals="closed"`` compares differences with every integer in
    ``[-M, M]`` by ``<``, ``=`` and ``>``; ``"sparse"`` only records
    ``x - y <= c`` for integers strictly inside ``(-M, M)``.
    """
    n = z.clocks
    _check_caps(n, M)
    zc = zone_constraints(z)
    regions = {r for r in enumerate_regions(n, M) if intersects(n, zc, region_constraints(r, M))}
    classes = _diagonal_classes(M, diagonals)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    dregions = set()
    for r in regions:
        base = zc + region_constraints(r, M)

        def extend(k: int, chosen: tuple, acc: list):
            if k == len(pairs):
                dregions.add(DRegion(r, chosen))
                return
            i, j = pairs[k]
            for c, cls in enumerate(classes):
                extra = [(i if a == 1 else j, j if b == 0 else i, bd) for a, b, bd in cls]
                if _feasible(n, acc + extra):
                    extend(k + 1, chosen + (c,), acc + extra)

        extend(0, (), base)
    return dregions, regions
