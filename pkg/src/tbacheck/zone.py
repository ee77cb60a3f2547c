"""Difference bound matrices over clocks ``x_1..x_n`` plus the reference clock ``x_0 = 0``.

A bound on ``x_i - x_j`` is packed into one integer: ``(c, <=)`` is ``2c + 1``
and ``(c, <)`` is ``2c``.  Comparing packed bounds with ``<`` is then the
usual bound order, and :data:`INF` stands for "no bound".  Entry ``m[i][j]``
of a matrix of dimension ``d`` lives at ``m[i * d + j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

INF = 1 << 62
LE_ZERO = 1  # (0, <=)
LT_ZERO = 0  # (0, <)


class BoundOverflow(ArithmeticError):
    pass


def bound(value: int, strict: bool = False) -> int:
    return 2 * value + (0 if strict else 1)


def le(value: int) -> int:
    return 2 * value + 1


def lt(value: int) -> int:
    return 2 * value


def decode(b: int) -> Optional[tuple[int, bool]]:
    """Return ``(value, strict)`` for a packed bound, ``None`` for infinity."""
    if b >= INF:
        return None
    return b >> 1, not (b & 1)


def bound_add(a: int, b: int) -> int:
    if a >= INF or b >= INF:
        return INF
    s = a + b - ((a | b) & 1)
    if s >= INF or s <= -INF:
        raise BoundOverflow(f"bound sum out of range: {a} + {b}")
    return s


def _close(m: list[int], dim: int) -> bool:
    """Floyd-Warshall in place.  Returns False when a negative cycle shows up."""
    rng = range(dim)
    for k in rng:
        rk = k * dim
        for i in rng:
            ri = i * dim
            mik = m[ri + k]
            if mik >= INF:
                continue
            for j in rng:
                mkj = m[rk + j]
                if mkj >= INF:
                    continue
                s = mik + mkj - ((mik | mkj) & 1)
                if s < m[ri + j]:
                    m[ri + j] = s
        if m[rk + k] < LE_ZERO:
            return False
    for i in rng:
        if m[i * dim + i] < LE_ZERO:
            return False
    return True


def _tighten(m: list[int], dim: int, i: int, j: int, b: int) -> bool:
    """Intersect a canonical matrix with ``x_i - x_j < b`` and re-close it in O(dim^2)."""
    if b >= m[i * dim + j]:
        return True
    if bound_add(m[j * dim + i], b) < LE_ZERO:
        return False
    m[i * dim + j] = b
    rng = range(dim)
    for k in rng:
        rk = k * dim
        mki = m[rk + i]
        if mki >= INF:
            continue
        left = bound_add(mki, b)
        for l in rng:
            mjl = m[j * dim + l]
            if mjl >= INF:
                continue
            s = left + mjl - ((left | mjl) & 1)
            if s < m[rk + l]:
                m[rk + l] = s
    return True


class Zone:
    """A canonical, nonempty DBM.  Immutable; equality and hashing are structural."""

    __slots__ = ("dim", "m", "_hash")

    def __init__(self, dim: int, m: Sequence[int]):
        self.dim = dim
        self.m = tuple(m)
        self._hash = hash(self.m)

    @property
    def clocks(self) -> int:
        return self.dim - 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Zone) and self._hash == other._hash and self.m == other.m

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Zone({self.describe()})"

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.m[i * self.dim + j]

    def __le__(self, other: "Zone") -> bool:
        return self.included_in(other)

    # -- constructors ---------------------------------------------------

    @classmethod
    def origin(cls, clocks: int) -> "Zone":
        """The point zone where every clock equals zero."""
        dim = clocks + 1
        return cls(dim, [LE_ZERO] * (dim * dim))

    @classmethod
    def universe(cls, clocks: int) -> "Zone":
        dim = clocks + 1
        m = [INF] * (dim * dim)
        for i in range(dim):
            m[i * dim + i] = LE_ZERO
            m[i] = LE_ZERO  # row 0: -x_i <= 0
        return cls(dim, m)

    # -- queries --------------------------------------------------------

    def included_in(self, other: "Zone") -> bool:
        return all(a <= b for a, b in zip(self.m, other.m))

    def upper(self, x: int) -> int:
        return self.m[x * self.dim]

    def lower(self, x: int) -> int:
        return self.m[x]

    def contains_point(self, values: Sequence) -> bool:
        """Membership of a valuation given as ``values[i-1]`` for clock ``i``."""
        v = (0, *values)
        d = self.dim
        for i in range(d):
            for j in range(d):
                b = self.m[i * d + j]
                if b >= INF:
                    continue
                c, strict = b >> 1, not (b & 1)
                diff = v[i] - v[j]
                if diff > c or (strict and diff == c):
                    return False
        return True

    def implies_le_zero(self, x: int) -> bool:
        return self.m[x * self.dim] <= LE_ZERO

    def orders_clocks(self) -> bool:
        d = self.dim
        for x in range(1, d):
            for y in range(x + 1, d):
                if self.m[x * d + y] > LE_ZERO and self.m[y * d + x] > LE_ZERO:
                    return False
        return True

    def implies_le(self, x: int, y: int) -> bool:
        """Does the zone imply ``x <= y``?"""
        return self.m[x * self.dim + y] <= LE_ZERO

    def describe(self, names: Optional[Sequence[str]] = None) -> str:
        """Constraint string, e.g. ``x>=1 & y-x<=2``.  ``true`` for the universe."""
        d = self.dim
        if names is None:
            names = [f"x{i}" for i in range(1, d)]
        parts = []
        for i in range(1, d):
            lo = decode(self.m[i])
            hi = decode(self.m[i * d])
            n = names[i - 1]
            if lo is not None and hi is not None and -lo[0] == hi[0] and not lo[1] and not hi[1]:
                parts.append(f"{n}={hi[0]}")
                continue
            if lo is not None and (lo[0] != 0 or lo[1]):
                parts.append(f"{n}{'>' if lo[1] else '>='}{-lo[0]}")
            if hi is not None:
                parts.append(f"{n}{'<' if hi[1] else '<='}{hi[0]}")
        for i in range(1, d):
            for j in range(1, d):
                if i == j:
                    continue
                b = decode(self.m[i * d + j])
                if b is None:
                    continue
                # skip differences already implied by the single-clock bounds
                implied = bound_add(self.m[i * d], self.m[j])
                if implied <= self.m[i * d + j]:
                    continue
                parts.append(f"{names[i - 1]}-{names[j - 1]}{'<' if b[1] else '<='}{b[0]}")
        return " & ".join(parts) if parts else "true"

    # -- operations -----------------------------------------------------

    def up(self) -> "Zone":
        """Delay closure: drop the upper bounds of every clock."""
        d = self.dim
        m = list(self.m)
        for i in range(1, d):
            m[i * d] = INF
        return Zone(d, m)

    def constrain(self, constraints: Iterable[tuple[int, int, int]]) -> Optional["Zone"]:
        """Intersect with ``x_i - x_j`` bounds given as ``(i, j, packed)``; ``None`` if empty."""
        d = self.dim
        m = list(self.m)
        for i, j, b in constraints:
            if not _tighten(m, d, i, j, b):
                return None
        return Zone(d, m)

    def and_guard(self, guard) -> Optional["Zone"]:
        return self.constrain(guard_constraints(guard))

    def reset(self, clocks: Iterable[int]) -> "Zone":
        d = self.dim
        m = list(self.m)
        for x in clocks:
            rx = x * d
            for j in range(d):
                m[rx + j] = m[j]
                m[j * d + x] = m[j * d]
            m[rx] = LE_ZERO
            m[x] = LE_ZERO
            m[rx + x] = LE_ZERO
        return Zone(d, m)

    def extrapolate(self, M: int) -> "Zone":
        """Classical max-constant extrapolation, re-canonicalised."""
        d = self.dim
        upper = le(M)
        lower = lt(-M)
        m = list(self.m)
        changed = False
        for i in range(d):
            ri = i * d
            for j in range(d):
                if i == j:
                    continue
                b = m[ri + j]
                if b >= INF:
                    continue
                if b > upper:
                    m[ri + j] = INF
                    changed = True
                elif b < lower:
                    m[ri + j] = lower
                    changed = True
        if not changed:
            return self
        _close(m, d)
        return Zone(d, m)


def canonical(dim: int, m: Sequence[int]) -> Optional[Zone]:
    """Tightest equivalent DBM, or ``None`` when the constraints are unsatisfiable."""
    work = list(m)
    for i in range(dim):
        if work[i * dim + i] > LE_ZERO:
            work[i * dim + i] = LE_ZERO
    if not _close(work, dim):
        return None
    return Zone(dim, work)


def atom_constraints(clock: int, rel: str, c: int) -> list[tuple[int, int, int]]:
    if rel == "<":
        return [(clock, 0, lt(c))]
    if rel == "<=":
        return [(clock, 0, le(c))]
    if rel == "=":
        return [(clock, 0, le(c)), (0, clock, le(-c))]
    if rel == ">=":
        return [(0, clock, le(-c))]
    if rel == ">":
        return [(0, clock, lt(-c))]
    raise ValueError(f"unknown relation {rel!r}")


def guard_constraints(guard) -> list[tuple[int, int, int]]:
    out: list[tuple[int, int, int]] = []
    for atom in guard:
        out.extend(atom_constraints(atom.clock, atom.rel, atom.const))
    return out


def up(z: Zone) -> Zone:
    return z.up()


def and_guard(z: Zone, guard) -> Optional[Zone]:
    return z.and_guard(guard)


def reset(z: Zone, clocks: Iterable[int]) -> Zone:
    return z.reset(clocks)


def approx(z: Zone, M: int) -> Zone:
    return z.extrapolate(M)


def fire(z: Zone, transition, M: int) -> Optional[Zone]:
    """Successor zone along ``transition``: elapse, guard, reset, extrapolate."""
    t = z.up().and_guard(transition.guard)
    if t is None:
        return None
    return t.reset(transition.reset).extrapolate(M)


@dataclass(frozen=True)
class EdgeProfile:
    """Clock facts about one symbolic edge, read off ``up(Z) & guard``.

    ``bounded``: clocks with a finite upper bound; ``zero_checked``: clocks
    forced to zero; ``lower1``: clocks forced to be at least one; ``reset``:
    the transition's reset set.  Tau edges carry empty sets.
    """

    bounded: frozenset = frozenset()
    reset: frozenset = frozenset()
    lower1: frozenset = frozenset()
    zero_checked: frozenset = frozenset()
    is_tau: bool = False


TAU_PROFILE = EdgeProfile(is_tau=True)


def profile_of(t_zone: Zone, reset_set) -> EdgeProfile:
    d = t_zone.dim
    m = t_zone.m
    bounded = []
    zero = []
    lower1 = []
    one = le(-1)
    for x in range(1, d):
        hi = m[x * d]
        if hi < INF:
            bounded.append(x)
            if hi <= LE_ZERO:
                zero.append(x)
        if m[x] <= one:
            lower1.append(x)
    return EdgeProfile(frozenset(bounded), frozenset(reset_set), frozenset(lower1), frozenset(zero))


def edge_profile(z: Zone, transition) -> Optional[EdgeProfile]:
    """Profile of ``transition`` taken from ``z``; ``None`` when the edge is absent."""
    t = z.up().and_guard(transition.guard)
    if t is None:
        return None
    return profile_of(t, transition.reset)


def orders_clocks(z: Zone) -> bool:
    return z.orders_clocks()
