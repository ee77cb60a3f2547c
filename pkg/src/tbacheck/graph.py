"""On-the-fly zone graphs and guessing zone graphs.

Nodes are interned into dense integer ids by a :class:`NodeStore`; the
successor lists are computed once per node and cached, so repeated passes
(restarts inside an SCC, DOT export after a check) never redo zone work.
"""

from __future__ import annotations

from typing import Callable, Iterable, NamedTuple, Optional

from .model import TBA, max_constant
from .zone import TAU_PROFILE, EdgeProfile, Zone, profile_of


class NodeLimitExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"node limit of {limit} exceeded")
        self.limit = limit


class ZGNode(NamedTuple):
    state: str
    zone: Zone


class GZGNode(NamedTuple):
    state: str
    zone: Zone
    guess: frozenset

    @property
    def projection(self) -> ZGNode:
        return ZGNode(self.state, self.zone)


class Edge(NamedTuple):
    """``label`` is the transition index, or ``None`` for a tau edge."""

    label: Optional[int]
    profile: EdgeProfile
    dst: int


class NodeStore:
    def __init__(self, limit: Optional[int] = None):
        self.index: dict = {}
        self.nodes: list = []
        self.limit = limit

    def intern(self, node) -> int:
        i = self.index.get(node)
        if i is None:
            if self.limit is not None and len(self.nodes) >= self.limit:
                raise NodeLimitExceeded(self.limit)
            i = len(self.nodes)
            self.index[node] = i
            self.nodes.append(node)
        return i

    def __len__(self) -> int:
        return len(self.nodes)


class _EdgeInfo(NamedTuple):
    profile: EdgeProfile
    target: Zone


class Semantics:
    """Zone successor computation for one automaton, memoised per (zone, transition)."""

    def __init__(self, a: TBA):
        self.a = a
        self.M = max_constant(a)
        self.clocks = frozenset(range(1, a.n_clocks + 1))
        self.out = a.outgoing()
        self._cache: dict[tuple[Zone, int], Optional[_EdgeInfo]] = {}

    def initial_zone(self) -> Zone:
        return Zone.origin(self.a.n_clocks)

    def edge(self, z: Zone, k: int) -> Optional[_EdgeInfo]:
        key = (z, k)
        try:
            return self._cache[key]
        except KeyError:
            pass
        t = self.a.transitions[k]
        sliced = z.up().and_guard(t.guard)
        info = None
        if sliced is not None:
            target = sliced.reset(t.reset).extrapolate(self.M)
            info = _EdgeInfo(profile_of(sliced, t.reset), target)
        self._cache[key] = info
        return info


class _Graph:
    def __init__(self, sem: Semantics, limit: Optional[int] = None):
        self.sem = sem
        self.a = sem.a
        self.store = NodeStore(limit)
        self._succ: dict[int, list[Edge]] = {}

    def node(self, i: int):
        return self.store.nodes[i]

    def successors(self, i: int) -> list[Edge]:
        edges = self._succ.get(i)
        if edges is None:
            edges = self._expand(self.store.nodes[i])
            self._succ[i] = edges
        return edges

    def expanded(self, i: int) -> bool:
        return i in self._succ

    def accepting(self, i: int) -> bool:
        return self.store.nodes[i].state in self.a.accepting

    def clear(self, i: int) -> bool:
        return False

    def _expand(self, node) -> list[Edge]:
        raise NotImplementedError

    def explore(self) -> int:
        """Build the whole reachable graph; returns its node count."""
        stack = [self.initial()]
        seen = {stack[0]}
        while stack:
            i = stack.pop()
            for e in self.successors(i):
                if e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        return len(seen)

    def initial(self) -> int:
        raise NotImplementedError


class ZoneGraph(_Graph):
    def initial(self) -> int:
        return self.store.intern(zg_initial(self.a, self.sem))

    def _expand(self, node: ZGNode) -> list[Edge]:
        out = []
        for k in self.sem.out[node.state]:
            info = self.sem.edge(node.zone, k)
            if info is None:
                continue
            dst = ZGNode(self.a.transitions[k].dst, info.target)
            out.append(Edge(k, info.profile, self.store.intern(dst)))
        return out


class GuessingZoneGraph(_Graph):
    """Guessing zone graph, optionally restricted to a set of zone-graph nodes.

    With ``within`` given, action edges leading outside that set are dropped
    and the graph is rooted at ``root`` (a zone-graph node of the set) with the
    full guess.
    """

    def __init__(self, sem: Semantics, limit: Optional[int] = None,
                 within: Optional[set] = None, root: Optional[ZGNode] = None):
        super().__init__(sem, limit)
        self.within = within
        if within is not None:
            if root is None or root not in within:
                raise ValueError("restriction root is not part of the node set")
        self.root = root

    def initial(self) -> int:
        if self.root is not None:
            return self.store.intern(GZGNode(self.root.state, self.root.zone, self.sem.clocks))
        return self.store.intern(gzg_initial(self.a, self.sem))

    def clear(self, i: int) -> bool:
        return not self.store.nodes[i].guess

    def _expand(self, node: GZGNode) -> list[Edge]:
        out = []
        for label, profile, dst in gzg_edges(node, self.sem):
            if self.within is not None and label is not None and dst.projection not in self.within:
                continue
            out.append(Edge(label, profile, self.store.intern(dst)))
        return out


# -- node-level API -------------------------------------------------------


def zg_initial(a: TBA, sem: Optional[Semantics] = None) -> ZGNode:
    """The origin point zone in the initial state (no delay closure)."""
    return ZGNode(a.init, Zone.origin(a.n_clocks))


def zg_successors(node: ZGNode, a: TBA, sem: Optional[Semantics] = None) -> list[tuple[int, ZGNode]]:
    sem = sem or Semantics(a)
    out = []
    for k in sem.out[node.state]:
        info = sem.edge(node.zone, k)
        if info is not None:
            out.append((k, ZGNode(a.transitions[k].dst, info.target)))
    return out


def gzg_initial(a: TBA, sem: Optional[Semantics] = None) -> GZGNode:
    return GZGNode(a.init, Zone.origin(a.n_clocks), frozenset(range(1, a.n_clocks + 1)))


def gzg_edges(node: GZGNode, sem: Semantics) -> list[tuple[Optional[int], EdgeProfile, GZGNode]]:
    """Action edges in declaration order, then the clearing tau edge if the guess is nonempty.

    An action edge needs a delay after which the guard holds with every clock
    outside the guess strictly positive.  On the canonical slice
    ``up(Z) & guard`` that fails exactly when one of those clocks is pinned
    to 0, so the zero-checked set decides it.
    """
    unguessed = sem.clocks - node.guess
    out = []
    for k in sem.out[node.state]:
        info = sem.edge(node.zone, k)
        if info is None or info.profile.zero_checked & unguessed:
            continue
        t = sem.a.transitions[k]
        out.append((k, info.profile, GZGNode(t.dst, info.target, node.guess | t.reset)))
    if node.guess:
        out.append((None, TAU_PROFILE, GZGNode(node.state, node.zone, frozenset())))
    return out


def gzg_successors(node: GZGNode, a: TBA, sem: Optional[Semantics] = None):
    return [(label, profile, dst) for label, profile, dst in gzg_edges(node, sem or Semantics(a))]


def gzg_restricted_successors(node: GZGNode, scc_nodes: set, a: TBA, sem: Optional[Semantics] = None):
    if node.projection not in scc_nodes:
        raise ValueError("node does not project into the given SCC")
    return [
        (label, profile, dst)
        for label, profile, dst in gzg_edges(node, sem or Semantics(a))
        if label is None or dst.projection in scc_nodes
    ]


def reachable_zones(graph: _Graph) -> Iterable:
    graph.explore()
    return list(graph.store.nodes)


def guess_respects_order(node: GZGNode) -> bool:
    """Is the guess downward closed: ``y`` in Y and ``Z |= x <= y`` imply ``x`` in Y?"""
    z = node.zone
    for y in node.guess:
        for x in range(1, z.dim):
            if x not in node.guess and z.implies_le(x, y):
                return False
    return True


def count_nodes(a: TBA, kind: str = "zg", where: Optional[Callable] = None) -> int:
    """Size of the reachable ZG or GZG, optionally counting only nodes matching ``where``."""
    sem = Semantics(a)
    g = ZoneGraph(sem) if kind == "zg" else GuessingZoneGraph(sem)
    g.explore()
    if where is None:
        return len(g.store)
    return sum(1 for n in g.store.nodes if where(n))
