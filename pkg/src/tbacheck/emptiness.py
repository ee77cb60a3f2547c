"""Büchi emptiness by on-the-fly SCC decomposition.

The core is Couvreur's algorithm: a DFS keeps a stack of SCC roots, and
every edge that closes a cycle merges the roots above its target into one
candidate SCC.  Each candidate carries an :class:`SccSummary` of the facts
seen on its nodes and edges, so the acceptance test is a cheap check after
every merge.  Three checkers are built on it: the baseline over the zone
graph of the strongly non-Zeno transform, the check over the guessing zone
graph, and the optimised check that only falls back to the guessing graph
inside accepting SCCs with zero checks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

from .graph import Edge, GuessingZoneGraph, GZGNode, Semantics, ZoneGraph, ZGNode
from .model import TBA, snz_transform
from .zone import EdgeProfile


@dataclass
class SccSummary:
    accepting_seen: bool = False
    clear_seen: bool = False
    U: frozenset = frozenset()
    R: frozenset = frozenset()
    L: frozenset = frozenset()
    zero_check_seen: bool = False
    has_cycle: bool = False

    def absorb(self, p: EdgeProfile) -> None:
        if p.bounded:
            self.U |= p.bounded
        if p.reset:
            self.R |= p.reset
        if p.lower1:
            self.L |= p.lower1
        if p.zero_checked:
            self.zero_check_seen = True

    def merge(self, other: "SccSummary") -> None:
        self.accepting_seen |= other.accepting_seen
        self.clear_seen |= other.clear_seen
        self.U |= other.U
        self.R |= other.R
        self.L |= other.L
        self.zero_check_seen |= other.zero_check_seen
        self.has_cycle |= other.has_cycle

    @property
    def blocking(self) -> frozenset:
        return self.U - self.R


# success predicates return the name of the rule that fired, or None

def snz_success(s: SccSummary) -> Optional[str]:
    return "snz" if s.accepting_seen else None


def gzg_success(s: SccSummary) -> Optional[str]:
    if s.accepting_seen and s.clear_seen and s.U <= s.R:
        return "gzg_clear"
    return None


def quick_success(s: SccSummary) -> Optional[str]:
    if not s.accepting_seen:
        return None
    if s.L & s.R:
        return "lower_bound"
    if not s.zero_check_seen and s.U <= s.R:
        return "zero_check_free"
    return None


def zero_check_free_success(s: SccSummary) -> Optional[str]:
    if s.accepting_seen and not s.zero_check_seen and s.U <= s.R:
        return "zero_check_free"
    return None


@dataclass
class SearchStats:
    nodes_visited: int = 0
    nodes_stored: int = 0
    edges_traversed: int = 0
    scc_count: int = 0
    restarts: int = 0
    gzg_nodes_expanded: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


@dataclass
class Component:
    """A strongly connected piece of an explored graph.

    ``edges`` maps each node to its edges that stay inside the component;
    ``stem``/``stem_labels`` lead from the search start to ``entry``.
    """

    graph: object
    nodes: set
    edges: dict
    summary: SccSummary
    entry: int
    stem: list
    stem_labels: list
    rule: Optional[str] = None


@dataclass
class Lasso:
    """Symbolic lasso; ``cycle[0] == cycle[-1] == stem[-1]``.

    ``kind`` is ``"zg"`` or ``"gzg"``; nodes are :class:`ZGNode` or
    :class:`GZGNode` values, labels are transition indices of ``automaton``
    (``None`` for tau).
    """

    kind: str
    automaton: TBA
    stem: list
    stem_labels: list
    cycle: list
    cycle_labels: list


@dataclass
class Verdict:
    nonempty: bool
    rule: Optional[str] = None
    witness: Optional[Lasso] = None
    stats: SearchStats = field(default_factory=SearchStats)

    def __str__(self) -> str:
        if self.nonempty:
            return f"NONEMPTY (rule={self.rule})"
        return "EMPTY"


class _Root:
    __slots__ = ("num", "summary", "incoming")

    def __init__(self, num: int, summary: SccSummary, incoming: Optional[EdgeProfile]):
        self.num = num
        self.summary = summary
        self.incoming = incoming


def couvreur_run(graph, starts, success: Callable, on_maximal: Optional[Callable] = None,
                 stats: Optional[SearchStats] = None, allowed: Optional[Callable] = None
                 ) -> Optional[Component]:
    """Run the SCC search from each start node in turn.

    ``graph`` offers ``successors(i)``, ``accepting(i)`` and ``clear(i)``.
    ``allowed(i, edge)`` may hide edges.  Returns the first component whose
    summary satisfies ``success`` (checked at every merge) or that
    ``on_maximal(component)`` accepts when a maximal SCC is closed.
    """
    stats = stats if stats is not None else SearchStats()
    H: dict[int, int] = {}  # dfs number; 0 once the node's SCC is closed
    count = 0
    for start in starts:
        if start in H:
            continue
        roots: list[_Root] = []
        active: list[int] = []  # live nodes in dfs order
        call: list[list] = []  # [node, edges, next position, label in, profile in]

        def push(v: int, label, profile):
            nonlocal count
            count += 1
            H[v] = count
            stats.nodes_visited += 1
            edges = graph.successors(v)
            if allowed is not None:
                edges = [e for e in edges if allowed(v, e)]
            call.append([v, edges, 0, label, profile])
            active.append(v)
            s = SccSummary(accepting_seen=graph.accepting(v), clear_seen=graph.clear(v))
            roots.append(_Root(count, s, profile))

        push(start, None, None)
        while call:
            frame = call[-1]
            v, edges, k = frame[0], frame[1], frame[2]
            if k < len(edges):
                frame[2] = k + 1
                e = edges[k]
                stats.edges_traversed += 1
                w = e.dst
                hw = H.get(w)
                if hw is None:
                    push(w, e.label, e.profile)
                    continue
                if hw == 0:
                    continue
                merged = SccSummary(has_cycle=True)
                merged.absorb(e.profile)
                while roots[-1].num > hw:
                    r = roots.pop()
                    merged.merge(r.summary)
                    merged.absorb(r.incoming)
                top = roots[-1].summary
                top.merge(merged)
                if top.has_cycle:
                    rule = success(top)
                    if rule is not None:
                        comp = _current_component(graph, roots[-1], active, call, H, allowed)
                        comp.rule = rule
                        return comp
                continue
            done = call.pop()
            if roots[-1].num == H[v]:
                r = roots.pop()
                stats.scc_count += 1
                members = []
                while True:
                    x = active.pop()
                    members.append(x)
                    if x == v:
                        break
                comp = None
                if r.summary.has_cycle and on_maximal is not None:
                    comp = _closed_component(graph, v, done[3], members, r.summary, call, allowed)
                    found = on_maximal(comp)
                    if found is not None:
                        return found
                for x in members:
                    H[x] = 0
    return None


def _stem_from_calls(call: list, upto: int) -> tuple[list, list]:
    nodes, labels = [], []
    for frame in call:
        if nodes:
            labels.append(frame[3])
        nodes.append(frame[0])
        if frame[0] == upto:
            break
    return nodes, labels


def _internal_edges(graph, members: set, allowed) -> dict:
    edges = {}
    for v in members:
        keep = []
        for e in graph.successors(v):
            if e.dst in members and (allowed is None or allowed(v, e)):
                keep.append(e)
        edges[v] = keep
    return edges


def _current_component(graph, root: _Root, active, call, H, allowed) -> Component:
    members = {x for x in active if H[x] >= root.num}
    # only edges the search has already followed are known to lie on cycles
    # of the merged candidate; unexplored successors may leave it
    pos = {frame[0]: frame[2] for frame in call}
    edges = {}
    for v in members:
        succ = graph.successors(v)
        if allowed is not None:
            succ = [e for e in succ if allowed(v, e)]
        upto = pos.get(v, len(succ))
        edges[v] = [e for e in succ[:upto] if e.dst in members]
    entry = next(x for x in active if H[x] == root.num)
    stem, labels = _stem_from_calls(call, entry)
    return Component(graph, members, edges, root.summary, entry, stem, labels)


def _closed_component(graph, root: int, label, members, summary, call, allowed) -> Component:
    mset = set(members)
    stem, labels = _stem_from_calls(call, None)
    if stem:
        labels.append(label)
    stem.append(root)
    return Component(graph, mset, _internal_edges(graph, mset, allowed), summary, root, stem, labels)


def _path(edges: dict, src: int, goal: Callable[[int], bool]) -> tuple[list, list]:
    """Shortest path inside ``edges`` from ``src`` to a node satisfying ``goal``.

    Returns the nodes and the :class:`Edge` objects taken.
    """
    if goal(src):
        return [src], []
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for e in edges[v]:
            if e.dst in prev:
                continue
            prev[e.dst] = (v, e)
            if goal(e.dst):
                nodes, taken = [e.dst], []
                x = e.dst
                while prev[x] is not None:
                    p, edge = prev[x]
                    nodes.append(p)
                    taken.append(edge)
                    x = p
                return nodes[::-1], taken[::-1]
            queue.append(e.dst)
    raise AssertionError("component is not strongly connected")


def _through_edge(edges: dict, src: int, pick: Callable[[Edge], bool]) -> tuple[list, list]:
    sources = {v for v, es in edges.items() if any(pick(e) for e in es)}
    nodes, taken = _path(edges, src, lambda v: v in sources)
    e = next(e for e in edges[nodes[-1]] if pick(e))
    return nodes + [e.dst], taken + [e]


def build_cycle(comp: Component, rule: str) -> tuple[list, list]:
    """A cycle through ``comp.entry`` that shows every fact ``rule`` relies on.

    Targets are visited in turn along shortest paths, skipping any the walk
    has already covered.
    """
    g, edges, s = comp.graph, comp.edges, comp.summary
    # (already covered?, how to get there from a node)
    steps: list[tuple[Callable, Callable]] = [
        (lambda ns, es: any(g.accepting(v) for v in ns), lambda v: _path(edges, v, g.accepting))
    ]
    if rule == "gzg_clear":
        steps.append((lambda ns, es: any(g.clear(v) for v in ns), lambda v: _path(edges, v, g.clear)))
    if rule in ("gzg_clear", "zero_check_free"):
        for x in sorted(s.U):
            steps.append((
                lambda ns, es, x=x: any(x in e.profile.reset for e in es),
                lambda v, x=x: _through_edge(edges, v, lambda e: x in e.profile.reset),
            ))
    if rule == "lower_bound":
        x = min(s.L & s.R)
        steps.append((lambda ns, es: any(x in e.profile.lower1 for e in es),
                      lambda v: _through_edge(edges, v, lambda e: x in e.profile.lower1)))
        steps.append((lambda ns, es: any(x in e.profile.reset for e in es),
                      lambda v: _through_edge(edges, v, lambda e: x in e.profile.reset)))
    nodes, walked = [comp.entry], []
    for covered, go in steps:
        if covered(nodes, walked):
            continue
        n, es = go(nodes[-1])
        nodes += n[1:]
        walked += es
    if not walked:
        # only the entry itself was required: walk any cycle through it
        nodes, walked = _through_edge(edges, comp.entry, lambda e: True)
    back, back_edges = _path(edges, nodes[-1], lambda v: v == comp.entry)
    return nodes + back[1:], [e.label for e in walked + back_edges]


def resolve_blocked_scc(comp: Component, success: Callable, stats: SearchStats, depth: int
                        ) -> Optional[Component]:
    """Drop edges that bound a blocking clock and search the remainder for a good sub-SCC."""
    if depth <= 0:
        return None
    blocking = comp.summary.blocking
    if not blocking:
        return None
    stats.restarts += 1
    kept = {v: [e for e in es if not (e.profile.bounded & blocking)] for v, es in comp.edges.items()}
    sub = _Explicit(comp.graph, kept)

    def on_maximal(c: Component) -> Optional[Component]:
        s = c.summary
        if s.blocking and success(_unblocked(s)) is not None:
            return resolve_blocked_scc(c, success, stats, depth - 1)
        return None

    order = [comp.entry] + sorted(v for v in comp.nodes if v != comp.entry)
    found = couvreur_run(sub, order, success, on_maximal, stats)
    if found is None:
        return None
    # route from the outer entry to wherever the sub-search started
    lead, lead_edges = _path(comp.edges, comp.entry, lambda v: v == found.stem[0])
    found.stem = comp.stem + lead[1:] + found.stem[1:]
    found.stem_labels = comp.stem_labels + [e.label for e in lead_edges] + found.stem_labels
    found.graph = comp.graph
    return found


def _unblocked(s: SccSummary) -> SccSummary:
    t = SccSummary()
    t.merge(s)
    t.U = t.U & t.R
    return t


class _Explicit:
    """A finite subgraph given by adjacency lists, delegating node facts to ``base``."""

    def __init__(self, base, edges: dict):
        self.base = base
        self.edges = edges

    def successors(self, i: int) -> list:
        return self.edges[i]

    def accepting(self, i: int) -> bool:
        return self.base.accepting(i)

    def clear(self, i: int) -> bool:
        return self.base.clear(i)


def _lasso(kind: str, a: TBA, graph, comp: Component) -> Lasso:
    cycle, cycle_labels = build_cycle(comp, comp.rule)
    nodes = graph.store.nodes
    return Lasso(kind, a, [nodes[i] for i in comp.stem], list(comp.stem_labels),
                 [nodes[i] for i in cycle], cycle_labels)


def _gzg_maximal(stats: SearchStats, depth: int) -> Callable:
    def on_maximal(comp: Component) -> Optional[Component]:
        s = comp.summary
        if s.accepting_seen and s.clear_seen and s.blocking:
            found = resolve_blocked_scc(comp, gzg_success, stats, depth)
            if found is not None:
                found.rule = "gzg_clear"
            return found
        return None
    return on_maximal


def check_snz(a: TBA, max_nodes: Optional[int] = None) -> Verdict:
    """Accepting cycle in the zone graph of the strongly non-Zeno transform."""
    b = snz_transform(a)
    g = ZoneGraph(Semantics(b), max_nodes)
    stats = SearchStats()
    try:
        comp = couvreur_run(g, [g.initial()], snz_success, None, stats)
    finally:
        stats.nodes_stored = len(g.store)
    if comp is None:
        return Verdict(False, stats=stats)
    return Verdict(True, "snz", _lasso("zg", b, g, comp), stats)


def check_gzg(a: TBA, max_nodes: Optional[int] = None) -> Verdict:
    """Accepting, clear and unblocked SCC in the guessing zone graph."""
    g = GuessingZoneGraph(Semantics(a), max_nodes)
    stats = SearchStats()
    depth = a.n_clocks + 1
    try:
        comp = couvreur_run(g, [g.initial()], gzg_success, _gzg_maximal(stats, depth), stats)
    finally:
        stats.nodes_stored = len(g.store)
        stats.gzg_nodes_expanded = stats.nodes_visited
    if comp is None:
        return Verdict(False, stats=stats)
    return Verdict(True, comp.rule, _lasso("gzg", a, g, comp), stats)


class _OptimizedRun:
    def __init__(self, a: TBA, max_nodes: Optional[int]):
        self.a = a
        self.sem = Semantics(a)
        self.max_nodes = max_nodes
        self.zg = ZoneGraph(self.sem, max_nodes)
        self.stats = SearchStats()
        self.depth = a.n_clocks + 1
        self.gzg_hit: Optional[tuple] = None

    def on_maximal(self, comp: Component) -> Optional[Component]:
        s = comp.summary
        if not s.accepting_seen:
            return None
        if s.zero_check_seen:
            return self._restricted_gzg(comp)
        found = resolve_blocked_scc(comp, zero_check_free_success, self.stats, self.depth)
        if found is not None:
            found.rule = found.rule or "zero_check_free"
        return found

    def _restricted_gzg(self, comp: Component) -> Optional[Component]:
        nodes = self.zg.store.nodes
        within = {nodes[i] for i in comp.nodes}
        root = nodes[comp.entry]
        g = GuessingZoneGraph(self.sem, self.max_nodes, within, root)
        sub = SearchStats()
        found = couvreur_run(g, [g.initial()], gzg_success, _gzg_maximal(sub, self.depth), sub)
        self.stats.gzg_nodes_expanded += sub.nodes_visited
        self.stats.nodes_visited += sub.nodes_visited
        self.stats.edges_traversed += sub.edges_traversed
        self.stats.restarts += sub.restarts
        if found is None:
            return None
        found.rule = "gzg_clear"
        self.gzg_hit = (g, comp)
        return found

    def run(self) -> Verdict:
        try:
            comp = couvreur_run(self.zg, [self.zg.initial()], quick_success, self.on_maximal, self.stats)
        finally:
            self.stats.nodes_stored = len(self.zg.store)
        if comp is None:
            return Verdict(False, stats=self.stats)
        if comp.rule == "gzg_clear":
            g, outer = self.gzg_hit
            # the zone-graph stem lifts to the guessing graph with the full guess
            full = self.sem.clocks
            zg_nodes = self.zg.store.nodes
            lifted = [GZGNode(zg_nodes[i].state, zg_nodes[i].zone, full) for i in outer.stem]
            inner = _lasso("gzg", self.a, g, comp)
            inner.stem = lifted[:-1] + inner.stem
            inner.stem_labels = list(outer.stem_labels) + inner.stem_labels
            return Verdict(True, comp.rule, inner, self.stats)
        return Verdict(True, comp.rule, _lasso("zg", self.a, self.zg, comp), self.stats)


def check_optimized(a: TBA, max_nodes: Optional[int] = None) -> Verdict:
    """Zone-graph search with cheap non-Zenoness tests, using the guessing graph only where needed."""
    return _OptimizedRun(a, max_nodes).run()


CHECKERS = {"optimized": check_optimized, "gzg": check_gzg, "snz": check_snz}


def extract_witness(verdict: Verdict) -> Lasso:
    if not verdict.nonempty or verdict.witness is None:
        raise ValueError("no witness: the verdict is not NonEmpty")
    return verdict.witness
