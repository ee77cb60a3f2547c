"""Line-oriented model format.

Single automaton::

    # comments start with '#'
    clock x y
    state a init accepting
    state b
    trans a -> b guard x>=1 & y<2 reset y
    trans b -> a sync go guard x<=1 reset x

Network (product of processes)::

    system fischer
    process proc1.tba          # path relative to this file
    process                    # inline block, closed by 'end'
      clock x
      ...
    end
    accepting-component 1
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional, Union

from .model import TBA, Atom, ModelError, Transition, product

KEYWORDS = {"clock", "state", "trans", "sync", "guard", "reset", "init", "accepting", "system",
            "process", "end", "accepting-component", "->"}
NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.'\-]*$")
STATE_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.'\-]*$")
ATOM = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_.'\-]*?)\s*(<=|>=|<|>|=)\s*(-?\d+)\s*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        loc = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{loc}{message}")


def _tokens(line: str) -> list[tuple[str, int]]:
    """Whitespace tokens with their 1-based column."""
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


class _Builder:
    def __init__(self):
        self.clocks: list[str] = []
        self.states: list[str] = []
        self.init: Optional[str] = None
        self.accepting: set[str] = set()
        # (lineno, col, src, dst, label, [(clock, rel, const, col)], [(clock, col)])
        self.trans: list = []

    def feed(self, lineno: int, raw: str):
        toks = _tokens(_strip_comment(raw))
        if not toks:
            return
        head, col = toks[0]
        if head == "clock":
            if len(toks) < 2:
                raise ParseError("clock declaration without names", lineno, col)
            for name, c in toks[1:]:
                self._check_name(name, lineno, c)
                if name in self.clocks:
                    raise ParseError(f"duplicate clock {name}", lineno, c)
                self.clocks.append(name)
        elif head == "state":
            if len(toks) < 2:
                raise ParseError("state declaration without a name", lineno, col)
            name, c = toks[1]
            self._check_name(name, lineno, c, STATE_NAME)
            if name in self.states:
                raise ParseError(f"duplicate state {name}", lineno, c)
            self.states.append(name)
            for flag, fc in toks[2:]:
                if flag == "init":
                    if self.init is not None:
                        raise ParseError("more than one initial state", lineno, fc)
                    self.init = name
                elif flag == "accepting":
                    self.accepting.add(name)
                else:
                    raise ParseError(f"unexpected token {flag!r}", lineno, fc)
        elif head == "trans":
            self._trans(lineno, raw, toks)
        else:
            raise ParseError(f"unexpected token {head!r}", lineno, col)

    @staticmethod
    def _check_name(name: str, lineno: int, col: int, pattern=NAME):
        if name in KEYWORDS or not pattern.match(name):
            raise ParseError(f"invalid name {name!r}", lineno, col)

    def _trans(self, lineno: int, raw: str, toks):
        if len(toks) < 4 or toks[2][0] != "->":
            col = toks[2][1] if len(toks) > 2 else len(raw) + 1
            raise ParseError("expected 'trans <src> -> <dst>'", lineno, col)
        src, dst = toks[1], toks[3]
        label = None
        atoms: list = []
        resets: list = []
        k = 4
        while k < len(toks):
            word, col = toks[k]
            if word == "sync":
                if k + 1 >= len(toks):
                    raise ParseError("missing label after 'sync'", lineno, col)
                label = toks[k + 1][0]
                self._check_name(label, lineno, toks[k + 1][1])
                k += 2
            elif word == "guard":
                k += 1
                start = k
                while k < len(toks) and toks[k][0] not in ("sync", "reset", "guard"):
                    k += 1
                if start == k:
                    raise ParseError("empty guard", lineno, col)
                gcol = toks[start][1]
                text = raw[gcol - 1 : toks[k - 1][1] - 1 + len(toks[k - 1][0])]
                offset = gcol
                for piece in text.split("&"):
                    m = ATOM.match(piece)
                    pcol = offset + (len(piece) - len(piece.lstrip()))
                    if not m:
                        raise ParseError(f"malformed guard atom {piece.strip()!r}", lineno, pcol)
                    const = int(m.group(3))
                    if const < 0:
                        raise ParseError(f"negative constant {const}", lineno, pcol)
                    atoms.append((m.group(1), m.group(2), const, pcol))
                    offset += len(piece) + 1
            elif word == "reset":
                k += 1
                while k < len(toks) and toks[k][0] not in ("sync", "reset", "guard"):
                    resets.append(toks[k])
                    k += 1
            else:
                raise ParseError(f"unexpected token {word!r}", lineno, col)
        self.trans.append((lineno, src, dst, label, atoms, resets))

    def build(self, name: str = "") -> TBA:
        if not self.states:
            raise ParseError("no states declared")
        init = self.init if self.init is not None else self.states[0]
        index = {c: i + 1 for i, c in enumerate(self.clocks)}
        known = set(self.states)
        transitions = []
        for lineno, (src, scol), (dst, dcol), label, atoms, resets in self.trans:
            if src not in known:
                raise ParseError(f"unknown state {src}", lineno, scol)
            if dst not in known:
                raise ParseError(f"unknown state {dst}", lineno, dcol)
            guard = []
            for clock, rel, const, col in atoms:
                if clock not in index:
                    raise ParseError(f"unknown clock {clock}", lineno, col)
                guard.append(Atom(index[clock], rel, const))
            reset = set()
            for clock, col in resets:
                if clock not in index:
                    raise ParseError(f"unknown clock {clock}", lineno, col)
                reset.add(index[clock])
            transitions.append(Transition(src, dst, tuple(guard), frozenset(reset), label))
        try:
            return TBA(tuple(self.states), init, tuple(self.clocks), tuple(transitions),
                       frozenset(self.accepting), name)
        except ModelError as e:
            raise ParseError(str(e)) from e


def parse_tba(text: str, name: str = "", base_dir: Union[str, Path, None] = None) -> TBA:
    """Parse a model source; networks are flattened with :func:`product`."""
    lines = text.splitlines()
    first = next((( i, _tokens(_strip_comment(l))) for i, l in enumerate(lines)
                  if _tokens(_strip_comment(l))), None)
    if first is not None and first[1][0][0] == "system":
        return _parse_system(lines, name, Path(base_dir) if base_dir else Path("."))
    b = _Builder()
    for i, raw in enumerate(lines, start=1):
        b.feed(i, raw)
    return b.build(name)


def _parse_system(lines: list[str], name: str, base_dir: Path) -> TBA:
    processes: list[TBA] = []
    acc_component: Optional[int] = None
    system_name = name
    inline: Optional[_Builder] = None
    inline_line = 0
    for i, raw in enumerate(lines, start=1):
        toks = _tokens(_strip_comment(raw))
        if not toks:
            continue
        head, col = toks[0]
        if inline is not None:
            if head == "end":
                try:
                    processes.append(inline.build(f"p{len(processes)}"))
                except ParseError as e:
                    raise ParseError(e.message, e.line or inline_line, e.column) from e
                inline = None
            else:
                inline.feed(i, raw)
            continue
        if head == "system":
            if len(toks) > 1 and not name:
                system_name = toks[1][0]
        elif head == "process":
            if len(toks) == 1:
                inline = _Builder()
                inline_line = i
            else:
                path = base_dir / toks[1][0]
                try:
                    src = path.read_text()
                except OSError as e:
                    raise ParseError(f"cannot read process file {path}: {e.strerror}", i, toks[1][1])
                processes.append(parse_tba(src, path.stem, path.parent))
        elif head == "accepting-component":
            if len(toks) != 2 or not toks[1][0].isdigit():
                raise ParseError("expected 'accepting-component <index>'", i, col)
            acc_component = int(toks[1][0])
        else:
            raise ParseError(f"unexpected token {head!r}", i, col)
    if inline is not None:
        raise ParseError("unterminated process block", inline_line, 1)
    if not processes:
        raise ParseError("no states declared")
    if acc_component is None:
        acc_component = len(processes) - 1
    try:
        return product(processes, acc_component, system_name)
    except ModelError as e:
        raise ParseError(str(e)) from e


def load(path: Union[str, Path]) -> TBA:
    path = Path(path)
    return parse_tba(path.read_text(), path.stem, path.parent)


def render(a: TBA) -> str:
    """Textual form of a flat automaton; ``parse_tba(render(a)) == a``."""
    out = []
    if a.name:
        out.append(f"# {a.name}")
    if a.clocks:
        out.append("clock " + " ".join(a.clocks))
    for q in a.states:
        flags = []
        if q == a.init:
            flags.append("init")
        if q in a.accepting:
            flags.append("accepting")
        out.append(" ".join(["state", q, *flags]))
    for t in a.transitions:
        parts = ["trans", t.src, "->", t.dst]
        if t.label is not None:
            parts += ["sync", t.label]
        if t.guard:
            parts += ["guard", " & ".join(f"{a.clock_name(g.clock)}{g.rel}{g.const}" for g in t.guard)]
        if t.reset:
            parts += ["reset", *(a.clock_name(x) for x in sorted(t.reset))]
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"
