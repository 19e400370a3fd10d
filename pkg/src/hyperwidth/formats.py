"""Line-oriented text formats.

All files share the same lexical rules: blank lines are ignored, a line
whose first character is ``c`` is a comment, tokens are separated by
whitespace, and vertex, hyperedge and node numbers are 1-based.

hypergraph      ``p hg <n> <m>`` then m lines of vertex numbers
graph           ``p edge <n> <m>`` then m lines ``e <u> <v>``
labeled graph   ``p ilg <n> <m>``, m lines ``e <u> <v>``, n lines ``l <v> N|M|NM``
grid spec       ``p grid <k>``, lines ``d|a|x <i> <j> <i'> <j'>`` (diagonal,
                additional, augmentation edge), optional ``s <span>``, ``l <scheme>``
tree decomp.    ``s td <nodes> <width>``, ``b <id> <bag...>``, ``t <id> <id>``
hypertree d.    ``s htd <nodes> <p>/<q>``, ``b``, ``l <id> <edge>=<p>/<q>...``, ``t``
bramble         ``p bramble <count>`` then count lines ``s <vertex...>``
strategy        ``s strategy <k> <monotone 0|1>`` then lines
                ``q <marshals> ; <territory> ; <move>`` with comma lists or ``-``
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .brambles import Bramble, GridSpec
from .core import Graph, Hypergraph, ILabeledGraph, InvalidInstance, Labeling
from .decomp import HypertreeDecomposition, TreeDecomposition
from .games import Strategy, is_monotone


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = "" if line is None else f"line {line}, column {column or 1}: "
        super().__init__(where + message)


class IsolatedVertexError(ParseError):
    pass


_TOKEN = re.compile(r"\S+")


@dataclass
class _Line:
    no: int
    tokens: list[str]
    cols: list[int]

    def fail(self, msg: str, idx: int = 0) -> ParseError:
        col = self.cols[idx] if idx < len(self.cols) else (self.cols[-1] if self.cols else 1)
        return ParseError(msg, self.no, col)

    def int_at(self, idx: int, lo: int | None = None, hi: int | None = None) -> int:
        if idx >= len(self.tokens):
            raise self.fail("missing number", len(self.tokens))
        tok = self.tokens[idx]
        if not re.fullmatch(r"[+-]?\d+", tok):
            raise self.fail(f"expected an integer, got {tok!r}", idx)
        val = int(tok)
        if (lo is not None and val < lo) or (hi is not None and val > hi):
            raise self.fail(f"{val} is out of range [{lo}, {hi}]", idx)
        return val


def _lines(text: str) -> Iterator[_Line]:
    for no, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped[0] == "c":
            continue
        ms = list(_TOKEN.finditer(raw))
        yield _Line(no, [m.group() for m in ms], [m.start() + 1 for m in ms])


def _header(lines: list[_Line], *keyword: str) -> _Line:
    if not lines:
        raise ParseError(f"missing '{' '.join(keyword)}' header", 1, 1)
    head = lines[0]
    if head.tokens[:len(keyword)] != list(keyword):
        raise head.fail(f"expected '{' '.join(keyword)}' header")
    return head


def _expect_count(lines: list[_Line], head: _Line, want: int, what: str) -> None:
    got = len(lines) - 1
    if got != want:
        at = lines[want + 1] if got > want else None
        if at is not None:
            raise at.fail(f"header promises {want} {what}, found more")
        raise ParseError(f"header promises {want} {what}, found {got}", head.no, head.cols[-1])


def fmt_frac(x) -> str:
    """Lowest-terms ``p/q``, or a plain integer when ``q == 1``."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pq(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _parse_pq(line: _Line, tok: str, idx: int) -> Fraction:
    m = re.fullmatch(r"(\d+)/(\d+)", tok)
    if not m or int(m.group(2)) == 0:
        raise line.fail(f"expected p/q, got {tok!r}", idx)
    return Fraction(int(m.group(1)), int(m.group(2)))


# -- hypergraphs and graphs ----------------------------------------------------


def parse_hypergraph(text: str) -> Hypergraph:
    lines = list(_lines(text))
    head = _header(lines, "p", "hg")
    if len(head.tokens) != 4:
        raise head.fail("header must be 'p hg <n> <m>'")
    n, m = head.int_at(2, 1), head.int_at(3, 0)
    _expect_count(lines, head, m, "hyperedges")
    edges = []
    for ln in lines[1:]:
        vs = []
        for i in range(len(ln.tokens)):
            v = ln.int_at(i, 1, n)
            if v - 1 in vs:
                raise ln.fail(f"vertex {v} repeated", i)
            vs.append(v - 1)
        if not vs:
            raise ln.fail("empty hyperedge")
        edges.append(frozenset(vs))
    covered = set().union(*edges) if edges else set()
    for v in range(n):
        if v not in covered:
            raise IsolatedVertexError(f"vertex {v + 1} is isolated", head.no, head.cols[2])
    return Hypergraph(n, tuple(edges))


def serialize_hypergraph(h: Hypergraph, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p hg {h.n} {h.m}")
    out += [" ".join(str(v + 1) for v in sorted(e)) for e in h.edges]
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> Graph:
    lines = list(_lines(text))
    head = _header(lines, "p", "edge")
    if len(head.tokens) != 4:
        raise head.fail("header must be 'p edge <n> <m>'")
    n, m = head.int_at(2, 1), head.int_at(3, 0)
    _expect_count(lines, head, m, "edges")
    edges = set()
    for ln in lines[1:]:
        if ln.tokens[0] != "e" or len(ln.tokens) != 3:
            raise ln.fail("edge lines are 'e <u> <v>'")
        u, v = ln.int_at(1, 1, n), ln.int_at(2, 1, n)
        if u == v:
            raise ln.fail(f"loop at vertex {u}", 1)
        edges.add((min(u, v) - 1, max(u, v) - 1))
    return Graph(tuple(range(n)), frozenset(edges))


def serialize_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    pos = {v: i + 1 for i, v in enumerate(g.vertices)}
    out = [f"c {c}" for c in comments]
    out.append(f"p edge {len(g.vertices)} {len(g.edges)}")
    out += [f"e {pos[u]} {pos[v]}" for u, v in sorted(g.edges)]
    return "\n".join(out) + "\n"


def parse_ilg(text: str) -> ILabeledGraph:
    lines = list(_lines(text))
    head = _header(lines, "p", "ilg")
    n, m = head.int_at(2, 1), head.int_at(3, 0)
    body = lines[1:]
    elines = [ln for ln in body if ln.tokens[0] == "e"]
    llines = [ln for ln in body if ln.tokens[0] == "l"]
    for ln in body:
        if ln.tokens[0] not in ("e", "l"):
            raise ln.fail(f"unknown line type {ln.tokens[0]!r}")
    if len(elines) != m:
        raise ParseError(f"header promises {m} edges, found {len(elines)}", head.no, head.cols[-1])
    edges = set()
    for ln in elines:
        u, v = ln.int_at(1, 1, n), ln.int_at(2, 1, n)
        if u == v:
            raise ln.fail(f"loop at vertex {u}", 1)
        edges.add((min(u, v) - 1, max(u, v) - 1))
    n_set, m_set, labelled = set(), set(), set()
    for ln in llines:
        v = ln.int_at(1, 1, n) - 1
        if v in labelled:
            raise ln.fail(f"vertex {v + 1} labelled twice", 1)
        labelled.add(v)
        tag = ln.tokens[2] if len(ln.tokens) > 2 else ""
        if tag not in ("N", "M", "NM"):
            raise ln.fail(f"label must be N, M or NM, got {tag!r}", 2)
        if "N" in tag:
            n_set.add(v)
        if "M" in tag:
            m_set.add(v)
    if len(labelled) != n:
        raise ParseError(f"{n - len(labelled)} vertices carry no label", head.no, head.cols[2])
    try:
        return ILabeledGraph(Graph(tuple(range(n)), frozenset(edges)), frozenset(n_set), frozenset(m_set))
    except InvalidInstance as exc:
        raise ParseError(str(exc), head.no, 1) from exc


def serialize_ilg(ilg: ILabeledGraph, comments: Iterable[str] = ()) -> str:
    g = ilg.graph
    pos = {v: i + 1 for i, v in enumerate(g.vertices)}
    out = [f"c {c}" for c in comments]
    out.append(f"p ilg {len(g.vertices)} {len(g.edges)}")
    out += [f"e {pos[u]} {pos[v]}" for u, v in sorted(g.edges)]
    for v in g.vertices:
        tag = ("N" if v in ilg.n_set else "") + ("M" if v in ilg.m_set else "")
        out.append(f"l {pos[v]} {tag}")
    return "\n".join(out) + "\n"


# -- grid specs and brambles ---------------------------------------------------


def parse_grid_spec(text: str) -> GridSpec:
    lines = list(_lines(text))
    head = _header(lines, "p", "grid")
    k = head.int_at(2, 2)
    groups = {"d": [], "a": [], "x": []}
    span, scheme = None, "auto"
    for ln in lines[1:]:
        kind = ln.tokens[0]
        if kind in groups:
            if len(ln.tokens) != 5:
                raise ln.fail(f"'{kind}' lines carry four coordinates")
            c = [ln.int_at(i, 1, k) for i in range(1, 5)]
            groups[kind].append(((c[0], c[1]), (c[2], c[3])))
        elif kind == "s":
            span = ln.int_at(1, 0)
        elif kind == "l":
            scheme = ln.tokens[1] if len(ln.tokens) > 1 else ""
        else:
            raise ln.fail(f"unknown line type {kind!r}")
    spec = GridSpec(k, tuple(groups["d"]), tuple(groups["a"]), tuple(groups["x"]), span, scheme)
    try:
        spec.validate()
    except InvalidInstance as exc:
        raise ParseError(str(exc), head.no, 1) from exc
    return spec


def serialize_grid_spec(spec: GridSpec) -> str:
    out = [f"p grid {spec.k}"]
    for kind, edges in (("d", spec.diagonals), ("a", spec.additional), ("x", spec.augmentation)):
        out += [f"{kind} {a[0]} {a[1]} {b[0]} {b[1]}" for a, b in edges]
    if spec.span is not None:
        out.append(f"s {spec.span}")
    if spec.scheme != "auto":
        out.append(f"l {spec.scheme}")
    return "\n".join(out) + "\n"


def parse_bramble(text: str, host) -> Bramble:
    lines = list(_lines(text))
    head = _header(lines, "p", "bramble")
    count = head.int_at(2, 0)
    _expect_count(lines, head, count, "sets")
    nv = host.n if isinstance(host, Hypergraph) else len(host.graph.vertices)
    sets = []
    for ln in lines[1:]:
        if ln.tokens[0] != "s":
            raise ln.fail("set lines are 's <vertex...>'")
        sets.append(frozenset(ln.int_at(i, 1, nv) - 1 for i in range(1, len(ln.tokens))))
    return Bramble(host, tuple(sets))


def serialize_bramble(b: Bramble) -> str:
    out = [f"p bramble {len(b.sets)}"]
    out += ["s " + " ".join(str(v + 1) for v in sorted(s)) for s in b.sets]
    return "\n".join(out) + "\n"


# -- decompositions ------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionFile:
    decomposition: TreeDecomposition | HypertreeDecomposition
    declared_width: Fraction


def _parse_tree_part(lines: list[_Line], nodes: int) -> tuple[dict, set, list[_Line]]:
    bags, tree, other = {}, set(), []
    for ln in lines:
        kind = ln.tokens[0]
        if kind == "b":
            t = ln.int_at(1, 1, nodes) - 1
            if t in bags:
                raise ln.fail(f"node {t + 1} defined twice", 1)
            bags[t] = frozenset(ln.int_at(i, 1) - 1 for i in range(2, len(ln.tokens)))
        elif kind == "t":
            a, b = ln.int_at(1, 1, nodes) - 1, ln.int_at(2, 1, nodes) - 1
            if a == b:
                raise ln.fail("tree edge is a loop", 1)
            tree.add((min(a, b), max(a, b)))
        else:
            other.append(ln)
    missing = sorted(set(range(nodes)) - set(bags))
    if missing:
        raise ParseError(f"node {missing[0] + 1} has no bag line", lines[0].no if lines else 1, 1)
    return bags, tree, other


def parse_td(text: str) -> DecompositionFile:
    lines = list(_lines(text))
    head = _header(lines, "s", "td")
    nodes, width = head.int_at(2, 1), head.int_at(3, -1)
    bags, tree, other = _parse_tree_part(lines[1:], nodes)
    if other:
        raise other[0].fail(f"unknown line type {other[0].tokens[0]!r}")
    td = TreeDecomposition(Graph(tuple(range(nodes)), frozenset(tree)), bags)
    return DecompositionFile(td, Fraction(width))


def serialize_td(td: TreeDecomposition) -> str:
    pos = {t: i + 1 for i, t in enumerate(td.nodes)}
    out = [f"s td {len(pos)} {td.width}"]
    out += [f"b {pos[t]} " + " ".join(str(v + 1) for v in sorted(td.bags[t])) for t in td.nodes]
    out += [f"t {pos[a]} {pos[b]}" for a, b in sorted(td.tree.edges)]
    return "\n".join(line.rstrip() for line in out) + "\n"


def parse_htd(text: str, m: int) -> DecompositionFile:
    lines = list(_lines(text))
    head = _header(lines, "s", "htd")
    nodes = head.int_at(2, 1)
    if len(head.tokens) != 4:
        raise head.fail("header must be 's htd <nodes> <p>/<q>'")
    width = _parse_pq(head, head.tokens[3], 3)
    bags, tree, other = _parse_tree_part(lines[1:], nodes)
    lambdas = {}
    for ln in other:
        if ln.tokens[0] != "l":
            raise ln.fail(f"unknown line type {ln.tokens[0]!r}")
        t = ln.int_at(1, 1, nodes) - 1
        if t in lambdas:
            raise ln.fail(f"node {t + 1} labelled twice", 1)
        values = dict.fromkeys(range(m), 0)
        for i in range(2, len(ln.tokens)):
            tok = ln.tokens[i]
            if "=" not in tok:
                raise ln.fail(f"expected <edge>=<p>/<q>, got {tok!r}", i)
            e, val = tok.split("=", 1)
            if not e.isdigit() or not 1 <= int(e) <= m:
                raise ln.fail(f"hyperedge {e!r} is out of range", i)
            x = _parse_pq(ln, val, i)
            if x > 1:
                raise ln.fail(f"label {x} exceeds 1", i)
            values[int(e) - 1] = x
        lambdas[t] = Labeling(values)
    for t in range(nodes):
        lambdas.setdefault(t, Labeling.zero(range(m)))
    td = TreeDecomposition(Graph(tuple(range(nodes)), frozenset(tree)), bags)
    return DecompositionFile(HypertreeDecomposition(td, lambdas), width)


def serialize_htd(d: HypertreeDecomposition) -> str:
    td = d.base
    pos = {t: i + 1 for i, t in enumerate(td.nodes)}
    out = [f"s htd {len(pos)} {_pq(d.width)}"]
    out += [f"b {pos[t]} " + " ".join(str(v + 1) for v in sorted(td.bags[t])) for t in td.nodes]
    for t in td.nodes:
        lab = d.lambdas[t]
        out.append(f"l {pos[t]} " + " ".join(f"{e + 1}={_pq(x)}" for e, x in lab.items() if x))
    out += [f"t {pos[a]} {pos[b]}" for a, b in sorted(td.tree.edges)]
    return "\n".join(line.rstrip() for line in out) + "\n"


# -- strategies ----------------------------------------------------------------


def _fmt_set(xs) -> str:
    return ",".join(str(x + 1) for x in sorted(xs)) or "-"


def _parse_set(ln: _Line, tok: str, idx: int, hi: int) -> frozenset[int]:
    if tok == "-":
        return frozenset()
    out = []
    for part in tok.split(","):
        if not part.isdigit() or not 1 <= int(part) <= hi:
            raise ln.fail(f"bad list entry {part!r}", idx)
        out.append(int(part) - 1)
    return frozenset(out)


def serialize_strategy(s: Strategy) -> str:
    out = [f"s strategy {s.cost} {int(s.monotone)}"]
    for st in sorted(s.moves, key=lambda st: (sorted(st[0]), sorted(st[1]))):
        out.append(f"q {_fmt_set(st[0])} ; {_fmt_set(st[1])} ; {_fmt_set(s.moves[st])}")
    return "\n".join(out) + "\n"


def parse_strategy(text: str, h: Hypergraph) -> Strategy:
    lines = list(_lines(text))
    head = _header(lines, "s", "strategy")
    cost = head.int_at(2, 0)
    declared = head.int_at(3, 0, 1)
    moves = {}
    for ln in lines[1:]:
        toks = ln.tokens
        if toks[0] != "q" or len(toks) != 6 or toks[2] != ";" or toks[4] != ";":
            raise ln.fail("strategy lines are 'q <marshals> ; <territory> ; <move>'")
        st = (_parse_set(ln, toks[1], 1, h.m), _parse_set(ln, toks[3], 3, h.n))
        moves[st] = _parse_set(ln, toks[5], 5, h.m)
    initial = tuple((frozenset(), c) for c in h.components())
    s = Strategy(h, cost, moves, bool(declared), initial)
    return Strategy(h, cost, moves, is_monotone(s), initial)
