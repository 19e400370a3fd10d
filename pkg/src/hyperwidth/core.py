"""Hypergraphs, graphs, i-labeled graphs and labelings.

Vertices and hyperedges are dense non-negative integers.  A hypergraph on
``n`` vertices uses ``0..n-1``; hyperedge ``j`` is ``edges[j]``.  The
incidence graph numbers vertex ``v`` as ``v`` and hyperedge ``j`` as
``n + j``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping


class InvalidInstance(ValueError):
    """Raised when an object violates its structural invariants."""


class LimitExceeded(RuntimeError):
    """Raised when an exact computation would exceed its configured limit."""


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        edges = tuple(frozenset(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 1:
            raise InvalidInstance("hypergraph needs at least one vertex")
        covered = set()
        for j, e in enumerate(edges):
            if not e:
                raise InvalidInstance(f"hyperedge {j} is empty")
            bad = [v for v in e if not 0 <= v < self.n]
            if bad:
                raise InvalidInstance(f"hyperedge {j} has unknown vertex {min(bad)}")
            covered |= e
        missing = sorted(set(range(self.n)) - covered)
        if missing:
            raise InvalidInstance(f"vertex {missing[0]} is isolated")

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], n: int | None = None) -> "Hypergraph":
        edges = [frozenset(e) for e in edges]
        if n is None:
            n = max(max(e) for e in edges) + 1
        return cls(n, tuple(edges))

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        inc = [[] for _ in range(self.n)]
        for j, e in enumerate(self.edges):
            for v in e:
                inc[v].append(j)
        return tuple(tuple(x) for x in inc)

    def with_universal_edge(self) -> "Hypergraph":
        return Hypergraph(self.n, self.edges + (frozenset(range(self.n)),))

    def components(self, allowed: Iterable[int] | None = None) -> list[frozenset[int]]:
        """Connected components of ``allowed`` where two vertices are
        adjacent when they share a hyperedge."""
        allowed = set(self.vertices if allowed is None else allowed)
        seen: set[int] = set()
        out = []
        for s in sorted(allowed):
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for j in self.incident[u]:
                    for w in self.edges[j]:
                        if w in allowed and w not in comp:
                            comp.add(w)
                            queue.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices)))
        object.__setattr__(self, "vertices", verts)
        vs = set(verts)
        edges = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise InvalidInstance(f"loop at vertex {u}")
            if u not in vs or v not in vs:
                raise InvalidInstance(f"edge {e} has an unknown endpoint")
            edges.add(_pair(u, v))
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], vertices: Iterable[int] | None = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if vertices is None:
            vertices = {x for e in edges for x in e}
        return cls(tuple(vertices), frozenset(edges))

    @cached_property
    def adj(self) -> dict[int, frozenset[int]]:
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return {v: frozenset(s) for v, s in nb.items()}

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        return self.adj[v] | {v}

    def has_edge(self, u: int, v: int) -> bool:
        return _pair(u, v) in self.edges

    def remove(self, xs: Iterable[int]) -> "Graph":
        xs = set(xs)
        return Graph(tuple(v for v in self.vertices if v not in xs),
                     frozenset(e for e in self.edges if e[0] not in xs and e[1] not in xs))

    def contract(self, u: int, v: int) -> tuple["Graph", int]:
        """Contract edge ``uv``; the merged vertex keeps the smaller id."""
        if not self.has_edge(u, v):
            raise InvalidInstance(f"({u}, {v}) is not an edge")
        keep, gone = min(u, v), max(u, v)
        edges = set()
        for a, b in self.edges:
            a = keep if a == gone else a
            b = keep if b == gone else b
            if a != b:
                edges.add(_pair(a, b))
        return Graph(tuple(x for x in self.vertices if x != gone), frozenset(edges)), keep

    def distances_from(self, src: int, cutoff: int | None = None) -> dict[int, int]:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if cutoff is not None and dist[u] >= cutoff:
                continue
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def is_connected(self, within: Iterable[int] | None = None) -> bool:
        verts = set(self.vertices if within is None else within)
        if not verts:
            return True
        start = min(verts)
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w in verts and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen == verts

    def is_tree(self) -> bool:
        return (len(self.vertices) > 0 and len(self.edges) == len(self.vertices) - 1
                and self.is_connected())


@dataclass(frozen=True)
class ILabeledGraph:
    graph: Graph
    n_set: frozenset[int]
    m_set: frozenset[int]

    def __post_init__(self):
        g = self.graph
        n_set, m_set = frozenset(self.n_set), frozenset(self.m_set)
        object.__setattr__(self, "n_set", n_set)
        object.__setattr__(self, "m_set", m_set)
        if n_set | m_set != set(g.vertices):
            raise InvalidInstance("N and M must cover the vertex set exactly")
        for side, name in ((n_set - m_set, "N-M"), (m_set - n_set, "M-N")):
            for u, v in g.edges:
                if u in side and v in side:
                    raise InvalidInstance(f"{name} is not independent: edge ({u}, {v})")
        for v in g.vertices:
            closed = g.closed_neighborhood(v)
            if not closed & n_set or not closed & m_set:
                raise InvalidInstance(f"closed neighborhood of {v} misses N or M")


class Labeling(Mapping[int, Fraction]):
    """Immutable map from labeled objects to rationals in [0, 1]."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = values.items() if isinstance(values, Mapping) else values
        vals = {}
        for k, x in items:
            x = Fraction(x)
            if not 0 <= x <= 1:
                raise InvalidInstance(f"label {x} of {k} is outside [0, 1]")
            vals[k] = x
        self._values = dict(sorted(vals.items()))

    @classmethod
    def zero(cls, domain: Iterable[int]) -> "Labeling":
        return cls({k: 0 for k in domain})

    @classmethod
    def indicator(cls, domain: Iterable[int], chosen: Iterable[int]) -> "Labeling":
        chosen = set(chosen)
        return cls({k: int(k in chosen) for k in domain})

    def __getitem__(self, key: int) -> Fraction:
        return self._values[key]

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in self._values.items() if v)
        return f"Labeling({{{inner}}})"

    def __eq__(self, other):
        if isinstance(other, Labeling):
            return self._values == other._values
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._values.items()))

    @property
    def size(self) -> Fraction:
        return sum(self._values.values(), Fraction(0))

    @property
    def is_binary(self) -> bool:
        return all(x in (0, 1) for x in self._values.values())

    def support(self) -> frozenset[int]:
        return frozenset(k for k, x in self._values.items() if x)


def _check_domain(g: Labeling, domain: Iterable[int]) -> None:
    if set(g) != set(domain):
        raise InvalidInstance("labeling domain does not match")


def incidence_graph(h: Hypergraph) -> ILabeledGraph:
    edges = frozenset((v, h.n + j) for j, e in enumerate(h.edges) for v in e)
    g = Graph(tuple(range(h.n + h.m)), edges)
    return ILabeledGraph(g, frozenset(range(h.n)), frozenset(range(h.n, h.n + h.m)))


def blocked_set(h: Hypergraph, g: Labeling) -> frozenset[int]:
    _check_domain(g, range(h.m))
    return frozenset(v for v in h.vertices
                     if sum((g[j] for j in h.incident[v]), Fraction(0)) >= 1)


def controlled_set(ilg: ILabeledGraph, g: Labeling) -> frozenset[int]:
    _check_domain(g, ilg.m_set)
    out = set()
    for x in ilg.n_set:
        closed = ilg.graph.closed_neighborhood(x) & ilg.m_set
        if sum((g[y] for y in closed), Fraction(0)) >= 1:
            out.add(x)
    return frozenset(out)


def contract_edge(ilg: ILabeledGraph, e: tuple[int, int]) -> ILabeledGraph:
    x, y = e
    g2, ve = ilg.graph.contract(x, y)
    pair = {x, y}
    n2 = (ilg.n_set - pair) | ({ve} if pair & ilg.n_set else set())
    m2 = (ilg.m_set - pair) | ({ve} if pair & ilg.m_set else set())
    return ILabeledGraph(g2, frozenset(n2), frozenset(m2))


def primal_graph(h: Hypergraph) -> Graph:
    edges = set()
    for e in h.edges:
        es = sorted(e)
        for i, u in enumerate(es):
            for v in es[i + 1:]:
                edges.add((u, v))
    return Graph(tuple(h.vertices), frozenset(edges))


def delete_preserving(ilg: ILabeledGraph, x_set: Iterable[int]) -> ILabeledGraph:
    """Delete ``x_set`` keeping an i-labeled graph whose brambles cannot
    gain order; raises if the deletion preconditions fail."""
    xs = frozenset(x_set)
    g = ilg.graph
    unknown = xs - set(g.vertices)
    if unknown:
        raise InvalidInstance(f"vertex {min(unknown)} is not in the graph")
    for v in sorted(xs & ilg.m_set):
        outside = g.closed_neighborhood(v) - xs
        if outside:
            raise InvalidInstance(f"M-vertex {v} is deleted but its neighbor {min(outside)} is kept")
    g2 = g.remove(xs)
    for v in g2.vertices:
        if not g2.adj[v]:
            raise InvalidInstance(f"vertex {v} becomes isolated")
    return ILabeledGraph(g2, ilg.n_set - xs, ilg.m_set - xs)


@dataclass(frozen=True)
class Check:
    """Outcome of a validation: ``ok`` plus the first violation found."""

    ok: bool
    reason: str | None = None
    width: Fraction | int | None = None
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.ok
