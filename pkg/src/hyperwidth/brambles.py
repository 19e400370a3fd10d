"""Hyperbrambles, i-brambles, their order certificates and grid constructions.

Connectivity of a vertex set ``S`` of a hypergraph is read through the
incidence graph: two vertices of ``S`` must be joined by a path that uses
only vertices of ``S`` and arbitrary hyperedges.  This is the exact analogue
of i-connectivity, where paths run in ``G[S + M]``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .core import (Check, Graph, Hypergraph, ILabeledGraph, InvalidInstance, LimitExceeded,
                   incidence_graph)
from .covers import transversal_cover

Host = Union[Hypergraph, ILabeledGraph]
Coord = tuple[int, int]

BRAMBLE_EXACT_LIMIT = 12


@dataclass(frozen=True)
class Bramble:
    host: Host
    sets: tuple[frozenset[int], ...]
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))

    @property
    def is_hyper(self) -> bool:
        return isinstance(self.host, Hypergraph)

    def union(self) -> frozenset[int]:
        return frozenset().union(*self.sets)

    def __len__(self) -> int:
        return len(self.sets)


def _hyper_connected(h: Hypergraph, s: frozenset[int]) -> bool:
    return len(h.components(s)) == 1


def _i_connected(ilg: ILabeledGraph, s: frozenset[int]) -> bool:
    allowed = s | ilg.m_set
    start = min(s)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in ilg.graph.adj[u]:
            if w in allowed and w not in seen:
                seen.add(w)
                queue.append(w)
    return s <= seen


def touch(h: Hypergraph, x: frozenset[int], y: frozenset[int]) -> bool:
    return bool(x & y) or any(e & x and e & y for e in h.edges)


def i_touch(ilg: ILabeledGraph, x: frozenset[int], y: frozenset[int]) -> bool:
    if x & y:
        return True
    g = ilg.graph
    if any(g.adj[u] & y for u in x):
        return True
    return any(g.closed_neighborhood(z) & x and g.closed_neighborhood(z) & y for z in ilg.m_set)


def verify_bramble(b: Bramble) -> Check:
    host = b.host
    if b.is_hyper:
        domain, connected, touching = set(host.vertices), _hyper_connected, touch
    else:
        domain, connected, touching = host.n_set, _i_connected, i_touch
    for i, s in enumerate(b.sets):
        if not s:
            return Check(False, f"set {i} is empty", details={"set": i})
        if not s <= domain:
            return Check(False, f"set {i} leaves the admissible vertices", details={"set": i})
        if not connected(host, s):
            return Check(False, f"set {i} is not connected", details={"set": i})
    for i, x in enumerate(b.sets):
        for j in range(i + 1, len(b.sets)):
            if not touching(host, x, b.sets[j]):
                return Check(False, f"sets {i} and {j} do not touch", details={"pair": (i, j)})
    return Check(True)


def _distance_graph(b: Bramble) -> Graph:
    return incidence_graph(b.host).graph if b.is_hyper else b.host.graph


def influence(b: Bramble) -> int:
    """Largest number of bramble vertices within distance two of one of them.

    A hyperbramble is measured in the incidence graph of its host.
    """
    members = b.union()
    if not members:
        raise InvalidInstance("empty bramble")
    g = _distance_graph(b)
    return max(sum(1 for x in g.distances_from(v, cutoff=2) if x in members) for v in members)


def valency(b: Bramble) -> int:
    members = b.union()
    if not members:
        raise InvalidInstance("empty bramble")
    return max(sum(1 for s in b.sets if v in s) for v in members)


def exact_order(b: Bramble, limit: int | None = BRAMBLE_EXACT_LIMIT) -> Fraction:
    if limit is not None and len(b.sets) > limit:
        raise LimitExceeded(f"{len(b.sets)} sets exceed the exact order limit {limit}")
    return transversal_cover(b.host, b.sets).cost


@dataclass(frozen=True)
class OrderCertificate:
    size: int
    influence: int
    valency: int
    lower_bound: Fraction
    exact_order: Fraction | None = None

    def recheck(self) -> bool:
        if self.lower_bound != Fraction(self.size, self.influence * self.valency):
            return False
        return self.exact_order is None or self.lower_bound <= self.exact_order


def order_lower_bound(b: Bramble, with_exact: bool = False) -> OrderCertificate:
    check = verify_bramble(b)
    if not check:
        raise InvalidInstance(f"not a bramble: {check.reason}")
    ifl, val = influence(b), valency(b)
    exact = exact_order(b) if with_exact else None
    return OrderCertificate(len(b.sets), ifl, val, Fraction(len(b.sets), ifl * val), exact)


def bramble_from_hypergraph(b: Bramble) -> Bramble:
    if not b.is_hyper:
        raise InvalidInstance("expected a hyperbramble")
    check = verify_bramble(b)
    if not check:
        raise InvalidInstance(f"not a hyperbramble: {check.reason}")
    return Bramble(incidence_graph(b.host), b.sets, b.names)


def contract_bramble(b: Bramble, e: tuple[int, int]) -> Bramble:
    """Image of an i-bramble under contraction of edge ``e``."""
    from .core import contract_edge

    if b.is_hyper:
        raise InvalidInstance("contraction acts on i-labeled hosts")
    host = contract_edge(b.host, e)
    keep, gone = min(e), max(e)
    sets = tuple(frozenset(keep if v == gone else v for v in s) for s in b.sets)
    return Bramble(host, sets, b.names)


# ---------------------------------------------------------------------------
# grids


def vid(k: int, i: int, j: int) -> int:
    return (i - 1) * k + (j - 1)


def coord(k: int, v: int) -> Coord:
    return v // k + 1, v % k + 1


@dataclass(frozen=True)
class GridSpec:
    """A k x k grid plus planar cell diagonals, gridoid surplus edges and
    augmentation edges.  Coordinates are 1-based ``(row, column)``."""

    k: int
    diagonals: tuple[tuple[Coord, Coord], ...] = ()
    additional: tuple[tuple[Coord, Coord], ...] = ()
    augmentation: tuple[tuple[Coord, Coord], ...] = ()
    span: int | None = None
    scheme: str = "auto"

    def __post_init__(self):
        for name in ("diagonals", "additional", "augmentation"):
            norm = tuple(tuple(sorted((tuple(a), tuple(b)))) for a, b in getattr(self, name))
            object.__setattr__(self, name, norm)

    def non_marginal(self, c: Coord) -> bool:
        return 1 < c[0] < self.k and 1 < c[1] < self.k

    def grid_edges(self) -> list[tuple[Coord, Coord]]:
        k = self.k
        out = []
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                if j < k:
                    out.append(((i, j), (i, j + 1)))
                if i < k:
                    out.append(((i, j), (i + 1, j)))
        return out

    def validate(self) -> None:
        k = self.k
        if k < 2:
            raise InvalidInstance("grid side must be at least 2")
        if self.scheme not in ("auto", "bipartition", "cover"):
            raise InvalidInstance(f"unknown labeling scheme {self.scheme!r}")

        def inside(c):
            return 1 <= c[0] <= k and 1 <= c[1] <= k

        seen = {frozenset(e) for e in self.grid_edges()}
        cells = set()
        for a, b in self.diagonals:
            if not (inside(a) and inside(b)) or abs(a[0] - b[0]) != 1 or abs(a[1] - b[1]) != 1:
                raise InvalidInstance(f"{a}-{b} is not a cell diagonal")
            cell = (min(a[0], b[0]), min(a[1], b[1]))
            if cell in cells:
                raise InvalidInstance(f"cell {cell} gets two diagonals, which breaks planarity")
            cells.add(cell)
            seen.add(frozenset((a, b)))
        for name in ("additional", "augmentation"):
            for a, b in getattr(self, name):
                if not (inside(a) and inside(b)) or a == b:
                    raise InvalidInstance(f"{name} edge {a}-{b} has invalid endpoints")
                if frozenset((a, b)) in seen:
                    raise InvalidInstance(f"{name} edge {a}-{b} duplicates an existing edge")
                seen.add(frozenset((a, b)))
        if self.augmentation and self.span is not None:
            for c, count in self.attachments().items():
                if count > self.span:
                    raise InvalidInstance(f"vertex {c} attaches to {count} non-marginal vertices, span is {self.span}")

    def attachments(self) -> dict[Coord, int]:
        """Non-marginal vertices reached from each vertex through augmentation edges."""
        out: dict[Coord, set] = {}
        for a, b in self.augmentation:
            if self.non_marginal(b):
                out.setdefault(a, set()).add(b)
            if self.non_marginal(a):
                out.setdefault(b, set()).add(a)
        return {c: len(s) for c, s in sorted(out.items())}

    def all_edges(self) -> list[tuple[Coord, Coord]]:
        return self.grid_edges() + list(self.diagonals) + list(self.additional) + list(self.augmentation)


def build_grid(spec: GridSpec) -> ILabeledGraph:
    spec.validate()
    k = spec.k
    edges = sorted({tuple(sorted((vid(k, *a), vid(k, *b)))) for a, b in spec.all_edges()})
    g = Graph(tuple(range(k * k)), frozenset(edges))

    def even(v):
        i, j = coord(k, v)
        return (i + j) % 2 == 0

    same_parity = any(even(u) == even(v) for u, v in edges)
    if spec.scheme == "bipartition" and same_parity:
        raise InvalidInstance("bipartition labels need every edge to join both classes")
    if spec.scheme == "bipartition" or (spec.scheme == "auto" and not same_parity):
        n_set = frozenset(v for v in g.vertices if even(v))
        return ILabeledGraph(g, n_set, frozenset(g.vertices) - n_set)
    m_set = {v for v in g.vertices if not even(v)}
    for u, v in edges:
        if u not in m_set and v not in m_set:
            m_set.add(u)
    return ILabeledGraph(g, frozenset(g.vertices), frozenset(m_set))


def grid_bramble(spec: GridSpec) -> Bramble:
    """The row-or-column bramble ``C(i, j)``, 2 <= i, j <= k-1.

    Rows and columns through an endpoint of a gridoid surplus edge are
    skipped, so no endpoint lies in a bramble set.
    """
    k = spec.k
    if k < 4:
        raise InvalidInstance("grid brambles need k >= 4")
    ilg = build_grid(spec)
    bad_rows = {c[0] for e in spec.additional for c in e}
    bad_cols = {c[1] for e in spec.additional for c in e}
    core = [v for v in sorted(ilg.n_set) if spec.non_marginal(coord(k, v))]
    sets, names = [], []
    for i in range(2, k):
        if i in bad_rows:
            continue
        for j in range(2, k):
            if j in bad_cols:
                continue
            s = frozenset(v for v in core if coord(k, v)[0] == i or coord(k, v)[1] == j)
            if not s:
                raise InvalidInstance(f"set C({i},{j}) is empty")
            sets.append(s)
            names.append((i, j))
    if not sets:
        raise InvalidInstance("every set was excluded; too many additional edges for this k")
    return Bramble(ilg, tuple(sets), tuple(names))
