"""Seeded instance generators."""
from __future__ import annotations

import random as _random
from itertools import combinations

from .brambles import Bramble, GridSpec
from .core import Graph, Hypergraph, InvalidInstance


def gadget(g: Graph) -> Hypergraph:
    """Replace every edge of ``g`` by ``|V(g)| + 1`` internally disjoint paths
    of length two.  The result's fhw equals ``tw(g) + 1``."""
    pos = {v: i for i, v in enumerate(g.vertices)}
    n = len(pos)
    edges, nxt = [], n
    for u, v in sorted(g.edges):
        for _ in range(n + 1):
            edges.append((pos[u], nxt))
            edges.append((nxt, pos[v]))
            nxt += 1
    if not edges:
        raise InvalidInstance("gadget needs at least one edge")
    return Hypergraph.from_edges(edges, n=nxt)


def universal(h: Hypergraph) -> Hypergraph:
    return h.with_universal_edge()


def random_hypergraph(n: int, m: int, max_arity: int, seed: int) -> Hypergraph:
    """Uniformly drawn hyperedges, then repaired so every vertex is covered."""
    if n < 1 or m < 1 or max_arity < 1:
        raise InvalidInstance("n, m and max_arity must be positive")
    if m * max_arity < n:
        raise InvalidInstance(f"{m} edges of arity <= {max_arity} cannot cover {n} vertices")
    rng = _random.Random(seed)
    edges = [set(rng.sample(range(n), rng.randint(1, min(max_arity, n)))) for _ in range(m)]
    for v in range(n):
        if any(v in e for e in edges):
            continue
        # put v where it fits, displacing a vertex that stays covered elsewhere
        room = [e for e in edges if len(e) < max_arity]
        if room:
            rng.choice(room).add(v)
            continue
        for e in rng.sample(edges, len(edges)):
            spare = [u for u in sorted(e) if sum(u in f for f in edges) > 1]
            if spare:
                e.remove(rng.choice(spare))
                e.add(v)
                break
        else:
            raise InvalidInstance("could not cover every vertex")
    return Hypergraph(n, tuple(frozenset(e) for e in edges))


def grid_spec(k: int, triangulate: bool = False, gridoid: int = 0,
              augment: int | None = None, seed: int = 0) -> GridSpec:
    """Grid variants: full cell triangulation, ``gridoid`` surplus edges on a
    triangulated grid, or random augmentation edges of the given span."""
    rng = _random.Random(seed)
    diagonals = []
    if triangulate or gridoid:
        for i in range(1, k):
            for j in range(1, k):
                if rng.random() < 0.5:
                    diagonals.append(((i, j), (i + 1, j + 1)))
                else:
                    diagonals.append(((i, j + 1), (i + 1, j)))
    taken = {frozenset(e) for e in GridSpec(k).grid_edges()} | {frozenset(e) for e in diagonals}
    cells = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]

    def fresh(a, b):
        return a != b and frozenset((a, b)) not in taken

    additional = []
    while len(additional) < gridoid:
        a, b = rng.sample(cells, 2)
        if fresh(a, b):
            additional.append((a, b))
            taken.add(frozenset((a, b)))
    augmentation = []
    if augment is not None:
        spec = GridSpec(k)
        degree = dict.fromkeys(cells, 0)
        for _ in range(k * k * augment):
            a, b = rng.sample(cells, 2)
            if not fresh(a, b) or degree[a] >= augment or degree[b] >= augment:
                continue
            if not (spec.non_marginal(a) or spec.non_marginal(b)):
                continue
            augmentation.append((a, b))
            taken.add(frozenset((a, b)))
            degree[a] += 1
            degree[b] += 1
    spec = GridSpec(k, tuple(diagonals), tuple(additional), tuple(augmentation), augment)
    spec.validate()
    return spec


def random_hyperbramble(h: Hypergraph, seed: int, max_sets: int = 6, max_size: int = 3) -> Bramble:
    """Random connected vertex sets, kept greedily while they touch all earlier ones."""
    from .brambles import touch

    rng = _random.Random(seed)
    sets: list[frozenset[int]] = []
    for _ in range(8 * max_sets):
        if len(sets) >= max_sets:
            break
        grow = {rng.randrange(h.n)}
        target = rng.randint(1, max_size)
        while len(grow) < target:
            frontier = sorted({u for v in grow for j in h.incident[v] for u in h.edges[j]} - grow)
            if not frontier:
                break
            grow.add(rng.choice(frontier))
        s = frozenset(grow)
        if s not in sets and all(touch(h, s, t) for t in sets):
            sets.append(s)
    return Bramble(h, tuple(sets))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(combinations(range(n), 2), vertices=range(n))


def grid_graph(k: int) -> Graph:
    return Graph.from_edges([(i * k + j, i * k + j + 1) for i in range(k) for j in range(k - 1)] +
                            [(i * k + j, (i + 1) * k + j) for i in range(k - 1) for j in range(k)])


def triangle() -> Hypergraph:
    return Hypergraph.from_edges([(0, 1), (1, 2), (0, 2)])
