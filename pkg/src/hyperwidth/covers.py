"""Minimum fractional and integral covers of vertex sets.

A host is either a :class:`Hypergraph` (resources are hyperedges, a vertex is
blocked by the labels of its incident hyperedges) or an
:class:`ILabeledGraph` (resources are M-vertices, a vertex of N is controlled
by the labels in its closed neighborhood).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from .core import Hypergraph, ILabeledGraph, InvalidInstance, Labeling, LimitExceeded
from .lp import maximize

Host = Union[Hypergraph, ILabeledGraph]


@dataclass(frozen=True)
class CoverSolution:
    labeling: Labeling
    cost: Fraction
    integral: bool
    targets: frozenset[int] = frozenset()
    # optimal dual: a fractional packing of the targets with the same value
    dual: dict = field(default_factory=dict, compare=False)


def resources(host: Host) -> list[int]:
    if isinstance(host, Hypergraph):
        return list(range(host.m))
    return sorted(host.m_set)


def resources_of(host: Host, x: int) -> tuple[int, ...]:
    """Resources whose label counts towards covering ``x``."""
    if isinstance(host, Hypergraph):
        return host.incident[x]
    return tuple(sorted(host.graph.closed_neighborhood(x) & host.m_set))


def _targets(host: Host, s: Iterable[int]) -> list[int]:
    s = sorted(set(s))
    domain = set(host.vertices) if isinstance(host, Hypergraph) else host.n_set
    bad = [v for v in s if v not in domain]
    if bad:
        raise InvalidInstance(f"vertex {bad[0]} cannot be covered by this host")
    return s


def _solve_block(targets: list[int], hits: dict[int, frozenset[int]]) -> tuple[Fraction, dict, dict]:
    """Solve one connected block of the covering program through its dual."""
    col = {x: i for i, x in enumerate(targets)}
    used = sorted(hits)
    ny = len(targets)
    # dual program: max sum(y) - sum(z)  s.t.  sum_{x hit by r} y_x - z_r <= 1
    A = []
    for k, r in enumerate(used):
        row = [0] * (ny + len(used))
        for x in hits[r]:
            row[col[x]] = 1
        row[ny + k] = -1
        A.append(row)
    res = maximize(A, [1] * len(used), [1] * ny + [-1] * len(used))
    return res.value, dict(zip(used, res.dual)), {x: res.x[col[x]] for x in targets}


def fractional_cover(host: Host, s: Iterable[int]) -> CoverSolution:
    targets = _targets(host, s)
    domain = resources(host)
    if not targets:
        return CoverSolution(Labeling.zero(domain), Fraction(0), True, frozenset())
    tset = set(targets)
    hits: dict[int, set[int]] = {}
    for x in targets:
        for r in resources_of(host, x):
            hits.setdefault(r, set()).add(x)
    # weight on a resource can move to one hitting a superset of its targets
    kept: dict[frozenset[int], int] = {}
    for r in sorted(hits, key=lambda r: (-len(hits[r]), r)):
        hr = frozenset(hits[r])
        if hr in kept or any(hr < other for other in kept):
            continue
        kept[hr] = r
    # blocks of targets linked by a shared resource are independent programs
    parent = {x: x for x in tset}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for hr in kept:
        first = min(hr)
        for x in hr:
            parent[find(x)] = find(first)
    blocks: dict[int, list[int]] = {}
    for x in targets:
        blocks.setdefault(find(x), []).append(x)
    values = dict.fromkeys(domain, 0)
    dual: dict[int, Fraction] = {}
    total = Fraction(0)
    for root, members in sorted(blocks.items()):
        mset = set(members)
        block_hits = {r: hr for hr, r in kept.items() if hr & mset}
        value, gamma, y = _solve_block(members, block_hits)
        total += value
        values.update(gamma)
        dual.update(y)
    lab = Labeling(values)
    return CoverSolution(lab, total, lab.is_binary, frozenset(targets), dual)


def integral_cover(host: Host, s: Iterable[int], max_resources: int = 20) -> CoverSolution:
    targets = _targets(host, s)
    domain = resources(host)
    if not targets:
        return CoverSolution(Labeling.zero(domain), Fraction(0), True, frozenset())
    bit = {x: 1 << i for i, x in enumerate(targets)}
    full = (1 << len(targets)) - 1
    masks: dict[int, int] = {}
    for x in targets:
        for r in resources_of(host, x):
            masks[r] = masks.get(r, 0) | bit[x]
    # a resource whose hits are contained in another's is never needed
    cand = sorted(masks, key=lambda r: (-bin(masks[r]).count("1"), r))
    kept = []
    for r in cand:
        if not any(masks[r] | masks[q] == masks[q] for q in kept):
            kept.append(r)
    kept.sort()
    if len(kept) > max_resources:
        raise LimitExceeded(f"{len(kept)} candidate resources exceed the limit {max_resources}")
    for size in range(1, len(kept) + 1):
        for combo in combinations(kept, size):
            acc = 0
            for r in combo:
                acc |= masks[r]
            if acc == full:
                lab = Labeling.indicator(domain, combo)
                return CoverSolution(lab, Fraction(size), True, frozenset(targets))
    raise AssertionError("every target has an incident resource")


def covered(host: Host, lab: Labeling) -> frozenset[int]:
    """Vertices blocked (hypergraph) or controlled (i-labeled graph) by ``lab``."""
    from .core import blocked_set, controlled_set

    if isinstance(host, Hypergraph):
        return blocked_set(host, lab)
    return controlled_set(host, lab)


def check_duality(host: Host, sol: CoverSolution) -> bool:
    """Re-check a fractional optimum: primal feasible, dual feasible and equal value."""
    if not sol.targets <= covered(host, sol.labeling):
        return False
    if sol.labeling.size != sol.cost:
        return False
    y = sol.dual
    if any(v < 0 for v in y.values()):
        return False
    # packing constraint with slack variables z_r = max(0, load - 1)
    load: dict[int, Fraction] = {}
    for x, v in y.items():
        for r in resources_of(host, x):
            load[r] = load.get(r, Fraction(0)) + v
    dual_value = sum(y.values(), Fraction(0)) - sum((max(Fraction(0), l - 1) for l in load.values()), Fraction(0))
    return dual_value == sol.cost


def transversal_cover(host: Host, family: Sequence[Iterable[int]], max_nodes: int = 2_000_000) -> CoverSolution:
    """Cheapest labeling that covers at least one vertex of every set.

    Enumerates hitting sets one set at a time, skipping sets already hit and
    pruning any partial choice whose fractional cover already reaches the best
    found.  Fractional cover cost is monotone, so the pruning is exact.
    """
    sets = [sorted(set(f)) for f in family]
    if any(not f for f in sets):
        raise InvalidInstance("family contains an empty set")
    domain = resources(host)
    if not sets:
        return CoverSolution(Labeling.zero(domain), Fraction(0), True)
    # small sets first keeps the branching factor low near the root
    sets.sort(key=lambda f: (len(f), f))
    cache: dict[frozenset, CoverSolution] = {}

    def cost(chosen: frozenset) -> CoverSolution:
        if chosen not in cache:
            cache[chosen] = fractional_cover(host, chosen)
        return cache[chosen]

    best: list[CoverSolution | None] = [None]
    nodes = [0]
    seen: set[frozenset] = set()

    def search(i: int, chosen: frozenset) -> None:
        nodes[0] += 1
        if nodes[0] > max_nodes:
            raise LimitExceeded(f"transversal search exceeded {max_nodes} nodes")
        while i < len(sets) and chosen.intersection(sets[i]):
            i += 1
        sol = cost(chosen)
        if best[0] is not None and sol.cost >= best[0].cost:
            return
        if i == len(sets):
            best[0] = sol
            return
        for v in sets[i]:
            nxt = chosen | {v}
            if nxt in seen:
                continue
            seen.add(nxt)
            search(i + 1, nxt)

    search(0, frozenset())
    return best[0]
