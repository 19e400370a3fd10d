"""Tree decompositions, hypertree decompositions and exact width oracles."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from . import _kernels
from .core import (Check, Graph, Hypergraph, InvalidInstance, Labeling, LimitExceeded,
                   blocked_set, incidence_graph, primal_graph)
from .covers import CoverSolution, fractional_cover, integral_cover

TW_EXACT_LIMIT = 16
FW_EXACT_LIMIT = 9


@dataclass(frozen=True, eq=False)
class TreeDecomposition:
    tree: Graph
    bags: Mapping[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(self, "bags", {t: frozenset(b) for t, b in sorted(self.bags.items())})

    @property
    def nodes(self) -> tuple[int, ...]:
        return self.tree.vertices

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return self.tree == other.tree and self.bags == other.bags


@dataclass(frozen=True, eq=False)
class HypertreeDecomposition:
    base: TreeDecomposition
    lambdas: Mapping[int, Labeling]

    @property
    def width(self) -> Fraction:
        # maximum over nodes; a minimum would make the parameter degenerate
        return max(lab.size for lab in self.lambdas.values())

    @property
    def generalized(self) -> bool:
        return all(lab.is_binary for lab in self.lambdas.values())

    def __eq__(self, other):
        if not isinstance(other, HypertreeDecomposition):
            return NotImplemented
        return self.base == other.base and dict(self.lambdas) == dict(other.lambdas)


Host = Union[Hypergraph, Graph]


def _host_parts(host: Host) -> tuple[list[int], list[frozenset[int]]]:
    if isinstance(host, Hypergraph):
        return list(host.vertices), list(host.edges)
    return list(host.vertices), [frozenset(e) for e in sorted(host.edges)]


def validate_td(host: Host, td: TreeDecomposition) -> Check:
    verts, edges = _host_parts(host)
    tree = td.tree
    if set(td.bags) != set(tree.vertices):
        return Check(False, "bag keys differ from tree nodes")
    if not tree.is_tree():
        return Check(False, "decomposition graph is not a tree")
    known = set(verts)
    for t, bag in td.bags.items():
        extra = bag - known
        if extra:
            return Check(False, f"node {t} holds unknown vertex {min(extra)}", details={"node": t})
    where: dict[int, list[int]] = {v: [] for v in verts}
    for t, bag in td.bags.items():
        for v in bag:
            where[v].append(t)
    for v in verts:
        if not where[v]:
            return Check(False, f"vertex {v} is in no bag", details={"vertex": v})
    for j, e in enumerate(edges):
        if not any(e <= bag for bag in td.bags.values()):
            return Check(False, f"edge {j} is in no bag", details={"edge": j})
    for v in verts:
        if not tree.is_connected(where[v]):
            return Check(False, f"nodes holding vertex {v} are not connected", details={"vertex": v})
    return Check(True, width=td.width)


def validate_htd(h: Hypergraph, d: HypertreeDecomposition) -> Check:
    base = validate_td(h, d.base)
    if not base:
        return base
    if set(d.lambdas) != set(d.base.bags):
        return Check(False, "labelings do not match decomposition nodes")
    for t in d.base.nodes:
        lab = d.lambdas[t]
        if set(lab) != set(range(h.m)):
            return Check(False, f"labeling of node {t} is not over the hyperedges", details={"node": t})
        loose = d.base.bags[t] - blocked_set(h, lab)
        if loose:
            v = min(loose)
            return Check(False, f"vertex {v} of node {t} is not blocked", details={"node": t, "vertex": v})
    return Check(True, width=d.width, details={"generalized": d.generalized})


def _index(g: Graph) -> tuple[list[int], dict[int, int]]:
    verts = list(g.vertices)
    return verts, {v: i for i, v in enumerate(verts)}


def elimination_decomposition(g: Graph, order: Sequence[int], compress: bool = True) -> TreeDecomposition:
    """Tree decomposition whose bags are the elimination cliques of ``order``."""
    if sorted(order) != list(g.vertices):
        raise InvalidInstance("ordering must list every vertex once")
    nb = {v: set(g.adj[v]) for v in g.vertices}
    pos = {v: i for i, v in enumerate(order)}
    bags: dict[int, frozenset[int]] = {}
    parent: dict[int, int] = {}
    for i, v in enumerate(order):
        later = nb[v]
        bags[i] = frozenset(later | {v})
        if later:
            parent[i] = min(pos[u] for u in later)
        for u in later:
            nb[u] |= later - {u}
            nb[u].discard(v)
    roots = [i for i in bags if i not in parent]
    edges = {(i, p) for i, p in parent.items()}
    edges |= {(a, b) for a, b in zip(roots, roots[1:])}
    td = TreeDecomposition(Graph(tuple(bags), frozenset(edges)), bags)
    return compress_decomposition(td) if compress else td


def compress_decomposition(td: TreeDecomposition) -> TreeDecomposition:
    """Merge every node into a neighbor whose bag contains its bag."""
    bags = dict(td.bags)
    adj = {t: set(td.tree.adj[t]) for t in td.tree.vertices}
    changed = True
    while changed and len(bags) > 1:
        changed = False
        for t in sorted(bags):
            host = next((u for u in sorted(adj[t]) if bags[t] <= bags[u]), None)
            if host is None:
                continue
            for u in adj[t]:
                if u != host:
                    adj[u].discard(t)
                    adj[u].add(host)
                    adj[host].add(u)
            adj[host].discard(t)
            del adj[t], bags[t]
            changed = True
            break
    relabel = {t: i for i, t in enumerate(sorted(bags))}
    edges = {(relabel[a], relabel[b]) for a in adj for b in adj[a] if a < b}
    return TreeDecomposition(Graph(tuple(relabel.values()), frozenset(edges)),
                             {relabel[t]: b for t, b in bags.items()})


def exact_treewidth(g: Graph, limit: int | None = TW_EXACT_LIMIT) -> tuple[int, TreeDecomposition]:
    verts, idx = _index(g)
    n = len(verts)
    if limit is not None and n > limit:
        raise LimitExceeded(f"{n} vertices exceed the exact treewidth limit {limit}")
    if n > 30:
        raise LimitExceeded("subset DP needs at most 30 vertices")
    adj = np.zeros(n, np.int64)
    for u, v in g.edges:
        adj[idx[u]] |= 1 << idx[v]
        adj[idx[v]] |= 1 << idx[u]
    width, order = _kernels.treewidth_dp(adj, n)
    td = elimination_decomposition(g, [verts[i] for i in order])
    assert td.width == int(width)
    return int(width), td


def greedy_order(g: Graph, strategy: str = "min-fill") -> list[int]:
    if strategy not in ("min-fill", "min-degree"):
        raise ValueError(f"unknown strategy {strategy!r}")
    nb = {v: set(g.adj[v]) for v in g.vertices}
    order = []
    while nb:
        def key(v):
            if strategy == "min-degree":
                return (len(nb[v]), v)
            ns = sorted(nb[v])
            fill = sum(1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in nb[a])
            return (fill, len(ns), v)
        v = min(nb, key=key)
        for u in nb[v]:
            nb[u] |= nb[v] - {u}
            nb[u].discard(v)
        del nb[v]
        order.append(v)
    return order


def heuristic_treewidth(g: Graph, strategy: str = "min-fill") -> tuple[int, TreeDecomposition]:
    td = elimination_decomposition(g, greedy_order(g, strategy))
    return td.width, td


def lemma1_convert(h: Hypergraph, td: TreeDecomposition) -> HypertreeDecomposition:
    """Turn a tree decomposition of the incidence graph into a generalized
    hypertree decomposition of ``h`` of width at most ``td.width + 1``."""
    ig = incidence_graph(h).graph
    check = validate_td(ig, td)
    if not check:
        raise InvalidInstance(f"not a tree decomposition of the incidence graph: {check.reason}")
    bags, lambdas = {}, {}
    for t, bag in td.bags.items():
        edge_ids = {x - h.n for x in bag if x >= h.n}
        verts = {x for x in bag if x < h.n}
        bags[t] = frozenset(verts.union(*(h.edges[j] for j in edge_ids)))
        chosen = edge_ids | {h.incident[v][0] for v in verts}
        lambdas[t] = Labeling.indicator(range(h.m), chosen)
    return HypertreeDecomposition(TreeDecomposition(td.tree, bags), lambdas)


# ---------------------------------------------------------------------------
# exact fractional / generalized hypertree width


def _structural_twins(h: Hypergraph) -> list[int]:
    """Class id per vertex; swapping two vertices of a class is an automorphism."""
    from collections import Counter

    base = Counter(h.edges)
    cls = list(range(h.n))
    inc_sig = [sorted(sorted(h.edges[j]) for j in h.incident[v]) for v in h.vertices]
    for y in h.vertices:
        for x in range(y):
            if cls[x] != x or len(inc_sig[x]) != len(inc_sig[y]):
                continue
            swap = {x: y, y: x}
            if Counter(frozenset(swap.get(v, v) for v in e) for e in h.edges) == base:
                cls[y] = x
                break
    return cls


class _FWidthSearch:
    def __init__(self, h: Hypergraph, cost: str):
        self.h = h
        self.n = h.n
        self.full = (1 << h.n) - 1
        g = primal_graph(h)
        self.adj0 = [sum(1 << u for u in g.adj[v]) for v in h.vertices]
        self.twins = _structural_twins(h)
        self.cover = fractional_cover if cost == "fractional" else integral_cover
        self._solutions: dict[int, CoverSolution] = {}
        self.calls = 0

    def solution(self, mask: int) -> CoverSolution:
        sol = self._solutions.get(mask)
        if sol is None:
            verts = [v for v in range(self.n) if mask >> v & 1]
            sol = self._solutions[mask] = self.cover(self.h, verts)
        return sol

    def cost(self, mask: int) -> Fraction:
        return self.solution(mask).cost

    def order_width(self, order: Sequence[int]) -> Fraction:
        adj = list(self.adj0)
        worst = Fraction(0)
        for v in order:
            worst = max(worst, self.cost(adj[v] | 1 << v))
            adj = self._eliminate(adj, v)
        return worst

    @staticmethod
    def _eliminate(adj: list[int], v: int) -> list[int]:
        adj = list(adj)
        nb = adj[v]
        vb = 1 << v
        rest = nb
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            adj[u] = (adj[u] | nb) & ~low & ~vb
            rest ^= low
        adj[v] = 0
        return adj

    def _simplicial(self, adj: list[int], remaining: int) -> int:
        rest = remaining
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            nb = adj[v]
            probe = nb
            ok = True
            while probe:
                lo = probe & -probe
                u = lo.bit_length() - 1
                probe ^= lo
                if (nb & ~lo) & ~adj[u]:
                    ok = False
                    break
            if ok:
                return v
        return -1

    def below(self, bound: Fraction) -> list[int] | None:
        """An ordering whose every bag costs strictly less than ``bound``."""
        failed: set[int] = set()

        def dfs(S: int, adj: list[int], order: list[int]) -> bool:
            self.calls += 1
            if S == self.full:
                return True
            if S in failed:
                return False
            remaining = self.full & ~S
            v = self._simplicial(adj, remaining)
            if v >= 0:
                cands = [v] if self.cost(adj[v] | 1 << v) < bound else []
            else:
                cands, seen = [], set()
                rest = remaining
                while rest:
                    low = rest & -rest
                    u = low.bit_length() - 1
                    rest ^= low
                    if self.twins[u] in seen:
                        continue
                    seen.add(self.twins[u])
                    c = self.cost(adj[u] | low)
                    if c < bound:
                        cands.append((c, u))
                cands = [u for _, u in sorted(cands)]
            for u in cands:
                order.append(u)
                if dfs(S | 1 << u, self._eliminate(adj, u), order):
                    return True
                order.pop()
            failed.add(S)
            return False

        order: list[int] = []
        return order if dfs(0, self.adj0, order) else None


def exact_fwidth(h: Hypergraph, cost: str = "fractional",
                 limit: int | None = FW_EXACT_LIMIT) -> tuple[Fraction, HypertreeDecomposition]:
    """Exact fhw (``cost="fractional"``) or ghw (``cost="integral"``) with a witness.

    Minimizes, over elimination orderings of the primal graph, the largest
    cover cost of an elimination bag.  Simplicial vertices are eliminated
    eagerly and interchangeable vertices are branched on once; both are safe
    for any cost that is monotone under inclusion.
    """
    if cost not in ("fractional", "integral"):
        raise ValueError(f"unknown cost {cost!r}")
    if limit is not None and h.n > limit:
        raise LimitExceeded(f"{h.n} vertices exceed the exact f-width limit {limit}")
    search = _FWidthSearch(h, cost)
    g = primal_graph(h)
    best_order = greedy_order(g, "min-fill")
    best = search.order_width(best_order)
    while True:
        found = search.below(best)
        if found is None:
            break
        best_order, best = found, search.order_width(found)
    td = elimination_decomposition(g, best_order)
    lambdas = {t: search.solution(sum(1 << v for v in bag)).labeling for t, bag in td.bags.items()}
    d = HypertreeDecomposition(td, lambdas)
    assert d.width == best
    return best, d


@dataclass(frozen=True)
class SandwichReport:
    fhw: Fraction
    ghw: Fraction
    tw_incidence: int
    fhw_exact: bool
    ghw_exact: bool
    tw_exact: bool

    @property
    def tw_plus_one(self) -> int:
        return self.tw_incidence + 1

    @property
    def chain_ok(self) -> bool:
        return self.fhw <= self.ghw <= self.tw_incidence + 1


def sandwich_report(h: Hypergraph, tw_limit: int | None = TW_EXACT_LIMIT,
                    fw_limit: int | None = FW_EXACT_LIMIT) -> SandwichReport:
    ig = incidence_graph(h).graph
    if tw_limit is None or len(ig.vertices) <= tw_limit:
        tw, td = exact_treewidth(ig, limit=tw_limit)
        tw_exact = True
    else:
        tw, td = heuristic_treewidth(ig)
        tw_exact = False
    if fw_limit is None or h.n <= fw_limit:
        fhw, _ = exact_fwidth(h, "fractional", limit=fw_limit)
        ghw, _ = exact_fwidth(h, "integral", limit=fw_limit)
        exact = True
    else:
        conv = lemma1_convert(h, td)
        ghw = conv.width
        fhw = max(fractional_cover(h, bag).cost for bag in conv.base.bags.values())
        exact = False
    return SandwichReport(Fraction(fhw), Fraction(ghw), tw, exact, exact, tw_exact)

