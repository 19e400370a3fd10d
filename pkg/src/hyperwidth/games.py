"""Marshals and robber on hypergraphs.

The abstract game state is ``(marshals, territory)``: the occupied hyperedges
and the component of unblocked vertices holding the robber.  When the
marshals move from ``M`` to ``M'`` the robber may run along any path that
avoids ``B(M) & B(M')`` and must end outside ``B(M')``.  Winning states are
the least fixpoint of "some move leaves only winning successors", computed
round by round so every state gets a rank that strictly drops along plays.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from . import _kernels
from .core import Hypergraph, InvalidInstance, Labeling, LimitExceeded, blocked_set
from .decomp import HypertreeDecomposition, TreeDecomposition
from .core import Graph

MAX_EDGES = 12
MAX_VERTICES = 62

State = tuple[frozenset[int], frozenset[int]]


@dataclass(frozen=True)
class GamePosition:
    labeling: Labeling
    robber: int


def compatible(h: Hypergraph, p1: GamePosition, p2: GamePosition) -> bool:
    avoid = blocked_set(h, p1.labeling) & blocked_set(h, p2.labeling)
    if p1.robber in avoid or p2.robber in avoid:
        return False
    allowed = set(h.vertices) - avoid
    return any(p1.robber in c and p2.robber in c for c in h.components(allowed))


@dataclass(frozen=True, eq=False)
class Strategy:
    hypergraph: Hypergraph
    cost: int
    moves: dict  # State -> frozenset of hyperedges
    monotone: bool
    initial: tuple[State, ...]


@dataclass(frozen=True, eq=False)
class EscapeWitness:
    """Losing states for the marshals; from each, every move leaves the robber
    a successor inside the set."""

    hypergraph: Hypergraph
    cost: int
    states: frozenset
    initial: tuple[State, ...]


def _edge_mask(h: Hypergraph, edges: Iterable[int]) -> int:
    out = 0
    for j in edges:
        for v in h.edges[j]:
            out |= 1 << v
    return out


def _bits(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def _mask(vs: Iterable[int]) -> int:
    return sum(1 << v for v in set(vs))


def successors(h: Hypergraph, marshals: Iterable[int], territory: Iterable[int],
               move: Iterable[int]) -> list[frozenset[int]]:
    """Robber components reachable when the marshals go from ``marshals`` to ``move``."""
    here = blocked_set(h, Labeling.indicator(range(h.m), marshals))
    there = blocked_set(h, Labeling.indicator(range(h.m), move))
    territory = frozenset(territory)
    if territory not in h.components(set(h.vertices) - here):
        raise InvalidInstance(f"{sorted(territory)} is not a robber component for edges {sorted(marshals)}")
    region = next(c for c in h.components(set(h.vertices) - (here & there)) if c & territory)
    return [c for c in h.components(set(h.vertices) - there) if c & region]


class _Arena:
    def __init__(self, h: Hypergraph, k: int):
        if h.m > MAX_EDGES:
            raise LimitExceeded(f"{h.m} hyperedges exceed the game limit {MAX_EDGES}")
        if h.n > MAX_VERTICES:
            raise LimitExceeded(f"{h.n} vertices exceed the game limit {MAX_VERTICES}")
        if not 0 <= k <= h.m:
            raise LimitExceeded(f"k={k} must lie in 0..{h.m}")
        self.h, self.k = h, k
        self.moves = [frozenset(c) for size in range(k + 1) for c in combinations(range(h.m), size)]
        self.blocked = np.array([_edge_mask(h, mv) for mv in self.moves], np.int64)
        adj = np.zeros(h.n, np.int64)
        for e in h.edges:
            em = _mask(e)
            for v in e:
                adj[v] |= em & ~(1 << v)
        self.adj = adj
        full = set(h.vertices)
        state_move, state_comp, comp_ptr, comp_mask, comp_state = [], [], [0], [], []
        self.index: dict[State, int] = {}
        self.states: list[State] = []
        for j, mv in enumerate(self.moves):
            for comp in h.components(full - _bits(int(self.blocked[j]))):
                st = (mv, comp)
                self.index[st] = len(self.states)
                self.states.append(st)
                state_move.append(j)
                state_comp.append(_mask(comp))
                comp_mask.append(_mask(comp))
                comp_state.append(self.index[st])
            comp_ptr.append(len(comp_mask))
        self.state_move = np.array(state_move, np.int32)
        self.state_comp = np.array(state_comp, np.int64)
        self.comp_ptr = np.array(comp_ptr, np.int32)
        self.comp_mask = np.array(comp_mask, np.int64)
        self.comp_state = np.array(comp_state, np.int32)
        self.initial = tuple((frozenset(), c) for c in h.components())

    def solve(self, monotone: bool):
        return _kernels.marshal_fixpoint(self.adj, self.h.n, self.blocked, self.state_move,
                                         self.state_comp, self.comp_ptr, self.comp_mask,
                                         self.comp_state, monotone)


def _solve(h: Hypergraph, k: int, monotone: bool) -> tuple[bool, Strategy | EscapeWitness]:
    arena = _Arena(h, k)
    rank, choice = arena.solve(monotone)
    won = all(rank[arena.index[st]] >= 0 for st in arena.initial)
    if not won:
        losing = frozenset(st for i, st in enumerate(arena.states) if rank[i] < 0)
        return False, EscapeWitness(h, k, losing, tuple(st for st in arena.initial if st in losing))
    moves = {}
    stack = list(arena.initial)
    while stack:
        st = stack.pop()
        if st in moves:
            continue
        nxt = arena.moves[choice[arena.index[st]]]
        moves[st] = nxt
        for c in successors(h, st[0], st[1], nxt):
            stack.append((nxt, c))
    strat = Strategy(h, k, moves, False, arena.initial)
    return True, Strategy(h, k, moves, is_monotone(strat), arena.initial)


def marshals_win(h: Hypergraph, k: int) -> tuple[bool, Strategy | EscapeWitness]:
    return _solve(h, k, monotone=False)


def marshal_width(h: Hypergraph) -> int:
    for k in range(1, h.m + 1):
        if marshals_win(h, k)[0]:
            return k
    raise AssertionError("occupying every hyperedge always wins")


def transitions(s: Strategy):
    """Yield ``(state, move, successor_territories)`` for every state of ``s``."""
    for st in sorted(s.moves, key=_state_key):
        mv = s.moves[st]
        yield st, mv, successors(s.hypergraph, st[0], st[1], mv)


def _state_key(st: State):
    return (sorted(st[0]), sorted(st[1]))


def is_monotone(s: Strategy) -> bool:
    return _first_growth(s) is None


def _first_growth(s: Strategy):
    for st, mv, succ in transitions(s):
        for c in succ:
            if not c <= st[1]:
                return st, mv, c
    return None


def check_winning(s: Strategy) -> bool:
    """Replay ``s``: closed under successors, within cost, and every play ends."""
    if any(st not in s.moves for st in s.initial):
        return False
    if any(len(mv) > s.cost for mv in s.moves.values()):
        return False
    graph = {}
    try:
        steps = list(transitions(s))
    except InvalidInstance:
        return False
    for st, mv, succ in steps:
        nxt = [(mv, c) for c in succ]
        if any(x not in s.moves for x in nxt):
            return False
        graph[st] = nxt
    # plays are finite iff the successor relation is acyclic
    colour = {}

    def acyclic(u) -> bool:
        colour[u] = 1
        for w in graph[u]:
            if colour.get(w) == 1 or (w not in colour and not acyclic(w)):
                return False
        colour[u] = 2
        return True

    return all(colour.get(st) == 2 or acyclic(st) for st in sorted(graph, key=_state_key))


def monotonize(s: Strategy) -> Strategy:
    """A monotone winning strategy, searched directly on the territory lattice
    from cost ``s.cost`` upwards."""
    if not check_winning(s):
        raise InvalidInstance("strategy is not winning")
    if is_monotone(s):
        return Strategy(s.hypergraph, s.cost, s.moves, True, s.initial)
    h = s.hypergraph
    for k in range(s.cost, h.m + 1):
        won, strat = _solve(h, k, monotone=True)
        if won:
            return strat
    raise AssertionError("occupying every hyperedge is monotone")


def extract_decomposition(h: Hypergraph, s: Strategy) -> HypertreeDecomposition:
    """Generalized hypertree decomposition read off a monotone winning strategy.

    One node per visited state ``(M, C)`` with move ``M'``: its bag is the
    part of ``B(M)`` touching ``C`` together with ``B(M') & C``, covered by
    ``M | M'``; children are the successor states.
    """
    growth = _first_growth(s)
    if growth is not None:
        st, mv, c = growth
        raise InvalidInstance(
            f"territory grows from {sorted(st[1])} to {sorted(c)} when moving to edges {sorted(mv)}")
    if not check_winning(s):
        raise InvalidInstance("strategy is not winning")
    bags, lambdas, edges, roots = {}, {}, set(), []

    def build(st: State, parent: int | None) -> None:
        marshals, territory = st
        mv = s.moves[st]
        here = _bits(_edge_mask(h, marshals))
        there = _bits(_edge_mask(h, mv))
        touching = frozenset(v for v in here if any(e & territory for e in (h.edges[j] for j in h.incident[v])))
        t = len(bags)
        bags[t] = touching | (there & territory)
        lambdas[t] = Labeling.indicator(range(h.m), marshals | mv)
        if parent is None:
            roots.append(t)
        else:
            edges.add((parent, t))
        for c in sorted(successors(h, marshals, territory, mv), key=sorted):
            build((mv, c), t)

    for st in s.initial:
        build(st, None)
    edges |= set(zip(roots, roots[1:]))
    tree = Graph(tuple(bags), frozenset(edges))
    return HypertreeDecomposition(TreeDecomposition(tree, bags), lambdas)
