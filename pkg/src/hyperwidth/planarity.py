"""Planarity with a checkable witness, via networkx's left-right test."""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .core import Graph


@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    # clockwise neighbour order around each vertex when planar
    rotation: dict | None = None
    # edges of a subdivided K5 or K3,3 otherwise
    kuratowski: tuple[tuple[int, int], ...] | None = None
    kind: str | None = None

    def __bool__(self) -> bool:
        return self.planar


def to_networkx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(g.vertices)
    out.add_edges_from(g.edges)
    return out


def _kind(witness: nx.Graph) -> str:
    branch = [v for v in witness if witness.degree(v) >= 3]
    return "K5" if len(branch) == 5 else "K3,3"


def planarity_check(g: Graph) -> PlanarityResult:
    planar, cert = nx.check_planarity(to_networkx(g), counterexample=True)
    if planar:
        rotation = {v: tuple(cert.neighbors_cw_order(v)) for v in sorted(cert)}
        return PlanarityResult(True, rotation=rotation)
    edges = tuple(sorted(tuple(sorted(e)) for e in cert.edges()))
    return PlanarityResult(False, kuratowski=edges, kind=_kind(cert))


def verify_rotation(g: Graph, rotation: dict) -> bool:
    """Rebuild the embedding from a rotation system and check Euler's formula."""
    emb = nx.PlanarEmbedding()
    for v in g.vertices:
        emb.add_node(v)
    for v, order in rotation.items():
        if set(order) != set(g.adj[v]):
            return False
        prev = None
        for w in order:
            if prev is None:
                emb.add_half_edge_first(v, w)
            else:
                emb.add_half_edge_cw(v, w, prev)
            prev = w
    try:
        emb.check_structure()
    except nx.NetworkXException:
        return False
    return True
