"""Second- and higher-level cut discovery over cut-graph components.

The first-level cut graph relates single nodes. Its connected components can
themselves be joint-ancestor free as sets, which yields hyperedges between
components (each carrying a genuine cut of the chain) and sum-of-ratio
relations between any two nodes drawn from the linked components. Merging
components along hyperedges and rescanning lifts the construction level by
level.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Union

from .errors import InvalidArgumentError, ResourceLimitError
from .factors import (
    FactorExpr,
    RateAtom,
    Relation,
    SumExpr,
    make_relation,
    product_of,
    sum_of,
)
from .graph_core import NodeSet
from .product_form import (
    Cut,
    CutGraph,
    FormalChain,
    _sources,
    cut_graph,
    is_jaf,
    mutually_avoiding_ancestors,
    s_factors,
)

_BROAD_SEARCH_BUDGET = 12

# ---- types ----


@dataclass(frozen=True)
class HyperEdge:
    """A cut between two whole components of the previous level's graph.

    ``comp_i``/``comp_j`` index the scanned partition; ``source_i``/``source_j``
    are the actual source nodes of the cut, always nonempty subsets of the
    respective components.
    """

    source_i: NodeSet
    source_j: NodeSet
    comp_i: int
    comp_j: int
    cut: Cut


@dataclass(frozen=True)
class CutHypergraph:
    """One level of the recursion: its hyperedges and the merged partition."""

    level: int
    base: Union[CutGraph, "CutHypergraph"]
    hyperedges: tuple[HyperEdge, ...]
    components: tuple[NodeSet, ...]


# ---- discovery ----


def _component_pair_edge(
    c: FormalChain, comps: tuple[NodeSet, ...], p: int, q: int
) -> HyperEdge | None:
    k1, k2 = comps[p], comps[q]
    side_a, side_b = mutually_avoiding_ancestors(c, k1, k2)
    if not side_a.isdisjoint(side_b):
        return None
    src_a, src_b = _sources(c.graph, side_a.mask, side_b.mask)
    source_i = NodeSet(src_a, c.graph.n)
    source_j = NodeSet(src_b, c.graph.n)
    assert source_i and source_i.issubset(k1), "cut sources must sit inside the first component"
    assert source_j and source_j.issubset(k2), "cut sources must sit inside the second component"
    return HyperEdge(
        source_i=source_i,
        source_j=source_j,
        comp_i=p,
        comp_j=q,
        cut=Cut(side_a, side_b, source_i, source_j),
    )


def _scan_pairs(c: FormalChain, comps: tuple[NodeSet, ...]) -> tuple[HyperEdge, ...]:
    edges = []
    for p in range(len(comps)):
        for q in range(p + 1, len(comps)):
            edge = _component_pair_edge(c, comps, p, q)
            if edge is not None:
                edges.append(edge)
    return tuple(edges)


def narrow_second_level_cuts(c: FormalChain, c1: CutGraph) -> tuple[HyperEdge, ...]:
    """All component pairs of the first-level graph that are free as whole sets.

    Each hit carries the cut spanned by the two components' mutually avoiding
    ancestor sets. Quadratic in the component count, with one linear-time
    freeness check per pair.
    """
    return _scan_pairs(c, c1.components)


def _merge_components(
    comps: tuple[NodeSet, ...], edges: tuple[HyperEdge, ...], n: int
) -> tuple[NodeSet, ...]:
    parent = list(range(len(comps)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = find(e.comp_i), find(e.comp_j)
        if a != b:
            parent[b] = a
    masks: dict[int, int] = {}
    for idx, comp in enumerate(comps):
        masks.setdefault(find(idx), 0)
        masks[find(idx)] |= comp.mask
    merged = sorted(masks.values(), key=lambda m: m & -m)
    return tuple(NodeSet(m, n) for m in merged)


def higher_level_cut_graph(c: FormalChain, max_level: int) -> list[CutHypergraph]:
    """Run the merge-and-rescan recursion from level 2 up to ``max_level``.

    Stops as soon as a level finds no hyperedge or everything has merged into
    one component; levels that find nothing are not reported.
    """
    if max_level < 2:
        raise InvalidArgumentError("the recursion starts at level 2")
    c1 = cut_graph(c)
    base: CutGraph | CutHypergraph = c1
    comps = c1.components
    levels: list[CutHypergraph] = []
    for level in range(2, max_level + 1):
        if len(comps) <= 1:
            break
        edges = _scan_pairs(c, comps)
        if not edges:
            break
        comps = _merge_components(comps, edges, c.graph.n)
        hypergraph = CutHypergraph(level=level, base=base, hyperedges=edges, components=comps)
        levels.append(hypergraph)
        base = hypergraph
    return levels


# ---- sum-of-ratio relations ----


def _c1_path(edges: frozenset[tuple[int, int]], n: int, src: int, dst: int) -> list[int]:
    if src == dst:
        return [src]
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    dist = {src: 0}
    frontier = [src]
    while frontier and dst not in dist:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    if dst not in dist:
        raise InvalidArgumentError("nodes are not connected in the first-level graph")
    path = [dst]
    while path[-1] != src:
        here = path[-1]
        path.append(min(v for v in adj[here] if dist.get(v) == dist[here] - 1))
    return path[::-1]


def _crossing_sum(c: FormalChain, node: int, far_side: NodeSet) -> SumExpr:
    atoms = [RateAtom(node, t) for t in c.graph.out_adj[node] if t in far_side]
    assert atoms, "a cut source must have at least one crossing edge"
    return SumExpr(tuple(atoms))


def _side_factor(
    c: FormalChain,
    c1: CutGraph,
    star: int,
    sources: NodeSet,
    far_side: NodeSet,
) -> FactorExpr:
    terms: list[FactorExpr] = []
    for node in sorted(sources):
        crossing = _crossing_sum(c, node, far_side)
        if node == star:
            terms.append(crossing)
            continue
        path = _c1_path(c1.edges, c.graph.n, star, node)
        pairs = []
        for a, b in zip(path, path[1:]):
            pair = s_factors(c, a, b)
            assert pair is not None, "first-level path hops are free pairs by construction"
            pairs.append(pair)
        term = product_of(
            [(fwd, 1) for fwd, _ in pairs] + [(bwd, -1) for _, bwd in pairs] + [(crossing, 1)]
        )
        terms.append(term)
    return sum_of(terms)


def sps_relation(
    c: FormalChain,
    h: HyperEdge,
    i_star: int,
    j_star: int,
    c1: CutGraph | None = None,
) -> Relation:
    """The two-node relation a component-pair cut induces between chosen members.

    The cut equation of ``h`` balances one weighted flow sum per side; every
    source node's weight is rewritten in terms of the chosen member's weight
    through ratios of first-level cut factors along a shortest path in the
    first-level graph (the chosen member's own ratio collapses away). The
    result is a sum-of-ratio-products identity between ``i_star`` and
    ``j_star`` alone; with singleton sources equal to the chosen members it
    degenerates to a plain width-level relation.
    """
    if c1 is None:
        c1 = cut_graph(c)
    comps = c1.components
    if not (0 <= h.comp_i < len(comps) and 0 <= h.comp_j < len(comps)):
        raise InvalidArgumentError("hyperedge does not reference first-level components")
    if i_star not in comps[h.comp_i] or j_star not in comps[h.comp_j]:
        raise InvalidArgumentError(
            "the chosen members must belong to the hyperedge's two components"
        )
    lhs = _side_factor(c, c1, i_star, h.source_i, h.cut.side_b)
    rhs = _side_factor(c, c1, j_star, h.source_j, h.cut.side_a)
    return make_relation(i_star, j_star, lhs, rhs)


# ---- broad search ----


def broad_cut_search(
    c: FormalChain,
    k1: NodeSet,
    k2: NodeSet,
    max_subset_size: int = _BROAD_SEARCH_BUDGET,
) -> list[tuple[NodeSet, NodeSet]]:
    """Every free pair of nonempty subsets (I, J) with I within k1 and J within k2.

    Exhaustive over both powersets, so the two sets together may span at most
    ``max_subset_size`` nodes; larger inputs are refused outright rather than
    silently truncated. Results are sorted by (I, J) masks for determinism.
    """
    if not k1 or not k2 or not k1.isdisjoint(k2):
        raise InvalidArgumentError("component sets must be nonempty and disjoint")
    total = len(k1) + len(k2)
    if total > max_subset_size:
        raise ResourceLimitError(
            f"subset search over {total} nodes exceeds the budget of {max_subset_size}"
        )
    n = c.graph.n
    members_1 = sorted(k1)
    members_2 = sorted(k2)
    found: list[tuple[NodeSet, NodeSet]] = []
    for bits_1 in range(1, 1 << len(members_1)):
        i_mask = 0
        for pos, node in enumerate(members_1):
            if bits_1 >> pos & 1:
                i_mask |= 1 << node
        i_set = NodeSet(i_mask, n)
        for bits_2 in range(1, 1 << len(members_2)):
            j_mask = 0
            for pos, node in enumerate(members_2):
                if bits_2 >> pos & 1:
                    j_mask |= 1 << node
            j_set = NodeSet(j_mask, n)
            if is_jaf(c, i_set, j_set):
                found.append((i_set, j_set))
    found.sort(key=lambda pair: (pair[0].mask, pair[1].mask))
    return found


# ---- serialization ----


def hypergraph_to_json(h: CutHypergraph, labels: Sequence[str]) -> dict:
    def names(s: NodeSet) -> list[str]:
        return sorted(labels[v] for v in s)

    return {
        "level": h.level,
        "hyperedges": [
            {
                "source_i": names(e.source_i),
                "source_j": names(e.source_j),
                "cut_a": names(e.cut.side_a),
                "cut_b": names(e.cut.side_b),
            }
            for e in h.hyperedges
        ],
    }
