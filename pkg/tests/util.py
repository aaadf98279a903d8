"""Shared builders and brute-force oracles for the test suite."""
from __future__ import annotations

import random

from prodform.graph_core import DirectedGraph, NodeSet, is_strongly_connected


# ---- fixture graphs ----


def birth_death(n: int = 6) -> DirectedGraph:
    labels = [str(i) for i in range(n)]
    edges = [(i, i + 1) for i in range(n - 1)] + [(i + 1, i) for i in range(n - 1)]
    return DirectedGraph(labels, edges)


def one_way_cycle(n: int = 5) -> DirectedGraph:
    labels = [str(i + 1) for i in range(n)]
    return DirectedGraph(labels, [(i, (i + 1) % n) for i in range(n)])


def one_way_cycle_plus(n: int = 5, k: int = 3) -> DirectedGraph:
    labels = [str(i + 1) for i in range(n)]
    edges = [(i, (i + 1) % n) for i in range(n)] + [(0, k - 1)]
    return DirectedGraph(labels, edges)


def two_way_cycle(n: int = 5) -> DirectedGraph:
    labels = [str(i + 1) for i in range(n)]
    edges = [(i, (i + 1) % n) for i in range(n)] + [((i + 1) % n, i) for i in range(n)]
    return DirectedGraph(labels, edges)


LADDER_EDGES = [
    ("1", "0"), ("2", "1"), ("3", "2"),
    ("0", "4"), ("1", "5"), ("2", "6"),
    ("4", "5"), ("5", "6"),
    ("4", "1"), ("5", "2"), ("6", "3"),
]


def ladder7() -> DirectedGraph:
    """Seven-node toy: a descending chain 3-2-1-0 and a parallel chain 4-5-6 with cross links."""
    return DirectedGraph.from_labeled_edges([str(i) for i in range(7)], LADDER_EDGES)


RING9_EDGES = [
    ("1", "2"), ("1", "4"),
    ("2", "3"), ("2", "4"),
    ("3", "2"), ("3", "4"), ("3", "5"),
    ("4", "5"),
    ("5", "3"), ("5", "6"),
    ("6", "8"), ("6", "7"),
    ("7", "8"),
    ("8", "7"), ("8", "9"),
    ("9", "1"),
]


def ring9() -> DirectedGraph:
    """Nine-node ring of territories: five hub nodes whose basins tile the graph."""
    return DirectedGraph.from_labeled_edges([str(i + 1) for i in range(9)], RING9_EDGES)


# ---- random graphs ----


def random_strongly_connected(rng: random.Random, n: int, extra_edge_prob: float = 0.3) -> DirectedGraph:
    """A random strongly connected digraph: a random cycle plus random extra edges."""
    labels = [str(i) for i in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    edges = {(order[i], order[(i + 1) % n]) for i in range(n)}
    for u in range(n):
        for v in range(n):
            if u != v and (u, v) not in edges and rng.random() < extra_edge_prob:
                edges.add((u, v))
    g = DirectedGraph(labels, sorted(edges))
    assert is_strongly_connected(g)
    return g


# ---- brute-force oracles ----


def naive_ancestors(g: DirectedGraph, seed: set[int], avoid: set[int] = frozenset()) -> set[int]:
    """Set-based fixpoint: grow the seed by in-neighbors until nothing changes."""
    result = set(seed)
    changed = True
    while changed:
        changed = False
        for u, v in g.edge_list:
            if v in result and u not in result and u not in avoid:
                result.add(u)
                changed = True
    return result


def nodeset(g: DirectedGraph, indices) -> NodeSet:
    return NodeSet.of(indices, g.n)


def bipartition_sources(g: DirectedGraph, side_a: set[int]) -> tuple[set[int], set[int]]:
    """Sources of a bipartition by direct edge scan (independent of the library's masks)."""
    side_b = set(range(g.n)) - side_a
    src_a = {u for u, v in g.edge_list if u in side_a and v in side_b}
    src_b = {u for u, v in g.edge_list if u in side_b and v in side_a}
    return src_a, src_b


def brute_sourced_cuts(g: DirectedGraph) -> dict[tuple[int, int], list[tuple[set[int], set[int]]]]:
    """Every bipartition whose sources are singletons, keyed by the (i, j) source pair.

    Enumerates all 2^n - 2 nonempty proper subsets, so only usable for small n.
    Keys are ordered (i, j) with i the source inside side_a; each value lists
    every (side_a, side_b) found, so uniqueness claims stay checkable.
    """
    found: dict[tuple[int, int], list[tuple[set[int], set[int]]]] = {}
    for mask in range(1, (1 << g.n) - 1):
        side_a = {v for v in range(g.n) if mask >> v & 1}
        src_a, src_b = bipartition_sources(g, side_a)
        if len(src_a) == 1 and len(src_b) == 1:
            i, j = next(iter(src_a)), next(iter(src_b))
            found.setdefault((i, j), []).append((side_a, set(range(g.n)) - side_a))
    return found
