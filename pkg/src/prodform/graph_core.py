"""Dense directed graphs, bitset node sets, and ancestor/reachability queries.

Nodes are dense integer indices ``0..n-1`` carrying string labels; all set-valued
queries work on :class:`NodeSet` bitmasks so the hot loops are integer arithmetic.
Parallel edges are rejected at construction; self-loops are permitted.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from typing import NamedTuple

from .errors import InvalidArgumentError


class NodeId(NamedTuple):
    """A node's dense index together with its human-readable label."""

    index: int
    label: str


# ---- node sets ----


class NodeSet:
    """Immutable set of node indices backed by an integer bitmask.

    ``universe`` is the number of nodes in the owning graph; it is required for
    complements and guards against mixing sets from different graphs.
    """

    __slots__ = ("mask", "universe")

    def __init__(self, mask: int, universe: int):
        if mask < 0 or mask >> universe:
            raise InvalidArgumentError(f"mask {mask:#x} does not fit a {universe}-node universe")
        self.mask = mask
        self.universe = universe

    @classmethod
    def of(cls, indices: Iterable[int], universe: int) -> NodeSet:
        mask = 0
        for i in indices:
            if not 0 <= i < universe:
                raise InvalidArgumentError(f"node index {i} out of range 0..{universe - 1}")
            mask |= 1 << i
        return cls(mask, universe)

    @classmethod
    def empty(cls, universe: int) -> NodeSet:
        return cls(0, universe)

    @classmethod
    def full(cls, universe: int) -> NodeSet:
        return cls((1 << universe) - 1, universe)

    # ---- queries ----

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.universe and bool(self.mask >> index & 1)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, NodeSet)
            and self.mask == other.mask
            and self.universe == other.universe
        )

    def __hash__(self) -> int:
        return hash((self.mask, self.universe))

    def __repr__(self) -> str:
        return f"NodeSet({{{', '.join(map(str, self))}}}, universe={self.universe})"

    def isdisjoint(self, other: NodeSet) -> bool:
        return not self.mask & other.mask

    def issubset(self, other: NodeSet) -> bool:
        return not self.mask & ~other.mask

    # ---- algebra ----

    def _check(self, other: NodeSet) -> None:
        if self.universe != other.universe:
            raise InvalidArgumentError("node sets belong to different universes")

    def __or__(self, other: NodeSet) -> NodeSet:
        self._check(other)
        return NodeSet(self.mask | other.mask, self.universe)

    def __and__(self, other: NodeSet) -> NodeSet:
        self._check(other)
        return NodeSet(self.mask & other.mask, self.universe)

    def __sub__(self, other: NodeSet) -> NodeSet:
        self._check(other)
        return NodeSet(self.mask & ~other.mask, self.universe)

    def complement(self) -> NodeSet:
        return NodeSet(~self.mask & (1 << self.universe) - 1, self.universe)


# ---- graphs ----


class DirectedGraph:
    """A finite directed graph over labelled, densely indexed nodes.

    Both adjacency directions are materialized once at construction: sorted
    neighbor tuples for ordered traversal and bitmasks for set-valued queries.
    ``parent_index`` maps this graph's indices back to the graph it was carved
    from by :func:`set_avoiding_subgraph` (identity for directly built graphs).
    """

    __slots__ = ("labels", "index_of", "out_adj", "in_adj", "out_mask", "in_mask", "edge_list", "parent_index")

    def __init__(
        self,
        labels: Sequence[str],
        edges: Iterable[tuple[int, int]],
        parent_index: tuple[int, ...] | None = None,
    ):
        labels = tuple(labels)
        if not labels:
            raise InvalidArgumentError("a graph needs at least one node")
        if len(set(labels)) != len(labels):
            raise InvalidArgumentError("node labels must be unique")
        n = len(labels)
        out_sets: list[set[int]] = [set() for _ in range(n)]
        in_sets: list[set[int]] = [set() for _ in range(n)]
        edge_list: list[tuple[int, int]] = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgumentError(f"edge ({u}, {v}) references a missing node")
            if v in out_sets[u]:
                raise InvalidArgumentError(
                    f"parallel edge {labels[u]!r} -> {labels[v]!r}; rates must be pre-aggregated"
                )
            out_sets[u].add(v)
            in_sets[v].add(u)
            edge_list.append((u, v))
        self.labels = labels
        self.index_of = {label: i for i, label in enumerate(labels)}
        self.out_adj = tuple(tuple(sorted(s)) for s in out_sets)
        self.in_adj = tuple(tuple(sorted(s)) for s in in_sets)
        self.out_mask = tuple(sum(1 << v for v in s) for s in out_sets)
        self.in_mask = tuple(sum(1 << u for u in s) for s in in_sets)
        self.edge_list = tuple(sorted(edge_list))
        self.parent_index = parent_index if parent_index is not None else tuple(range(n))

    @classmethod
    def from_labeled_edges(cls, labels: Sequence[str], edges: Iterable[tuple[str, str]]) -> DirectedGraph:
        index = {label: i for i, label in enumerate(labels)}
        pairs = []
        for a, b in edges:
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise InvalidArgumentError(f"edge endpoint {missing!r} is not a declared node")
            pairs.append((index[a], index[b]))
        return cls(labels, pairs)

    # ---- queries ----

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.edge_list)

    def node(self, index: int) -> NodeId:
        return NodeId(index, self.labels[index])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out_mask[u] >> v & 1)

    def full_set(self) -> NodeSet:
        return NodeSet.full(self.n)

    def set_of(self, indices: Iterable[int]) -> NodeSet:
        return NodeSet.of(indices, self.n)

    def set_of_labels(self, labels: Iterable[str]) -> NodeSet:
        try:
            return NodeSet.of((self.index_of[x] for x in labels), self.n)
        except KeyError as exc:
            raise InvalidArgumentError(f"unknown node label {exc.args[0]!r}") from None

    def label_set(self, nodes: NodeSet) -> frozenset[str]:
        return frozenset(self.labels[i] for i in nodes)

    def __repr__(self) -> str:
        return f"DirectedGraph({self.n} nodes, {self.edge_count} edges)"


# ---- reachability primitives ----


def _closure(adj_masks: Sequence[int], seed_mask: int, allowed_mask: int) -> int:
    """Closure of ``seed_mask`` under one adjacency step, restricted to ``allowed_mask``.

    Frontier BFS: every node enters the frontier at most once, and its adjacency
    mask is consumed exactly when it is popped, so every edge is inspected at
    most once.
    """
    seen = seed_mask
    frontier = seed_mask
    while frontier:
        step = 0
        f = frontier
        while f:
            low = f & -f
            step |= adj_masks[low.bit_length() - 1]
            f ^= low
        frontier = step & allowed_mask & ~seen
        seen |= frontier
    return seen


def ancestors(g: DirectedGraph, seed: NodeSet) -> NodeSet:
    """All nodes with a directed path into ``seed`` (including ``seed`` itself).

    The empty seed is rejected: an empty ancestor query is always a caller bug.
    """
    if seed.universe != g.n:
        raise InvalidArgumentError("seed set belongs to a different graph")
    if not seed:
        raise InvalidArgumentError("ancestor query requires a nonempty seed")
    return NodeSet(_closure(g.in_mask, seed.mask, (1 << g.n) - 1), g.n)


def ancestors_avoiding(g: DirectedGraph, seed: NodeSet, avoid: NodeSet) -> NodeSet:
    """Ancestors of ``seed`` inside the subgraph induced on ``V - avoid``.

    Equivalent to ``ancestors(set_avoiding_subgraph(g, avoid), seed)`` mapped
    back to the parent indices, without materializing the subgraph. ``seed``
    must be nonempty and disjoint from ``avoid``.
    """
    if seed.universe != g.n or avoid.universe != g.n:
        raise InvalidArgumentError("node sets belong to a different graph")
    if not seed:
        raise InvalidArgumentError("ancestor query requires a nonempty seed")
    if not seed.isdisjoint(avoid):
        raise InvalidArgumentError("seed and avoided set overlap")
    return NodeSet(_closure(g.in_mask, seed.mask, (1 << g.n) - 1 & ~avoid.mask), g.n)


def ancestors_instrumented(
    g: DirectedGraph, seed: NodeSet, avoid: NodeSet | None = None
) -> tuple[NodeSet, dict[tuple[int, int], int]]:
    """Adjacency-list variant of :func:`ancestors_avoiding` that counts edge visits.

    Returns the ancestor set and a map ``(u, v) -> times the edge was inspected``.
    Exists so tests can assert the every-edge-at-most-once property on a route
    independent of the bitmask implementation.
    """
    if not seed:
        raise InvalidArgumentError("ancestor query requires a nonempty seed")
    avoid_mask = avoid.mask if avoid is not None else 0
    if seed.mask & avoid_mask:
        raise InvalidArgumentError("seed and avoided set overlap")
    visits: dict[tuple[int, int], int] = {}
    seen = set(seed)
    queue = list(seed)
    while queue:
        v = queue.pop()
        for u in g.in_adj[v]:
            visits[(u, v)] = visits.get((u, v), 0) + 1
            if u not in seen and not avoid_mask >> u & 1:
                seen.add(u)
                queue.append(u)
    return NodeSet.of(seen, g.n), visits


def descendants(g: DirectedGraph, seed: NodeSet) -> NodeSet:
    """All nodes reachable from ``seed`` by a directed path (dual of :func:`ancestors`)."""
    if not seed:
        raise InvalidArgumentError("reachability query requires a nonempty seed")
    return NodeSet(_closure(g.out_mask, seed.mask, (1 << g.n) - 1), g.n)


# ---- derived operations ----


def set_avoiding_subgraph(g: DirectedGraph, avoid: NodeSet) -> DirectedGraph:
    """The subgraph induced on ``V - avoid``, with labels preserved.

    The result's ``parent_index`` maps its dense indices back to ``g``.
    Removing every node is rejected (graphs are nonempty).
    """
    if avoid.universe != g.n:
        raise InvalidArgumentError("avoided set belongs to a different graph")
    if avoid.mask == (1 << g.n) - 1:
        raise InvalidArgumentError("cannot remove every node")
    keep = [i for i in range(g.n) if i not in avoid]
    remap = {old: new for new, old in enumerate(keep)}
    edges = [
        (remap[u], remap[v])
        for u, v in g.edge_list
        if u not in avoid and v not in avoid
    ]
    sub = DirectedGraph([g.labels[i] for i in keep], edges, parent_index=tuple(keep))
    return sub


def is_strongly_connected(g: DirectedGraph) -> bool:
    """True iff every node can reach and be reached from an arbitrary base node."""
    base = NodeSet.of([0], g.n)
    full = (1 << g.n) - 1
    return (
        _closure(g.in_mask, base.mask, full) == full
        and _closure(g.out_mask, base.mask, full) == full
    )


def connectivity_witness(g: DirectedGraph) -> tuple[int, int] | None:
    """None if strongly connected, else a pair ``(u, v)`` with ``v`` unreachable from ``u``."""
    full = (1 << g.n) - 1
    fwd = _closure(g.out_mask, 1, full)
    if fwd != full:
        missing = (~fwd & full).bit_length() - 1
        return 0, missing
    rev = _closure(g.in_mask, 1, full)
    if rev != full:
        missing = (~rev & full).bit_length() - 1
        return missing, 0
    return None


def shortest_path(
    g: DirectedGraph, src: int, dst: int, avoid: NodeSet | None = None
) -> list[int] | None:
    """A shortest directed path from ``src`` to ``dst`` inside ``V - avoid``.

    Ties are broken by always stepping to the smallest-index eligible next
    node, so the result is the lexicographically first shortest path. Returns
    None when ``dst`` is unreachable.
    """
    avoid_mask = avoid.mask if avoid is not None else 0
    if avoid is not None and avoid.universe != g.n:
        raise InvalidArgumentError("avoided set belongs to a different graph")
    if not (0 <= src < g.n and 0 <= dst < g.n):
        raise InvalidArgumentError("path endpoints out of range")
    if avoid_mask >> src & 1 or avoid_mask >> dst & 1:
        raise InvalidArgumentError("path endpoints must not be avoided")
    if src == dst:
        return [src]
    allowed = (1 << g.n) - 1 & ~avoid_mask
    # Distance-to-dst levels via a reverse frontier BFS.
    dist = [-1] * g.n
    dist[dst] = 0
    seen = 1 << dst
    frontier = seen
    level = 0
    while frontier:
        level += 1
        step = 0
        f = frontier
        while f:
            low = f & -f
            step |= g.in_mask[low.bit_length() - 1]
            f ^= low
        frontier = step & allowed & ~seen
        seen |= frontier
        f = frontier
        while f:
            low = f & -f
            dist[low.bit_length() - 1] = level
            f ^= low
    if dist[src] < 0:
        return None
    path = [src]
    here = src
    while here != dst:
        here = next(
            v for v in g.out_adj[here] if allowed >> v & 1 and dist[v] == dist[here] - 1
        )
        path.append(here)
    return path
