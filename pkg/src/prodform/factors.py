"""Rate-expression ASTs, their classification, evaluation, and circuit metrics.

A factor is a positive rational expression over edge rates: an atom ``q(u, v)``,
a Sum of factors, or a Product of factors each raised to +1 or -1. Sums never
nest directly under Sums and Products never nest directly under Products (the
builders flatten, multiplying exponents through), but width-1 Sums are kept:
they are real gates in the circuit-size accounting.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Union

from .errors import InvalidArgumentError, NumericError

# ---- expression nodes ----


@dataclass(frozen=True)
class RateAtom:
    """The rate on one directed edge, identified by dense node indices."""

    src: int
    dst: int


@dataclass(frozen=True)
class SumExpr:
    terms: tuple["FactorExpr", ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise InvalidArgumentError("a Sum needs at least one term")
        if any(isinstance(t, SumExpr) for t in self.terms):
            raise InvalidArgumentError("Sums must not nest directly; use sum_of()")


@dataclass(frozen=True)
class ProductExpr:
    factors: tuple[tuple["FactorExpr", int], ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise InvalidArgumentError("a Product needs at least one factor")
        for expr, exp in self.factors:
            if exp not in (1, -1):
                raise InvalidArgumentError(f"exponent must be +1 or -1, got {exp}")
            if isinstance(expr, ProductExpr):
                raise InvalidArgumentError("Products must not nest directly; use product_of()")


FactorExpr = Union[RateAtom, SumExpr, ProductExpr]


def sum_of(terms: Iterable[FactorExpr]) -> SumExpr:
    """Sum of the given factors, flattening any Sum children into this one."""
    flat: list[FactorExpr] = []
    for t in terms:
        if isinstance(t, SumExpr):
            flat.extend(t.terms)
        else:
            flat.append(t)
    return SumExpr(tuple(flat))


def product_of(pairs: Iterable[tuple[FactorExpr, int]]) -> ProductExpr:
    """Product of (factor, exponent) pairs, flattening nested Products.

    A nested Product contributes its children with exponents multiplied by the
    outer exponent, so reciprocals of Products distribute onto their children.
    """
    flat: list[tuple[FactorExpr, int]] = []
    for expr, exp in pairs:
        if exp not in (1, -1):
            raise InvalidArgumentError(f"exponent must be +1 or -1, got {exp}")
        if isinstance(expr, ProductExpr):
            flat.extend((child, child_exp * exp) for child, child_exp in expr.factors)
        else:
            flat.append((expr, exp))
    return ProductExpr(tuple(flat))


def atom_edges(e: FactorExpr) -> frozenset[tuple[int, int]]:
    """The set of edges whose rates appear anywhere in the expression."""
    if isinstance(e, RateAtom):
        return frozenset([(e.src, e.dst)])
    if isinstance(e, SumExpr):
        return frozenset().union(*(atom_edges(t) for t in e.terms))
    return frozenset().union(*(atom_edges(f) for f, _ in e.factors))


# ---- classification ----


@dataclass(frozen=True)
class Level:
    """Alternation rank of a factor shape: S(1), PS(2), SPS(3), PSPS(4), then higher."""

    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise InvalidArgumentError("levels start at rank 1")

    @property
    def name(self) -> str:
        return {1: "S", 2: "PS", 3: "SPS", 4: "PSPS"}.get(self.rank, f"HIGHER({self.rank})")

    def __str__(self) -> str:
        return self.name


LEVEL_S = Level(1)
LEVEL_PS = Level(2)
LEVEL_SPS = Level(3)
LEVEL_PSPS = Level(4)


def _alternation(e: FactorExpr) -> int:
    if isinstance(e, RateAtom):
        return 0
    if isinstance(e, SumExpr):
        return 1 + max(_alternation(t) for t in e.terms)
    return 1 + max(_alternation(f) for f, _ in e.factors)


def classify(e: FactorExpr) -> Level:
    """The smallest alternation shape the expression fits.

    A bare atom counts as a width-1 sum (rank S). A Sum-rooted expression gets
    the smallest odd rank covering its alternation depth, a Product-rooted one
    the smallest even rank: a sum of products of atoms is SPS even though its
    inner sums are degenerate.
    """
    if isinstance(e, RateAtom):
        return LEVEL_S
    depth = _alternation(e)
    if isinstance(e, SumExpr):
        return Level(depth if depth % 2 == 1 else depth + 1)
    return Level(depth if depth % 2 == 0 else depth + 1)


# ---- evaluation ----


def evaluate(e: FactorExpr, rates: Mapping[tuple[int, int], float]) -> float:
    """Numeric value of the expression under the per-edge rate map.

    Every referenced edge must be present; the result must come out positive
    and finite (factors are sums/products of positive rates).
    """
    value = _evaluate(e, rates)
    if not math.isfinite(value) or value <= 0.0:
        raise NumericError(f"factor evaluated to non-positive value {value!r}")
    return value


def _evaluate(e: FactorExpr, rates: Mapping[tuple[int, int], float]) -> float:
    if isinstance(e, RateAtom):
        try:
            return rates[(e.src, e.dst)]
        except KeyError:
            raise InvalidArgumentError(f"no rate given for edge ({e.src}, {e.dst})") from None
    if isinstance(e, SumExpr):
        return sum(_evaluate(t, rates) for t in e.terms)
    value = 1.0
    for expr, exp in e.factors:
        child = _evaluate(expr, rates)
        value = value * child if exp > 0 else value / child
    return value


# ---- circuit metrics ----


@dataclass(frozen=True)
class CircuitStats:
    """Depth (operations on the longest input-to-root path) and size (total circuit nodes)."""

    depth: int
    size: int


def circuit_stats(e: FactorExpr) -> CircuitStats:
    """Arithmetic-circuit metrics of the expression.

    A bare atom is a plain input: depth 0, size 0. Otherwise size counts every
    node of the circuit: atom inputs, Sum gates, Product gates, and one
    reciprocal gate per -1 exponent; depth counts gates (including reciprocals)
    on the deepest path.
    """
    if isinstance(e, RateAtom):
        return CircuitStats(0, 0)
    return CircuitStats(_depth(e), _node_count(e))


def _depth(e: FactorExpr) -> int:
    if isinstance(e, RateAtom):
        return 0
    if isinstance(e, SumExpr):
        return 1 + max(_depth(t) for t in e.terms)
    return 1 + max(_depth(f) + (1 if exp < 0 else 0) for f, exp in e.factors)


def _node_count(e: FactorExpr) -> int:
    if isinstance(e, RateAtom):
        return 1
    if isinstance(e, SumExpr):
        return 1 + sum(_node_count(t) for t in e.terms)
    return 1 + sum(_node_count(f) + (1 if exp < 0 else 0) for f, exp in e.factors)


# ---- relations ----


@dataclass(frozen=True)
class Relation:
    """A verified-shape identity ``pi[lhs_node] * lhs_factor = pi[rhs_node] * rhs_factor``.

    Oriented so that ``lhs_node < rhs_node``; ``level`` is the alternation rank
    of the wider factor side.
    """

    lhs_node: int
    rhs_node: int
    lhs_factor: FactorExpr
    rhs_factor: FactorExpr
    level: Level


def make_relation(
    lhs_node: int, rhs_node: int, lhs_factor: FactorExpr, rhs_factor: FactorExpr
) -> Relation:
    """Build a Relation, swapping sides if needed to keep ``lhs_node < rhs_node``."""
    if lhs_node == rhs_node:
        raise InvalidArgumentError("a relation needs two distinct nodes")
    if lhs_node > rhs_node:
        lhs_node, rhs_node = rhs_node, lhs_node
        lhs_factor, rhs_factor = rhs_factor, lhs_factor
    level = Level(max(classify(lhs_factor).rank, classify(rhs_factor).rank))
    return Relation(lhs_node, rhs_node, lhs_factor, rhs_factor, level)


def compose_ps(path: Sequence[int], chain) -> Relation:
    """Relation between the endpoints of a path in the cut graph.

    Multiplies the per-hop factor pairs along ``path``: with hops
    ``k_1, ..., k_{d+1}`` the identity is
    ``pi[k_1] * prod_p f(k_p, k_{p+1}) = pi[k_{d+1}] * prod_p f(k_{p+1}, k_p)``.
    Consecutive path nodes must admit a sourced cut (be joint-ancestor free);
    a single hop yields the plain width-level relation of that edge.

    The caller is responsible for passing a shortest cut-graph path when the
    closed-form circuit-size guarantee (depth 2, size 1 + d + total width) is
    wanted; longer valid paths still give correct relations.
    """
    from .product_form import s_factors

    if len(path) < 2:
        raise InvalidArgumentError("a path relation needs at least two nodes")
    if len(set(path)) != len(path):
        raise InvalidArgumentError("path nodes must be distinct")
    forward: list[FactorExpr] = []
    backward: list[FactorExpr] = []
    for a, b in zip(path, path[1:]):
        pair = s_factors(chain, a, b)
        if pair is None:
            raise InvalidArgumentError(
                f"nodes {chain.graph.labels[a]!r} and {chain.graph.labels[b]!r} share a joint "
                "ancestor; consecutive path nodes must be cut-graph neighbors"
            )
        forward.append(pair[0])
        backward.append(pair[1])
    if len(forward) == 1:
        lhs, rhs = forward[0], backward[0]
    else:
        lhs = product_of((f, 1) for f in forward)
        rhs = product_of((f, 1) for f in backward)
    return make_relation(path[0], path[-1], lhs, rhs)


def chain_relations(first: Relation, second: Relation) -> Relation:
    """Join two relations sharing exactly one node, eliminating its weight.

    From ``pi[a] * F_a = pi[s] * F_s`` and ``pi[s] * G_s = pi[c] * G_c`` the
    shared ``pi[s]`` cancels after cross-multiplying, leaving
    ``pi[a] * (F_a * G_s) = pi[c] * (G_c * F_s)``. Both sides stay products
    with +1 exponents, so chaining S relations yields PS, and chaining
    sum-of-product relations yields the next alternation level up.
    """
    nodes1 = {first.lhs_node, first.rhs_node}
    nodes2 = {second.lhs_node, second.rhs_node}
    shared = nodes1 & nodes2
    if len(shared) != 1:
        raise InvalidArgumentError(
            f"relations must share exactly one node, got {sorted(shared)}"
        )
    s = shared.pop()
    a = (nodes1 - {s}).pop()
    c = (nodes2 - {s}).pop()
    f_a, f_s = (
        (first.lhs_factor, first.rhs_factor)
        if first.lhs_node == a
        else (first.rhs_factor, first.lhs_factor)
    )
    g_s, g_c = (
        (second.lhs_factor, second.rhs_factor)
        if second.lhs_node == s
        else (second.rhs_factor, second.lhs_factor)
    )
    return make_relation(
        a,
        c,
        product_of([(f_a, 1), (g_s, 1)]),
        product_of([(g_c, 1), (f_s, 1)]),
    )


# ---- serialization ----


def factor_to_json(e: FactorExpr, labels: Sequence[str]) -> dict:
    if isinstance(e, RateAtom):
        return {"atom": {"from": labels[e.src], "to": labels[e.dst]}}
    if isinstance(e, SumExpr):
        return {"sum": [factor_to_json(t, labels) for t in e.terms]}
    return {
        "product": [
            {"expr": factor_to_json(f, labels), "exp": exp} for f, exp in e.factors
        ]
    }


def factor_from_json(obj: dict, index_of: Mapping[str, int]) -> FactorExpr:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InvalidArgumentError(f"malformed factor object: {obj!r}")
    if "atom" in obj:
        spec = obj["atom"]
        try:
            return RateAtom(index_of[spec["from"]], index_of[spec["to"]])
        except (KeyError, TypeError):
            raise InvalidArgumentError(f"malformed atom: {spec!r}") from None
    if "sum" in obj:
        return sum_of(factor_from_json(t, index_of) for t in obj["sum"])
    if "product" in obj:
        return product_of(
            (factor_from_json(p["expr"], index_of), p["exp"]) for p in obj["product"]
        )
    raise InvalidArgumentError(f"unknown factor kind: {sorted(obj)!r}")


def format_factor(e: FactorExpr, labels: Sequence[str]) -> str:
    """Human-readable rendering, e.g. ``q(1,0)*(q(4,1) + q(4,5))^-1``."""
    if isinstance(e, RateAtom):
        return f"q({labels[e.src]},{labels[e.dst]})"
    if isinstance(e, SumExpr):
        body = " + ".join(format_factor(t, labels) for t in e.terms)
        return body if len(e.terms) == 1 else f"({body})"
    parts = []
    for f, exp in e.factors:
        rendered = format_factor(f, labels)
        if isinstance(f, SumExpr) and len(f.terms) == 1:
            rendered = f"({rendered})" if exp < 0 and "(" not in rendered else rendered
        parts.append(rendered + ("^-1" if exp < 0 else ""))
    return "*".join(parts)


def relation_to_json(r: Relation, labels: Sequence[str]) -> dict:
    stats_l = circuit_stats(r.lhs_factor)
    stats_r = circuit_stats(r.rhs_factor)
    return {
        "lhs": labels[r.lhs_node],
        "rhs": labels[r.rhs_node],
        "level": r.level.name,
        "lhs_factor": factor_to_json(r.lhs_factor, labels),
        "rhs_factor": factor_to_json(r.rhs_factor, labels),
        "circuit": {
            "depth": max(stats_l.depth, stats_r.depth),
            "size": stats_l.size + stats_r.size,
        },
    }
