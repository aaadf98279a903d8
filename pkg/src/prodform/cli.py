"""Command-line front end: graph ingestion, analysis reports, DOT, and oracles.

Commands share one JSON graph schema (nodes, directed edges, optional rates) so
the same document feeds structural analysis, numeric verification, and export.
Exit codes are stable: 0 success, 1 verification/equivalence failure, 2 input
error, 3 structural error, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import (
    InvalidArgumentError,
    NotStronglyConnectedError,
    NumericError,
    ResourceLimitError,
)
from .factors import Relation, factor_to_json, relation_to_json
from .graph_core import DirectedGraph, NodeSet, is_strongly_connected
from .higher_level import (
    broad_cut_search,
    higher_level_cut_graph,
    hypergraph_to_json,
    narrow_second_level_cuts,
)
from .higher_level import sps_relation as _sps_relation
from .models import Family, FixtureBundle, ModelSpec, expected_fixtures
from .models import generate as generate_model
from .numeric import (
    RateAssignment,
    cut_equation_check,
    enumerate_sourced_cuts,
    random_rates,
    rate_assignment,
    stationary,
    verify_relation,
)
from .product_form import ChainKind, FormalChain, cut_graph, is_jaf, s_relation, sourced_cut

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_STRUCTURE = 3
EXIT_BUDGET = 4

_BROAD_PAIR_BUDGET = 12

# ---- graph documents ----


@dataclass(frozen=True)
class GraphDocument:
    """Serializable chain: a name, a kind, node labels, edges, optional rates."""

    name: str
    kind: str
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    rates: tuple[float, ...] | None

    def to_json(self) -> dict:
        edges = []
        for k, (src, dst) in enumerate(self.edges):
            entry: dict = {"from": src, "to": dst}
            if self.rates is not None:
                entry["rate"] = self.rates[k]
            edges.append(entry)
        return {
            "name": self.name,
            "kind": self.kind,
            "nodes": list(self.nodes),
            "edges": edges,
        }


def parse_document(text: str) -> GraphDocument:
    """Decode and validate the JSON graph schema (without building the chain)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(
            f"parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(raw, dict):
        raise InvalidArgumentError("document must be a JSON object")
    name = raw.get("name", "")
    kind = raw.get("kind", "ctmc")
    if not isinstance(name, str):
        raise InvalidArgumentError("name must be a string")
    if kind not in ("ctmc", "dtmc"):
        raise InvalidArgumentError(f"kind must be 'ctmc' or 'dtmc', got {kind!r}")
    nodes = raw.get("nodes")
    if not isinstance(nodes, list) or not all(isinstance(x, str) for x in nodes):
        raise InvalidArgumentError("nodes must be a list of label strings")
    raw_edges = raw.get("edges")
    if not isinstance(raw_edges, list):
        raise InvalidArgumentError("edges must be a list of objects")
    edges: list[tuple[str, str]] = []
    rates: list[float] = []
    for entry in raw_edges:
        if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
            raise InvalidArgumentError(f"malformed edge entry: {entry!r}")
        edges.append((entry["from"], entry["to"]))
        if "rate" in entry:
            value = entry["rate"]
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidArgumentError(f"edge rate must be a number, got {value!r}")
            rates.append(float(value))
    if rates and len(rates) != len(edges):
        raise InvalidArgumentError("either every edge carries a rate or none does")
    return GraphDocument(
        name=name,
        kind=kind,
        nodes=tuple(nodes),
        edges=tuple(edges),
        rates=tuple(rates) if rates else None,
    )


def document_to_chain(doc: GraphDocument) -> tuple[FormalChain, RateAssignment | None]:
    """Build the validated chain (and the rate assignment when rates are given)."""
    g = DirectedGraph.from_labeled_edges(list(doc.nodes), list(doc.edges))
    kind = ChainKind.CTMC if doc.kind == "ctmc" else ChainKind.DTMC
    c = FormalChain(g, kind)
    if doc.rates is None:
        return c, None
    values = {
        (g.index_of[a], g.index_of[b]): rate for (a, b), rate in zip(doc.edges, doc.rates)
    }
    return c, rate_assignment(c, values, kind)


def emit_document(
    c: FormalChain, name: str, rates: RateAssignment | None = None
) -> GraphDocument:
    """Serialize a chain with lexicographically normalized node order."""
    g = c.graph
    nodes = tuple(sorted(g.labels))
    edges = tuple(sorted((g.labels[a], g.labels[b]) for a, b in g.edge_list))
    values = None
    if rates is not None:
        values = tuple(
            rates.values[(g.index_of[a], g.index_of[b])] for a, b in edges
        )
    kind = "ctmc" if c.kind is ChainKind.CTMC else "dtmc"
    return GraphDocument(name=name, kind=kind, nodes=nodes, edges=edges, rates=values)


def _load(path: str) -> tuple[GraphDocument, FormalChain, RateAssignment | None]:
    with open(path, encoding="utf-8") as handle:
        doc = parse_document(handle.read())
    c, rates = document_to_chain(doc)
    return doc, c, rates


def _write_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


# ---- analyze ----


def _label_pair(c: FormalChain, a: int, b: int) -> list[str]:
    return sorted((c.graph.labels[a], c.graph.labels[b]))


def _analysis(c: FormalChain, max_level: int) -> tuple[dict, list[Relation], list]:
    """Shared analysis pipeline: report dict, all relations, all discovered cuts."""
    labels = c.graph.labels
    c1 = cut_graph(c)
    edge_order = sorted(c1.edges, key=lambda e: _label_pair(c, *e))
    relations = [s_relation(c, a, b) for a, b in edge_order]
    cuts = [sourced_cut(c, a, b) for a, b in edge_order]
    first_level = {
        "edges": [_label_pair(c, a, b) for a, b in edge_order],
        "components": [sorted(labels[v] for v in comp) for comp in c1.components],
        "relations": [relation_to_json(r, labels) for r in relations],
    }
    levels = []
    if max_level >= 2:
        for lv in higher_level_cut_graph(c, max_level):
            entry = hypergraph_to_json(lv, labels)
            entry["components"] = [
                sorted(labels[v] for v in comp) for comp in lv.components
            ]
            if lv.level == 2:
                deeper = [
                    _sps_relation(c, h, min(h.source_i), min(h.source_j), c1)
                    for h in lv.hyperedges
                ]
                entry["relations"] = [relation_to_json(r, labels) for r in deeper]
                relations.extend(deeper)
                cuts.extend(h.cut for h in lv.hyperedges)
            levels.append(entry)
    report = {
        "first_level": first_level,
        "levels": levels,
    }
    return report, relations, cuts


def cmd_analyze(args: argparse.Namespace) -> int:
    doc, c, _ = _load(args.input)
    body, _, _ = _analysis(c, args.max_level)
    report = {
        "name": doc.name,
        "kind": doc.kind,
        "nodes": list(c.graph.labels),
        "edge_count": c.graph.edge_count,
        "max_level": args.max_level,
        **body,
    }
    _write_json(report, args.out)
    return EXIT_OK


# ---- verify ----


def cmd_verify(args: argparse.Namespace) -> int:
    doc, c, given = _load(args.input)
    labels = c.graph.labels
    _, relations, cuts = _analysis(c, max_level=2)
    fault_name = None
    if args.fault is not None:
        if not relations:
            raise InvalidArgumentError("no relations to fault in this chain")
        k = args.fault % len(relations)
        r = relations[k]
        fault_name = f"{labels[r.lhs_node]}~{labels[r.rhs_node]}"
        # Swapping the two factor sides breaks the identity without touching
        # its shape, so the sweep must flag exactly this relation.
        relations[k] = Relation(r.lhs_node, r.rhs_node, r.rhs_factor, r.lhs_factor, r.level)
    assignments: list[tuple[str, RateAssignment]] = []
    if given is not None:
        assignments.append(("document", given))
    assignments.extend((f"seed {s}", random_rates(c, s)) for s in range(args.seeds))
    relation_worst = [0.0] * len(relations)
    cut_worst = [0.0] * len(cuts)
    for _, rates in assignments:
        pi = stationary(c, rates)
        for k, r in enumerate(relations):
            relation_worst[k] = max(relation_worst[k], verify_relation(pi, rates, r))
        for k, cut in enumerate(cuts):
            cut_worst[k] = max(cut_worst[k], cut_equation_check(pi, rates, cut))
    overall = max(relation_worst + cut_worst, default=0.0)
    passed = overall <= args.tol
    report = {
        "name": doc.name,
        "assignments": [name for name, _ in assignments],
        "tolerance": args.tol,
        "relations": [
            {
                "lhs": labels[r.lhs_node],
                "rhs": labels[r.rhs_node],
                "level": r.level.name,
                "worst_residual": relation_worst[k],
            }
            for k, r in enumerate(relations)
        ],
        "cuts": [
            {
                "side_a": sorted(labels[v] for v in cut.side_a),
                "worst_residual": cut_worst[k],
            }
            for k, cut in enumerate(cuts)
        ],
        "max_residual": overall,
        "fault": fault_name,
        "pass": passed and fault_name is None,
    }
    _write_json(report, args.out)
    return EXIT_OK if report["pass"] else EXIT_FAILURE


# ---- generate ----

_PARAM_FLAGS = (
    ("n", "n"),
    ("k", "k"),
    ("blocks", "blocks"),
    ("blocksize", "blocksize"),
    ("c1", "c1"),
    ("c2", "c2"),
    ("servers", "servers"),
    ("multiple", "multiple"),
    ("truncate", "truncation"),
)


def _fixture_to_json(fx: FixtureBundle | None, labels: Sequence[str]) -> dict:
    if fx is None:
        return {"pinned": False}

    def pairs(items) -> list[list[list[str]]]:
        return [[sorted(a), sorted(b)] for a, b in items]

    doc: dict = {"pinned": True}
    if fx.c1_edges is not None:
        doc["c1_edges"] = sorted(sorted(pair) for pair in fx.c1_edges)
    if fx.c1_components is not None:
        doc["c1_components"] = [sorted(comp) for comp in fx.c1_components]
    if fx.relations:
        doc["relations"] = [relation_to_json(r, labels) for r in fx.relations]
    if fx.cut_sides:
        doc["cut_sides"] = pairs(fx.cut_sides)
    if fx.level2_sources:
        doc["level2_sources"] = pairs(fx.level2_sources)
    if fx.level3_sources:
        doc["level3_sources"] = pairs(fx.level3_sources)
    if fx.psps_relation is not None:
        doc["psps_relation"] = relation_to_json(fx.psps_relation, labels)
    if fx.closed_form is not None:
        doc["closed_form"] = [
            {"node": lab, "factor": factor_to_json(expr, labels)}
            for lab, expr in fx.closed_form
        ]
    if fx.broad_query is not None:
        doc["broad_query"] = [sorted(fx.broad_query[0]), sorted(fx.broad_query[1])]
        doc["broad_members"] = pairs(fx.broad_members)
    if fx.clique_members is not None:
        doc["clique_members"] = sorted(fx.clique_members)
        doc["clique_territories"] = [[m, sorted(t)] for m, t in fx.clique_territories]
        doc["clique_cycle"] = list(fx.clique_cycle)
    if fx.clique_cut is not None:
        doc["clique_cut"] = [sorted(fx.clique_cut[0]), sorted(fx.clique_cut[1])]
    if fx.non_jaf_pairs is not None:
        doc["non_jaf_pairs"] = sorted(sorted(pair) for pair in fx.non_jaf_pairs)
    return doc


def cmd_generate(args: argparse.Namespace) -> int:
    params = {}
    for flag, key in _PARAM_FLAGS:
        value = getattr(args, flag)
        if value is not None:
            params[key] = value
    if args.with_fixtures and args.out is None:
        raise InvalidArgumentError("--with-fixtures requires --out")
    spec = ModelSpec(Family(args.family), params)
    c = generate_model(spec)
    doc = emit_document(c, name=args.name or args.family)
    _write_json(doc.to_json(), args.out)
    if args.with_fixtures:
        fx = expected_fixtures(spec)
        _write_json(_fixture_to_json(fx, c.graph.labels), args.out + ".fixtures.json")
    return EXIT_OK


# ---- oracle ----


def _random_chain(rng: random.Random, n: int) -> FormalChain:
    """A strongly connected chain sampled edge-by-edge (deterministic per seed)."""
    labels = [str(i) for i in range(n)]
    while True:
        edges = [
            (i, j)
            for i in range(n)
            for j in range(n)
            if i != j and rng.random() < 0.35
        ]
        g = DirectedGraph(labels, edges)
        if is_strongly_connected(g):
            return FormalChain(g)


def _oracle_cuts(c: FormalChain) -> tuple[dict, bool]:
    labels = c.graph.labels
    brute = enumerate_sourced_cuts(c)
    scanned = cut_graph(c).edges
    brute_pairs = set(brute)
    missing = sorted(_label_pair(c, a, b) for a, b in brute_pairs - scanned)
    extra = sorted(_label_pair(c, a, b) for a, b in scanned - brute_pairs)
    agreed = not missing and not extra
    report = {
        "mode": "cuts",
        "cuts": [
            {
                "pair": _label_pair(c, a, b),
                "side_a": sorted(labels[v] for v in cut.side_a),
                "side_b": sorted(labels[v] for v in cut.side_b),
            }
            for (a, b), cut in sorted(brute.items(), key=lambda kv: _label_pair(c, *kv[0]))
        ],
        "diff": {"missing": missing, "extra": extra},
        "match": agreed,
    }
    return report, agreed


def _broad_pair_scan(c: FormalChain) -> tuple[list[dict], list[str], list[str]]:
    """Subset search over every component pair, with conjecture findings."""
    labels = c.graph.labels
    c1 = cut_graph(c)
    comps = c1.components
    pair_reports: list[dict] = []
    conjecture1: list[str] = []
    conjecture2: list[str] = []
    for p in range(len(comps)):
        for q in range(p + 1, len(comps)):
            k1, k2 = comps[p], comps[q]
            if len(k1) + len(k2) > _BROAD_PAIR_BUDGET:
                raise ResourceLimitError(
                    f"component pair spans {len(k1) + len(k2)} nodes; "
                    f"the subset-search budget is {_BROAD_PAIR_BUDGET}"
                )
            members = broad_cut_search(c, k1, k2)
            if not members:
                continue
            named = [
                [sorted(labels[v] for v in i), sorted(labels[v] for v in j)]
                for i, j in members
            ]
            free = is_jaf(c, k1, k2)
            pair_reports.append(
                {
                    "comp_i": sorted(labels[v] for v in k1),
                    "comp_j": sorted(labels[v] for v in k2),
                    "members": named,
                    "components_free": free,
                }
            )
            if not free:
                conjecture1.append(
                    f"({'|'.join(sorted(labels[v] for v in k1))}) vs "
                    f"({'|'.join(sorted(labels[v] for v in k2))}): members exist "
                    "but the full components are not free"
                )
            found = {(i.mask, j.mask) for i, j in members}
            for i, j in members:
                if i == k1 and j == k2:
                    continue
                grown = [
                    (i.mask | 1 << v, j.mask) for v in k1 if v not in i
                ] + [
                    (i.mask, j.mask | 1 << v) for v in k2 if v not in j
                ]
                if not any(g in found for g in grown):
                    conjecture2.append(
                        f"({'|'.join(sorted(labels[v] for v in i))}) vs "
                        f"({'|'.join(sorted(labels[v] for v in j))}): no one-node extension"
                    )
    return pair_reports, conjecture1, conjecture2


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.input == "random":
        rng = random.Random(args.seed)
        counter1: list[str] = []
        counter2: list[str] = []
        pairs_with_members = 0
        for _ in range(args.samples):
            c = _random_chain(rng, args.nodes)
            if args.mode == "cuts":
                _, agreed = _oracle_cuts(c)
                if not agreed:
                    counter1.append(emit_document(c, "counterexample").to_json())
                continue
            reports, c1_bad, c2_bad = _broad_pair_scan(c)
            pairs_with_members += len(reports)
            counter1.extend(c1_bad)
            counter2.extend(c2_bad)
        summary = []
        if args.mode == "cuts":
            summary.append(
                "no sourced-cut mismatch" if not counter1 else f"{len(counter1)} mismatches"
            )
        else:
            summary.append(
                "no Conjecture 1 counterexample"
                if not counter1
                else f"{len(counter1)} Conjecture 1 counterexamples"
            )
            summary.append(
                "no Conjecture 2 counterexample"
                if not counter2
                else f"{len(counter2)} Conjecture 2 counterexamples"
            )
        report = {
            "mode": args.mode,
            "samples": args.samples,
            "nodes": args.nodes,
            "seed": args.seed,
            "pairs_with_members": pairs_with_members,
            "findings": {"conjecture1": counter1, "conjecture2": counter2},
            "summary": "; ".join(summary),
        }
        _write_json(report, args.out)
        return EXIT_OK
    _, c, _ = _load(args.input)
    if args.mode == "cuts":
        report, agreed = _oracle_cuts(c)
        _write_json(report, args.out)
        return EXIT_OK if agreed else EXIT_FAILURE
    reports, c1_bad, c2_bad = _broad_pair_scan(c)
    report = {
        "mode": "broad",
        "pairs": reports,
        "findings": {"conjecture1": c1_bad, "conjecture2": c2_bad},
        "summary": "; ".join(
            [
                "no Conjecture 1 counterexample" if not c1_bad else f"{len(c1_bad)} Conjecture 1 counterexamples",
                "no Conjecture 2 counterexample" if not c2_bad else f"{len(c2_bad)} Conjecture 2 counterexamples",
            ]
        ),
    }
    _write_json(report, args.out)
    return EXIT_OK


# ---- export ----


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_node(label: str) -> str:
    if label.startswith("bar") and len(label) > 3:
        return f"{_dot_id(label)} [label=<<O>{label[3:]}</O>>];"
    return f"{_dot_id(label)};"


def cmd_export(args: argparse.Namespace) -> int:
    doc, c, _ = _load(args.input)
    labels = c.graph.labels
    lines = [f"digraph {_dot_id(doc.name or 'chain')} {{", "  rankdir=LR;", "  node [shape=circle];"]
    if args.annotate >= 1:
        c1 = cut_graph(c)
        for k, comp in enumerate(c1.components):
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append("    style=dashed; color=gray;")
            for lab in sorted(labels[v] for v in comp):
                lines.append("    " + _dot_node(lab))
            lines.append("  }")
    else:
        for lab in sorted(labels):
            lines.append("  " + _dot_node(lab))
    for a, b in sorted((labels[u], labels[v]) for u, v in c.graph.edge_list):
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)};")
    if args.annotate >= 1:
        for a, b in sorted(_label_pair(c, u, v) for u, v in c1.edges):
            lines.append(
                f"  {_dot_id(a)} -> {_dot_id(b)} [dir=none, style=dashed, constraint=false, color=gray40];"
            )
    if args.annotate >= 2:
        for lv in higher_level_cut_graph(c, args.annotate):
            for k, h in enumerate(lv.hyperedges):
                junction = f'"junction_{lv.level}_{k}"'
                lines.append(f"  {junction} [shape=point, width=0.08];")
                for v in sorted(h.source_i | h.source_j):
                    lines.append(
                        f"  {_dot_id(labels[v])} -> {junction} [dir=none, style=dotted, constraint=false];"
                    )
    lines.append("}")
    _write_text("\n".join(lines) + "\n", args.dot)
    return EXIT_OK


# ---- entry point ----


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prodform",
        description="Structural product-form analysis of formal Markov chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="emit the structural analysis report as JSON")
    p.add_argument("input", help="graph JSON document")
    p.add_argument("--max-level", type=int, default=1, help="deepest cut level to search")
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check every discovered identity numerically")
    p.add_argument("input", help="graph JSON document")
    p.add_argument("--seeds", type=int, default=20, help="number of random rate vectors")
    p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")
    p.add_argument(
        "--fault",
        type=int,
        nargs="?",
        const=0,
        default=None,
        help="corrupt the k-th relation as a negative control",
    )
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a family instance as a graph document")
    p.add_argument("family", choices=sorted(f.value for f in Family))
    for flag, _ in _PARAM_FLAGS:
        p.add_argument(f"--{flag}", type=int, default=None)
    p.add_argument("--name", default=None, help="document name (default: family)")
    p.add_argument("--out", default=None, help="document path (default stdout)")
    p.add_argument(
        "--with-fixtures",
        action="store_true",
        help="also write pinned expectations next to --out",
    )
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("oracle", help="brute-force checks and conjecture scans")
    p.add_argument("input", help="graph JSON document, or 'random' for sampled chains")
    p.add_argument("--mode", choices=("cuts", "broad"), default="cuts")
    p.add_argument("--nodes", type=int, default=6, help="node count for random mode")
    p.add_argument("--samples", type=int, default=200, help="sample count for random mode")
    p.add_argument("--seed", type=int, default=0, help="base seed for random mode")
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export", help="render the chain (and overlays) as DOT")
    p.add_argument("input", help="graph JSON document")
    p.add_argument("--dot", default=None, help="DOT output path (default stdout)")
    p.add_argument(
        "--annotate",
        type=int,
        default=0,
        help="0 plain graph, 1 adds the first-level overlay, n adds junctions up to level n",
    )
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotStronglyConnectedError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_STRUCTURE
    except ResourceLimitError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidArgumentError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
