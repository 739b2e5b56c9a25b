"""Shared fixtures and independent oracles.

The oracle implementations here are deliberately separate from the
package internals: a dict-based recursive gate evaluator, a subset
enumerator for minimal operational sets, and a plain-float reliability
sum. Tests compare the package's fast paths against these.
"""

from __future__ import annotations

import itertools
import random
from importlib import resources

import pytest

from ftcad.model import (
    DependencyGraph,
    Link,
    Node,
    NodeKind,
    ReliabilityAttrs,
)

EXAMPLES = ("serial.json", "parallel2.json", "triple.json", "abs.json")


@pytest.fixture(scope="session")
def bundled():
    """Name -> document text for every bundled example."""
    out = {}
    for name in EXAMPLES + ("abs_fig37_scenario.json",):
        out[name] = (resources.files("ftcad.data") / name).read_text(encoding="utf-8")
    return out


# --- graph construction helpers --------------------------------------------


def mk_node(key, kind, lam=None, rel=None, pe_id=None, k=None, name=None):
    attrs = None
    if lam is not None or rel is not None:
        attrs = ReliabilityAttrs(lambda_hw=lam, static_rel=1.0 if rel is None else rel)
    return Node(
        key=key,
        kind=kind,
        name=name or key,
        attrs=attrs,
        pe_id=pe_id,
        gate_k=k,
    )


def chain(prefix, lam=1.0, pe_id=None):
    """sensor -> module -> dv chain; returns (nodes, links, out_key)."""
    nodes = [
        mk_node(f"{prefix}_s", NodeKind.SENSOR, lam=lam),
        mk_node(f"{prefix}_m", NodeKind.PROCESSING_ELEMENT, lam=lam, pe_id=pe_id),
        mk_node(f"{prefix}_d", NodeKind.DATA_VARIABLE, lam=lam),
    ]
    links = [
        Link(f"{prefix}_s", f"{prefix}_m"),
        Link(f"{prefix}_m", f"{prefix}_d"),
    ]
    return nodes, links, f"{prefix}_d"


# --- independent gate-logic oracle ------------------------------------------


def oracle_operational(graph: DependencyGraph, alive: set, sink: str) -> bool:
    """Recursive evaluator written directly off the gate definitions,
    independent of the package's compiled program."""

    memo = {}

    def feeds(key):
        return [
            l.from_key
            for l in graph.in_links(key)
            if graph.nodes[l.from_key].kind is not NodeKind.COMMENT
        ]

    def value(key):
        if key in memo:
            return memo[key]
        node = graph.nodes[key]
        memo[key] = False  # cycles evaluate false; inputs are DAGs anyway
        ins = feeds(key)
        if node.kind is NodeKind.START:
            v = True
        elif node.kind in (NodeKind.GATE_AND, NodeKind.END):
            v = all(value(i) for i in ins)
        elif node.kind is NodeKind.GATE_OR:
            need = node.gate_k if node.gate_k is not None else 1
            v = sum(value(i) for i in ins) >= need
        elif node.kind in (NodeKind.GATE_XOR, NodeKind.GATE_DEMUX):
            v = any(value(i) for i in ins)
        else:
            v = key in alive and all(value(i) for i in ins)
        memo[key] = v
        return v

    return value(sink)


def oracle_minimal_sets(graph: DependencyGraph, universe, sink: str) -> set:
    """Minimal operational subsets by exhaustive enumeration."""
    universe = sorted(universe)
    operational = []
    for r in range(len(universe) + 1):
        for combo in itertools.combinations(universe, r):
            if oracle_operational(graph, set(combo), sink):
                operational.append(frozenset(combo))
    minimal = set()
    for subset in operational:
        if not any(other < subset for other in operational):
            minimal.add(subset)
    return minimal


# --- random graph generators -------------------------------------------------


def random_sp_graph(rng: random.Random, pure_lambda=True) -> DependencyGraph:
    """Random series-parallel graph with node-disjoint alternative
    branches, so extracted pipelines coincide with minimal operational
    sets. All nodes carry a positive failure rate."""
    nodes, links = [], []
    next_id = [1]

    def lam():
        return rng.choice([0.5, 1.0, 2.0, 5.0]) if pure_lambda else rng.random() * 4

    def branch(prefix):
        """One source branch: sensor then 1-2 processing stages."""
        seq = [mk_node(f"{prefix}s", NodeKind.SENSOR, lam=lam())]
        for i in range(rng.randint(1, 2)):
            kind = NodeKind.PROCESSING_ELEMENT if i == 0 else NodeKind.DATA_VARIABLE
            pe_id = None
            if kind is NodeKind.PROCESSING_ELEMENT:
                pe_id = next_id[0]
                next_id[0] <<= 1
            seq.append(mk_node(f"{prefix}n{i}", kind, lam=lam(), pe_id=pe_id))
        nodes.extend(seq)
        for a, b in zip(seq, seq[1:]):
            links.append(Link(a.key, b.key))
        return seq[-1].key

    n_branches = rng.randint(1, 3)
    outs = [branch(f"b{i}_") for i in range(n_branches)]
    if n_branches == 1:
        joined = outs[0]
    else:
        gate_kind = rng.choice([NodeKind.GATE_OR, NodeKind.GATE_AND, NodeKind.GATE_XOR])
        k = None
        if gate_kind is NodeKind.GATE_OR:
            k = rng.randint(1, n_branches)
        nodes.append(mk_node("join", gate_kind, k=k))
        for out in outs:
            links.append(Link(out, "join"))
        joined = "join"
    tail = mk_node("tailm", NodeKind.PROCESSING_ELEMENT, lam=lam(), pe_id=next_id[0])
    next_id[0] <<= 1
    sink = mk_node("act", NodeKind.ACTUATOR, lam=lam())
    nodes.extend([tail, sink])
    links.append(Link(joined, tail.key))
    links.append(Link(tail.key, sink.key))
    return DependencyGraph(nodes, links)


CATEGORIES = ["sensor", "actuator", "Module", "DV", "MDV", "OR", "AND", "XOR", "DEMUX", "label"]


def random_document(rng: random.Random) -> dict:
    """Schema-correct random document (not necessarily a valid graph);
    exercises parser/serializer round trips including unknown fields."""
    n = rng.randint(0, 12)
    keys = [f"n{i}" for i in range(n)]
    records = []
    used_bits = 0
    for key in keys:
        cat = rng.choice(CATEGORIES)
        record = {"category": cat, "key": key}
        if rng.random() < 0.8:
            record["loc"] = f"{rng.uniform(-900, 100)!r} {rng.uniform(-700, 0)!r}"
        if cat == "label":
            record["text"] = f"note {key}"
        elif rng.random() < 0.9:
            record["name"] = f"name-{key}"
        if cat in ("sensor", "actuator", "Module", "DV", "MDV"):
            if rng.random() < 0.5:
                record["Rel"] = round(rng.random(), 6)
            if rng.random() < 0.5:
                record["lambdaHw"] = round(rng.uniform(0, 10), 6)
            if cat == "Module" and rng.random() < 0.3:
                record["lambdaSw"] = round(rng.uniform(0, 5), 6)
        if cat == "Module" and rng.random() < 0.8:
            bit = rng.randrange(32)
            if not (used_bits >> bit) & 1:
                used_bits |= 1 << bit
                record["id"] = f"0x{1 << bit:X}"
        if cat == "OR":
            record["k"] = rng.randint(1, 3)
        if rng.random() < 0.3:
            record["figure"] = rng.choice(["alpha", "beta", 7, [1, 2]])
        records.append(record)
    link_records = []
    for _ in range(rng.randint(0, 2 * n)):
        if n < 2:
            break
        a, b = rng.sample(keys, 2)
        link_records.append({"from": a, "to": b, "fromPort": "out", "toPort": "in"})
    return {"nodeDataArray": records, "linkDataArray": link_records}
