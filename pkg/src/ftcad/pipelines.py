"""Pipeline extraction.

A pipeline is one set of nodes that keeps an actuator supplied with data.
Extraction walks backwards from each actuator and expands gate semantics
into alternatives: AND joins every combination of its inputs'
alternatives into one pipeline, OR(k) does the same for each k-subset of
its inputs, XOR behaves like OR(1) (its exclusivity is enforced at
runtime by the manager picking a single pipeline), and DEMUX is a
transparent fan-out. Gates never appear among the members.

Alternatives are produced in link order and deduplicated by member set,
so discovery order is deterministic for a given document.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

from . import kernel
from .errors import CycleError, ExplosionError, InvalidGraphError, UnreachableSinkError
from .model import DependencyGraph, NodeKind, validate_graph
from .structure import StructureProgram, compile_structure

#: extraction aborts beyond this many alternatives to stay interactive
DEFAULT_PIPELINE_CAP = 4096


@dataclass(frozen=True)
class Pipeline:
    """One minimal node set keeping ``sink`` operational.

    ``members`` holds sensors, PEs, data variables and the sink actuator;
    ``sequence`` is the members in topological order (ties broken by key)
    and ``index`` the discovery rank across the whole graph.
    """

    sink: str
    members: frozenset[str]
    sequence: tuple[str, ...]
    index: int


def _alternatives(graph: DependencyGraph, key: str, memo: dict, cap: int) -> list[frozenset[str]]:
    if key in memo:
        return memo[key]
    node = graph.nodes[key]

    def feeds() -> list[str]:
        return [
            l.from_key
            for l in graph.in_links(key)
            if l.from_key in graph.nodes
            and graph.nodes[l.from_key].kind is not NodeKind.COMMENT
        ]

    def combine(parent_keys: list[str]) -> list[frozenset[str]]:
        """All-of combination: cross product of the parents' alternatives."""
        pools = [_alternatives(graph, parent, memo, cap) for parent in parent_keys]
        out = []
        for combo in itertools.product(*pools):
            merged: frozenset[str] = frozenset().union(*combo) if combo else frozenset()
            out.append(merged)
            if len(out) > cap:
                raise ExplosionError(f"more than {cap} pipeline alternatives at {key!r}")
        return out

    if node.kind is NodeKind.START:
        result = [frozenset()]
    elif node.is_semantic:
        result = [alt | {key} for alt in combine(feeds())]
    elif node.kind is NodeKind.GATE_AND or node.kind is NodeKind.END:
        result = combine(feeds())
    elif node.kind is NodeKind.GATE_OR:
        k = node.gate_k if node.gate_k is not None else 1
        result = []
        for subset in itertools.combinations(feeds(), k):
            result.extend(combine(list(subset)))
            if len(result) > cap:
                raise ExplosionError(f"more than {cap} pipeline alternatives at {key!r}")
    else:  # XOR and DEMUX route one input at a time
        result = []
        for parent in feeds():
            result.extend(combine([parent]))

    # drop duplicate alternatives early (diamond topologies)
    seen = set()
    unique = []
    for alt in result:
        if alt not in seen:
            seen.add(alt)
            unique.append(alt)
    if len(unique) > cap:
        raise ExplosionError(f"more than {cap} pipeline alternatives at {key!r}")
    memo[key] = unique
    return unique


def _topo_positions(graph: DependencyGraph) -> dict[str, int]:
    """Kahn order over non-comment nodes with a key-ordered heap, so the
    induced member ordering is topological with ties broken by key."""
    keys = {k for k, n in graph.nodes.items() if n.kind is not NodeKind.COMMENT}
    indeg = {k: 0 for k in keys}
    for link in graph.links:
        if link.from_key in keys and link.to_key in keys:
            indeg[link.to_key] += 1
    ready = [k for k in keys if indeg[k] == 0]
    heapq.heapify(ready)
    positions = {}
    while ready:
        key = heapq.heappop(ready)
        positions[key] = len(positions)
        for link in graph.out_links(key):
            child = link.to_key
            if child in indeg:
                indeg[child] -= 1
                if indeg[child] == 0:
                    heapq.heappush(ready, child)
    return positions


def extract_pipelines(
    graph: DependencyGraph, cap: int = DEFAULT_PIPELINE_CAP
) -> list[Pipeline]:
    """Enumerate every pipeline of a normalized, valid graph.

    Pipelines are discovered sink by sink (actuators in document order),
    deduplicated by member set, then numbered by discovery. Raises
    UnreachableSinkError for an actuator with no satisfiable pipeline.
    """
    report = validate_graph(graph)
    if report:
        if any(v.rule == "cycle" for v in report):
            raise CycleError("graph contains a cycle")
        raise InvalidGraphError(report)

    positions = _topo_positions(graph)
    memo: dict[str, list[frozenset[str]]] = {}
    pipelines: list[Pipeline] = []
    seen: set[frozenset[str]] = set()
    sinks = sorted(
        (n for n in graph.nodes.values() if n.kind is NodeKind.ACTUATOR),
        key=lambda n: n.key,
    )
    for node in sinks:
        alternatives = _alternatives(graph, node.key, memo, cap)
        alternatives = [alt for alt in alternatives if alt]
        if not alternatives:
            raise UnreachableSinkError(
                f"actuator {node.key!r} has no satisfiable pipeline", key=node.key
            )
        for members in alternatives:
            if members in seen:
                continue
            seen.add(members)
            pipelines.append(
                Pipeline(
                    sink=node.key,
                    members=members,
                    sequence=tuple(sorted(members, key=positions.__getitem__)),
                    index=len(pipelines),
                )
            )
    return pipelines


def is_operational(
    graph: DependencyGraph,
    member_subset,
    sink: str,
    program: StructureProgram | None = None,
) -> bool:
    """Forward gate evaluation with only ``member_subset`` alive.

    AND needs all inputs, OR(k) at least k, XOR at least one (exclusivity
    is a routing concern, not a counting one), DEMUX propagates. Returns
    whether the sink still receives data.
    """
    if program is None:
        program = compile_structure(graph)
    return kernel.evaluate(program, program.mask_of(member_subset), program.op_index[sink])
