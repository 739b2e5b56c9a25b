"""Dependency-graph data model.

A dependency graph describes what every sensor, processing element (PE),
data variable and actuator of a distributed embedded system needs in order
to operate. Flow-control gates (OR/AND/XOR/DEMUX) express alternative and
joint input requirements; Start/End delimiters are inserted by
:func:`normalize_graph`, never authored by hand.

Values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import InvalidGraphError, NoAttrsError

#: width of the one-hot PE identifier space
MASK_BITS = 32

#: reserved keys used when normalization inserts the delimiters
START_KEY = "Start"
END_KEY = "End"


class NodeKind(enum.Enum):
    SENSOR = "sensor"
    ACTUATOR = "actuator"
    PROCESSING_ELEMENT = "pe"
    DATA_VARIABLE = "dv"
    MANAGEMENT_DATA_VARIABLE = "mdv"
    GATE_OR = "gate-or"
    GATE_AND = "gate-and"
    GATE_XOR = "gate-xor"
    GATE_DEMUX = "gate-demux"
    START = "start"
    END = "end"
    COMMENT = "comment"


#: kinds that take part in pipelines and may carry reliability attributes
SEMANTIC_KINDS = frozenset(
    {
        NodeKind.SENSOR,
        NodeKind.ACTUATOR,
        NodeKind.PROCESSING_ELEMENT,
        NodeKind.DATA_VARIABLE,
        NodeKind.MANAGEMENT_DATA_VARIABLE,
    }
)

GATE_KINDS = frozenset(
    {NodeKind.GATE_OR, NodeKind.GATE_AND, NodeKind.GATE_XOR, NodeKind.GATE_DEMUX}
)


@dataclass(frozen=True)
class ReliabilityAttrs:
    """Reliability inputs of one node.

    Failure rates are expressed in failures per million hours (the unit
    used throughout the toolkit); ``static_rel`` is a dimensionless factor
    in [0, 1] multiplied into the exponential survival term.
    ``lambda_sw`` models the software hosted on a PE and composes serially
    with the hardware rate.
    """

    lambda_hw: float | None = None
    lambda_sw: float | None = None
    static_rel: float = 1.0

    def __post_init__(self):
        for name in ("lambda_hw", "lambda_sw"):
            value = getattr(self, name)
            if value is not None and (not math.isfinite(value) or value < 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if not (0.0 <= self.static_rel <= 1.0):
            raise ValueError(f"static_rel must be in [0, 1], got {self.static_rel!r}")


@dataclass(frozen=True)
class Node:
    """One graph node. ``pe_id`` is the one-hot mask of a processing
    element; ``gate_k`` is the input quota of an OR gate; ``extra`` keeps
    unknown record fields so documents round-trip untouched."""

    key: str
    kind: NodeKind
    name: str = ""
    attrs: ReliabilityAttrs | None = None
    pe_id: int | None = None
    position: tuple[float, float] | None = None
    gate_k: int | None = None
    extra: tuple[tuple[str, object], ...] = ()

    @property
    def is_semantic(self) -> bool:
        return self.kind in SEMANTIC_KINDS

    @property
    def is_gate(self) -> bool:
        return self.kind in GATE_KINDS


@dataclass(frozen=True)
class Link:
    """Directed edge between two node keys with GoJS-style port labels."""

    from_key: str
    to_key: str
    from_port: str = "out"
    to_port: str = "in"


@dataclass(frozen=True)
class Violation:
    """One validation finding: rule identifier plus the offending key."""

    rule: str
    key: str
    message: str

    def __str__(self):
        return f"[{self.rule}] {self.key}: {self.message}"


class DependencyGraph:
    """Keyed node collection plus an ordered link list.

    Immutable after construction; mutating helpers return new graphs.
    Link order is meaningful: it fixes the input ordering of gates and
    therefore the discovery order of pipelines.
    """

    def __init__(self, nodes, links):
        node_map: dict[str, Node] = {}
        for node in nodes:
            if node.key in node_map:
                raise ValueError(f"duplicate node key {node.key!r}")
            node_map[node.key] = node
        self.nodes: dict[str, Node] = node_map
        self.links: tuple[Link, ...] = tuple(links)
        self._in: dict[str, list[Link]] = {key: [] for key in node_map}
        self._out: dict[str, list[Link]] = {key: [] for key in node_map}
        for link in self.links:
            if link.from_key in self._out:
                self._out[link.from_key].append(link)
            if link.to_key in self._in:
                self._in[link.to_key].append(link)

    def __eq__(self, other):
        if not isinstance(other, DependencyGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.links == other.links

    def __repr__(self):
        return f"DependencyGraph(nodes={len(self.nodes)}, links={len(self.links)})"

    def node(self, key: str) -> Node:
        return self.nodes[key]

    def in_links(self, key: str) -> list[Link]:
        return self._in.get(key, [])

    def out_links(self, key: str) -> list[Link]:
        return self._out.get(key, [])

    def nodes_of_kind(self, kind: NodeKind) -> list[Node]:
        return [n for n in self.nodes.values() if n.kind is kind]

    @property
    def is_normalized(self) -> bool:
        return any(n.kind is NodeKind.START for n in self.nodes.values()) and any(
            n.kind is NodeKind.END for n in self.nodes.values()
        )


def _find_cycle(graph: DependencyGraph) -> str | None:
    """Return a node key on some cycle, or None. Iterative three-color DFS
    over non-comment nodes, so deep graphs do not hit the recursion limit."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {k: WHITE for k in graph.nodes}
    for root in graph.nodes:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(graph.out_links(root)))]
        color[root] = GRAY
        while stack:
            key, it = stack[-1]
            advanced = False
            for link in it:
                child = link.to_key
                if child not in color:
                    continue
                if color[child] == GRAY:
                    return child
                if color[child] == WHITE:
                    color[child] = GRAY
                    stack.append((child, iter(graph.out_links(child))))
                    advanced = True
                    break
            if not advanced:
                color[key] = BLACK
                stack.pop()
    return None


def validate_graph(graph: DependencyGraph) -> list[Violation]:
    """Check structural well-formedness; returns every violation found.

    Violations are data: the graph is left untouched and nothing raises.
    An empty report means the graph is valid.
    """
    report: list[Violation] = []
    add = report.append

    semantic = [n for n in graph.nodes.values() if n.is_semantic]
    if not any(n.kind is not NodeKind.COMMENT for n in graph.nodes.values()):
        add(Violation("no-source-or-sink", "", "graph has no sink/source"))
    else:
        sources = [
            n
            for n in semantic
            if not any(
                graph.nodes.get(l.from_key, None) is not None
                and graph.nodes[l.from_key].kind is not NodeKind.COMMENT
                and graph.nodes[l.from_key].kind is not NodeKind.START
                for l in graph.in_links(n.key)
            )
        ]
        if not sources:
            add(Violation("no-source-or-sink", "", "graph has no source node"))
        if not graph.nodes_of_kind(NodeKind.ACTUATOR):
            add(Violation("no-source-or-sink", "", "graph has no actuator sink"))

    for link in graph.links:
        for end in (link.from_key, link.to_key):
            if end not in graph.nodes:
                add(Violation("link-endpoint", end, "link endpoint does not exist"))
        if link.from_key == link.to_key:
            add(Violation("self-loop", link.from_key, "link loops onto its node"))

    cyclic = _find_cycle(graph)
    if cyclic is not None:
        add(Violation("cycle", cyclic, "graph contains a cycle"))

    seen_ids: dict[int, str] = {}
    for node in graph.nodes.values():
        if node.pe_id is not None:
            if node.kind is not NodeKind.PROCESSING_ELEMENT:
                add(Violation("pe-id-on-non-pe", node.key, "only PEs carry an ID"))
            if node.pe_id <= 0 or node.pe_id >= (1 << MASK_BITS):
                add(Violation("pe-id-range", node.key, f"ID {node.pe_id:#x} outside 32-bit space"))
            elif node.pe_id & (node.pe_id - 1):
                add(Violation("pe-id-not-one-hot", node.key, f"ID {node.pe_id:#x} has more than one bit set"))
            elif node.pe_id in seen_ids:
                add(Violation("pe-id-duplicate", node.key, f"ID {node.pe_id:#x} already used by {seen_ids[node.pe_id]!r}"))
            else:
                seen_ids[node.pe_id] = node.key

        if node.attrs is not None:
            if not node.is_semantic:
                add(Violation("attrs-forbidden", node.key, "control nodes carry no reliability attributes"))
            if node.attrs.lambda_sw is not None and node.kind is not NodeKind.PROCESSING_ELEMENT:
                add(Violation("lambda-sw-on-non-pe", node.key, "software failure rate applies to PEs only"))

        if node.kind is NodeKind.GATE_OR:
            k = node.gate_k if node.gate_k is not None else 1
            fan_in = len(graph.in_links(node.key))
            if k < 1:
                add(Violation("gate-arity", node.key, f"OR gate quota must be >= 1, got {k}"))
            elif fan_in < k:
                add(Violation("gate-arity", node.key, f"OR gate needs {k} inputs but has {fan_in}"))
        elif node.gate_k is not None:
            add(Violation("gate-arity", node.key, "only OR gates carry an input quota"))

        if node.kind is NodeKind.GATE_XOR and len(graph.out_links(node.key)) > 1:
            add(Violation("gate-arity", node.key, "XOR gate has exactly one output"))
        if node.kind is NodeKind.GATE_DEMUX and len(graph.in_links(node.key)) != 1:
            add(Violation("gate-arity", node.key, "DEMUX gate has exactly one input"))
        if node.is_gate and node.kind is not NodeKind.GATE_DEMUX and not graph.in_links(node.key):
            add(Violation("gate-arity", node.key, "gate has no inputs"))

    return report


def normalize_graph(graph: DependencyGraph) -> DependencyGraph:
    """Insert the Start/End delimiters.

    Start feeds every semantic node without a semantic predecessor; End is
    fed by every semantic node without a semantic successor. Comments are
    ignored on both sides. Normalizing twice equals normalizing once.
    """
    report = validate_graph(graph)
    if report:
        raise InvalidGraphError(report)

    def counts(links: list[Link], attr: str) -> int:
        total = 0
        for link in links:
            other = graph.nodes.get(getattr(link, attr))
            if other is not None and other.kind is not NodeKind.COMMENT:
                total += 1
        return total

    nodes = list(graph.nodes.values())
    links = list(graph.links)

    start = next((n for n in nodes if n.kind is NodeKind.START), None)
    if start is None:
        start = Node(key=_fresh_key(graph, START_KEY), kind=NodeKind.START, name="Start")
        nodes.insert(0, start)
    end = next((n for n in nodes if n.kind is NodeKind.END), None)
    if end is None:
        end = Node(key=_fresh_key(graph, END_KEY), kind=NodeKind.END, name="End")
        nodes.append(end)

    for node in graph.nodes.values():
        if not node.is_semantic:
            continue
        if counts(graph.in_links(node.key), "from_key") == 0:
            links.append(Link(start.key, node.key))
        if counts(graph.out_links(node.key), "to_key") == 0:
            links.append(Link(node.key, end.key))

    return DependencyGraph(nodes, links)


def _fresh_key(graph: DependencyGraph, wanted: str) -> str:
    key = wanted
    suffix = 1
    while key in graph.nodes:
        key = f"{wanted}_{suffix}"
        suffix += 1
    return key


def effective_lambda(node: Node) -> float:
    """Total failure rate of a node in failures per million hours.

    PE hardware and its hosted software compose serially, so the rates
    simply add; a missing rate counts as zero.
    """
    if node.attrs is None:
        raise NoAttrsError(f"node {node.key!r} carries no reliability attributes", key=node.key)
    return (node.attrs.lambda_hw or 0.0) + (node.attrs.lambda_sw or 0.0)


def node_lambda(node: Node) -> float:
    """Like :func:`effective_lambda` but 0 for attribute-less nodes."""
    if node.attrs is None:
        return 0.0
    return effective_lambda(node)


def node_static_rel(node: Node) -> float:
    if node.attrs is None:
        return 1.0
    return node.attrs.static_rel
