"""Text persistence for dependency graphs and strategy files.

Graph documents are JSON with two top-level arrays, ``nodeDataArray`` and
``linkDataArray``; record fields follow the GoJS-flavoured vocabulary
(category/key/loc/name, ``fromPort``/``toPort`` on links). Strategy
("options") documents are a JSON object ``{"options": [...]}``; a legacy
brace-wrapped literal form ``{[9, 10, 12]}`` is read always and written
only on request, because it is not valid JSON.

Serialization is canonical: stable field order, stable node/link order,
LF newlines, shortest round-tripping number spellings. Unknown record
fields are preserved verbatim so foreign documents survive a round trip.
"""

from __future__ import annotations

import json
import re

from .errors import DocumentSchemaError, DocumentSyntaxError, MaskRangeError
from .model import (
    MASK_BITS,
    DependencyGraph,
    Link,
    Node,
    NodeKind,
    ReliabilityAttrs,
)

#: parsing refuses documents larger than this many bytes
DEFAULT_SIZE_CAP = 16 * 1024 * 1024

_CATEGORY_TO_KIND = {
    "sensor": NodeKind.SENSOR,
    "actuator": NodeKind.ACTUATOR,
    "Module": NodeKind.PROCESSING_ELEMENT,
    "DV": NodeKind.DATA_VARIABLE,
    "MDV": NodeKind.MANAGEMENT_DATA_VARIABLE,
    "OR": NodeKind.GATE_OR,
    "AND": NodeKind.GATE_AND,
    "XOR": NodeKind.GATE_XOR,
    "DEMUX": NodeKind.GATE_DEMUX,
    "Start": NodeKind.START,
    "End": NodeKind.END,
    "label": NodeKind.COMMENT,
}
_KIND_TO_CATEGORY = {kind: cat for cat, kind in _CATEGORY_TO_KIND.items()}

#: node record fields the parser understands; anything else is carried in
#: Node.extra and re-emitted after them
_KNOWN_NODE_FIELDS = ("category", "key", "loc", "name", "text", "Rel", "lambdaHw", "lambdaSw", "id", "k")
_KNOWN_LINK_FIELDS = ("from", "to", "fromPort", "toPort")

_HEX_ID = re.compile(r"^(0[xX])?[0-9a-fA-F]+$")


def _check_size(text: str, size_cap: int) -> None:
    if len(text.encode("utf-8")) > size_cap:
        raise DocumentSyntaxError(f"document exceeds the {size_cap} byte cap")


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"malformed JSON at offset {exc.pos}: {exc.msg}", offset=exc.pos) from exc


def _parse_number(record_key: str, field: str, value) -> float:
    """Accept JSON numbers and numeric strings (the legacy writer quoted
    everything)."""
    if isinstance(value, bool) or value is None:
        raise DocumentSchemaError(f"node {record_key!r}: field {field!r} is not a number", key=record_key)
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise DocumentSchemaError(f"node {record_key!r}: field {field!r} is not a number", key=record_key) from None
    if not isinstance(value, (int, float)):
        raise DocumentSchemaError(f"node {record_key!r}: field {field!r} is not a number", key=record_key)
    return float(value)


def _parse_loc(record_key: str, value) -> tuple[float, float]:
    if isinstance(value, str):
        parts = value.split()
        if len(parts) == 2:
            try:
                return float(parts[0]), float(parts[1])
            except ValueError:
                pass
    raise DocumentSchemaError(f"node {record_key!r}: loc is not an 'x y' pair", key=record_key)


def _parse_pe_id(record_key: str, value) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        pe_id = value
    elif isinstance(value, str) and _HEX_ID.match(value.strip()):
        pe_id = int(value.strip(), 16)
    else:
        raise DocumentSchemaError(f"node {record_key!r}: bad ID hex {value!r}", key=record_key)
    if pe_id < 0 or pe_id >= (1 << MASK_BITS):
        raise DocumentSchemaError(f"node {record_key!r}: ID {value!r} outside 32-bit space", key=record_key)
    return pe_id


def _node_from_record(record: dict) -> Node:
    key = record.get("key")
    if not isinstance(key, str) or not key:
        raise DocumentSchemaError(f"node record without a usable key: {record!r}")
    category = record.get("category")
    kind = _CATEGORY_TO_KIND.get(category)
    if kind is None:
        raise DocumentSchemaError(f"node {key!r}: unknown category {category!r}", key=key)

    position = None
    if "loc" in record:
        position = _parse_loc(key, record["loc"])

    name = record.get("text" if kind is NodeKind.COMMENT else "name", "")
    if not isinstance(name, str):
        raise DocumentSchemaError(f"node {key!r}: name is not a string", key=key)

    static_rel = None
    if "Rel" in record:
        static_rel = _parse_number(key, "Rel", record["Rel"])
        if not (0.0 <= static_rel <= 1.0):
            raise DocumentSchemaError(f"node {key!r}: reliability {static_rel} out of [0, 1]", key=key)
    lambda_hw = _parse_number(key, "lambdaHw", record["lambdaHw"]) if "lambdaHw" in record else None
    lambda_sw = _parse_number(key, "lambdaSw", record["lambdaSw"]) if "lambdaSw" in record else None
    for field, value in (("lambdaHw", lambda_hw), ("lambdaSw", lambda_sw)):
        if value is not None and value < 0:
            raise DocumentSchemaError(f"node {key!r}: {field} is negative", key=key)

    attrs = None
    if static_rel is not None or lambda_hw is not None or lambda_sw is not None:
        attrs = ReliabilityAttrs(
            lambda_hw=lambda_hw,
            lambda_sw=lambda_sw,
            static_rel=1.0 if static_rel is None else static_rel,
        )

    pe_id = _parse_pe_id(key, record["id"]) if "id" in record else None

    gate_k = None
    if "k" in record:
        k = record["k"]
        if isinstance(k, str):
            k = _parse_number(key, "k", k)
        if isinstance(k, float) and k.is_integer():
            k = int(k)
        if not isinstance(k, int) or isinstance(k, bool):
            raise DocumentSchemaError(f"node {key!r}: k is not an integer", key=key)
        gate_k = k

    extra = tuple((name_, record[name_]) for name_ in record if name_ not in _KNOWN_NODE_FIELDS)
    return Node(
        key=key,
        kind=kind,
        name=name,
        attrs=attrs,
        pe_id=pe_id,
        position=position,
        gate_k=gate_k,
        extra=extra,
    )


def _link_from_record(record: dict) -> Link:
    for field in ("from", "to"):
        if not isinstance(record.get(field), str):
            raise DocumentSchemaError(f"link record without a {field!r} key: {record!r}")
    return Link(
        from_key=record["from"],
        to_key=record["to"],
        from_port=record.get("fromPort", "out"),
        to_port=record.get("toPort", "in"),
    )


def parse_graph_document(text: str, size_cap: int = DEFAULT_SIZE_CAP) -> DependencyGraph:
    """Parse a graph document into a :class:`DependencyGraph`.

    Raises DocumentSyntaxError for malformed text (with the byte offset)
    and DocumentSchemaError for unknown categories, duplicate keys, bad
    hex IDs or out-of-range reliability values.
    """
    _check_size(text, size_cap)
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise DocumentSchemaError("top level is not an object")
    node_records = doc.get("nodeDataArray")
    link_records = doc.get("linkDataArray")
    if not isinstance(node_records, list) or not isinstance(link_records, list):
        raise DocumentSchemaError("document needs nodeDataArray and linkDataArray lists")

    nodes = []
    seen = set()
    for record in node_records:
        if not isinstance(record, dict):
            raise DocumentSchemaError(f"node record is not an object: {record!r}")
        node = _node_from_record(record)
        if node.key in seen:
            raise DocumentSchemaError(f"duplicate node key {node.key!r}", key=node.key)
        seen.add(node.key)
        nodes.append(node)

    links = []
    for record in link_records:
        if not isinstance(record, dict):
            raise DocumentSchemaError(f"link record is not an object: {record!r}")
        links.append(_link_from_record(record))

    return DependencyGraph(nodes, links)


def _format_number(value: float) -> float | int:
    """Emit integers without a fractional part; floats keep their shortest
    exact spelling via json (repr), good to 17 significant digits."""
    if isinstance(value, float) and value.is_integer() and abs(value) < 2**53:
        return int(value)
    return value


def _node_to_record(node: Node) -> dict:
    record: dict = {"category": _KIND_TO_CATEGORY[node.kind], "key": node.key}
    if node.position is not None:
        record["loc"] = f"{node.position[0]!r} {node.position[1]!r}"
    if node.name:
        record["text" if node.kind is NodeKind.COMMENT else "name"] = node.name
    if node.attrs is not None:
        attrs = node.attrs
        if attrs.static_rel != 1.0 or (attrs.lambda_hw is None and attrs.lambda_sw is None):
            record["Rel"] = _format_number(attrs.static_rel)
        if attrs.lambda_hw is not None:
            record["lambdaHw"] = _format_number(attrs.lambda_hw)
        if attrs.lambda_sw is not None:
            record["lambdaSw"] = _format_number(attrs.lambda_sw)
    if node.pe_id is not None:
        record["id"] = f"0x{node.pe_id:X}"
    if node.gate_k is not None:
        record["k"] = node.gate_k
    for name, value in node.extra:
        record.setdefault(name, value)
    return record


def _link_to_record(link: Link) -> dict:
    return {
        "from": link.from_key,
        "to": link.to_key,
        "fromPort": link.from_port,
        "toPort": link.to_port,
    }


def serialize_graph_document(graph: DependencyGraph) -> str:
    """Render the canonical document text: parse∘serialize is identity and
    a second serialize of the parsed result is byte-identical."""
    doc = {
        "class": "go.GraphLinksModel",
        "linkFromPortIdProperty": "fromPort",
        "linkToPortIdProperty": "toPort",
        "nodeDataArray": [_node_to_record(n) for n in graph.nodes.values()],
        "linkDataArray": [_link_to_record(l) for l in graph.links],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


_PAPER_OPTIONS = re.compile(r"^\s*\{\s*\[(?P<body>[^][{}]*)\]\s*\}\s*$")


def parse_options_document(text: str, size_cap: int = DEFAULT_SIZE_CAP) -> list[int]:
    """Read a strategy document in either accepted form.

    Canonical: ``{"options": [2211, 3003]}``. Legacy literal: the
    brace-wrapped array ``{[9, 10, 12]}``. Entry order is meaningful
    (descending reliability) and is preserved.
    """
    _check_size(text, size_cap)
    match = _PAPER_OPTIONS.match(text)
    if match is not None:
        body = match.group("body").strip()
        if not body:
            return []
        values = []
        for offset, item in enumerate(body.split(",")):
            item = item.strip()
            if not re.fullmatch(r"[+-]?\d+", item):
                raise DocumentSyntaxError(f"entry {offset} is not a decimal integer: {item!r}")
            values.append(int(item, 10))
        return _checked_masks(values)

    doc = _load_json(text)
    if not isinstance(doc, dict) or "options" not in doc:
        raise DocumentSchemaError('strategy document needs an "options" list')
    values = doc["options"]
    if not isinstance(values, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in values):
        raise DocumentSchemaError('"options" must be a list of integers')
    return _checked_masks(values)


def _checked_masks(values: list[int]) -> list[int]:
    for value in values:
        if value < 0 or value >= (1 << MASK_BITS):
            raise MaskRangeError(f"option {value} outside the 32-bit mask space")
    return values


def serialize_options_document(masks, paper_compat: bool = False) -> str:
    """Render a strategy document. ``paper_compat`` emits the legacy
    brace-wrapped literal byte-for-byte (", "-separated, no newline)."""
    masks = _checked_masks(list(masks))
    if paper_compat:
        return "{[" + ", ".join(str(m) for m in masks) + "]}"
    return json.dumps({"options": masks}) + "\n"
