"""Strategy encoding: ranked pipelines to "Reliability Options" bitmasks.

Every processing element carries a one-hot 32-bit ID; a pipeline's mask
is the OR of its members' IDs, which for one-hot disjoint IDs equals
their arithmetic sum. The exported options list holds the ranked masks
in descending reliability order, and the runtime manager matches them
against its status register from the top.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MissingIdError, UnknownBitError
from .model import MASK_BITS, DependencyGraph, NodeKind
from .pipelines import Pipeline, extract_pipelines
from .reliability import DEFAULT_T_REF, rank_pipelines


@dataclass(frozen=True)
class ReliabilityOptions:
    """The exported strategy: masks in descending reliability order plus
    the ID-to-node directory needed to decode them."""

    options: tuple[int, ...]
    pe_directory: dict[int, str]
    t_ref: float

    def bit_directory(self) -> dict[int, str]:
        """Directory keyed by bit index instead of one-hot mask."""
        return {pe_id.bit_length() - 1: key for pe_id, key in self.pe_directory.items()}


def pipeline_mask(graph: DependencyGraph, pipeline: Pipeline) -> int:
    """OR of the one-hot IDs of the pipeline's processing elements."""
    mask = 0
    for key in pipeline.members:
        node = graph.nodes[key]
        if node.kind is not NodeKind.PROCESSING_ELEMENT:
            continue
        if node.pe_id is None:
            raise MissingIdError(f"processing element {key!r} has no ID", key=key)
        mask |= node.pe_id
    return mask


def pe_directory(graph: DependencyGraph) -> dict[int, str]:
    """Map every assigned one-hot ID to its node key. PEs outside every
    pipeline still occupy their bit: the status register is sized by PE
    count, not by pipeline content."""
    directory: dict[int, str] = {}
    for node in graph.nodes.values():
        if node.kind is NodeKind.PROCESSING_ELEMENT and node.pe_id is not None:
            directory[node.pe_id] = node.key
    return directory


def build_options(
    graph: DependencyGraph,
    t_ref: float = DEFAULT_T_REF,
    pipelines=None,
) -> ReliabilityOptions:
    """Rank the graph's pipelines and encode them as option masks.

    Duplicate masks (distinct pipelines over the same PE set) keep their
    best rank only.
    """
    if pipelines is None:
        pipelines = extract_pipelines(graph)
    ranked = rank_pipelines(graph, pipelines, t_ref)
    masks: list[int] = []
    for entry in ranked:
        mask = pipeline_mask(graph, entry.pipeline)
        if mask not in masks:
            masks.append(mask)
    return ReliabilityOptions(
        options=tuple(masks), pe_directory=pe_directory(graph), t_ref=t_ref
    )


def decode_mask(options: ReliabilityOptions, mask: int) -> list[str]:
    """Node keys of the PEs whose bits are set, ascending by bit index."""
    if mask < 0 or mask >= (1 << MASK_BITS):
        raise UnknownBitError(f"mask {mask:#x} outside the 32-bit space")
    keys = []
    for bit in range(MASK_BITS):
        pe_id = 1 << bit
        if mask & pe_id:
            key = options.pe_directory.get(pe_id)
            if key is None:
                raise UnknownBitError(f"bit {bit} of mask {mask:#x} has no directory entry")
            keys.append(key)
    return keys
