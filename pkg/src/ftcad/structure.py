"""Flat structure-function programs.

Gate logic is evaluated millions of times by the exact reliability
enumerator and by minimality checks, so the normalized graph is compiled
once into a flat, topologically ordered op program over integer arrays.
Both kernels (compiled extension and pure Python) execute this same
program; see :mod:`ftcad.kernel` for backend selection.

Op semantics over boolean input values:

* ``START``   — constant true.
* ``MEMBER``  — a semantic node: its alive bit AND all of its inputs
  (a plain node with several direct inputs needs all of them).
* ``AND``     — all inputs true.
* ``OR_K``    — at least ``k`` inputs true. XOR counts as k=1 for
  operability (exclusivity is routing, enforced by the manager at
  runtime), and DEMUX is k=1 over its single input.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from .errors import CycleError
from .model import DependencyGraph, NodeKind

KIND_START = 0
KIND_MEMBER = 1
KIND_AND = 2
KIND_OR_K = 3


@dataclass(frozen=True)
class StructureProgram:
    """Topologically ordered gate-logic program for one graph."""

    op_kind: array
    op_k: array
    op_comp: array
    op_in_ptr: array
    op_inputs: array
    op_index: dict
    components: tuple
    comp_slot: dict

    @property
    def n_components(self) -> int:
        return len(self.components)

    def all_alive_mask(self) -> int:
        return (1 << len(self.components)) - 1

    def mask_of(self, keys) -> int:
        """Alive mask with exactly the given component keys up."""
        mask = 0
        for key in keys:
            slot = self.comp_slot.get(key)
            if slot is not None:
                mask |= 1 << slot
        return mask


def _topo_order(graph: DependencyGraph) -> list[str]:
    keys = [k for k, n in graph.nodes.items() if n.kind is not NodeKind.COMMENT]
    relevant = set(keys)
    indeg = {k: 0 for k in keys}
    for link in graph.links:
        if link.from_key in relevant and link.to_key in relevant:
            indeg[link.to_key] += 1
    ready = [k for k in keys if indeg[k] == 0]
    order = []
    while ready:
        key = ready.pop(0)
        order.append(key)
        for link in graph.out_links(key):
            child = link.to_key
            if child in indeg:
                indeg[child] -= 1
                if indeg[child] == 0:
                    ready.append(child)
    if len(order) != len(keys):
        raise CycleError("graph contains a cycle")
    return order


def compile_structure(graph: DependencyGraph) -> StructureProgram:
    """Compile a normalized graph. Component slots are assigned to every
    semantic node in document order, so slot indices are stable."""
    order = _topo_order(graph)
    op_index = {key: i for i, key in enumerate(order)}

    components = tuple(k for k in graph.nodes if graph.nodes[k].is_semantic)
    comp_slot = {key: i for i, key in enumerate(components)}

    op_kind = array("b")
    op_k = array("i")
    op_comp = array("i")
    op_in_ptr = array("i", [0])
    op_inputs = array("i")

    for key in order:
        node = graph.nodes[key]
        inputs = [op_index[l.from_key] for l in graph.in_links(key) if l.from_key in op_index]
        if node.kind is NodeKind.START:
            kind, k = KIND_START, 0
        elif node.is_semantic:
            kind, k = KIND_MEMBER, 0
        elif node.kind is NodeKind.GATE_AND or node.kind is NodeKind.END:
            kind, k = KIND_AND, 0
        elif node.kind is NodeKind.GATE_OR:
            kind, k = KIND_OR_K, node.gate_k if node.gate_k is not None else 1
        else:  # XOR, DEMUX
            kind, k = KIND_OR_K, 1
        op_kind.append(kind)
        op_k.append(k)
        op_comp.append(comp_slot.get(key, -1))
        op_inputs.extend(inputs)
        op_in_ptr.append(len(op_inputs))

    return StructureProgram(
        op_kind=op_kind,
        op_k=op_k,
        op_comp=op_comp,
        op_in_ptr=op_in_ptr,
        op_inputs=op_inputs,
        op_index=op_index,
        components=components,
        comp_slot=comp_slot,
    )
