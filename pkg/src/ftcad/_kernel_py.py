"""Pure Python structure-function kernel.

Reference implementation of the hot loops; the compiled extension in
``_kernel.pyx`` mirrors these semantics exactly and is cross-checked
against this module in the test suite. Evaluation here accepts alive
masks of any width (Python ints), the compiled twin is limited to 64
component slots.
"""

from __future__ import annotations

from .structure import KIND_AND, KIND_MEMBER, KIND_OR_K, KIND_START, StructureProgram

BACKEND = "pure-python"


def evaluate(program: StructureProgram, alive_mask: int, sink_op: int) -> bool:
    """Evaluate the program for one up/down state; truth at ``sink_op``."""
    op_kind = program.op_kind
    op_k = program.op_k
    op_comp = program.op_comp
    op_in_ptr = program.op_in_ptr
    op_inputs = program.op_inputs
    values = [0] * len(op_kind)
    for i in range(len(op_kind)):
        kind = op_kind[i]
        lo, hi = op_in_ptr[i], op_in_ptr[i + 1]
        if kind == KIND_START:
            v = 1
        elif kind == KIND_MEMBER:
            v = (alive_mask >> op_comp[i]) & 1
            for j in range(lo, hi):
                if not v:
                    break
                v = values[op_inputs[j]]
        elif kind == KIND_AND:
            v = 1
            for j in range(lo, hi):
                if not values[op_inputs[j]]:
                    v = 0
                    break
        else:  # KIND_OR_K
            need = op_k[i]
            v = 0
            for j in range(lo, hi):
                need -= values[op_inputs[j]]
                if need <= 0:
                    v = 1
                    break
        values[i] = v
    return bool(values[sink_op])


def exact_reliability(
    program: StructureProgram,
    sink_op: int,
    failable_slots: list[int],
    probs: list[float],
) -> float:
    """Sum state probabilities over every operational up/down state.

    ``failable_slots[i]`` is the component slot toggled by state bit i and
    ``probs[i]`` its survival probability; all other slots are pinned up.
    Exact under component independence. Compensated (Kahan) accumulation
    keeps the sum independent of enumeration order.
    """
    n = len(failable_slots)
    base = program.all_alive_mask()
    for slot in failable_slots:
        base &= ~(1 << slot)

    total = 0.0
    carry = 0.0
    for state in range(1 << n):
        alive = base
        p = 1.0
        for i in range(n):
            if (state >> i) & 1:
                alive |= 1 << failable_slots[i]
                p *= probs[i]
            else:
                p *= 1.0 - probs[i]
        if evaluate(program, alive, sink_op):
            y = p - carry
            t = total + y
            carry = (t - total) - y
            total = t
    return total
