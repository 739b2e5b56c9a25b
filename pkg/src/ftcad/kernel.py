"""Kernel backend selection.

The compiled extension is used when it was built and the program fits its
64-slot mask width; otherwise the pure Python twin takes over. Set
``FTCAD_PURE_KERNEL=1`` to force the fallback (used by the benchmark and
by cross-checking tests).
"""

from __future__ import annotations

import os

from . import _kernel_py
from .structure import StructureProgram

try:  # pragma: no cover - depends on whether the extension was built
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

if os.environ.get("FTCAD_PURE_KERNEL"):
    _compiled = None

BACKEND = "compiled" if _compiled is not None else _kernel_py.BACKEND

_COMPILED_MAX_SLOTS = 64


def evaluate(program: StructureProgram, alive_mask: int, sink_op: int) -> bool:
    if _compiled is not None and program.n_components <= _COMPILED_MAX_SLOTS:
        return _compiled.evaluate(
            program.op_kind,
            program.op_k,
            program.op_comp,
            program.op_in_ptr,
            program.op_inputs,
            alive_mask,
            sink_op,
        )
    return _kernel_py.evaluate(program, alive_mask, sink_op)


def exact_reliability(program, sink_op, failable_slots, probs) -> float:
    if _compiled is not None and program.n_components <= _COMPILED_MAX_SLOTS:
        from array import array

        return _compiled.exact_reliability(
            program.op_kind,
            program.op_k,
            program.op_comp,
            program.op_in_ptr,
            program.op_inputs,
            sink_op,
            array("i", failable_slots),
            array("d", probs),
            program.all_alive_mask(),
        )
    return _kernel_py.exact_reliability(program, sink_op, list(failable_slots), list(probs))
