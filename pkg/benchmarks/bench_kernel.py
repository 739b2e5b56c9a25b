"""Benchmark: compiled structure-function kernel vs the pure Python twin.

The hot loop is the exact system-reliability enumeration (2^n component
states, each evaluating the full gate program). Usage:

    python benchmarks/bench_kernel.py [--components N] [--repeat R]
"""

import argparse
import math
import time

from ftcad import _kernel_py
from ftcad.model import DependencyGraph, Link, Node, NodeKind, ReliabilityAttrs, normalize_graph
from ftcad.structure import compile_structure

try:
    from array import array

    from ftcad import _kernel as compiled
except ImportError:
    compiled = None


def ladder_graph(n_components: int) -> DependencyGraph:
    """Alternating two-branch redundancy: n/2 stages of (a | b), serially
    chained into one actuator. Dense enough that states flip the outcome."""
    attrs = ReliabilityAttrs(lambda_hw=2.0)
    nodes, links = [], []
    prev = None
    stage = 0
    remaining = n_components
    bit = 1
    while remaining > 0:
        take = min(2, remaining)
        keys = []
        for i in range(take):
            key = f"s{stage}_{i}"
            nodes.append(
                Node(key=key, kind=NodeKind.PROCESSING_ELEMENT, name=key, attrs=attrs, pe_id=bit)
            )
            bit <<= 1
            keys.append(key)
            if prev is not None:
                links.append(Link(prev, key))
        remaining -= take
        if take == 2:
            gate = f"g{stage}"
            nodes.append(Node(key=gate, kind=NodeKind.GATE_OR, name=gate, gate_k=1))
            links.extend(Link(k, gate) for k in keys)
            prev = gate
        else:
            prev = keys[0]
        stage += 1
    nodes.append(Node(key="act", kind=NodeKind.ACTUATOR, name="act"))
    links.append(Link(prev, "act"))
    return normalize_graph(DependencyGraph(nodes, links))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--components", type=int, default=16)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    graph = ladder_graph(args.components)
    program = compile_structure(graph)
    sink_op = program.op_index["act"]
    failable = [program.comp_slot[k] for k, n in graph.nodes.items() if n.attrs is not None]
    probs = [math.exp(-0.08)] * len(failable)
    states = 1 << len(failable)
    print(f"{len(failable)} components, {states} states, {len(program.op_kind)} ops")

    def bench(label, fn):
        best = min(timed(fn) for _ in range(args.repeat))
        rate = states / best
        print(f"  {label:<12} {best:8.3f} s   {rate:12.0f} states/s")
        return best

    def timed(fn):
        start = time.perf_counter()
        fn()
        return time.perf_counter() - start

    results = {}

    def run_pure():
        results["pure"] = _kernel_py.exact_reliability(program, sink_op, failable, probs)

    pure_time = bench("pure-python", run_pure)

    if compiled is None:
        print("  compiled     (extension not built)")
        return

    def run_compiled():
        results["compiled"] = compiled.exact_reliability(
            program.op_kind, program.op_k, program.op_comp,
            program.op_in_ptr, program.op_inputs, sink_op,
            array("i", failable), array("d", probs), program.all_alive_mask(),
        )

    fast_time = bench("compiled", run_compiled)
    drift = abs(results["pure"] - results["compiled"])
    print(f"  agreement    |delta| = {drift:.3e}")
    print(f"  speedup      {pure_time / fast_time:.1f}x")


if __name__ == "__main__":
    main()
