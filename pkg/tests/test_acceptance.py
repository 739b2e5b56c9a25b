"""Acceptance suite.

One test per acceptance criterion; each prints a [PASS]/[FAIL] line with
its number so the whole gate is readable from the pytest -s output.
Tolerances are pinned here and nowhere else.

Criterion 7c (the bundled degradation scenario replaying the published
path walk 1-2-3-1-3-4) is asserted exactly as stated. It cannot hold
against the published strategy masks: those mask sums are pairwise
nested (2211 is a subset of 3003, 2360 of 2876 and of 3003), and under
first-covered-option selection a nested option below its superset can
never win, so at most three of the four list positions are reachable,
while the walk needs all four. The check is kept faithful and red; see
the failure message.
"""

import itertools
import json
import math
import random
import time

import mpmath
import pytest

from conftest import oracle_minimal_sets, oracle_operational, random_document, random_sp_graph
from ftcad import api
from ftcad.bus import ABS_IDENTIFIERS, ADDRESS_MAP, CanFrame, arbitrate, classify_address, direction_consistent
from ftcad.io import (
    parse_graph_document,
    parse_options_document,
    serialize_graph_document,
    serialize_options_document,
)
from ftcad.model import NodeKind, normalize_graph
from ftcad.pipelines import Pipeline, extract_pipelines
from ftcad.reliability import (
    component_reliability,
    parallel_reliability,
    pipeline_reliability,
    rank_pipelines,
    series_reliability,
    system_reliability_exact,
    system_reliability_summary,
    unreliability,
)
from ftcad.simulation import Scenario, ScenarioEvent, StatusChanged, run_simulation
from ftcad.strategy import build_options, pipeline_mask

mpmath.mp.dps = 40

REL_TOL = 1e-12


def verdict(number: int, label: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] criterion {number}: {label}{suffix}")
    assert ok, f"criterion {number}: {label}{suffix}"


def hp(x) -> float:
    return float(mpmath.exp(mpmath.mpf(x)))


def load(bundled, name):
    return normalize_graph(parse_graph_document(bundled[name]))


def test_criterion_1_triple_voter_export(bundled):
    started = time.perf_counter()
    graph = load(bundled, "triple.json")
    options = build_options(graph)
    document = serialize_options_document(options.options, paper_compat=True)
    elapsed = time.perf_counter() - started
    verdict(
        1,
        "triple-voter strategy export",
        list(options.options) == [9, 10, 12]
        and document.encode() == b"{[9, 10, 12]}"
        and elapsed < 1.0,
        f"options={list(options.options)} bytes={document!r} in {elapsed:.3f}s",
    )


def test_criterion_2_membership_sums(bundled):
    memberships = {
        2211: [0, 1, 5, 7, 11],
        3003: [0, 1, 3, 4, 5, 7, 8, 9, 11],
        2876: [2, 3, 4, 5, 8, 9, 11],
        2360: [3, 4, 5, 8, 11],
    }
    hexes = {2211: 0x8A3, 3003: 0xBBB, 2876: 0xB3C, 2360: 0x938}
    # a synthetic carrier graph over twelve one-hot ids
    from conftest import mk_node
    from ftcad.model import DependencyGraph, Link

    nodes = [mk_node(f"pe{b}", NodeKind.PROCESSING_ELEMENT, pe_id=1 << b) for b in range(12)]
    nodes += [mk_node("s", NodeKind.SENSOR), mk_node("act", NodeKind.ACTUATOR)]
    links = [Link("s", "pe0")] + [Link(f"pe{b}", f"pe{b+1}") for b in range(11)] + [Link("pe11", "act")]
    graph = DependencyGraph(nodes, links)
    ok = True
    for expected, bits in memberships.items():
        members = frozenset({f"pe{b}" for b in bits} | {"act"})
        pipeline = Pipeline(sink="act", members=members, sequence=tuple(sorted(members)), index=0)
        mask = pipeline_mask(graph, pipeline)
        ok = ok and mask == expected == hexes[expected] and mask == sum(1 << b for b in bits)
    # the bundled reconstruction reproduces the same four sums
    abs_graph = load(bundled, "abs.json")
    masks = {pipeline_mask(abs_graph, p) for p in extract_pipelines(abs_graph)}
    ok = ok and masks == set(memberships)
    verdict(2, "published membership sums 2211/3003/2876/2360", ok, f"bundled masks={sorted(masks)}")


def test_criterion_3_controller_scenario(bundled):
    from ftcad.simulation import manager_select

    options = [0x09, 0x0A, 0x0C]
    unit_ok = manager_select(0x0F, options) == 0 and manager_select(0x0C, options) == 2

    graph = load(bundled, "triple.json")
    built = build_options(graph)
    scenario = Scenario(
        duration=260,
        events=(
            ScenarioEvent(tick=100, node="Door1Drv", action="fail"),
            ScenarioEvent(tick=140, node="Door2Drv", action="fail"),
        ),
    )
    trace = run_simulation(graph, built, scenario)
    statuses = [r.new for r in trace.records if isinstance(r, StatusChanged)]
    run_ok = (
        list(built.options) == options
        and trace.active_sequence() == [0, 1, 2]
        and statuses[-1] == 0x0C
        and trace.selections()[-1].mask == 0x0C
    )
    verdict(
        3,
        "controller selects 0x09 on 0x0F and 0x0C after zero hellos",
        unit_ok and run_ok,
        f"active sequence {trace.active_sequence()}, final status 0x{statuses[-1]:X}",
    )


def test_criterion_4_reliability_math(bundled):
    rng = random.Random(40)
    ok = True
    # exponential-of-sum vs product of exponentials
    for _ in range(10_000):
        lambdas = [rng.uniform(0, 10) for _ in range(rng.randint(1, 10))]
        t = rng.uniform(0, 2e5)
        product = 1.0
        for lam in lambdas:
            product *= component_reliability(lam, t)
        ok = ok and math.isclose(series_reliability(lambdas, t), product, rel_tol=REL_TOL)
    # complement/product identities for parallel composition
    for _ in range(10_000):
        rs = [rng.random() for _ in range(rng.randint(1, 8))]
        q = 1.0
        for r in rs:
            q *= unreliability(r)
        ok = ok and math.isclose(parallel_reliability(rs), 1.0 - q, rel_tol=REL_TOL, abs_tol=1e-15)
    # the two reference exponentials against a 40-digit oracle
    ok = ok and math.isclose(component_reliability(1, 40_000), hp("-0.04"), rel_tol=REL_TOL)
    ok = ok and math.isclose(series_reliability([1] * 14, 40_000), hp("-0.56"), rel_tol=REL_TOL)
    # chart-read substitute: first path of the bundled reconstruction
    graph = load(bundled, "abs.json")
    first = extract_pipelines(graph)[0]
    n1 = len(first.members)
    r1 = pipeline_reliability(graph, first, 40_000)
    ok = ok and math.isclose(r1, math.exp(-0.04 * n1), rel_tol=REL_TOL)
    ok = ok and 0.40 <= r1 <= 0.65
    verdict(4, "exponential identities and reference points", ok, f"n1={n1}, R1(40kh)={r1:.6f}")


def test_criterion_5_structure_function_oracle(bundled):
    started = time.perf_counter()
    ok = True
    details = []
    for name in ("serial.json", "parallel2.json", "triple.json", "abs.json"):
        graph = load(bundled, name)
        attr_bearing = [k for k, n in graph.nodes.items() if n.attrs is not None]
        if len(attr_bearing) > 12:
            continue  # oracle scope: small bundled examples
        pipelines = extract_pipelines(graph)
        sink = pipelines[0].sink
        extracted = {p.members for p in pipelines}
        minimal = oracle_minimal_sets(graph, attr_bearing, sink)
        ok = ok and extracted == minimal
        # exact system reliability against a plain-dict 2^n enumeration
        t = 60_000.0
        exact = system_reliability_exact(graph, pipelines, t)
        probs = {
            k: graph.nodes[k].attrs.static_rel * math.exp(-(graph.nodes[k].attrs.lambda_hw or 0.0) / 1e6 * t)
            for k in attr_bearing
        }
        total = 0.0
        for state in itertools.product([0, 1], repeat=len(attr_bearing)):
            alive = {k for k, bit in zip(attr_bearing, state) if bit}
            p = 1.0
            for k, bit in zip(attr_bearing, state):
                p *= probs[k] if bit else 1.0 - probs[k]
            if oracle_operational(graph, alive, sink):
                total += p
        ok = ok and math.isclose(exact, total, rel_tol=REL_TOL)
        details.append(f"{name}:{len(attr_bearing)}c")
    # node-disjoint pipelines reduce to the parallel formula
    from conftest import chain, mk_node
    from ftcad.model import DependencyGraph, Link

    nodes, links = [], []
    for b, pid in ((0, 1), (1, 2)):
        ns, ls, out = chain(f"b{b}", pe_id=pid)
        nodes += ns
        links += ls
        links.append(Link(out, "j"))
    nodes += [mk_node("j", NodeKind.GATE_OR, k=1), mk_node("act", NodeKind.ACTUATOR)]
    links.append(Link("j", "act"))
    disjoint = normalize_graph(DependencyGraph(nodes, links))
    pipelines = extract_pipelines(disjoint)
    summary = system_reliability_summary(disjoint, pipelines, 80_000.0)
    ok = ok and summary.node_disjoint and math.isclose(
        summary.exact, summary.parallel_composition, rel_tol=REL_TOL
    )
    elapsed = time.perf_counter() - started
    ok = ok and elapsed < 30.0
    verdict(5, "brute-force structure-function agreement", ok, f"{', '.join(details)} in {elapsed:.2f}s")


def test_criterion_6_ranking_invariance(bundled):
    rng = random.Random(60)
    ok = True
    for _ in range(100):
        graph = normalize_graph(random_sp_graph(rng, pure_lambda=False))
        pipelines = extract_pipelines(graph)
        reference = [e.pipeline.index for e in rank_pipelines(graph, pipelines, 1.0)]
        for _ in range(10):
            t_ref = rng.uniform(1e-3, 1e6)
            permutation = [e.pipeline.index for e in rank_pipelines(graph, pipelines, t_ref)]
            ok = ok and permutation == reference
    # quadrupling every sensor rate must not reorder the bundled paths
    import dataclasses

    graph = load(bundled, "abs.json")
    pipelines = extract_pipelines(graph)
    base_order = [e.pipeline.index for e in rank_pipelines(graph, pipelines, 40_000)]
    scaled_nodes = []
    for node in graph.nodes.values():
        if node.kind is NodeKind.SENSOR and node.attrs is not None:
            attrs = dataclasses.replace(node.attrs, lambda_hw=(node.attrs.lambda_hw or 0.0) * 4)
            node = dataclasses.replace(node, attrs=attrs)
        scaled_nodes.append(node)
    from ftcad.model import DependencyGraph

    scaled = DependencyGraph(scaled_nodes, graph.links)
    scaled_pipelines = extract_pipelines(scaled)
    scaled_order = [e.pipeline.index for e in rank_pipelines(scaled, scaled_pipelines, 40_000)]
    ok = ok and scaled_order == base_order
    verdict(6, "rank permutation is time-invariant and sensor-scaling stable", ok, f"order={base_order}")


def test_criterion_7a_simulation_determinism(bundled):
    graph = load(bundled, "abs.json")
    options = build_options(graph)
    scenario = Scenario.from_json(bundled["abs_fig37_scenario.json"])
    reference = run_simulation(graph, options, scenario, seed=1).to_jsonl()
    ok = all(
        run_simulation(graph, options, scenario, seed=1).to_jsonl() == reference
        for _ in range(9)
    )
    verdict(7, "7a: ten byte-identical trace runs", ok, f"{len(reference)} trace bytes")


def test_criterion_7b_detection_latency(bundled):
    graph = load(bundled, "triple.json")
    options = build_options(graph)
    pes = ["Door1Drv", "Door2Drv", "Door3Drv", "Voter"]
    bits = {"Door1Drv": 0, "Door2Drv": 1, "Door3Drv": 2, "Voter": 3}
    rng = random.Random(70)
    ok = True
    worst = 0
    for _ in range(50):
        t_h = rng.randint(4, 20)
        t_a = rng.randint(t_h, 3 * t_h)
        fail_tick = rng.randint(2 * t_h, 8 * t_h)
        node = rng.choice(pes)
        scenario = Scenario(
            duration=fail_tick + t_a + t_h + 2,
            hello_period=t_h,
            aging_timeout=t_a,
            events=(ScenarioEvent(tick=fail_tick, node=node, action="fail_silent"),),
        )
        trace = run_simulation(graph, options, scenario)
        cleared = [
            r.tick
            for r in trace.records
            if isinstance(r, StatusChanged)
            and r.tick >= fail_tick
            and not (r.new >> bits[node]) & 1
            and (r.old >> bits[node]) & 1
        ]
        ok = ok and bool(cleared) and cleared[0] - fail_tick <= t_a + t_h
        if cleared:
            worst = max(worst, cleared[0] - fail_tick)
    verdict(7, "7b: fail-silent detection within aging + hello period", ok, f"worst latency {worst} ticks")


def test_criterion_7c_degradation_walk(bundled):
    graph = load(bundled, "abs.json")
    options = build_options(graph)
    scenario = Scenario.from_json(bundled["abs_fig37_scenario.json"])
    trace = run_simulation(graph, options, scenario)
    walk = [None if i is None else i + 1 for i in trace.active_sequence()]
    expected = [1, 2, 3, 1, 3, 4]
    verdict(
        7,
        "7c: bundled degradation scenario walks options 1-2-3-1-3-4",
        walk == expected,
        f"walk={walk}; options={list(options.options)}: positions 3 and 4 hold masks that are "
        "supersets of earlier entries (2360 within 2876/3003, 2211 within 3003), so first-covered "
        "selection can never reach them; the published walk presumes four independently "
        "satisfiable options, which these mask sums do not form",
    )


def test_criterion_8_can_map(bundled):
    ok = True
    # exhaustive partition of the 11-bit space
    for ident in range(2048):
        rows = [row for row in ADDRESS_MAP if ident in row]
        ok = ok and len(rows) == 1 and classify_address(ident) == rows[0]
    # arbitration equals min-id on random contender sets
    rng = random.Random(80)
    for _ in range(10_000):
        ids = rng.sample(range(2048), rng.randint(1, 16))
        ok = ok and arbitrate([CanFrame(can_id=i) for i in ids]).can_id == min(ids)
    # every case-study mnemonic sits in a direction-consistent subrange
    for mnemonic, ident in ABS_IDENTIFIERS.items():
        ok = ok and direction_consistent(mnemonic, ident)
    verdict(8, "address map partition, arbitration, identifier directions", ok)


def test_criterion_9_persistence(bundled):
    ok = True
    for name in ("serial.json", "parallel2.json", "triple.json", "abs.json"):
        graph = parse_graph_document(bundled[name])
        ok = ok and parse_graph_document(serialize_graph_document(graph)) == graph
        once = serialize_graph_document(graph)
        ok = ok and serialize_graph_document(parse_graph_document(once)) == once
    rng = random.Random(90)
    for _ in range(500):
        doc = json.dumps(random_document(rng))
        graph = parse_graph_document(doc)
        text = serialize_graph_document(graph)
        ok = ok and parse_graph_document(text) == graph
        ok = ok and serialize_graph_document(parse_graph_document(text)) == text
    for _ in range(200):
        masks = [rng.randrange(1 << 32) for _ in range(rng.randint(0, 10))]
        for paper_compat in (False, True):
            ok = ok and parse_options_document(serialize_options_document(masks, paper_compat=paper_compat)) == masks
    verdict(9, "round-trip identity for graph and options documents", ok)
