"""Exponential reliability mathematics.

Units throughout the toolkit:

* failure rates (lambda): failures per million hours,
* time: hours,
* reliability: dimensionless survival probability in [0, 1].

A component survives as R(t) = exp(-(lambda/1e6) * t); static reliability
factors multiply into that term. Serial chains add their rates, parallel
alternatives multiply their unreliabilities. The exact system-level value
for pipelines that share nodes comes from the 2^n structure-function
enumeration, since the parallel formula assumes independence that shared
nodes break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernel
from .errors import ConfigError, DomainError, TooLargeError
from .model import DependencyGraph, node_lambda, node_static_rel
from .pipelines import Pipeline
from .structure import compile_structure

#: rates are stored per million hours
RATE_SCALE = 1e6

#: default reference time for ranking: 40,000 hours
DEFAULT_T_REF = 40_000.0

#: the exact enumerator refuses beyond 2^20 component states
EXACT_COMPONENT_LIMIT = 20


@dataclass(frozen=True)
class ReliabilityCurve:
    """Evenly sampled R(t) for one pipeline, t ascending from 0."""

    pipeline_index: int
    samples: tuple[tuple[float, float], ...]
    t_max: float

    @property
    def sample_count(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class RankedPipeline:
    """A pipeline with its reliability figures at the reference time.
    Rank 1 is the most reliable; ties keep discovery order."""

    pipeline: Pipeline
    total_lambda: float
    static_factor: float
    r_at_ref: float
    rank: int


def component_reliability(lam: float, t: float) -> float:
    """R(t) = exp(-(lam/1e6) * t) for a constant-hazard component."""
    if lam < 0 or t < 0:
        raise DomainError(f"negative rate or time (lambda={lam}, t={t})")
    return math.exp(-(lam / RATE_SCALE) * t)


def unreliability(r: float) -> float:
    """Q = 1 - R."""
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"reliability {r} outside [0, 1]")
    return 1.0 - r


def mttf(lam: float) -> float:
    """Mean time to failure in hours: 1e6 / lambda."""
    if lam <= 0:
        raise DomainError(f"MTTF undefined for lambda={lam}")
    return RATE_SCALE / lam


def series_lambda(lambdas) -> float:
    """Cumulative rate of a serial chain (plain sum)."""
    total = 0.0
    for lam in lambdas:
        if lam < 0:
            raise DomainError(f"negative rate {lam}")
        total += lam
    return total


def series_reliability(lambdas, t: float) -> float:
    """Serial chain survival: exp of the summed exponent, which equals the
    product of the component reliabilities."""
    if t < 0:
        raise DomainError(f"negative time {t}")
    return math.exp(-(series_lambda(lambdas) / RATE_SCALE) * t)


def parallel_reliability(rs) -> float:
    """1 - product of unreliabilities; assumes independent alternatives."""
    rs = list(rs)
    if not rs:
        raise DomainError("parallel composition of zero branches")
    q = 1.0
    for r in rs:
        q *= unreliability(r)
    return 1.0 - q


def pipeline_lambda(graph: DependencyGraph, pipeline: Pipeline) -> float:
    """Summed failure rate of the pipeline members (serial composition)."""
    return series_lambda(node_lambda(graph.nodes[k]) for k in pipeline.members)


def pipeline_static_factor(graph: DependencyGraph, pipeline: Pipeline) -> float:
    product = 1.0
    for key in pipeline.members:
        product *= node_static_rel(graph.nodes[key])
    return product


def pipeline_reliability(graph: DependencyGraph, pipeline: Pipeline, t: float) -> float:
    """Static factors multiplied into the serial exponential survival of
    every member; members without attributes contribute nothing."""
    return pipeline_static_factor(graph, pipeline) * series_reliability(
        (node_lambda(graph.nodes[k]) for k in pipeline.members), t
    )


def rank_pipelines(
    graph: DependencyGraph, pipelines, t_ref: float = DEFAULT_T_REF
) -> list[RankedPipeline]:
    """Stable descending sort by reliability at ``t_ref``; equal values
    keep discovery order, so the first-found pipeline wins ties."""
    if t_ref <= 0:
        raise DomainError(f"t_ref must be positive, got {t_ref}")
    rows = []
    for pipeline in pipelines:
        rows.append(
            (
                pipeline_reliability(graph, pipeline, t_ref),
                pipeline_lambda(graph, pipeline),
                pipeline_static_factor(graph, pipeline),
                pipeline,
            )
        )
    rows.sort(key=lambda row: -row[0])
    return [
        RankedPipeline(
            pipeline=pipeline,
            total_lambda=lam,
            static_factor=static,
            r_at_ref=r,
            rank=rank,
        )
        for rank, (r, lam, static, pipeline) in enumerate(rows, start=1)
    ]


def sample_curve(
    graph: DependencyGraph, pipeline: Pipeline, t_max: float, n: int
) -> ReliabilityCurve:
    """n evenly spaced samples of the pipeline reliability on [0, t_max]."""
    if t_max <= 0:
        raise DomainError(f"t_max must be positive, got {t_max}")
    if n < 2:
        raise DomainError(f"need at least 2 samples, got {n}")
    step = t_max / (n - 1)
    samples = []
    for i in range(n):
        t = t_max if i == n - 1 else i * step
        samples.append((t, pipeline_reliability(graph, pipeline, t)))
    return ReliabilityCurve(pipeline_index=pipeline.index, samples=tuple(samples), t_max=t_max)


def _member_reliability(graph: DependencyGraph, key: str, t: float) -> float:
    node = graph.nodes[key]
    return node_static_rel(node) * component_reliability(node_lambda(node), t)


def system_reliability_exact(
    graph: DependencyGraph, pipelines, t: float
) -> float:
    """Exact system reliability by enumerating component states.

    Sums the probability of every up/down state of the attribute-bearing
    members (everything else is pinned up) in which the sink is still
    operational. Exact under component independence, and in particular
    correct when pipelines share nodes, where the parallel formula is not.
    """
    pipelines = list(pipelines)
    if not pipelines:
        raise DomainError("no pipelines given")
    sinks = {p.sink for p in pipelines}
    if len(sinks) != 1:
        raise ConfigError(f"pipelines target different sinks: {sorted(sinks)}")
    if t < 0:
        raise DomainError(f"negative time {t}")
    sink = pipelines[0].sink

    members = set().union(*(p.members for p in pipelines))
    failable = sorted(k for k in members if graph.nodes[k].attrs is not None)
    if len(failable) > EXACT_COMPONENT_LIMIT:
        raise TooLargeError(
            f"{len(failable)} components exceed the 2^{EXACT_COMPONENT_LIMIT} state limit"
        )

    program = compile_structure(graph)
    slots = [program.comp_slot[k] for k in failable]
    probs = [_member_reliability(graph, k, t) for k in failable]
    return kernel.exact_reliability(program, program.op_index[sink], slots, probs)


@dataclass(frozen=True)
class SystemReliabilitySummary:
    """Exact value next to the naive parallel composition.

    When pipelines share nodes the parallel formula double-counts their
    joint survival; ``node_disjoint`` says whether its independence
    premise held and ``divergence`` how far the two values sit apart.
    """

    exact: float
    parallel_composition: float
    node_disjoint: bool
    divergence: float


def system_reliability_summary(
    graph: DependencyGraph, pipelines, t: float
) -> SystemReliabilitySummary:
    pipelines = list(pipelines)
    exact = system_reliability_exact(graph, pipelines, t)
    naive = parallel_reliability(pipeline_reliability(graph, p, t) for p in pipelines)
    shared = set()
    disjoint = True
    seen: set[str] = set()
    for pipeline in pipelines:
        failing = {k for k in pipeline.members if graph.nodes[k].attrs is not None}
        if seen & failing:
            disjoint = False
            shared |= seen & failing
        seen |= failing
    return SystemReliabilitySummary(
        exact=exact,
        parallel_composition=naive,
        node_disjoint=disjoint,
        divergence=abs(exact - naive),
    )


def curves_to_csv(curves, column_names=None) -> str:
    """CSV with one ``t_hours`` column plus one reliability column per
    curve. Column names default to ``r_pipeline_<index>``."""
    curves = list(curves)
    if not curves:
        raise DomainError("no curves to export")
    grid = [t for t, _ in curves[0].samples]
    for curve in curves:
        if [t for t, _ in curve.samples] != grid:
            raise DomainError("curves sampled on different time grids")
    if column_names is None:
        column_names = [f"r_pipeline_{c.pipeline_index}" for c in curves]
    lines = ["t_hours," + ",".join(column_names)]
    for i, t in enumerate(grid):
        row = [repr(float(t))] + [repr(curve.samples[i][1]) for curve in curves]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
