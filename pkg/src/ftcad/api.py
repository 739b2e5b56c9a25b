"""Shared operations layer.

The CLI and the HTTP service both route through these functions so the
two surfaces produce byte-identical artifacts for identical inputs.
Functions take document text in and hand structured results plus
rendering helpers back.
"""

from __future__ import annotations

import json

from . import io
from .model import DependencyGraph, Violation, normalize_graph, validate_graph
from .pipelines import Pipeline, extract_pipelines
from .reliability import (
    DEFAULT_T_REF,
    RankedPipeline,
    curves_to_csv,
    mttf,
    rank_pipelines,
    sample_curve,
)
from .errors import MissingIdError
from .simulation import Scenario, Simulator
from .strategy import ReliabilityOptions, build_options, pe_directory, pipeline_mask


def load_graph(text: str) -> DependencyGraph:
    return io.parse_graph_document(text)


def load_normalized(text: str) -> DependencyGraph:
    return normalize_graph(io.parse_graph_document(text))


def validate_document(text: str) -> list[Violation]:
    return validate_graph(load_graph(text))


def render_report(report: list[Violation]) -> str:
    if not report:
        return "0 violations\n"
    lines = [f"{len(report)} violations"]
    lines.extend(str(v) for v in report)
    return "\n".join(lines) + "\n"


def document_pipelines(text: str) -> tuple[DependencyGraph, list[Pipeline]]:
    graph = load_normalized(text)
    return graph, extract_pipelines(graph)


def _display_name(graph: DependencyGraph, key: str) -> str:
    return graph.nodes[key].name or key


def render_pipelines(graph: DependencyGraph, pipelines: list[Pipeline]) -> str:
    """Fig.-19-style listing: one numbered sequence of member names per
    pipeline."""
    lines = [f"{len(pipelines)} pipelines"]
    for pipeline in pipelines:
        names = ", ".join(_display_name(graph, k) for k in pipeline.sequence)
        lines.append(f"{pipeline.index + 1}: ({names})")
    return "\n".join(lines) + "\n"


def document_ranking(
    text: str, t_ref: float = DEFAULT_T_REF
) -> tuple[DependencyGraph, list[RankedPipeline]]:
    graph, pipelines = document_pipelines(text)
    return graph, rank_pipelines(graph, pipelines, t_ref)


def ranking_rows(graph: DependencyGraph, ranked: list[RankedPipeline]) -> list[dict]:
    rows = []
    for entry in ranked:
        try:
            mask = pipeline_mask(graph, entry.pipeline)
        except MissingIdError:
            mask = None
        rows.append(
            {
                "rank": entry.rank,
                "pipeline_index": entry.pipeline.index,
                "mask": mask,
                "mask_hex": f"0x{mask:X}" if mask is not None else None,
                "total_lambda": entry.total_lambda,
                "static_factor": entry.static_factor,
                "r_at_ref": entry.r_at_ref,
                "mttf_hours": mttf(entry.total_lambda) if entry.total_lambda > 0 else None,
                "sequence": list(entry.pipeline.sequence),
                "members": sorted(entry.pipeline.members),
                "sink": entry.pipeline.sink,
            }
        )
    return rows


def render_ranking(rows: list[dict], t_ref: float) -> str:
    header = f"{'rank':>4}  {'mask':>10}  {'mask_dec':>8}  {'sum_lambda':>10}  {'R(t_ref)':>12}  {'MTTF_hours':>12}"
    lines = [f"t_ref = {t_ref} hours", header]
    for row in rows:
        mask_hex = row["mask_hex"] if row["mask_hex"] is not None else "-"
        mask_dec = row["mask"] if row["mask"] is not None else "-"
        mttf_hours = f"{row['mttf_hours']:.1f}" if row["mttf_hours"] is not None else "-"
        lines.append(
            f"{row['rank']:>4}  {mask_hex:>10}  {mask_dec!s:>8}  {row['total_lambda']:>10.6g}  "
            f"{row['r_at_ref']:>12.9f}  {mttf_hours:>12}"
        )
    return "\n".join(lines) + "\n"


def document_curves_csv(
    text: str,
    t_max: float,
    n: int,
    t_ref: float = DEFAULT_T_REF,
) -> str:
    """One time column plus one column per ranked pipeline; column names
    carry the rank and the pipeline's option mask."""
    graph, ranked = document_ranking(text, t_ref)
    curves = []
    names = []
    for entry in ranked:
        curves.append(sample_curve(graph, entry.pipeline, t_max, n))
        try:
            mask = pipeline_mask(graph, entry.pipeline)
            names.append(f"r_pipeline_{entry.rank}_0x{mask:X}")
        except MissingIdError:
            names.append(f"r_pipeline_{entry.rank}")
    return curves_to_csv(curves, names)


def export_options_document(
    text: str, t_ref: float = DEFAULT_T_REF, paper_compat: bool = False
) -> str:
    graph = load_normalized(text)
    options = build_options(graph, t_ref)
    return io.serialize_options_document(options.options, paper_compat=paper_compat)


def build_simulator(
    graph_text: str,
    scenario: Scenario | None = None,
    options_text: str | None = None,
    t_ref: float = DEFAULT_T_REF,
    seed: int = 0,
    duration: int | None = None,
) -> Simulator:
    """Assemble a simulator from document text.

    The strategy defaults to the graph's own ranked export; passing
    ``options_text`` instead imports a strategy file the way the runtime
    manager would. Without a scenario an open-ended interactive session
    is created (duration counts ticks; faults come from ``inject``).
    """
    graph = load_normalized(graph_text)
    if options_text is not None:
        masks = io.parse_options_document(options_text)
        options = ReliabilityOptions(
            options=tuple(masks), pe_directory=pe_directory(graph), t_ref=t_ref
        )
    else:
        options = build_options(graph, t_ref)
    if scenario is None:
        scenario = Scenario(duration=duration if duration is not None else 10**9)
    return Simulator(graph, options, scenario, seed=seed)


def scenario_from_json(text: str) -> Scenario:
    return Scenario.from_json(text)


def trace_jsonl(simulator: Simulator) -> str:
    return simulator.trace.to_jsonl()


def graph_summary(text: str) -> dict:
    """Small structural digest used by the service and the UI."""
    graph = load_graph(text)
    report = validate_graph(graph)
    return {
        "nodes": len(graph.nodes),
        "links": len(graph.links),
        "violations": [
            {"rule": v.rule, "key": v.key, "message": v.message} for v in report
        ],
        "valid": not report,
    }


def pipelines_payload(text: str) -> dict:
    graph, pipelines = document_pipelines(text)
    return {
        "pipelines": [
            {
                "index": p.index,
                "sink": p.sink,
                "members": sorted(p.members),
                "sequence": list(p.sequence),
                "names": [_display_name(graph, k) for k in p.sequence],
            }
            for p in pipelines
        ]
    }


def ranking_payload(text: str, t_ref: float = DEFAULT_T_REF) -> dict:
    graph, ranked = document_ranking(text, t_ref)
    return {"t_ref": t_ref, "ranking": ranking_rows(graph, ranked)}


def export_payload(text: str, t_ref: float = DEFAULT_T_REF) -> dict:
    graph = load_normalized(text)
    options = build_options(graph, t_ref)
    return {
        "t_ref": t_ref,
        "options": list(options.options),
        "options_hex": [f"0x{m:X}" for m in options.options],
        "pe_directory": {f"0x{pe_id:X}": key for pe_id, key in sorted(options.pe_directory.items())},
        "document": io.serialize_options_document(options.options),
        "document_paper_compat": io.serialize_options_document(options.options, paper_compat=True),
    }


def scenario_to_dict(scenario: Scenario) -> dict:
    return json.loads(scenario.to_json())
