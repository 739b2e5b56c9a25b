"""Command line interface.

Exit codes: 0 success, 1 domain error (message on stderr names the
offending node or key when known), 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys
from importlib import resources

from . import api
from .errors import FtcadError
from .reliability import DEFAULT_T_REF

DEFAULT_PORT = 8780

EXAMPLE_FILES = (
    "serial.json",
    "parallel2.json",
    "triple.json",
    "abs.json",
    "abs_fig37_scenario.json",
)


def example_path(name: str):
    """Filesystem path of a bundled example document."""
    return resources.files("ftcad.data") / name


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def cmd_validate(args) -> int:
    report = api.validate_document(_read(args.graph))
    sys.stdout.write(api.render_report(report))
    return 0 if not report else 1


def cmd_pipelines(args) -> int:
    graph, pipelines = api.document_pipelines(_read(args.graph))
    sys.stdout.write(api.render_pipelines(graph, pipelines))
    return 0


def cmd_rank(args) -> int:
    graph, ranked = api.document_ranking(_read(args.graph), args.t_ref)
    rows = api.ranking_rows(graph, ranked)
    sys.stdout.write(api.render_ranking(rows, args.t_ref))
    return 0


def cmd_curve(args) -> int:
    csv_text = api.document_curves_csv(_read(args.graph), args.t_max, args.samples, args.t_ref)
    _write_out(csv_text, args.output)
    return 0


def cmd_export(args) -> int:
    document = api.export_options_document(
        _read(args.graph), args.t_ref, paper_compat=args.paper_compat
    )
    _write_out(document, args.output)
    return 0


def cmd_simulate(args) -> int:
    scenario = api.scenario_from_json(_read(args.scenario))
    options_text = _read(args.options) if args.options else None
    simulator = api.build_simulator(
        _read(args.graph),
        scenario=scenario,
        options_text=options_text,
        t_ref=args.t_ref,
        seed=args.seed,
    )
    simulator.run()
    _write_out(api.trace_jsonl(simulator), args.output)
    if args.bus_log:
        with open(args.bus_log, "w", encoding="utf-8", newline="") as handle:
            handle.write(simulator.bus.log_csv())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_examples(args) -> int:
    """Copy the bundled example documents into a directory."""
    os.makedirs(args.directory, exist_ok=True)
    for name in EXAMPLE_FILES:
        with resources.as_file(example_path(name)) as src:
            shutil.copy(src, os.path.join(args.directory, name))
        print(os.path.join(args.directory, name))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftcad",
        description="Dependency-graph reliability analysis and reconfiguration simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph(p):
        p.add_argument("graph", help="graph document (.json)")

    def add_t_ref(p):
        p.add_argument("--t-ref", type=float, default=DEFAULT_T_REF, help="ranking reference time in hours")

    p = sub.add_parser("validate", help="check a graph document and print the violation report")
    add_graph(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pipelines", help="list every extracted pipeline sequence")
    add_graph(p)
    p.set_defaults(func=cmd_pipelines)

    p = sub.add_parser("rank", help="rank pipelines by reliability at the reference time")
    add_graph(p)
    add_t_ref(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("curve", help="write reliability curves as CSV")
    add_graph(p)
    add_t_ref(p)
    p.add_argument("--t-max", type=float, default=200_000.0, help="curve window in hours")
    p.add_argument("--samples", type=int, default=101, help="sample count (>= 2)")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("export", help="export the ranked strategy options document")
    add_graph(p)
    add_t_ref(p)
    p.add_argument("--paper-compat", action="store_true", help="emit the legacy brace-wrapped literal form")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("simulate", help="run a fault scenario and write the trace (JSON lines)")
    add_graph(p)
    add_t_ref(p)
    p.add_argument("--scenario", required=True, help="scenario file (.json)")
    p.add_argument("--options", default=None, help="strategy options file (default: derive from the graph)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.add_argument("--bus-log", default=None, help="also write the delivered-frame log as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("FTCAD_PORT", DEFAULT_PORT)),
        help=f"port (default {DEFAULT_PORT}, or FTCAD_PORT)",
    )
    p.add_argument("--static-dir", default=None, help="directory of static UI assets to serve at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("examples", help="copy the bundled example documents into a directory")
    p.add_argument("directory")
    p.set_defaults(func=cmd_examples)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FtcadError as exc:
        where = f" ({exc.key})" if getattr(exc, "key", None) else ""
        print(f"ftcad: error: {exc}{where}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"ftcad: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
