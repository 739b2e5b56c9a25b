"""HTTP service over the same operations layer as the CLI.

Analysis endpoints are stateless and accept a graph document as the raw
request body; responses reuse the module file formats, so artifacts are
byte-identical to the CLI's. Simulation sessions hold a steppable engine
each, are isolated from one another, and serialize their own requests: a
second concurrent request against a busy session is answered with 409.

Errors come back as ``{"code", "message", "key"}`` with 400 for document
syntax/schema problems, 404 for unknown sessions, 409 for busy sessions
and 422 for domain violations.
"""

from __future__ import annotations

import json
import threading
import uuid

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from . import api
from .errors import DocumentSchemaError, DocumentSyntaxError, FtcadError
from .reliability import DEFAULT_T_REF
from .simulation import Scenario, ScenarioEvent


def _error_response(status: int, code: str, message: str, key=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "key": key},
    )


def _map_error(exc: Exception) -> JSONResponse:
    if isinstance(exc, (DocumentSyntaxError, DocumentSchemaError)):
        return _error_response(400, exc.code, str(exc), getattr(exc, "key", None))
    if isinstance(exc, FtcadError):
        return _error_response(422, exc.code, str(exc), getattr(exc, "key", None))
    raise exc


class SimSession:
    """One isolated simulation with a non-blocking request lock."""

    def __init__(self, simulator):
        self.simulator = simulator
        self.lock = threading.Lock()


#: upper bound on ticks per step request (keeps one request from
#: monopolizing a session indefinitely)
MAX_STEP_TICKS = 1_000_000


def _enriched_state(simulator) -> dict:
    state = simulator.state()
    state["pe_directory"] = {
        f"0x{pe_id:X}": key for pe_id, key in sorted(simulator.options.pe_directory.items())
    }
    state["options"] = list(simulator.options.options)
    return state


def _scenario_from_params(params: dict) -> Scenario:
    events = tuple(
        ScenarioEvent(tick=e["tick"], node=e["node"], action=e["action"])
        for e in params.get("events", [])
    )
    return Scenario(
        duration=params.get("duration", 10**9),
        tick_hours=params.get("tick_hours", 1.0),
        hello_period=params.get("hello_period", 10),
        aging_timeout=params.get("aging_timeout", 30),
        events=events,
    )


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="ftcad", docs_url=None, redoc_url=None)
    sessions: dict[str, SimSession] = {}
    registry_lock = threading.Lock()
    app.state.sessions = sessions

    @app.exception_handler(FtcadError)
    async def _handle_ftcad(request: Request, exc: FtcadError):
        return _map_error(exc)

    @app.get("/api/health")
    async def health():
        return {"status": "ok"}

    async def _body_text(request: Request) -> str:
        raw = await request.body()
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"body is not UTF-8: {exc}") from exc

    @app.post("/api/graph/validate")
    async def graph_validate(request: Request):
        return api.graph_summary(await _body_text(request))

    @app.post("/api/graph/pipelines")
    async def graph_pipelines(request: Request):
        return api.pipelines_payload(await _body_text(request))

    @app.post("/api/graph/rank")
    async def graph_rank(request: Request, t_ref: float = DEFAULT_T_REF):
        return api.ranking_payload(await _body_text(request), t_ref)

    @app.post("/api/graph/curves")
    async def graph_curves(
        request: Request,
        t_max: float = 200_000.0,
        n: int = 101,
        t_ref: float = DEFAULT_T_REF,
    ):
        csv_text = api.document_curves_csv(await _body_text(request), t_max, n, t_ref)
        return PlainTextResponse(csv_text, media_type="text/csv")

    @app.post("/api/graph/export")
    async def graph_export(
        request: Request,
        t_ref: float = DEFAULT_T_REF,
        paper_compat: bool = False,
        directory: bool = False,
    ):
        text = await _body_text(request)
        if directory:
            return api.export_payload(text, t_ref)
        document = api.export_options_document(text, t_ref, paper_compat=paper_compat)
        media = "text/plain" if paper_compat else "application/json"
        return PlainTextResponse(document, media_type=media)

    # -- simulation sessions -------------------------------------------------

    def _session(session_id: str) -> SimSession:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise LookupError(session_id)
        return session

    def _locked(session: SimSession):
        if not session.lock.acquire(blocking=False):
            return None
        return session.lock

    @app.post("/api/sim")
    async def sim_create(request: Request):
        body = await _body_text(request)
        try:
            params = json.loads(body)
        except json.JSONDecodeError as exc:
            raise DocumentSyntaxError(f"malformed JSON body at offset {exc.pos}", offset=exc.pos)
        if not isinstance(params, dict) or "graph" not in params:
            raise DocumentSchemaError('session body needs a "graph" document')
        graph = params["graph"]
        graph_text = graph if isinstance(graph, str) else json.dumps(graph)
        scenario = _scenario_from_params(params.get("scenario", {}))
        options_value = params.get("options")
        options_text = None
        if options_value is not None:
            options_text = (
                options_value
                if isinstance(options_value, str)
                else json.dumps({"options": options_value})
            )
        simulator = api.build_simulator(
            graph_text,
            scenario=scenario,
            options_text=options_text,
            t_ref=params.get("t_ref", DEFAULT_T_REF),
            seed=params.get("seed", 0),
        )
        session_id = uuid.uuid4().hex
        with registry_lock:
            sessions[session_id] = SimSession(simulator)
        return {"session_id": session_id, "state": _enriched_state(simulator)}

    @app.post("/api/sim/{session_id}/step")
    async def sim_step(session_id: str, n: int = 1):
        try:
            session = _session(session_id)
        except LookupError:
            return _error_response(404, "session", f"no session {session_id!r}")
        lock = _locked(session)
        if lock is None:
            return _error_response(409, "busy", f"session {session_id!r} is busy")
        try:
            session.simulator.step(min(max(0, n), MAX_STEP_TICKS))
            return _enriched_state(session.simulator)
        except FtcadError as exc:
            return _map_error(exc)
        finally:
            lock.release()

    async def _inject(session_id: str, request: Request, forced_action: str | None):
        try:
            session = _session(session_id)
        except LookupError:
            return _error_response(404, "session", f"no session {session_id!r}")
        body = await request.body()
        try:
            params = json.loads(body) if body else {}
        except json.JSONDecodeError:
            return _error_response(400, "syntax", "malformed JSON body")
        node = params.get("node")
        if not isinstance(node, str):
            return _error_response(400, "schema", 'body needs a "node" key')
        action = forced_action or params.get("action", "fail")
        lock = _locked(session)
        if lock is None:
            return _error_response(409, "busy", f"session {session_id!r} is busy")
        try:
            session.simulator.inject(node, action)
            return _enriched_state(session.simulator)
        except FtcadError as exc:
            return _map_error(exc)
        finally:
            lock.release()

    @app.post("/api/sim/{session_id}/fault")
    async def sim_fault(session_id: str, request: Request):
        return await _inject(session_id, request, None)

    @app.post("/api/sim/{session_id}/repair")
    async def sim_repair(session_id: str, request: Request):
        return await _inject(session_id, request, "repair")

    @app.get("/api/sim/{session_id}/state")
    async def sim_state(session_id: str):
        try:
            session = _session(session_id)
        except LookupError:
            return _error_response(404, "session", f"no session {session_id!r}")
        return _enriched_state(session.simulator)

    @app.get("/api/sim/{session_id}/trace")
    async def sim_trace(session_id: str, since: int = 0):
        try:
            session = _session(session_id)
        except LookupError:
            return _error_response(404, "session", f"no session {session_id!r}")
        records = session.simulator.trace.records
        since = max(0, since)
        return {
            "records": [r.to_dict() for r in records[since:]],
            "next_since": len(records),
        }

    if static_dir is not None:
        import os

        from fastapi.staticfiles import StaticFiles

        data_dir = os.path.join(os.path.dirname(__file__), "data")
        if os.path.isdir(data_dir):
            app.mount("/examples", StaticFiles(directory=data_dir), name="examples")
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
