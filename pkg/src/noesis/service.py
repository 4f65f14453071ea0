"""HTTP+JSON API over sessions, lattices and ensembles.

The server owns a small in-memory session store; every mutation of one session
runs under that session's lock, and because sessions are immutable values a
failed operation leaves the stored state untouched. Durability is by replay:
with ``trace_dir`` set, each mutation writes the session's trace file through
to disk.

Interactive sessions stage a posed cue until the human answers via the
``answer`` endpoint; scripted sessions answer at once from their reference
context. All payloads are JSON under ``/v1``; lattice, ensemble and trace
bodies are served byte-for-byte as the owning modules serialize them, with an
ETag derived from the content hash.
"""

from __future__ import annotations

import hashlib
import os
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .context import FormalContext, context_from_document
from .ensemble import serialize_belief
from .errors import (
    EmptyBasis,
    NoesisError,
    NotACounterexample,
    ParseError,
    ProtocolViolation,
    UnknownGranule,
    ValidationError,
)
from .lattice import Implication, Verdict, VerdictKind, holds, serialize_lattice
from .scaling import scale_scenario, scenario_from_document
from .session import (
    OracleAnswer,
    Phase,
    ScriptedOracle,
    Session,
    apply_oracle_answer,
    pose_cue,
    refutes,
    resolve,
    serialize_trace,
    snapshot,
    start_session,
    suggest_cue,
)

SUGGESTION_BASIS_LIMIT = 14  # suggest_cue is exponential; stay responsive


@dataclass
class SessionHandle:
    id: str
    kind: str  # "scripted" | "interactive"
    created_at: str
    session: Session
    staged: Implication | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self) -> None:
        self._handles: dict[str, SessionHandle] = {}
        self._guard = threading.Lock()

    def create(self, kind: str, session: Session) -> SessionHandle:
        handle = SessionHandle(
            id=uuid.uuid4().hex,
            kind=kind,
            created_at=datetime.now(timezone.utc).isoformat(),
            session=session,
        )
        with self._guard:
            self._handles[handle.id] = handle
        return handle

    def get(self, session_id: str) -> SessionHandle | None:
        with self._guard:
            return self._handles.get(session_id)

    def all(self) -> list[SessionHandle]:
        with self._guard:
            return sorted(self._handles.values(), key=lambda h: h.created_at)


def _implication_doc(imp: Implication | None, order: tuple[str, ...]) -> dict | None:
    if imp is None:
        return None
    return {
        "premise": [a for a in order if a in imp.premise],
        "conclusion": [a for a in order if a in imp.conclusion],
    }


def _verdict_doc(verdict: Verdict) -> dict:
    return {"kind": verdict.kind.value, "counterexample": verdict.counterexample}


def _answer_doc(answer: OracleAnswer | None, order: tuple[str, ...]) -> dict | None:
    if answer is None:
        return None
    if answer.accept:
        return {"accept": True}
    return {
        "counterexample": {
            "name": answer.counterexample_name,
            "intent": [a for a in order if a in (answer.counterexample_intent or frozenset())],
        }
    }


def _summary(handle: SessionHandle) -> dict:
    s = handle.session
    order = s.basis
    status = "awaiting_oracle" if handle.staged is not None else s.phase.value
    suggestion = None
    if handle.staged is None and s.phase in (Phase.BELIEF, Phase.CONSCIOUS) and len(order) <= SUGGESTION_BASIS_LIMIT:
        suggestion = _implication_doc(suggest_cue(s), order)
    return {
        "id": handle.id,
        "created_at": handle.created_at,
        "oracle": handle.kind,
        "phase": s.phase.value,
        "status": status,
        "granule": s.granule,
        "basis": list(order),
        "dimensions": [
            {"name": d.name, "attributes": list(d.attributes)} for d in s.context.dimensions
        ],
        "objects": list(s.context.objects),
        "pending": _implication_doc(s.pending, order),
        "pending_counterexample": _answer_doc(s.pending_answer, order),
        "awaiting_cue": _implication_doc(handle.staged, order),
        "suggestion": suggestion,
    }


def _etagged(body: bytes, media_type: str, request: Request) -> Response:
    etag = '"' + hashlib.sha256(body).hexdigest() + '"'
    if request.headers.get("if-none-match") == etag:
        return Response(status_code=304, headers={"ETag": etag})
    return Response(content=body, media_type=media_type, headers={"ETag": etag})


def _parse_cue(body: object, ctx: FormalContext) -> Implication:
    if not isinstance(body, dict) or "premise" not in body or "conclusion" not in body:
        raise ParseError("cue body needs premise and conclusion lists")
    premise, conclusion = body["premise"], body["conclusion"]
    if not isinstance(premise, list) or not isinstance(conclusion, list):
        raise ParseError("premise and conclusion must be lists")
    ctx.attrs_to_mask(premise)
    ctx.attrs_to_mask(conclusion)
    return Implication(frozenset(premise), frozenset(conclusion))


def create_app(trace_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="noesis", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag"],
    )
    store = SessionStore()

    def persist(handle: SessionHandle) -> None:
        if trace_dir is None:
            return
        os.makedirs(trace_dir, exist_ok=True)
        path = os.path.join(trace_dir, f"{handle.id}.jsonl")
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(serialize_trace(handle.session))
        os.replace(tmp, path)

    def error(status: int, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(NoesisError)
    async def _on_noesis_error(request: Request, exc: NoesisError):
        if isinstance(exc, (EmptyBasis, NotACounterexample)):
            return error(422, exc)
        if isinstance(exc, ProtocolViolation):
            return error(409, exc)
        if isinstance(exc, UnknownGranule):
            return error(400, exc)
        if isinstance(exc, (ParseError, ValidationError)):
            return error(400, exc)
        return error(500, exc)

    def not_found(session_id: str) -> JSONResponse:
        return JSONResponse(
            status_code=404,
            content={"error": "UnknownSession", "detail": f"no session {session_id!r}"},
        )

    @app.get("/v1/sessions")
    def list_sessions() -> dict:
        return {"sessions": [_summary(h) for h in store.all()]}

    @app.post("/v1/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.json()
        if not isinstance(body, dict):
            raise ParseError("request body must be a JSON object")
        has_context = "context" in body
        has_scenario = "scenario" in body
        if has_context == has_scenario:
            raise ParseError("provide exactly one of context or scenario")
        if has_context:
            initial = context_from_document(body["context"])
        else:
            initial, _ = scale_scenario(scenario_from_document(body["scenario"]))
        kind = body.get("oracle", "interactive")
        if kind not in ("interactive", "scripted"):
            raise ParseError("oracle must be 'interactive' or 'scripted'")
        oracle = None
        if kind == "scripted":
            if "reference" not in body:
                return error(422, ValidationError("scripted sessions need a reference context"))
            oracle = ScriptedOracle(context_from_document(body["reference"]))
        session = start_session(initial, oracle)
        handle = store.create(kind, session)
        persist(handle)
        return {"id": handle.id, "state": _summary(handle)}

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        handle = store.get(session_id)
        if handle is None:
            return not_found(session_id)
        with handle.lock:
            return _summary(handle)

    @app.post("/v1/sessions/{session_id}/cue")
    async def post_cue(session_id: str, request: Request):
        handle = store.get(session_id)
        if handle is None:
            return not_found(session_id)
        body = await request.json()
        with handle.lock:
            if handle.staged is not None:
                raise ProtocolViolation("a cue is already awaiting the oracle")
            s = handle.session
            imp = _parse_cue(body, s.context)
            order = s.basis
            if handle.kind == "interactive":
                verdict = holds(s.context, imp)
                if verdict.kind is VerdictKind.FAILS:
                    # The context refutes it; no human needed.
                    new_session, event = apply_oracle_answer(s, imp, OracleAnswer.accepted())
                    handle.session = new_session
                    persist(handle)
                    return {
                        "verdict": _verdict_doc(event.local_verdict),
                        "phase": new_session.phase.value,
                        "status": new_session.phase.value,
                        "granule": new_session.granule,
                        "pending": None,
                        "oracle": None,
                    }
                handle.staged = imp
                return {
                    "verdict": _verdict_doc(verdict),
                    "phase": s.phase.value,
                    "status": "awaiting_oracle",
                    "granule": s.granule,
                    "pending": _implication_doc(imp, order),
                    "oracle": None,
                }
            new_session, event = pose_cue(s, imp)
            handle.session = new_session
            persist(handle)
            return {
                "verdict": _verdict_doc(event.local_verdict),
                "phase": new_session.phase.value,
                "status": new_session.phase.value,
                "granule": new_session.granule,
                "pending": _implication_doc(new_session.pending, order),
                "oracle": _answer_doc(event.oracle_answer, order),
            }

    @app.post("/v1/sessions/{session_id}/answer")
    async def post_answer(session_id: str, request: Request):
        handle = store.get(session_id)
        if handle is None:
            return not_found(session_id)
        body = await request.json()
        if not isinstance(body, dict) or ("accept" in body) == ("counterexample" in body):
            raise ParseError("answer with either accept or a counterexample")
        with handle.lock:
            s = handle.session
            if "accept" in body:
                if body["accept"] is not True:
                    raise ParseError("accept must be true; reject by sending a counterexample")
                if handle.staged is None:
                    raise ProtocolViolation("no cue awaiting an oracle answer")
                new_session, _ = apply_oracle_answer(s, handle.staged, OracleAnswer.accepted())
                handle.session = new_session
                handle.staged = None
                persist(handle)
                return {"phase": new_session.phase.value, "granule": new_session.granule}

            cx = body["counterexample"]
            if not isinstance(cx, dict) or "name" not in cx or "intent" not in cx:
                raise ParseError("counterexample needs a name and an intent list")
            name, intent = cx["name"], cx["intent"]
            if not isinstance(intent, list):
                raise ParseError("counterexample intent must be a list")
            s.context.attrs_to_mask(intent)

            if handle.staged is not None:
                imp = handle.staged
                if not refutes(intent, imp):
                    raise NotACounterexample(
                        f"object {name!r} does not falsify the awaiting cue"
                    )
                mid, _ = apply_oracle_answer(s, imp, OracleAnswer.rejected(name, intent))
                new_session, _ = resolve(mid, name, intent)
                handle.session = new_session
                handle.staged = None
                persist(handle)
                return {"phase": new_session.phase.value, "granule": new_session.granule}

            if s.phase is Phase.UNCERTAIN:
                new_session, _ = resolve(s, name, intent)
                handle.session = new_session
                persist(handle)
                return {"phase": new_session.phase.value, "granule": new_session.granule}

            raise ProtocolViolation("nothing awaiting an answer and nothing pending")

    @app.get("/v1/sessions/{session_id}/lattice")
    def get_lattice(session_id: str, request: Request, granule: int | None = None):
        handle = store.get(session_id)
        if handle is None:
            return not_found(session_id)
        with handle.lock:
            s = handle.session
            lattice, _ = snapshot(s, s.granule if granule is None else granule)
        return _etagged(serialize_lattice(lattice), "application/json", request)

    @app.get("/v1/sessions/{session_id}/ensemble")
    def get_ensemble(session_id: str, request: Request, granule: int | None = None):
        handle = store.get(session_id)
        if handle is None:
            return not_found(session_id)
        with handle.lock:
            s = handle.session
            _, belief = snapshot(s, s.granule if granule is None else granule)
        return _etagged(serialize_belief(belief), "application/json", request)

    @app.get("/v1/sessions/{session_id}/trace")
    def get_trace(session_id: str, request: Request):
        handle = store.get(session_id)
        if handle is None:
            return not_found(session_id)
        with handle.lock:
            body = serialize_trace(handle.session)
        return _etagged(body, "application/x-ndjson", request)

    return app
