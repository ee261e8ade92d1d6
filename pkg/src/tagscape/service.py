"""HTTP service over the corpus, chart, similarity and evaluation layers.

Routing and persistence only: chart endpoints return the analytics
module's serialization byte for byte, similarity endpoints go through the
store's content-hash-keyed matrix cache, and long computations run as
jobs on a bounded pool with at most one in-flight job per cache key.

Errors are JSON ``{"code", "message"}``; 4xx for caller faults.
"""

from __future__ import annotations

import hashlib
import json
import logging
import socket
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import analytics
from .evaluation import (
    EvaluationError,
    build_trials,
    record_response,
    score_responses,
)
from .model import (
    CorpusError,
    Project,
    project_from_jsonable,
    project_to_json,
    validate_project,
)
from .remote import RemoteCredentials, RemoteError, import_project
from .similarity import SimilarityMatrix, rank_similar, similarity_matrix
from .storage import Board, Store, TrialSession

log = logging.getLogger(__name__)


class ServiceError(Exception):
    pass


@dataclass(frozen=True, slots=True)
class ServiceConfig:
    port: int = 8600
    data_dir: str | Path = "tagscape-data"
    workers: int = 4


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message
        super().__init__(message)


def _msg(exc: BaseException) -> str:
    # str(KeyError("x")) is "'x'"; unwrap to the bare message
    if isinstance(exc, KeyError) and exc.args:
        return str(exc.args[0])
    return str(exc)


class JobManager:
    """Bounded pool of matrix computations, deduplicated per cache key."""

    def __init__(self, workers: int):
        self.executor = ThreadPoolExecutor(max_workers=max(1, workers))
        self.jobs: dict[str, dict] = {}
        self.by_key: dict[str, str] = {}
        self.lock = threading.Lock()

    def submit(self, key: str, fn: Callable[[], None]) -> str:
        with self.lock:
            active = self.by_key.get(key)
            if active and self.jobs[active]["status"] in ("queued", "running"):
                return active
            job_id = uuid.uuid4().hex[:12]
            self.jobs[job_id] = {"status": "queued", "key": key, "error": None}
            self.by_key[key] = job_id
            self.executor.submit(self._run, job_id, fn)
            return job_id

    def completed(self, key: str) -> str:
        """Register an already-satisfied request (cache hit) as a done job."""
        with self.lock:
            job_id = uuid.uuid4().hex[:12]
            self.jobs[job_id] = {"status": "done", "key": key, "error": None}
            return job_id

    def _run(self, job_id: str, fn: Callable[[], None]) -> None:
        with self.lock:
            self.jobs[job_id]["status"] = "running"
        try:
            fn()
        except Exception as exc:  # surfaced through the status endpoint
            log.exception("matrix job %s failed", job_id)
            with self.lock:
                self.jobs[job_id].update(status="error", error=str(exc))
        else:
            with self.lock:
                self.jobs[job_id]["status"] = "done"

    def get(self, job_id: str) -> dict:
        with self.lock:
            job = self.jobs.get(job_id)
            if job is None:
                raise ApiError(404, f"unknown job: {job_id!r}")
            return {"job": job_id, **job}

    def shutdown(self) -> None:
        self.executor.shutdown(wait=False, cancel_futures=True)


class ImportBody(BaseModel):
    project: dict | None = None
    endpoint: str | None = None
    api_key: str | None = None
    remote_id: str | None = None


class BoardBody(BaseModel):
    project: str
    id: str | None = None


class CategoryBody(BaseModel):
    name: str


class MoveBody(BaseModel):
    text: str
    category: str | None = None


class JobBody(BaseModel):
    project: str
    tag: str
    radius: int = 1


class TrialsBody(BaseModel):
    project: str
    tag: str
    seed: int
    targets: list[str] | None = None
    radius: int = 1


class ResponseBody(BaseModel):
    trial: str
    rater: str
    ranking: list[str]


def _json(payload) -> Response:
    return Response(
        json.dumps(payload, ensure_ascii=False, separators=(",", ":")),
        media_type="application/json",
    )


def create_app(store: Store, workers: int = 4) -> FastAPI:
    app = FastAPI(title="tagscape", docs_url=None, redoc_url=None)
    # the frontend is a separate static app on another origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    jobs = JobManager(workers)
    app.state.store = store
    app.state.jobs = jobs

    @app.exception_handler(ApiError)
    def on_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            {"code": exc.status, "message": exc.message}, status_code=exc.status
        )

    @app.exception_handler(RequestValidationError)
    def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse({"code": 422, "message": str(exc)}, status_code=422)

    @app.exception_handler(Exception)
    def on_internal_error(request: Request, exc: Exception):
        log.exception("internal error on %s", request.url.path)
        return JSONResponse({"code": 500, "message": str(exc)}, status_code=500)

    def get_project(project_id: str) -> Project:
        try:
            return store.get_project(project_id)
        except KeyError as exc:
            raise ApiError(404, _msg(exc)) from exc

    def require_tag(project: Project, tag: str) -> None:
        try:
            project.tag_by_id(tag)
        except KeyError as exc:
            raise ApiError(404, _msg(exc)) from exc

    def matrix_json(project_id: str, tag: str, radius: int) -> str:
        project = get_project(project_id)
        require_tag(project, tag)
        if radius < 0:
            raise ApiError(400, "radius must be nonnegative")
        key = store.matrix_key(project, tag, radius)
        cached = store.get_cached_matrix(key)
        if cached is not None:
            return cached
        payload = similarity_matrix(project, tag, radius, workers=workers).to_json()
        store.put_cached_matrix(key, payload)
        return payload

    def load_matrix(project_id: str, tag: str, radius: int) -> SimilarityMatrix:
        return SimilarityMatrix.from_jsonable(json.loads(matrix_json(project_id, tag, radius)))

    # -- projects -----------------------------------------------------------

    @app.post("/import")
    def import_endpoint(body: ImportBody):
        if body.project is not None:
            try:
                project = project_from_jsonable(body.project)
            except CorpusError as exc:
                raise ApiError(400, _msg(exc)) from exc
            violations = validate_project(project)
            if violations:
                raise ApiError(
                    400, "invalid project: " + "; ".join(str(v) for v in violations[:5])
                )
        elif body.endpoint and body.api_key and body.remote_id:
            creds = RemoteCredentials(endpoint=body.endpoint, api_key=body.api_key)
            try:
                project = import_project(creds, body.remote_id)
            except RemoteError as exc:
                raise ApiError(502, str(exc)) from exc
        else:
            raise ApiError(
                400, "body needs either 'project' or endpoint/api_key/remote_id"
            )
        store.put_project(project)
        return _json(
            {
                "id": project.id,
                "texts": len(project.texts),
                "annotations": len(project.annotations),
            }
        )

    @app.get("/projects")
    def list_projects():
        return _json(
            [
                {
                    "id": p.id,
                    "name": p.name,
                    "texts": len(p.texts),
                    "annotations": len(p.annotations),
                }
                for p in store.projects.values()
            ]
        )

    @app.get("/projects/{project_id}")
    def get_project_endpoint(project_id: str):
        project = get_project(project_id)
        return Response(project_to_json(project), media_type="application/json")

    @app.get("/projects/{project_id}/texts/{text_id}")
    def get_text(project_id: str, text_id: str):
        project = get_project(project_id)
        try:
            text = project.text_by_id(text_id)
        except KeyError as exc:
            raise ApiError(404, _msg(exc)) from exc
        return _json(
            {"id": text.id, "title": text.title, "body": text.body, "length": text.length}
        )

    # -- charts -------------------------------------------------------------

    def parse_tags(tags: str | None) -> list[str] | None:
        if tags is None or tags == "":
            return None
        return tags.split(",")

    @app.get("/charts/gantt")
    def charts_gantt(project: str, text: str, tags: str | None = None):
        proj = get_project(project)
        try:
            payload = analytics.gantt_json(proj, text, parse_tags(tags))
        except KeyError as exc:
            raise ApiError(404, _msg(exc)) from exc
        return Response(payload, media_type="application/json")

    @app.get("/charts/stacked")
    def charts_stacked(
        project: str, text: str, bin: int | None = None, tags: str | None = None
    ):
        proj = get_project(project)
        try:
            payload = analytics.stacked_json(proj, text, bin, parse_tags(tags))
        except KeyError as exc:
            raise ApiError(404, _msg(exc)) from exc
        except ValueError as exc:
            raise ApiError(400, _msg(exc)) from exc
        return Response(payload, media_type="application/json")

    @app.get("/charts/sunburst")
    def charts_sunburst(
        project: str, scope: str | None = None, mode: str = "occurrences"
    ):
        proj = get_project(project)
        try:
            payload = analytics.sunburst_json(proj, scope, mode)
        except KeyError as exc:
            raise ApiError(404, _msg(exc)) from exc
        except ValueError as exc:
            raise ApiError(400, _msg(exc)) from exc
        return Response(payload, media_type="application/json")

    @app.get("/charts/gallery")
    def charts_gallery(project: str, tags: str | None = None):
        proj = get_project(project)
        return Response(
            analytics.gallery_json(proj, parse_tags(tags)), media_type="application/json"
        )

    # -- similarity -----------------------------------------------------------

    @app.post("/similarity/jobs")
    def submit_matrix_job(body: JobBody):
        project = get_project(body.project)
        require_tag(project, body.tag)
        key = store.matrix_key(project, body.tag, body.radius)
        if store.get_cached_matrix(key) is not None:
            job_id = jobs.completed(key)
        else:
            # jobs are one task each; the pool bounds cross-job parallelism
            job_id = jobs.submit(
                key, lambda: matrix_json(body.project, body.tag, body.radius)
            )
        return _json(jobs.get(job_id))

    @app.get("/similarity/jobs/{job_id}")
    def job_status(job_id: str):
        return _json(jobs.get(job_id))

    @app.get("/similarity/matrix")
    def get_matrix(project: str, tag: str, radius: int = 1):
        return Response(matrix_json(project, tag, radius), media_type="application/json")

    @app.get("/similarity/rank")
    def get_rank(project: str, tag: str, target: str, radius: int = 1):
        matrix = load_matrix(project, tag, radius)
        try:
            ranking = rank_similar(matrix, target)
        except KeyError as exc:
            raise ApiError(404, _msg(exc)) from exc
        return _json([{"text": t, "score": s} for t, s in ranking])

    # -- boards ---------------------------------------------------------------

    def board_or_404(board_id: str) -> Board:
        try:
            return store.boards[board_id]
        except KeyError:
            raise ApiError(404, f"unknown board: {board_id!r}") from None

    @app.post("/boards")
    def create_board(body: BoardBody):
        project = get_project(body.project)
        board_id = body.id or "board-" + uuid.uuid4().hex[:10]
        if board_id in store.boards:
            raise ApiError(409, f"board {board_id!r} already exists")
        board = Board(
            id=board_id,
            project=project.id,
            categories={},
            uncategorized=[t.id for t in project.texts],
        )
        store.put_board(board)
        return _json(board.to_jsonable())

    @app.get("/boards")
    def list_boards(project: str | None = None):
        boards = [
            b.to_jsonable()
            for b in store.boards.values()
            if project is None or b.project == project
        ]
        return _json(boards)

    @app.get("/boards/{board_id}")
    def get_board(board_id: str):
        return _json(board_or_404(board_id).to_jsonable())

    @app.delete("/boards/{board_id}")
    def delete_board(board_id: str):
        board_or_404(board_id)
        store.delete_board(board_id)
        return _json({"deleted": board_id})

    @app.post("/boards/{board_id}/categories")
    def create_category(board_id: str, body: CategoryBody):
        board = board_or_404(board_id)
        if body.name in board.categories:
            raise ApiError(409, f"category {body.name!r} already exists")
        board.categories[body.name] = []
        store.put_board(board)
        return _json(board.to_jsonable())

    @app.post("/boards/{board_id}/move")
    def move_card(board_id: str, body: MoveBody):
        board_or_404(board_id)
        try:
            moved = store.move_on_board(board_id, body.text, body.category)
        except KeyError as exc:
            raise ApiError(404, _msg(exc)) from exc
        return _json(moved.to_jsonable())

    # -- evaluation -------------------------------------------------------------

    @app.post("/evaluation/trials")
    def create_trials(body: TrialsBody):
        project = get_project(body.project)
        require_tag(project, body.tag)
        targets = body.targets or [t.id for t in project.texts]
        matrix = load_matrix(body.project, body.tag, body.radius)
        try:
            trials = build_trials(matrix, targets, body.seed)
        except (EvaluationError, KeyError) as exc:
            raise ApiError(400, _msg(exc)) from exc
        fingerprint = hashlib.sha256(
            json.dumps([body.project, body.tag, body.seed, targets]).encode()
        ).hexdigest()[:12]
        session = TrialSession(
            id=f"s-{fingerprint}",
            project=body.project,
            tag=body.tag,
            seed=body.seed,
            trial_ids=tuple(t.id for t in trials),
        )
        store.put_session(session, trials)
        # candidate provenance stays server-side to avoid priming raters
        return _json(
            {
                "session": session.id,
                "trials": [
                    {"id": t.id, "target": t.target, "candidates": list(t.candidates)}
                    for t in trials
                ],
            }
        )

    @app.get("/evaluation/trials/{trial_id}")
    def get_trial(trial_id: str):
        trial = store.trials.get(trial_id)
        if trial is None:
            raise ApiError(404, f"unknown trial: {trial_id!r}")
        return _json(
            {"id": trial.id, "target": trial.target, "candidates": list(trial.candidates)}
        )

    @app.post("/evaluation/responses")
    def post_response(body: ResponseBody):
        trial = store.trials.get(body.trial)
        if trial is None:
            raise ApiError(404, f"unknown trial: {body.trial!r}")
        try:
            response = record_response(trial, body.ranking, body.rater)
        except EvaluationError as exc:
            raise ApiError(400, _msg(exc)) from exc
        store.put_response(response)
        return _json(
            {"trial": response.trial, "rater": response.rater, "timestamp": response.timestamp}
        )

    @app.get("/evaluation/report")
    def get_report(session: str, format: str = "json"):
        sess = store.sessions.get(session)
        if sess is None:
            raise ApiError(404, f"unknown session: {session!r}")
        trials = {tid: store.trials[tid] for tid in sess.trial_ids}
        responses = [r for r in store.responses.values() if r.trial in trials]
        report = score_responses(responses, trials)
        if format == "csv":
            return Response(report.to_csv(), media_type="text/csv")
        return _json(report.to_jsonable())

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service; refuses to start on a busy port or corrupt store."""
    import uvicorn

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind(("0.0.0.0", config.port))
    except OSError as exc:
        raise ServiceError(f"port {config.port} is unavailable: {exc}") from exc
    finally:
        probe.close()
    store = Store(config.data_dir)
    app = create_app(store, workers=config.workers)
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")
