"""Embedded file-backed persistence for the service.

One directory holds everything: projects as canonical files, boards /
trial sessions / responses as JSON documents, and similarity matrices
cached under a key that embeds the project content hash (so a changed
project can never serve a stale matrix). Every write goes through an
atomic replace; any acknowledged write survives a process kill.

Corrupt files fail startup loudly, naming the offending entity.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .evaluation import RaterResponse, Trial
from .model import (
    Project,
    CorpusError,
    load_project,
    project_to_json,
    project_version,
)


class StoreError(Exception):
    pass


class CorruptStoreError(StoreError):
    def __init__(self, entity: str, reason: str):
        self.entity = entity
        super().__init__(f"corrupt store entity {entity!r}: {reason}")


@dataclass
class Board:
    """Named categories of texts; a text sits in at most one category."""

    id: str
    project: str
    categories: dict[str, list[str]] = field(default_factory=dict)
    uncategorized: list[str] = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {
            "id": self.id,
            "project": self.project,
            "categories": {k: list(v) for k, v in self.categories.items()},
            "uncategorized": list(self.uncategorized),
        }

    @classmethod
    def from_jsonable(cls, doc: dict) -> "Board":
        return cls(
            id=doc["id"],
            project=doc["project"],
            categories={k: list(v) for k, v in doc["categories"].items()},
            uncategorized=list(doc["uncategorized"]),
        )


def board_move(board: Board, text: str, category: str | None) -> Board:
    """Move a text into a category (or back to uncategorized), atomically.

    The returned board holds the text exactly once; the input is untouched.
    """
    known = set(board.uncategorized)
    for members in board.categories.values():
        known.update(members)
    if text not in known:
        raise KeyError(f"text {text!r} is not on board {board.id!r}")
    if category is not None and category not in board.categories:
        raise KeyError(f"unknown category {category!r}")
    new = Board(
        id=board.id,
        project=board.project,
        categories={k: [t for t in v if t != text] for k, v in board.categories.items()},
        uncategorized=[t for t in board.uncategorized if t != text],
    )
    if category is None:
        new.uncategorized.append(text)
    else:
        new.categories[category].append(text)
    return new


@dataclass(frozen=True, slots=True)
class TrialSession:
    """A batch of trials built together; reports are computed per session."""

    id: str
    project: str
    tag: str
    seed: int
    trial_ids: tuple[str, ...]


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


class Store:
    """All durable state, loaded eagerly at startup."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.projects_dir = self.data_dir / "projects"
        self.matrices_dir = self.data_dir / "matrices"
        self.projects_dir.mkdir(parents=True, exist_ok=True)
        self.matrices_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()

        self.projects: dict[str, Project] = {}
        for path in sorted(self.projects_dir.glob("*.json")):
            try:
                project = load_project(path)
            except (CorpusError, OSError) as exc:
                raise CorruptStoreError(f"project file {path.name}", str(exc)) from exc
            self.projects[project.id] = project

        self.boards: dict[str, Board] = {}
        for doc in self._load_list("boards.json"):
            try:
                board = Board.from_jsonable(doc)
            except (KeyError, TypeError) as exc:
                raise CorruptStoreError("boards.json", f"bad board entry: {exc}") from exc
            self.boards[board.id] = board

        self.sessions: dict[str, TrialSession] = {}
        self.trials: dict[str, Trial] = {}
        for doc in self._load_list("trials.json"):
            try:
                session = TrialSession(
                    id=doc["id"],
                    project=doc["project"],
                    tag=doc["tag"],
                    seed=doc["seed"],
                    trial_ids=tuple(t["id"] for t in doc["trials"]),
                )
                for t in doc["trials"]:
                    self.trials[t["id"]] = Trial(
                        id=t["id"],
                        target=t["target"],
                        candidates=tuple(t["candidates"]),
                        provenance=tuple(t["provenance"]),
                        seed=t["seed"],
                    )
            except (KeyError, TypeError) as exc:
                raise CorruptStoreError("trials.json", f"bad session entry: {exc}") from exc
            self.sessions[session.id] = session

        self.responses: dict[tuple[str, str], RaterResponse] = {}
        for doc in self._load_list("responses.json"):
            try:
                resp = RaterResponse(
                    trial=doc["trial"],
                    ranking=tuple(doc["ranking"]),
                    rater=doc["rater"],
                    timestamp=doc["timestamp"],
                )
            except (KeyError, TypeError) as exc:
                raise CorruptStoreError(
                    "responses.json", f"bad response entry: {exc}"
                ) from exc
            self.responses[(resp.trial, resp.rater)] = resp

    def _load_list(self, name: str) -> list:
        path = self.data_dir / name
        if not path.exists():
            return []
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CorruptStoreError(name, str(exc)) from exc
        if not isinstance(doc, list):
            raise CorruptStoreError(name, "expected a JSON array")
        return doc

    def _dump(self, name: str, docs: list) -> None:
        _atomic_write(
            self.data_dir / name,
            json.dumps(docs, ensure_ascii=False, indent=1) + "\n",
        )

    # -- projects ---------------------------------------------------------

    def put_project(self, project: Project) -> None:
        with self._lock:
            _atomic_write(
                self.projects_dir / f"{project.id}.json", project_to_json(project)
            )
            self.projects[project.id] = project

    def get_project(self, project_id: str) -> Project:
        try:
            return self.projects[project_id]
        except KeyError:
            raise KeyError(f"unknown project: {project_id!r}") from None

    # -- boards -----------------------------------------------------------

    def _save_boards(self) -> None:
        self._dump("boards.json", [b.to_jsonable() for b in self.boards.values()])

    def put_board(self, board: Board) -> None:
        with self._lock:
            self.boards[board.id] = board
            self._save_boards()

    def delete_board(self, board_id: str) -> None:
        with self._lock:
            del self.boards[board_id]
            self._save_boards()

    def move_on_board(self, board_id: str, text: str, category: str | None) -> Board:
        with self._lock:
            moved = board_move(self.boards[board_id], text, category)
            self.boards[board_id] = moved
            self._save_boards()
            return moved

    # -- evaluation -------------------------------------------------------

    def _save_trials(self) -> None:
        docs = []
        for session in self.sessions.values():
            docs.append(
                {
                    "id": session.id,
                    "project": session.project,
                    "tag": session.tag,
                    "seed": session.seed,
                    "trials": [
                        {
                            "id": t.id,
                            "target": t.target,
                            "candidates": list(t.candidates),
                            "provenance": list(t.provenance),
                            "seed": t.seed,
                        }
                        for t in (self.trials[tid] for tid in session.trial_ids)
                    ],
                }
            )
        self._dump("trials.json", docs)

    def put_session(self, session: TrialSession, trials: list[Trial]) -> None:
        with self._lock:
            self.sessions[session.id] = session
            for trial in trials:
                self.trials[trial.id] = trial
            self._save_trials()

    def put_response(self, response: RaterResponse) -> None:
        """Latest response wins per (trial, rater)."""
        with self._lock:
            self.responses[(response.trial, response.rater)] = response
            self._dump(
                "responses.json",
                [
                    {
                        "trial": r.trial,
                        "ranking": list(r.ranking),
                        "rater": r.rater,
                        "timestamp": r.timestamp,
                    }
                    for r in self.responses.values()
                ],
            )

    # -- similarity matrix cache -------------------------------------------

    def matrix_key(self, project: Project, tag: str, radius: int) -> str:
        # tag ids may hold characters unsafe in filenames; hash for safety
        tag_part = hashlib.sha256(tag.encode("utf-8")).hexdigest()[:12]
        return f"{project_version(project)}_{tag_part}_{radius}"

    def get_cached_matrix(self, key: str) -> str | None:
        """Cached matrix JSON (exactly as first serialized), or None."""
        path = self.matrices_dir / f"{key}.json"
        if not path.exists():
            return None
        return path.read_text(encoding="utf-8")

    def put_cached_matrix(self, key: str, matrix_json: str) -> None:
        with self._lock:
            _atomic_write(self.matrices_dir / f"{key}.json", matrix_json)
