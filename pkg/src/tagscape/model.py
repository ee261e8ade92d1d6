"""Domain model for tag-annotated corpora and the canonical on-disk format.

A project bundles texts, hierarchical tagsets and standoff annotations.
All offsets are Unicode code points (``len(str)`` in Python), never bytes:
the corpora this was built for are Hebrew, where byte offsets depend on
the encoding and UTF-16 units split astral characters.

The canonical interchange format is one JSON document per project (see
``project_to_jsonable``). Import adapters translate foreign payloads into
this format; everything downstream consumes only the types defined here.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator


class CorpusError(Exception):
    """Base class for corpus-model failures."""


class ProjectFormatError(CorpusError):
    """The file is not a well-formed canonical project document."""


class ProjectValidationError(CorpusError):
    """The document parsed but the content breaks model invariants."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        lines = "; ".join(str(v) for v in violations[:5])
        more = "" if len(violations) <= 5 else f" (+{len(violations) - 5} more)"
        super().__init__(f"invalid project: {lines}{more}")


@dataclass(frozen=True, slots=True)
class Text:
    id: str
    title: str
    body: str

    @property
    def length(self) -> int:
        """Length in Unicode code points."""
        return len(self.body)


@dataclass(frozen=True, slots=True)
class Tag:
    id: str
    name: str
    color: str
    parent: str | None
    tagset: str


@dataclass(frozen=True, slots=True)
class Tagset:
    id: str
    name: str
    tags: tuple[Tag, ...]


@dataclass(frozen=True, slots=True)
class Annotation:
    id: str
    text: str
    tag: str
    ranges: tuple[tuple[int, int], ...]


@dataclass(frozen=True, slots=True)
class Violation:
    """A broken invariant, attributed to the entity that breaks it."""

    entity: str
    message: str

    def __str__(self) -> str:
        return f"{self.entity}: {self.message}"


@dataclass(frozen=True, slots=True)
class Project:
    id: str
    name: str
    texts: tuple[Text, ...]
    tagsets: tuple[Tagset, ...]
    annotations: tuple[Annotation, ...]

    def text_by_id(self, text_id: str) -> Text:
        for t in self.texts:
            if t.id == text_id:
                return t
        raise KeyError(f"unknown text: {text_id!r}")

    def tags(self) -> Iterator[Tag]:
        for ts in self.tagsets:
            yield from ts.tags

    def tag_by_id(self, tag_id: str) -> Tag:
        for tag in self.tags():
            if tag.id == tag_id:
                return tag
        raise KeyError(f"unknown tag: {tag_id!r}")

    def annotations_for(self, text_id: str) -> list[Annotation]:
        return [a for a in self.annotations if a.text == text_id]

    def tag_subtree(self, tag_id: str) -> set[str]:
        """Ids of the tag and all its descendants."""
        children: dict[str, list[str]] = {}
        for tag in self.tags():
            if tag.parent is not None:
                children.setdefault(tag.parent, []).append(tag.id)
        out: set[str] = set()
        stack = [tag_id]
        while stack:
            cur = stack.pop()
            if cur in out:
                continue  # defensive against cyclic input
            out.add(cur)
            stack.extend(children.get(cur, ()))
        return out


def validate_project(project: Project) -> list[Violation]:
    """Check every model invariant; violations are data, not exceptions.

    Total on any well-typed ``Project``: duplicate ids, dangling references,
    bad ranges and tag-hierarchy cycles all come back as ``Violation``s.
    """
    violations: list[Violation] = []

    texts: dict[str, Text] = {}
    for text in project.texts:
        if text.id in texts:
            violations.append(Violation(text.id, "duplicate text id"))
        texts[text.id] = text

    tagset_ids: set[str] = set()
    tags: dict[str, Tag] = {}
    for tagset in project.tagsets:
        if tagset.id in tagset_ids:
            violations.append(Violation(tagset.id, "duplicate tagset id"))
        tagset_ids.add(tagset.id)
        names_by_parent: dict[str | None, set[str]] = {}
        for tag in tagset.tags:
            if tag.id in tags:
                violations.append(Violation(tag.id, "duplicate tag id"))
            tags[tag.id] = tag
            if tag.tagset != tagset.id:
                violations.append(
                    Violation(tag.id, "tag assigned to a different tagset")
                )
            siblings = names_by_parent.setdefault(tag.parent, set())
            if tag.name in siblings:
                violations.append(
                    Violation(tag.id, "tag name not unique within parent level")
                )
            siblings.add(tag.name)

    for tag in tags.values():
        seen = {tag.id}
        cur = tag.parent
        while cur is not None:
            if cur in seen:
                violations.append(Violation(tag.id, "cycle in tag hierarchy"))
                break
            seen.add(cur)
            parent = tags.get(cur)
            if parent is None:
                violations.append(Violation(tag.id, "parent tag does not exist"))
                break
            if parent.tagset != tag.tagset:
                violations.append(
                    Violation(tag.id, "parent tag belongs to a different tagset")
                )
                break
            cur = parent.parent

    annotation_ids: set[str] = set()
    for ann in project.annotations:
        if ann.id in annotation_ids:
            violations.append(Violation(ann.id, "duplicate annotation id"))
        annotation_ids.add(ann.id)
        if ann.tag not in tags:
            violations.append(Violation(ann.id, "annotation references unknown tag"))
        text = texts.get(ann.text)
        if text is None:
            violations.append(Violation(ann.id, "annotation references unknown text"))
        if not ann.ranges:
            violations.append(Violation(ann.id, "annotation has no ranges"))
        prev_end = None
        for start, end in ann.ranges:
            if start < 0 or start >= end:
                violations.append(
                    Violation(ann.id, f"empty or negative range [{start}, {end})")
                )
            elif text is not None and end > text.length:
                violations.append(Violation(ann.id, "range exceeds text length"))
            if prev_end is not None and start < prev_end:
                violations.append(
                    Violation(ann.id, "ranges overlap or are out of order")
                )
            prev_end = max(prev_end, end) if prev_end is not None else end

    return violations


# ---------------------------------------------------------------------------
# Canonical interchange format
# ---------------------------------------------------------------------------


def project_to_jsonable(project: Project) -> dict:
    """Project as a plain dict in the canonical field order."""
    return {
        "id": project.id,
        "name": project.name,
        "texts": [
            {"id": t.id, "title": t.title, "body": t.body} for t in project.texts
        ],
        "tagsets": [
            {
                "id": ts.id,
                "name": ts.name,
                "tags": [
                    {
                        "id": tag.id,
                        "name": tag.name,
                        "color": tag.color,
                        "parent": tag.parent,
                    }
                    for tag in ts.tags
                ],
            }
            for ts in project.tagsets
        ],
        "annotations": [
            {
                "id": a.id,
                "text": a.text,
                "tag": a.tag,
                "ranges": [[start, end] for start, end in a.ranges],
            }
            for a in project.annotations
        ],
    }


def _require(doc: dict, key: str, kind: type, where: str):
    if key not in doc:
        raise ProjectFormatError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise ProjectFormatError(f"{where}: field {key!r} is not {kind.__name__}")
    return value


def project_from_jsonable(doc) -> Project:
    """Parse a canonical-format dict. Raises ProjectFormatError on shape errors."""
    if not isinstance(doc, dict):
        raise ProjectFormatError("document root is not an object")
    texts = []
    for td in _require(doc, "texts", list, "project"):
        if not isinstance(td, dict):
            raise ProjectFormatError("texts: entry is not an object")
        texts.append(
            Text(
                id=_require(td, "id", str, "text"),
                title=_require(td, "title", str, "text"),
                body=_require(td, "body", str, "text"),
            )
        )
    tagsets = []
    for tsd in _require(doc, "tagsets", list, "project"):
        if not isinstance(tsd, dict):
            raise ProjectFormatError("tagsets: entry is not an object")
        ts_id = _require(tsd, "id", str, "tagset")
        tags = []
        for td in _require(tsd, "tags", list, "tagset"):
            if not isinstance(td, dict):
                raise ProjectFormatError("tags: entry is not an object")
            parent = td.get("parent")
            if parent is not None and not isinstance(parent, str):
                raise ProjectFormatError("tag: field 'parent' is not a string or null")
            tags.append(
                Tag(
                    id=_require(td, "id", str, "tag"),
                    name=_require(td, "name", str, "tag"),
                    color=_require(td, "color", str, "tag"),
                    parent=parent,
                    tagset=ts_id,
                )
            )
        tagsets.append(
            Tagset(id=ts_id, name=_require(tsd, "name", str, "tagset"), tags=tuple(tags))
        )
    annotations = []
    for ad in _require(doc, "annotations", list, "project"):
        if not isinstance(ad, dict):
            raise ProjectFormatError("annotations: entry is not an object")
        ranges = []
        for r in _require(ad, "ranges", list, "annotation"):
            if (
                not isinstance(r, list)
                or len(r) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in r)
            ):
                raise ProjectFormatError("annotation: range is not [start, end]")
            ranges.append((r[0], r[1]))
        annotations.append(
            Annotation(
                id=_require(ad, "id", str, "annotation"),
                text=_require(ad, "text", str, "annotation"),
                tag=_require(ad, "tag", str, "annotation"),
                ranges=tuple(ranges),
            )
        )
    return Project(
        id=_require(doc, "id", str, "project"),
        name=_require(doc, "name", str, "project"),
        texts=tuple(texts),
        tagsets=tuple(tagsets),
        annotations=tuple(annotations),
    )


def project_to_json(project: Project) -> str:
    return json.dumps(project_to_jsonable(project), ensure_ascii=False, indent=2) + "\n"


def project_version(project: Project) -> str:
    """Content hash of the canonical serialization; changes iff the project does."""
    return hashlib.sha256(project_to_json(project).encode("utf-8")).hexdigest()


def load_project(path: str | Path) -> Project:
    """Load and validate a canonical project file.

    Parse failures raise ProjectFormatError; files that parse but break
    invariants raise ProjectValidationError (with the violations attached).
    """
    raw = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProjectFormatError(f"{path}: {exc}") from exc
    project = project_from_jsonable(doc)
    violations = validate_project(project)
    if violations:
        raise ProjectValidationError(violations)
    return project


def save_project(project: Project, path: str | Path) -> None:
    """Write the canonical serialization. ``load_project`` round-trips it."""
    Path(path).write_text(project_to_json(project), encoding="utf-8")
