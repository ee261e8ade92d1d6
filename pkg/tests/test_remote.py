import json
import logging
import socket
import time

import pytest

from corpora import avodah_project, breakdown_project
from tagscape.model import save_project, validate_project
from tagscape.remote import (
    AuthenticationError,
    FixtureRemoteServer,
    NetworkError,
    RemoteCredentials,
    TranslationError,
    UnknownRemoteProject,
    import_project,
    list_remote_projects,
    update_project,
)


@pytest.fixture()
def remote_dir(tmp_path):
    root = tmp_path / "remote"
    root.mkdir()
    save_project(breakdown_project(), root / "breakdown.json")
    save_project(avodah_project(), root / "avodah.json")
    return root


@pytest.fixture()
def local_creds(remote_dir):
    return RemoteCredentials(endpoint=str(remote_dir), api_key="local-key")


def test_list_local_projects(local_creds):
    descriptors = list_remote_projects(local_creds)
    assert {d.remote_id for d in descriptors} == {"breakdown", "avodah"}
    assert all(d.last_modified for d in descriptors)


def test_import_matches_golden_file(local_creds, remote_dir):
    project = import_project(local_creds, "breakdown")
    assert validate_project(project) == []
    golden = json.loads((remote_dir / "breakdown.json").read_text())
    from tagscape.model import project_to_jsonable

    assert project_to_jsonable(project) == golden


def test_import_is_idempotent(local_creds):
    assert import_project(local_creds, "breakdown") == import_project(local_creds, "breakdown")


def test_import_unknown_remote_id(local_creds):
    with pytest.raises(UnknownRemoteProject):
        import_project(local_creds, "missing")


def test_import_fixture_scale_is_fast(local_creds):
    start = time.perf_counter()
    import_project(local_creds, "breakdown")
    assert time.perf_counter() - start < 5.0


def test_translation_failure_on_dangling_annotation(tmp_path):
    root = tmp_path / "bad"
    root.mkdir()
    doc = {
        "id": "bad",
        "name": "bad",
        "texts": [],
        "tagsets": [
            {"id": "f", "name": "f", "tags": [{"id": "m", "name": "M", "color": "#800080", "parent": None}]}
        ],
        "annotations": [{"id": "a1", "text": "ghost", "tag": "m", "ranges": [[0, 2]]}],
    }
    (root / "bad.json").write_text(json.dumps(doc))
    creds = RemoteCredentials(endpoint=str(root), api_key="k")
    with pytest.raises(TranslationError):
        import_project(creds, "bad")


def test_missing_annotation_ids_are_synthesized_stably(tmp_path):
    root = tmp_path / "noids"
    root.mkdir()
    doc = {
        "id": "noids",
        "name": "noids",
        "texts": [{"id": "t1", "title": "t", "body": "0123456789"}],
        "tagsets": [
            {"id": "f", "name": "f", "tags": [{"id": "m", "name": "M", "color": "#800080", "parent": None}]}
        ],
        "annotations": [{"text": "t1", "tag": "m", "ranges": [[0, 4]]}],
    }
    (root / "noids.json").write_text(json.dumps(doc))
    creds = RemoteCredentials(endpoint=str(root), api_key="k")
    first = import_project(creds, "noids")
    second = import_project(creds, "noids")
    assert first.annotations[0].id == second.annotations[0].id
    assert first.annotations[0].id.startswith("ann-")


def test_update_adds_annotation_preserving_ids(tmp_path):
    root = tmp_path / "upd"
    root.mkdir()
    project = breakdown_project()
    save_project(project, root / "breakdown.json")
    creds = RemoteCredentials(endpoint=str(root), api_key="k")
    existing = import_project(creds, "breakdown")

    from tagscape.model import Annotation, Project

    grown = Project(
        project.id,
        project.name,
        project.texts,
        project.tagsets,
        project.annotations
        + (Annotation("new-ann", "t1", "simile", ((0, 4),)),),
    )
    save_project(grown, root / "breakdown.json")
    updated = update_project(creds, "breakdown", existing)
    old_ids = {a.id for a in existing.annotations}
    new_ids = {a.id for a in updated.annotations}
    assert new_ids - old_ids == {"new-ann"}
    assert old_ids <= new_ids
    assert updated.texts == existing.texts


def test_update_without_remote_change_is_identity(local_creds):
    existing = import_project(local_creds, "avodah")
    assert update_project(local_creds, "avodah", existing) == existing


def test_update_after_remote_text_deletion(tmp_path):
    root = tmp_path / "del"
    root.mkdir()
    project = breakdown_project()
    save_project(project, root / "breakdown.json")
    creds = RemoteCredentials(endpoint=str(root), api_key="k")
    existing = import_project(creds, "breakdown")

    from tagscape.model import Project

    shrunk = Project(
        project.id,
        project.name,
        project.texts[:1],
        project.tagsets,
        tuple(a for a in project.annotations if a.text == "t1"),
    )
    save_project(shrunk, root / "breakdown.json")
    updated = update_project(creds, "breakdown", existing)
    assert [t.id for t in updated.texts] == ["t1"]
    assert all(a.text == "t1" for a in updated.annotations)


# -- HTTP adapter over the fixture server -------------------------------------


def test_http_list_and_import(remote_dir):
    with FixtureRemoteServer(remote_dir, api_key="sesame") as server:
        creds = RemoteCredentials(endpoint=server.endpoint, api_key="sesame")
        descriptors = list_remote_projects(creds)
        assert {d.remote_id for d in descriptors} == {"breakdown", "avodah"}
        project = import_project(creds, "breakdown")
        assert project == breakdown_project()


def test_http_bad_key_is_auth_error(remote_dir):
    with FixtureRemoteServer(remote_dir, api_key="sesame") as server:
        creds = RemoteCredentials(endpoint=server.endpoint, api_key="wrong")
        with pytest.raises(AuthenticationError):
            list_remote_projects(creds)


def test_http_unknown_project(remote_dir):
    with FixtureRemoteServer(remote_dir, api_key=None) as server:
        creds = RemoteCredentials(endpoint=server.endpoint, api_key="any")
        with pytest.raises(UnknownRemoteProject):
            import_project(creds, "missing")


def test_unreachable_endpoint_is_network_error():
    # bind-then-close to get a port with nothing listening
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()
    creds = RemoteCredentials(endpoint=f"http://127.0.0.1:{port}", api_key="k")
    with pytest.raises(NetworkError):
        list_remote_projects(creds)


# -- secrets ---------------------------------------------------------------------


def test_credentials_never_reveal_the_key():
    creds = RemoteCredentials(endpoint="http://example", api_key="TOP-SECRET-123")
    assert "TOP-SECRET-123" not in repr(creds)
    assert "TOP-SECRET-123" not in str(creds)
    with pytest.raises(ValueError):
        RemoteCredentials(endpoint="http://example", api_key="")


def test_secret_absent_from_logs_and_saved_files(remote_dir, tmp_path, caplog):
    secret = "HUSH-9f8e7d6c"
    with FixtureRemoteServer(remote_dir, api_key=secret) as server:
        creds = RemoteCredentials(endpoint=server.endpoint, api_key=secret)
        with caplog.at_level(logging.DEBUG):
            descriptors = list_remote_projects(creds)
            project = import_project(creds, descriptors[0].remote_id)
    out = tmp_path / "imported.json"
    save_project(project, out)
    assert secret not in caplog.text
    assert secret not in out.read_text(encoding="utf-8")
