"""Batch command-line access to every pipeline stage.

Subcommands: import, validate, charts, matrix, heatmap, rank, evaluate,
bench, serve. Every randomized path takes --seed; identical inputs and
seed produce byte-identical outputs. Exit codes: 0 success, 1 domain
error, 2 usage error.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import click

from . import analytics
from .bench import run_bench
from .evaluation import (
    EvaluationError,
    build_trials,
    record_response,
    score_responses,
    noisy_rater,
    score_faithful_rater,
    uniform_random_rater,
)
from .heatmap import heatmap_svg
from .model import (
    CorpusError,
    ProjectValidationError,
    load_project,
    save_project,
)
from .remote import RemoteCredentials, RemoteError, import_project, list_remote_projects
from .similarity import rank_similar, similarity_matrix
from .storage import StoreError

DOMAIN_ERRORS = (CorpusError, RemoteError, EvaluationError, StoreError, KeyError, ValueError)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _emit(data: str, out: str) -> None:
    if out == "-":
        click.echo(data, nl=False)
    else:
        Path(out).write_text(data, encoding="utf-8")


@click.group()
def main():
    """Visual analytics and tag-vector similarity for annotated corpora."""


@main.command("import")
@click.option("--endpoint", required=True, help="Remote base URL or a local directory.")
@click.option("--api-key", default="local", envvar="TAGSCAPE_API_KEY", show_default=True)
@click.option("--remote-id", default=None, help="Project to import.")
@click.option("--list", "list_only", is_flag=True, help="Only list remote projects.")
@click.option("--out", default=None, type=click.Path(), help="Canonical file to write.")
def import_cmd(endpoint, api_key, remote_id, list_only, out):
    """List or import projects from a remote annotation service."""
    creds = RemoteCredentials(endpoint=endpoint, api_key=api_key)
    try:
        if list_only or remote_id is None:
            for d in list_remote_projects(creds):
                click.echo(f"{d.remote_id}\t{d.name}\t{d.last_modified}")
            return
        project = import_project(creds, remote_id)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    destination = out or f"{project.id}.json"
    save_project(project, destination)
    click.echo(
        f"imported {project.id}: {len(project.texts)} texts, "
        f"{len(project.annotations)} annotations -> {destination}"
    )


@main.command()
@click.argument("path", type=click.Path(exists=True))
def validate(path):
    """Check a canonical project file against all model invariants."""
    try:
        load_project(path)
    except ProjectValidationError as exc:
        for violation in exc.violations:
            click.echo(str(violation), err=True)
        sys.exit(1)
    except CorpusError as exc:
        _fail(str(exc))
    click.echo("ok")


@main.command()
@click.argument("chart", type=click.Choice(["gantt", "stacked", "sunburst", "gallery"]))
@click.option("--project", "project_path", required=True, type=click.Path(exists=True))
@click.option("--text", default=None, help="Text id (gantt/stacked).")
@click.option("--tags", default=None, help="Comma-separated tag filter.")
@click.option("--bin", "bin_width", default=None, type=int, help="Stacked bin width.")
@click.option("--scope", default=None, help="Sunburst scope: text id, default project.")
@click.option("--mode", default="occurrences", type=click.Choice(["occurrences", "characters"]))
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]))
@click.option("--out", default="-")
def charts(chart, project_path, text, tags, bin_width, scope, mode, fmt, out):
    """Export chart-ready data for one of the four views."""
    tag_filter = tags.split(",") if tags else None
    try:
        project = load_project(project_path)
        if chart in ("gantt", "stacked") and text is None:
            _fail(f"--text is required for {chart}")
        if chart == "gantt":
            data = analytics.gantt_json(project, text, tag_filter)
        elif chart == "stacked":
            if fmt == "csv":
                data = analytics.stacked_csv(
                    analytics.stacked_area(project, text, bin_width, tag_filter)
                )
            else:
                data = analytics.stacked_json(project, text, bin_width, tag_filter)
        elif chart == "sunburst":
            data = analytics.sunburst_json(project, scope, mode)
        else:
            data = analytics.gallery_json(project, tag_filter)
        if fmt == "csv" and chart != "stacked":
            _fail(f"csv export is only defined for stacked, not {chart}")
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    if not data.endswith("\n"):
        data += "\n"
    _emit(data, out)


def _load_matrix(project_path, tag, radius, rollup, workers):
    project = load_project(project_path)
    project.tag_by_id(tag)
    return project, similarity_matrix(project, tag, radius, rollup=rollup, workers=workers)


@main.command()
@click.option("--project", "project_path", required=True, type=click.Path(exists=True))
@click.option("--tag", required=True)
@click.option("--radius", default=1, show_default=True)
@click.option("--rollup", is_flag=True, help="Count subtree tags too.")
@click.option("--workers", default=None, type=int)
@click.option("--format", "fmt", default="csv", type=click.Choice(["csv", "json"]))
@click.option("--out", default="-")
def matrix(project_path, tag, radius, rollup, workers, fmt, out):
    """Pairwise similarity matrix for one tag."""
    try:
        _, m = _load_matrix(project_path, tag, radius, rollup, workers)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    data = m.to_csv() if fmt == "csv" else m.to_json() + "\n"
    _emit(data, out)


@main.command()
@click.option("--project", "project_path", required=True, type=click.Path(exists=True))
@click.option("--tag", required=True)
@click.option("--radius", default=1, show_default=True)
@click.option("--rollup", is_flag=True)
@click.option("--workers", default=None, type=int)
@click.option("--out", default="-")
def heatmap(project_path, tag, radius, rollup, workers, out):
    """Similarity heatmap as SVG (white to red, redder = more similar)."""
    try:
        project, m = _load_matrix(project_path, tag, radius, rollup, workers)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    titles = {t.id: t.title for t in project.texts}
    _emit(heatmap_svg(m, titles), out)


@main.command()
@click.option("--project", "project_path", required=True, type=click.Path(exists=True))
@click.option("--tag", required=True)
@click.option("--target", required=True, help="Text id to rank against.")
@click.option("--radius", default=1, show_default=True)
@click.option("--rollup", is_flag=True)
def rank(project_path, tag, target, radius, rollup):
    """Other texts ranked by similarity to the target."""
    try:
        _, m = _load_matrix(project_path, tag, radius, rollup, None)
        ranking = rank_similar(m, target)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    for text_id, score in ranking:
        click.echo(f"{text_id}\t{score:.6f}")


@main.command()
@click.option("--project", "project_path", required=True, type=click.Path(exists=True))
@click.option("--tag", required=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--rater", default="faithful", type=click.Choice(["faithful", "noisy", "random"]))
@click.option("--sigma", default=0.05, show_default=True, help="Noise level for the noisy rater.")
@click.option("--radius", default=1, show_default=True)
@click.option("--format", "fmt", default="csv", type=click.Choice(["csv", "json"]))
@click.option("--out", default="-")
def evaluate(project_path, tag, seed, rater, sigma, radius, fmt, out):
    """Run the ranking evaluation with a simulated rater and score it."""
    try:
        project, m = _load_matrix(project_path, tag, radius, False, None)
        targets = [t.id for t in project.texts]
        trials = build_trials(m, targets, seed)
        rng = random.Random(seed)
        responses = []
        for trial in trials:
            if rater == "faithful":
                ranking = score_faithful_rater(trial, m)
            elif rater == "noisy":
                ranking = noisy_rater(trial, m, sigma, rng)
            else:
                ranking = uniform_random_rater(trial, rng)
            responses.append(record_response(trial, ranking, rater, timestamp=""))
        report = score_responses(responses, trials)
    except DOMAIN_ERRORS as exc:
        _fail(str(exc))
    if report.least_similar_hit_rate is not None:
        click.echo(
            f"trials: {report.trial_count}  "
            f"least-similar hit rate: {report.least_similar_hit_rate:.4f}",
            err=True,
        )
    data = report.to_csv() if fmt == "csv" else (
        json.dumps(report.to_jsonable(), ensure_ascii=False, indent=2) + "\n"
    )
    _emit(data, out)


@main.command()
@click.option("--lengths", default="1000,2000,4000", show_default=True)
@click.option("--trials", default=5, show_default=True)
@click.option("--radius", default=1, show_default=True)
@click.option("--seed", default=0, show_default=True)
def bench(lengths, trials, radius, seed):
    """Time exact DTW against FastDTW across doubling input lengths."""
    try:
        parsed = [int(s) for s in lengths.split(",") if s]
    except ValueError:
        raise click.UsageError("--lengths must be comma-separated integers")
    if not parsed:
        raise click.UsageError("--lengths must name at least one length")
    report = run_bench(parsed, trials=trials, radius=radius, seed=seed)
    click.echo(report.table(), nl=False)


@main.command()
@click.option("--port", default=8600, show_default=True, envvar="TAGSCAPE_PORT")
@click.option(
    "--data-dir", default="tagscape-data", show_default=True, envvar="TAGSCAPE_DATA_DIR"
)
@click.option("--workers", default=4, show_default=True, envvar="TAGSCAPE_WORKERS")
def serve(port, data_dir, workers):
    """Run the HTTP service."""
    from .service import ServiceConfig, ServiceError, serve as run_service

    try:
        run_service(ServiceConfig(port=port, data_dir=data_dir, workers=workers))
    except (ServiceError, StoreError) as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
