import json

import pytest
from click.testing import CliRunner

from corpora import breakdown_project, similarity_corpus
from tagscape.cli import main
from tagscape.model import load_project, save_project
from tagscape.similarity import similarity_matrix


@pytest.fixture(scope="module")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "corpus.json"
    save_project(similarity_corpus(n_texts=12, length=300), path)
    return str(path)


@pytest.fixture()
def runner():
    return CliRunner()


def test_usage_error_exits_2(runner):
    result = runner.invoke(main, ["matrix"])  # missing required options
    assert result.exit_code == 2


def test_validate_ok(runner, corpus_file):
    result = runner.invoke(main, ["validate", corpus_file])
    assert result.exit_code == 0
    assert result.output.strip() == "ok"


def test_validate_reports_violations(runner, tmp_path):
    doc = {
        "id": "p",
        "name": "p",
        "texts": [{"id": "t", "title": "t", "body": "abc"}],
        "tagsets": [{"id": "f", "name": "f", "tags": [{"id": "m", "name": "M", "color": "#800080", "parent": None}]}],
        "annotations": [{"id": "a", "text": "t", "tag": "m", "ranges": [[0, 9]]}],
    }
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    result = runner.invoke(main, ["validate", str(bad)])
    assert result.exit_code == 1
    assert "exceeds text length" in result.output


def test_import_list_and_fetch(runner, tmp_path):
    remote = tmp_path / "remote"
    remote.mkdir()
    save_project(breakdown_project(), remote / "breakdown.json")

    listed = runner.invoke(main, ["import", "--endpoint", str(remote), "--list"])
    assert listed.exit_code == 0
    assert "breakdown" in listed.output

    out = tmp_path / "imported.json"
    result = runner.invoke(
        main,
        ["import", "--endpoint", str(remote), "--remote-id", "breakdown", "--out", str(out)],
    )
    assert result.exit_code == 0
    assert load_project(out) == breakdown_project()


def test_import_unknown_remote_exits_1(runner, tmp_path):
    remote = tmp_path / "remote"
    remote.mkdir()
    result = runner.invoke(main, ["import", "--endpoint", str(remote), "--remote-id", "zz"])
    assert result.exit_code == 1


def test_charts_gantt_json(runner, corpus_file):
    result = runner.invoke(
        main, ["charts", "gantt", "--project", corpus_file, "--text", "corpus-00"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["text"] == "corpus-00"
    assert doc["lanes"]


def test_charts_stacked_csv(runner, corpus_file):
    result = runner.invoke(
        main,
        [
            "charts", "stacked", "--project", corpus_file,
            "--text", "corpus-00", "--bin", "50", "--format", "csv",
        ],
    )
    assert result.exit_code == 0
    assert result.output.startswith("bin_start,tag,count\n")


def test_charts_sunburst_and_gallery(runner, corpus_file):
    sb = runner.invoke(main, ["charts", "sunburst", "--project", corpus_file])
    assert sb.exit_code == 0
    assert json.loads(sb.output)["count"] > 0

    gal = runner.invoke(
        main, ["charts", "gallery", "--project", corpus_file, "--tags", "metaphor"]
    )
    assert gal.exit_code == 0
    assert len(json.loads(gal.output)["entries"]) == 12


def test_charts_csv_only_for_stacked(runner, corpus_file):
    result = runner.invoke(
        main, ["charts", "gantt", "--project", corpus_file, "--text", "corpus-00", "--format", "csv"]
    )
    assert result.exit_code == 1


def test_matrix_csv_matches_engine(runner, corpus_file):
    result = runner.invoke(
        main,
        ["matrix", "--project", corpus_file, "--tag", "metaphor", "--radius", "1", "--format", "csv"],
    )
    assert result.exit_code == 0
    expected = similarity_matrix(load_project(corpus_file), "metaphor", 1).to_csv()
    assert result.output == expected
    # symmetric, unit diagonal
    lines = result.output.strip().split("\n")
    header = lines[0].split(",")[1:]
    cells = {
        (row.split(",")[0], header[j]): row.split(",")[j + 1]
        for row in lines[1:]
        for j in range(len(header))
    }
    for a in header:
        assert cells[(a, a)] == "1.000000"
        for b in header:
            assert cells[(a, b)] == cells[(b, a)]


def test_matrix_deterministic_across_runs_and_workers(runner, corpus_file):
    outputs = []
    for workers in ("1", "8", "1"):
        result = runner.invoke(
            main,
            [
                "matrix", "--project", corpus_file, "--tag", "metaphor",
                "--format", "json", "--workers", workers,
            ],
        )
        assert result.exit_code == 0
        outputs.append(result.output)
    assert outputs[0] == outputs[1] == outputs[2]


def test_matrix_unknown_tag_exits_1(runner, corpus_file):
    result = runner.invoke(main, ["matrix", "--project", corpus_file, "--tag", "zz"])
    assert result.exit_code == 1


def test_heatmap_svg(runner, corpus_file, tmp_path):
    out = tmp_path / "heat.svg"
    result = runner.invoke(
        main, ["heatmap", "--project", corpus_file, "--tag", "metaphor", "--out", str(out)]
    )
    assert result.exit_code == 0
    svg = out.read_text()
    assert svg.startswith("<svg")
    assert 'fill="#ff0000"' in svg  # saturated diagonal
    assert "Poem 1" in svg


def test_rank_output(runner, corpus_file):
    result = runner.invoke(
        main, ["rank", "--project", corpus_file, "--tag", "metaphor", "--target", "corpus-00"]
    )
    assert result.exit_code == 0
    lines = result.output.strip().split("\n")
    assert len(lines) == 11
    scores = [float(line.split("\t")[1]) for line in lines]
    assert scores == sorted(scores, reverse=True)


def test_evaluate_faithful_rater(runner, tmp_path):
    path = tmp_path / "eval.json"
    save_project(similarity_corpus(n_texts=16, length=200, project_id="ev"), path)
    result = runner.invoke(
        main,
        ["evaluate", "--project", str(path), "--tag", "metaphor", "--seed", "3", "--rater", "faithful"],
    )
    assert result.exit_code == 0
    assert "trial,target,last_ranked_provenance,hit\n" in result.output
    assert "least-similar hit rate" in result.output


def test_evaluate_small_corpus_exits_1(runner, corpus_file, tmp_path):
    path = tmp_path / "small.json"
    save_project(breakdown_project(), path)
    result = runner.invoke(main, ["evaluate", "--project", str(path), "--tag", "metaphor"])
    assert result.exit_code == 1


def test_bench_smoke(runner):
    result = runner.invoke(
        main, ["bench", "--lengths", "64,128", "--trials", "1", "--seed", "1"]
    )
    assert result.exit_code == 0
    assert "doubling ratios" in result.output
    assert result.output.splitlines()[0].split() == ["length", "exact_s", "fastdtw_s"]


def test_bench_bad_lengths_is_usage_error(runner):
    assert runner.invoke(main, ["bench", "--lengths", "a,b"]).exit_code == 2
