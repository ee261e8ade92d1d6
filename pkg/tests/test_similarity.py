import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tagscape import similarity as sim
from tagscape.model import Annotation, Project, Tag, Tagset, Text
from tagscape.similarity import (
    BinaryTagVector,
    SimilarityMatrix,
    pair_similarity,
    rank_similar,
    similarity_matrix,
    tam,
    vectorize,
    weight,
)


def vec(bits, tag="metaphor", text="t"):
    return BinaryTagVector.from_bools(text, tag, np.array(bits, dtype=bool))


def block_vector(length, start, width, **kw):
    bits = np.zeros(length, dtype=bool)
    bits[start : start + width] = True
    return vec(bits, **kw)


def tiny_project(length=10, annotations=()):
    text = Text("t1", "t", "א" * length)
    ts = Tagset(
        "figurative",
        "fig",
        (
            Tag("metaphor", "Metaphor", "#800080", None, "figurative"),
            Tag("metaphor-noun", "Noun", "#9b59b6", "metaphor", "figurative"),
            Tag("epithet", "Epithet", "#ff0000", None, "figurative"),
        ),
    )
    return Project("p", "p", (text,), (ts,), tuple(annotations))


# -- vectorize ---------------------------------------------------------------


def test_vectorize_marks_annotated_code_points():
    project = tiny_project(10, [Annotation("a1", "t1", "metaphor", ((2, 5),))])
    v = vectorize(project, "t1", "metaphor")
    assert v.to_bools().tolist() == [False, False, True, True, True] + [False] * 5
    assert v.hamming_weight == 3
    assert v.length == 10


def test_vectorize_without_matching_annotations_is_all_zero():
    project = tiny_project(10, [Annotation("a1", "t1", "epithet", ((2, 5),))])
    v = vectorize(project, "t1", "metaphor")
    assert v.hamming_weight == 0
    assert not v.to_bools().any()


def test_vectorize_rollup_includes_subtree():
    project = tiny_project(10, [Annotation("a1", "t1", "metaphor-noun", ((0, 2),))])
    assert vectorize(project, "t1", "metaphor", rollup=False).hamming_weight == 0
    v = vectorize(project, "t1", "metaphor", rollup=True)
    assert v.to_bools().tolist() == [True, True] + [False] * 8


def test_vectorize_unknown_ids():
    project = tiny_project()
    with pytest.raises(KeyError):
        vectorize(project, "nope", "metaphor")
    with pytest.raises(KeyError):
        vectorize(project, "t1", "nope")


def test_vector_bits_round_trip_through_packing():
    rng = np.random.default_rng(0)
    for length in (1, 7, 8, 9, 200):
        bits = rng.random(length) < 0.3
        v = vec(bits)
        assert v.to_bools().tolist() == bits.tolist()
        assert v.hamming_weight == int(bits.sum())


# -- tam ---------------------------------------------------------------------


def test_tam_all_diagonal_is_perfectly_in_phase():
    score = tam(((1, 1), (2, 2), (3, 3)), 3, 3)
    assert score.rho_phase == 1.0
    assert score.tam == 0.0
    assert score.similarity == 1.0


def test_tam_fully_out_of_phase_path():
    score = tam(((1, 1), (2, 1), (3, 1), (3, 2), (3, 3)), 3, 3)
    assert (score.rho_advance, score.rho_delay, score.rho_phase) == (1.0, 1.0, 0.0)
    assert score.tam == 3.0
    assert score.similarity == 0.0


def test_tam_mixed_path_decomposition():
    score = tam(((1, 1), (2, 2), (3, 2)), 3, 2)
    assert score.rho_advance == 0.5
    assert score.rho_delay == 0.0
    assert score.rho_phase == 1.0
    assert score.tam == 0.5
    assert score.similarity == pytest.approx(0.8333, abs=1e-4)


def test_tam_rejects_invalid_paths():
    with pytest.raises(ValueError):
        tam(((1, 1), (3, 3)), 3, 3)  # jump
    with pytest.raises(ValueError):
        tam(((1, 1), (2, 2)), 3, 3)  # wrong endpoint
    with pytest.raises(ValueError):
        tam((), 1, 1)


def random_path(rng, n, m):
    i = j = 1
    path = [(1, 1)]
    while (i, j) != (n, m):
        moves = []
        if i < n and j < m:
            moves.append((1, 1))
        if i < n:
            moves.append((1, 0))
        if j < m:
            moves.append((0, 1))
        di, dj = moves[rng.integers(0, len(moves))]
        i, j = i + di, j + dj
        path.append((i, j))
    return tuple(path)


@given(st.integers(2, 40), st.integers(2, 40), st.integers(0, 2**31 - 1))
@settings(deadline=None, max_examples=120)
def test_tam_bounds_on_random_paths(n, m, seed):
    rng = np.random.default_rng(seed)
    score = tam(random_path(rng, n, m), n, m)
    assert 0.0 <= score.tam <= 3.0
    assert 0.0 <= score.similarity <= 1.0
    assert score.similarity == pytest.approx(1 - score.tam / 3, abs=1e-12)


# -- weight --------------------------------------------------------------------


def test_weight_zero_when_either_vector_is_empty():
    empty = vec([0] * 50)
    dense = vec([1] * 50)
    assert weight(empty, dense) == 0.0
    assert weight(dense, empty) == 0.0


def test_weight_saturates_at_a_tenth_density():
    v = block_vector(100, 0, 10)
    w = block_vector(100, 50, 10)
    assert weight(v, w) == 1.0


def test_weight_product_of_linear_factors():
    v1 = block_vector(200, 0, 5)
    v2 = block_vector(100, 0, 5)
    assert weight(v1, v2) == pytest.approx(0.25 * 0.5)


def test_weight_requires_nonempty_vectors():
    with pytest.raises(ValueError):
        weight(vec([]), vec([1]))


@given(
    st.integers(1, 500), st.integers(1, 500),
    st.integers(0, 500), st.integers(0, 500),
)
@settings(deadline=None, max_examples=200)
def test_weight_bounds_and_formula(l1, l2, h1, h2):
    h1, h2 = min(h1, l1), min(h2, l2)
    rng = np.random.default_rng(h1 * 1001 + h2)

    def make(length, ones):
        bits = np.zeros(length, dtype=bool)
        bits[rng.choice(length, ones, replace=False)] = True
        return vec(bits)

    v1, v2 = make(l1, h1), make(l2, h2)
    w = weight(v1, v2)
    assert 0.0 <= w <= 1.0
    assert w == min(10 * h1 / l1, 1.0) * min(10 * h2 / l2, 1.0)


def test_weight_monotone_in_hamming_weight():
    base = block_vector(300, 0, 4)
    partner = block_vector(300, 0, 40)
    previous = -1.0
    for h in range(0, 40, 4):
        w = weight(block_vector(300, 10, h) if h else vec([0] * 300), partner)
        assert w >= previous
        previous = w


# -- pair similarity ------------------------------------------------------------


def test_identical_dense_vectors_score_one():
    v = block_vector(120, 10, 30)
    cell = pair_similarity(v, v, radius=1)
    assert cell.base_similarity == 1.0
    assert cell.weight == 1.0
    assert cell.score == 1.0


def test_empty_pair_scores_zero_and_skips_alignment(monkeypatch):
    def boom(*args, **kwargs):
        raise AssertionError("alignment ran for a zero-weight pair")

    monkeypatch.setattr(sim, "fastdtw", boom)
    empty1 = vec([0] * 40, text="a")
    empty2 = vec([0] * 60, text="b")
    cell = pair_similarity(empty1, empty2)
    assert cell.score == 0.0
    assert cell.weight == 0.0


def test_shifted_copy_scores_below_one():
    v1 = block_vector(200, 10, 30, text="a")
    v2 = block_vector(200, 40, 30, text="b")
    cell = pair_similarity(v1, v2, radius=1)
    assert cell.weight == 1.0
    assert 0.0 < cell.base_similarity < 1.0
    assert cell.score == cell.base_similarity


def test_pair_similarity_rejects_mixed_tags():
    with pytest.raises(ValueError):
        pair_similarity(vec([1], tag="metaphor"), vec([1], tag="epithet"))


@given(st.integers(0, 2**31 - 1))
@settings(deadline=None, max_examples=30)
def test_skip_optimization_equivalence(seed):
    # score with the skip enabled equals the full computation at score level
    rng = np.random.default_rng(seed)
    length = int(rng.integers(1, 80))
    bits1 = rng.random(length) < rng.uniform(0, 0.08)
    bits2 = rng.random(length) < rng.uniform(0, 0.08)
    v1, v2 = vec(bits1, text="a"), vec(bits2, text="b")
    cell = pair_similarity(v1, v2, radius=1)
    # skip-disabled twin: always run the alignment, then apply the weight
    from tagscape.dtw import fastdtw as real_fastdtw

    w = weight(v1, v2)
    alignment = real_fastdtw(v1.to_floats(), v2.to_floats(), 1)
    full_score = tam(alignment.path, v1.length, v2.length).similarity * w
    assert cell.score == full_score
    assert 0.0 <= cell.score <= 1.0


# -- matrix ----------------------------------------------------------------------


def test_matrix_zero_vector_text_scores_zero_everywhere():
    texts = (
        Text("a", "a", "א" * 40),
        Text("b", "b", "א" * 40),
        Text("c", "c", "א" * 40),
    )
    ts = Tagset("f", "f", (Tag("metaphor", "M", "#800080", None, "f"),))
    anns = (
        Annotation("a1", "a", "metaphor", ((0, 10),)),
        Annotation("b1", "b", "metaphor", ((5, 15),)),
        # text c has no metaphor annotations at all
    )
    project = Project("p", "p", texts, (ts,), anns)
    matrix = similarity_matrix(project, "metaphor")
    assert matrix.score("c", "a") == 0.0
    assert matrix.score("b", "c") == 0.0
    assert matrix.score("c", "c") == 1.0
    assert matrix.score("a", "b") > 0.0


def test_matrix_identical_dense_texts_score_one():
    texts = (Text("a", "a", "א" * 50), Text("b", "b", "א" * 50))
    ts = Tagset("f", "f", (Tag("metaphor", "M", "#800080", None, "f"),))
    anns = (
        Annotation("a1", "a", "metaphor", ((0, 20),)),
        Annotation("b1", "b", "metaphor", ((0, 20),)),
    )
    matrix = similarity_matrix(Project("p", "p", texts, (ts,), anns), "metaphor")
    assert matrix.score("a", "b") == 1.0


def test_matrix_symmetric_and_parallel_deterministic(corpus12):
    sequential = similarity_matrix(corpus12, "metaphor", workers=1)
    parallel = similarity_matrix(corpus12, "metaphor", workers=8)
    assert sequential.to_json() == parallel.to_json()
    for a in sequential.texts:
        for b in sequential.texts:
            assert sequential.score(a, b) == sequential.score(b, a)
            assert 0.0 <= sequential.score(a, b) <= 1.0


def test_matrix_requires_two_texts():
    project = tiny_project()
    with pytest.raises(ValueError):
        similarity_matrix(project, "metaphor")


def test_matrix_exports(corpus12):
    matrix = similarity_matrix(corpus12, "metaphor")
    csv = matrix.to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == "," + ",".join(matrix.texts)
    assert len(lines) == len(matrix.texts) + 1
    first_row = lines[1].split(",")
    assert first_row[0] == matrix.texts[0]
    assert first_row[1] == "1.000000"

    reloaded = SimilarityMatrix.from_jsonable(__import__("json").loads(matrix.to_json()))
    assert reloaded.to_json() == matrix.to_json()


def test_rank_similar_orders_by_score_then_id():
    cells = [
        sim.SimilarityCell("t", "a", "x", 0.9, 1.0, 0.9),
        sim.SimilarityCell("t", "b", "x", 0.5, 1.0, 0.5),
        sim.SimilarityCell("t", "c", "x", 0.1, 1.0, 0.1),
        sim.SimilarityCell("a", "b", "x", 0.0, 1.0, 0.0),
        sim.SimilarityCell("a", "c", "x", 0.0, 1.0, 0.0),
        sim.SimilarityCell("b", "c", "x", 0.0, 1.0, 0.0),
    ]
    matrix = SimilarityMatrix("x", 1, ["t", "a", "b", "c"], cells)
    assert rank_similar(matrix, "t") == [("a", 0.9), ("b", 0.5), ("c", 0.1)]
    assert [t for t, _ in rank_similar(matrix, "a")] == ["t", "b", "c"]
    assert [t for t, _ in rank_similar(matrix, "b")] == ["t", "a", "c"]


def test_rank_similar_tie_break_is_ascending_id():
    cells = [
        sim.SimilarityCell("t", "b", "x", 0.4, 1.0, 0.4),
        sim.SimilarityCell("t", "a", "x", 0.4, 1.0, 0.4),
        sim.SimilarityCell("a", "b", "x", 0.2, 1.0, 0.2),
    ]
    matrix = SimilarityMatrix("x", 1, ["t", "a", "b"], cells)
    assert rank_similar(matrix, "t") == [("a", 0.4), ("b", 0.4)]


def test_rank_similar_unknown_target(corpus12):
    matrix = similarity_matrix(corpus12, "epithet")
    with pytest.raises(KeyError):
        rank_similar(matrix, "nope")


def test_rank_matches_brute_force(corpus12):
    matrix = similarity_matrix(corpus12, "metaphor")
    target = matrix.texts[0]
    expected = sorted(
        ((matrix.score(target, t), t) for t in matrix.texts if t != target),
        key=lambda pair: (-pair[0], pair[1]),
    )
    assert rank_similar(matrix, target) == [(t, s) for s, t in expected]


def test_mean_matrix_averages_tags(corpus12):
    m1 = similarity_matrix(corpus12, "metaphor")
    m2 = similarity_matrix(corpus12, "epithet")
    mean = sim.mean_matrix([m1, m2])
    a, b = mean.texts[0], mean.texts[1]
    assert mean.score(a, b) == pytest.approx((m1.score(a, b) + m2.score(a, b)) / 2)
