"""Tag-vector similarity between annotated texts.

Each (text, tag) pair becomes a binary occupancy vector over the text's
code points. Pairs of vectors are aligned with FastDTW, the warping path
is condensed into a time-alignment decomposition (advance / delay / phase),
rescaled to [0, 1], and multiplied by a sparseness weight so that texts
with next to no occurrences of a tag cannot dominate the ranking. A zero
weight short-circuits the alignment entirely, which is where most of the
pairwise speedup on sparse corpora comes from.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dtw import Path, fastdtw
from .model import Project

# Density at which the sparseness penalty saturates: one tagged code point
# per ten is already "dense enough".
_DENSITY_FLOOR = 10.0


@dataclass(frozen=True, slots=True)
class BinaryTagVector:
    """Per-code-point 0/1 occupancy of one tag in one text, bit-packed."""

    text: str
    tag: str
    length: int
    bits: bytes
    hamming_weight: int

    @classmethod
    def from_bools(cls, text: str, tag: str, flags: np.ndarray) -> "BinaryTagVector":
        flags = np.asarray(flags, dtype=bool)
        return cls(
            text=text,
            tag=tag,
            length=int(flags.shape[0]),
            bits=np.packbits(flags).tobytes(),
            hamming_weight=int(flags.sum()),
        )

    def to_bools(self) -> np.ndarray:
        unpacked = np.unpackbits(np.frombuffer(self.bits, dtype=np.uint8))
        return unpacked[: self.length].astype(bool)

    def to_floats(self) -> np.ndarray:
        return self.to_bools().astype(np.float64)

    @property
    def density(self) -> float:
        return self.hamming_weight / self.length if self.length else 0.0


def vectorize(
    project: Project, text_id: str, tag_id: str, rollup: bool = False
) -> BinaryTagVector:
    """Occupancy vector for a tag in a text.

    With ``rollup`` the tag's whole subtree counts, so a child-tag
    annotation lights up the parent's vector too.
    """
    text = project.text_by_id(text_id)
    project.tag_by_id(tag_id)  # raises KeyError on unknown tag
    wanted = project.tag_subtree(tag_id) if rollup else {tag_id}
    flags = np.zeros(text.length, dtype=bool)
    for ann in project.annotations:
        if ann.text == text_id and ann.tag in wanted:
            for start, end in ann.ranges:
                flags[start:end] = True
    return BinaryTagVector.from_bools(text_id, tag_id, flags)


@dataclass(frozen=True, slots=True)
class TamScore:
    """Advance/delay/phase decomposition of a warping path.

    ``tam = rho_advance + rho_delay + (1 - rho_phase)`` lives in [0, 3]
    (0 = perfectly in phase); ``similarity = 1 - tam/3`` maps it to [0, 1].
    """

    rho_advance: float
    rho_delay: float
    rho_phase: float
    tam: float
    similarity: float


def tam(path: Path | Sequence[tuple[int, int]], n: int, m: int) -> TamScore:
    """Score a warping path over sequences of lengths ``n`` and ``m``.

    Steps that advance only the first sequence count as advance, only the
    second as delay, both as in-phase. Each fraction is normalized by the
    number of steps a pure path of that kind would take; a zero denominator
    zeroes the term.
    """
    path = tuple(path)
    if not path or path[0] != (1, 1) or path[-1] != (n, m):
        raise ValueError("path must run from (1, 1) to (n, m)")
    advance = delay = diagonal = 0
    for (i0, j0), (i1, j1) in zip(path, path[1:]):
        di, dj = i1 - i0, j1 - j0
        if di == 1 and dj == 1:
            diagonal += 1
        elif di == 1 and dj == 0:
            advance += 1
        elif di == 0 and dj == 1:
            delay += 1
        else:
            raise ValueError(f"invalid step ({di}, {dj}) in warping path")
    rho_advance = advance / (n - 1) if n > 1 else 0.0
    rho_delay = delay / (m - 1) if m > 1 else 0.0
    shorter = min(n - 1, m - 1)
    rho_phase = diagonal / shorter if shorter > 0 else 0.0
    value = rho_advance + rho_delay + (1.0 - rho_phase)
    return TamScore(
        rho_advance=rho_advance,
        rho_delay=rho_delay,
        rho_phase=rho_phase,
        tam=value,
        similarity=1.0 - value / 3.0,
    )


def weight(v1: BinaryTagVector, v2: BinaryTagVector) -> float:
    """Sparseness penalty: min(10*H(v1)/|v1|, 1) * min(10*H(v2)/|v2|, 1).

    Each factor ramps linearly from 0 (empty vector) to 1 (density 0.1 or
    above), so a pair of texts where a tag barely occurs scores near zero
    even when the alignment looks perfect.
    """
    if v1.length < 1 or v2.length < 1:
        raise ValueError("vectors must have length >= 1")
    f1 = min(_DENSITY_FLOOR * v1.hamming_weight / v1.length, 1.0)
    f2 = min(_DENSITY_FLOOR * v2.hamming_weight / v2.length, 1.0)
    return f1 * f2


@dataclass(frozen=True, slots=True)
class SimilarityCell:
    """One heatmap cell: a pair of texts scored for one tag."""

    text_a: str
    text_b: str
    tag: str
    base_similarity: float
    weight: float
    score: float

    def transposed(self) -> "SimilarityCell":
        return SimilarityCell(
            text_a=self.text_b,
            text_b=self.text_a,
            tag=self.tag,
            base_similarity=self.base_similarity,
            weight=self.weight,
            score=self.score,
        )


def pair_similarity(
    v1: BinaryTagVector, v2: BinaryTagVector, radius: int = 1
) -> SimilarityCell:
    """Weighted alignment similarity of two same-tag vectors.

    A zero weight (either vector empty) skips the alignment entirely and
    yields score 0; enabling the skip never changes the score, only the
    work done.
    """
    if v1.tag != v2.tag:
        raise ValueError(f"vectors are for different tags: {v1.tag!r} vs {v2.tag!r}")
    w = weight(v1, v2) if v1.length and v2.length else 0.0
    if w == 0.0:
        return SimilarityCell(v1.text, v2.text, v1.tag, 0.0, w, 0.0)
    alignment = fastdtw(v1.to_floats(), v2.to_floats(), radius)
    base = tam(alignment.path, v1.length, v2.length).similarity
    return SimilarityCell(v1.text, v2.text, v1.tag, base, w, base * w)


class SimilarityMatrix:
    """Symmetric pairwise score matrix over a project's texts for one tag.

    The diagonal is fixed at 1 by convention and never enters rankings.
    """

    def __init__(
        self, tag: str, radius: int, texts: Sequence[str], cells: Iterable[SimilarityCell]
    ):
        self.tag = tag
        self.radius = radius
        self.texts = tuple(texts)
        self.cells: dict[tuple[str, str], SimilarityCell] = {}
        for cell in cells:
            self.cells[(cell.text_a, cell.text_b)] = cell
            self.cells[(cell.text_b, cell.text_a)] = cell.transposed()

    def cell(self, a: str, b: str) -> SimilarityCell:
        return self.cells[(a, b)]

    def score(self, a: str, b: str) -> float:
        if a == b:
            if a not in self.texts:
                raise KeyError(f"unknown text: {a!r}")
            return 1.0
        return self.cells[(a, b)].score

    def rows(self) -> list[list[float]]:
        return [[self.score(a, b) for b in self.texts] for a in self.texts]

    def to_jsonable(self) -> dict:
        return {
            "tag": self.tag,
            "radius": self.radius,
            "texts": list(self.texts),
            "scores": self.rows(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), ensure_ascii=False, separators=(",", ":"))

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.texts)]
        for a in self.texts:
            row = ",".join(f"{self.score(a, b):.6f}" for b in self.texts)
            lines.append(f"{a},{row}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonable(cls, doc: dict) -> "SimilarityMatrix":
        texts = list(doc["texts"])
        tag = doc["tag"]
        cells = []
        for i, a in enumerate(texts):
            for j in range(i + 1, len(texts)):
                score = doc["scores"][i][j]
                cells.append(SimilarityCell(a, texts[j], tag, score, 1.0, score))
        return cls(tag, doc["radius"], texts, cells)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimilarityMatrix)
            and self.to_jsonable() == other.to_jsonable()
        )


def similarity_matrix(
    project: Project,
    tag_id: str,
    radius: int = 1,
    rollup: bool = False,
    workers: int | None = None,
) -> SimilarityMatrix:
    """All unordered pair scores for one tag.

    Pairs are independent, so they fan out across a thread pool; each score
    is computed in isolation and only placed into the matrix, which keeps
    the result identical for any worker count.
    """
    if len(project.texts) < 2:
        raise ValueError("similarity matrix needs at least 2 texts")
    vectors = {
        t.id: vectorize(project, t.id, tag_id, rollup=rollup) for t in project.texts
    }
    ids = [t.id for t in project.texts]
    pairs = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1 :]]

    def compute(pair: tuple[str, str]) -> SimilarityCell:
        a, b = pair
        return pair_similarity(vectors[a], vectors[b], radius)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(compute, pairs))
    else:
        cells = [compute(p) for p in pairs]
    return SimilarityMatrix(tag_id, radius, ids, cells)


def rank_similar(matrix: SimilarityMatrix, target: str) -> list[tuple[str, float]]:
    """Other texts by descending score; ties break on ascending text id."""
    if target not in matrix.texts:
        raise KeyError(f"unknown text: {target!r}")
    others = [t for t in matrix.texts if t != target]
    return sorted(
        ((t, matrix.score(target, t)) for t in others),
        key=lambda pair: (-pair[1], pair[0]),
    )


def mean_matrix(matrices: Sequence[SimilarityMatrix]) -> SimilarityMatrix:
    """Unweighted mean of per-tag matrices over the same texts.

    An extrapolation beyond the per-tag scores the rest of the system
    reports; offered for exploration only.
    """
    if not matrices:
        raise ValueError("no matrices to aggregate")
    first = matrices[0]
    for other in matrices[1:]:
        if other.texts != first.texts:
            raise ValueError("matrices cover different text sets")
    k = len(matrices)
    cells = []
    for i, a in enumerate(first.texts):
        for b in first.texts[i + 1 :]:
            score = sum(m.score(a, b) for m in matrices) / k
            cells.append(SimilarityCell(a, b, "mean", score, 1.0, score))
    return SimilarityMatrix("mean", first.radius, first.texts, cells)
