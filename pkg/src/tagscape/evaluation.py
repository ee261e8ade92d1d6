"""Human ranking evaluation of the similarity scores.

Each trial presents a target text plus five candidates drawn from the
automatic ranking: the top three, one moderately similar pick from ranks
4-10, and one from the remaining texts at random. Raters order the five
by similarity to the target; the headline statistic is how often the
random candidate lands last. Simulated raters stand in for the human so
the statistic can be checked at scale.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Mapping, Sequence

from .similarity import SimilarityMatrix, rank_similar

TOP3 = "top3"
MID = "mid"
RANDOM = "random"


class EvaluationError(Exception):
    pass


class CorpusTooSmall(EvaluationError):
    """Not enough ranked texts to fill ranks 1-10 plus a random pool."""


@dataclass(frozen=True, slots=True)
class Trial:
    id: str
    target: str
    candidates: tuple[str, ...]
    provenance: tuple[str, ...]  # parallel to candidates
    seed: int

    def provenance_of(self, candidate: str) -> str:
        return self.provenance[self.candidates.index(candidate)]


@dataclass(frozen=True, slots=True)
class RaterResponse:
    trial: str
    ranking: tuple[str, ...]  # most similar first
    rater: str
    timestamp: str


@dataclass(frozen=True, slots=True)
class TrialOutcome:
    trial: str
    target: str
    last_ranked_provenance: str
    hit: bool


@dataclass(frozen=True, slots=True)
class EvaluationReport:
    trial_count: int
    least_similar_hit_rate: float | None  # None when there are no responses
    details: tuple[TrialOutcome, ...]

    def to_csv(self) -> str:
        lines = ["trial,target,last_ranked_provenance,hit"]
        for d in self.details:
            lines.append(
                f"{d.trial},{d.target},{d.last_ranked_provenance},{int(d.hit)}"
            )
        return "\n".join(lines) + "\n"

    def to_jsonable(self) -> dict:
        return {
            "trials": self.trial_count,
            "least_similar_hit_rate": self.least_similar_hit_rate,
            "details": [
                {
                    "trial": d.trial,
                    "target": d.target,
                    "last_ranked_provenance": d.last_ranked_provenance,
                    "hit": d.hit,
                }
                for d in self.details
            ],
        }


def _target_rng(seed: int, target: str) -> random.Random:
    # hash() is salted per process; derive a process-stable stream instead
    digest = hashlib.sha256(f"{seed}\x00{target}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def build_trials(
    matrix: SimilarityMatrix, targets: Sequence[str], seed: int
) -> list[Trial]:
    """One trial per target, reproducible from (matrix, targets, seed).

    Candidates: ranks 1-3, a uniform draw from ranks 4-10, and a uniform
    draw from ranks 11+, shuffled for presentation. Requires every target
    to have at least 11 other scored texts.
    """
    trials = []
    for target in targets:
        ranked = rank_similar(matrix, target)
        if len(ranked) < 11:
            raise CorpusTooSmall(
                f"target {target!r} has {len(ranked)} ranked texts; "
                "need ranks 1-10 plus a non-empty random pool"
            )
        rng = _target_rng(seed, target)
        top3 = [t for t, _ in ranked[:3]]
        mid = rng.choice([t for t, _ in ranked[3:10]])
        rand = rng.choice([t for t, _ in ranked[10:]])
        entries = [(c, TOP3) for c in top3] + [(mid, MID), (rand, RANDOM)]
        rng.shuffle(entries)
        candidates = tuple(c for c, _ in entries)
        provenance = tuple(p for _, p in entries)
        # content-addressed, URL-safe id: identical trials coincide, trials
        # from different matrices never collide
        digest = hashlib.sha256(
            "\x00".join([target, str(seed), *candidates, *provenance]).encode("utf-8")
        ).hexdigest()[:12]
        trials.append(
            Trial(
                id=f"t-{digest}",
                target=target,
                candidates=candidates,
                provenance=provenance,
                seed=seed,
            )
        )
    return trials


def trials_to_json(trials: Sequence[Trial]) -> str:
    return json.dumps(
        [
            {
                "id": t.id,
                "target": t.target,
                "candidates": list(t.candidates),
                "provenance": list(t.provenance),
                "seed": t.seed,
            }
            for t in trials
        ],
        ensure_ascii=False,
        separators=(",", ":"),
    )


def record_response(
    trial: Trial,
    ranking: Sequence[str],
    rater: str,
    timestamp: str | None = None,
) -> RaterResponse:
    """Validate a complete ranking and stamp it. Storage (and the
    overwrite-on-resubmit rule) is the caller's concern."""
    if sorted(ranking) != sorted(trial.candidates):
        raise EvaluationError(
            f"ranking must be a permutation of the trial's 5 candidates, got {list(ranking)!r}"
        )
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat()
    return RaterResponse(
        trial=trial.id, ranking=tuple(ranking), rater=rater, timestamp=timestamp
    )


def score_responses(
    responses: Iterable[RaterResponse], trials: Iterable[Trial] | Mapping[str, Trial]
) -> EvaluationReport:
    """Fraction of responses whose last-ranked candidate was the random one."""
    by_id = trials if isinstance(trials, Mapping) else {t.id: t for t in trials}
    details = []
    hits = 0
    for resp in responses:
        trial = by_id.get(resp.trial)
        if trial is None:
            raise EvaluationError(f"response references unknown trial {resp.trial!r}")
        last = resp.ranking[-1]
        prov = trial.provenance_of(last)
        hit = prov == RANDOM
        hits += hit
        details.append(TrialOutcome(trial.id, trial.target, prov, hit))
    if not details:
        return EvaluationReport(0, None, ())
    return EvaluationReport(len(details), hits / len(details), tuple(details))


# ---------------------------------------------------------------------------
# Simulated raters
# ---------------------------------------------------------------------------


def score_faithful_rater(trial: Trial, matrix: SimilarityMatrix) -> list[str]:
    """Ranks exactly by matrix score (ties by ascending id)."""
    return sorted(
        trial.candidates, key=lambda c: (-matrix.score(trial.target, c), c)
    )


def noisy_rater(
    trial: Trial, matrix: SimilarityMatrix, sigma: float, rng: random.Random
) -> list[str]:
    """Score-based ranking with Gaussian perturbation of each score."""
    noisy = {
        c: matrix.score(trial.target, c) + rng.gauss(0.0, sigma)
        for c in trial.candidates
    }
    return sorted(trial.candidates, key=lambda c: (-noisy[c], c))


def uniform_random_rater(trial: Trial, rng: random.Random) -> list[str]:
    order = list(trial.candidates)
    rng.shuffle(order)
    return order
