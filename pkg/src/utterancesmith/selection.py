"""Fidelity filtering and greedy n-gram diversity selection.

Candidates first pass a similarity gate against their seed (strictly above
``theta``).  Selection then repeatedly takes the candidate adding the most new
unique n-grams to the running selection; it is kept only when that gain
exceeds ``gamma``, and is removed from the pool either way, until
``target_size`` sentences are selected or the pool is empty.  Ties in the
argmax go to the earliest input position, which makes the whole procedure
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from sklearn.base import BaseEstimator

from .embedding import HashingSentenceEmbedder, cosine_similarity
from .generation import CandidateSentence
from .text import sentence_ngrams, tokenize
from .validation import (
    check_ngram_orders,
    check_positive_int,
    check_unit_interval,
)

SimilarityFn = Callable[[str, str], float]

DEFAULT_THETA = 0.4
DEFAULT_GAMMA = 1
DEFAULT_TARGET_SIZE = 5
DEFAULT_NGRAM_ORDERS = (1, 2, 3)


def embedding_similarity(embedder=None) -> SimilarityFn:
    """Similarity = cosine of sentence embeddings (the default gate)."""
    embedder = embedder or HashingSentenceEmbedder()
    cache: dict[str, object] = {}

    def similarity(a: str, b: str) -> float:
        for text in (a, b):
            if text not in cache:
                cache[text] = embedder.embed(text)
        return cosine_similarity(cache[a], cache[b])

    return similarity


def jaccard_similarity(a: str, b: str) -> float:
    """Token-set Jaccard; a transparent gate for tests and debugging."""
    ta, tb = set(tokenize(a)), set(tokenize(b))
    if not ta and not tb:
        return 1.0
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / len(ta | tb)


@dataclass(frozen=True)
class SelectionConfig:
    """Knobs for one selection run (per seed)."""

    theta: float = DEFAULT_THETA
    gamma: int = DEFAULT_GAMMA
    target_size: int = DEFAULT_TARGET_SIZE
    ngram_orders: tuple[int, ...] = DEFAULT_NGRAM_ORDERS

    def __post_init__(self):
        check_unit_interval(self.theta, "theta")
        if int(self.gamma) < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        check_positive_int(self.target_size, "target_size")
        object.__setattr__(self, "ngram_orders", check_ngram_orders(self.ngram_orders))

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "gamma": self.gamma,
            "target_size": self.target_size,
            "ngram_orders": list(self.ngram_orders),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SelectionConfig":
        return cls(
            theta=float(data.get("theta", DEFAULT_THETA)),
            gamma=int(data.get("gamma", DEFAULT_GAMMA)),
            target_size=int(data.get("target_size", DEFAULT_TARGET_SIZE)),
            ngram_orders=tuple(data.get("ngram_orders", DEFAULT_NGRAM_ORDERS)),
        )


@dataclass(frozen=True)
class SelectionStep:
    candidate: CandidateSentence
    delta_ngram: int
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate.to_dict(),
            "delta_ngram": self.delta_ngram,
            "accepted": self.accepted,
        }


@dataclass
class SelectionTrace:
    """Everything needed to explain why each sentence was kept or not."""

    filtered_out: list[tuple[CandidateSentence, float]] = field(default_factory=list)
    steps: list[SelectionStep] = field(default_factory=list)
    selected: list[CandidateSentence] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "filtered_out": [
                {"candidate": c.to_dict(), "similarity": s}
                for c, s in self.filtered_out
            ],
            "steps": [step.to_dict() for step in self.steps],
            "selected": [c.to_dict() for c in self.selected],
        }


def _score(
    candidates: Sequence[CandidateSentence],
    seed: str,
    similarity: Optional[SimilarityFn],
) -> list[tuple[CandidateSentence, float]]:
    """Similarity of every candidate to the seed, computed once and cached
    on the candidate itself."""
    similarity = similarity or embedding_similarity()
    scored = []
    for candidate in candidates:
        value = float(similarity(candidate.text, seed))
        scored.append((replace(candidate, similarity_to_seed=value), value))
    return scored


def fidelity_filter(
    candidates: Sequence[CandidateSentence],
    seed: str,
    theta: float,
    similarity: Optional[SimilarityFn] = None,
) -> list[CandidateSentence]:
    """Keep candidates strictly more similar to the seed than ``theta``.

    Input order is preserved and each survivor carries its similarity.
    """
    check_unit_interval(theta, "theta")
    return [c for c, value in _score(candidates, seed, similarity) if value > theta]


def select_sentences(
    candidates: Sequence[CandidateSentence],
    seed: str,
    config: SelectionConfig | None = None,
    similarity: Optional[SimilarityFn] = None,
) -> SelectionTrace:
    """Run the full filter-then-greedy-select procedure for one seed.

    The loop below is the literal greedy procedure; per-candidate n-gram sets
    are precomputed, but every step still recomputes its gain against the
    running union so the trace is exactly the unoptimized execution.
    """
    config = config or SelectionConfig()
    trace = SelectionTrace()

    pool: list[tuple[CandidateSentence, frozenset]] = []
    for candidate, value in _score(candidates, seed, similarity):
        if value > config.theta:
            grams = frozenset(sentence_ngrams(tokenize(candidate.text), config.ngram_orders))
            pool.append((candidate, grams))
        else:
            trace.filtered_out.append((candidate, value))

    selected_grams: set = set()
    while pool and len(trace.selected) < config.target_size:
        best_index = 0
        best_gain = -1
        for index, (_, grams) in enumerate(pool):
            gain = len(grams - selected_grams)
            if gain > best_gain:
                best_index, best_gain = index, gain
        candidate, grams = pool.pop(best_index)
        accepted = best_gain > config.gamma
        if accepted:
            trace.selected.append(candidate)
            selected_grams |= grams
        trace.steps.append(
            SelectionStep(candidate=candidate, delta_ngram=best_gain, accepted=accepted)
        )
    return trace


class SentenceSelector(BaseEstimator):
    """Estimator-style wrapper so selection composes with parameter tooling."""

    def __init__(
        self,
        theta: float = DEFAULT_THETA,
        gamma: int = DEFAULT_GAMMA,
        target_size: int = DEFAULT_TARGET_SIZE,
        ngram_orders: tuple[int, ...] = DEFAULT_NGRAM_ORDERS,
        similarity: Optional[SimilarityFn] = None,
    ):
        self.theta = theta
        self.gamma = gamma
        self.target_size = target_size
        self.ngram_orders = ngram_orders
        self.similarity = similarity

    def config(self) -> SelectionConfig:
        return SelectionConfig(
            theta=self.theta,
            gamma=self.gamma,
            target_size=self.target_size,
            ngram_orders=tuple(self.ngram_orders),
        )

    def select(
        self, candidates: Sequence[CandidateSentence], seed_text: str
    ) -> SelectionTrace:
        return select_sentences(candidates, seed_text, self.config(), self.similarity)
