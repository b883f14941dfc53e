"""Sample diverse / random / narrow input groups for one intent.

The groups model three qualities of user-provided example utterances:

* diverse: cluster the sentences into n groups, take the member nearest each
  cluster center;
* narrow: repeatedly take the sentence globally nearest the smallest
  cluster's center (it may cross cluster boundaries);
* random: n distinct seeded draws.

All ties break by input order and all randomness is seeded, so a result is a
pure function of (sentences, n, seed, embedder).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .cluster import kmeans
from .embedding import HashingSentenceEmbedder
from .errors import TooFewSentences
from .hashing import SplitMix64
from .validation import check_positive_int


@dataclass(frozen=True)
class SamplingResult:
    diverse: tuple[str, ...]
    random: tuple[str, ...]
    narrow: tuple[str, ...]
    cluster_assignments: tuple[int, ...]
    smallest_cluster: int

    def group(self, input_type: str) -> tuple[str, ...]:
        if input_type not in ("diverse", "random", "narrow"):
            raise ValueError(f"unknown input type {input_type!r}")
        return getattr(self, input_type)

    def to_dict(self) -> dict:
        return {
            "diverse": list(self.diverse),
            "random": list(self.random),
            "narrow": list(self.narrow),
            "cluster_assignments": list(self.cluster_assignments),
            "smallest_cluster": self.smallest_cluster,
        }


def _embed_all(sentences: Sequence[str], embedder) -> np.ndarray:
    if hasattr(embedder, "transform"):
        return np.asarray(embedder.transform(list(sentences)), dtype=np.float64)
    return np.stack([np.asarray(embedder.embed(s), dtype=np.float64) for s in sentences])


def _nearest(points: np.ndarray, center: np.ndarray, indices: Sequence[int]) -> int:
    """Index (among ``indices``) nearest to center; earliest wins ties."""
    best = indices[0]
    best_dist = float(np.linalg.norm(points[best] - center))
    for i in indices[1:]:
        dist = float(np.linalg.norm(points[i] - center))
        if dist < best_dist:
            best, best_dist = i, dist
    return best


def sample_representatives(
    intent_sentences: Sequence[str],
    n: int,
    seed: int,
    embedder=None,
) -> SamplingResult:
    """Build the three n-sentence groups for one intent's sentences."""
    check_positive_int(n, "n")
    sentences = list(intent_sentences)
    if len(sentences) < n:
        raise TooFewSentences(
            f"need at least n={n} sentences, got {len(sentences)}"
        )
    embedder = embedder or HashingSentenceEmbedder()
    points = _embed_all(sentences, embedder)

    master = SplitMix64(seed)
    clustering_seed = master.next_u64()
    draw_rng = SplitMix64(master.next_u64())

    result = kmeans(points, n, clustering_seed)
    assignments = result.assignments

    diverse_idx = []
    for cluster in range(n):
        members = [i for i, a in enumerate(assignments) if a == cluster]
        diverse_idx.append(_nearest(points, result.centers[cluster], members))

    smallest = min(range(n), key=lambda c: (result.sizes[c], c))
    smallest_center = result.centers[smallest]

    narrow_idx = []
    remaining = list(range(len(sentences)))
    for _ in range(n):
        pick = _nearest(points, smallest_center, remaining)
        narrow_idx.append(pick)
        remaining.remove(pick)

    random_idx = draw_rng.sample_indices(len(sentences), n)

    return SamplingResult(
        diverse=tuple(sentences[i] for i in diverse_idx),
        random=tuple(sentences[i] for i in random_idx),
        narrow=tuple(sentences[i] for i in narrow_idx),
        cluster_assignments=assignments,
        smallest_cluster=smallest,
    )


class RepresentativeSampler(BaseEstimator):
    """Estimator-style wrapper around :func:`sample_representatives`."""

    def __init__(self, n: int = 2, seed: int = 0, embedder: Optional[object] = None):
        self.n = n
        self.seed = seed
        self.embedder = embedder

    def sample(self, sentences: Sequence[str]) -> SamplingResult:
        return sample_representatives(sentences, self.n, self.seed, self.embedder)
