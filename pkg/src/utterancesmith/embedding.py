"""Signed feature-hashing sentence embeddings.

The layout is normative and bit-exact: features are word unigrams ("w1:"),
word bigrams ("w2:", tokens joined by one space) and character trigrams of the
space-joined token string ("c3:"); each feature is hashed with 64-bit FNV-1a,
lands at index ``hash % dim`` with sign +1 when the top hash bit is 0 and -1
otherwise, once per occurrence; the vector is then L2-normalized.  An empty
feature set embeds to the zero vector.

Swapping in a neural sentence encoder is a matter of providing any object
with the same ``embed``/``transform`` surface (see ``RemoteEmbedder`` in the
generation module).
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .hashing import fnv1a_64
from .text import tokenize
from .validation import check_same_dimension, check_texts

DEFAULT_DIM = 256

_SIGN_BIT = 1 << 63


def _features(text: str) -> Iterator[str]:
    tokens = tokenize(text)
    for tok in tokens:
        yield "w1:" + tok
    for a, b in zip(tokens, tokens[1:]):
        yield "w2:" + a + " " + b
    joined = " ".join(tokens)
    for i in range(len(joined) - 2):
        yield "c3:" + joined[i : i + 3]


def embed_text(text: str, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Embed one sentence; returns a float64 vector of length ``dim``."""
    vec = np.zeros(dim, dtype=np.float64)
    for feature in _features(text):
        h = fnv1a_64(feature.encode("utf-8"))
        sign = 1.0 if (h & _SIGN_BIT) == 0 else -1.0
        vec[h % dim] += sign
    norm = float(np.sqrt(np.dot(vec, vec)))
    if norm > 0.0:
        vec /= norm
    return vec


class HashingSentenceEmbedder(TransformerMixin, BaseEstimator):
    """Stateless sentence-to-vector transformer.

    ``fit`` is a no-op (nothing is learned); it exists so the embedder slots
    into pipelines and grid searches alongside other transformers.
    """

    def __init__(self, dim: int = DEFAULT_DIM):
        self.dim = dim

    def fit(self, X=None, y=None):
        return self

    def transform(self, X: Iterable[str]) -> np.ndarray:
        texts = check_texts(X)
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            out[i] = embed_text(text, self.dim)
        return out

    def embed(self, text: str) -> np.ndarray:
        return embed_text(text, self.dim)


def cosine_similarity(a, b) -> float:
    """Cosine of two vectors, clamped into [-1, 1]; 0.0 when either norm is 0.

    The clamp only ever removes float rounding spill (at most a few ulps on
    identical vectors), keeping the stated range an actual guarantee.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_same_dimension(a, b)
    na = float(np.sqrt(np.dot(a, a)))
    nb = float(np.sqrt(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, max(-1.0, float(np.dot(a, b) / (na * nb))))


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_same_dimension(a, b)
    diff = a - b
    return float(np.sqrt(np.dot(diff, diff)))
