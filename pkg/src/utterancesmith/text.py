"""Deterministic text primitives: tokenization and unique-n-gram counting."""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .validation import check_ngram_orders


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, trim non-alphanumeric edges.

    Leading and trailing characters that are neither letters nor digits are
    stripped from each token; interior punctuation survives ("9a.m." keeps its
    dots but loses the trailing one).  Tokens emptied by stripping are dropped.
    """
    tokens = []
    for raw in text.lower().split():
        start = 0
        end = len(raw)
        while start < end and not raw[start].isalnum():
            start += 1
        while end > start and not raw[end - 1].isalnum():
            end -= 1
        if end > start:
            tokens.append(raw[start:end])
    return tokens


def iter_ngrams(tokens: Sequence[str], order: int) -> Iterator[tuple[str, ...]]:
    """Contiguous n-grams of one order; none if the sentence is too short."""
    for i in range(len(tokens) - order + 1):
        yield tuple(tokens[i : i + order])


def sentence_ngrams(
    tokens: Sequence[str], orders: Iterable[int]
) -> set[tuple[str, ...]]:
    """All n-grams of a sentence across the given orders, as a set.

    An n-gram is identified by its token tuple; tuples of different lengths
    never collide, so one set covers all orders.
    """
    grams: set[tuple[str, ...]] = set()
    for order in check_ngram_orders(orders):
        grams.update(iter_ngrams(tokens, order))
    return grams


def count_unique_ngrams(
    sentences: Iterable[Sequence[str]], orders: Iterable[int]
) -> int:
    """Size of the union of n-grams over all sentences and orders.

    Set semantics throughout: an n-gram occurring in several sentences (or
    several times in one) counts once.
    """
    orders = check_ngram_orders(orders)
    grams: set[tuple[str, ...]] = set()
    for tokens in sentences:
        for order in orders:
            grams.update(iter_ngrams(tokens, order))
    return len(grams)
