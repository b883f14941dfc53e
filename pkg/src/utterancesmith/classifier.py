"""Multinomial naive Bayes intent classifier over unigram+bigram counts.

Deliberately simple and fully deterministic: add-one smoothing with an
explicit unseen-feature bucket, log-space scoring via exact summation
(``math.fsum``) so permuting equally-scored classes cannot flip a tie, and
lexicographically-smallest-intent tie-breaking.  The same unigram+bigram view
of a sentence drives both this model and the n-gram diversity objective, so
more unique n-grams in the training data directly widens the feature space.

The training surface is isolated behind fit/predict/evaluate; a stronger
model can be substituted without touching the rest of the pipeline.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import EmptyIntent, EmptyText, TooFewIntents, UnknownIntentInTest
from .text import tokenize

MODEL_VERSION = 1


def features_of(text: str) -> list[str]:
    """Word unigrams and space-joined bigrams, one entry per occurrence."""
    tokens = tokenize(text)
    return tokens + [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]


@dataclass(frozen=True)
class IntentDataset:
    """Labeled utterances; intent ids are the sorted set of labels."""

    examples: tuple[tuple[str, str], ...]
    intent_ids: tuple[str, ...]

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[str, str]],
        intent_ids: Optional[Iterable[str]] = None,
    ) -> "IntentDataset":
        examples = tuple((str(t), str(i)) for t, i in pairs)
        for text, intent in examples:
            if not text.strip():
                raise ValueError(f"empty text for intent {intent!r}")
        ids = sorted(set(i for _, i in examples).union(intent_ids or ()))
        for _, intent in examples:
            if intent not in ids:
                raise ValueError(f"example intent {intent!r} not in intent_ids")
        return cls(examples=examples, intent_ids=tuple(ids))

    def __len__(self) -> int:
        return len(self.examples)

    def texts_by_intent(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {intent: [] for intent in self.intent_ids}
        for text, intent in self.examples:
            out[intent].append(text)
        return out


@dataclass(frozen=True)
class Prediction:
    intent_id: str
    confidence: float
    ranked: tuple[tuple[str, float], ...]

    def to_dict(self) -> dict:
        return {
            "intent_id": self.intent_id,
            "confidence": self.confidence,
            "ranked": [{"intent_id": i, "confidence": c} for i, c in self.ranked],
        }


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    per_intent_accuracy: dict[str, float]
    confusion: dict[str, dict[str, int]]
    n_test: int

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_intent_accuracy": self.per_intent_accuracy,
            "confusion": self.confusion,
            "n_test": self.n_test,
        }


class IntentClassifier(ClassifierMixin, BaseEstimator):
    """fit/predict estimator; see the module docstring for the model."""

    def fit(self, X: Sequence[str], y: Sequence[str]):
        dataset = IntentDataset.from_pairs(zip(X, y))
        return self._fit_dataset(dataset)

    def _fit_dataset(self, dataset: IntentDataset):
        if len(dataset.intent_ids) < 2:
            raise TooFewIntents(
                f"need at least 2 intents, got {len(dataset.intent_ids)}"
            )
        by_intent = dataset.texts_by_intent()
        for intent, texts in by_intent.items():
            if not texts:
                raise EmptyIntent(f"intent {intent!r} has no examples")

        vocabulary: set[str] = set()
        counts: dict[str, dict[str, int]] = {i: {} for i in dataset.intent_ids}
        totals: dict[str, int] = {i: 0 for i in dataset.intent_ids}
        for text, intent in dataset.examples:
            for feature in features_of(text):
                vocabulary.add(feature)
                counts[intent][feature] = counts[intent].get(feature, 0) + 1
                totals[intent] += 1

        self.classes_ = np.array(dataset.intent_ids, dtype=object)
        self.vocabulary_ = {f: i for i, f in enumerate(sorted(vocabulary))}
        n_classes = len(dataset.intent_ids)
        n_features = len(self.vocabulary_)
        n_total = len(dataset.examples)

        self.log_prior_ = np.array(
            [math.log(len(by_intent[i]) / n_total) for i in dataset.intent_ids]
        )
        self.log_likelihood_ = np.zeros((n_classes, n_features))
        self.unseen_log_likelihood_ = np.zeros(n_classes)
        for row, intent in enumerate(dataset.intent_ids):
            denom = totals[intent] + n_features + 1
            self.unseen_log_likelihood_[row] = math.log(1.0 / denom)
            for feature, col in self.vocabulary_.items():
                count = counts[intent].get(feature, 0)
                self.log_likelihood_[row, col] = math.log((count + 1) / denom)
        return self

    def _check_fitted(self):
        if not hasattr(self, "classes_"):
            raise ValueError("classifier is not fitted")

    def _scores(self, text: str) -> list[float]:
        feats = features_of(text)
        known = [f for f in feats if f in self.vocabulary_]
        scores = []
        for row in range(len(self.classes_)):
            if not known:
                # nothing the model has seen: fall back to the prior alone
                scores.append(self.log_prior_[row])
                continue
            terms = [self.log_prior_[row]]
            for f in feats:
                col = self.vocabulary_.get(f)
                if col is None:
                    terms.append(self.unseen_log_likelihood_[row])
                else:
                    terms.append(self.log_likelihood_[row, col])
            scores.append(math.fsum(terms))
        return scores

    def classify(self, text: str) -> Prediction:
        """Best intent with softmax confidence and the full ranking."""
        self._check_fitted()
        if not text or not text.strip():
            raise EmptyText("cannot classify empty text")
        scores = self._scores(text)
        peak = max(scores)
        exps = [math.exp(s - peak) for s in scores]
        total = math.fsum(exps)
        probs = [e / total for e in exps]
        order = sorted(
            range(len(scores)), key=lambda i: (-scores[i], str(self.classes_[i]))
        )
        ranked = tuple((str(self.classes_[i]), probs[i]) for i in order)
        return Prediction(intent_id=ranked[0][0], confidence=ranked[0][1], ranked=ranked)

    def predict(self, X: Sequence[str]) -> list[str]:
        return [self.classify(text).intent_id for text in X]

    def to_json_dict(self) -> dict:
        """Versioned JSON form; floats as decimal strings so a round trip
        restores them bit-for-bit."""
        self._check_fitted()
        return {
            "model_version": MODEL_VERSION,
            "intent_ids": [str(c) for c in self.classes_],
            "vocabulary": dict(self.vocabulary_),
            "log_priors": [repr(float(v)) for v in self.log_prior_],
            "log_likelihoods": [
                [repr(float(v)) for v in row] for row in self.log_likelihood_
            ],
            "unseen_log_likelihoods": [
                repr(float(v)) for v in self.unseen_log_likelihood_
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "IntentClassifier":
        if data.get("model_version") != MODEL_VERSION:
            raise ValueError(f"unsupported model_version {data.get('model_version')!r}")
        model = cls()
        model.classes_ = np.array([str(c) for c in data["intent_ids"]], dtype=object)
        model.vocabulary_ = {str(k): int(v) for k, v in data["vocabulary"].items()}
        model.log_prior_ = np.array([float(v) for v in data["log_priors"]])
        model.log_likelihood_ = np.array(
            [[float(v) for v in row] for row in data["log_likelihoods"]]
        )
        model.unseen_log_likelihood_ = np.array(
            [float(v) for v in data["unseen_log_likelihoods"]]
        )
        return model


def train(dataset: IntentDataset) -> IntentClassifier:
    return IntentClassifier()._fit_dataset(dataset)


def predict(model: IntentClassifier, text: str) -> Prediction:
    return model.classify(text)


def evaluate(model: IntentClassifier, test: IntentDataset) -> EvalReport:
    """Exact accuracy and confusion counts on a held-out set."""
    if len(test) == 0:
        raise ValueError("test dataset is empty")
    model_intents = set(str(c) for c in model.classes_)
    unknown = [i for i in test.intent_ids if i not in model_intents]
    if unknown:
        raise UnknownIntentInTest(f"test intents not in model: {unknown}")

    confusion: dict[str, dict[str, int]] = {}
    correct = 0
    per_intent_total: dict[str, int] = {}
    per_intent_correct: dict[str, int] = {}
    for text, intent in test.examples:
        predicted = model.classify(text).intent_id
        confusion.setdefault(intent, {})
        confusion[intent][predicted] = confusion[intent].get(predicted, 0) + 1
        per_intent_total[intent] = per_intent_total.get(intent, 0) + 1
        if predicted == intent:
            correct += 1
            per_intent_correct[intent] = per_intent_correct.get(intent, 0) + 1

    per_intent_accuracy = {
        intent: per_intent_correct.get(intent, 0) / total
        for intent, total in per_intent_total.items()
    }
    return EvalReport(
        accuracy=correct / len(test),
        per_intent_accuracy=per_intent_accuracy,
        confusion=confusion,
        n_test=len(test),
    )


def save_model(model: IntentClassifier, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(model.to_json_dict(), indent=2, sort_keys=True), "utf-8"
    )


def load_model(path: str | Path) -> IntentClassifier:
    return IntentClassifier.from_json_dict(json.loads(Path(path).read_text("utf-8")))
