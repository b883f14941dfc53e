"""Paraphrase candidate generation: builtin rules plus remote backends.

Generators are interchangeable: the builtin rule paraphraser runs in-process
and keeps the pipeline dependency-free, while any number of remote model
servers join through one wire protocol:

    POST {endpoint}/paraphrase
        {"sentence": str, "num_return": int, "params": object}
        -> 200 {"candidates": [{"text": str, "score": number|null}]}
    POST {endpoint}/embed
        {"texts": [str]} -> 200 {"vectors": [[number]]}

Backend failures degrade to zero candidates from that backend; the run only
fails outright when nothing at all could generate.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import requests

from .errors import (
    AllBackendsFailed,
    BackendError,
    BackendTimeout,
    BackendUnreachable,
    MalformedResponse,
)
from .extraction import SeedUtterance
from .hashing import stable_id
from .resources import default_synonyms
from .validation import check_positive_int

logger = logging.getLogger(__name__)

BUILTIN_RULE = "builtin_rule"
REMOTE = "remote"

DEFAULT_WRAPPERS = ("please", "can you", "i need to", "i would like to")
DEFAULT_PER_SEED_BUDGET = 15
DEFAULT_TIMEOUT_MS = 10_000
DEFAULT_PARALLELISM = 4


def normalize_text(text: str) -> str:
    """Collapse runs of whitespace and trim; the canonical candidate form."""
    return " ".join(text.split())


@dataclass(frozen=True)
class GeneratorSpec:
    """One member of the generation ensemble."""

    id: str
    kind: str = BUILTIN_RULE
    endpoint: Optional[str] = None
    per_seed_budget: int = DEFAULT_PER_SEED_BUDGET
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (BUILTIN_RULE, REMOTE):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == REMOTE and not self.endpoint:
            raise ValueError(f"remote generator {self.id!r} needs an endpoint")
        check_positive_int(self.per_seed_budget, "per_seed_budget")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "endpoint": self.endpoint,
            "per_seed_budget": self.per_seed_budget,
            "timeout_ms": self.timeout_ms,
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "GeneratorSpec":
        return cls(
            id=str(data["id"]),
            kind=str(data.get("kind", BUILTIN_RULE)),
            endpoint=data.get("endpoint"),
            per_seed_budget=int(data.get("per_seed_budget", DEFAULT_PER_SEED_BUDGET)),
            timeout_ms=int(data.get("timeout_ms", DEFAULT_TIMEOUT_MS)),
            params=dict(data.get("params", {})),
        )


@dataclass
class CandidateSentence:
    """One generated utterance with provenance and review status."""

    text: str
    generator_id: str
    seed_text: str
    intent_id: str = ""
    similarity_to_seed: Optional[float] = None
    status: str = "pending"
    candidate_id: str = ""

    def __post_init__(self):
        self.text = normalize_text(self.text)
        if not self.text:
            raise ValueError("candidate text must be non-empty")
        if not self.candidate_id:
            self.candidate_id = stable_id(self.intent_id, self.text)

    def with_intent(self, intent_id: str) -> "CandidateSentence":
        """Re-home the candidate under an intent, refreshing its id."""
        return replace(
            self,
            intent_id=intent_id,
            candidate_id=stable_id(intent_id, self.text),
        )

    def to_dict(self) -> dict:
        return {
            "candidate_id": self.candidate_id,
            "text": self.text,
            "generator_id": self.generator_id,
            "seed_text": self.seed_text,
            "intent_id": self.intent_id,
            "similarity_to_seed": self.similarity_to_seed,
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CandidateSentence":
        return cls(
            text=data["text"],
            generator_id=data.get("generator_id", ""),
            seed_text=data.get("seed_text", ""),
            intent_id=data.get("intent_id", ""),
            similarity_to_seed=data.get("similarity_to_seed"),
            status=data.get("status", "pending"),
            candidate_id=data.get("candidate_id", ""),
        )


def clean_synonym_lexicon(entries: Mapping[str, Iterable[str]]) -> dict[str, list[str]]:
    """Lowercase keys/values, drop self-mappings and empty entries."""
    out: dict[str, list[str]] = {}
    for word, replacements in entries.items():
        word = word.lower()
        reps = [r.lower() for r in replacements if r.lower() != word]
        if reps:
            out[word] = reps
    return out


def paraphrase_rule_based(
    seed: str,
    lexicon: Mapping[str, Sequence[str]] | None = None,
    budget: int = DEFAULT_PER_SEED_BUDGET,
    seed_rng: int = 0,
    *,
    wrappers: Sequence[str] = DEFAULT_WRAPPERS,
    generator_id: str = BUILTIN_RULE,
    intent_id: str = "",
) -> list[CandidateSentence]:
    """Rule-based paraphrases in a fixed priority order.

    Order: single-token synonym substitutions (leftmost token first, lexicon
    order), then frame wrappers around the seed, then wrapped substitutions.
    The seed itself is never returned.  The rules are order-deterministic, so
    ``seed_rng`` is accepted for interface stability but currently unused.
    """
    check_positive_int(budget, "budget")
    if lexicon is None:
        lexicon = default_synonyms()
    seed_norm = normalize_text(seed)
    tokens = seed_norm.split()

    substitutions: list[str] = []
    for i, token in enumerate(tokens):
        for replacement in lexicon.get(token.lower(), []):
            variant = tokens.copy()
            variant[i] = replacement
            substitutions.append(" ".join(variant))

    wrapped_seed = [f"{w} {seed_norm}" for w in wrappers]
    wrapped_subs = [f"{w} {s}" for s in substitutions for w in wrappers]

    seen = {seed_norm}
    out: list[CandidateSentence] = []
    for text in [*substitutions, *wrapped_seed, *wrapped_subs]:
        if text in seen:
            continue
        seen.add(text)
        out.append(
            CandidateSentence(
                text=text,
                generator_id=generator_id,
                seed_text=seed_norm,
                intent_id=intent_id,
            )
        )
        if len(out) == budget:
            break
    return out


def paraphrase_remote(
    seed: str, spec: GeneratorSpec, *, session: requests.Session | None = None
) -> list[CandidateSentence]:
    """One paraphrase request against a remote backend.

    Connection failures, timeouts, non-200 statuses and malformed bodies all
    surface as backend errors tagged with the generator id; callers decide
    whether to degrade or fail.
    """
    if spec.kind != REMOTE:
        raise ValueError(f"generator {spec.id!r} is not remote")
    url = spec.endpoint.rstrip("/") + "/paraphrase"
    payload = {
        "sentence": seed,
        "num_return": spec.per_seed_budget,
        "params": dict(spec.params),
    }
    http = session or requests
    try:
        response = http.post(url, json=payload, timeout=spec.timeout_ms / 1000.0)
    except requests.exceptions.Timeout as exc:
        raise BackendTimeout(spec.id, f"{url}: {exc}") from exc
    except requests.exceptions.RequestException as exc:
        raise BackendUnreachable(spec.id, f"{url}: {exc}") from exc

    if response.status_code != 200:
        raise MalformedResponse(spec.id, f"{url}: status {response.status_code}")
    try:
        body = response.json()
        items = body["candidates"]
        texts = [normalize_text(item["text"]) for item in items]
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedResponse(spec.id, f"{url}: {exc}") from exc

    seed_norm = normalize_text(seed)
    return [
        CandidateSentence(text=t, generator_id=spec.id, seed_text=seed_norm)
        for t in texts
        if t
    ]


class RemoteEmbedder:
    """Client for the embedding half of the backend protocol."""

    def __init__(self, endpoint: str, generator_id: str = "remote_embedder",
                 timeout_ms: int = DEFAULT_TIMEOUT_MS):
        self.endpoint = endpoint
        self.generator_id = generator_id
        self.timeout_ms = timeout_ms

    def transform(self, texts: Sequence[str]) -> np.ndarray:
        url = self.endpoint.rstrip("/") + "/embed"
        try:
            response = requests.post(
                url, json={"texts": list(texts)}, timeout=self.timeout_ms / 1000.0
            )
        except requests.exceptions.Timeout as exc:
            raise BackendTimeout(self.generator_id, str(exc)) from exc
        except requests.exceptions.RequestException as exc:
            raise BackendUnreachable(self.generator_id, str(exc)) from exc
        if response.status_code != 200:
            raise MalformedResponse(self.generator_id, f"status {response.status_code}")
        try:
            vectors = response.json()["vectors"]
            arr = np.asarray(vectors, dtype=np.float64)
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedResponse(self.generator_id, str(exc)) from exc
        if arr.ndim != 2 or arr.shape[0] != len(texts):
            raise MalformedResponse(self.generator_id, f"bad vector shape {arr.shape}")
        return arr

    def embed(self, text: str) -> np.ndarray:
        return self.transform([text])[0]


@dataclass(frozen=True)
class BackendFailure:
    generator_id: str
    seed_text: str
    code: str
    detail: str

    def to_dict(self) -> dict:
        return {
            "generator_id": self.generator_id,
            "seed_text": self.seed_text,
            "code": self.code,
            "detail": self.detail,
        }


@dataclass
class EnsembleResult:
    candidates: list[CandidateSentence]
    failures: list[BackendFailure]


def _invoke(
    generator: GeneratorSpec,
    seed: SeedUtterance,
    synonyms: Mapping[str, Sequence[str]] | None,
) -> list[CandidateSentence]:
    if generator.kind == BUILTIN_RULE:
        params = generator.params
        lexicon = params.get("synonyms")
        lexicon = clean_synonym_lexicon(lexicon) if lexicon else synonyms
        wrappers = tuple(params.get("wrappers", DEFAULT_WRAPPERS))
        return paraphrase_rule_based(
            seed.text,
            lexicon,
            generator.per_seed_budget,
            wrappers=wrappers,
            generator_id=generator.id,
            intent_id=seed.intent_id,
        )
    return paraphrase_remote(seed.text, generator)


def run_ensemble(
    seeds: Sequence[SeedUtterance],
    generators: Sequence[GeneratorSpec],
    *,
    synonyms: Mapping[str, Sequence[str]] | None = None,
    parallelism: int = DEFAULT_PARALLELISM,
) -> EnsembleResult:
    """Run every generator on every seed and merge canonically.

    Remote calls may overlap in time, but results are merged in (generator
    order, seed order), so concurrency never changes the output.  Within an
    intent, exact duplicate texts keep their earliest occurrence, and no
    candidate may equal its own seed.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    ids = [g.id for g in generators]
    if len(set(ids)) != len(ids):
        raise ValueError(f"generator ids must be unique, got {ids}")
    if synonyms is None:
        synonyms = default_synonyms()

    results: dict[tuple[int, int], list[CandidateSentence] | BackendError] = {}
    remote_pairs = [
        (gi, si)
        for gi, gen in enumerate(generators)
        if gen.kind == REMOTE
        for si in range(len(seeds))
    ]
    if remote_pairs:
        with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
            futures = {
                pair: pool.submit(_invoke, generators[pair[0]], seeds[pair[1]], synonyms)
                for pair in remote_pairs
            }
        for pair, future in futures.items():
            try:
                results[pair] = future.result()
            except BackendError as exc:
                results[pair] = exc

    candidates: list[CandidateSentence] = []
    failures: list[BackendFailure] = []
    seen: set[tuple[str, str]] = set()
    attempts = 0
    for gi, generator in enumerate(generators):
        for si, seed in enumerate(seeds):
            attempts += 1
            outcome = results.get((gi, si))
            if outcome is None:
                try:
                    outcome = _invoke(generator, seed, synonyms)
                except BackendError as exc:
                    outcome = exc
            if isinstance(outcome, BackendError):
                logger.warning(
                    "generator %s failed on %r: %s",
                    outcome.generator_id, seed.text, outcome.detail,
                )
                failures.append(
                    BackendFailure(
                        generator_id=outcome.generator_id,
                        seed_text=seed.text,
                        code=outcome.code,
                        detail=outcome.detail,
                    )
                )
                continue
            seed_norm = normalize_text(seed.text)
            for candidate in outcome:
                homed = candidate.with_intent(seed.intent_id)
                if homed.text == seed_norm:
                    continue
                key = (homed.intent_id, homed.text)
                if key in seen:
                    continue
                seen.add(key)
                candidates.append(homed)

    if attempts and len(failures) == attempts:
        raise AllBackendsFailed(
            f"all {len(generators)} generators failed for all {len(seeds)} seeds"
        )
    return EnsembleResult(candidates=candidates, failures=failures)
