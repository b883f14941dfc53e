"""Mine intent seed sentences from OpenAPI documents.

Three sources feed the seed set, in order:

1. the ``operationId`` (identifier splitting + verb/object mining),
2. the ``summary`` and ``description`` free text (a lightweight verb/object
   heuristic standing in for a full dependency parse),
3. an extension field (default ``x-example-utterances``) whose entries are
   taken verbatim.

Each API operation becomes one intent; its id is ``method:path`` lowercased,
which is stable across runs for the same document.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

import yaml

from .errors import (
    DecodeError,
    EmptyIdentifier,
    EmptyTemplateSet,
    MalformedDocument,
    UnsupportedVersion,
)
from .hashing import fnv1a_64
from .resources import default_stopwords, default_templates, default_verbs

logger = logging.getLogger(__name__)

HTTP_METHODS = ("GET", "POST", "PUT", "PATCH", "DELETE")

DEFAULT_EXTENSION_KEY = "x-example-utterances"

# Path-item keys that are legitimate OpenAPI structure, not operations.
_NON_OPERATION_KEYS = {"parameters", "servers", "summary", "description", "$ref"}

# Verbs preceding which a lexicon hit is discounted ("can be used to ...").
_AUXILIARIES = frozenset(
    "is are was were be been being am can could may might must shall should "
    "will would do does did has have had".split()
)

_WORD_OR_PUNCT_RE = re.compile(r"[\w'-]+|[^\w\s]")


class Scenario(str, Enum):
    """Which extraction source produced a phrase or seed."""

    OPERATION_ID = "operation_id"
    DESCRIPTION = "description"
    METADATA = "metadata"


@dataclass(frozen=True)
class ApiOperation:
    path: str
    method: str
    operation_id: Optional[str] = None
    summary: Optional[str] = None
    description: Optional[str] = None
    example_utterances: tuple[str, ...] = ()
    tags: tuple[str, ...] = ()

    @property
    def intent_id(self) -> str:
        return f"{self.method}:{self.path}".lower()

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "method": self.method,
            "operation_id": self.operation_id,
            "summary": self.summary,
            "description": self.description,
            "example_utterances": list(self.example_utterances),
            "tags": list(self.tags),
            "intent_id": self.intent_id,
        }


@dataclass(frozen=True)
class ApiDocument:
    version: str
    title: str
    operations: tuple[ApiOperation, ...]
    source_digest: str

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "title": self.title,
            "source_digest": self.source_digest,
            "operations": [op.to_dict() for op in self.operations],
        }


@dataclass(frozen=True)
class ActionPhrase:
    """Verb + object kernel of an intent."""

    verb: str
    object: tuple[str, ...]
    scenario: Scenario
    source_operation: Optional[ApiOperation] = None

    def to_dict(self) -> dict:
        return {
            "verb": self.verb,
            "object": list(self.object),
            "scenario": self.scenario.value,
        }


@dataclass(frozen=True)
class SeedUtterance:
    text: str
    intent_id: str
    phrase: Optional[ActionPhrase] = None
    scenario: Scenario = Scenario.OPERATION_ID

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "intent_id": self.intent_id,
            "scenario": self.scenario.value,
            "phrase": self.phrase.to_dict() if self.phrase else None,
        }


@dataclass
class ExtractionConfig:
    """Word lists and knobs for the whole extraction stage."""

    verbs: list[str] = field(default_factory=default_verbs)
    stopwords: list[str] = field(default_factory=default_stopwords)
    templates: list[str] = field(default_factory=default_templates)
    extension_key: str = DEFAULT_EXTENSION_KEY


def parse_document(
    raw: bytes,
    format_hint: str = "auto",
    extension_key: str = DEFAULT_EXTENSION_KEY,
) -> ApiDocument:
    """Parse OpenAPI 3.x / Swagger 2.0 bytes into the extraction model.

    Only the pieces extraction needs are kept: one operation per
    (path, method) pair with its textual fields and the example-utterance
    extension.  Unknown HTTP methods are skipped with a warning.
    """
    if isinstance(raw, str):
        raw = raw.encode("utf-8")
    try:
        decoded = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(f"document is not valid UTF-8: {exc}") from exc

    doc = _load_structured(decoded, format_hint)
    if not isinstance(doc, Mapping):
        raise MalformedDocument("document root is not a mapping")
    if "paths" not in doc:
        raise MalformedDocument("document has no `paths` section")
    if "openapi" not in doc and "swagger" not in doc:
        raise UnsupportedVersion("document has neither `openapi` nor `swagger` key")

    version = str(doc.get("openapi") or doc.get("swagger"))
    info = doc.get("info")
    title = str(info.get("title", "")) if isinstance(info, Mapping) else ""

    paths = doc["paths"]
    if paths is None:
        paths = {}
    if not isinstance(paths, Mapping):
        raise MalformedDocument("`paths` is not a mapping")

    operations: list[ApiOperation] = []
    for path, item in paths.items():
        path = str(path)
        if not path:
            continue
        if not isinstance(item, Mapping):
            logger.warning("skipping path %r: not a mapping", path)
            continue
        for key, op in item.items():
            method = str(key).upper()
            if method not in HTTP_METHODS:
                if str(key).lower() not in _NON_OPERATION_KEYS and not str(key).startswith("x-"):
                    logger.warning("skipping unknown HTTP method %r on %r", key, path)
                continue
            if not isinstance(op, Mapping):
                logger.warning("skipping %s %s: operation is not a mapping", method, path)
                continue
            operations.append(
                ApiOperation(
                    path=path,
                    method=method,
                    operation_id=_opt_str(op.get("operationId")),
                    summary=_opt_str(op.get("summary")),
                    description=_opt_str(op.get("description")),
                    example_utterances=_clean_utterances(op.get(extension_key)),
                    tags=tuple(str(t) for t in op.get("tags") or [] if str(t)),
                )
            )

    return ApiDocument(
        version=version,
        title=title,
        operations=tuple(operations),
        source_digest=format(fnv1a_64(raw), "016x"),
    )


def _load_structured(text: str, format_hint: str):
    if format_hint not in ("yaml", "json", "auto"):
        raise ValueError(f"unknown format hint {format_hint!r}")
    if format_hint == "json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise DecodeError(f"invalid JSON: {exc}") from exc
    if format_hint == "auto" and text.lstrip().startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            pass  # fall through to YAML, which accepts JSON anyway
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DecodeError(f"invalid YAML: {exc}") from exc


def _opt_str(value) -> Optional[str]:
    if value is None:
        return None
    value = str(value).strip()
    return value or None


def _clean_utterances(value) -> tuple[str, ...]:
    if not isinstance(value, (list, tuple)):
        return ()
    out = []
    for item in value:
        if isinstance(item, str) and item.strip():
            out.append(item.strip())
    return tuple(out)


def split_identifier(identifier: str) -> list[str]:
    """Split an identifier into lowercase word tokens.

    Handles underscores, hyphens, digit/letter boundaries and camel case; a
    maximal uppercase run followed by a lowercase letter splits before its
    last letter ("HTTPServerStart" -> http, server, start).
    """
    if not identifier:
        raise EmptyIdentifier("identifier must be non-empty")
    tokens = []
    for chunk in re.split(r"[_\-\s]+", identifier):
        tokens.extend(
            m.group(0).lower()
            for m in re.finditer(r"[0-9]+|[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+", chunk)
        )
    return tokens


def _match_verb(token: str, lexicon: frozenset[str]) -> Optional[str]:
    """Lexicon form of a token, tolerating plural/3rd-person inflection."""
    if token in lexicon:
        return token
    if token.endswith("es") and token[:-2] in lexicon:
        return token[:-2]
    if token.endswith("s") and token[:-1] in lexicon:
        return token[:-1]
    return None


def phrase_from_identifier(
    tokens: Sequence[str],
    lexicon: Iterable[str],
    stopwords: Iterable[str] | None = None,
) -> Optional[ActionPhrase]:
    """Verb = first lexicon token; object = what follows, minus stop words."""
    lex = frozenset(lexicon)
    stops = frozenset(stopwords if stopwords is not None else default_stopwords())
    for i, token in enumerate(tokens):
        if token in lex:
            obj = tuple(t for t in tokens[i + 1 :] if t not in stops)
            return ActionPhrase(verb=token, object=obj, scenario=Scenario.OPERATION_ID)
    return None


def phrase_from_text(
    sentence: str,
    lexicon: Iterable[str],
    stopwords: Iterable[str] | None = None,
) -> Optional[ActionPhrase]:
    """Verb/object mining from free text, without a dependency parser.

    The verb is the earliest lexicon token whose preceding words are not all
    auxiliaries (so "can be used to list ..." resolves to "list", and a bare
    leading verb always wins).  The object window runs from the verb to the
    first punctuation mark; within it, stop words and other lexicon verbs
    split the remaining tokens into runs, and the longest run wins with ties
    going to the earliest.
    """
    lex = frozenset(lexicon)
    stops = frozenset(stopwords if stopwords is not None else default_stopwords())

    # Word tokens interleaved with None markers at punctuation boundaries.
    items: list[Optional[str]] = []
    for m in _WORD_OR_PUNCT_RE.finditer(sentence.lower()):
        tok = m.group(0)
        items.append(tok if any(ch.isalnum() for ch in tok) else None)

    words = [(i, tok) for i, tok in enumerate(items) if tok is not None]

    verb = None
    verb_pos = -1
    for wi, (pos, tok) in enumerate(words):
        matched = _match_verb(tok, lex)
        if matched is None:
            continue
        preceding = [t for _, t in words[:wi]]
        if preceding and all(t in _AUXILIARIES for t in preceding):
            continue
        verb, verb_pos = matched, pos
        break
    if verb is None:
        return None

    runs: list[list[str]] = []
    current: list[str] = []
    for tok in items[verb_pos + 1 :]:
        if tok is None:
            break
        if tok in stops or _match_verb(tok, lex) is not None:
            if current:
                runs.append(current)
                current = []
            continue
        current.append(tok)
    if current:
        runs.append(current)

    best: tuple[str, ...] = ()
    for run in runs:
        if len(run) > len(best):
            best = tuple(run)
    return ActionPhrase(verb=verb, object=best, scenario=Scenario.DESCRIPTION)


def realize_seed_sentences(
    phrase: ActionPhrase,
    templates: Sequence[str] | None = None,
    intent_id: str = "",
) -> list[SeedUtterance]:
    """Instantiate sentence templates for a phrase, deduplicating results.

    With an empty object, "the {object}" collapses to nothing, which can make
    templates coincide; the first realization wins.
    """
    if templates is None:
        templates = default_templates()
    if not templates:
        raise EmptyTemplateSet("at least one template is required")
    if not phrase.verb:
        raise ValueError("phrase verb must be non-empty")
    if not intent_id and phrase.source_operation is not None:
        intent_id = phrase.source_operation.intent_id

    obj = " ".join(phrase.object)
    seen = set()
    seeds = []
    for template in templates:
        text = template.replace("{verb}", phrase.verb)
        if obj:
            text = text.replace("{object}", obj)
        else:
            text = text.replace("the {object}", "").replace("{object}", "")
        text = " ".join(text.split())
        if not text or text in seen:
            continue
        seen.add(text)
        seeds.append(
            SeedUtterance(
                text=text, intent_id=intent_id, phrase=phrase, scenario=phrase.scenario
            )
        )
    return seeds


def extract_phrases(
    operation: ApiOperation, config: ExtractionConfig | None = None
) -> list[ActionPhrase]:
    """All action phrases one operation yields, across scenarios 1 and 2."""
    config = config or ExtractionConfig()
    phrases = []
    if operation.operation_id:
        tokens = split_identifier(operation.operation_id)
        phrase = phrase_from_identifier(tokens, config.verbs, config.stopwords)
        if phrase is not None:
            phrases.append(_with_operation(phrase, operation))
    for text in (operation.summary, operation.description):
        if not text:
            continue
        phrase = phrase_from_text(text, config.verbs, config.stopwords)
        if phrase is not None:
            phrases.append(_with_operation(phrase, operation))
    return phrases


def _with_operation(phrase: ActionPhrase, operation: ApiOperation) -> ActionPhrase:
    return ActionPhrase(
        verb=phrase.verb,
        object=phrase.object,
        scenario=phrase.scenario,
        source_operation=operation,
    )


def extract_seeds(
    document: ApiDocument, config: ExtractionConfig | None = None
) -> list[SeedUtterance]:
    """Seed utterances for every operation, deduplicated per intent.

    Summary and description are both mined when both exist; identical
    realizations collapse here rather than upstream.
    """
    config = config or ExtractionConfig()
    seeds: list[SeedUtterance] = []
    for operation in document.operations:
        seen: set[str] = set()
        for phrase in extract_phrases(operation, config):
            for seed in realize_seed_sentences(phrase, config.templates):
                if seed.text not in seen:
                    seen.add(seed.text)
                    seeds.append(seed)
        for utterance in operation.example_utterances:
            if utterance not in seen:
                seen.add(utterance)
                seeds.append(
                    SeedUtterance(
                        text=utterance,
                        intent_id=operation.intent_id,
                        phrase=None,
                        scenario=Scenario.METADATA,
                    )
                )
    return seeds
