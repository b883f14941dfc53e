"""Exception hierarchy shared across the package.

Every error carries a stable machine-readable ``code`` so the HTTP layer and
the CLI can map failures without string matching.
"""

from __future__ import annotations


class UtteranceSmithError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.code)
        self.detail = detail or self.code


# --- document extraction ---

class MalformedDocument(UtteranceSmithError):
    code = "malformed_document"


class UnsupportedVersion(UtteranceSmithError):
    code = "unsupported_version"


class DecodeError(UtteranceSmithError):
    code = "decode_error"


class EmptyIdentifier(UtteranceSmithError, ValueError):
    code = "empty_identifier"


class EmptyTemplateSet(UtteranceSmithError, ValueError):
    code = "empty_template_set"


# --- text primitives ---

class EmptyOrders(UtteranceSmithError, ValueError):
    code = "empty_orders"


class DimensionMismatch(UtteranceSmithError, ValueError):
    code = "dimension_mismatch"


class KTooLarge(UtteranceSmithError, ValueError):
    code = "k_too_large"


class KNonPositive(UtteranceSmithError, ValueError):
    code = "k_non_positive"


# --- generation ---

class BackendError(UtteranceSmithError):
    """Base for remote paraphrase/embedding backend failures."""

    code = "backend_error"

    def __init__(self, generator_id: str, detail: str = ""):
        super().__init__(detail or generator_id)
        self.generator_id = generator_id


class BackendUnreachable(BackendError):
    code = "backend_unreachable"


class BackendTimeout(BackendError):
    code = "backend_timeout"


class MalformedResponse(BackendError):
    code = "malformed_response"


class AllBackendsFailed(UtteranceSmithError):
    code = "all_backends_failed"


# --- sampling / classifier / experiment ---

class TooFewSentences(UtteranceSmithError, ValueError):
    code = "too_few_sentences"


class TooFewIntents(UtteranceSmithError, ValueError):
    code = "too_few_intents"


class EmptyIntent(UtteranceSmithError, ValueError):
    code = "empty_intent"


class EmptyText(UtteranceSmithError, ValueError):
    code = "empty_text"


class UnknownIntentInTest(UtteranceSmithError, ValueError):
    code = "unknown_intent_in_test"


class DatasetTooSmall(UtteranceSmithError, ValueError):
    code = "dataset_too_small"


class IncompleteGrid(UtteranceSmithError, ValueError):
    code = "incomplete_grid"


# --- service / store ---

class StoreUnwritable(UtteranceSmithError):
    code = "store_unwritable"


class ProjectNotFound(UtteranceSmithError):
    code = "project_not_found"


class NoSeeds(UtteranceSmithError):
    code = "no_seeds"


class UnknownCandidate(UtteranceSmithError):
    code = "unknown_candidate"


class NoModel(UtteranceSmithError):
    code = "no_model"
