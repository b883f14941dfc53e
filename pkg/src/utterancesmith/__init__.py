"""utterancesmith: OpenAPI documents in, intent-classifier training data out.

The pipeline: extract action phrases and seed utterances from an OpenAPI
document, paraphrase them through an ensemble of generators, keep the
candidates that stay faithful to their seed while adding new n-grams, let a
human curate the result, then train and evaluate an intent classifier.
"""

from .classifier import (
    EvalReport,
    IntentClassifier,
    IntentDataset,
    Prediction,
    evaluate,
    load_model,
    predict,
    save_model,
    train,
)
from .cluster import KMeansResult, SeededKMeans, kmeans
from .embedding import (
    HashingSentenceEmbedder,
    cosine_similarity,
    embed_text,
    euclidean_distance,
)
from .errors import UtteranceSmithError
from .experiment import ExperimentConfig, ResultGrid, report_table, run_grid
from .extraction import (
    ActionPhrase,
    ApiDocument,
    ApiOperation,
    ExtractionConfig,
    Scenario,
    SeedUtterance,
    extract_seeds,
    parse_document,
    phrase_from_identifier,
    phrase_from_text,
    realize_seed_sentences,
    split_identifier,
)
from .generation import (
    CandidateSentence,
    EnsembleResult,
    GeneratorSpec,
    RemoteEmbedder,
    paraphrase_remote,
    paraphrase_rule_based,
    run_ensemble,
)
from .sampling import RepresentativeSampler, SamplingResult, sample_representatives
from .selection import (
    SelectionConfig,
    SelectionTrace,
    SentenceSelector,
    fidelity_filter,
    jaccard_similarity,
    select_sentences,
)
from .store import ProjectStore
from .text import count_unique_ngrams, tokenize

__version__ = "0.1.0"

__all__ = [
    "ActionPhrase",
    "ApiDocument",
    "ApiOperation",
    "CandidateSentence",
    "EnsembleResult",
    "EvalReport",
    "ExperimentConfig",
    "ExtractionConfig",
    "GeneratorSpec",
    "HashingSentenceEmbedder",
    "IntentClassifier",
    "IntentDataset",
    "KMeansResult",
    "Prediction",
    "ProjectStore",
    "RemoteEmbedder",
    "RepresentativeSampler",
    "ResultGrid",
    "SamplingResult",
    "Scenario",
    "SeedUtterance",
    "SeededKMeans",
    "SelectionConfig",
    "SelectionTrace",
    "SentenceSelector",
    "UtteranceSmithError",
    "cosine_similarity",
    "count_unique_ngrams",
    "embed_text",
    "euclidean_distance",
    "evaluate",
    "extract_seeds",
    "fidelity_filter",
    "jaccard_similarity",
    "kmeans",
    "load_model",
    "paraphrase_remote",
    "paraphrase_rule_based",
    "parse_document",
    "phrase_from_identifier",
    "phrase_from_text",
    "predict",
    "realize_seed_sentences",
    "report_table",
    "run_ensemble",
    "run_grid",
    "sample_representatives",
    "save_model",
    "select_sentences",
    "split_identifier",
    "tokenize",
    "train",
]
