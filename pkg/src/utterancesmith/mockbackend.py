"""Reference paraphrase/embedding backend speaking the wire protocol.

Canned and deterministic: useful for integration tests and as a template for
wiring a real model server.  Its phrasing deliberately differs from the
builtin rule paraphraser so an ensemble of the two yields distinct outputs.
"""

from __future__ import annotations

from fastapi import FastAPI
from pydantic import BaseModel, Field

from .embedding import embed_text
from .generation import normalize_text
from .resources import default_synonyms

_MOCK_WRAPPERS = (
    "could you {s}",
    "would you kindly {s}",
    "i would love to {s}",
    "go ahead and {s}",
    "{s} for me",
    "{s} right away",
)


class ParaphraseBody(BaseModel):
    sentence: str
    num_return: int = 10
    params: dict = Field(default_factory=dict)


class EmbedBody(BaseModel):
    texts: list[str]


def mock_paraphrases(sentence: str, num_return: int) -> list[str]:
    """Deterministic variants: reversed-priority synonym swaps + wrappers."""
    seed = normalize_text(sentence)
    tokens = seed.split()
    lexicon = default_synonyms()

    variants = []
    # wrappers first, and the last lexicon alternative first: intentionally
    # the mirror image of the builtin generator's priorities
    for wrapper in _MOCK_WRAPPERS:
        variants.append(wrapper.format(s=seed))
    for i, token in enumerate(tokens):
        for replacement in reversed(lexicon.get(token.lower(), [])):
            swapped = tokens.copy()
            swapped[i] = replacement
            variants.append(" ".join(swapped))
    for wrapper in _MOCK_WRAPPERS:
        for i, token in enumerate(tokens):
            for replacement in reversed(lexicon.get(token.lower(), [])):
                swapped = tokens.copy()
                swapped[i] = replacement
                variants.append(wrapper.format(s=" ".join(swapped)))

    seen = {seed}
    out = []
    for text in variants:
        if text in seen:
            continue
        seen.add(text)
        out.append(text)
        if len(out) == num_return:
            break
    return out


def create_mock_app() -> FastAPI:
    app = FastAPI(title="utterancesmith-mock-backend", docs_url=None, redoc_url=None)

    @app.post("/paraphrase")
    def paraphrase(body: ParaphraseBody):
        texts = mock_paraphrases(body.sentence, body.num_return)
        return {
            "candidates": [
                {"text": text, "score": round(0.95 - 0.01 * i, 4)}
                for i, text in enumerate(texts)
            ]
        }

    @app.post("/embed")
    def embed(body: EmbedBody):
        return {"vectors": [embed_text(t).tolist() for t in body.texts]}

    return app


def serve_mock(host: str = "127.0.0.1", port: int = 8001) -> None:
    import uvicorn

    uvicorn.run(create_mock_app(), host=host, port=port)
