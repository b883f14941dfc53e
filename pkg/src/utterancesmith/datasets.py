"""Dataset files and the bundled synthetic benchmark.

Datasets are CSV with a ``text,intent`` header plus a JSON split manifest
``{"train": [indices], "test": [indices]}``.  The synthetic builder produces
ten intents whose utterances fall into four lexically distinct phrasing modes
each, so per-intent cluster structure exists by construction: picking inputs
across modes covers more of the test vocabulary than picking around one mode.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .classifier import IntentDataset
from .errors import DatasetTooSmall
from .hashing import SplitMix64

Example = tuple[str, str]


def read_dataset_csv(path: str | Path) -> list[Example]:
    with open(path, newline="", encoding="utf-8") as handle:
        return parse_dataset_csv(handle)


def parse_dataset_csv(handle) -> list[Example]:
    reader = csv.DictReader(handle)
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:2]] != ["text", "intent"]:
        raise ValueError("dataset CSV must start with a `text,intent` header")
    return [(row["text"], row["intent"]) for row in reader]


def write_dataset_csv(path: str | Path, examples: Iterable[Example]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(dataset_csv_text(examples))


def dataset_csv_text(examples: Iterable[Example]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["text", "intent"])
    for text, intent in examples:
        writer.writerow([text, intent])
    return buffer.getvalue()


def read_split_manifest(path: str | Path) -> dict[str, list[int]]:
    data = json.loads(Path(path).read_text("utf-8"))
    return {"train": [int(i) for i in data["train"]], "test": [int(i) for i in data["test"]]}


def write_split_manifest(path: str | Path, manifest: dict[str, list[int]]) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True), "utf-8")


def apply_split(
    examples: Sequence[Example], manifest: dict[str, list[int]]
) -> tuple[IntentDataset, IntentDataset]:
    """Materialize (train, test) datasets from index lists."""
    for name in ("train", "test"):
        for index in manifest[name]:
            if not 0 <= index < len(examples):
                raise ValueError(f"{name} index {index} out of range")
    train = IntentDataset.from_pairs(examples[i] for i in manifest["train"])
    test = IntentDataset.from_pairs(examples[i] for i in manifest["test"])
    return train, test


def stratified_split(
    examples: Sequence[Example], test_fraction: float, seed: int
) -> dict[str, list[int]]:
    """Seeded per-intent split; every intent contributes to both sides."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    by_intent: dict[str, list[int]] = {}
    for i, (_, intent) in enumerate(examples):
        by_intent.setdefault(intent, []).append(i)
    rng = SplitMix64(seed)
    train: list[int] = []
    test: list[int] = []
    for intent in sorted(by_intent):
        indices = by_intent[intent]
        n_test = max(1, round(len(indices) * test_fraction))
        if n_test >= len(indices):
            raise DatasetTooSmall(f"intent {intent!r} has too few examples to split")
        chosen = set(rng.sample_indices(len(indices), n_test))
        for j, index in enumerate(indices):
            (test if j in chosen else train).append(index)
    return {"train": sorted(train), "test": sorted(test)}


# --- synthetic benchmark -------------------------------------------------

# Every intent uses the same frames, verbs and modifiers, so none of them
# reveals the intent: the noun pins the intent, and (verb, modifier, noun)
# pins the mode.  Tying verb and modifier to the mode gives every mode three
# shared content tokens, which keeps its sentences tightly clustered under
# the lexical embedder while different modes stay far apart.
_FRAMES = (
    "{verb} the {adj} {noun}",
    "please {verb} my {adj} {noun}",
    "can you {verb} the {adj} {noun}",
    "i need to {verb} a {adj} {noun}",
    "{verb} this {adj} {noun} now",
    "{verb} every {adj} {noun}",
    "we should {verb} the {adj} {noun}",
    "{verb} that {adj} {noun} for me",
    "time to {verb} some {adj} {noun}",
    "just {verb} the {adj} {noun} today",
)

_MODE_VERBS = ("show", "cancel", "export", "review")
_MODE_ADJECTIVES = ("archived", "pending", "misplaced", "flagged")

_INTENT_NOUNS = {
    "billing": ("receipt", "voucher", "ledger", "balance"),
    "analytics": ("chart", "graph", "metric", "dashboard"),
    "support": ("bug", "defect", "outage", "incident"),
    "scheduling": ("agenda", "calendar", "webinar", "workshop"),
    "shopping": ("basket", "cart", "refund", "coupon"),
    "identity": ("password", "credential", "avatar", "badge"),
    "planning": ("deadline", "milestone", "sprint", "backlog"),
    "storage": ("folder", "binder", "photo", "clip"),
    "payroll": ("paycheck", "salary", "bonus", "wage"),
    "alerting": ("siren", "beacon", "banner", "popup"),
}

# Two test utterances per (intent, mode) phrase the noun with a synonym the
# bare inputs never contain: the first comes from the bundled lexicon (any
# rule generator can bridge it), the second from a disjoint vocabulary that
# only a differently-configured ensemble member knows.  Augmentation closes
# the first gap; ensembling closes the second.
_INTENT_NOUN_VARIANTS = {
    "billing": ("slip", "stub", "journal", "total"),
    "analytics": ("plot", "diagram", "measure", "panel"),
    "support": ("glitch", "flaw", "downtime", "mishap"),
    "scheduling": ("itinerary", "planner", "seminar", "masterclass"),
    "shopping": ("hamper", "trolley", "reimbursement", "promo"),
    "identity": ("passcode", "certificate", "portrait", "emblem"),
    "planning": ("cutoff", "checkpoint", "iteration", "queue"),
    "storage": ("directory", "notebook", "picture", "snippet"),
    "payroll": ("paystub", "compensation", "incentive", "earnings"),
    "alerting": ("alarm", "flare", "headline", "dialog"),
}

_INTENT_NOUN_SECOND_VARIANTS = {
    "billing": ("docket", "chit", "logbook", "remainder"),
    "analytics": ("figure", "curve", "indicator", "console"),
    "support": ("error", "fault", "interruption", "accident"),
    "scheduling": ("lineup", "datebook", "webcast", "bootcamp"),
    "shopping": ("bin", "carriage", "repayment", "discount"),
    "identity": ("passphrase", "license", "icon", "insignia"),
    "planning": ("duedate", "landmark", "cycle", "pipeline"),
    "storage": ("dossier", "portfolio", "snapshot", "excerpt"),
    "payroll": ("payslip", "stipend", "commission", "remuneration"),
    "alerting": ("horn", "beam", "placard", "overlay"),
}


def second_generator_synonyms() -> dict[str, list[str]]:
    """Noun synonyms known only to a second ensemble member.

    Disjoint from the bundled lexicon by construction, so a single-generator
    pipeline cannot produce them; an ensemble that includes a generator with
    this vocabulary can.
    """
    out: dict[str, list[str]] = {}
    for intent, nouns in _INTENT_NOUNS.items():
        for noun, second in zip(nouns, _INTENT_NOUN_SECOND_VARIANTS[intent]):
            out[noun] = [second]
    return out


# One short frame keeps the member's combined wrapper+synonym candidates
# competitive in greedy selection without flooding it with frame n-grams.
SECOND_GENERATOR_WRAPPERS = ("kindly",)


def second_generator_spec(generator_id: str = "builtin_alt"):
    """A complementary builtin generator for two-member ensemble runs."""
    from .generation import GeneratorSpec

    return GeneratorSpec(
        id=generator_id,
        params={
            "wrappers": list(SECOND_GENERATOR_WRAPPERS),
            "synonyms": second_generator_synonyms(),
        },
    )


@dataclass(frozen=True)
class SyntheticDataset:
    examples: tuple[Example, ...]
    manifest: dict[str, list[int]]
    modes: tuple[int, ...]  # mode index per example, for tests


def make_synthetic_dataset(
    seed: int = 0,
    n_intents: int = 10,
    test_per_mode: int = 3,
) -> SyntheticDataset:
    """Ten intents x four modes x ten frames, with a balanced held-out split.

    The same frame offsets are held out of every intent's mode m, so frame
    tokens stay balanced across intents and carry no class signal; a
    classifier trained around a single mode predictably misses the other
    modes' vocabulary.  The seed rotates which offsets are held out.
    """
    if not 1 <= n_intents <= len(_INTENT_NOUNS):
        raise ValueError(f"n_intents must be within [1, {len(_INTENT_NOUNS)}]")
    if not 1 <= test_per_mode < len(_FRAMES):
        raise ValueError("test_per_mode must leave at least one training frame")

    n_frames = len(_FRAMES)
    rotation = SplitMix64(seed).below(n_frames)
    stride = n_frames // test_per_mode
    held_out_by_mode = [
        {(rotation + mode + stride * j) % n_frames for j in range(test_per_mode)}
        for mode in range(len(_MODE_VERBS))
    ]

    examples: list[Example] = []
    modes: list[int] = []
    train: list[int] = []
    test: list[int] = []
    for intent in sorted(_INTENT_NOUNS)[:n_intents]:
        nouns = _INTENT_NOUNS[intent]
        variants = _INTENT_NOUN_VARIANTS[intent]
        second_variants = _INTENT_NOUN_SECOND_VARIANTS[intent]
        for mode, (verb, adj, noun) in enumerate(
            zip(_MODE_VERBS, _MODE_ADJECTIVES, nouns)
        ):
            block_start = len(examples)
            variant_offset = (rotation + mode) % n_frames
            second_offset = (rotation + mode + stride) % n_frames
            for offset, frame in enumerate(_FRAMES):
                word = noun
                if offset == variant_offset:
                    word = variants[mode]
                elif offset == second_offset and test_per_mode >= 2 and mode < 2:
                    word = second_variants[mode]
                examples.append((frame.format(verb=verb, adj=adj, noun=word), intent))
                modes.append(mode)
            for offset in range(n_frames):
                index = block_start + offset
                (test if offset in held_out_by_mode[mode] else train).append(index)

    return SyntheticDataset(
        examples=tuple(examples),
        manifest={"train": sorted(train), "test": sorted(test)},
        modes=tuple(modes),
    )


def write_synthetic_dataset(out_dir: str | Path, seed: int = 0) -> tuple[Path, Path]:
    """Write dataset.csv and split.json; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    synthetic = make_synthetic_dataset(seed=seed)
    csv_path = out / "dataset.csv"
    split_path = out / "split.json"
    write_dataset_csv(csv_path, synthetic.examples)
    write_split_manifest(split_path, synthetic.manifest)
    return csv_path, split_path
