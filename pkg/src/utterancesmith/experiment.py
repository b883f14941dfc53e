"""Grid experiments: input quality and pipeline ablations at desk scale.

For every (input type, pipeline, n, seed) cell the runner samples n inputs
per intent, optionally augments them through generation + selection, trains
the classifier on inputs plus whatever survived selection, and records test
accuracy.  Cells are independent and everything is seeded, so a grid is a
pure function of its config.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence

from .classifier import IntentDataset, evaluate, train
from .datasets import apply_split, read_dataset_csv, read_split_manifest
from .embedding import HashingSentenceEmbedder
from .errors import AllBackendsFailed, DatasetTooSmall, IncompleteGrid
from .extraction import Scenario, SeedUtterance
from .generation import EnsembleResult, GeneratorSpec, run_ensemble
from .hashing import fnv1a_64_text
from .sampling import sample_representatives
from .selection import SelectionConfig, embedding_similarity, select_sentences

INPUT_TYPES = ("diverse", "random", "narrow")
PIPELINES = ("base", "generate_only", "generate_select", "ensemble_select")

CellKey = tuple[str, str, int, int]  # (input_type, pipeline, n, seed)


@dataclass
class ExperimentConfig:
    dataset: str
    split: str
    n_values: tuple[int, ...] = (1, 2, 4, 8)
    input_types: tuple[str, ...] = INPUT_TYPES
    pipeline_configs: tuple[str, ...] = ("base", "generate_select")
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    selection: SelectionConfig = field(default_factory=SelectionConfig)
    generators: tuple[GeneratorSpec, ...] = (GeneratorSpec(id="builtin_rule"),)

    def __post_init__(self):
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ValueError("n_values must be positive")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        for t in self.input_types:
            if t not in INPUT_TYPES:
                raise ValueError(f"unknown input type {t!r}")
        for p in self.pipeline_configs:
            if p not in PIPELINES:
                raise ValueError(f"unknown pipeline config {p!r}")
        if not self.generators and set(self.pipeline_configs) != {"base"}:
            raise ValueError("non-base pipelines need at least one generator")

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "split": self.split,
            "n_values": list(self.n_values),
            "input_types": list(self.input_types),
            "pipeline_configs": list(self.pipeline_configs),
            "seeds": list(self.seeds),
            "selection": self.selection.to_dict(),
            "generators": [g.to_dict() for g in self.generators],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExperimentConfig":
        return cls(
            dataset=str(data["dataset"]),
            split=str(data["split"]),
            n_values=tuple(int(n) for n in data.get("n_values", (1, 2, 4, 8))),
            input_types=tuple(data.get("input_types", INPUT_TYPES)),
            pipeline_configs=tuple(
                data.get("pipeline_configs", ("base", "generate_select"))
            ),
            seeds=tuple(int(s) for s in data.get("seeds", (1, 2, 3, 4, 5))),
            selection=SelectionConfig.from_dict(data.get("selection", {})),
            generators=tuple(
                GeneratorSpec.from_dict(g)
                for g in data.get("generators", [{"id": "builtin_rule"}])
            ),
        )

    @classmethod
    def from_json_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text("utf-8")))


@dataclass
class ResultGrid:
    cells: dict[CellKey, float] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def aggregates(self) -> dict[tuple[str, str, int], dict[str, float]]:
        """Mean and population stddev of accuracy across seeds."""
        groups: dict[tuple[str, str, int], list[float]] = {}
        for (input_type, pipeline, n, _seed), acc in self.cells.items():
            groups.setdefault((input_type, pipeline, n), []).append(acc)
        out = {}
        for key, values in groups.items():
            mean = math.fsum(values) / len(values)
            variance = math.fsum((v - mean) ** 2 for v in values) / len(values)
            out[key] = {
                "mean": mean,
                "stddev": math.sqrt(variance),
                "n_seeds": len(values),
            }
        return out

    def mean_accuracy(self, input_type: str, pipeline: str, n: int) -> float:
        key = (input_type, pipeline, n)
        aggregates = self.aggregates()
        if key not in aggregates:
            raise IncompleteGrid(f"no cells for {input_type}|{pipeline}|n={n}")
        return aggregates[key]["mean"]

    def to_json_dict(self) -> dict:
        return {
            "cells": {
                f"{t}|{p}|{n}|{s}": acc for (t, p, n, s), acc in self.cells.items()
            },
            "aggregates": {
                f"{t}|{p}|{n}": stats for (t, p, n), stats in self.aggregates().items()
            },
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ResultGrid":
        cells: dict[CellKey, float] = {}
        for key, acc in data.get("cells", {}).items():
            input_type, pipeline, n, seed = key.split("|")
            cells[(input_type, pipeline, int(n), int(seed))] = float(acc)
        return cls(cells=cells, metadata=dict(data.get("metadata", {})))


def _augment_intent(
    intent: str,
    inputs: Sequence[str],
    pipeline: str,
    config: ExperimentConfig,
    similarity,
    ensemble_runner: Callable[..., EnsembleResult],
    failures: list[dict],
) -> list[str]:
    """Augmented text list for one intent under one pipeline config."""
    texts = list(inputs)
    if pipeline == "base":
        return texts

    generators = (
        list(config.generators)
        if pipeline == "ensemble_select"
        else list(config.generators[:1])
    )
    seeds = [
        SeedUtterance(text=t, intent_id=intent, scenario=Scenario.METADATA)
        for t in inputs
    ]
    try:
        result = ensemble_runner(seeds, generators)
    except AllBackendsFailed as exc:
        failures.append({"intent": intent, "code": exc.code, "detail": exc.detail})
        return texts

    for failure in result.failures:
        failures.append({"intent": intent, **failure.to_dict()})

    seen = set(texts)
    for input_text in inputs:
        own = [c for c in result.candidates if c.seed_text == input_text]
        if pipeline == "generate_only":
            kept = [c.text for c in own[: config.selection.target_size]]
        else:
            trace = select_sentences(own, input_text, config.selection, similarity)
            kept = [c.text for c in trace.selected]
        for text in kept:
            if text not in seen:
                seen.add(text)
                texts.append(text)
    return texts


def run_grid(
    config: ExperimentConfig,
    embedder=None,
    ensemble_runner: Callable[..., EnsembleResult] = run_ensemble,
) -> ResultGrid:
    """Evaluate every configured cell; deterministic given config seeds."""
    examples = read_dataset_csv(config.dataset)
    manifest = read_split_manifest(config.split)
    train_ds, test_ds = apply_split(examples, manifest)

    train_by_intent = train_ds.texts_by_intent()
    max_n = max(config.n_values)
    for intent, texts in train_by_intent.items():
        if len(texts) < max_n:
            raise DatasetTooSmall(
                f"intent {intent!r} has {len(texts)} training sentences, "
                f"needs at least {max_n}"
            )

    embedder = embedder or HashingSentenceEmbedder()
    similarity = embedding_similarity(embedder)
    intents = sorted(train_by_intent)
    grid = ResultGrid(metadata={"dataset": str(config.dataset), "failures": []})

    for n in config.n_values:
        for seed in config.seeds:
            samples = {
                intent: sample_representatives(
                    train_by_intent[intent],
                    n,
                    fnv1a_64_text(f"{seed}:{intent}"),
                    embedder,
                )
                for intent in intents
            }
            for input_type in config.input_types:
                for pipeline in config.pipeline_configs:
                    pairs = []
                    for intent in intents:
                        inputs = samples[intent].group(input_type)
                        texts = _augment_intent(
                            intent,
                            inputs,
                            pipeline,
                            config,
                            similarity,
                            ensemble_runner,
                            grid.metadata["failures"],
                        )
                        pairs.extend((text, intent) for text in texts)
                    model = train(IntentDataset.from_pairs(pairs))
                    report = evaluate(model, test_ds)
                    grid.cells[(input_type, pipeline, n, seed)] = report.accuracy
    return grid


@dataclass(frozen=True)
class Report:
    text: str
    csv: str


def _format_matrix(
    title: str,
    row_label: str,
    rows: Sequence[str],
    n_values: Sequence[int],
    lookup: Callable[[str, int], dict[str, float]],
) -> Report:
    header = [row_label] + [f"n={n}" for n in n_values]
    text_rows = []
    csv_rows = [",".join(header)]
    for row in rows:
        text_cells = []
        csv_cells = [row]
        for n in n_values:
            stats = lookup(row, n)
            text_cells.append(f"{stats['mean']:.3f} ±{stats['stddev']:.3f}")
            csv_cells.append(f"{stats['mean']:.6f}")
        text_rows.append((row, text_cells))
        csv_rows.append(",".join(csv_cells))

    label_width = max(len(row_label), max(len(r) for r in rows))
    col_width = max(len(h) for h in header[1:])
    col_width = max(col_width, max(len(c) for _, cells in text_rows for c in cells))
    lines = [title]
    lines.append(
        row_label.ljust(label_width)
        + "  "
        + "  ".join(h.rjust(col_width) for h in header[1:])
    )
    for row, cells in text_rows:
        lines.append(
            row.ljust(label_width) + "  " + "  ".join(c.rjust(col_width) for c in cells)
        )
    return Report(text="\n".join(lines) + "\n", csv="\n".join(csv_rows) + "\n")


def report_table(
    grid: ResultGrid,
    layout: str,
    *,
    pipeline: str = "generate_select",
    input_type: str = "diverse",
) -> Report:
    """Accuracy matrix in one of the two canonical layouts.

    ``input_quality`` (alias ``table1``): input types x n at a fixed pipeline.
    ``pipeline_ablation`` (alias ``table3``): pipeline configs x n at a fixed
    input type.
    """
    aggregates = grid.aggregates()
    n_values = sorted({key[2] for key in grid.cells})
    if not n_values:
        raise IncompleteGrid("grid has no cells")

    if layout in ("table1", "input_quality"):
        def lookup(row: str, n: int) -> dict[str, float]:
            key = (row, pipeline, n)
            if key not in aggregates:
                raise IncompleteGrid(f"missing cell group {row}|{pipeline}|n={n}")
            return aggregates[key]

        return _format_matrix(
            f"accuracy by input quality (pipeline={pipeline})",
            "input_type", INPUT_TYPES, n_values, lookup,
        )

    if layout in ("table3", "pipeline_ablation"):
        def lookup(row: str, n: int) -> dict[str, float]:
            key = (input_type, row, n)
            if key not in aggregates:
                raise IncompleteGrid(f"missing cell group {input_type}|{row}|n={n}")
            return aggregates[key]

        return _format_matrix(
            f"accuracy by pipeline configuration (input={input_type})",
            "pipeline", PIPELINES, n_values, lookup,
        )

    raise ValueError(f"unknown layout {layout!r}")
