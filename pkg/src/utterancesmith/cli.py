"""Command-line front door over the library surface.

Exit codes: 0 success, 1 domain error (code + detail on stderr), 2 usage
error (argparse synopsis on stderr).  Data goes to stdout, diagnostics to
stderr, so every command composes in a shell pipeline.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classifier import IntentDataset, evaluate, load_model, save_model, train
from .datasets import (
    apply_split,
    read_dataset_csv,
    read_split_manifest,
    write_synthetic_dataset,
)
from .errors import UtteranceSmithError
from .experiment import ExperimentConfig, report_table, run_grid
from .extraction import ExtractionConfig, extract_seeds, parse_document
from .generation import CandidateSentence, GeneratorSpec, run_ensemble
from .resources import load_synonyms, load_wordlist
from .selection import SelectionConfig, select_sentences
from .extraction import Scenario, SeedUtterance
from .store import default_store_dir


def _emit(data, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", "utf-8")
    else:
        print(text)


def _load_seed_utterances(path: str) -> list[SeedUtterance]:
    data = json.loads(Path(path).read_text("utf-8"))
    records = data["seeds"] if isinstance(data, dict) else data
    return [
        SeedUtterance(
            text=r["text"],
            intent_id=r.get("intent_id", ""),
            scenario=Scenario(r.get("scenario", "metadata")),
        )
        for r in records
    ]


def _load_candidates(path: str) -> list[CandidateSentence]:
    data = json.loads(Path(path).read_text("utf-8"))
    records = data["candidates"] if isinstance(data, dict) else data
    return [CandidateSentence.from_dict(r) for r in records]


def _load_labeled(csv_path: str, split_path: str | None):
    examples = read_dataset_csv(csv_path)
    if split_path:
        return apply_split(examples, read_split_manifest(split_path))
    dataset = IntentDataset.from_pairs(examples)
    return dataset, dataset


def _cmd_extract(args) -> int:
    raw = Path(args.spec).read_bytes()
    config = ExtractionConfig()
    if args.verbs:
        config.verbs = load_wordlist(args.verbs)
    if args.stopwords:
        config.stopwords = load_wordlist(args.stopwords)
    if args.templates:
        config.templates = load_wordlist(args.templates)
    if args.extension_key:
        config.extension_key = args.extension_key
    document = parse_document(raw, args.format, config.extension_key)
    seeds = extract_seeds(document, config)
    payload = {
        "document": document.to_dict(),
        "seeds": [s.to_dict() for s in seeds],
    }
    _emit(payload, args.out)
    if args.seeds_out:
        Path(args.seeds_out).write_text(
            json.dumps({"seeds": payload["seeds"]}, indent=2, sort_keys=True) + "\n",
            "utf-8",
        )
    return 0


def _cmd_generate(args) -> int:
    seeds = _load_seed_utterances(args.seeds)
    config = json.loads(Path(args.config).read_text("utf-8"))
    generators = [GeneratorSpec.from_dict(g) for g in config.get("generators", [])]
    if not generators:
        generators = [GeneratorSpec(id="builtin_rule")]
    synonyms = load_synonyms(config["synonyms"]) if config.get("synonyms") else None
    result = run_ensemble(seeds, generators, synonyms=synonyms)
    for failure in result.failures:
        print(f"warning: {failure.generator_id}: {failure.detail}", file=sys.stderr)
    _emit(
        {
            "candidates": [c.to_dict() for c in result.candidates],
            "failures": [f.to_dict() for f in result.failures],
        },
        args.out,
    )
    return 0


def _cmd_select(args) -> int:
    candidates = _load_candidates(args.candidates)
    config = SelectionConfig(
        theta=args.theta,
        gamma=args.gamma,
        target_size=args.target_size,
        ngram_orders=tuple(int(n) for n in args.orders.split(",")),
    )
    trace = select_sentences(candidates, args.seed_text, config)
    _emit(trace.to_dict(), args.out)
    return 0


def _cmd_train(args) -> int:
    train_ds, _ = _load_labeled(args.dataset, args.split)
    model = train(train_ds)
    if args.out:
        save_model(model, args.out)
        print(f"model written to {args.out}", file=sys.stderr)
    else:
        _emit(model.to_json_dict(), None)
    return 0


def _cmd_evaluate(args) -> int:
    model = load_model(args.model)
    _, test_ds = _load_labeled(args.dataset, args.split)
    report = evaluate(model, test_ds)
    _emit(report.to_dict(), args.out)
    return 0


def _cmd_experiment(args) -> int:
    config = ExperimentConfig.from_json_file(args.config)
    if args.seed is not None:
        config.seeds = (args.seed,)
    grid = run_grid(config)
    if args.grid_out:
        Path(args.grid_out).write_text(grid.to_json() + "\n", "utf-8")
    if args.report:
        report = report_table(grid, args.report)
        print(report.text, end="")
        if args.csv_out:
            Path(args.csv_out).write_text(report.csv, "utf-8")
    else:
        print(grid.to_json())
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    serve(store_dir=args.store, host=args.host, port=args.port, static_dir=args.ui)
    return 0


def _cmd_mock_backend(args) -> int:
    from .mockbackend import serve_mock

    serve_mock(host=args.host, port=args.port)
    return 0


def _cmd_synth_dataset(args) -> int:
    csv_path, split_path = write_synthetic_dataset(args.out_dir, seed=args.seed)
    _emit({"dataset": str(csv_path), "split": str(split_path)}, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="utterancesmith",
        description="OpenAPI documents in, curated intent-classifier training data out.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="mine seed utterances from an OpenAPI document")
    p.add_argument("spec")
    p.add_argument("--format", choices=("auto", "yaml", "json"), default="auto")
    p.add_argument("--extension-key")
    p.add_argument("--verbs")
    p.add_argument("--stopwords")
    p.add_argument("--templates")
    p.add_argument("--seeds-out")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("generate", help="run the paraphrase generator ensemble")
    p.add_argument("seeds")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("select", help="fidelity-filter and diversity-select candidates")
    p.add_argument("candidates")
    p.add_argument("--seed-text", required=True)
    p.add_argument("--theta", type=float, default=0.4)
    p.add_argument("--gamma", type=int, default=1)
    p.add_argument("-N", dest="target_size", type=int, default=5)
    p.add_argument("--orders", default="1,2,3")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("train", help="train the intent classifier on a CSV dataset")
    p.add_argument("dataset")
    p.add_argument("--split")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a trained model on a CSV dataset")
    p.add_argument("model")
    p.add_argument("dataset")
    p.add_argument("--split")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("experiment", help="run a sampling/pipeline accuracy grid")
    p.add_argument("config")
    p.add_argument("--report", choices=("table1", "input_quality", "table3", "pipeline_ablation"))
    p.add_argument("--grid-out")
    p.add_argument("--csv-out")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("serve", help="run the review service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--store", default=None,
                   help=f"project store directory (default: {default_store_dir()})")
    p.add_argument("--ui", default=None, help="directory of built review UI assets")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("mock-backend", help="run the reference paraphrase backend")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8001)
    p.set_defaults(func=_cmd_mock_backend)

    p = sub.add_parser("synth-dataset", help="write the bundled synthetic dataset")
    p.add_argument("--out-dir", default="synthetic-dataset")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_synth_dataset)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UtteranceSmithError as exc:
        print(f"error: {exc.code}: {exc.detail}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
