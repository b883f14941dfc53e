"""On-disk project store backing the review service.

One directory per project:

    project.json     project record + extraction results (atomic rewrite)
    spec.yaml|json   the ingested document, verbatim
    candidates.jsonl generated candidates (atomic rewrite on re-generation)
    reviews.jsonl    append-only review decisions; replayed on load, so a
                     restart never loses a recorded decision
    model.json       trained classifier

Plain files keep everything inspectable and diffable.  Mutations within a
project are serialized by a per-project lock; the effective status of a
candidate is its stored status overridden by the latest review decision.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .classifier import IntentClassifier, IntentDataset, load_model, save_model, train
from .datasets import dataset_csv_text
from .errors import (
    NoModel,
    NoSeeds,
    ProjectNotFound,
    StoreUnwritable,
    UnknownCandidate,
)
from .extraction import (
    ExtractionConfig,
    Scenario,
    SeedUtterance,
    extract_seeds,
    parse_document,
)
from .generation import CandidateSentence, GeneratorSpec, run_ensemble
from .selection import SelectionConfig, select_sentences

DEFAULT_STORE_ENV = "UTTERANCESMITH_STORE"
DEFAULT_STORE_DIR = "utterancesmith-store"

TRAINABLE_STATUSES = ("accepted", "auto_selected")


def default_store_dir() -> str:
    return os.environ.get(DEFAULT_STORE_ENV, DEFAULT_STORE_DIR)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _write_json_atomic(path: Path, payload) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2, sort_keys=True), "utf-8")
    os.replace(tmp, path)


def _append_jsonl(path: Path, records: Sequence[Mapping]) -> None:
    with open(path, "a", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True) + "\n")
        handle.flush()
        os.fsync(handle.fileno())


def _read_jsonl(path: Path) -> list[dict]:
    if not path.exists():
        return []
    out = []
    for line in path.read_text("utf-8").splitlines():
        line = line.strip()
        if line:
            out.append(json.loads(line))
    return out


class ProjectStore:
    def __init__(self, base_dir: str | Path | None = None):
        self.base_dir = Path(base_dir or default_store_dir())
        try:
            self.base_dir.mkdir(parents=True, exist_ok=True)
            probe = self.base_dir / ".writetest"
            probe.write_text("", "utf-8")
            probe.unlink()
        except OSError as exc:
            raise StoreUnwritable(f"cannot write to {self.base_dir}: {exc}") from exc
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # --- plumbing ---

    def _lock(self, project_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(project_id, threading.Lock())

    def _dir(self, project_id: str) -> Path:
        return self.base_dir / project_id

    def _project_path(self, project_id: str) -> Path:
        return self._dir(project_id) / "project.json"

    def _load(self, project_id: str) -> dict:
        path = self._project_path(project_id)
        if not path.exists():
            raise ProjectNotFound(f"no project {project_id!r}")
        return json.loads(path.read_text("utf-8"))

    def _save(self, project: dict) -> None:
        project["updated"] = _now()
        _write_json_atomic(self._project_path(project["project_id"]), project)

    # --- projects ---

    def create_project(self, name: str) -> dict:
        if not name or not name.strip():
            raise ValueError("project name must be non-empty")
        while True:
            project_id = secrets.token_hex(6)
            if not self._dir(project_id).exists():
                break
        try:
            self._dir(project_id).mkdir(parents=True)
        except OSError as exc:
            raise StoreUnwritable(str(exc)) from exc
        now = _now()
        project = {
            "project_id": project_id,
            "name": name.strip(),
            "created": now,
            "updated": now,
            "spec_digest": None,
            "spec_format": None,
            "extraction": None,
            "model": None,
        }
        _write_json_atomic(self._project_path(project_id), project)
        return project

    def get_project(self, project_id: str) -> dict:
        return self._load(project_id)

    def list_projects(self) -> list[dict]:
        out = []
        for entry in sorted(self.base_dir.iterdir()):
            if (entry / "project.json").exists():
                out.append(json.loads((entry / "project.json").read_text("utf-8")))
        return out

    # --- extraction ---

    def ingest_spec(
        self,
        project_id: str,
        raw: bytes,
        format_hint: str = "auto",
        config: ExtractionConfig | None = None,
    ) -> dict:
        """Parse + extract, replacing any previous extraction atomically."""
        config = config or ExtractionConfig()
        with self._lock(project_id):
            project = self._load(project_id)
            document = parse_document(raw, format_hint, config.extension_key)
            seeds = extract_seeds(document, config)

            seeds_by_intent: dict[str, list[dict]] = {}
            for seed in seeds:
                seeds_by_intent.setdefault(seed.intent_id, []).append(seed.to_dict())

            operations = []
            for op in document.operations:
                record = op.to_dict()
                record["seeds"] = seeds_by_intent.get(op.intent_id, [])
                operations.append(record)

            is_json = raw.lstrip()[:1] == b"{"
            spec_name = "spec.json" if is_json else "spec.yaml"
            for stale in ("spec.json", "spec.yaml"):
                stale_path = self._dir(project_id) / stale
                if stale != spec_name and stale_path.exists():
                    stale_path.unlink()
            (self._dir(project_id) / spec_name).write_bytes(raw)

            counts = {"operation_id": 0, "description": 0, "metadata": 0}
            for seed in seeds:
                counts[seed.scenario.value] += 1

            project["spec_digest"] = document.source_digest
            project["spec_format"] = "json" if is_json else "yaml"
            project["extraction"] = {
                "version": document.version,
                "title": document.title,
                "operations": operations,
                "seed_counts_by_scenario": counts,
            }
            self._save(project)
            self._drop_orphaned_candidates(
                project_id, {op.intent_id for op in document.operations}
            )
            return {
                "operations": len(operations),
                "seeds": len(seeds),
                "by_scenario": counts,
            }

    def operations(self, project_id: str) -> list[dict]:
        project = self._load(project_id)
        extraction = project.get("extraction")
        return list(extraction["operations"]) if extraction else []

    def _seed_records(self, project_id: str, operations_filter=None) -> list[dict]:
        records = []
        for op in self.operations(project_id):
            if operations_filter and op["intent_id"] not in operations_filter:
                continue
            records.extend(op["seeds"])
        return records

    # --- candidates & reviews ---

    def _candidates_path(self, project_id: str) -> Path:
        return self._dir(project_id) / "candidates.jsonl"

    def _reviews_path(self, project_id: str) -> Path:
        return self._dir(project_id) / "reviews.jsonl"

    def _drop_orphaned_candidates(self, project_id: str, live_intents: set[str]) -> None:
        """Remove candidates whose intent vanished with a re-ingested spec.

        Re-ingesting the same document keeps every candidate (same intents);
        a different document must not leave phantom intents in the training
        set.  Reviews stay in the append-only log; replay ignores ids that no
        longer exist.
        """
        path = self._candidates_path(project_id)
        if not path.exists():
            return
        records = _read_jsonl(path)
        kept = [r for r in records if r["intent_id"] in live_intents]
        if len(kept) == len(records):
            return
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as handle:
            for record in kept:
                handle.write(json.dumps(record, sort_keys=True) + "\n")
        os.replace(tmp, path)

    def candidates(
        self,
        project_id: str,
        operation: Optional[str] = None,
        status: Optional[str] = None,
    ) -> list[dict]:
        """Stored candidates with review decisions folded in."""
        self._load(project_id)  # existence check
        records = _read_jsonl(self._candidates_path(project_id))
        latest: dict[str, str] = {}
        for review in _read_jsonl(self._reviews_path(project_id)):
            latest[review["candidate_id"]] = review["decision"]
        for record in records:
            decided = latest.get(record["candidate_id"])
            if decided:
                record["status"] = decided
        if operation:
            records = [r for r in records if r["intent_id"] == operation]
        if status:
            records = [r for r in records if r["status"] == status]
        return records

    def generate(
        self,
        project_id: str,
        operations_filter: Sequence[str] | None = None,
        generators: Sequence[GeneratorSpec] | None = None,
        selection: SelectionConfig | None = None,
        include_filtered: bool = False,
    ) -> dict:
        """Run the ensemble + selection over a project's seeds and persist.

        Re-generation replaces previous pending/auto_selected candidates in
        scope; candidates someone already accepted or rejected survive.
        """
        generators = list(generators) if generators else [GeneratorSpec(id="builtin_rule")]
        selection = selection or SelectionConfig()
        with self._lock(project_id):
            seed_records = self._seed_records(project_id, operations_filter)
            if not seed_records:
                raise NoSeeds("project has no extracted seeds in scope")

            seeds = [
                SeedUtterance(
                    text=r["text"],
                    intent_id=r["intent_id"],
                    scenario=Scenario(r["scenario"]),
                )
                for r in seed_records
            ]
            result = run_ensemble(seeds, generators)

            new_records: list[dict] = []
            traces: list[dict] = []
            for seed in seeds:
                own = [c for c in result.candidates if c.seed_text == seed.text
                       and c.intent_id == seed.intent_id]
                trace = select_sentences(own, seed.text, selection)
                traces.append({"seed_text": seed.text, "intent_id": seed.intent_id,
                               "trace": trace.to_dict()})
                selected_ids = {c.candidate_id for c in trace.selected}
                delta_by_id = {s.candidate.candidate_id: s.delta_ngram for s in trace.steps}
                for rank, candidate in enumerate(trace.selected):
                    record = candidate.to_dict()
                    record["status"] = "auto_selected"
                    record["selection_rank"] = rank
                    record["delta_ngram"] = delta_by_id[candidate.candidate_id]
                    new_records.append(record)
                for step in trace.steps:
                    if step.candidate.candidate_id in selected_ids:
                        continue
                    record = step.candidate.to_dict()
                    record["status"] = "pending"
                    record["delta_ngram"] = step.delta_ngram
                    new_records.append(record)
                if include_filtered:
                    for candidate, similarity in trace.filtered_out:
                        record = candidate.to_dict()
                        record["status"] = "pending"
                        record["similarity_to_seed"] = similarity
                        record["filtered_out"] = True
                        new_records.append(record)

            in_scope = {s.intent_id for s in seeds}
            decided: list[dict] = []
            decided_ids: set[str] = set()
            for record in self.candidates(project_id):
                if record["status"] in ("accepted", "rejected"):
                    decided.append(record)
                    decided_ids.add(record["candidate_id"])
                elif record["intent_id"] not in in_scope:
                    decided.append(record)
                    decided_ids.add(record["candidate_id"])

            merged = decided + [
                r for r in new_records if r["candidate_id"] not in decided_ids
            ]
            tmp = self._candidates_path(project_id).with_suffix(".tmp")
            with open(tmp, "w", encoding="utf-8") as handle:
                for record in merged:
                    handle.write(json.dumps(record, sort_keys=True) + "\n")
            os.replace(tmp, self._candidates_path(project_id))

            project = self._load(project_id)
            self._save(project)
            selected = [r for r in new_records if r["status"] == "auto_selected"]
            return {
                "selected": selected,
                "persisted": len(merged),
                "traces": traces,
                "failures": [f.to_dict() for f in result.failures],
            }

    def record_review(
        self, project_id: str, decisions: Sequence[Mapping], actor: str = "anonymous"
    ) -> dict:
        """Append review decisions; the latest decision per candidate wins."""
        with self._lock(project_id):
            known = {r["candidate_id"] for r in self.candidates(project_id)}
            for decision in decisions:
                cid = decision["candidate_id"]
                if cid not in known:
                    raise UnknownCandidate(f"unknown candidate_id {cid!r}")
                if decision["decision"] not in ("accepted", "rejected"):
                    raise ValueError(f"bad decision {decision['decision']!r}")
            records = [
                {
                    "candidate_id": d["candidate_id"],
                    "decision": d["decision"],
                    "actor": d.get("actor", actor),
                    "timestamp": _now(),
                }
                for d in decisions
            ]
            _append_jsonl(self._reviews_path(project_id), records)
            project = self._load(project_id)
            self._save(project)
            return self.status_counts(project_id)

    def status_counts(self, project_id: str) -> dict:
        counts = {"accepted": 0, "rejected": 0, "auto_selected": 0, "pending": 0}
        for record in self.candidates(project_id):
            counts[record["status"]] = counts.get(record["status"], 0) + 1
        return counts

    def add_candidate(self, project_id: str, candidate: CandidateSentence,
                      status: str = "accepted") -> dict:
        """Append one candidate (the review UI's free-text edit path)."""
        with self._lock(project_id):
            record = candidate.to_dict()
            record["status"] = status
            existing = {r["candidate_id"] for r in self.candidates(project_id)}
            if record["candidate_id"] in existing:
                raise ValueError(f"candidate {record['candidate_id']} already exists")
            _append_jsonl(self._candidates_path(project_id), [record])
            return record

    # --- training & classification ---

    def trainable_examples(self, project_id: str) -> list[tuple[str, str]]:
        """Seeds plus accepted plus auto-selected-and-not-rejected texts."""
        pairs = [(r["text"], r["intent_id"]) for r in self._seed_records(project_id)]
        seen = set(pairs)
        for record in self.candidates(project_id):
            if record["status"] in TRAINABLE_STATUSES:
                pair = (record["text"], record["intent_id"])
                if pair not in seen:
                    seen.add(pair)
                    pairs.append(pair)
        return pairs

    def train_model(self, project_id: str) -> dict:
        with self._lock(project_id):
            pairs = self.trainable_examples(project_id)
            if not pairs:
                raise NoSeeds("nothing trainable: ingest a spec first")
            dataset = IntentDataset.from_pairs(pairs)
            model = train(dataset)
            save_model(model, self._dir(project_id) / "model.json")
            per_intent = {i: len(t) for i, t in dataset.texts_by_intent().items()}
            summary = {
                "intents": per_intent,
                "n_examples": len(dataset),
                "trained_at": _now(),
            }
            project = self._load(project_id)
            project["model"] = summary
            self._save(project)
            return summary

    def load_project_model(self, project_id: str) -> IntentClassifier:
        self._load(project_id)
        path = self._dir(project_id) / "model.json"
        if not path.exists():
            raise NoModel("project has no trained model")
        return load_model(path)

    def classify(self, project_id: str, text: str) -> dict:
        model = self.load_project_model(project_id)
        prediction = model.classify(text)
        operation = None
        for op in self.operations(project_id):
            if op["intent_id"] == prediction.intent_id:
                operation = {"method": op["method"], "path": op["path"]}
                break
        result = prediction.to_dict()
        result["operation"] = operation
        return result

    # --- export ---

    def export_skill(self, project_id: str) -> dict:
        by_intent: dict[str, list[str]] = {}
        for text, intent in self.trainable_examples(project_id):
            by_intent.setdefault(intent, []).append(text)
        return {
            "intents": [
                {"intent": intent, "examples": [{"text": t} for t in texts]}
                for intent, texts in sorted(by_intent.items())
            ]
        }

    def export_csv(self, project_id: str) -> str:
        return dataset_csv_text(self.trainable_examples(project_id))
