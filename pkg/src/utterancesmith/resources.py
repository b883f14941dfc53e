"""Bundled word lists and their file format.

All list files are UTF-8, one entry per line, with ``#`` comments and blank
lines ignored.  Synonym files put the headword first on each line followed by
its replacements, whitespace-separated.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Iterable


def _iter_lines(text: str) -> Iterable[str]:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_wordlist(text: str) -> list[str]:
    return [line.lower() for line in _iter_lines(text)]


def parse_synonyms(text: str) -> dict[str, list[str]]:
    entries: dict[str, list[str]] = {}
    for line in _iter_lines(text):
        parts = line.lower().split()
        if len(parts) < 2:
            continue
        word, replacements = parts[0], [p for p in parts[1:] if p != parts[0]]
        if replacements:
            entries[word] = replacements
    return entries


def _read_bundled(name: str) -> str:
    return (resources.files("utterancesmith") / "data" / name).read_text("utf-8")


def load_wordlist(path: str | Path | None = None, *, bundled: str | None = None) -> list[str]:
    """Word list from ``path``, or the bundled file when no path is given."""
    if path is not None:
        return parse_wordlist(Path(path).read_text("utf-8"))
    if bundled is None:
        raise ValueError("either path or bundled must be given")
    return parse_wordlist(_read_bundled(bundled))


def default_verbs() -> list[str]:
    return load_wordlist(bundled="verbs.txt")


def default_stopwords() -> list[str]:
    return load_wordlist(bundled="stopwords.txt")


def default_templates() -> list[str]:
    return load_wordlist(bundled="templates.txt")


def default_synonyms() -> dict[str, list[str]]:
    return parse_synonyms(_read_bundled("synonyms.txt"))


def load_synonyms(path: str | Path) -> dict[str, list[str]]:
    return parse_synonyms(Path(path).read_text("utf-8"))
