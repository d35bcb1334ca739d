from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import GlossaryError

logger = logging.getLogger(__name__)

CASE_DIRECTIVE = "#case_sensitive"


@dataclass(frozen=True)
class Glossary:
    """A named set of entries; multi-word entries are matched token by token."""

    name: str
    entries: frozenset[str]
    case_sensitive: bool = False
    _phrases: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.entries:
            raise GlossaryError(f"empty glossary {self.name!r}")
        index: dict[str, list[tuple[str, ...]]] = {}
        for entry in self.entries:
            words = tuple(entry.split())
            index.setdefault(words[0], []).append(words)
        for phrases in index.values():
            phrases.sort(key=lambda p: (-len(p), p))
        object.__setattr__(self, "_phrases", index)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, item: str) -> bool:
        return (item if self.case_sensitive else item.lower()) in self.entries

    def phrases_starting_with(self, token: str) -> list[tuple[str, ...]]:
        """Entries (as word tuples, longest first) whose first word equals ``token``."""
        key = token if self.case_sensitive else token.lower()
        return self._phrases.get(key, [])

    @property
    def max_words(self) -> int:
        return max(len(p) for ps in self._phrases.values() for p in ps)


def glossary_from_lines(name: str, lines: list[str], source: str = "<memory>") -> Glossary:
    case_sensitive = False
    entries: list[str] = []
    for i, line in enumerate(lines):
        line = line.strip()
        if i == 0 and line.lower() == CASE_DIRECTIVE:
            case_sensitive = True
            continue
        if not line or line.startswith("#"):
            continue
        entries.append(" ".join(line.split()))
    if not entries:
        raise GlossaryError(f"empty glossary {name!r} ({source})")
    if not case_sensitive:
        entries = [e.lower() for e in entries]
    unique = frozenset(entries)
    if len(unique) < len(entries):
        dupes = sorted({e for e in entries if entries.count(e) > 1})
        logger.warning("glossary %s: duplicate entries removed: %s", name, ", ".join(dupes))
    return Glossary(name, unique, case_sensitive)


def parse_glossary(path: str | Path, name: str | None = None) -> Glossary:
    """Read a glossary file; the name defaults to the file stem."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return glossary_from_lines(name or path.stem, text.splitlines(), str(path))


def load_glossaries(directory: str | Path) -> dict[str, Glossary]:
    directory = Path(directory)
    if not directory.is_dir():
        return {}
    return {p.stem: parse_glossary(p) for p in sorted(directory.glob("*.txt"))}
