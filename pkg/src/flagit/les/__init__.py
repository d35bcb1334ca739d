"""Lightweight expert system: glossaries, rule DSL, matching and partitioning."""

from dataclasses import dataclass
from pathlib import Path

from .glossary import Glossary, glossary_from_lines, load_glossaries, parse_glossary
from .matcher import MatchResult, match_rule, rule_covers
from .partition import (
    BIN_ORDER,
    Bin,
    assign_bin,
    assign_bins,
    coverage_signature,
    partition_corpus,
    partition_sizes,
    reduce_signature,
    sentence_bin,
)
from .rules import Category, PatternElement, Rule, check_limited_regex, parse_rule, parse_rules, parse_rules_file

RULES_FILENAME = "rules.flagit"


@dataclass(frozen=True)
class IndicatorRules:
    name: str
    rules: tuple[Rule, ...]
    glossaries: dict


def load_indicator(directory: str | Path, name: str | None = None) -> IndicatorRules:
    """Load ``rules.flagit`` and ``glossaries/*.txt`` from an indicator directory.

    A missing rules file means an indicator with no rules.
    """
    directory = Path(directory)
    name = name or directory.name
    glossaries = load_glossaries(directory / "glossaries")
    rules_path = directory / RULES_FILENAME
    rules = parse_rules_file(rules_path, glossaries, name) if rules_path.exists() else []
    return IndicatorRules(name, tuple(rules), glossaries)


__all__ = [
    "BIN_ORDER",
    "Bin",
    "Category",
    "Glossary",
    "IndicatorRules",
    "MatchResult",
    "PatternElement",
    "RULES_FILENAME",
    "Rule",
    "assign_bin",
    "assign_bins",
    "check_limited_regex",
    "coverage_signature",
    "glossary_from_lines",
    "load_glossaries",
    "load_indicator",
    "match_rule",
    "parse_glossary",
    "parse_rule",
    "parse_rules",
    "parse_rules_file",
    "partition_corpus",
    "partition_sizes",
    "reduce_signature",
    "rule_covers",
    "sentence_bin",
]
