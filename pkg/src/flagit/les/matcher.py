"""Matching rules against annotated sentences.

A rule covers a sentence when some contiguous run of tokens satisfies its
elements in order, one token per element (a multi-word glossary entry
consumes one token per word).
"""

from __future__ import annotations

import logging
from typing import NamedTuple, Sequence

from ..corpus import AnnotatedSentence, Token
from .rules import PatternElement, Rule

logger = logging.getLogger(__name__)

_warned_fields: set[str] = set()


def _warn_missing(field_name: str) -> None:
    if field_name not in _warned_fields:
        _warned_fields.add(field_name)
        logger.warning(
            "rules reference %r annotations that some sentences lack; those elements never match", field_name
        )


class MatchResult(NamedTuple):
    covered: bool
    spans: list[tuple[int, int]]


class _View:
    """Per-sentence lookups shared by all rules evaluated on it."""

    __slots__ = ("tokens", "lowers", "lowerset", "raws")

    def __init__(self, tokens: Sequence[Token]):
        self.tokens = tokens
        self.lowers = tuple(t.lower for t in tokens)
        self.lowerset = frozenset(self.lowers)
        self.raws = tuple(t.text for t in tokens)


def _surface(el: PatternElement, view: _View, i: int) -> str:
    return view.raws[i] if el.surface == "raw" else view.lowers[i]


def _token_ok(el: PatternElement, view: _View, i: int) -> bool:
    """All non-glossary constraints of ``el`` hold on token ``i``."""
    if el.constant is not None:
        if el.surface == "raw":
            if view.raws[i] != el.constant:
                return False
        elif view.lowers[i] != el.constant.lower():
            return False
    if el.regex is not None and el._compiled.search(_surface(el, view, i)) is None:
        return False
    if el.pos is not None or el.dep is not None or el.ner is not None:
        tok = view.tokens[i]
        for key in ("pos", "dep", "ner"):
            want = getattr(el, key)
            if want is None:
                continue
            have = getattr(tok, key)
            if have is None:
                _warn_missing(key)
                return False
            if have.lower() != want.lower():
                return False
    return True


def _element_ends(el: PatternElement, view: _View, i: int) -> list[int]:
    """Exclusive end offsets at which ``el`` can finish when started at ``i``."""
    n = len(view.lowers)
    if i >= n:
        return []
    gl = el.glossary
    if gl is None:
        return [i + 1] if _token_ok(el, view, i) else []
    ends = []
    for phrase in gl.phrases_starting_with(_surface(el, view, i)):
        j = i + len(phrase)
        if j > n:
            continue
        ok = True
        for k, word in enumerate(phrase):
            s = _surface(el, view, i + k)
            if (s if gl.case_sensitive else s.lower()) != word or not _token_ok(el, view, i + k):
                ok = False
                break
        if ok:
            ends.append(j)
    return ends


def _match_from(rule: Rule, view: _View, start: int) -> int:
    """Longest exclusive end of a match starting at ``start``, or -1."""
    frontier = {start}
    for el in rule.elements:
        nxt = set()
        for p in frontier:
            nxt.update(_element_ends(el, view, p))
        if not nxt:
            return -1
        frontier = nxt
    return max(frontier)


def _could_start(el: PatternElement, view: _View) -> bool:
    """Cheap necessary condition for the first element to match anywhere."""
    if el.constant is not None and el.surface == "lower":
        return el.constant.lower() in view.lowerset
    if el.glossary is not None and el.surface == "lower" and not el.glossary.case_sensitive:
        return not view.lowerset.isdisjoint(el.glossary._phrases)
    return True


def _covers(rule: Rule, view: _View) -> bool:
    n = len(view.lowers)
    if n < len(rule.elements) or not _could_start(rule.elements[0], view):
        return False
    return any(_match_from(rule, view, i) >= 0 for i in range(n))


def _tokens_of(sentence: AnnotatedSentence | Sequence[Token]) -> Sequence[Token]:
    return sentence.tokens if isinstance(sentence, AnnotatedSentence) else sentence


def match_rule(rule: Rule, sentence: AnnotatedSentence) -> MatchResult:
    """Return coverage and all maximal matched spans as inclusive token ranges."""
    view = _View(_tokens_of(sentence))
    spans = []
    if _could_start(rule.elements[0], view):
        for i in range(len(view.lowers)):
            end = _match_from(rule, view, i)
            if end >= 0:
                spans.append((i, end - 1))
    maximal = [
        s for s in spans if not any(o != s and o[0] <= s[0] and s[1] <= o[1] for o in spans)
    ]
    return MatchResult(bool(maximal), maximal)


def rule_covers(rule: Rule, sentence: AnnotatedSentence) -> bool:
    return _covers(rule, _View(_tokens_of(sentence)))


def sentence_view(sentence: AnnotatedSentence) -> _View:
    return _View(_tokens_of(sentence))
