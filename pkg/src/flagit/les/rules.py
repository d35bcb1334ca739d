"""Rule DSL: categories, pattern elements and the line-oriented parser.

Grammar, one rule per line::

    rule     := CATEGORY ":" element ("," element)*
    CATEGORY := "P" | "SP" | "N" | "SN"
    element  := '"' token '"' | "<" spec ("&" spec)* ">"
    spec     := "glossary=" name | "regex=" pattern | "pos=" tag
              | "dep=" label | "ner=" type | "surface=raw"

Inside a regex value, ``&`` and ``>`` must be escaped with a backslash.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from ..errors import RuleSyntaxError
from .glossary import Glossary


class Category(str, enum.Enum):
    P = "P"
    SP = "SP"
    N = "N"
    SN = "SN"

    def __repr__(self):
        return f"Category.{self.name}"


_CATEGORY_NAMES = {c.value: c for c in Category}
_TAG_KEYS = ("pos", "dep", "ner")


def check_limited_regex(pattern: str) -> int | None:
    """Validate ``pattern`` against the limited grammar.

    Allowed: literals, escaped punctuation, ``\\d \\w \\s`` (and negations),
    character classes, ``.``, ``* + ?``, ``^ $`` and ``|``. Returns the
    0-based offset of the first offending character, or None if valid.
    """
    i = 0
    atom = False  # whether a quantifier may follow
    n = len(pattern)
    while i < n:
        c = pattern[i]
        if c == "\\":
            if i + 1 >= n:
                return i
            nxt = pattern[i + 1]
            if nxt.isalnum() and nxt not in "dwsDWS":
                return i
            i += 2
            atom = True
            continue
        if c == "[":
            j = i + 1
            if j < n and pattern[j] == "^":
                j += 1
            if j < n and pattern[j] == "]":
                j += 1
            while j < n and pattern[j] != "]":
                j += 2 if pattern[j] == "\\" else 1
            if j >= n:
                return i
            i = j + 1
            atom = True
            continue
        if c in "*+?":
            if not atom:
                return i
            atom = False
        elif c in "^$|":
            atom = False
        elif c in "(){}":
            return i
        else:
            atom = True
        i += 1
    return None


@dataclass(frozen=True)
class PatternElement:
    """Conjunction of constraints that a single token (or glossary phrase) must meet."""

    constant: str | None = None
    glossary: Glossary | None = None
    regex: str | None = None
    pos: str | None = None
    dep: str | None = None
    ner: str | None = None
    surface: str = "lower"
    _compiled: re.Pattern | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.surface not in ("lower", "raw"):
            raise ValueError(f"surface must be 'lower' or 'raw', not {self.surface!r}")
        if not any(v is not None for v in (self.constant, self.glossary, self.regex, self.pos, self.dep, self.ner)):
            raise ValueError("pattern element needs at least one constraint")
        if self.constant is not None and self.glossary is not None:
            raise ValueError("a constant cannot be combined with a glossary constraint")
        if self.regex is not None:
            bad = check_limited_regex(self.regex)
            if bad is not None:
                raise ValueError(f"regex {self.regex!r} outside the limited grammar at offset {bad}")
            object.__setattr__(self, "_compiled", re.compile(self.regex))

    @property
    def tag_fields(self) -> tuple[str, ...]:
        return tuple(k for k in _TAG_KEYS if getattr(self, k) is not None)

    def to_dsl(self) -> str:
        if self.constant is not None and not self.tag_fields and self.regex is None:
            escaped = self.constant.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        specs = []
        if self.glossary is not None:
            specs.append(f"glossary={self.glossary.name}")
        if self.regex is not None:
            specs.append("regex=" + self.regex.replace("&", "\\&").replace(">", "\\>"))
        specs.extend(f"{k}={getattr(self, k)}" for k in self.tag_fields)
        if self.surface == "raw":
            specs.append("surface=raw")
        return "<" + " & ".join(specs) + ">"


@dataclass(frozen=True)
class Rule:
    rule_id: str
    category: Category
    elements: tuple[PatternElement, ...]
    indicator: str = ""

    def __post_init__(self):
        if not self.elements:
            raise ValueError("rule needs at least one element")
        if not isinstance(self.category, Category):
            object.__setattr__(self, "category", Category(self.category))

    def to_dsl(self) -> str:
        return f"{self.category.value}: " + ", ".join(e.to_dsl() for e in self.elements)


class _Scanner:
    def __init__(self, text: str, line: int, source: str):
        self.text = text
        self.pos = 0
        self.line = line
        self.source = source

    def error(self, message: str, at: int | None = None) -> RuleSyntaxError:
        return RuleSyntaxError(message, self.line, (self.pos if at is None else at) + 1, self.source)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of line"
            raise self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def read_until(self, stops: str, keep_escapes: bool) -> str:
        out = []
        while self.pos < len(self.text) and self.text[self.pos] not in stops:
            c = self.text[self.pos]
            if c == "\\" and self.pos + 1 < len(self.text):
                nxt = self.text[self.pos + 1]
                out.append(c + nxt if keep_escapes else nxt)
                self.pos += 2
                continue
            out.append(c)
            self.pos += 1
        return "".join(out)


def _parse_constant(sc: _Scanner) -> list[PatternElement]:
    start = sc.pos
    sc.pos += 1
    value = sc.read_until('"', keep_escapes=False)
    if sc.peek() != '"':
        raise sc.error("unterminated quoted token", start)
    sc.pos += 1
    words = value.split()
    if not words:
        raise sc.error("empty quoted token", start)
    return [PatternElement(constant=w) for w in words]


def _parse_bracketed(sc: _Scanner, glossaries: Mapping[str, Glossary]) -> PatternElement:
    start = sc.pos
    sc.pos += 1
    kwargs: dict = {}
    while True:
        sc.skip_ws()
        key_at = sc.pos
        key = sc.read_until("=&>", keep_escapes=True).strip()
        if sc.peek() != "=":
            raise sc.error(f"expected key=value, found {key!r}" if key else "expected key=value", key_at)
        sc.pos += 1
        sc.skip_ws()
        value_at = sc.pos
        value = sc.read_until("&>", keep_escapes=True).strip()
        if not value:
            raise sc.error(f"empty value for {key!r}", value_at)
        if key in kwargs:
            raise sc.error(f"duplicate {key!r} in element", key_at)
        if key == "glossary":
            if value not in glossaries:
                raise sc.error(f"unknown glossary {value!r}", value_at)
            kwargs["glossary"] = glossaries[value]
        elif key == "regex":
            bad = check_limited_regex(value)
            if bad is not None:
                raise sc.error(f"malformed regex {value!r}", value_at + bad)
            try:
                re.compile(value)
            except re.error as exc:
                raise sc.error(f"malformed regex {value!r}: {exc}", value_at) from None
            kwargs["regex"] = value
        elif key in _TAG_KEYS:
            if any(ch.isspace() for ch in value):
                raise sc.error(f"{key} value may not contain whitespace", value_at)
            kwargs[key] = value
        elif key == "surface":
            if value not in ("raw", "lower"):
                raise sc.error(f"surface must be 'raw' or 'lower', not {value!r}", value_at)
            kwargs["surface"] = value
        else:
            raise sc.error(f"unknown constraint {key!r}", key_at)
        if sc.peek() == "&":
            sc.pos += 1
            continue
        if sc.peek() == ">":
            sc.pos += 1
            break
        raise sc.error("unterminated element, expected '>'", start)
    if set(kwargs) <= {"surface"}:
        raise sc.error("element has no constraints", start)
    return PatternElement(**kwargs)


def parse_rule(
    line: str,
    glossaries: Mapping[str, Glossary] | None = None,
    *,
    indicator: str = "",
    rule_id: str | None = None,
    lineno: int = 1,
    source: str = "<rule>",
) -> Rule:
    """Parse one DSL line into a :class:`Rule`.

    Raises RuleSyntaxError carrying the line and 1-based column of the problem.
    """
    glossaries = glossaries or {}
    sc = _Scanner(line.rstrip("\n"), lineno, source)
    sc.skip_ws()
    cat_at = sc.pos
    cat = sc.read_until(":", keep_escapes=True).strip()
    if sc.peek() != ":":
        raise sc.error("expected 'CATEGORY:' prefix", cat_at)
    category = _CATEGORY_NAMES.get(cat.upper())
    if category is None:
        raise sc.error(f"unknown category {cat!r} (expected P, SP, N or SN)", cat_at)
    sc.pos += 1
    elements: list[PatternElement] = []
    while True:
        sc.skip_ws()
        ch = sc.peek()
        if ch == '"':
            elements.extend(_parse_constant(sc))
        elif ch == "<":
            elements.append(_parse_bracketed(sc, glossaries))
        elif not ch:
            raise sc.error("expected an element")
        else:
            raise sc.error(f"unexpected {ch!r}; elements start with '\"' or '<'")
        sc.skip_ws()
        if sc.peek() == ",":
            sc.pos += 1
            continue
        if sc.peek() in ("", "#"):
            break
        raise sc.error(f"expected ',' or end of rule, found {sc.peek()!r}")
    return Rule(rule_id or f"{indicator or 'rule'}:{lineno}", category, tuple(elements), indicator)


def parse_rules(text: str, glossaries: Mapping[str, Glossary], indicator: str = "", source: str = "<rules>") -> list[Rule]:
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rules.append(parse_rule(line, glossaries, indicator=indicator, lineno=lineno, source=source))
    return rules


def parse_rules_file(path: str | Path, glossaries: Mapping[str, Glossary], indicator: str = "") -> list[Rule]:
    path = Path(path)
    return parse_rules(path.read_text(encoding="utf-8"), glossaries, indicator, str(path))
