"""Corpus ingestion: markup stripping, sentence segmentation, dedup and token annotation."""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from typing import Iterable, Iterator, Protocol

logger = logging.getLogger(__name__)

_BLOCK_TAGS = frozenset(
    "address article aside blockquote br dd div dl dt fieldset figcaption figure footer "
    "form h1 h2 h3 h4 h5 h6 header hr li main nav ol p pre section table tbody td tfoot "
    "th thead tr ul".split()
)
_SKIP_TAGS = frozenset({"script", "style", "head", "title", "noscript"})

# A newline (any flavour) or a run of three or more whitespace characters.
_DELIMITER = re.compile(r"\s{3,}|\r\n|[\n\r\u2028\u2029]")


@dataclass(frozen=True)
class RawDocument:
    doc_id: str
    body: str
    source: str | None = None


@dataclass(frozen=True)
class Token:
    text: str
    lower: str
    index: int
    pos: str | None = None
    dep: str | None = None
    ner: str | None = None

    def to_dict(self) -> dict:
        d = {"text": self.text, "lower": self.lower}
        for key in ("pos", "dep", "ner"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        return d


@dataclass(frozen=True)
class AnnotatedSentence:
    sent_id: str
    raw: str
    lower: str
    doc_id: str
    tokens: tuple[Token, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "sent_id": self.sent_id,
            "doc_id": self.doc_id,
            "raw": self.raw,
            "lower": self.lower,
            "tokens": [t.to_dict() for t in self.tokens],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnnotatedSentence":
        tokens = tuple(
            Token(
                text=t["text"],
                lower=t.get("lower", t["text"].lower()),
                index=i,
                pos=t.get("pos"),
                dep=t.get("dep"),
                ner=t.get("ner"),
            )
            for i, t in enumerate(d.get("tokens", ()))
        )
        return cls(d["sent_id"], d["raw"], d["lower"], d["doc_id"], tokens)


def sentence_id(lower: str) -> str:
    """Content hash of the lowercased sentence; stable across re-ingestion."""
    return hashlib.blake2b(lower.encode("utf-8"), digest_size=8).hexdigest()


class _TextExtractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip_depth = 0

    def _newline(self):
        if self.parts and not self.parts[-1].endswith("\n"):
            self.parts.append("\n")

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag in _BLOCK_TAGS:
            self._newline()

    def handle_startendtag(self, tag, attrs):
        if tag in _BLOCK_TAGS:
            self._newline()

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag in _BLOCK_TAGS:
            self._newline()

    def handle_data(self, data):
        if not self._skip_depth:
            self.parts.append(data)


def strip_markup(doc: RawDocument | str) -> str:
    """Remove tags from ``doc``'s body, turning block boundaries into newlines.

    Text without markup is returned unchanged. Malformed markup is handled
    best-effort by the stdlib HTML parser.
    """
    body = doc.body if isinstance(doc, RawDocument) else doc
    if "<" not in body and "&" not in body:
        return body
    parser = _TextExtractor()
    parser.feed(body)
    parser.close()
    text = "".join(parser.parts)
    if text.endswith("\n") and not body.endswith("\n"):
        text = text[:-1]
    return text


def segment_sentences(text: str) -> list[str]:
    """Split on newlines and runs of >= 3 whitespace characters; drop blanks."""
    segments = (seg.strip() for seg in _DELIMITER.split(text))
    return [seg for seg in segments if seg]


def normalize_and_dedup(
    sentences: Iterable[str], doc_id: str, seen: set[str] | None = None
) -> list[AnnotatedSentence]:
    """Lowercase and drop exact duplicates on the lowercased form, first wins.

    Pass a shared ``seen`` set to dedup across documents.
    """
    seen = set() if seen is None else seen
    out = []
    for raw in sentences:
        lower = raw.lower()
        if lower in seen:
            continue
        seen.add(lower)
        out.append(AnnotatedSentence(sentence_id(lower), raw, lower, doc_id))
    return out


# --------------------------------------------------------------------------
# Annotators
# --------------------------------------------------------------------------


class Annotator(Protocol):
    def annotate_tokens(self, raw: str) -> list[Token]: ...


class NullAnnotator:
    """Whitespace tokens, no tags."""

    name = "null"

    def annotate_tokens(self, raw: str) -> list[Token]:
        return [Token(w, w.lower(), i) for i, w in enumerate(raw.split())]


_WORD_OR_PUNCT = re.compile(r"\w+(?:['’-]\w+)*|[^\w\s]+")

_ADJECTIVES = frozenset(
    """private discreet new independent clean safe sweet young sexy beautiful upscale
    quiet cozy luxurious luxury exclusive friendly hot busy local cute petite classy
    elegant hygienic comfortable nice gorgeous open secure convenient unprotected
    real fun pretty lovely fresh available""".split()
)
_DETERMINERS = frozenset("a an the this that these those my your our their his her its every each some any no".split())
_PRONOUNS = frozenset("i me you he she we they it us them him myself yourself".split())
_PREPOSITIONS = frozenset(
    "in on at to for from with by of near into onto out over under about around through until".split()
)
_CONJUNCTIONS = frozenset("and or but nor so yet".split())
_VERBS = frozenset(
    """is are am be was were call text come visit see meet stay leave arrive travel
    offer provide do does did have has had will can want need book booking visiting
    coming leaving arriving staying touring passing""".split()
)
_AUX = frozenset("is are am be was were will can do does did have has had".split())
_PERSON_NAMES = frozenset(
    """anna bella candy destiny eva gigi honey ivy jade kim lola maya nina olivia
    paris ruby sasha tina vicky zoe amber crystal diamond jasmine""".split()
)
_PLACES = frozenset(
    """houston dallas austin miami atlanta chicago denver phoenix seattle portland
    boston vegas orlando tampa detroit memphis nashville reno oakland fresno""".split()
)


class HeuristicAnnotator:
    """Deterministic annotator driven by small lookup tables.

    Tokens are words and punctuation runs. POS tags use the universal tag
    names; an adjective from the adjective table directly before a noun
    gets ``dep="amod"``. Capitalized tokens found in the name/place tables
    get ``ner`` PERSON/GPE; everything else gets ``ner="O"``.
    """

    name = "heuristic"

    def _pos(self, text: str, lower: str, index: int) -> str:
        if not lower[0].isalnum() and lower[0] != "_":
            return "PUNCT"
        if lower.isdigit():
            return "NUM"
        if lower in _DETERMINERS:
            return "DET"
        if lower in _PRONOUNS:
            return "PRON"
        if lower in _PREPOSITIONS:
            return "ADP"
        if lower in _CONJUNCTIONS:
            return "CCONJ"
        if lower in _AUX:
            return "AUX"
        if lower in _VERBS:
            return "VERB"
        if lower in _ADJECTIVES:
            return "ADJ"
        if lower in _PERSON_NAMES or lower in _PLACES:
            return "PROPN"
        if index > 0 and text[:1].isupper():
            return "PROPN"
        return "NOUN"

    def annotate_tokens(self, raw: str) -> list[Token]:
        words = _WORD_OR_PUNCT.findall(raw)
        lowers = [w.lower() for w in words]
        pos = [self._pos(w, lw, i) for i, (w, lw) in enumerate(zip(words, lowers))]
        tokens = []
        for i, (w, lw, p) in enumerate(zip(words, lowers, pos)):
            nxt = pos[i + 1] if i + 1 < len(pos) else None
            if p == "ADJ" and nxt in ("NOUN", "PROPN"):
                dep = "amod"
            elif p == "NUM" and nxt in ("NOUN", "PROPN"):
                dep = "nummod"
            else:
                dep = {"DET": "det", "ADP": "prep", "PUNCT": "punct", "CCONJ": "cc", "AUX": "aux"}.get(p, "dep")
            if w[:1].isupper() and lw in _PERSON_NAMES:
                ner = "PERSON"
            elif w[:1].isupper() and lw in _PLACES:
                ner = "GPE"
            else:
                ner = "O"
            tokens.append(Token(w, lw, i, pos=p, dep=dep, ner=ner))
        return tokens


ANNOTATORS = {"null": NullAnnotator, "heuristic": HeuristicAnnotator}


def get_annotator(name: str) -> Annotator:
    try:
        return ANNOTATORS[name]()
    except KeyError:
        raise ValueError(f"unknown annotator {name!r}; choose from {sorted(ANNOTATORS)}") from None


def annotate(sentence: AnnotatedSentence | str, annotator: Annotator | None = None) -> AnnotatedSentence:
    """Attach tokens to ``sentence``; falls back to whitespace tokens on annotator failure."""
    if isinstance(sentence, str):
        lower = sentence.lower()
        sentence = AnnotatedSentence(sentence_id(lower), sentence, lower, "")
    annotator = annotator or NullAnnotator()
    try:
        tokens = annotator.annotate_tokens(sentence.raw)
    except Exception as exc:
        logger.warning("annotator failed on %s (%s); using whitespace tokens", sentence.sent_id, exc)
        tokens = NullAnnotator().annotate_tokens(sentence.raw)
    return AnnotatedSentence(sentence.sent_id, sentence.raw, sentence.lower, sentence.doc_id, tuple(tokens))


# --------------------------------------------------------------------------
# JSONL I/O
# --------------------------------------------------------------------------


def read_documents(path: str | Path) -> Iterator[RawDocument]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                yield RawDocument(str(d["doc_id"]), d.get("body") or "", d.get("source"))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad document record ({exc})") from exc


def build_corpus(
    documents: Iterable[RawDocument], annotator: Annotator | None = None
) -> tuple[list[AnnotatedSentence], dict]:
    """Run strip -> segment -> dedup -> annotate over documents, in order.

    Returns the corpus and ingestion stats.
    """
    seen: set[str] = set()
    doc_ids: set[str] = set()
    corpus = []
    n_docs = n_segments = 0
    for doc in documents:
        if doc.doc_id in doc_ids:
            raise ValueError(f"duplicate doc_id {doc.doc_id!r}")
        doc_ids.add(doc.doc_id)
        n_docs += 1
        segments = segment_sentences(strip_markup(doc))
        n_segments += len(segments)
        for sent in normalize_and_dedup(segments, doc.doc_id, seen):
            corpus.append(annotate(sent, annotator))
    stats = {
        "documents": n_docs,
        "segments": n_segments,
        "sentences": len(corpus),
        "duplicates": n_segments - len(corpus),
        "dedup_ratio": (n_segments - len(corpus)) / n_segments if n_segments else 0.0,
    }
    return corpus, stats


def write_corpus(corpus: Iterable[AnnotatedSentence], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sent in corpus:
            fh.write(json.dumps(sent.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def read_corpus(path: str | Path) -> list[AnnotatedSentence]:
    with open(path, encoding="utf-8") as fh:
        return [AnnotatedSentence.from_dict(json.loads(line)) for line in fh if line.strip()]
