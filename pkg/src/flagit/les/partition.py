"""Coverage signatures, precedence reduction and the seven-way corpus partition."""

from __future__ import annotations

import enum
from typing import Iterable, Mapping, Sequence

from ..corpus import AnnotatedSentence
from .matcher import _covers, _View
from .rules import Category, Rule

P, SP, N, SN = Category.P, Category.SP, Category.N, Category.SN


class Bin(str, enum.Enum):
    """The seven rules-sets, in canonical order."""

    P_OR_SP = "P_OR_SP"
    N_OR_SN = "N_OR_SN"
    SP_AND_N = "SP_AND_N"
    SN_AND_P = "SN_AND_P"
    SP_AND_SN = "SP_AND_SN"
    P_AND_N = "P_AND_N"
    NULL = "NULL"

    def __repr__(self):
        return f"Bin.{self.name}"


BIN_ORDER: tuple[Bin, ...] = tuple(Bin)

_BIN_OF = {
    frozenset(): Bin.NULL,
    frozenset({P}): Bin.P_OR_SP,
    frozenset({SP}): Bin.P_OR_SP,
    frozenset({N}): Bin.N_OR_SN,
    frozenset({SN}): Bin.N_OR_SN,
    frozenset({SP, N}): Bin.SP_AND_N,
    frozenset({SN, P}): Bin.SN_AND_P,
    frozenset({SP, SN}): Bin.SP_AND_SN,
    frozenset({P, N}): Bin.P_AND_N,
}


def coverage_signature(rules: Iterable[Rule], sentence: AnnotatedSentence | _View) -> frozenset[Category]:
    """Categories with at least one rule covering ``sentence``."""
    view = sentence if isinstance(sentence, _View) else _View(sentence.tokens)
    sig = set()
    for rule in rules:
        if rule.category in sig:
            continue
        if _covers(rule, view):
            sig.add(rule.category)
    return frozenset(sig)


def reduce_signature(sig: Iterable[Category]) -> frozenset[Category]:
    """Drop P when SP is present and N when SN is present."""
    sig = set(sig)
    if SP in sig:
        sig.discard(P)
    if SN in sig:
        sig.discard(N)
    return frozenset(sig)


def assign_bin(sig: Iterable[Category]) -> Bin:
    return _BIN_OF[reduce_signature(sig)]


def sentence_bin(rules: Sequence[Rule], sentence: AnnotatedSentence) -> Bin:
    return assign_bin(coverage_signature(_order_rules(rules), sentence))


def _order_rules(rules: Sequence[Rule]) -> list[Rule]:
    # strong categories first so their weak counterparts are skipped once covered
    rank = {SP: 0, SN: 1, P: 2, N: 3}
    return sorted(rules, key=lambda r: rank[r.category])


def assign_bins(rules: Sequence[Rule], corpus: Iterable[AnnotatedSentence]) -> dict[str, Bin]:
    """sent_id -> bin for every sentence."""
    ordered = _order_rules(rules)
    out = {}
    for sent in corpus:
        sig = set()
        view = _View(sent.tokens)
        for rule in ordered:
            cat = rule.category
            if cat in sig or (cat is P and SP in sig) or (cat is N and SN in sig):
                continue
            if _covers(rule, view):
                sig.add(cat)
        out[sent.sent_id] = _BIN_OF[reduce_signature(sig)]
    return out


def partition_corpus(rules: Sequence[Rule], corpus: Iterable[AnnotatedSentence]) -> dict[Bin, list[str]]:
    """Map each of the seven bins (all present, possibly empty) to its sorted sent_ids."""
    parts: dict[Bin, list[str]] = {b: [] for b in BIN_ORDER}
    for sid, b in assign_bins(rules, corpus).items():
        parts[b].append(sid)
    for ids in parts.values():
        ids.sort()
    return parts


def partition_sizes(partition: Mapping[Bin, Sequence[str]]) -> dict[str, int]:
    return {b.value: len(partition.get(b, ())) for b in BIN_ORDER}
