"""Synthetic ad-like corpora with planted, per-indicator lexical signals.

Sentences are shuffled chunks: neutral filler plus, for each indicator,
either positive cue phrases (with probability ``positive_rate``) or,
for negatives, occasional hard-negative and decoy phrases. Cue phrases come
in two kinds: *strong* cues are covered by the shipped rules, *latent* cues
are not, so only a learned model can pick them up.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterator

import numpy as np

from ..corpus import AnnotatedSentence, RawDocument, sentence_id

INDICATORS = ("incall", "outcall", "movement", "risky", "multi_girl")


@dataclass(frozen=True)
class IndicatorSignals:
    strong: tuple[str, ...]
    latent: tuple[str, ...]
    hard_negative: tuple[str, ...]
    decoy: tuple[str, ...]


SIGNALS: dict[str, IndicatorSignals] = {
    "incall": IndicatorSignals(
        strong=("private apartment", "discreet studio", "incall", "incalls welcome", "in-call available",
                "my condo", "come see me", "upscale suite", "our loft", "cozy residence"),
        latent=("i host", "hosting downtown", "doorman building", "ring the buzzer", "parking at my building",
                "at my spot", "my own space", "you come to me", "hosting all day", "my building has parking",
                "buzz unit 4", "elevator to the top floor"),
        hard_negative=("no incall", "sorry no incalls", "no in-call", "i travel", "i travel often"),
        decoy=("our studio photos are real", "my apartment number is private"),
    ),
    "outcall": IndicatorSignals(
        strong=("outcall", "outcalls available", "out-call", "i come to your place", "your hotel",
                "travel to you", "drive to your location", "your office", "your motel"),
        latent=("i can meet you anywhere", "delivered to your door", "hotels welcome", "anywhere in the city",
                "i bring the fun to you", "on the move to meet you", "meet you at yours", "door to door",
                "any hotel downtown", "i make house calls"),
        hard_negative=("no outcall", "sorry no outcalls", "my place", "my place or nothing"),
        decoy=("leave your room number", "your home screen"),
    ),
    "movement": IndicatorSignals(
        strong=("new in town", "just arrived", "back in town", "passing through", "on tour", "touring",
                "this week only", "leaving soon", "visiting Denver", "visiting Reno", "tonight only"),
        latent=("first time here", "my last night here", "here for a short stay", "flying out monday",
                "traveling girl", "only here briefly", "heading west next week", "fresh off the plane",
                "next stop after here", "catch me before i go"),
        hard_negative=("not visiting", "local girl", "always here"),
        decoy=("limited time special", "until sunday specials"),
    ),
    "risky": IndicatorSignals(
        strong=("no limits", "anything goes", "unprotected", "no restrictions", "without protection",
                "no protection needed", "open minded"),
        latent=("extreme fun", "wild party girl", "all the way", "no rules", "try everything",
                "nothing off the table", "push boundaries", "bare fun", "risk taker", "daring play"),
        hard_negative=("safe only", "always protected", "protection only", "no risks"),
        decoy=("open minded conversation",),
    ),
    "multi_girl": IndicatorSignals(
        strong=("two girls", "3 ladies", "several models", "duo available", "double trouble",
                "choose from", "new girls", "many women", "variety of angels", "four ladies"),
        latent=("me and my friend", "bring a friend", "my girlfriend joins", "sisters special",
                "me and my bestie", "roommate joins too", "friends available", "party with us",
                "we both", "tag team"),
        hard_negative=("just me", "independent", "one on one"),
        decoy=("pick from my menu", "new women clothing line"),
    ),
}

NEUTRAL = (
    "call me", "text me anytime", "sweet and fun", "available now", "ask about specials", "great reviews",
    "serious inquiries", "no blocked numbers", "real pics", "friendly and outgoing", "let's have fun",
    "call or text", "new pics", "you won't be disappointed", "gentlemen preferred", "hit me up",
    "open late", "specials today", "best in the city", "100 percent real", "ready for you",
    "don't miss out", "good vibes", "satisfaction guaranteed", "reviews welcome", "relax and unwind",
    "professional and classy", "easy going", "see my reviews", "fun personality", "cash or card",
    "no rush", "great smile", "petite and cute", "tall and slim", "upscale gentlemen", "weekends too",
)
NAMES = ("Ruby", "Candy", "Jade", "Lola", "Maya", "Nina", "Sasha", "Ivy", "Zoe", "Bella")
CITIES = ("Houston", "Dallas", "Austin", "Miami", "Atlanta", "Chicago", "Phoenix", "Seattle", "Tampa", "Boston")


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for :func:`generate`.

    strength: chance a positive carries a strong (rule-covered) cue; the
        rest carry only latent cues.
    latent_extra: chance a strong-cue positive also carries a latent cue.
    cross_rate: chance a positive also carries a hard-negative phrase, which
        lands it in a mixed bin without changing its label.
    """

    n_sentences: int = 5000
    positive_rate: float = 0.1
    strength: float = 0.7
    latent_extra: float = 0.6
    hard_negative_rate: float = 0.08
    decoy_rate: float = 0.03
    label_noise: float = 0.0
    cross_rate: float = 0.0
    neutral_chunks: tuple[int, int] = (2, 4)
    sentences_per_doc: int = 5
    indicators: tuple[str, ...] = INDICATORS
    seed: int = 0


# Hard negatives and cross cues are frequent enough that most rule bins
# hold 20+ sentences, so the labeling sample is spread across bins.
PRESETS = {
    "strong": GeneratorConfig(strength=0.5, latent_extra=0.7, hard_negative_rate=0.15, cross_rate=0.3),
    "weak": GeneratorConfig(strength=0.4, latent_extra=0.4, label_noise=0.03, hard_negative_rate=0.15, cross_rate=0.3),
    "rules_only": GeneratorConfig(strength=1.0, latent_extra=0.0, decoy_rate=0.0, hard_negative_rate=0.15),
}


def preset(name: str, **overrides) -> GeneratorConfig:
    return replace(PRESETS[name], **overrides)


@dataclass
class SyntheticCorpus:
    documents: list[RawDocument]
    gold: dict[str, dict[str, bool]]  # lowercased sentence -> indicator -> label
    config: GeneratorConfig = field(default_factory=GeneratorConfig)

    def gold_for(self, indicator: str, corpus: list[AnnotatedSentence]) -> dict[str, bool]:
        return {s.sent_id: self.gold[s.lower][indicator] for s in corpus}


def _sentence(rng: np.random.Generator, cfg: GeneratorConfig) -> tuple[str, dict[str, bool]]:
    lo, hi = cfg.neutral_chunks
    chunks = [NEUTRAL[i] for i in rng.choice(len(NEUTRAL), size=int(rng.integers(lo, hi + 1)), replace=False)]
    if rng.random() < 0.3:
        chunks.append(f"{NAMES[rng.integers(len(NAMES))]} here")
    if rng.random() < 0.2:
        chunks.append(f"in {CITIES[rng.integers(len(CITIES))]}")
    labels = {}
    for name in cfg.indicators:
        sig = SIGNALS[name]
        positive = bool(rng.random() < cfg.positive_rate)
        if positive:
            if rng.random() < cfg.strength:
                chunks.append(sig.strong[rng.integers(len(sig.strong))])
                if rng.random() < cfg.latent_extra:
                    chunks.append(sig.latent[rng.integers(len(sig.latent))])
            else:
                chunks.append(sig.latent[rng.integers(len(sig.latent))])
            if cfg.cross_rate and rng.random() < cfg.cross_rate:
                chunks.append(sig.hard_negative[rng.integers(len(sig.hard_negative))])
        else:
            if rng.random() < cfg.hard_negative_rate:
                chunks.append(sig.hard_negative[rng.integers(len(sig.hard_negative))])
            if rng.random() < cfg.decoy_rate:
                chunks.append(sig.decoy[rng.integers(len(sig.decoy))])
        if cfg.label_noise and rng.random() < cfg.label_noise:
            positive = not positive
        labels[name] = positive
    order = rng.permutation(len(chunks))
    text = " ".join(chunks[i] for i in order)
    return text[:1].upper() + text[1:], labels


def iter_sentences(cfg: GeneratorConfig) -> Iterator[tuple[str, dict[str, bool]]]:
    """Endless stream of (raw sentence, labels); duplicates possible."""
    rng = np.random.default_rng([cfg.seed, 7])
    while True:
        yield _sentence(rng, cfg)


def generate(cfg: GeneratorConfig = GeneratorConfig()) -> SyntheticCorpus:
    """Generate ``cfg.n_sentences`` distinct sentences grouped into documents."""
    gold: dict[str, dict[str, bool]] = {}
    sentences = []
    stream = iter_sentences(cfg)
    attempts = 0
    while len(sentences) < cfg.n_sentences:
        raw, labels = next(stream)
        attempts += 1
        if attempts > 50 * cfg.n_sentences + 1000:
            raise RuntimeError("generator cannot produce enough distinct sentences")
        key = raw.lower()
        if key in gold:
            continue
        gold[key] = labels
        sentences.append(raw)
    docs = []
    k = max(1, cfg.sentences_per_doc)
    for d, start in enumerate(range(0, len(sentences), k)):
        part = sentences[start : start + k]
        body = "\n".join(part) if d % 3 else "".join(f"<p>{s}</p>" for s in part)
        docs.append(RawDocument(f"doc{d:06d}", body, "synthetic"))
    return SyntheticCorpus(docs, gold, cfg)


def stream_corpus(n: int, cfg: GeneratorConfig = GeneratorConfig()) -> Iterator[AnnotatedSentence]:
    """``n`` unannotated sentences for bulk tagging; duplicates are not removed."""
    stream = iter_sentences(cfg)
    for i in range(n):
        raw, _ = next(stream)
        lower = raw.lower()
        yield AnnotatedSentence(sentence_id(lower) + f"-{i}", raw, lower, "stream")


FILLER = tuple(
    """
    the a an and or but with for from into over under near after before during about
    morning evening weekend city river garden market window table chair kitchen street road
    coffee tea bread music movie book paper letter phone camera jacket shoe bag ticket
    blue green red yellow quiet loud small large warm cold bright dark early late fresh old
    walk run read write cook clean open close visit watch build paint carry drive call play
    friend neighbor teacher driver doctor artist farmer baker student captain pilot sister
    tomorrow today yesterday always never often sometimes soon again slowly quickly
    """.split()
)
PLANTED_TOKEN = "zebra"

# Rules for the planted indicator. The signal token is covered by P, a
# strong phrase by Sp, and a hard-negative cue by N/Sn; latent positive
# cues are left uncovered so only a learner can use them.
PLANTED_RULES = """\
SP: "striped zebra"
P: "zebra"
N: "horse"
SN: "plain horse"
"""


@dataclass(frozen=True)
class PlantedConfig:
    n_sentences: int = 5140
    positive_rate: float = 0.1
    strong_rate: float = 0.3  # positive uses "striped zebra"
    latent_rate: float = 0.1  # positive carries a latent cue instead of the token
    hard_negative_rate: float = 0.1  # negative carries "horse" / "plain horse"
    cross_rate: float = 0.4  # positive also carries a negative cue
    length: tuple[int, int] = (6, 12)
    token: str = PLANTED_TOKEN
    latent: tuple[str, ...] = ("okapi", "quagga")
    seed: int = 0


def planted_sentences(cfg: PlantedConfig = PlantedConfig(), n: int | None = None) -> list[tuple[str, bool]]:
    """Distinct filler sentences labeled positive iff they carry a positive cue.

    Exactly ``round(n * positive_rate)`` of them are positive.

    Positives carry the signal token (sometimes as "striped <token>") or, with
    ``latent_rate``, one latent cue instead. Negatives may carry a hard
    negative cue; positives occasionally do too, which populates the mixed
    bins under :data:`PLANTED_RULES`.
    """
    n = cfg.n_sentences if n is None else n
    rng = np.random.default_rng([cfg.seed, 11])
    out: list[tuple[str, bool]] = []
    seen: set[str] = set()
    lo, hi = cfg.length

    def neg_cue():
        return ["plain", "horse"] if rng.random() < 0.4 else ["horse"]

    # Exact class counts: labels come from a shuffled schedule, and a
    # duplicate sentence is redrawn with the same label.
    n_pos = round(n * cfg.positive_rate)
    schedule = rng.permutation(np.arange(n) < n_pos)

    while len(out) < n:
        words = [FILLER[i] for i in rng.integers(len(FILLER), size=int(rng.integers(lo, hi + 1)))]
        cues: list[list[str]] = []
        positive = bool(schedule[len(out)])
        if positive:
            if rng.random() < cfg.latent_rate:
                cues.append([cfg.latent[int(rng.integers(len(cfg.latent)))]])
            else:
                cues.append(["striped", cfg.token] if rng.random() < cfg.strong_rate else [cfg.token])
                if rng.random() < cfg.cross_rate:
                    cues.append(neg_cue())
        elif rng.random() < cfg.hard_negative_rate:
            cues.append(neg_cue())
        for cue in cues:
            at = int(rng.integers(len(words) + 1))
            words[at:at] = cue
        text = " ".join(words)
        if text not in seen:
            seen.add(text)
            out.append((text, positive))
    return out


def planted_corpus(cfg: PlantedConfig = PlantedConfig(), indicator: str = PLANTED_TOKEN) -> SyntheticCorpus:
    """Single-indicator corpus around :func:`planted_sentences`, five sentences per document."""
    pairs = planted_sentences(cfg)
    gold = {text: {indicator: y} for text, y in pairs}
    docs = [
        RawDocument(f"doc{d:06d}", "\n".join(t for t, _ in pairs[i : i + 5]), "planted")
        for d, i in enumerate(range(0, len(pairs), 5))
    ]
    gen = GeneratorConfig(n_sentences=cfg.n_sentences, positive_rate=cfg.positive_rate, indicators=(indicator,), seed=cfg.seed)
    return SyntheticCorpus(docs, gold, gen)


def write_documents(docs: list[RawDocument], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({"doc_id": doc.doc_id, "body": doc.body, "source": doc.source}) + "\n")


def config_dict(cfg: GeneratorConfig) -> dict:
    return asdict(cfg)
