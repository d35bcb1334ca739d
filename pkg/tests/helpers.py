"""Random sentence and rule generators shared by the property tests."""

from __future__ import annotations

import numpy as np

from flagit.corpus import HeuristicAnnotator, annotate
from flagit.les import parse_rules
from flagit.les.glossary import glossary_from_lines

VOCAB = "a b c d e f g h i j k l m n o p q r s t private discreet apartment studio".split()
GLOSSARIES = {
    "priv": glossary_from_lines("priv", ["private", "discreet"]),
    "place": glossary_from_lines("place", ["apartment", "studio", "a b"]),
}


def random_sentences(n: int, seed: int = 0):
    """``n`` distinct annotated sentences over a small vocabulary."""
    rng = np.random.default_rng(seed)
    ann = HeuristicAnnotator()
    seen, out = set(), []
    while len(out) < n:
        text = " ".join(rng.choice(VOCAB, int(rng.integers(1, 10))))
        if text not in seen:
            seen.add(text)
            out.append(annotate(text, ann))
    return out


def _element(rng) -> str:
    kind = rng.integers(0, 4)
    if kind == 0:
        return f"<glossary={rng.choice(list(GLOSSARIES))}>"
    if kind == 1:
        return f"<pos={rng.choice(['NOUN', 'ADJ', 'DET'])}>"
    return f'"{rng.choice(VOCAB)}"'


def random_rules(seed: int, max_rules: int = 8):
    rng = np.random.default_rng([seed, 99])
    lines = []
    for _ in range(int(rng.integers(0, max_rules + 1))):
        cat = rng.choice(["P", "SP", "N", "SN"])
        lines.append(f"{cat}: " + ", ".join(_element(rng) for _ in range(int(rng.integers(1, 3)))))
    return parse_rules("\n".join(lines), GLOSSARIES, "x")
