"""idf-weighted Jaccard similarity between option names and variable names.

Each option is one document; a word's weight is ``ln(N / df)``. Words never
seen in any option count as ``df = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .lexicon import OptionLexicon, tokenize_identifier


@dataclass(frozen=True)
class IdfTable:
    weights: dict[str, float]
    corpus_size: int

    def weight(self, word: str) -> float:
        w = self.weights.get(word)
        return w if w is not None else math.log(self.corpus_size)


def build_idf(lexicon: OptionLexicon) -> IdfTable:
    n = len(lexicon)
    if n == 0:
        raise ValueError("cannot build idf weights from an empty option lexicon")
    df = lexicon.word_document_frequency
    return IdfTable({w: math.log(n / c) for w, c in sorted(df.items())}, n)


def similarity(option_words: Iterable[str], variable_words: Iterable[str], idf: IdfTable) -> float:
    cwords, vwords = set(option_words), set(variable_words)
    # sorted fsum: the result must not depend on set iteration order
    union = math.fsum(idf.weight(w) for w in sorted(cwords | vwords))
    if union <= 0.0:
        return 0.0
    shared = math.fsum(idf.weight(w) for w in sorted(cwords & vwords))
    return min(1.0, shared / union)


def variable_words(name: str) -> list[str]:
    """Word set of a variable spelling; same segmentation as option names."""
    return tokenize_identifier(name)
