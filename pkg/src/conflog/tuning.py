"""Choose the similarity threshold that maximizes F1 on labeled pairs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .lexicon import OptionLexicon, tokenize_option
from .similarity import build_idf, similarity, variable_words

GRID_START, GRID_STOP, GRID_STEP = 0.40, 0.80, 0.01


class TuningError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledPair:
    option: str
    variable: str
    related: bool


@dataclass(frozen=True)
class CurvePoint:
    threshold: float
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class TuningResult:
    best_threshold: float
    best_f1: float
    curve: tuple[CurvePoint, ...]

    def to_dict(self) -> dict:
        return {
            "best_threshold": self.best_threshold,
            "best_f1": self.best_f1,
            "curve": [vars(p) for p in self.curve],
        }


def default_grid(start: float = GRID_START, stop: float = GRID_STOP, step: float = GRID_STEP) -> list[float]:
    n = round((stop - start) / step)
    return [round(start + i * step, 10) for i in range(n + 1)]


def evaluate(scores: Sequence[float], labels: Sequence[bool], threshold: float) -> CurvePoint:
    tp = sum(1 for s, y in zip(scores, labels) if s >= threshold and y)
    fp = sum(1 for s, y in zip(scores, labels) if s >= threshold and not y)
    fn = sum(1 for s, y in zip(scores, labels) if s < threshold and y)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    # one integer division, so equal F1 ratios give equal floats and ties stay ties
    f1 = 2 * tp / (2 * tp + fp + fn) if tp else 0.0
    return CurvePoint(threshold, precision, recall, f1)


def tune_from_scores(
    scores: Sequence[float], labels: Sequence[bool], grid: Iterable[float] | None = None
) -> TuningResult:
    if not labels:
        raise TuningError("no labeled pairs")
    if len(set(labels)) < 2:
        raise TuningError("labeled pairs must include both related and unrelated examples")
    curve = tuple(evaluate(scores, labels, t) for t in (grid if grid is not None else default_grid()))
    if not curve:
        raise TuningError("empty threshold grid")
    best = max(curve, key=lambda p: (p.f1, -p.threshold))  # ties go to the smaller threshold
    return TuningResult(best.threshold, best.f1, curve)


def tune_threshold(
    pairs: Sequence[LabeledPair], lexicon: OptionLexicon, grid: Iterable[float] | None = None
) -> TuningResult:
    """Sweep the threshold grid and return the argmax-F1 threshold plus the curve."""
    if not pairs:
        raise TuningError("no labeled pairs")
    if not len(lexicon):
        raise TuningError("option lexicon is empty")
    idf = build_idf(lexicon)
    scores = [similarity(tokenize_option(p.option), variable_words(p.variable), idf) for p in pairs]
    return tune_from_scores(scores, [p.related for p in pairs], grid)


_TRUE = {"1", "true", "yes", "y"}
_FALSE = {"0", "false", "no", "n"}


def read_labels(path: str | Path) -> list[LabeledPair]:
    """TSV rows ``option<TAB>variable<TAB>label`` with label 1/0 or true/false."""
    pairs = []
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = [c.strip() for c in line.split("\t")]
        if len(cols) != 3 or cols[2].lower() not in _TRUE | _FALSE:
            raise TuningError(f"{path}:{n}: expected option<TAB>variable<TAB>0|1")
        pairs.append(LabeledPair(cols[0], cols[1], cols[2].lower() in _TRUE))
    return pairs
