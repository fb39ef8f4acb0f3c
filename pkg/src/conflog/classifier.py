"""Decide whether a message describes a configuration constraint.

Messages are tagged, normalized (option name to CONFIG, error words to
ERROR_STATUS, function words dropped, noun and adjective runs merged) and
then matched against five tag-sequence patterns.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .lexicon import ConfigOption
from .tagger import Lexicon, Marker, Tag, TagToken, singular, data_path, pos_tag, read_word_list

SLOT_FILES = {
    "modal": "slot_modal.txt",
    "aux": "slot_aux.txt",
    "accept": "slot_accept.txt",
    "validity": "slot_validity.txt",
    "comparative": "slot_comparative.txt",
}
_BARRIERS = (Marker.CONFIG, Marker.ERROR_STATUS)
_SENTENCE_BREAKS = {".", "!", "?", ";"}


@dataclass(frozen=True)
class ErrorLexicon:
    words: frozenset[str]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("error lexicon is empty")

    @classmethod
    def load(cls, path: str | Path | None = None) -> ErrorLexicon:
        return cls(frozenset(read_word_list(path or data_path("error_words.txt"))))

    def __contains__(self, word: str) -> bool:
        return word in self.words or singular(word) in self.words


def load_slot_lexicons(overrides: Mapping[str, str | Path] | None = None) -> dict[str, frozenset[str]]:
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(SLOT_FILES)
    if unknown:
        raise ValueError(f"unknown slot lexicon(s): {', '.join(sorted(unknown))}")
    out = {}
    for slot, fname in SLOT_FILES.items():
        words = frozenset(read_word_list(overrides.get(slot) or data_path(fname)))
        if not words:
            raise ValueError(f"slot lexicon {slot!r} is empty")
        out[slot] = words
    return out


@dataclass(frozen=True)
class Slot:
    tag: Tag
    words: frozenset[str] | None = None
    marker: Marker | None = None
    negation: bool = False  # an optional "not" position

    def accepts(self, tok: TagToken) -> bool:
        if self.negation:
            return tok.tag is Tag.OTHER and tok.word in ("not", "never")
        if tok.tag is not self.tag:
            return False
        if self.marker is not None and tok.marker is not self.marker:
            return False
        if self.words is not None:
            return tok.word in self.words or any(p in self.words for p in tok.parts)
        return True

    def __str__(self) -> str:
        if self.negation:
            return "[not]"
        inner = self.marker.value if self.marker else "/".join(sorted(self.words)) if self.words else ""
        return f"{self.tag.value}({inner})" if inner else self.tag.value


@dataclass(frozen=True)
class PosPattern:
    id: int
    sequence: tuple[Slot, ...]
    description: str

    def match_at(self, tokens: Sequence[TagToken], start: int) -> bool:
        def go(si: int, ti: int) -> bool:
            if si == len(self.sequence):
                return True
            slot = self.sequence[si]
            if slot.negation and go(si + 1, ti):
                return True
            return ti < len(tokens) and slot.accepts(tokens[ti]) and go(si + 1, ti + 1)

        return go(0, start)

    def matches(self, tokens: Sequence[TagToken]) -> bool:
        return any(self.match_at(tokens, i) for i in range(len(tokens)))

    def __str__(self) -> str:
        return " ".join(map(str, self.sequence))


def build_patterns(slots: Mapping[str, frozenset[str]] | None = None) -> tuple[PosPattern, ...]:
    s = slots or load_slot_lexicons()
    nn, neg = Slot(Tag.NN), Slot(Tag.OTHER, negation=True)
    be = Slot(Tag.VB, frozenset({"be"}))
    return (
        PosPattern(1, (nn, Slot(Tag.MD, s["modal"]), neg, Slot(Tag.VB, s["aux"])), "NN MD [not] VB"),
        PosPattern(2, (nn, Slot(Tag.VB, s["accept"]), nn), "NN VB NN"),
        PosPattern(3, (Slot(Tag.JJ, s["validity"]), nn, be), "JJ NN VB"),
        PosPattern(4, (nn, be, neg, Slot(Tag.JJ, s["validity"])), "NN VB [not] JJ"),
        PosPattern(
            5,
            (
                Slot(Tag.NN, marker=Marker.ERROR_STATUS),
                Slot(Tag.NN, marker=Marker.CONFIG),
                Slot(Tag.VB, s["aux"]),
                Slot(Tag.JJ, s["comparative"]),
            ),
            "NN(ERROR_STATUS) NN(CONFIG) VB JJ",
        ),
    )


def _collapse_option(tokens: list[TagToken], option: ConfigOption) -> list[TagToken]:
    """Replace token spans spelling the option's name with one CONFIG noun.

    Only tokens that survive normalization take part, so the result does not
    change when the already-normalized sequence is fed back in.
    """
    keep = [i for i, t in enumerate(tokens) if t.tag not in (Tag.DT, Tag.SYM, Tag.PUNCT)]
    text, starts, ends = "", [], []
    for i in keep:
        if text:
            text += " "
        starts.append(len(text))
        text += tokens[i].word
        ends.append(len(text))
    end_index = {e: k for k, e in enumerate(ends)}
    replace: dict[int, tuple[int, str]] = {}  # first token -> (last token, matched text)
    k = 0
    while k < len(keep):
        m = option.name_regex.match(text, starts[k])
        if m is not None and m.end() in end_index and end_index[m.end()] >= k:
            last = end_index[m.end()]
            replace[keep[k]] = (keep[last], m.group(0).lower())
            k = last + 1
        else:
            k += 1
    if not replace:
        return tokens
    out, i = [], 0
    while i < len(tokens):
        if i in replace:
            last, word = replace[i]
            out.append(TagToken(Tag.NN, word, Marker.CONFIG))
            i = last + 1
        else:
            out.append(tokens[i])
            i += 1
    return out


def _merge(tokens: list[TagToken]) -> list[TagToken]:
    out: list[TagToken] = []
    for tok in tokens:
        prev = out[-1] if out else None
        if (
            prev is not None
            and tok.tag is prev.tag
            and tok.tag in (Tag.NN, Tag.JJ)
            and tok.marker not in _BARRIERS
            and prev.marker not in _BARRIERS
        ):
            out[-1] = TagToken(tok.tag, f"{prev.word} {tok.word}")
        else:
            out.append(tok)
    return out


def normalize(
    tokens: Sequence[TagToken], option: ConfigOption | None = None, errors: ErrorLexicon | None = None
) -> list[TagToken]:
    """Normalize a tag sequence for pattern matching (idempotent)."""
    errors = errors or default_error_lexicon()
    toks = list(tokens)
    if option is not None:
        toks = _collapse_option(toks, option)
    toks = [
        TagToken(Tag.NN, t.word, Marker.ERROR_STATUS)
        if t.tag is Tag.NN and t.marker is None and any(p in errors for p in t.parts)
        else t
        for t in toks
    ]
    kept: list[TagToken] = []
    for i, t in enumerate(toks):
        if t.tag in (Tag.DT, Tag.SYM):
            continue
        if t.tag is Tag.PUNCT:
            later = any(u.tag not in (Tag.DT, Tag.SYM, Tag.PUNCT) for u in toks[i + 1 :])
            if t.word not in _SENTENCE_BREAKS or not later or not kept or kept[-1].tag is Tag.PUNCT:
                continue
        kept.append(TagToken(Tag.NN, t.word) if t.tag is Tag.CD else t)
    return _merge(kept)


def match_patterns(tokens: Sequence[TagToken], patterns: Sequence[PosPattern] | None = None) -> int | None:
    for p in patterns or default_patterns():
        if p.matches(tokens):
            return p.id
    return None


_DEFAULTS: dict[str, object] = {}


def default_error_lexicon() -> ErrorLexicon:
    if "errors" not in _DEFAULTS:
        _DEFAULTS["errors"] = ErrorLexicon.load()
    return _DEFAULTS["errors"]  # type: ignore[return-value]


def default_patterns() -> tuple[PosPattern, ...]:
    if "patterns" not in _DEFAULTS:
        _DEFAULTS["patterns"] = build_patterns()
    return _DEFAULTS["patterns"]  # type: ignore[return-value]


class Classifier:
    """Tagging, normalization and pattern matching with fixed lexicons."""

    def __init__(
        self,
        errors: ErrorLexicon | None = None,
        patterns: Sequence[PosPattern] | None = None,
        lexicon: Lexicon | None = None,
    ):
        self.errors = errors or default_error_lexicon()
        self.patterns = tuple(patterns or default_patterns())
        self.lexicon = lexicon or Lexicon.default()

    def tokens(self, text: str, option: ConfigOption | None = None) -> list[TagToken]:
        return normalize(pos_tag(text, self.lexicon), option, self.errors)

    def classify(self, text: str, option: ConfigOption | None = None) -> int | None:
        if not text.strip():
            return None
        return match_patterns(self.tokens(text, option), self.patterns)


def render(tokens: Sequence[TagToken]) -> str:
    """Readable form, e.g. ``NN(format string) MD(must) VB(be)``."""
    return re.sub(r"\s+", " ", " ".join(map(str, tokens))).strip()
