"""A small deterministic part-of-speech tagger for log messages.

The tagset is deliberately coarse: just the tags the constraint patterns
look at. Closed-class words come from fixed lists, verbs and adjectives
from bundled lexicons plus suffix rules, and everything else is a noun.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .corpus import VARIABLE


class Tag(str, enum.Enum):
    NN = "NN"
    VB = "VB"
    MD = "MD"
    JJ = "JJ"
    CC = "CC"
    IN = "IN"
    CD = "CD"
    DT = "DT"
    SYM = "SYM"
    PUNCT = "PUNCT"
    OTHER = "OTHER"


class Marker(str, enum.Enum):
    CONFIG = "CONFIG"
    ERROR_STATUS = "ERROR_STATUS"
    VARIABLE = "VARIABLE"


@dataclass(frozen=True)
class TagToken:
    tag: Tag
    word: str
    marker: Marker | None = None

    @property
    def parts(self) -> tuple[str, ...]:
        """Words of a merged token (a single word otherwise)."""
        return tuple(self.word.split(" ")) if " " in self.word and self.tag is not Tag.MD else (self.word,)

    def __str__(self) -> str:
        inner = self.marker.value if self.marker is not None else self.word
        return f"{self.tag.value}({inner})"


def read_word_list(path: str | Path) -> list[str]:
    """UTF-8 list, one entry per line, '#' starts a comment."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            out.append(" ".join(line.split()))
    return out


def data_path(name: str) -> Path:
    return Path(str(resources.files("conflog") / "data" / name))


MODALS = {"must", "should", "shall", "may", "might", "can", "could", "will", "would", "need", "ought"}
DETERMINERS = {
    "the", "a", "an", "this", "that", "these", "those", "each", "every", "any", "some",
    "no", "all", "both", "either", "neither", "another",
}  # fmt: skip
CONJUNCTIONS = {"and", "or", "but", "nor"}
PREPOSITIONS = {
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "than", "between",
    "within", "without", "about", "as", "over", "under", "after", "before", "if", "when",
    "while", "because", "since", "unless", "until", "per", "via", "through", "whether", "where",
}  # fmt: skip
NEGATIONS = {"not", "never"}
ADVERBS = {
    "also", "only", "very", "too", "just", "already", "still", "yet", "again", "always",
    "often", "now", "then", "here", "there", "else", "instead", "anymore", "ever", "so",
}  # fmt: skip
NUMBER_WORDS = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "hundred", "thousand", "million",
}  # fmt: skip
_LY_NOUNS = {"family", "assembly", "supply", "reply", "apply", "anomaly", "only", "poly", "italy", "rely"}
_SUFFIX_NOUNS = {
    "directive", "archive", "executive", "objective", "alternative", "drive", "native",
    "topic", "logic", "traffic", "music", "magic", "table", "variable", "cable", "stable",
    "arithmetic", "heuristic", "metric", "statistic", "semantic",
}  # fmt: skip
_ADJ_SUFFIXES = ("able", "ible", "ous", "ive", "ful", "ic")

_IRREGULAR = {
    "be": ("am", "is", "are", "was", "were", "been", "being"),
    "have": ("has", "had", "having"),
    "do": ("does", "did", "done", "doing"),
    "get": ("got", "gotten"),
    "take": ("took", "taken"),
    "give": ("gave", "given"),
    "make": ("made",),
    "find": ("found",),
    "begin": ("began", "begun"),
    "run": ("ran",),
    "write": ("wrote", "written"),
    "choose": ("chose", "chosen"),
    "go": ("went", "gone", "goes"),
    "know": ("knew", "known"),
    "become": ("became",),
    "send": ("sent",),
    "build": ("built",),
    "keep": ("kept",),
    "leave": ("left",),
    "hold": ("held",),
    "bind": ("bound",),
    "mean": ("meant",),
    "show": ("shown",),
    "see": ("saw", "seen"),
    "forbid": ("forbade", "forbidden"),
    "set": ("set",),
    "read": ("read",),
}
_DOUBLING = {"stop", "permit", "refer", "map", "forbid", "set", "run", "begin", "log", "plan", "drop", "submit", "omit"}


def _inflections(base: str) -> dict[str, str]:
    """Regular inflected forms of a verb, mapped to the kind of form."""
    forms = {base: "base"}
    if re.search(r"(s|x|z|ch|sh|o)$", base):
        forms[base + "es"] = "s"
    elif re.search(r"[^aeiou]y$", base):
        forms[base[:-1] + "ies"] = "s"
    else:
        forms[base + "s"] = "s"
    stem_ = base + base[-1] if base in _DOUBLING else base
    if base.endswith("e"):
        forms[base + "d"] = "ed"
        forms[(base[:-2] + "y" if base.endswith("ie") else base[:-1]) + "ing"] = "ing"
    elif re.search(r"[^aeiou]y$", base):
        forms[base[:-1] + "ied"] = "ed"
        forms[base + "ing"] = "ing"
    else:
        forms[stem_ + "ed"] = "ed"
        forms[stem_ + "ing"] = "ing"
    for irregular in _IRREGULAR.get(base, ()):
        forms[irregular] = "ing" if irregular.endswith("ing") else ("s" if irregular.endswith("s") else "ed")
    return forms


@dataclass(frozen=True)
class VerbForm:
    lemma: str
    form: str  # base | s | ed | ing
    nounish: bool


class Lexicon:
    """Open-class word lists used by the tagger."""

    def __init__(self, verbs: list[str], adjectives: list[str]):
        self.verbs: dict[str, VerbForm] = {}
        for entry in verbs:
            nounish = entry.endswith("*")
            base = entry.rstrip("*")
            for word, form in _inflections(base).items():
                self.verbs.setdefault(word, VerbForm(base, form, nounish))
        self.adjectives = frozenset(adjectives)

    @classmethod
    @lru_cache(maxsize=1)
    def default(cls) -> Lexicon:
        return cls(read_word_list(data_path("verbs.txt")), read_word_list(data_path("adjectives.txt")))


QUOTES = "'\"`‘’“”"
_TOKEN_RE = re.compile(
    r"(?P<var>" + re.escape(VARIABLE) + r")"
    r"|(?P<neg>[A-Za-z]+)n't\b"
    r"|(?P<num>[-+]?(?:0[xX][0-9A-Fa-f]+|\d+(?:\.\d+)?)(?:[kKmMgG%]|ms|s)?(?![A-Za-z0-9_]))"
    r"|(?P<word>[A-Za-z0-9]+(?:[._\-/][A-Za-z0-9]+)*(?:'s\b)?)"
    r"|(?P<punct>[,.;:!?])"
    r"|(?P<quote>[" + QUOTES + r"])"
    r"|(?P<sym>\S)"
)
_CONTRACTIONS = {"ca": "can", "wo": "will", "sha": "shall"}


def _raw_tokens(text: str) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "neg":
            base = value.lower()
            out.append(("word", _CONTRACTIONS.get(base, base)))
            out.append(("word", "not"))
        elif kind == "word" and value.lower() == "cannot":
            out += [("word", "can"), ("word", "not")]
        else:
            out.append((kind, value))
    return out


def _quoted_indices(raw: list[tuple[str, str]]) -> set[int]:
    """Indices of word tokens between a pair of quote characters."""
    inside: set[int] = set()
    open_at = None
    for i, (kind, _) in enumerate(raw):
        if kind != "quote":
            continue
        if open_at is None:
            open_at = i
        else:
            inside.update(j for j in range(open_at + 1, i) if raw[j][0] in ("word", "num"))
            open_at = None
    return inside


def singular(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ses") or word.endswith("xes") or word.endswith("ches") or word.endswith("shes"):
        return word[:-2]
    if word.endswith("s") and not word.endswith("ss") and not word.endswith("us") and len(word) > 3:
        return word[:-1]
    return word


def _adjective_like(word: str, lex: Lexicon) -> bool:
    if word in lex.adjectives:
        return True
    if word in _SUFFIX_NOUNS:
        return False
    if word.startswith("non-") or (word.startswith("non") and word[3:] in lex.adjectives):
        return True
    return len(word) > 4 and word.endswith(_ADJ_SUFFIXES)


def pos_tag(text: str, lexicon: Lexicon | None = None) -> list[TagToken]:
    """Tag *text* with the coarse tagset; deterministic for a given lexicon."""
    lex = lexicon or Lexicon.default()
    raw = _raw_tokens(text)
    quoted = _quoted_indices(raw)

    # Merge "have to" and "need to" into a single modal.
    words: list[tuple[str, str, int]] = []  # (kind, lowercase value, raw index)
    i = 0
    while i < len(raw):
        kind, value = raw[i]
        low = value.lower()
        nxt = raw[i + 1][1].lower() if i + 1 < len(raw) else ""
        if kind == "word" and i not in quoted and nxt == "to" and i + 1 not in quoted:
            if low in ("have", "has", "had"):
                words.append(("modal", "have to", i))
                i += 2
                continue
            if low in ("need", "needs", "needed", "ought"):
                words.append(("modal", "ought" if low == "ought" else "need", i))
                i += 2
                continue
        words.append((kind, low, i))
        i += 1

    first = [_first_pass(kind, low, idx in quoted, lex) for kind, low, idx in words]
    tokens: list[TagToken] = []
    for k, (tag, word, marker, verb) in enumerate(first):
        if verb is not None:
            tag, word = _resolve_verb(k, first, verb, words[k][1])
        tokens.append(TagToken(tag, word, marker))
    return tokens


def _first_pass(
    kind: str, low: str, quoted: bool, lex: Lexicon
) -> tuple[Tag, str, Marker | None, VerbForm | None]:
    if kind == "var":
        return Tag.NN, VARIABLE.lower(), Marker.VARIABLE, None
    if kind == "modal":
        return Tag.MD, low, None, None
    if kind == "num":
        return Tag.CD, low, None, None
    if kind == "punct":
        return Tag.PUNCT, low, None, None
    if kind in ("quote", "sym"):
        return Tag.SYM, low, None, None
    if quoted:
        return Tag.NN, low, None, None
    if low in NEGATIONS:
        return Tag.OTHER, low, None, None
    if low in MODALS:
        return Tag.MD, low, None, None
    if low in DETERMINERS:
        return Tag.DT, low, None, None
    if low in CONJUNCTIONS:
        return Tag.CC, low, None, None
    if low in PREPOSITIONS:
        return Tag.IN, low, None, None
    if low in NUMBER_WORDS:
        return Tag.CD, low, None, None
    if low in ADVERBS:
        return Tag.OTHER, low, None, None
    if low in lex.adjectives:
        return Tag.JJ, low, None, None
    verb = lex.verbs.get(low)
    if verb is not None:
        return Tag.VB, verb.lemma, None, verb
    if low.endswith("ly") and len(low) > 4 and low not in _LY_NOUNS:
        return Tag.OTHER, low, None, None
    if _adjective_like(low, lex):
        return Tag.JJ, low, None, None
    return Tag.NN, low, None, None


def _neighbor(first: list, k: int, step: int, skip_other: bool = False):
    j = k + step
    while 0 <= j < len(first):
        if not (skip_other and first[j][0] is Tag.OTHER):
            return first[j]
        j += step
    return None


def _is_noun(entry) -> bool:
    return entry is not None and entry[0] in (Tag.NN, Tag.CD) and entry[3] is None


def _resolve_verb(k: int, first: list, verb: VerbForm, surface: str) -> tuple[Tag, str]:
    """Pick VB/JJ/NN for a word found in the verb lexicon, from its neighbours."""
    prev = _neighbor(first, k, -1)
    prev_core = _neighbor(first, k, -1, skip_other=True)
    nxt = _neighbor(first, k, 1)
    if verb.form == "ed":
        sentence_start = prev is None or prev[0] is Tag.PUNCT and prev[1] in ".;:!?"
        if (sentence_start or prev[0] is Tag.DT) and _is_noun(nxt):
            return Tag.JJ, surface
        return Tag.VB, verb.lemma
    if verb.form == "ing":
        if prev_core is not None and prev_core[0] is Tag.VB and prev_core[1] == "be":
            return Tag.VB, verb.lemma
        return Tag.NN, surface
    if not verb.nounish:
        return Tag.VB, verb.lemma
    if verb.form == "base":
        if prev_core is not None and (
            prev_core[0] is Tag.MD or prev_core[1] == "to" or (prev_core[0] is Tag.VB and prev_core[1] == "do")
        ):
            return Tag.VB, verb.lemma
        return Tag.NN, surface
    # third person singular: a verb after a noun subject, unless a verb follows
    if prev is not None and prev[0] is Tag.NN and not (nxt is not None and nxt[0] in (Tag.VB, Tag.MD)):
        return Tag.VB, verb.lemma
    return Tag.NN, surface
