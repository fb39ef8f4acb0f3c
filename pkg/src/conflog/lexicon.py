"""Configuration option names: tokenization, name regexes, direct matching."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable

import snowballstemmer

from .corpus import MessageCandidate


class LexiconError(ValueError):
    pass


_stemmer = snowballstemmer.stemmer("english")

_DELIM_RE = re.compile(r"[^A-Za-z0-9]+")
_CAMEL_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+")
BASE_DELIMITERS = " ._-"

MODIFIERS = ("configuration", "config", "option", "directive", "parameter")
_MODIFIER_RE = re.compile(r"\b(?:%s)s?\b" % "|".join(MODIFIERS), re.IGNORECASE)
QUOTES = "'\"`‘’“”"


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    return _stemmer.stemWord(word.lower())


_CHUNK_RE = re.compile(r"([A-Za-z0-9]+)|[^A-Za-z0-9]+")


def split_name(name: str) -> list[tuple[str, str | None]]:
    """Raw name pieces, each paired with the delimiter run that preceded it.

    The delimiter is ``None`` for the first piece and ``""`` for pieces split
    off a camelCase boundary.
    """
    pieces: list[tuple[str, str | None]] = []
    pending = ""
    for m in _CHUNK_RE.finditer(name):
        if m.group(1) is None:
            pending += m.group(0)
            continue
        for i, cm in enumerate(_CAMEL_RE.finditer(m.group(1))):
            sep = None if not pieces else (pending if i == 0 else "")
            pieces.append((cm.group(0), sep))
        pending = ""
    return pieces


def tokenize_option(name: str) -> list[str]:
    """Lowercase stemmed words of an option or variable name."""
    words = [stem(w) for w, _ in split_name(name)]
    if not words:
        raise LexiconError(f"option name {name!r} has no word tokens")
    return words


def tokenize_identifier(name: str) -> list[str]:
    """Like :func:`tokenize_option` but returns [] instead of raising."""
    return [stem(w) for w, _ in split_name(name)]


def _delimiter_class(name: str) -> str:
    extra = sorted(set("".join(_DELIM_RE.findall(name))) - set(BASE_DELIMITERS))
    return "[" + re.escape(BASE_DELIMITERS + "".join(extra)) + "]"


def build_name_regex(name: str) -> re.Pattern[str]:
    """Case-insensitive pattern matching *name* with any common delimiter.

    Words separated by a delimiter in the raw name need one delimiter between
    them; words split at a camelCase boundary take an optional one.
    """
    pieces = split_name(name)
    if not pieces:
        raise LexiconError(f"option name {name!r} has no word tokens")
    delim = _delimiter_class(name)
    out = []
    for word, sep in pieces:
        if sep is None:
            pass
        elif sep == "":
            out.append(delim + "?")
        elif len(sep) == 1:
            out.append(delim)
        else:
            out.append(delim + "{%d}" % len(sep))
        out.append(re.escape(word))
    return re.compile(r"(?<![A-Za-z0-9_])" + "".join(out) + r"(?![A-Za-z0-9_])", re.IGNORECASE)


@dataclass(frozen=True)
class ConfigOption:
    raw_name: str
    words: tuple[str, ...]
    name_regex: re.Pattern[str] = field(compare=False, repr=False)

    @classmethod
    def from_name(cls, name: str) -> ConfigOption:
        name = name.strip()
        if not name:
            raise LexiconError("empty option name")
        return cls(name, tuple(tokenize_option(name)), build_name_regex(name))

    @property
    def single_word(self) -> bool:
        return len(self.words) == 1

    @property
    def word_set(self) -> frozenset[str]:
        return frozenset(self.words)


def _is_quoted(text: str, m: re.Match[str]) -> bool:
    before = text[m.start() - 1] if m.start() > 0 else ""
    after = text[m.end()] if m.end() < len(text) else ""
    return bool(before) and bool(after) and before in QUOTES and after in QUOTES


def match_direct(message: MessageCandidate | str, option: ConfigOption) -> bool:
    """Does the message name the option?

    A single-word name must additionally be quoted in the message or appear
    alongside an identity modifier such as "directive" or "option".
    """
    text = message.text if isinstance(message, MessageCandidate) else message
    matches = list(option.name_regex.finditer(text))
    if not matches:
        return False
    if not option.single_word:
        return True
    if any(_is_quoted(text, m) for m in matches):
        return True
    return _MODIFIER_RE.search(text) is not None


@dataclass
class OptionLexicon:
    options: list[ConfigOption]
    word_document_frequency: Counter[str] = field(default_factory=Counter)

    def __post_init__(self) -> None:
        self.word_document_frequency = self.document_frequencies(self.options)
        self._by_name = {o.raw_name.casefold(): o for o in self.options}

    @staticmethod
    def document_frequencies(options: Iterable[ConfigOption]) -> Counter[str]:
        df: Counter[str] = Counter()
        for o in options:
            df.update(o.word_set)
        return df

    @classmethod
    def from_names(cls, names: Iterable[str]) -> OptionLexicon:
        seen: dict[str, ConfigOption] = {}
        for n in names:
            opt = ConfigOption.from_name(n)
            seen.setdefault(opt.raw_name, opt)
        return cls(list(seen.values()))

    def __len__(self) -> int:
        return len(self.options)

    def __iter__(self):
        return iter(self.options)

    def get(self, name: str) -> ConfigOption | None:
        return self._by_name.get(name.casefold())

    def lookup_literal(self, value: str | None) -> ConfigOption | None:
        """Option whose name is exactly the given string constant."""
        if not value:
            return None
        return self._by_name.get(value.strip().casefold())


def read_name_list(path: str | Path) -> list[str]:
    """One name per line; '#' comments; a tab-separated tail is ignored."""
    names = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("\t", 1)[0].strip()
        if line and not line.startswith("#"):
            names.append(line)
    return names


def load_lexicon(path: str | Path) -> OptionLexicon:
    return OptionLexicon.from_names(read_name_list(path))
