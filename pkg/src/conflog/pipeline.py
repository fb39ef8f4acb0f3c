"""End-to-end run: parse, relate, classify, report."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .bindings import collect_bindings
from .classifier import Classifier, ErrorLexicon, build_patterns, load_slot_lexicons
from .config import ToolConfig
from .corpus import MAX_ERROR_SHARE, CorpusError, harvest_candidates, parse_corpus
from .lexicon import LexiconError, load_lexicon
from .relater import PRECEDENCE, EvidenceKind, RelationEvidence, Relater
from .syntax import SourceLocation

log = logging.getLogger(__name__)


class UsageError(ValueError):
    """Bad inputs or parameters (CLI exit status 1)."""


@dataclass(frozen=True)
class ConstraintFinding:
    option: str
    message: str
    pattern_id: int
    evidence: RelationEvidence
    location: SourceLocation

    @property
    def key(self) -> tuple[str, str, SourceLocation]:
        return (self.option, self.message, self.location)

    @property
    def sort_key(self) -> tuple:
        loc = self.location
        return (self.option, loc.file, loc.line, loc.column, self.message)

    def to_dict(self) -> dict[str, Any]:
        ev = self.evidence
        return {
            "option": self.option,
            "message": self.message,
            "pattern": self.pattern_id,
            "evidence": {
                "kind": ev.kind.value,
                "score": round(ev.score, 6),
                "witness": ev.witness,
                "file": ev.location.file,
                "line": ev.location.line,
            },
            "file": self.location.file,
            "line": self.location.line,
        }


def finding_stats(findings: list[ConstraintFinding]) -> dict[str, Any]:
    kinds = sorted(EvidenceKind, key=lambda k: PRECEDENCE[k])
    by_kind = Counter(f.evidence.kind for f in findings)
    by_pattern = Counter(f.pattern_id for f in findings)
    return {
        "findings": len(findings),
        "by_evidence": {k.value: by_kind.get(k, 0) for k in kinds},
        "by_pattern": {str(i): by_pattern.get(i, 0) for i in range(1, 6)},
    }


@dataclass
class Report:
    params: dict[str, Any]
    findings: list[ConstraintFinding] = field(default_factory=list)
    corpus_stats: dict[str, Any] = field(default_factory=dict)
    tool_version: str = __version__

    @property
    def degraded(self) -> bool:
        seen = self.corpus_stats.get("files", 0)
        return seen > 0 and self.corpus_stats.get("unparseable", 0) / seen > MAX_ERROR_SHARE

    @property
    def stats(self) -> dict[str, Any]:
        return {**finding_stats(self.findings), "corpus": dict(self.corpus_stats)}

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.tool_version,
            "params": self.params,
            "findings": [f.to_dict() for f in self.findings],
            "stats": self.stats,
        }


def _check_inputs(src: Path, options_file: Path, config: ToolConfig) -> None:
    if not src.is_dir():
        raise UsageError(f"source directory does not exist: {src}")
    if not options_file.is_file():
        raise UsageError(f"options file does not exist: {options_file}")
    if config.error_lexicon and not Path(config.error_lexicon).is_file():
        raise UsageError(f"error lexicon does not exist: {config.error_lexicon}")
    for slot, path in config.slot_lexicons.items():
        if not Path(path).is_file():
            raise UsageError(f"slot lexicon {slot} does not exist: {path}")


def build_classifier(config: ToolConfig) -> Classifier:
    try:
        errors = ErrorLexicon.load(config.error_lexicon)
        patterns = build_patterns(load_slot_lexicons(config.slot_lexicons))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return Classifier(errors, patterns)


def run(
    src: str | Path,
    options_file: str | Path,
    threshold: float | None = None,
    config: ToolConfig | None = None,
) -> Report:
    """Mine constraint findings from the sources under *src*.

    A finding is a message that is related to an option and matches one of
    the constraint patterns. Findings are unique per (option, message,
    location) and sorted by option, file and line.
    """
    config = config or ToolConfig()
    if threshold is not None:
        if not 0.0 <= threshold <= 1.0:
            raise UsageError(f"threshold must be within [0, 1], got {threshold}")
        config = config.with_(threshold=threshold)
    src, options_file = Path(src), Path(options_file)
    _check_inputs(src, options_file, config)
    try:
        lexicon = load_lexicon(options_file)
    except (LexiconError, UnicodeDecodeError) as exc:
        raise UsageError(f"bad options file {options_file}: {exc}") from exc
    classifier = build_classifier(config)
    try:
        corpus = parse_corpus(src)
    except CorpusError as exc:
        raise UsageError(str(exc)) from exc

    params = {
        "threshold": config.threshold,
        "options_file": options_file.name,
        "options": len(lexicon),
        "min_words": config.min_words,
        "error_lexicon": Path(config.error_lexicon).name if config.error_lexicon else None,
        "getters": list(config.getters),
        "log_functions": list(config.log_functions) if config.log_functions is not None else None,
    }
    candidates = harvest_candidates(corpus, config.min_words, config.log_functions)
    report = Report(params)
    report.corpus_stats = {
        "files": corpus.files_seen,
        "unparseable": len(corpus.errors),
        "candidates": len(candidates),
    }
    if report.degraded:
        log.warning("%d of %d files could not be parsed", len(corpus.errors), corpus.files_seen)
    if not len(lexicon):
        return report

    bindings = collect_bindings(corpus, lexicon, config.getters, config.comparison_functions)
    relater = Relater(corpus, lexicon, bindings, config.threshold)
    findings: dict[tuple, ConstraintFinding] = {}
    related_messages = 0
    for cand in candidates:
        relations = relater.relate(cand)
        if relations:
            related_messages += 1
        for option, evidence in relations:
            pattern = classifier.classify(cand.text, option)
            if pattern is None:
                continue
            f = ConstraintFinding(option.raw_name, cand.text, pattern, evidence, cand.location)
            findings.setdefault(f.key, f)
    report.findings = sorted(findings.values(), key=lambda f: f.sort_key)
    report.corpus_stats["bindings"] = len(bindings)
    report.corpus_stats["related"] = related_messages
    return report
