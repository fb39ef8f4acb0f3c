"""Corpus ingestion and candidate log-message harvesting.

Every string constant in the sources is a candidate log message. Literals that
are spliced together (adjacent literals, ``apr_pstrcat``-style concatenation
calls, ``+``/``<<`` chains) are merged into one message where the non-literal
operands become the ``_VARIABLE_`` label.
"""

from __future__ import annotations

import enum
import fnmatch
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .syntax import (
    NodeKind,
    SourceLocation,
    SyntaxNode,
    callee_name,
    declarator_name,
    function_name,
    is_function_declarator,
    parse_source,
)

log = logging.getLogger(__name__)

VARIABLE = "_VARIABLE_"
DEFAULT_GLOBS = ("*.c", "*.h", "*.cc", "*.cpp")
DEFAULT_MIN_WORDS = 2
# share of a file's non-blank bytes inside ERROR regions beyond which the file
# counts as unparseable rather than degraded
MAX_ERROR_SHARE = 0.5


class CorpusError(Exception):
    pass


class MessageStyle(str, enum.Enum):
    IN_LOG_STMT = "InLogStmt"
    IN_RETURN_STMT = "InReturnStmt"
    IN_ASSIGN_STMT = "InAssignStmt"
    IN_STRUCTURE = "InStructure"


@dataclass
class TranslationUnit:
    path: str
    root: SyntaxNode
    error_regions: int = 0
    functions: set[str] = field(default_factory=set)
    global_vars: dict[str, str | None] = field(default_factory=dict)


@dataclass(frozen=True)
class ParseFailure:
    path: str
    reason: str


@dataclass
class SourceCorpus:
    root_dir: str
    units: list[TranslationUnit] = field(default_factory=list)
    errors: list[ParseFailure] = field(default_factory=list)

    @property
    def files_seen(self) -> int:
        return len(self.units) + len(self.errors)

    @property
    def functions(self) -> set[str]:
        names: set[str] = set()
        for unit in self.units:
            names |= unit.functions
        return names

    @property
    def global_vars(self) -> set[str]:
        names: set[str] = set()
        for unit in self.units:
            names |= set(unit.global_vars)
        return names

    def unit_for(self, node: SyntaxNode) -> TranslationUnit | None:
        for unit in self.units:
            if unit.path == node.location.file:
                return unit
        return None


@dataclass(eq=False)
class MessageCandidate:
    text: str
    location: SourceLocation
    style: MessageStyle
    enclosing_function: str | None
    origin_node: SyntaxNode = field(repr=False)
    literals: tuple[SyntaxNode, ...] = field(default=(), repr=False)

    @property
    def sort_key(self) -> tuple[str, int, int]:
        return (self.location.file, self.location.line, self.location.column)


def _type_name(decl: SyntaxNode) -> str | None:
    t = decl.child("type")
    if t is None:
        return None
    if t.type in ("struct_specifier", "union_specifier", "enum_specifier"):
        name = t.child("name")
        return name.text if name is not None else None
    return t.text


def _index_unit(unit: TranslationUnit) -> None:
    for top in unit.root.children:
        if top.kind is NodeKind.FUNCTION_DEF:
            name = function_name(top)
            if name:
                unit.functions.add(name)
        elif top.type == "declaration":
            tname = _type_name(top)
            for d in top.children:
                if d.field_name != "declarator":
                    continue
                target = d.child("declarator") if d.type == "init_declarator" else d
                name = declarator_name(target)
                if not name:
                    continue
                if is_function_declarator(target):
                    unit.functions.add(name)
                else:
                    unit.global_vars[name] = tname


def parse_file(path: Path, rel: str) -> TranslationUnit | ParseFailure:
    try:
        data = path.read_bytes()
    except OSError as exc:
        return ParseFailure(rel, f"unreadable: {exc.strerror or exc}")
    if b"\x00" in data:
        return ParseFailure(rel, "binary content")
    result = parse_source(data, rel)
    meaningful = len(re.sub(rb"\s+", b"", data))
    if meaningful and result.error_bytes > MAX_ERROR_SHARE * meaningful:
        return ParseFailure(
            rel, f"unparseable: {result.error_bytes}/{meaningful} bytes in error regions"
        )
    if result.error_regions:
        log.debug("%s: %d error region(s) skipped", rel, result.error_regions)
    unit = TranslationUnit(rel, result.root, result.error_regions)
    _index_unit(unit)
    return unit


def parse_corpus(root_dir: str | Path, file_globs: Iterable[str] | None = None) -> SourceCorpus:
    """Parse every matching file under *root_dir*, in lexicographic path order."""
    root = Path(root_dir)
    if not root.is_dir():
        raise CorpusError(f"source directory not readable: {root}")
    globs = tuple(file_globs or DEFAULT_GLOBS)
    paths = sorted(
        (p for p in root.rglob("*") if p.is_file() and any(fnmatch.fnmatch(p.name, g) for g in globs)),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    corpus = SourceCorpus(str(root))
    for p in paths:
        rel = p.relative_to(root).as_posix()
        res = parse_file(p, rel)
        if isinstance(res, ParseFailure):
            log.warning("skipping %s (%s)", rel, res.reason)
            corpus.errors.append(res)
        else:
            corpus.units.append(res)
    return corpus


# -- message assembly ---------------------------------------------------------

# %% is consumed by the alternation so it is never read as a specifier; it is
# left verbatim, which keeps normalize_message idempotent.
_FORMAT_RE = re.compile(
    r"%%"
    r"|%(?:\d+\$)?[-+#0']*(?:\*|\d+)?(?:\.(?:\*|\d+))?"
    r"(?:hh|ll|I64|I32|[hlLqjzZt])?(?:[uxX](?=[iDdzLOTM]))?"
    r"[diouxXeEfFgGaAcspnVOTMDz]"
)
_QUOTED_VAR_RE = re.compile(r"[\"'`]\s*" + VARIABLE + r"\s*[\"'`]")
_WS_RE = re.compile(r"\s+")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9'_.\-]*")


def _format_sub(m: re.Match[str]) -> str:
    return m.group(0) if m.group(0) == "%%" else VARIABLE


def has_format_specifier(text: str) -> bool:
    return any(m.group(0) != "%%" for m in _FORMAT_RE.finditer(text))


def normalize_message(text: str) -> str:
    """Replace format specifiers, unwrap quoted variables, collapse blanks."""
    text = _FORMAT_RE.sub(_format_sub, text)
    text = _QUOTED_VAR_RE.sub(VARIABLE, text)
    return _WS_RE.sub(" ", text).strip()


def word_count(text: str) -> int:
    return len(_WORD_RE.findall(text.replace(VARIABLE, " ")))


_CONCAT_CALLEE_RE = re.compile(r"(cat|concat|join)", re.IGNORECASE)
_NULLISH = {"null", "nullptr"}
_CHAIN_OPS = {"+", "<<"}


def _is_nullish(node: SyntaxNode) -> bool:
    return node.type in _NULLISH or node.text in ("NULL", "0", "(char *)NULL", "(void *)0")


def _is_literalish(node: SyntaxNode) -> bool:
    return node.kind is NodeKind.STRING_LITERAL or node.type == "concatenated_string"


def _literal_args(call: SyntaxNode) -> list[SyntaxNode]:
    args = call.child("arguments")
    return [a for a in args.children if _is_literalish(a)] if args is not None else []


def is_concat_call(call: SyntaxNode) -> bool:
    """Calls whose string arguments form one message (``apr_pstrcat`` style)."""
    if not _literal_args(call):
        return False
    return bool(_CONCAT_CALLEE_RE.search(callee_name(call) or ""))


def _splice_range(call: SyntaxNode) -> list[SyntaxNode]:
    args = call.child("arguments")
    items = list(args.children) if args is not None else []
    # argument 0 of strcat-family calls is the pool or destination buffer
    first = min(next(i for i, a in enumerate(items) if _is_literalish(a)), 1)
    last = max(i for i, a in enumerate(items) if not _is_nullish(a))
    return items[first : last + 1]


def _chain_operands(node: SyntaxNode) -> list[SyntaxNode]:
    if node.kind is NodeKind.BINARY_OP and node.operator in _CHAIN_OPS:
        out: list[SyntaxNode] = []
        for c in node.children:
            out.extend(_chain_operands(c))
        return out
    if node.type == "parenthesized_expression" and len(node.children) == 1:
        inner = node.children[0]
        if inner.kind is NodeKind.BINARY_OP and inner.operator in _CHAIN_OPS:
            return _chain_operands(inner)
    return [node]


def _parts_text(node: SyntaxNode) -> str:
    if node.kind is NodeKind.STRING_LITERAL:
        return node.value or ""
    if node.type == "concatenated_string":
        return _join([_parts_text(c) if _is_literalish(c) else None for c in node.children])
    return VARIABLE


def _join(parts: list[str | None]) -> str:
    # None marks a spliced non-literal operand
    out = []
    for p in parts:
        out.append(f" {VARIABLE} " if p is None else p)
    return "".join(out)


def _operands(node: SyntaxNode) -> list[SyntaxNode]:
    if node.kind is NodeKind.CALL_EXPR:
        return _splice_range(node)
    if node.kind is NodeKind.BINARY_OP:
        ops = _chain_operands(node)
        if node.operator == "<<" and ops and not _is_literalish(ops[0]):
            ops = ops[1:]  # the stream object
        return ops
    return [node]


def assemble_message(node: SyntaxNode) -> str:
    """Text of the message rooted at *node* (a literal or a splice expression)."""
    parts: list[str | None] = []
    for op in _operands(node):
        if _is_literalish(op):
            parts.append(_parts_text(op))
        elif _is_nullish(op) and node.kind is NodeKind.CALL_EXPR:
            continue
        else:
            parts.append(None)
    return normalize_message(_join(parts))


def message_root(literal: SyntaxNode) -> SyntaxNode:
    """Outermost splice expression the literal belongs to."""
    node = literal
    if node.parent is not None and node.parent.type == "concatenated_string":
        node = node.parent
    while (
        node.parent is not None
        and node.parent.kind is NodeKind.BINARY_OP
        and node.parent.operator in _CHAIN_OPS
    ):
        node = node.parent
    parent = node.parent
    if parent is not None and parent.type == "argument_list" and parent.parent is not None:
        call = parent.parent
        if call.kind is NodeKind.CALL_EXPR and is_concat_call(call):
            if node in _splice_range(call):
                return call
    return node


# -- style --------------------------------------------------------------------

_LOG_NAME_TOKENS = {
    "error", "err", "warn", "warning", "fatal", "panic", "die", "debug", "notice",
    "emerg", "crit", "alert", "trace", "info", "message", "msg", "report",
    "perror", "syslog", "vsyslog", "printf", "fprintf", "puts", "fputs", "errx", "warnx",
}  # fmt: skip
_STATEMENT_TYPES = {
    "expression_statement", "compound_statement", "declaration", "if_statement",
    "while_statement", "for_statement", "do_statement", "switch_statement",
    "case_statement", "translation_unit", "function_definition", "preproc_if",
    "preproc_ifdef", "preproc_else", "preproc_elif", "field_declaration",
}  # fmt: skip


def looks_like_log_function(name: str) -> bool:
    low = name.lower()
    if "log" in low or low in ("ereport", "elog", "errmsg"):
        return True
    return any(tok in _LOG_NAME_TOKENS for tok in re.split(r"[_:]+", low))


def in_structure(node: SyntaxNode) -> bool:
    seen_init = False
    for a in node.ancestors():
        if a.kind is NodeKind.FUNCTION_DEF:
            return False
        if a.kind is NodeKind.INITIALIZER_LIST:
            seen_init = True
    return seen_init


def classify_style(
    candidate: MessageCandidate | SyntaxNode, log_functions: Iterable[str] | None = None
) -> MessageStyle:
    """Style of a message from its nearest enclosing statement."""
    node = candidate.origin_node if isinstance(candidate, MessageCandidate) else candidate
    if in_structure(node):
        return MessageStyle.IN_STRUCTURE
    names = set(log_functions) if log_functions is not None else None
    for a in node.ancestors():
        if a.kind is NodeKind.CALL_EXPR:
            name = callee_name(a) or ""
            if (names is not None and name in names) or (
                names is None and looks_like_log_function(name)
            ):
                return MessageStyle.IN_LOG_STMT
        elif a.kind is NodeKind.RETURN_STMT:
            return MessageStyle.IN_RETURN_STMT
        elif a.kind is NodeKind.ASSIGN_STMT:
            return MessageStyle.IN_ASSIGN_STMT
        elif a.type in _STATEMENT_TYPES:
            break
    return MessageStyle.IN_LOG_STMT


def enclosing_function(node: SyntaxNode) -> str | None:
    fn = node.enclosing(NodeKind.FUNCTION_DEF)
    return function_name(fn) if fn is not None else None


# -- harvesting ---------------------------------------------------------------

_SKIP_LITERAL_PARENTS = {"preproc_include", "linkage_specification", "asm_statement"}


def string_literals(root: SyntaxNode) -> list[SyntaxNode]:
    return [
        n
        for n in root.walk()
        if n.kind is NodeKind.STRING_LITERAL
        and (n.parent is None or n.parent.type not in _SKIP_LITERAL_PARENTS)
    ]


def harvest_candidates(
    corpus: SourceCorpus,
    min_words: int = DEFAULT_MIN_WORDS,
    log_functions: Iterable[str] | None = None,
) -> list[MessageCandidate]:
    """One candidate per message root, sorted by (file, line, column)."""
    log_fns = list(log_functions) if log_functions is not None else None
    out: list[MessageCandidate] = []
    for unit in corpus.units:
        groups: dict[int, tuple[SyntaxNode, list[SyntaxNode]]] = {}
        for lit in string_literals(unit.root):
            root = message_root(lit)
            groups.setdefault(id(root), (root, []))[1].append(lit)
        for root, lits in groups.values():
            text = assemble_message(root)
            if not text or word_count(text) < min_words:
                continue
            out.append(
                MessageCandidate(
                    text=text,
                    location=lits[0].location,
                    style=classify_style(root, log_fns),
                    enclosing_function=enclosing_function(root),
                    origin_node=root,
                    literals=tuple(lits),
                )
            )
    out.sort(key=lambda c: c.sort_key)
    return out
