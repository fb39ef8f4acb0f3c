"""Uniform syntax-tree layer over tree-sitter C/C++ parse trees.

The rest of the package never touches tree-sitter objects directly; it walks
:class:`SyntaxNode` trees, which carry a coarse :class:`NodeKind`, the raw
grammar type, parent links and source locations.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import tree_sitter
import tree_sitter_c
import tree_sitter_cpp

C_SUFFIXES = {".c", ".h"}
CPP_SUFFIXES = {".cc", ".cpp", ".cxx", ".c++", ".hh", ".hpp", ".hxx", ".inl"}


class NodeKind(str, enum.Enum):
    FUNCTION_DEF = "FunctionDef"
    CALL_EXPR = "CallExpr"
    RETURN_STMT = "ReturnStmt"
    ASSIGN_STMT = "AssignStmt"
    IF_STMT = "IfStmt"
    STRING_LITERAL = "StringLiteral"
    IDENTIFIER = "Identifier"
    MEMBER_ACCESS = "MemberAccess"
    INITIALIZER_LIST = "InitializerList"
    BINARY_OP = "BinaryOp"
    OTHER = "Other"


_KIND_BY_TYPE = {
    "function_definition": NodeKind.FUNCTION_DEF,
    "call_expression": NodeKind.CALL_EXPR,
    "return_statement": NodeKind.RETURN_STMT,
    "assignment_expression": NodeKind.ASSIGN_STMT,
    "init_declarator": NodeKind.ASSIGN_STMT,
    "if_statement": NodeKind.IF_STMT,
    "string_literal": NodeKind.STRING_LITERAL,
    "raw_string_literal": NodeKind.STRING_LITERAL,
    "identifier": NodeKind.IDENTIFIER,
    "field_identifier": NodeKind.IDENTIFIER,
    "qualified_identifier": NodeKind.IDENTIFIER,
    "field_expression": NodeKind.MEMBER_ACCESS,
    "initializer_list": NodeKind.INITIALIZER_LIST,
    "binary_expression": NodeKind.BINARY_OP,
}

# Operator tokens are anonymous in tree-sitter; keep them on the node.
_OPERATOR_TYPES = {
    "binary_expression",
    "assignment_expression",
    "unary_expression",
    "pointer_expression",
    "update_expression",
    "field_expression",
}

_SKIPPED_TYPES = {"comment"}


@dataclass(frozen=True, order=True)
class SourceLocation:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(eq=False)
class SyntaxNode:
    kind: NodeKind
    type: str
    location: SourceLocation
    text: str
    start_byte: int = 0
    end_byte: int = 0
    end_line: int = 0
    field_name: str | None = None
    operator: str | None = None
    value: str | None = None
    children: list[SyntaxNode] = field(default_factory=list)
    parent: SyntaxNode | None = field(default=None, repr=False)

    def __repr__(self) -> str:
        return f"SyntaxNode({self.kind.value}:{self.type} @ {self.location})"

    def add(self, child: SyntaxNode) -> SyntaxNode:
        child.parent = self
        self.children.append(child)
        return child

    def child(self, field_name: str) -> SyntaxNode | None:
        for c in self.children:
            if c.field_name == field_name:
                return c
        return None

    def walk(self) -> Iterator[SyntaxNode]:
        """Pre-order traversal, iterative so deep else-if chains are fine."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def ancestors(self) -> Iterator[SyntaxNode]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def contains(self, other: SyntaxNode) -> bool:
        return other is self or any(a is self for a in other.ancestors())

    def enclosing(self, *kinds: NodeKind) -> SyntaxNode | None:
        for a in self.ancestors():
            if a.kind in kinds:
                return a
        return None


@dataclass
class ParseResult:
    root: SyntaxNode
    error_bytes: int
    error_regions: int
    size: int


@lru_cache(maxsize=None)
def _parser(lang: str) -> tree_sitter.Parser:
    module = tree_sitter_cpp if lang == "cpp" else tree_sitter_c
    return tree_sitter.Parser(tree_sitter.Language(module.language()))


def language_for(path: str) -> str:
    suffix = path[path.rfind(".") :].lower() if "." in path else ""
    return "cpp" if suffix in CPP_SUFFIXES else "c"


_SIMPLE_ESCAPES = {
    "n": "\n",
    "t": "\t",
    "r": "\r",
    "a": "\a",
    "b": "\b",
    "f": "\f",
    "v": "\v",
    "\\": "\\",
    "'": "'",
    '"': '"',
    "?": "?",
    "e": "\x1b",
}
_ESCAPE_RE = re.compile(
    r"\\(?:x([0-9a-fA-F]+)|u([0-9a-fA-F]{4})|U([0-9a-fA-F]{8})|([0-7]{1,3})|(.))",
    re.DOTALL,
)


def unescape_c(body: str) -> str:
    """Decode C escape sequences in the body of a string literal."""

    def repl(m: re.Match[str]) -> str:
        hex_, u4, u8, octal, simple = m.groups()
        if hex_ is not None:
            return chr(int(hex_, 16) & 0x10FFFF)
        if u4 or u8:
            return chr(int(u4 or u8, 16))
        if octal is not None:
            return chr(int(octal, 8))
        return _SIMPLE_ESCAPES.get(simple, simple)

    return _ESCAPE_RE.sub(repl, body)


_RAW_STRING_RE = re.compile(r'^[A-Za-z0-9]*R"([^(]*)\((.*)\)\1"$', re.DOTALL)


def literal_value(text: str) -> str:
    """Unescaped value of a string literal's source text (prefixes allowed)."""
    raw = _RAW_STRING_RE.match(text)
    if raw:
        return raw.group(2)
    start = text.find('"')
    end = text.rfind('"')
    if start < 0 or end <= start:
        return ""
    return unescape_c(text[start + 1 : end])


def parse_source(source: bytes, path: str, lang: str | None = None) -> ParseResult:
    """Parse *source* and convert it to a :class:`SyntaxNode` tree.

    ERROR regions produced by tree-sitter are kept as ``Other`` nodes so the
    salvageable fragments inside them (string literals, calls) still take part
    in harvesting; their extent is reported so callers can judge the file.
    """
    tree = _parser(lang or language_for(path)).parse(source)
    error_bytes = 0
    error_regions = 0

    def convert(ts: tree_sitter.Node, field_name: str | None) -> SyntaxNode:
        text = source[ts.start_byte : ts.end_byte].decode("utf-8", "replace")
        line, col = ts.start_point
        node = SyntaxNode(
            kind=_KIND_BY_TYPE.get(ts.type, NodeKind.OTHER),
            type=ts.type,
            location=SourceLocation(path, line + 1, col + 1),
            text=text,
            start_byte=ts.start_byte,
            end_byte=ts.end_byte,
            end_line=ts.end_point[0] + 1,
            field_name=field_name,
        )
        if node.kind is NodeKind.STRING_LITERAL:
            node.value = literal_value(text)
        if ts.type in _OPERATOR_TYPES:
            op = ts.child_by_field_name("operator")
            if op is not None:
                node.operator = op.type
            elif ts.type == "field_expression" and ts.child_count >= 2:
                node.operator = ts.children[1].type
        return node

    root = convert(tree.root_node, None)
    stack: list[tuple[tree_sitter.Node, SyntaxNode]] = [(tree.root_node, root)]
    while stack:
        ts_node, node = stack.pop()
        if ts_node.type == "ERROR":
            error_regions += 1
            error_bytes += ts_node.end_byte - ts_node.start_byte
        pending = []
        for i, ts_child in enumerate(ts_node.children):
            if ts_child.is_missing:
                error_regions += 1
                continue
            if not ts_child.is_named or ts_child.type in _SKIPPED_TYPES:
                continue
            # string_literal internals (content/escapes) are folded into value
            if node.kind is NodeKind.STRING_LITERAL:
                continue
            child = node.add(convert(ts_child, ts_node.field_name_for_child(i)))
            pending.append((ts_child, child))
        stack.extend(reversed(pending))
    return ParseResult(root, error_bytes, error_regions, len(source))


def callee_name(call: SyntaxNode) -> str | None:
    """Spelling of the function being called, e.g. ``apr_pstrcat``."""
    fn = call.child("function")
    if fn is None:
        return None
    if fn.type in ("identifier", "qualified_identifier", "template_function"):
        return fn.text
    if fn.type == "field_expression":
        member = fn.child("field")
        return member.text if member is not None else None
    if fn.type == "parenthesized_expression" and fn.children:
        inner = fn.children[0]
        if inner.type == "identifier":
            return inner.text
    return None


def function_name(fn: SyntaxNode) -> str | None:
    """Name declared by a function definition node."""
    decl = fn.child("declarator")
    while decl is not None:
        if decl.type == "function_declarator":
            inner = decl.child("declarator")
            if inner is None:
                return None
            if inner.type in ("identifier", "field_identifier", "qualified_identifier"):
                return inner.text
            decl = inner
            continue
        decl = decl.child("declarator")
    return None


def declarator_name(decl: SyntaxNode | None) -> str | None:
    """Innermost identifier of a (possibly pointer/array) declarator."""
    while decl is not None:
        if decl.type in ("identifier", "field_identifier", "qualified_identifier"):
            return decl.text
        nxt = decl.child("declarator")
        if nxt is None:
            named = [c for c in decl.children if c.type in ("identifier", "field_identifier")]
            return named[0].text if named else None
        decl = nxt
    return None


def is_function_declarator(decl: SyntaxNode | None) -> bool:
    while decl is not None:
        if decl.type == "function_declarator":
            return True
        if decl.type == "parenthesized_declarator":
            return False
        decl = decl.child("declarator")
    return False
