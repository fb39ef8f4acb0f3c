"""Variable and function references inside C expressions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .syntax import NodeKind, SyntaxNode, declarator_name

_MACRO_RE = re.compile(r"[A-Z][A-Z0-9_]*")
_TYPE_NODES = {
    "type_identifier", "primitive_type", "type_descriptor", "sized_type_specifier",
    "struct_specifier", "union_specifier", "enum_specifier", "type_qualifier",
    "storage_class_specifier", "abstract_pointer_declarator", "template_argument_list",
}  # fmt: skip
_LITERAL_NODES = {
    "string_literal", "raw_string_literal", "concatenated_string", "char_literal",
    "number_literal", "true", "false", "null", "nullptr",
}  # fmt: skip


def is_macro_name(name: str) -> bool:
    return bool(_MACRO_RE.fullmatch(name))


@dataclass(frozen=True)
class VarRef:
    """A variable spelled as a base name plus an optional member path."""

    base: str
    members: tuple[str, ...] = ()
    base_type: str | None = None
    spelling: str = ""

    def __post_init__(self) -> None:
        if not self.spelling:
            object.__setattr__(self, "spelling", ".".join((self.base, *self.members)))

    @property
    def leaf(self) -> str:
        return self.members[-1] if self.members else self.base

    @property
    def path(self) -> tuple[str, ...]:
        return (self.base, *self.members)

    def same_variable(self, other: VarRef) -> bool:
        """Member accesses compare by base type when both types are known."""
        if self.members != other.members:
            return False
        if self.members and self.base_type and other.base_type:
            return self.base_type == other.base_type
        return self.base == other.base

    def depends_on_def(self, target: VarRef) -> bool:
        """A write to *target* can change the value read through *self*."""
        if len(target.members) > len(self.members):
            return False
        return target.path == self.path[: len(target.path)]


@dataclass(frozen=True)
class Ref:
    kind: str  # "var" | "func"
    name: str
    node: SyntaxNode
    var: VarRef | None = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.kind, self.name)


class Scope:
    """Declared types of names visible in a function (flat, no block scoping)."""

    def __init__(self, types: dict[str, str | None] | None = None, parent: Scope | None = None):
        self.types = dict(types or {})
        self.parent = parent

    def type_of(self, name: str) -> str | None:
        if name in self.types:
            return self.types[name]
        return self.parent.type_of(name) if self.parent else None


def declared_type(decl: SyntaxNode) -> str | None:
    t = decl.child("type")
    if t is None:
        return None
    if t.type in ("struct_specifier", "union_specifier", "enum_specifier", "class_specifier"):
        name = t.child("name")
        return name.text if name is not None else None
    return re.sub(r"\s+", " ", t.text)


def function_scope(fn: SyntaxNode, parent: Scope | None = None) -> Scope:
    types: dict[str, str | None] = {}
    for node in fn.walk():
        if node.type in ("parameter_declaration", "declaration"):
            t = declared_type(node)
            for d in node.children:
                if d.field_name != "declarator":
                    continue
                target = d.child("declarator") if d.type == "init_declarator" else d
                name = declarator_name(target)
                if name:
                    types.setdefault(name, t)
    return Scope(types, parent)


def _member_chain(node: SyntaxNode) -> tuple[SyntaxNode, list[str], list[SyntaxNode]] | None:
    """Unwind ``a->b.c[i]`` into (base node, members, index expressions)."""
    members: list[str] = []
    indices: list[SyntaxNode] = []
    cur = node
    while True:
        if cur.type == "field_expression":
            f = cur.child("field")
            if f is None:
                return None
            members.append(f.text)
            cur = cur.child("argument")
        elif cur.type == "subscript_expression":
            idx = cur.child("index") or cur.child("indices")
            if idx is not None:
                indices.append(idx)
            cur = cur.child("argument")
        elif cur.type == "parenthesized_expression" and len(cur.children) == 1:
            cur = cur.children[0]
        elif cur.type == "pointer_expression" and cur.child("argument") is not None:
            cur = cur.child("argument")
        else:
            break
        if cur is None:
            return None
    members.reverse()
    return cur, members, indices


def var_ref(node: SyntaxNode, scope: Scope | None = None) -> VarRef | None:
    """VarRef for an lvalue-like expression, or None if it is not one."""
    chain = _member_chain(node)
    if chain is None:
        return None
    base, members, _ = chain
    if base.type not in ("identifier", "qualified_identifier", "this"):
        return None
    name = base.text
    spelling = re.sub(r"\s+", "", node.text) if members else name
    spelling = re.sub(r"\[[^\]]*\]", "", spelling)
    btype = scope.type_of(name) if (scope is not None and members) else None
    return VarRef(name, tuple(members), btype, spelling)


def references(node: SyntaxNode, scope: Scope | None = None) -> list[Ref]:
    """Variables read and functions called in *node*, in source order."""
    return list(_refs(node, scope))


def _refs(node: SyntaxNode, scope: Scope | None) -> Iterator[Ref]:
    t = node.type
    if t in _LITERAL_NODES or t in _TYPE_NODES or node.kind is NodeKind.FUNCTION_DEF:
        return
    if t.endswith("_declarator") and t != "init_declarator":
        return
    if t in ("declaration", "init_declarator"):
        for c in node.children:
            if t == "declaration" and c.type == "init_declarator":
                yield from _refs(c, scope)
            elif t == "init_declarator" and c.field_name == "value":
                yield from _refs(c, scope)
        return
    if t == "call_expression":
        fn = node.child("function")
        if fn is not None:
            if fn.type in ("identifier", "qualified_identifier"):
                yield Ref("func", fn.text, fn)
            elif fn.type == "field_expression":
                yield from _refs(fn, scope)
            else:
                yield from _refs(fn, scope)
        args = node.child("arguments")
        if args is not None:
            for a in args.children:
                yield from _refs(a, scope)
        return
    if t in ("field_expression", "subscript_expression"):
        chain = _member_chain(node)
        if chain is not None:
            base, members, indices = chain
            ref = var_ref(node, scope) if members else None
            if ref is not None:
                yield Ref("var", ref.spelling, node, ref)
            else:
                yield from _refs(base, scope)
            for idx in reversed(indices):
                yield from _refs(idx, scope)
            return
    if t in ("identifier", "qualified_identifier"):
        if node.field_name in ("field", "label", "type"):
            return
        name = node.text
        if not is_macro_name(name):
            yield Ref("var", name, node, VarRef(name))
        return
    if t in ("sizeof_expression", "alignof_expression", "offsetof_expression"):
        value = node.child("value")
        if value is not None:
            yield from _refs(value, scope)
        return
    if t == "cast_expression":
        value = node.child("value")
        if value is not None:
            yield from _refs(value, scope)
        return
    for c in node.children:
        yield from _refs(c, scope)


def assignment_targets(node: SyntaxNode, scope: Scope | None = None) -> list[tuple[VarRef, SyntaxNode]]:
    """Variables written by assignments, updates and initialised declarations."""
    out: list[tuple[VarRef, SyntaxNode]] = []
    for n in node.walk():
        if n.kind is NodeKind.FUNCTION_DEF and n is not node:
            continue
        if n.type == "assignment_expression":
            left = n.child("left")
            ref = var_ref(left, scope) if left is not None else None
            if ref is not None:
                out.append((ref, n))
        elif n.type == "update_expression":
            arg = n.child("argument")
            ref = var_ref(arg, scope) if arg is not None else None
            if ref is not None:
                out.append((ref, n))
        elif n.type == "init_declarator":
            name = declarator_name(n.child("declarator"))
            if name:
                out.append((VarRef(name), n))
    return out
