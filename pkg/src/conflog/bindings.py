"""Map configuration options to the variables and functions that carry them.

Three code idioms tie an option name to program elements:

* structure interface: the name sits in a static table entry next to a
  handler function and/or ``&variable``;
* container interface: ``v = getter("name")``;
* comparison interface: ``if (!strcmp(key, "name")) { v = ...; }``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .corpus import SourceCorpus, TranslationUnit, in_structure, string_literals
from .lexicon import ConfigOption, OptionLexicon
from .names import Scope, VarRef, function_scope, is_macro_name, var_ref
from .syntax import NodeKind, SourceLocation, SyntaxNode, callee_name, declarator_name

log = logging.getLogger(__name__)

DEFAULT_COMPARISON_FUNCTIONS = (
    "strcmp", "strcasecmp", "strncmp", "strncasecmp", "stricmp", "strcmpi",
    "_stricmp", "g_strcmp0", "ap_cstr_casecmp", "apr_strnatcasecmp",
    "ngx_strcmp", "ngx_strcasecmp", "ngx_strncmp", "ngx_strncasecmp",
    "pg_strcasecmp", "pg_strncasecmp", "buffer_is_equal_string",
)  # fmt: skip
MAX_GUARDED_STATEMENTS = 3


class Interface(str, enum.Enum):
    STRUCTURE = "StructureInterface"
    CONTAINER = "ContainerInterface"
    COMPARISON = "ComparisonInterface"


@dataclass(frozen=True)
class Provenance:
    interface: Interface
    location: SourceLocation


@dataclass
class ConfigBinding:
    option: ConfigOption
    variables: dict[str, VarRef] = field(default_factory=dict)
    functions: set[str] = field(default_factory=set)
    provenance: dict[tuple[str, str], Provenance] = field(default_factory=dict)

    def add_variable(self, ref: VarRef, prov: Provenance) -> None:
        if ref.spelling not in self.variables:
            self.variables[ref.spelling] = ref
            self.provenance[("var", ref.spelling)] = prov

    def add_function(self, name: str, prov: Provenance) -> None:
        if name not in self.functions:
            self.functions.add(name)
            self.provenance[("func", name)] = prov

    def merge(self, other: ConfigBinding) -> None:
        for spelling, ref in other.variables.items():
            self.add_variable(ref, other.provenance[("var", spelling)])
        for name in sorted(other.functions, key=lambda n: other.provenance[("func", n)].location):
            self.add_function(name, other.provenance[("func", name)])

    def match_variable(self, ref: VarRef) -> VarRef | None:
        for bound in self.variables.values():
            if bound.same_variable(ref):
                return bound
        return None

    @property
    def is_empty(self) -> bool:
        return not self.variables and not self.functions


# -- minimal common ancestor -----------------------------------------------------


def minimal_common_ancestor(
    target: SyntaxNode, is_other: Callable[[SyntaxNode], bool], top: SyntaxNode | None = None
) -> SyntaxNode:
    """Largest subtree around *target* that holds no other option's literal.

    Climbs from *target* while the parent's subtree stays free of nodes for
    which *is_other* is true, never going above *top*. Each step only scans
    the sibling subtrees not seen before.
    """
    cur = target
    while cur is not top and cur.parent is not None:
        parent = cur.parent
        if is_other(parent):
            break
        if any(is_other(n) for sib in parent.children if sib is not cur for n in sib.walk()):
            break
        cur = parent
    return cur


def structure_entry_root(node: SyntaxNode) -> SyntaxNode | None:
    """Top of the table entry (or whole initializer) that holds *node*.

    For an array of entries (``cmds[] = { AP_INIT_TAKE1(...), ... }``) this
    is the element of the outer initializer; for a single struct it is the
    initializer itself; for a file-scope macro call it is the call.
    """
    outer = None
    child_of_outer = None
    prev = node
    for a in node.ancestors():
        if a.kind is NodeKind.FUNCTION_DEF:
            return None
        if a.kind is NodeKind.INITIALIZER_LIST:
            outer, child_of_outer = a, prev
        prev = a
    if outer is None:
        calls = [a for a in node.ancestors() if a.kind is NodeKind.CALL_EXPR]
        return calls[-1] if calls else None
    decl = outer.parent
    if decl is not None and decl.type == "init_declarator":
        d = decl.child("declarator")
        if d is not None and d.type == "array_declarator":
            return child_of_outer
    return outer


def _in_structure_context(node: SyntaxNode) -> bool:
    if in_structure(node):
        return True
    if node.enclosing(NodeKind.FUNCTION_DEF) is not None:
        return False
    return node.enclosing(NodeKind.CALL_EXPR) is not None


def _structure_elements(
    root: SyntaxNode, corpus_functions: set[str], corpus_vars: set[str], scope: Scope
) -> tuple[list[tuple[VarRef, SyntaxNode]], list[tuple[str, SyntaxNode]]]:
    variables: list[tuple[VarRef, SyntaxNode]] = []
    functions: list[tuple[str, SyntaxNode]] = []
    claimed: set[int] = set()
    for n in root.walk():
        if id(n) in claimed:
            continue
        if n.type in ("offsetof_expression", "sizeof_expression") or (
            n.kind is NodeKind.CALL_EXPR and callee_name(n) == "offsetof"
        ):
            claimed.update(id(x) for x in n.walk())
            continue
        if n.type == "pointer_expression" and n.operator == "&":
            arg = n.child("argument")
            ref = var_ref(arg, scope) if arg is not None else None
            claimed.update(id(x) for x in n.walk())
            if ref is not None and not is_macro_name(ref.base):
                variables.append((ref, n))
            continue
        if n.type == "field_expression":
            ref = var_ref(n, scope)
            claimed.update(id(x) for x in n.walk())
            if ref is not None:
                variables.append((ref, n))
            continue
        if n.type != "identifier" or is_macro_name(n.text):
            continue
        if n.field_name == "function" and n.parent is not None and n.parent.kind is NodeKind.CALL_EXPR:
            continue  # table-building macro such as AP_INIT_TAKE1 or ngx_string
        name = n.text
        if name in corpus_functions:
            functions.append((name, n))
        elif name in corpus_vars:
            variables.append((VarRef(name), n))
        else:
            # a bare lowercase designator in a static initializer is almost
            # always a function pointer whose definition lives elsewhere
            functions.append((name, n))
    return variables, functions


def _global_scope(unit: TranslationUnit) -> Scope:
    return Scope(unit.global_vars)


def collect_structure_bindings(corpus: SourceCorpus, lexicon: OptionLexicon) -> list[ConfigBinding]:
    bindings: list[ConfigBinding] = []
    functions, gvars = corpus.functions, corpus.global_vars
    for unit in corpus.units:
        scope = _global_scope(unit)
        option_lits = []
        for lit in string_literals(unit.root):
            opt = lexicon.lookup_literal(lit.value)
            if opt is not None and _in_structure_context(lit):
                option_lits.append((lit, opt))
        ids = {id(lit) for lit, _ in option_lits}
        for lit, opt in option_lits:
            top = structure_entry_root(lit)
            mca = minimal_common_ancestor(lit, lambda n, me=lit: id(n) in ids and n is not me, top)
            if mca is lit:
                log.info("%s: %r shares every ancestor with another option", lit.location, opt.raw_name)
                continue
            variables, funcs = _structure_elements(mca, functions, gvars, scope)
            b = ConfigBinding(opt)
            for ref, node in variables:
                b.add_variable(ref, Provenance(Interface.STRUCTURE, node.location))
            for name, node in funcs:
                b.add_function(name, Provenance(Interface.STRUCTURE, node.location))
            if not b.is_empty:
                bindings.append(b)
    return bindings


def _option_argument(call: SyntaxNode, lexicon: OptionLexicon) -> ConfigOption | None:
    args = call.child("arguments")
    if args is None:
        return None
    for a in args.children:
        if a.kind is NodeKind.STRING_LITERAL:
            opt = lexicon.lookup_literal(a.value)
            if opt is not None:
                return opt
    return None


def _unwrap_upwards(node: SyntaxNode) -> SyntaxNode:
    while node.parent is not None and node.parent.type in ("parenthesized_expression", "cast_expression"):
        node = node.parent
    return node


def _scope_for(node: SyntaxNode, unit: TranslationUnit, cache: dict[int, Scope]) -> Scope:
    fn = node.enclosing(NodeKind.FUNCTION_DEF)
    if fn is None:
        return _global_scope(unit)
    if id(fn) not in cache:
        cache[id(fn)] = function_scope(fn, _global_scope(unit))
    return cache[id(fn)]


def collect_container_bindings(
    corpus: SourceCorpus, lexicon: OptionLexicon, getter_names: Iterable[str]
) -> list[ConfigBinding]:
    getters = set(getter_names)
    bindings: list[ConfigBinding] = []
    if not getters:
        return bindings
    for unit in corpus.units:
        scopes: dict[int, Scope] = {}
        for call in unit.root.walk():
            if call.kind is not NodeKind.CALL_EXPR or callee_name(call) not in getters:
                continue
            opt = _option_argument(call, lexicon)
            if opt is None:
                continue
            outer = _unwrap_upwards(call)
            parent = outer.parent
            ref = None
            if parent is not None and parent.type == "assignment_expression" and outer.field_name == "right":
                left = parent.child("left")
                ref = var_ref(left, _scope_for(call, unit, scopes)) if left is not None else None
            elif parent is not None and parent.type == "init_declarator" and outer.field_name == "value":
                name = declarator_name(parent.child("declarator"))
                ref = VarRef(name) if name else None
            if ref is None:
                continue
            b = ConfigBinding(opt)
            b.add_variable(ref, Provenance(Interface.CONTAINER, call.location))
            bindings.append(b)
    return bindings


def _compared_option(
    cond: SyntaxNode, lexicon: OptionLexicon, comparators: set[str]
) -> ConfigOption | None:
    for n in cond.walk():
        if n.kind is NodeKind.CALL_EXPR and callee_name(n) in comparators:
            opt = _option_argument(n, lexicon)
            if opt is not None:
                return opt
        elif n.kind is NodeKind.BINARY_OP and n.operator == "==":
            for side in n.children:
                if side.kind is NodeKind.STRING_LITERAL:
                    opt = lexicon.lookup_literal(side.value)
                    if opt is not None:
                        return opt
    return None


def guarded_statements(block: SyntaxNode) -> list[SyntaxNode]:
    if block.type == "compound_statement":
        return list(block.children)
    return [block]


def collect_comparison_bindings(
    corpus: SourceCorpus,
    lexicon: OptionLexicon,
    comparison_functions: Iterable[str] = DEFAULT_COMPARISON_FUNCTIONS,
) -> list[ConfigBinding]:
    comparators = set(comparison_functions)
    bindings: list[ConfigBinding] = []
    for unit in corpus.units:
        scopes: dict[int, Scope] = {}
        for node in unit.root.walk():
            if node.kind is not NodeKind.IF_STMT:
                continue
            cond, block = node.child("condition"), node.child("consequence")
            if cond is None or block is None:
                continue
            opt = _compared_option(cond, lexicon, comparators)
            if opt is None:
                continue
            stmts = guarded_statements(block)
            if len(stmts) > MAX_GUARDED_STATEMENTS:
                continue
            scope = _scope_for(node, unit, scopes)
            b = ConfigBinding(opt)
            for stmt in stmts:
                for n in stmt.walk():
                    if n.type != "assignment_expression":
                        continue
                    left = n.child("left")
                    ref = var_ref(left, scope) if left is not None else None
                    if ref is not None:
                        b.add_variable(ref, Provenance(Interface.COMPARISON, n.location))
            if not b.is_empty:
                bindings.append(b)
    return bindings


def merge_bindings(bindings: Iterable[ConfigBinding]) -> list[ConfigBinding]:
    """One binding per option, sorted by option name; first provenance wins."""
    merged: dict[str, ConfigBinding] = {}

    def first_location(b: ConfigBinding) -> SourceLocation:
        return min(p.location for p in b.provenance.values())

    for b in sorted(bindings, key=lambda b: (b.option.raw_name, first_location(b))):
        target = merged.setdefault(b.option.raw_name, ConfigBinding(b.option))
        target.merge(b)
    return [merged[k] for k in sorted(merged)]


def collect_bindings(
    corpus: SourceCorpus,
    lexicon: OptionLexicon,
    getter_names: Iterable[str] = (),
    comparison_functions: Iterable[str] = DEFAULT_COMPARISON_FUNCTIONS,
) -> list[ConfigBinding]:
    return merge_bindings(
        collect_structure_bindings(corpus, lexicon)
        + collect_container_bindings(corpus, lexicon, getter_names)
        + collect_comparison_bindings(corpus, lexicon, comparison_functions)
    )
