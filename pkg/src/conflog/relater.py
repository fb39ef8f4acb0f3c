"""Relate candidate messages to configuration options.

Order of attempts for one message:

1. the message names the option (direct match);
2. structure-table messages: nearest option name in the same table entry;
3. otherwise a backward slice from the message's statement is checked
   against the collected configuration variables and functions;
4. if that finds nothing, slice variables are compared by name similarity
   with options that have no collected configuration variable.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bindings import ConfigBinding, structure_entry_root
from .corpus import MessageCandidate, MessageStyle, SourceCorpus
from .lexicon import ConfigOption, OptionLexicon, match_direct
from .names import Ref, Scope, VarRef, assignment_targets, function_scope, references
from .similarity import IdfTable, build_idf, similarity, variable_words
from .syntax import NodeKind, SourceLocation, SyntaxNode, function_name

DEFAULT_THRESHOLD = 0.63


class EvidenceKind(str, enum.Enum):
    DIRECT_NAME = "direct-name"
    CONFIG_VARIABLE = "config-variable"
    CONFIG_FUNCTION = "config-function"
    STRUCTURE_PROXIMITY = "structure-proximity"
    SIMILARITY = "similarity"


PRECEDENCE = {
    EvidenceKind.DIRECT_NAME: 0,
    EvidenceKind.CONFIG_VARIABLE: 1,
    EvidenceKind.CONFIG_FUNCTION: 1,
    EvidenceKind.STRUCTURE_PROXIMITY: 2,
    EvidenceKind.SIMILARITY: 3,
}


@dataclass(frozen=True)
class RelationEvidence:
    kind: EvidenceKind
    score: float
    witness: str
    location: SourceLocation


Relation = tuple[ConfigOption, RelationEvidence]


class SliceError(ValueError):
    pass


# -- per-function dependence model ----------------------------------------------

_SIMPLE_STATEMENTS = {
    "expression_statement", "return_statement", "declaration", "goto_statement",
    "throw_statement",
}  # fmt: skip
_CONTROL_PARTS = {
    "if_statement": ("condition",),
    "while_statement": ("condition",),
    "do_statement": ("condition",),
    "switch_statement": ("condition",),
    "for_statement": ("initializer", "condition", "update"),
    "for_range_loop": ("right",),
}


@dataclass(eq=False)
class Step:
    """A statement, or the header (condition) of a control statement."""

    owner: SyntaxNode
    parts: tuple[SyntaxNode, ...]
    uses: list[Ref] = field(default_factory=list)
    defs: list[VarRef] = field(default_factory=list)
    controls: list[Step] = field(default_factory=list)

    @property
    def start(self) -> int:
        return self.parts[0].start_byte if self.parts else self.owner.start_byte

    @property
    def location(self) -> SourceLocation:
        return self.parts[0].location if self.parts else self.owner.location

    def covers(self, node: SyntaxNode) -> bool:
        return any(p.contains(node) for p in self.parts)


def _is_plain_assign_target(ref: Ref) -> bool:
    node = ref.node
    for a in node.ancestors():
        if a.type == "assignment_expression":
            left = a.child("left")
            return a.operator == "=" and left is not None and left.contains(node)
        if a.type in _SIMPLE_STATEMENTS or a.kind is NodeKind.FUNCTION_DEF:
            return False
    return False


def _uses(parts: Iterable[SyntaxNode], scope: Scope) -> list[Ref]:
    out: list[Ref] = []
    for p in parts:
        out.extend(r for r in references(p, scope) if not _is_plain_assign_target(r))
    return out


class FunctionModel:
    def __init__(self, fn: SyntaxNode, parent_scope: Scope | None = None):
        self.fn = fn
        self.name = function_name(fn)
        self.scope = function_scope(fn, parent_scope)
        self.steps: list[Step] = []
        headers: dict[int, Step] = {}
        body = fn.child("body")
        for node in body.walk() if body is not None else ():
            if node.type in _CONTROL_PARTS:
                parts = tuple(p for f in _CONTROL_PARTS[node.type] if (p := node.child(f)) is not None)
                step = Step(node, parts)
                headers[id(node)] = step
            elif node.type in _SIMPLE_STATEMENTS:
                if any(a.type in _SIMPLE_STATEMENTS for a in node.ancestors() if body.contains(a)):
                    continue  # e.g. a declaration nested in a statement expression
                step = Step(node, (node,))
            else:
                continue
            step.uses = _uses(step.parts, self.scope)
            step.defs = [ref for p in step.parts for ref, _ in assignment_targets(p, self.scope)]
            self.steps.append(step)
        for step in self.steps:
            step.controls = self._controls(step, headers)
        self.steps.sort(key=lambda s: s.start)

    def _controls(self, step: Step, headers: dict[int, Step]) -> list[Step]:
        out = []
        prev = step.parts[0] if step.parts else step.owner
        for a in prev.ancestors():
            if a is self.fn:
                break
            header = headers.get(id(a))
            if header is not None and header is not step and not any(p.contains(prev) for p in header.parts):
                out.append(header)
        return out

    def step_for(self, node: SyntaxNode) -> Step | None:
        covering = [s for s in self.steps if s.covers(node)]
        if not covering:
            return None
        return min(covering, key=lambda s: sum(p.end_byte - p.start_byte for p in s.parts))

    def reaching_defs(self, use: VarRef, before: Step) -> list[Step]:
        hits = [
            s
            for s in self.steps
            if s is not before and s.start < before.start and any(use.depends_on_def(d) for d in s.defs)
        ]
        return sorted(hits, key=lambda s: s.start, reverse=True)


# -- slices ----------------------------------------------------------------------


@dataclass(frozen=True)
class SliceElement:
    kind: str  # "var" | "func"
    name: str
    location: SourceLocation
    var: VarRef | None = None


@dataclass
class Slice:
    seed: MessageCandidate
    statements: list[SyntaxNode]
    elements: list[SliceElement]

    @property
    def variables(self) -> list[str]:
        return [e.name for e in self.elements if e.kind == "var"]

    @property
    def functions(self) -> list[str]:
        return [e.name for e in self.elements if e.kind == "func"]

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.elements]


class ModelCache:
    def __init__(self, corpus: SourceCorpus | None = None):
        self.corpus = corpus
        self._models: dict[int, FunctionModel] = {}

    def model(self, fn: SyntaxNode) -> FunctionModel:
        m = self._models.get(id(fn))
        if m is None:
            parent = None
            unit = self.corpus.unit_for(fn) if self.corpus is not None else None
            if unit is not None:
                parent = Scope(unit.global_vars)
            m = self._models[id(fn)] = FunctionModel(fn, parent)
        return m


def backward_slice(
    candidate: MessageCandidate, corpus: SourceCorpus | None = None, cache: ModelCache | None = None
) -> Slice:
    """Intra-procedural backward slice seeded at the message's statement.

    Walks control dependences (enclosing conditions, nearest first) and data
    dependences (earlier writes to the variables read), breadth first, and
    finally appends the enclosing function's own name.
    """
    if candidate.style is MessageStyle.IN_STRUCTURE:
        raise SliceError("structure messages are related by structure proximity, not slicing")
    fn = candidate.origin_node.enclosing(NodeKind.FUNCTION_DEF)
    if fn is None:
        raise SliceError(f"{candidate.location}: message is not inside a function")
    model = (cache or ModelCache(corpus)).model(fn)
    seed = model.step_for(candidate.origin_node)
    if seed is None:
        raise SliceError(f"{candidate.location}: no statement encloses the message")

    statements: list[SyntaxNode] = []
    elements: list[SliceElement] = []
    seen_names: set[tuple[str, str]] = set()
    seen_steps = {id(seed)}
    queue: deque[Step] = deque([seed])
    while queue:
        step = queue.popleft()
        statements.append(step.owner)
        for ref in step.uses:
            if ref.key not in seen_names:
                seen_names.add(ref.key)
                elements.append(SliceElement(ref.kind, ref.name, ref.node.location, ref.var))
        nxt = list(step.controls)
        for ref in step.uses:
            if ref.var is not None:
                nxt.extend(model.reaching_defs(ref.var, step))
        for s in nxt:
            if id(s) not in seen_steps:
                seen_steps.add(id(s))
                queue.append(s)
    if model.name and ("func", model.name) not in seen_names:
        decl = fn.child("declarator")
        elements.append(SliceElement("func", model.name, (decl or fn).location))
    return Slice(candidate, statements, elements)


def relate_by_slice(slice_: Slice, bindings: Sequence[ConfigBinding]) -> list[Relation]:
    out: list[Relation] = []
    related: set[str] = set()
    for el in slice_.elements:
        for b in bindings:
            name = b.option.raw_name
            if name in related:
                continue
            if el.kind == "var" and el.var is not None and b.match_variable(el.var) is not None:
                kind = EvidenceKind.CONFIG_VARIABLE
            elif el.kind == "func" and el.name in b.functions:
                kind = EvidenceKind.CONFIG_FUNCTION
            else:
                continue
            related.add(name)
            out.append((b.option, RelationEvidence(kind, 1.0, el.name, el.location)))
    return out


def relate_by_structure(candidate: MessageCandidate, lexicon: OptionLexicon) -> list[Relation]:
    """Nearest option-name literal found by widening the message's subtree."""
    start = candidate.origin_node
    top = structure_entry_root(start)
    cur = start
    while cur is not top and cur.parent is not None:
        parent = cur.parent
        for sib in parent.children:
            if sib is cur:
                continue
            for n in sib.walk():
                if n.kind is NodeKind.STRING_LITERAL:
                    opt = lexicon.lookup_literal(n.value)
                    if opt is not None:
                        ev = RelationEvidence(EvidenceKind.STRUCTURE_PROXIMITY, 1.0, opt.raw_name, n.location)
                        return [(opt, ev)]
        cur = parent
    return []


def relate_by_similarity(
    slice_: Slice,
    lexicon: OptionLexicon,
    threshold: float = DEFAULT_THRESHOLD,
    eligible: Iterable[ConfigOption] | None = None,
    idf: IdfTable | None = None,
) -> list[Relation]:
    """Options whose name is similar enough to a variable in the slice."""
    idf = idf or build_idf(lexicon)
    options = list(eligible) if eligible is not None else list(lexicon)
    out: list[Relation] = []
    related: set[str] = set()
    for el in slice_.elements:
        if el.kind != "var" or el.var is None:
            continue
        vwords = variable_words(el.var.leaf)
        if not vwords:
            continue
        scored = []
        for opt in options:
            if opt.raw_name in related:
                continue
            s = similarity(opt.words, vwords, idf)
            if s >= threshold:
                scored.append((-s, opt.raw_name, opt))
        for neg, _, opt in sorted(scored, key=lambda t: (t[0], t[1])):
            related.add(opt.raw_name)
            out.append((opt, RelationEvidence(EvidenceKind.SIMILARITY, -neg, el.name, el.location)))
    return out


class Relater:
    """Runs the relation steps for every candidate over shared read-only state."""

    def __init__(
        self,
        corpus: SourceCorpus,
        lexicon: OptionLexicon,
        bindings: Sequence[ConfigBinding],
        threshold: float = DEFAULT_THRESHOLD,
    ):
        self.corpus = corpus
        self.lexicon = lexicon
        self.bindings = list(bindings)
        self.threshold = threshold
        self.idf = build_idf(lexicon) if len(lexicon) else None
        self.cache = ModelCache(corpus)
        with_vars = {b.option.raw_name for b in self.bindings if b.variables}
        self.similarity_options = [o for o in lexicon if o.raw_name not in with_vars]

    def direct(self, candidate: MessageCandidate) -> list[Relation]:
        out = []
        for opt in self.lexicon:
            if match_direct(candidate, opt):
                m = opt.name_regex.search(candidate.text)
                witness = m.group(0) if m else opt.raw_name
                out.append((opt, RelationEvidence(EvidenceKind.DIRECT_NAME, 1.0, witness, candidate.location)))
        return out

    def slice(self, candidate: MessageCandidate) -> Slice | None:
        try:
            return backward_slice(candidate, self.corpus, self.cache)
        except SliceError:
            return None

    def relate(self, candidate: MessageCandidate) -> list[Relation]:
        found = self.direct(candidate)
        if found:
            return found
        if candidate.style is MessageStyle.IN_STRUCTURE:
            return relate_by_structure(candidate, self.lexicon)
        sl = self.slice(candidate)
        if sl is None:
            return []
        found = relate_by_slice(sl, self.bindings)
        if found or self.idf is None:
            return found
        return relate_by_similarity(sl, self.lexicon, self.threshold, self.similarity_options, self.idf)
