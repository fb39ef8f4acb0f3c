"""Randomized property checks (each runs at least 1000 examples)."""

from __future__ import annotations

import math
import shutil
import tempfile
from pathlib import Path

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conflog.bindings import minimal_common_ancestor
from conflog.classifier import normalize
from conflog.lexicon import ConfigOption, OptionLexicon
from conflog.names import VarRef
from conflog.pipeline import run
from conflog.relater import Slice, SliceElement, relate_by_similarity
from conflog.report import to_json
from conflog.similarity import build_idf, similarity
from conflog.syntax import NodeKind, SourceLocation, SyntaxNode
from conflog.tagger import Marker, Tag, pos_tag

CASES = settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
LOC = SourceLocation("p.c", 1, 1)

# -- minimal common ancestor -------------------------------------------------------


@st.composite
def trees(draw):
    n = draw(st.integers(1, 50))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    nodes = [SyntaxNode(NodeKind.OTHER, "node", LOC, str(i)) for i in range(n)]
    for i, p in enumerate(parents, start=1):
        nodes[p].add(nodes[i])
    target = draw(st.integers(0, n - 1))
    # option literals are leaves, so no other literal sits below the target
    outside = [i for i in range(n) if not nodes[target].contains(nodes[i])]
    others = draw(st.sets(st.sampled_from(outside), max_size=n)) if outside else set()
    chain = [nodes[target], *nodes[target].ancestors()]
    top = chain[draw(st.integers(0, len(chain) - 1))]
    return nodes, target, others, top


def naive_mca(nodes, target, others, top):
    other_nodes = [nodes[i] for i in others]
    chain = [nodes[target]]
    while chain[-1] is not top and chain[-1].parent is not None:
        chain.append(chain[-1].parent)
    clean = [a for a in chain if not any(a.contains(o) for o in other_nodes)]
    return max(clean, key=lambda a: sum(1 for _ in a.walk()))


@CASES
@given(trees())
def test_mca_matches_exhaustive_search(case):
    nodes, target, others, top = case
    other_ids = {id(nodes[i]) for i in others}
    got = minimal_common_ancestor(nodes[target], lambda n: id(n) in other_ids, top)
    assert got is naive_mca(nodes, target, others, top)


# -- similarity and idf ------------------------------------------------------------

WORDS = st.sampled_from(["data", "dir", "log", "max", "conn", "port", "size", "time", "out", "path", "user"])
NAMES = st.lists(WORDS, min_size=1, max_size=4).map("_".join)


@st.composite
def lexicons(draw):
    names = draw(st.lists(NAMES, min_size=1, max_size=12, unique=True))
    return OptionLexicon.from_names(names)


@CASES
@given(lexicons(), st.sets(WORDS, max_size=5), st.sets(WORDS, max_size=5))
def test_similarity_symmetric_and_bounded(lex, a, b):
    idf = build_idf(lex)
    s = similarity(a, b, idf)
    assert s == similarity(b, a, idf)
    assert 0.0 <= s <= 1.0


@CASES
@given(lexicons(), st.sets(WORDS, max_size=5), st.sets(WORDS, max_size=5), WORDS)
def test_similarity_shared_word_monotone(lex, a, b, w):
    idf = build_idf(lex)
    before = similarity(a, b, idf)
    assert similarity(a | {w}, b | {w}, idf) >= before - 1e-12
    if w in a:
        assert similarity(a, b | {w}, idf) >= before - 1e-12


@CASES
@given(lexicons())
def test_idf_decreases_with_document_frequency(lex):
    idf = build_idf(lex)
    df = lex.word_document_frequency
    for w1 in df:
        assert idf.weight(w1) == math.log(len(lex) / df[w1])
        for w2 in df:
            if df[w1] <= df[w2]:
                assert idf.weight(w1) >= idf.weight(w2)


@CASES
@given(lexicons(), st.lists(NAMES, min_size=1, max_size=5), st.floats(0, 1), st.floats(0, 1))
def test_similarity_relations_shrink_with_threshold(lex, variables, m1, m2):
    lo, hi = sorted((m1, m2))
    sl = Slice(None, [], [SliceElement("var", v, LOC, VarRef(v)) for v in variables])  # type: ignore[arg-type]
    wide = {o.raw_name for o, _ in relate_by_similarity(sl, lex, lo)}
    narrow = {o.raw_name for o, _ in relate_by_similarity(sl, lex, hi)}
    assert narrow <= wide


# -- normalization -----------------------------------------------------------------

VOCAB = [
    "the", "a", "value", "values", "must", "should", "not", "be", "is", "are", "greater", "less",
    "than", "0", "42", "error", "failure", "invalid", "valid", "option", "path", "format", "string",
    "accepts", "requires", "and", "or", ",", ".", ":", ";", "'", '"', "(", ")", "=", "_VARIABLE_",
    "data_directory", "data", "directory", "LimitRequestFields", "can't", "has", "to", "allowed",
    "empty", "quickly", "set", "limit", "limits", "Error", "one", "%",
]  # fmt: skip
OPTIONS = [None, "data_directory", "LimitRequestFields", "value", "max_value"]


def _no_adjacent_plain_nouns(tokens):
    barriers = (Marker.CONFIG, Marker.ERROR_STATUS)
    for x, y in zip(tokens, tokens[1:]):
        if x.tag is Tag.NN and y.tag is Tag.NN and x.marker not in barriers and y.marker not in barriers:
            return False
    return True


@CASES
@given(st.lists(st.sampled_from(VOCAB), min_size=1, max_size=20), st.sampled_from(OPTIONS))
def test_normalize_idempotent_with_postconditions(words, option_name):
    option = ConfigOption.from_name(option_name) if option_name else None
    once = normalize(pos_tag(" ".join(words)), option)
    assert normalize(once, option) == once
    assert all(t.tag not in (Tag.DT, Tag.SYM, Tag.CD) for t in once)
    assert _no_adjacent_plain_nouns(once)
    assert all(t.tag is Tag.NN for t in once if t.marker is not None)


# -- end-to-end determinism --------------------------------------------------------

MESSAGES = st.sampled_from([
    "value must be positive", "invalid value", "path must not be empty", "it accepts numbers only",
    "valid modes are fast and slow", "size is not valid", "could not open the file",
])  # fmt: skip
IDENTS = st.sampled_from(["max_size", "data_dir", "timeout", "port", "mode", "limit"])


@st.composite
def corpora(draw):
    units = []
    for i in range(draw(st.integers(1, 3))):
        var, msg, opt = draw(IDENTS), draw(MESSAGES), draw(IDENTS)
        units.append(
            f"int {var}_g;\n"
            f"static const char *set_{i}(cmd_parms *cmd, const char *arg) {{\n"
            f"    if (atoi(arg) < {i}) return \"{msg}\";\n"
            f"    if ({var}_g > 1) log_error(\"{draw(MESSAGES)} %s\", arg);\n"
            f"    return NULL;\n}}\n"
            f"static cmd_rec t{i}[] = {{ AP_INIT_TAKE1(\"{opt}\", set_{i}, &{var}_g, 0, \"{draw(MESSAGES)}\") }};\n"
        )
    options = draw(st.lists(IDENTS, min_size=0, max_size=4))
    return units, options


@CASES
@given(corpora(), st.sampled_from([0.3, 0.63, 0.9]))
def test_two_runs_are_byte_identical(case, mu):
    units, options = case
    root = Path(tempfile.mkdtemp(prefix="conflog-prop-"))
    try:
        src = root / "src"
        src.mkdir()
        for i, body in enumerate(units):
            (src / f"u{i}.c").write_text(body)
        opts = root / "options.txt"
        opts.write_text("\n".join(options) + "\n")
        first = to_json(run(src, opts, threshold=mu))
        second = to_json(run(src, opts, threshold=mu))
        assert first == second
    finally:
        shutil.rmtree(root)
