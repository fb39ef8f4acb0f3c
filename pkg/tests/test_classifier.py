from __future__ import annotations

import pytest

from conflog.classifier import (
    Classifier,
    ErrorLexicon,
    build_patterns,
    default_patterns,
    load_slot_lexicons,
    match_patterns,
    normalize,
    render,
)
from conflog.lexicon import ConfigOption
from conflog.tagger import Marker, Tag, TagToken, pos_tag

TABLE_IV = [
    ("This value must be greater than 0.", None, 1),
    ("operationProfiling.slowOpSampleRate accepts values between 0 and 1.", None, 2),
    ("Valid options are `ALWAYS', `NEVER', and `ONCE'.", None, 3),
    ("Negative value or 0 are invalid values and will fail NN startup.", None, 4),
    ("Error: olcIdleTimeout is less than 0.", "olcIdleTimeout", 5),
]
NEGATIVES = ["invalid value", "Symbolic link is not allowed or link target not accessible"]


def tags(tokens):
    return [t.tag.value for t in tokens]


def test_vhost_alias_tagging():
    toks = pos_tag("format string must be an absolute path, or 'none'.")
    assert [str(t) for t in toks] == [
        "NN(format)", "NN(string)", "MD(must)", "VB(be)", "DT(an)", "JJ(absolute)", "NN(path)",
        "PUNCT(,)", "CC(or)", "SYM(')", "NN(none)", "SYM(')", "PUNCT(.)",
    ]  # fmt: skip


def test_closed_class_alone():
    assert pos_tag("must") == [TagToken(Tag.MD, "must")]


def test_table_iv_row1_tags():
    assert tags(pos_tag("This value must be greater than 0.")) == ["DT", "NN", "MD", "VB", "JJ", "IN", "CD", "PUNCT"]


def test_variable_marker():
    (tok,) = pos_tag("_VARIABLE_")
    assert tok.tag is Tag.NN and tok.marker is Marker.VARIABLE


@pytest.mark.parametrize(
    "text, expected",
    [
        ("it can't be empty", ["NN", "MD", "OTHER", "VB", "JJ"]),
        ("value cannot be set", ["NN", "MD", "OTHER", "VB", "VB"]),
        ("path has to be absolute", ["NN", "MD", "VB", "JJ"]),
        ("the module supports threads", ["DT", "NN", "VB", "NN"]),
        ("the limits are fixed", ["DT", "NN", "VB", "VB"]),
        ("Allowed values are on and off", ["JJ", "NN", "VB", "IN", "CC", "NN"]),
    ],
)
def test_tagger_rules(text, expected):
    assert tags(pos_tag(text)) == expected


def test_normalize_vhost_alias_message():
    out = normalize(pos_tag("format string must be an absolute path, or 'none'."))
    assert render(out) == "NN(format string) MD(must) VB(be) JJ(absolute) NN(path) CC(or) NN(none)"


def test_normalize_row5():
    opt = ConfigOption.from_name("olcIdleTimeout")
    out = normalize(pos_tag("Error: olcIdleTimeout is less than 0."), opt)
    assert render(out) == "NN(ERROR_STATUS) NN(CONFIG) VB(be) JJ(less) IN(than) NN(0)"
    assert [t.marker for t in out[:2]] == [Marker.ERROR_STATUS, Marker.CONFIG]


def test_normalize_multi_token_option():
    opt = ConfigOption.from_name("data_directory")
    out = normalize(pos_tag("the data directory must be readable"), opt)
    assert render(out) == "NN(CONFIG) MD(must) VB(be) JJ(readable)"


def test_normalize_keeps_internal_sentence_breaks():
    out = normalize(pos_tag("bad thing. value must be set."))
    assert tags(out) == ["JJ", "NN", "PUNCT", "NN", "MD", "VB", "VB"]


def test_normalize_idempotent_examples():
    for text, opt, _ in TABLE_IV:
        o = ConfigOption.from_name(opt) if opt else None
        once = normalize(pos_tag(text), o)
        assert normalize(once, o) == once


@pytest.mark.parametrize("text, option, pattern", TABLE_IV)
def test_table_iv_examples(text, option, pattern):
    opt = ConfigOption.from_name(option) if option else None
    assert Classifier().classify(text, opt) == pattern


@pytest.mark.parametrize("text", NEGATIVES)
def test_negatives(text):
    assert Classifier().classify(text) is None


def test_exactly_five_patterns_in_order():
    assert [p.id for p in default_patterns()] == [1, 2, 3, 4, 5]


def test_first_matching_pattern_wins():
    # both row 1 (NN MD VB) and row 3 (JJ NN VB) fit; row 1 comes first
    toks = normalize(pos_tag("valid value must be set"))
    assert match_patterns(toks) == 1


def test_not_slot_is_optional():
    c = Classifier()
    assert c.classify("value must not be empty") == 1
    assert c.classify("value must be empty") == 1
    assert c.classify("value is not valid") == 4
    assert c.classify("value must also be empty") is None


def test_error_lexicon():
    lex = ErrorLexicon.load()
    assert {"error", "invalid", "illegal", "fail", "failure", "wrong", "bad", "mistake", "fault"} <= lex.words
    assert "errors" in lex
    with pytest.raises(ValueError):
        ErrorLexicon(frozenset())


def test_error_status_only_replaces_nouns():
    out = normalize(pos_tag("errors happen with invalid value"))
    assert out[0].marker is Marker.ERROR_STATUS
    assert TagToken(Tag.JJ, "invalid") in out


def test_slot_lexicon_override(tmp_path):
    f = tmp_path / "modal.txt"
    f.write_text("# only this\nmay\n")
    patterns = build_patterns(load_slot_lexicons({"modal": f}))
    c = Classifier(patterns=patterns)
    assert c.classify("value may be empty") == 1
    assert c.classify("value must be empty") is None
    with pytest.raises(ValueError):
        load_slot_lexicons({"bogus": f})


def test_empty_text():
    assert Classifier().classify("   ") is None
