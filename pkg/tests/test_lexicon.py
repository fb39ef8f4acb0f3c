from __future__ import annotations

import pytest
from contract_data import NAMES, NEAR_MISSES, delimiter_variants

from conflog.lexicon import (
    ConfigOption,
    LexiconError,
    OptionLexicon,
    build_name_regex,
    load_lexicon,
    match_direct,
    split_name,
    tokenize_option,
)


@pytest.mark.parametrize(
    "name, words",
    [
        ("data_directory", ["data", "directori"]),
        ("LimitRequestFields", ["limit", "request", "field"]),
        ("use", ["use"]),
        ("server.max-keep-alive-requests", ["server", "max", "keep", "aliv", "request"]),
        ("HTTPServerPort", ["http", "server", "port"]),
    ],
)
def test_tokenize_option(name, words):
    assert tokenize_option(name) == words


def test_tokenize_rejects_empty():
    with pytest.raises(LexiconError):
        tokenize_option("__--")
    with pytest.raises(LexiconError):
        ConfigOption.from_name("   ")


def test_split_name_records_delimiters():
    assert split_name("a__bC") == [("a", None), ("b", "__"), ("C", "")]


def test_regex_data_directory():
    rx = build_name_regex("data_directory")
    for s in ["data directory", "data.directory", "data-directory", "data_directory", "DATA_Directory"]:
        assert rx.search(s), s
    assert not rx.search("database_directory")


def test_regex_camel_case():
    rx = build_name_regex("LimitRequestFields")
    for s in ["LimitRequestFields", "limit request fields", "Limit-Request-Fields", "limitrequestfields"]:
        assert rx.search(s), s
    assert not rx.search("LimitRequestFieldsize")


def test_regex_word_boundaries():
    rx = build_name_regex("work_mem")
    assert rx.search("set 'work_mem' to 4MB")
    assert not rx.search("maintenance_work_mem")


@pytest.mark.parametrize("name", NAMES)
def test_regex_contract_variants(name):
    rx = build_name_regex(name)
    assert rx.search(name)
    for v in delimiter_variants(name):
        assert rx.search(v), v


@pytest.mark.parametrize("name, bad", [(n, b) for n, bs in NEAR_MISSES.items() for b in bs])
def test_regex_contract_near_misses(name, bad):
    assert not build_name_regex(name).search(bad)


@pytest.mark.parametrize(
    "message, hit",
    [
        ("LimitRequestFields must be a number", True),
        ("the data directory is missing", True),
        ("use of closed stream", False),
        ("'use' expects a path", True),
        ("the use option needs a path", True),
        ("use directive requires one argument", True),
    ],
)
def test_match_direct(message, hit, lexicon_of):
    lex = lexicon_of(["LimitRequestFields", "data_directory", "use"])
    assert any(match_direct(message, o) for o in lex) is hit


def test_lexicon_document_frequency(lexicon_of):
    lex = lexicon_of(["data_directory", "log_directory", "max_connections", "data_directory"])
    assert len(lex) == 3
    assert lex.word_document_frequency["directori"] == 2
    assert lex.word_document_frequency["data"] == 1
    assert lex.word_document_frequency == OptionLexicon.document_frequencies(lex.options)


def test_lookup_literal(lexicon_of):
    lex = lexicon_of(["AcceptPathInfo"])
    assert lex.lookup_literal("acceptpathinfo").raw_name == "AcceptPathInfo"
    assert lex.lookup_literal("AcceptPath") is None
    assert lex.lookup_literal(None) is None


def test_load_lexicon(tmp_path):
    p = tmp_path / "opts.txt"
    p.write_text("# comment\nfoo_bar\n\nBazQux\tdescription\n")
    assert [o.raw_name for o in load_lexicon(p)] == ["foo_bar", "BazQux"]
    p.write_text("")
    assert len(load_lexicon(p)) == 0
