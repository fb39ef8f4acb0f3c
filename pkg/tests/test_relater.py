from __future__ import annotations

import pytest

from conflog.bindings import collect_bindings
from conflog.corpus import MessageStyle, harvest_candidates
from conflog.relater import (
    EvidenceKind,
    Relater,
    SliceError,
    backward_slice,
    relate_by_similarity,
    relate_by_structure,
)

VHOST_ALIAS = """
static const char *vhost_alias_set(cmd_parms *cmd, void *dummy, const char *map)
{
    if (!ap_os_is_path_absolute(cmd->pool, map)) {
        if (strcasecmp(map, "none")) {
            return "format string must be an absolute path, or 'none'";
        }
    }
    return NULL;
}
static const command_rec mva_commands[] = {
    AP_INIT_TAKE1("VirtualDocumentRoot", vhost_alias_set, NULL, RSRC_CONF, "how to create the DocumentRoot"),
};
"""


def _one(corpus, text):
    return next(c for c in harvest_candidates(corpus) if c.text == text)


def test_vhost_alias_slice_order(make_corpus):
    corpus = make_corpus(VHOST_ALIAS)
    cand = _one(corpus, "format string must be an absolute path, or 'none'")
    sl = backward_slice(cand, corpus)
    # controlling conditions nearest first, the enclosing function last
    assert sl.names == ["strcasecmp", "map", "ap_os_is_path_absolute", "cmd->pool", "vhost_alias_set"]
    assert sl.variables == ["map", "cmd->pool"]


def test_vhost_alias_relates_by_config_function(make_corpus, lexicon_of):
    corpus = make_corpus(VHOST_ALIAS)
    lex = lexicon_of(["VirtualDocumentRoot"])
    relater = Relater(corpus, lex, collect_bindings(corpus, lex))
    cand = _one(corpus, "format string must be an absolute path, or 'none'")
    ((opt, ev),) = relater.relate(cand)
    assert opt.raw_name == "VirtualDocumentRoot"
    assert ev.kind is EvidenceKind.CONFIG_FUNCTION
    assert ev.witness == "vhost_alias_set"


def test_data_dependence_through_assignments(make_corpus):
    corpus = make_corpus(
        """
        int check(struct conf *c, int unused) {
            int n;
            int m = 4;
            n = c->max_clients + 1;
            m = 5;
            if (n > 10) log_error("too many clients requested");
            return 0;
        }
        """
    )
    sl = backward_slice(harvest_candidates(corpus)[0], corpus)
    assert "c->max_clients" in sl.variables
    assert "m" not in sl.variables and "unused" not in sl.variables
    assert sl.functions == ["log_error", "check"]


def test_slice_rejects_structure_and_file_scope(make_corpus):
    corpus = make_corpus(VHOST_ALIAS)
    cand = _one(corpus, "how to create the DocumentRoot")
    assert cand.style is MessageStyle.IN_STRUCTURE
    with pytest.raises(SliceError):
        backward_slice(cand, corpus)


def test_config_variable_across_functions(make_corpus, lexicon_of):
    corpus = make_corpus(
        """
        static char *set(ngx_conf_t *cf, ngx_http_core_loc_conf_t *clcf) {
            if (ngx_strcmp(cf->name, "disable_symlinks") == 0) { clcf->disable_symlinks = 1; }
            return NULL;
        }
        static int check(ngx_http_request_t *r, ngx_http_core_loc_conf_t *conf) {
            if (conf->disable_symlinks) { log_err(r->log, "links must not be followed here"); }
            return 0;
        }
        static int other(struct unrelated *conf) {
            if (conf->disable_symlinks) { log_err(NULL, "unrelated message with same member"); }
            return 0;
        }
        """
    )
    lex = lexicon_of(["disable_symlinks"])
    relater = Relater(corpus, lex, collect_bindings(corpus, lex))
    ((opt, ev),) = relater.relate(_one(corpus, "links must not be followed here"))
    assert ev.kind is EvidenceKind.CONFIG_VARIABLE and ev.witness == "conf->disable_symlinks"
    assert relater.relate(_one(corpus, "unrelated message with same member")) == []


def test_structure_proximity_no_cross_contamination(make_corpus, lexicon_of):
    corpus = make_corpus(
        """
        static const command_rec core_cmds[] = {
        AP_INIT_TAKE1("AddDefaultCharset", set_add_default_charset, NULL, OR_FILEINFO,
          "The name of the default charset to add to any Content-Type without one or 'Off' to disable"),
        AP_INIT_TAKE1("AcceptPathInfo", set_accept_path_info, NULL, OR_FILEINFO,
          "Set to on or off for PATH_INFO to be accepted by handlers, or default for the per-handler preference"),
        };
        """
    )
    lex = lexicon_of(["AddDefaultCharset", "AcceptPathInfo"])
    related = {c.text[:12]: [o.raw_name for o, _ in relate_by_structure(c, lex)] for c in harvest_candidates(corpus)}
    assert related == {"The name of ": ["AddDefaultCharset"], "Set to on or": ["AcceptPathInfo"]}


def test_direct_name_preempts_implicit(make_corpus, lexicon_of):
    corpus = make_corpus(
        """
        static const char *set_limit(cmd_parms *cmd, const char *arg) {
            if (atoi(arg) < 0) return "LimitRequestFields must be a non-negative integer";
            return NULL;
        }
        static cmd_rec cmds[] = { AP_INIT_TAKE1("LimitRequestLine", set_limit, NULL, 0, "limit text") };
        """
    )
    lex = lexicon_of(["LimitRequestFields", "LimitRequestLine"])
    relater = Relater(corpus, lex, collect_bindings(corpus, lex))
    ((opt, ev),) = relater.relate(_one(corpus, "LimitRequestFields must be a non-negative integer"))
    assert (opt.raw_name, ev.kind) == ("LimitRequestFields", EvidenceKind.DIRECT_NAME)


SIM = """
char *default_tablespaces = NULL;
int GetDefaultTablespace(void) {
    if (default_tablespaces == NULL) elog(ERROR, "tablespace name must not be empty");
    return 0;
}
"""


def test_similarity_fallback(make_corpus, lexicon_of):
    corpus = make_corpus(SIM)
    lex = lexicon_of(["default_tablespace", "temp_tablespaces", "default_statistics_target"])
    relater = Relater(corpus, lex, collect_bindings(corpus, lex))
    ((opt, ev),) = relater.relate(harvest_candidates(corpus)[0])
    assert opt.raw_name == "default_tablespace"
    assert ev.kind is EvidenceKind.SIMILARITY and ev.score == pytest.approx(1.0)
    assert ev.witness == "default_tablespaces"


def test_similarity_ranked_and_thresholded(make_corpus, lexicon_of):
    corpus = make_corpus(
        """
        int f(struct s *c) { if (c->max_conn_count > 2) log_error("too many open things"); return 0; }
        """
    )
    lex = lexicon_of(["max_conn_count", "max_conn", "conn_count_limit", "log_level"])
    sl = backward_slice(harvest_candidates(corpus)[0], corpus)
    got = relate_by_similarity(sl, lex, threshold=0.3)
    scores = [ev.score for _, ev in got]
    assert [o.raw_name for o, _ in got][0] == "max_conn_count"
    assert scores == sorted(scores, reverse=True)
    assert all(s >= 0.3 for s in scores)
    assert "log_level" not in [o.raw_name for o, _ in got]
    assert relate_by_similarity(sl, lex, threshold=1.0) == got[:1]


def test_options_with_variables_skip_similarity(make_corpus, lexicon_of):
    corpus = make_corpus(
        SIM
        + """
        static struct config_string t[] = { { {"default_tablespace", 0}, &other_var, "", NULL } };
        int other_var;
        """
    )
    lex = lexicon_of(["default_tablespace", "temp_tablespaces"])
    relater = Relater(corpus, lex, collect_bindings(corpus, lex))
    assert relater.relate(harvest_candidates(corpus)[0]) == []
