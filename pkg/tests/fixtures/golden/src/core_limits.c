#include "httpd.h"

static const char *set_limit_req_fields(cmd_parms *cmd, void *dummy, const char *arg)
{
    core_server_config *conf = ap_get_core_module_config(cmd->server->module_config);
    int lim;

    lim = atoi(arg);
    if (lim < 0) {
        return apr_pstrcat(cmd->pool, "LimitRequestFields \"", arg,
                           "\" must be a non-negative integer (0 = no limit)", NULL);
    }
    conf->limit_req_fields = lim;
    return NULL;
}

static int check_fields(core_server_config *conf, int n)
{
    if (n > conf->limit_req_fields) {
        ap_log_error(APLOG_MARK, APLOG_INFO, 0, NULL, "too many header fields in request: %d", n);
        return -1;
    }
    return 0;
}

static const command_rec limit_cmds[] = {
    AP_INIT_TAKE1("LimitRequestFields", set_limit_req_fields, NULL, RSRC_CONF,
                  "Limit (0 = unlimited) on max number of header fields in a request message"),
    { NULL }
};
