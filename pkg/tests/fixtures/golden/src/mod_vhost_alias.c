#include "httpd.h"
#include "http_config.h"

#define VHOST_NONE "none"

typedef struct mva_sconf_t {
    const char *doc_root;
    const char *cgi_root;
} mva_sconf_t;

static int vhost_alias_set_docroot;

static const char *vhost_alias_set(cmd_parms *cmd, void *dummy, const char *map)
{
    mva_sconf_t *conf = ap_get_module_config(cmd->server->module_config, &vhost_alias_module);
    const char **pmap = &conf->doc_root;

    if (!ap_os_is_path_absolute(cmd->pool, map)) {
        if (strcasecmp(map, VHOST_NONE)) {
            return apr_psprintf(cmd->pool, "format string must be an absolute path, or '%s'", VHOST_NONE);
        }
        map = NULL;
    }
    *pmap = map;
    return NULL;
}

static const command_rec mva_commands[] = {
    AP_INIT_TAKE1("VirtualDocumentRoot", vhost_alias_set, &vhost_alias_set_docroot, RSRC_CONF,
                  "how to create the DocumentRoot based on the request"),
    { NULL }
};
