#include <stdio.h>
#include "srl.h"

int main(void) {
    SrlGroup *g = NULL;
    SrlStatus s = srl_group_new("Alt(5)", &g);
    if (s != SRL_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", srl_status_message(s), srl_last_error());
        return 1;
    }
    char *json = NULL;
    s = srl_witness_json(g, "(1,2,3)", 2, 0, 0, &json);
    if (s == SRL_STATUS_OK) {
        puts(json);
        srl_string_free(json);
    }
    srl_group_free(g);
    return s == SRL_STATUS_OK ? 0 : 1;
}
