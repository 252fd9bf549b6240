#include <stdio.h>
#include <string.h>

#include "coincalc.h"

int main(void) {
    CoincalcDb *db = NULL;
    if (coincalc_db_open_builtin(&db) != COINCALC_STATUS_OK) {
        fprintf(stderr, "open: %s\n", coincalc_last_error());
        return 1;
    }
    const char *argv[] = {"pi-sphere", "--m", "9", "--n", "6"};
    char *json = NULL;
    CoincalcStatus status = coincalc_query(db, argv, 5, &json);
    if (status != COINCALC_STATUS_OK || json == NULL) {
        fprintf(stderr, "query: %d %s\n", (int)status, coincalc_last_error());
        return 1;
    }
    puts(json);
    coincalc_string_free(json);

    const char *gap[] = {"pi-sphere", "--m", "40", "--n", "3"};
    status = coincalc_query(db, gap, 5, &json);
    coincalc_string_free(json);
    coincalc_db_free(db);
    return status == COINCALC_STATUS_UNKNOWN ? 0 : 2;
}
