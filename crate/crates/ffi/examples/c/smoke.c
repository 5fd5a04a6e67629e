#include <stdio.h>
#include "ordlam.h"

int main(void) {
    OrdlamTerm *term = NULL;
    if (ordlam_parse("(\\x. \\y. x) ((\\z. z) a) b", &term) != ORDLAM_OK) {
        fprintf(stderr, "parse: %s\n", ordlam_last_error());
        return 1;
    }
    char *out = NULL;
    uint64_t steps = 0;
    int rc = ordlam_eval(term, ORDLAM_STRATEGY_ORDERED_TREE, ORDLAM_MODE_NF, 0, &out, &steps);
    if (rc != ORDLAM_OK) {
        fprintf(stderr, "eval (%d): %s\n", rc, ordlam_last_error());
        ordlam_term_free(term);
        return 1;
    }
    printf("%s  [%llu steps, ordlam %s]\n", out, (unsigned long long)steps, ordlam_version());
    ordlam_string_free(out);
    ordlam_term_free(term);
    return 0;
}
