#include <stdio.h>
#include <string.h>

#include "symdet.h"

static int check(SymdetStatus st, const char *what) {
    if (st != SYMDET_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)st, symdet_last_error_message());
        return 1;
    }
    return 0;
}

int main(void) {
    SymdetMatrix *m = NULL;
    SymdetPoly *d = NULL;
    SymdetMeter *meter = symdet_meter_new();
    char *text;
    char *ops;

    if (check(symdet_matrix_parse("2 4\nx1; x2\nx3; x4\n", &m), "parse")) return 1;
    if (check(symdet_determinant(m, SYMDET_ALGORITHM_BAREISS, meter, &d), "determinant")) return 1;
    text = symdet_poly_to_string(d);
    ops = symdet_meter_modeled_int_ops(meter);
    printf("%s|%llu|%s\n", text, (unsigned long long)symdet_meter_poly_divs(meter), ops);
    symdet_string_free(ops);
    symdet_string_free(text);
    symdet_poly_free(d);

    if (symdet_poly_parse("x9", 2, &d) != SYMDET_STATUS_VARIABLE_OUT_OF_RANGE) return 2;
    if (strlen(symdet_last_error_message()) == 0) return 3;

    symdet_meter_free(meter);
    symdet_matrix_free(m);
    return 0;
}
