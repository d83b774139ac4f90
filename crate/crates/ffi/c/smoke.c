#include <math.h>
#include <stdio.h>
#include "simplex_sines.h"

int main(void) {
    const double coords[] = {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0};
    SsSimplex *s = NULL;
    if (ss_simplex_new(3, coords, 12, &s) != SS_OK) {
        fprintf(stderr, "new: %s\n", ss_last_error());
        return 1;
    }
    double areas[4];
    if (ss_simplex_areas(s, areas, 4) != SS_OK) return 2;
    SsVerifyReport r;
    if (ss_simplex_verify(s, 1e-9, &r) != SS_OK || !r.pass) return 3;
    ss_simplex_free(s);

    const double identity[] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    SsSimplex *t = NULL;
    if (ss_simplex_from_gram(identity, 3, 1e-10, &t) != SS_NOT_REALIZABLE || t != NULL) return 4;

    printf("%.9f %.9f %s\n", areas[0], areas[3], ss_version());
    return fabs(areas[3] - sqrt(3.0) / 2.0) < 1e-15 ? 0 : 5;
}
