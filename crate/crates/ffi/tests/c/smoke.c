#include <math.h>
#include <stdio.h>
#include <string.h>

#include "cottonlab.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, \
                    #cond, cottonlab_last_error());                 \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    double cs = 0.0;
    CHECK(cottonlab_cs_closed("so3", &cs) == COTTONLAB_OK);
    CHECK(cs == -0.5);

    CottonlabSpec *spec = NULL;
    CHECK(cottonlab_spec_load("hyperbolic", &spec) == COTTONLAB_OK);
    const double p[3] = {0.1, 0.2, 1.3};
    double scal = 0.0;
    CHECK(cottonlab_scalar_curvature(spec, p, &scal) == COTTONLAB_OK);
    CHECK(fabs(scal + 6.0) < 1e-10);

    char *json = NULL;
    CHECK(cottonlab_curvature_json(spec, p, &json) == COTTONLAB_OK);
    CHECK(strstr(json, "\"scal\"") != NULL);
    cottonlab_string_free(json);

    const double outside[3] = {0.0, 0.0, 9.0};
    CottonlabStatus s = cottonlab_scalar_curvature(spec, outside, &scal);
    CHECK(s == COTTONLAB_ERR_DOMAIN);
    CHECK(strcmp(cottonlab_status_name(s), "DomainError") == 0);
    CHECK(strlen(cottonlab_last_error()) > 0);
    cottonlab_spec_free(spec);

    puts("ok");
    return 0;
}
