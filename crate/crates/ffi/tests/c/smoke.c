#include <stdio.h>
#include <string.h>
#include "orbitlab.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "line %d: %s failed\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    OrbitlabDiscreteSeries *ds = NULL;
    CHECK(orbitlab_ds_new(2, -6, &ds) == ORBITLAB_STATUS_OK);

    OrbitlabBranching *br = NULL;
    CHECK(orbitlab_branch_b(ds, 5, &br) == ORBITLAB_STATUS_OK);
    size_t len = 0;
    bool admissible = false;
    CHECK(orbitlab_branching_info(br, &len, &admissible) == ORBITLAB_STATUS_OK);
    CHECK(len == 2 && admissible);
    bool has_m;
    int64_t m;
    int32_t sign;
    uint64_t mult;
    CHECK(orbitlab_branching_entry(br, 0, &has_m, &m, &sign, &mult) == ORBITLAB_STATUS_OK);
    CHECK(has_m && m == 6 && sign == -1 && mult == 1);
    orbitlab_branching_free(br);

    double v = 0.0;
    CHECK(orbitlab_reduced_volume(2.0, -6.0, 2000, &v) == ORBITLAB_STATUS_OK);
    CHECK(v > 2.0 - 1e-8 && v < 2.0 + 1e-8);
    CHECK(orbitlab_reduced_volume(3.0, 1.0, 2000, &v) == ORBITLAB_STATUS_INVALID_PARAMETER);
    CHECK(orbitlab_last_error() != NULL);

    OrbitlabDiscreteSeries *bad = NULL;
    CHECK(orbitlab_ds_new(3, 2, &bad) == ORBITLAB_STATUS_INVALID_PARAMETER);
    CHECK(bad == NULL);

    orbitlab_ds_free(ds);
    CHECK(orbitlab_ds_new(3, 1, &ds) == ORBITLAB_STATUS_OK);
    OrbitlabSystem *sys = NULL;
    CHECK(orbitlab_system_build(ds, 4, -1, &sys) == ORBITLAB_STATUS_OK);
    size_t dim = 99;
    OrbitlabConfig cfg = orbitlab_config_default();
    CHECK(orbitlab_l2_dimension(sys, &cfg, &dim) == ORBITLAB_STATUS_OK);
    CHECK(dim == 1);
    orbitlab_system_free(sys);
    orbitlab_ds_free(ds);

    printf("ok %s\n", orbitlab_version());
    return 0;
}
