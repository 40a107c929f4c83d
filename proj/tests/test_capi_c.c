/* Compile-as-C check of the public header plus a minimal end-to-end run. */

#include <stdio.h>
#include <string.h>

#include "fragmap/fragmap.h"

int main(void)
{
    fragmap_instance* inst = NULL;
    fragmap_solutions* sols = NULL;
    fragmap_options opts;
    int mapping[4];
    int i, mapped = 0;

    if (fragmap_instance_generate(4, 9, 25, 26, 2024, &inst) != FRAGMAP_OK) {
        fprintf(stderr, "generate failed: %s\n", fragmap_last_error());
        return 1;
    }
    fragmap_options_init(&opts);
    opts.nlink = 2;
    if (fragmap_solve(inst, &opts, &sols) != FRAGMAP_OK) {
        fprintf(stderr, "solve failed: %s\n", fragmap_last_error());
        return 1;
    }
    if (fragmap_solutions_outcome(sols) != FRAGMAP_PROVEN_OPTIMAL) {
        fprintf(stderr, "expected a proven optimum\n");
        return 1;
    }
    if (fragmap_solutions_mapping(sols, 0, mapping, 4) != FRAGMAP_OK)
        return 1;
    for (i = 0; i < 4; ++i)
        mapped += mapping[i] >= 0;
    if (mapped != 2) {
        fprintf(stderr, "expected 2 mapped fragments, got %d\n", mapped);
        return 1;
    }
    printf("c api ok: cost %ld\n", fragmap_solutions_cost(sols, 0));
    fragmap_solutions_free(sols);
    fragmap_instance_free(inst);
    return 0;
}
