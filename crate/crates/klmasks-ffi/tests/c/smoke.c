#include <stdio.h>
#include <string.h>

#include "klmasks.h"

int main(void) {
    KlmPerm *x = NULL, *w = NULL;
    if (klm_perm_parse("1234", &x) != KLM_STATUS_OK || klm_perm_parse("4231", &w) != KLM_STATUS_OK) {
        return 10;
    }
    int64_t coeffs[8];
    size_t len = 0;
    if (klm_kl_polynomial(x, w, coeffs, 8, &len) != KLM_STATUS_OK || len != 2 || coeffs[0] != 1 || coeffs[1] != 1) {
        return 11;
    }
    KlmMaskSet *set = NULL;
    if (klm_construction1_new(w, KLM_STEP_VARIANT_UP_STEPS, &set) != KLM_STATUS_OK) {
        return 12;
    }
    bool passed = false;
    if (klm_mask_set_len(set) != 24 || klm_mask_set_deodhar(set, &passed) != KLM_STATUS_OK || !passed) {
        return 13;
    }
    char *json = NULL;
    if (klm_mask_set_to_json(set, &json) != KLM_STATUS_OK || strstr(json, "\"masks\"") == NULL) {
        return 14;
    }
    klm_string_free(json);
    KlmPerm *bad = NULL;
    if (klm_perm_parse("112", &bad) != KLM_STATUS_PARSE || klm_last_error() == NULL) {
        return 15;
    }
    klm_mask_set_free(set);
    klm_perm_free(x);
    klm_perm_free(w);
    puts("ok");
    return 0;
}
