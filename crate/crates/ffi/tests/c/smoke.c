#include <math.h>
#include <stdio.h>
#include "tfb.h"

int main(void) {
    TfbMass *m = NULL;
    const char *doc = "{\"frame\":[\"A\",\"B\"],\"masses\":{\"A\":0.2,\"B\":0.2,\"A,B\":0.6}}";
    if (tfb_mass_from_json(doc, &m) != TFB_STATUS_OK) return 1;
    double deng = 0, volume = 0;
    if (tfb_deng_entropy(m, &deng) != TFB_STATUS_OK) return 2;
    if (tfb_hoivmf_value(2, 1, &volume) != TFB_STATUS_OK) return 3;
    if (fabs(deng - volume) > 1e-12) return 4;
    double seq[16];
    size_t len = 0;
    if (tfb_deng_volume(m, 1e-3, 100, seq, 16, &len) != TFB_STATUS_OK || len != 14) return 5;
    if (tfb_tfb_entropy(m, 0, &deng) != TFB_STATUS_INVALID_ORDER) return 6;
    char msg[128];
    if (tfb_last_error(msg, sizeof msg) == 0) return 7;
    tfb_mass_free(m);
    printf("%.4f\n", seq[len - 1]);
    return 0;
}
