#include "qcoherence.h"
#include <stdio.h>
int main(void) {
  QcState *s = NULL; QcReport *r = NULL; QcBoundSummary sum;
  if (qc_state_reference_example(&s) != QC_STATUS_OK) return 1;
  if (qc_best_bound(s, 2.0, 1.0, 1e-9, &r) != QC_STATUS_OK) return 2;
  qc_report_summary(r, &sum);
  printf("m=%zu k=%.17g rhs=%.17g lhs=%.17g\n", sum.m, sum.k, sum.rhs_theorem, sum.lhs);
  qc_report_free(r); qc_state_free(s);
  return 0;
}
