#include <stdio.h>
#include "fracbvp.h"

int main(void) {
    FbvpProblem *p = NULL;
    FbvpSolution *s = NULL;
    double y[16], eta, res;
    size_t n, it;

    if (fbvp_problem_new(1.5, 3, "t", "1/(y+20)", &p) != FBVP_STATUS_OK) {
        fprintf(stderr, "%s\n", fbvp_last_error_message());
        return 1;
    }
    if (fbvp_solve(p, 0.0, 0, 1.0, &s) != FBVP_STATUS_OK) {
        fprintf(stderr, "%s\n", fbvp_last_error_message());
        return 1;
    }
    fbvp_solution_len(s, &n);
    fbvp_solution_values(s, y, 16);
    fbvp_solution_summary(s, &eta, &res, &it);
    for (size_t i = 0; i < n; i++)
        printf("%zu %.10f\n", i, y[i]);
    printf("eta %.10f residual %.3e iterations %zu\n", eta, res, it);

    if (fbvp_lambda_constant(0.5, 3, &eta) != FBVP_STATUS_OK)
        printf("error: %s\n", fbvp_last_error_message());

    fbvp_solution_free(s);
    fbvp_problem_free(p);
    return 0;
}
